#pragma once

#include <stdexcept>
#include <string>

namespace intentcl {

// Exit-code families used by the command-line tool: usage = 1, data = 2,
// numeric = 3.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Checkpoint header problems: bad magic or unsupported format version.
class VersionError : public DataError {
public:
    using DataError::DataError;
};

class DimensionError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace intentcl
