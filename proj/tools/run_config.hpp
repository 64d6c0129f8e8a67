#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "intentcl/trainer.hpp"

namespace intentcl::cli {

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Command line with the entries of any `--config FILE` spliced in right
/// after the subcommand name, as `--key=value`. Later flags win, so explicit
/// flags override the file; unknown keys surface as parse errors.
std::vector<std::string> expand_config(int argc, const char* const* argv);

/// Every option of `sub` with its effective value (explicit, from the config
/// file, or default), keyed by long name.
nlohmann::json resolved_config(const CLI::App& sub);

void add_train_options(CLI::App& sub, TrainConfig& cfg);

/// JSONL metrics, to a file when a path is given and to stdout otherwise.
class MetricsSink {
public:
    explicit MetricsSink(const std::string& path);
    void write(const nlohmann::json& record);

private:
    std::ofstream file_;
    bool to_stdout_;
};

}  // namespace intentcl::cli
