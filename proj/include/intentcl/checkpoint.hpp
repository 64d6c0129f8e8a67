#pragma once

#include <filesystem>
#include <optional>

#include "intentcl/model.hpp"
#include "intentcl/vocabulary.hpp"

namespace intentcl {

// Binary layout, all integers and floats little-endian:
//   "ICLCKPT\0"  u32 version  u32 flags (bit 0: self-attention)
//   u64 vocab_size  u64 d_emb  u32 depth  depth x u64 projector output dims
//   vocab_size x (u32 byte length, UTF-8 bytes)
//   f64 arrays, row-major: embedding, [query, key, value], (weight, bias)...
//   u64 FNV-1a checksum of every preceding byte
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    ModelParams<double> params;
    Vocabulary vocab;
};

void save_checkpoint(const ModelParams<double>& params, const Vocabulary& vocab, const std::filesystem::path& path);

/// Throws VersionError on bad magic/version, DataError on truncation or
/// checksum failure, DimensionError when `expected` disagrees with the file.
Checkpoint load_checkpoint(const std::filesystem::path& path, const std::optional<ModelShape>& expected = std::nullopt);

}  // namespace intentcl
