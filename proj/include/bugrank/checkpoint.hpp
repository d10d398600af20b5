#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "bugrank/train.hpp"

namespace bugrank {

inline constexpr int kCheckpointVersion = 1;

// A checkpoint is a directory holding manifest.json and weights.bin; see
// docs/checkpoint_format.md for the tensor order.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& dir);

/// Throws IncompatibleError on a version mismatch or when `expected_vocab_hash`
/// is given and differs, CorruptionError on a short or altered payload.
Checkpoint load_checkpoint(const std::filesystem::path& dir,
                           std::optional<std::uint64_t> expected_vocab_hash = std::nullopt);

/// Short identifier derived from the manifest, reported by the service.
std::string model_version(const Checkpoint& ckpt);

std::string to_hex(std::uint64_t v);

}  // namespace bugrank
