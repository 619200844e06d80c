#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "clickbait/autodiff.hpp"

namespace clickbait {

// Flat binary layout, little-endian:
//   magic "CBCK" | u32 version | u32 count
//   per parameter: u32 name length | name bytes | u32 rank | u64 dims[rank] | f64 values[]
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ParameterSet& params);
ParameterSet read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const ParameterSet& params);
ParameterSet load_checkpoint(const std::filesystem::path& path);

}  // namespace clickbait
