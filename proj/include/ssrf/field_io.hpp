// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string_view>

#include "ssrf/simulate.hpp"

namespace ssrf {

// SSTF1 binary layout (little-endian, no padding beyond the magic):
//
//   char[8]   "SSTF1\0\0\0"
//   uint32    d
//   uint32    n                  points per axis
//   float64   spacing
//   uint64    n_times
//   float64   eta0, eta1, xi, mu, noise_d
//   uint64    seed
//   float64   times[n_times]
//   float64   values[n_times][n^d]
//
// A JSON sidecar "<path>.json" repeats the header fields in readable form.

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Writes the binary file and its sidecar, both atomically.
void write_field(const std::filesystem::path& path, const FieldGrid& field);

/// Reads a binary file written by write_field. Throws InvalidParameter on a
/// malformed or truncated file.
FieldGrid read_field(const std::filesystem::path& path);

} // namespace ssrf
