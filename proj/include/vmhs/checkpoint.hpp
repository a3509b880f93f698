#pragma once

#include <string>

#include "vmhs/dynamics.hpp"

namespace vmhs {

// Binary state snapshot. Layout (little endian):
//   magic "VMHS" | version u32 | n u32 | alpha f64 | nu f64 | t f64 |
//   field count u32 | body | checksum u64
// The body holds u, B, psi in order, each as three component arrays of
// (re, im) f64 pairs in row-major half-spectrum order. The trailer is a
// 64-bit FNV-1a checksum of the body bytes. save -> load is bit-exact.

constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const VoigtState& state, const std::string& path);

// Re-validates solenoidality and zero means of u and B on load.
VoigtState load_checkpoint(const std::string& path);

}  // namespace vmhs
