#pragma once

// Every quantity in the library is expressed in bits and seconds.

namespace wrrnc {

using seconds = double;
using bits = double;
using bits_per_second = double;

inline constexpr double kBitsPerByte = 8.0;

constexpr bits bytes_to_bits(double bytes) { return bytes * kBitsPerByte; }
constexpr seconds microseconds(double us) { return us * 1e-6; }
constexpr double to_microseconds(seconds s) { return s * 1e6; }
constexpr double to_mbps(bits_per_second r) { return r * 1e-6; }

}  // namespace wrrnc
