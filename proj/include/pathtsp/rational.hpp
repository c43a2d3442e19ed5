#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace pathtsp {

/// Exact rational number. All lengths, LP values and cut loads are Rat;
/// floating point only appears in the reporting layer.
using Rat = mpq_class;

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string rat_to_string(const Rat& r);

/// Parses "p", "p/q" or a plain decimal ("12.75" -> 51/4). Throws ParseError.
Rat rat_from_string(std::string_view text);

inline double rat_to_double(const Rat& r) { return r.get_d(); }

/// Bits of the larger of |numerator| and denominator.
std::size_t rat_bits(const Rat& r);

/// Default guard for coefficient growth in exact LP pivoting.
inline constexpr std::size_t kDefaultRationalBitLimit = 4096;

/// Nearest integer to sqrt(squared), half-up, computed exactly.
/// This is the TSPLIB EUC_2D rounding applied to an exact squared distance.
long rounded_sqrt(const Rat& squared);

/// Deterministic 64-bit stream splitter (splitmix64 step) used to derive
/// independent seeds for instances, trials and workers.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

}  // namespace pathtsp
