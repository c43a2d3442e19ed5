#include "pathtsp/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "pathtsp/errors.hpp"

namespace pathtsp {

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat rat_from_string(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty number");
  auto slash = s.find('/');
  auto dot = s.find('.');
  try {
    if (slash != std::string::npos) {
      mpz_class num(s.substr(0, slash));
      mpz_class den(s.substr(slash + 1));
      if (den == 0) throw ParseError("zero denominator in '" + s + "'");
      Rat r(num, den);
      r.canonicalize();
      return r;
    }
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::size_t frac_len = s.size() - dot - 1;
      if (digits.empty() || digits == "-" || digits == "+")
        throw ParseError("malformed number '" + s + "'");
      mpz_class num(digits);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
      Rat r(num, den);
      r.canonicalize();
      return r;
    }
    return Rat(mpz_class(s));
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed number '" + s + "'");
  }
}

std::size_t rat_bits(const Rat& r) {
  std::size_t nb = mpz_sizeinbase(r.get_num().get_mpz_t(), 2);
  std::size_t db = mpz_sizeinbase(r.get_den().get_mpz_t(), 2);
  return std::max(nb, db);
}

long rounded_sqrt(const Rat& squared) {
  if (squared < 0) throw std::logic_error("rounded_sqrt of negative value");
  // k = floor(sqrt(q) + 1/2), i.e. the unique k >= 0 with
  // (2k-1)^2 <= 4q (for k >= 1) and 4q < (2k+1)^2.
  mpz_class approx;
  mpz_class floor_q = squared.get_num() / squared.get_den();
  mpz_sqrt(approx.get_mpz_t(), floor_q.get_mpz_t());
  Rat four_q = 4 * squared;
  long k = std::max(0L, approx.get_si() - 2);
  while (true) {
    mpz_class hi = 2 * k + 1;
    if (four_q < Rat(hi * hi)) return k;
    ++k;
  }
}

std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pathtsp
