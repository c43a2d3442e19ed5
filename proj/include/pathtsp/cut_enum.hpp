#pragma once

#include <cstdint>
#include <vector>

#include "pathtsp/instance.hpp"
#include "pathtsp/rational.hpp"

namespace pathtsp {

enum class CutEnumMethod { Brute, Contraction, Auto };

CutEnumMethod cut_enum_method_from_string(std::string_view name);
std::string cut_enum_method_to_string(CutEnumMethod m);

struct EnumeratedCut {
  Cut cut;
  Rat load;
};

struct CutEnumStats {
  CutEnumMethod method_used = CutEnumMethod::Brute;
  long trials = 0;
  std::uint64_t seed = 0;
};

/// All s-t cuts whose z-load is strictly below 3, each with its exact load,
/// sorted by (load, members). `Brute` enumerates every s-t cut (n <= 22);
/// `Contraction` runs ceil(trial_factor * n^4 * ln n) randomized
/// capacity-biased contractions of the support graph augmented by a unit
/// {s,t} edge, in which every target cut has load below twice the minimum;
/// `Auto` picks brute for n <= 22. Errors with a witness if some s-t cut has
/// load below 1, which certifies z is not a Held-Karp point.
std::vector<EnumeratedCut> enumerate_b_cuts(const MetricInstance& inst,
                                            const EdgeVector& z,
                                            CutEnumMethod method,
                                            std::uint64_t seed = 0,
                                            double trial_factor = 3.0,
                                            int threads = 1,
                                            CutEnumStats* stats = nullptr);

/// |cuts| <= n^4, the guarantee carried by near-minimum cut counting.
bool verify_cut_count_bound(const MetricInstance& inst,
                            const std::vector<EnumeratedCut>& cuts);

}  // namespace pathtsp
