#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pathtsp/rational.hpp"

namespace pathtsp {

/// Largest supported vertex count; vertex subsets are 64-bit masks.
inline constexpr int kMaxVertices = 64;

/// Unordered vertex pair in canonical (a < b) form; the key type for
/// edge-indexed vectors.
struct VertexPair {
  int a = 0;
  int b = 0;

  VertexPair() = default;
  VertexPair(int u, int v) : a(u < v ? u : v), b(u < v ? v : u) {}

  auto operator<=>(const VertexPair&) const = default;
};

/// An s-t-separating vertex set, stored as the bitmask of the side that
/// contains s. Equality is set equality, so families deduplicate naturally.
struct Cut {
  std::uint64_t members = 0;

  bool contains(int v) const { return (members >> v) & 1ULL; }
  int size() const { return __builtin_popcountll(members); }
  bool subset_of(const Cut& other) const {
    return (members & ~other.members) == 0;
  }

  auto operator<=>(const Cut&) const = default;
};

class MetricInstance;

/// Sparse nonnegative rational vector indexed by edges. Zero entries are
/// never stored, so the key set is exactly the support.
class EdgeVector {
 public:
  const Rat& value(VertexPair e) const;
  bool has(VertexPair e) const { return values_.contains(e); }

  /// Sets an entry; negative values are rejected, zero erases.
  void set(VertexPair e, Rat v);
  void add(VertexPair e, const Rat& v);

  /// Total value on edges with exactly one endpoint in `side`.
  Rat load(std::uint64_t side) const;
  Rat load(const Cut& c) const { return load(c.members); }

  int support_size() const { return static_cast<int>(values_.size()); }
  const std::map<VertexPair, Rat>& entries() const { return values_; }
  bool empty() const { return values_.empty(); }

  EdgeVector& operator+=(const EdgeVector& other);
  EdgeVector scaled(const Rat& factor) const;

  bool operator==(const EdgeVector&) const = default;

 private:
  std::map<VertexPair, Rat> values_;
};

/// Characteristic vector of an edge set.
EdgeVector indicator(const std::vector<VertexPair>& edges);

/// ell(x) = sum over support of x(e) * ell(e).
Rat vector_length(const MetricInstance& inst, const EdgeVector& x);

enum class InstanceFamily { EuclideanGrid, RandomEuclidean, GraphMetric };

InstanceFamily family_from_string(std::string_view name);
std::string family_to_string(InstanceFamily family);

struct ParseOptions {
  /// Replace lengths by their all-pairs shortest-path closure instead of
  /// rejecting a rounded instance that violates the triangle inequality.
  bool metric_closure = false;
};

/// Complete graph with metric rational lengths and designated endpoints.
/// Immutable after construction; safe to share across threads.
class MetricInstance {
 public:
  /// Validates symmetry, zero diagonal, nonnegativity, endpoint sanity and
  /// the triangle inequality (error reported with a witness triple).
  static MetricInstance from_lengths(int n, std::vector<Rat> lengths, int s,
                                     int t, std::string name);

  /// TSPLIB subset: EDGE_WEIGHT_TYPE EUC_2D with NODE_COORD_SECTION, or
  /// EXPLICIT with FULL_MATRIX / UPPER_ROW weights. Endpoints come from the
  /// caller, not the file.
  static MetricInstance parse_tsplib(std::string_view text, int s, int t,
                                     const ParseOptions& opts = {});

  /// Deterministic per (family, n, seed); endpoints are 0 and n-1.
  static MetricInstance generate(InstanceFamily family, int n,
                                 std::uint64_t seed);

  int n() const { return n_; }
  int source() const { return s_; }
  int sink() const { return t_; }
  const std::string& name() const { return name_; }

  const Rat& length(int u, int v) const { return lengths_[u * n_ + v]; }
  const Rat& length(VertexPair e) const { return length(e.a, e.b); }

  std::uint64_t all_vertices_mask() const {
    return n_ == 64 ? ~0ULL : ((1ULL << n_) - 1);
  }

  /// TSPLIB EXPLICIT/FULL_MATRIX document for this instance.
  std::string to_tsplib() const;

 private:
  MetricInstance() = default;

  int n_ = 0;
  int s_ = 0;
  int t_ = 0;
  std::string name_;
  std::vector<Rat> lengths_;  // dense n*n, symmetric, zero diagonal
};

/// Permutation of all vertices with fixed endpoints order[0]=s,
/// order[n-1]=t.
struct HamiltonianPath {
  std::vector<int> order;
};

/// Throws InvariantError if p is not a valid Hamiltonian s-t path for inst.
void validate_path(const MetricInstance& inst, const HamiltonianPath& p);

Rat path_length(const MetricInstance& inst, const HamiltonianPath& p);

/// Characteristic vector of the path's edge set.
EdgeVector path_vector(const HamiltonianPath& p);

}  // namespace pathtsp
