#include "pathtsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "pathtsp/errors.hpp"

namespace pathtsp {

namespace {

const Rat kZero = 0;

std::string triple_text(int u, int v, int w) {
  std::ostringstream os;
  os << "(" << u << "," << v << "," << w << ")";
  return os.str();
}

}  // namespace

const Rat& EdgeVector::value(VertexPair e) const {
  auto it = values_.find(e);
  return it == values_.end() ? kZero : it->second;
}

void EdgeVector::set(VertexPair e, Rat v) {
  v.canonicalize();
  if (v < 0) throw InvariantError("EdgeVector entries must be nonnegative");
  if (v == 0) {
    values_.erase(e);
  } else {
    values_[e] = std::move(v);
  }
}

void EdgeVector::add(VertexPair e, const Rat& v) {
  auto it = values_.find(e);
  Rat next = (it == values_.end() ? kZero : it->second) + v;
  set(e, std::move(next));
}

Rat EdgeVector::load(std::uint64_t side) const {
  Rat total = 0;
  for (const auto& [e, v] : values_) {
    bool ina = (side >> e.a) & 1ULL;
    bool inb = (side >> e.b) & 1ULL;
    if (ina != inb) total += v;
  }
  return total;
}

EdgeVector& EdgeVector::operator+=(const EdgeVector& other) {
  for (const auto& [e, v] : other.values_) add(e, v);
  return *this;
}

EdgeVector EdgeVector::scaled(const Rat& factor) const {
  if (factor < 0) throw InvariantError("EdgeVector scale must be nonnegative");
  EdgeVector out;
  if (factor == 0) return out;
  for (const auto& [e, v] : values_) out.values_[e] = v * factor;
  return out;
}

EdgeVector indicator(const std::vector<VertexPair>& edges) {
  EdgeVector out;
  for (const auto& e : edges) out.add(e, 1);
  return out;
}

Rat vector_length(const MetricInstance& inst, const EdgeVector& x) {
  Rat total = 0;
  for (const auto& [e, v] : x.entries()) total += v * inst.length(e);
  return total;
}

InstanceFamily family_from_string(std::string_view name) {
  if (name == "euclidean-grid") return InstanceFamily::EuclideanGrid;
  if (name == "random-euclidean") return InstanceFamily::RandomEuclidean;
  if (name == "graph-metric") return InstanceFamily::GraphMetric;
  throw ParseError("unknown instance family '" + std::string(name) + "'");
}

std::string family_to_string(InstanceFamily family) {
  switch (family) {
    case InstanceFamily::EuclideanGrid: return "euclidean-grid";
    case InstanceFamily::RandomEuclidean: return "random-euclidean";
    case InstanceFamily::GraphMetric: return "graph-metric";
  }
  return "?";
}

MetricInstance MetricInstance::from_lengths(int n, std::vector<Rat> lengths,
                                            int s, int t, std::string name) {
  if (n < 2) throw ParseError("instance needs at least 2 vertices");
  if (n > kMaxVertices)
    throw ResourceError("instance has " + std::to_string(n) +
                        " vertices; the supported maximum is 64");
  if (lengths.size() != static_cast<std::size_t>(n) * n)
    throw ParseError("length matrix size mismatch");
  if (s < 0 || s >= n || t < 0 || t >= n)
    throw ParseError("endpoint out of range");
  if (s == t) throw ParseError("source and sink must differ");
  for (Rat& v : lengths) v.canonicalize();

  for (int u = 0; u < n; ++u) {
    if (lengths[u * n + u] != 0)
      throw ParseError("nonzero diagonal at vertex " + std::to_string(u));
    for (int v = u + 1; v < n; ++v) {
      if (lengths[u * n + v] < 0)
        throw ParseError("negative length on edge (" + std::to_string(u) +
                         "," + std::to_string(v) + ")");
      if (lengths[u * n + v] != lengths[v * n + u])
        throw ParseError("asymmetric lengths on edge (" + std::to_string(u) +
                         "," + std::to_string(v) + ")");
    }
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      for (int w = 0; w < n; ++w) {
        if (w == u || w == v) continue;
        if (lengths[u * n + w] > lengths[u * n + v] + lengths[v * n + w])
          throw ParseError("triangle inequality violated at " +
                           triple_text(u, v, w));
      }
    }

  MetricInstance inst;
  inst.n_ = n;
  inst.s_ = s;
  inst.t_ = t;
  inst.name_ = std::move(name);
  inst.lengths_ = std::move(lengths);
  return inst;
}

namespace {

void metric_closure(int n, std::vector<Rat>& d) {
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        Rat via = d[i * n + k] + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = std::move(via);
      }
    }
}

struct TsplibHeader {
  std::string name = "unnamed";
  int dimension = -1;
  std::string weight_type;
  std::string weight_format;
};

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

}  // namespace

MetricInstance MetricInstance::parse_tsplib(std::string_view text, int s,
                                            int t, const ParseOptions& opts) {
  TsplibHeader header;
  std::vector<std::pair<Rat, Rat>> coords;
  std::vector<Rat> weights;
  bool have_coords = false;
  bool have_weights = false;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    std::string key =
        trim(colon == std::string::npos ? line : line.substr(0, colon));
    std::string value =
        colon == std::string::npos ? "" : trim(line.substr(colon + 1));

    if (key == "NAME") {
      header.name = value;
    } else if (key == "TYPE") {
      if (value != "TSP")
        throw ParseError("unsupported TYPE '" + value + "' (expected TSP)");
    } else if (key == "COMMENT") {
      // tolerated and ignored
    } else if (key == "DIMENSION") {
      header.dimension = std::stoi(value);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      header.weight_type = value;
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      header.weight_format = value;
    } else if (key == "NODE_COORD_SECTION") {
      if (header.dimension <= 0)
        throw ParseError("NODE_COORD_SECTION before DIMENSION");
      coords.assign(header.dimension, {0, 0});
      std::vector<bool> seen(header.dimension, false);
      for (int i = 0; i < header.dimension; ++i) {
        std::string id_tok, x_tok, y_tok;
        if (!(in >> id_tok >> x_tok >> y_tok))
          throw ParseError("truncated NODE_COORD_SECTION");
        int id = std::stoi(id_tok);
        int idx = id - 1;  // TSPLIB ids are 1-based; 0-based tolerated
        if (idx < 0 || idx >= header.dimension) idx = id;
        if (idx < 0 || idx >= header.dimension || seen[idx])
          throw ParseError("bad node id '" + id_tok + "' in coord section");
        seen[idx] = true;
        coords[idx] = {rat_from_string(x_tok), rat_from_string(y_tok)};
      }
      have_coords = true;
      std::getline(in, line);  // consume rest of last coord line
    } else if (key == "EDGE_WEIGHT_SECTION") {
      if (header.dimension <= 0)
        throw ParseError("EDGE_WEIGHT_SECTION before DIMENSION");
      std::size_t count;
      int n = header.dimension;
      if (header.weight_format == "FULL_MATRIX")
        count = static_cast<std::size_t>(n) * n;
      else if (header.weight_format == "UPPER_ROW")
        count = static_cast<std::size_t>(n) * (n - 1) / 2;
      else
        throw ParseError("EDGE_WEIGHT_SECTION without a supported "
                         "EDGE_WEIGHT_FORMAT");
      weights.reserve(count);
      std::string tok;
      for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> tok)) throw ParseError("truncated EDGE_WEIGHT_SECTION");
        weights.push_back(rat_from_string(tok));
      }
      have_weights = true;
      std::getline(in, line);
    } else if (key == "EOF") {
      break;
    } else {
      throw ParseError("unsupported keyword '" + key + "'");
    }
  }

  if (header.dimension < 2) throw ParseError("missing or bad DIMENSION");
  int n = header.dimension;
  std::vector<Rat> lengths(static_cast<std::size_t>(n) * n, Rat(0));

  if (header.weight_type == "EUC_2D") {
    if (!have_coords) throw ParseError("EUC_2D without NODE_COORD_SECTION");
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        Rat dx = coords[u].first - coords[v].first;
        Rat dy = coords[u].second - coords[v].second;
        Rat d(rounded_sqrt(dx * dx + dy * dy));
        lengths[u * n + v] = d;
        lengths[v * n + u] = d;
      }
  } else if (header.weight_type == "EXPLICIT") {
    if (!have_weights) throw ParseError("EXPLICIT without EDGE_WEIGHT_SECTION");
    if (header.weight_format == "FULL_MATRIX") {
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          lengths[u * n + v] = weights[static_cast<std::size_t>(u) * n + v];
    } else {  // UPPER_ROW
      std::size_t k = 0;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
          lengths[u * n + v] = weights[k];
          lengths[v * n + u] = weights[k];
          ++k;
        }
    }
  } else if (header.weight_type.empty()) {
    throw ParseError("missing EDGE_WEIGHT_TYPE");
  } else {
    throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + header.weight_type +
                     "'");
  }

  if (opts.metric_closure) metric_closure(n, lengths);
  return from_lengths(n, std::move(lengths), s, t, header.name);
}

namespace {

std::vector<Rat> grid_lengths(int n) {
  int side = 1;
  while (side * side < n) ++side;
  std::vector<std::pair<long, long>> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = {i % side, i / side};
  std::vector<Rat> d(static_cast<std::size_t>(n) * n, Rat(0));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      long dx = pts[u].first - pts[v].first;
      long dy = pts[u].second - pts[v].second;
      Rat w(rounded_sqrt(Rat(dx * dx + dy * dy)));
      d[u * n + v] = w;
      d[v * n + u] = w;
    }
  return d;
}

std::vector<Rat> random_euclidean_lengths(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  constexpr long kBox = 1000;
  std::vector<std::pair<long, long>> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n) {
    long x = static_cast<long>(rng() % (kBox + 1));
    long y = static_cast<long>(rng() % (kBox + 1));
    if (std::find(pts.begin(), pts.end(), std::make_pair(x, y)) == pts.end())
      pts.emplace_back(x, y);
  }
  std::vector<Rat> d(static_cast<std::size_t>(n) * n, Rat(0));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      long dx = pts[u].first - pts[v].first;
      long dy = pts[u].second - pts[v].second;
      Rat w(rounded_sqrt(Rat(dx * dx + dy * dy)));
      d[u * n + v] = w;
      d[v * n + u] = w;
    }
  return d;
}

std::vector<Rat> graph_metric_lengths(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> adj(n);
  auto connect = [&](int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  };
  // random spanning tree by attachment, then a few extra unit edges
  for (int v = 1; v < n; ++v) connect(static_cast<int>(rng() % v), v);
  int extra = n / 2;
  for (int k = 0; k < extra; ++k) {
    int u = static_cast<int>(rng() % n);
    int v = static_cast<int>(rng() % n);
    if (u == v) continue;
    if (std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) continue;
    connect(u, v);
  }
  std::vector<Rat> d(static_cast<std::size_t>(n) * n, Rat(0));
  for (int src = 0; src < n; ++src) {
    std::vector<int> dist(n, -1);
    std::deque<int> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    for (int v = 0; v < n; ++v) d[src * n + v] = Rat(dist[v]);
  }
  return d;
}

}  // namespace

MetricInstance MetricInstance::generate(InstanceFamily family, int n,
                                        std::uint64_t seed) {
  if (n < 2) throw ParseError("generate requires n >= 2");
  if (n > kMaxVertices)
    throw ResourceError("generate supports at most 64 vertices");

  std::vector<Rat> lengths;
  switch (family) {
    case InstanceFamily::EuclideanGrid:
      lengths = grid_lengths(n);
      break;
    case InstanceFamily::RandomEuclidean:
      lengths = random_euclidean_lengths(n, seed);
      break;
    case InstanceFamily::GraphMetric:
      lengths = graph_metric_lengths(n, seed);
      break;
  }
  // Integer rounding of Euclidean distances can break the triangle
  // inequality; the shortest-path closure restores it and is the identity
  // on inputs that were already metric.
  if (family != InstanceFamily::GraphMetric) metric_closure(n, lengths);

  std::ostringstream name;
  name << family_to_string(family) << "-n" << n << "-seed" << seed;
  return from_lengths(n, std::move(lengths), 0, n - 1, name.str());
}

std::string MetricInstance::to_tsplib() const {
  std::ostringstream os;
  os << "NAME: " << name_ << "\n";
  os << "TYPE: TSP\n";
  os << "DIMENSION: " << n_ << "\n";
  os << "EDGE_WEIGHT_TYPE: EXPLICIT\n";
  os << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
  os << "EDGE_WEIGHT_SECTION\n";
  for (int u = 0; u < n_; ++u) {
    for (int v = 0; v < n_; ++v) {
      if (v) os << " ";
      os << rat_to_string(length(u, v));
    }
    os << "\n";
  }
  os << "EOF\n";
  return os.str();
}

void validate_path(const MetricInstance& inst, const HamiltonianPath& p) {
  int n = inst.n();
  if (static_cast<int>(p.order.size()) != n)
    throw InvariantError("path does not visit every vertex exactly once");
  std::vector<bool> seen(n, false);
  for (int v : p.order) {
    if (v < 0 || v >= n || seen[v])
      throw InvariantError("path is not a permutation of the vertices");
    seen[v] = true;
  }
  if (p.order.front() != inst.source() || p.order.back() != inst.sink())
    throw InvariantError("path endpoints are not (s, t)");
}

Rat path_length(const MetricInstance& inst, const HamiltonianPath& p) {
  validate_path(inst, p);
  Rat total = 0;
  for (std::size_t i = 0; i + 1 < p.order.size(); ++i)
    total += inst.length(p.order[i], p.order[i + 1]);
  return total;
}

EdgeVector path_vector(const HamiltonianPath& p) {
  EdgeVector out;
  for (std::size_t i = 0; i + 1 < p.order.size(); ++i)
    out.add(VertexPair(p.order[i], p.order[i + 1]), 1);
  return out;
}

}  // namespace pathtsp
