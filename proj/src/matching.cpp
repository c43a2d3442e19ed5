#include "pathtsp/matching.hpp"

#include <algorithm>
#include <cassert>

#include "pathtsp/errors.hpp"

namespace pathtsp {

namespace {

// Primal-dual blossom matching in the classical formulation where vertex
// duals, slacks and deltas are kept pre-multiplied by two so that all
// quantities stay in the same lattice as the weights. Vertices are
// 0..n-1, blossom ids n..2n-1. Edge endpoints are encoded as 2k / 2k+1 for
// edge k.
class BlossomMatcher {
 public:
  BlossomMatcher(int n, const std::vector<std::tuple<int, int, Rat>>& edges)
      : n_(n), edges_(edges) {
    int m = static_cast<int>(edges_.size());
    endpoint_.resize(2 * m);
    neighbend_.assign(n_, {});
    for (int k = 0; k < m; ++k) {
      auto& [i, j, w] = edges_[k];
      if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw InvariantError("matching edge endpoints out of range");
      (void)w;
      endpoint_[2 * k] = i;
      endpoint_[2 * k + 1] = j;
      neighbend_[i].push_back(2 * k + 1);
      neighbend_[j].push_back(2 * k);
    }

    Rat maxweight = 0;
    for (const auto& [i, j, w] : edges_)
      if (w > maxweight) maxweight = w;

    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * n_, -1);
    blossomchilds_.assign(2 * n_, {});
    blossombase_.resize(2 * n_);
    for (int v = 0; v < n_; ++v) blossombase_[v] = v;
    for (int b = n_; b < 2 * n_; ++b) blossombase_[b] = -1;
    blossomendps_.assign(2 * n_, {});
    bestedge_.assign(2 * n_, -1);
    blossombestedges_.assign(2 * n_, {});
    has_bestedges_.assign(2 * n_, false);
    for (int b = 2 * n_ - 1; b >= n_; --b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * n_, Rat(0));
    for (int v = 0; v < n_; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(m, false);
  }

  std::vector<int> run() {
    for (int stage = 0; stage < n_; ++stage)
      if (!run_stage()) break;
    std::vector<int> mate(n_, -1);
    for (int v = 0; v < n_; ++v)
      if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
    for (int v = 0; v < n_; ++v)
      if (mate[v] >= 0 && mate[mate[v]] != v)
        throw InvariantError("matching is not symmetric");
    return mate;
  }

 private:
  Rat slack(int k) const {
    const auto& [i, j, w] = edges_[k];
    return dualvar_[i] + dualvar_[j] - 2 * w;
  }

  void blossom_leaves(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
    } else {
      for (int child : blossomchilds_[b]) blossom_leaves(child, out);
    }
  }

  void assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    assert(label_[w] == 0 && label_[b] == 0);
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      blossom_leaves(b, queue_);
    } else if (t == 2) {
      int base = blossombase_[b];
      assert(mate_[base] >= 0);
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  // Trace back from both endpoints of an S-S edge; returns the common base
  // vertex (a new blossom closes) or -1 (an augmenting path was found).
  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      assert(label_[b] == 1);
      path.push_back(b);
      label_[b] = 5;
      assert(labelend_[b] ==
             (blossombase_[b] >= 0 ? mate_[blossombase_[b]] : -1));
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        assert(label_[b] == 2);
        assert(labelend_[b] >= 0);
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = std::get<0>(edges_[k]);
    int w = std::get<1>(edges_[k]);
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];

    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;

    std::vector<int>& path = blossomchilds_[b];
    std::vector<int>& endps = blossomendps_[b];
    path.clear();
    endps.clear();

    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      assert(label_[bv] == 2 ||
             (label_[bv] == 1 && labelend_[bv] == mate_[blossombase_[bv]]));
      assert(labelend_[bv] >= 0);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);

    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      assert(label_[bw] == 2 ||
             (label_[bw] == 1 && labelend_[bw] == mate_[blossombase_[bw]]));
      assert(labelend_[bw] >= 0);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }

    assert(label_[bb] == 1);
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;

    std::vector<int> leaves;
    blossom_leaves(b, leaves);
    for (int leaf : leaves) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }

    // recompute least-slack edges toward other S-blossoms
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int child : path) {
      std::vector<std::vector<int>> nblists;
      if (!has_bestedges_[child]) {
        std::vector<int> child_leaves;
        blossom_leaves(child, child_leaves);
        for (int leaf : child_leaves) {
          nblists.emplace_back();
          for (int p : neighbend_[leaf]) nblists.back().push_back(p / 2);
        }
      } else {
        nblists.push_back(blossombestedges_[child]);
      }
      for (const auto& nblist : nblists) {
        for (int edge : nblist) {
          int i = std::get<0>(edges_[edge]);
          int j = std::get<1>(edges_[edge]);
          if (inblossom_[j] == b) std::swap(i, j);
          int bj = inblossom_[j];
          if (bj != b && label_[bj] == 1 &&
              (bestedgeto[bj] == -1 || slack(edge) < slack(bestedgeto[bj])))
            bestedgeto[bj] = edge;
        }
      }
      blossombestedges_[child].clear();
      has_bestedges_[child] = false;
      bestedge_[child] = -1;
    }
    blossombestedges_[b].clear();
    for (int edge : bestedgeto)
      if (edge != -1) blossombestedges_[b].push_back(edge);
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (int edge : blossombestedges_[b])
      if (bestedge_[b] == -1 || slack(edge) < slack(bestedge_[b]))
        bestedge_[b] = edge;
  }

  void expand_blossom(int b, bool endstage) {
    for (std::size_t ci = 0; ci < blossomchilds_[b].size(); ++ci) {
      int s = blossomchilds_[b][ci];
      blossomparent_[s] = -1;
      if (s < n_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        std::vector<int> leaves;
        blossom_leaves(s, leaves);
        for (int leaf : leaves) inblossom_[leaf] = s;
      }
    }

    if (!endstage && label_[b] == 2) {
      assert(labelend_[b] >= 0);
      int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = static_cast<int>(
          std::find(blossomchilds_[b].begin(), blossomchilds_[b].end(),
                    entrychild) -
          blossomchilds_[b].begin());
      int jstep, endptrick;
      int len = static_cast<int>(blossomchilds_[b].size());
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      auto child_at = [&](int idx) {
        return blossomchilds_[b][(idx % len + len) % len];
      };
      auto endp_at = [&](int idx) {
        return blossomendps_[b][(idx % len + len) % len];
      };
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[endp_at(j - endptrick) ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[endp_at(j - endptrick) / 2] = true;
        j += jstep;
        p = endp_at(j - endptrick) ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      int bv = child_at(j);
      label_[endpoint_[p ^ 1]] = 2;
      label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = p;
      labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (child_at(j) != entrychild) {
        bv = child_at(j);
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        std::vector<int> leaves;
        blossom_leaves(bv, leaves);
        int reached = -1;
        for (int leaf : leaves)
          if (label_[leaf] != 0) {
            reached = leaf;
            break;
          }
        if (reached >= 0) {
          assert(label_[reached] == 2);
          assert(inblossom_[reached] == bv);
          label_[reached] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(reached, 2, labelend_[reached]);
        }
        j += jstep;
      }
    }

    label_[b] = 0;
    labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= n_) augment_blossom(t, v);

    int len = static_cast<int>(blossomchilds_[b].size());
    int i = static_cast<int>(
        std::find(blossomchilds_[b].begin(), blossomchilds_[b].end(), t) -
        blossomchilds_[b].begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    auto child_at = [&](int idx) {
      return blossomchilds_[b][(idx % len + len) % len];
    };
    auto endp_at = [&](int idx) {
      return blossomendps_[b][(idx % len + len) % len];
    };
    while (j != 0) {
      j += jstep;
      t = child_at(j);
      int p = endp_at(j - endptrick) ^ endptrick;
      if (t >= n_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = child_at(j);
      if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(blossomchilds_[b].begin(), blossomchilds_[b].begin() + i,
                blossomchilds_[b].end());
    std::rotate(blossomendps_[b].begin(), blossomendps_[b].begin() + i,
                blossomendps_[b].end());
    blossombase_[b] = blossombase_[blossomchilds_[b][0]];
  }

  void augment_matching(int k) {
    int v = std::get<0>(edges_[k]);
    int w = std::get<1>(edges_[k]);
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
      while (true) {
        int bs = inblossom_[s];
        assert(label_[bs] == 1);
        assert(labelend_[bs] ==
               (blossombase_[bs] >= 0 ? mate_[blossombase_[bs]] : -1));
        if (bs >= n_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        int t = endpoint_[labelend_[bs]];
        int bt = inblossom_[t];
        assert(label_[bt] == 2);
        assert(labelend_[bt] >= 0);
        s = endpoint_[labelend_[bt]];
        int j = endpoint_[labelend_[bt] ^ 1];
        assert(blossombase_[bt] == t);
        if (bt >= n_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  // One stage: grow alternating trees until the matching augments or the
  // duals certify optimality. Returns false when no augmentation exists.
  bool run_stage() {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n_; b < 2 * n_; ++b) {
      blossombestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();

    for (int v = 0; v < n_; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        int v = queue_.back();
        queue_.pop_back();
        assert(label_[inblossom_[v]] == 1);
        for (int p : neighbend_[v]) {
          int k = p / 2;
          int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          Rat kslack;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              assert(label_[inblossom_[w]] == 2);
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b]))
              bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w]))
              bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      // dual adjustment
      int deltatype = -1;
      Rat delta;
      int deltaedge = -1;
      int deltablossom = -1;

      deltatype = 1;
      delta = dualvar_[0];
      for (int v = 1; v < n_; ++v)
        if (dualvar_[v] < delta) delta = dualvar_[v];

      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          Rat d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = std::move(d);
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n_; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          Rat d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) {
            delta = std::move(d);
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 &&
            label_[b] == 2 && (deltatype == -1 || dualvar_[b] < delta)) {
          delta = dualvar_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }

      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 1) dualvar_[v] -= delta;
        else if (label_[inblossom_[v]] == 2) dualvar_[v] += delta;
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1) dualvar_[b] += delta;
          else if (label_[b] == 2) dualvar_[b] -= delta;
        }
      }

      if (deltatype == 1) {
        break;  // dual optimum; no augmenting path exists
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        int i = std::get<0>(edges_[deltaedge]);
        int j = std::get<1>(edges_[deltaedge]);
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        assert(label_[inblossom_[i]] == 1);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        int i = std::get<0>(edges_[deltaedge]);
        assert(label_[inblossom_[i]] == 1);
        queue_.push_back(i);
      } else {
        expand_blossom(deltablossom, false);
      }
    }

    if (!augmented) return false;

    // expand S-blossoms whose dual dropped to zero
    for (int b = n_; b < 2 * n_; ++b)
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
          dualvar_[b] == 0)
        expand_blossom(b, true);
    return true;
  }

  int n_;
  std::vector<std::tuple<int, int, Rat>> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<Rat> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

}  // namespace

std::vector<int> max_weight_matching(
    int n, const std::vector<std::tuple<int, int, Rat>>& edges) {
  if (n == 0 || edges.empty()) return std::vector<int>(n, -1);
  BlossomMatcher matcher(n, edges);
  return matcher.run();
}

std::vector<VertexPair> min_weight_perfect_matching(
    const MetricInstance& inst, const std::vector<int>& verts) {
  if (verts.size() % 2 != 0)
    throw InvariantError("perfect matching needs an even vertex set");
  if (verts.empty()) return {};

  int q = static_cast<int>(verts.size());
  Rat max_len = 0;
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      max_len = std::max(max_len, inst.length(verts[i], verts[j]));
  Rat big = max_len + 1;

  std::vector<std::tuple<int, int, Rat>> edges;
  edges.reserve(q * (q - 1) / 2);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      edges.emplace_back(i, j, big - inst.length(verts[i], verts[j]));

  std::vector<int> mate = max_weight_matching(q, edges);
  std::vector<VertexPair> out;
  for (int i = 0; i < q; ++i) {
    if (mate[i] < 0)
      throw InvariantError(
          "blossom matching left a vertex unmatched on a complete even "
          "graph");
    if (mate[i] > i) out.emplace_back(verts[i], verts[mate[i]]);
  }
  return out;
}

}  // namespace pathtsp
