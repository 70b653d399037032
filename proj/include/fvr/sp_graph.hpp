#pragma once

// The sum-product graph on R x R: vertices are pairs (a,b), and (a,b) ~ (c,d)
// iff a + c = b*d.  The relation is symmetric; a vertex carries a loop iff
// 2a = b^2, and the loop contributes one entry on the adjacency diagonal so
// that every row sums to exactly q^r.
//
// Adjacency is available in two modes: implicit (edge test evaluated on
// demand; works for any ring the codes fit) and materialized (dense
// symmetric 0/1 matrix, capped by vertex count).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fvr/ring.hpp"

namespace fvr {

enum class adjacency_mode { implicit, materialized };

class sp_graph {
 public:
  static constexpr std::uint64_t default_materialize_cap = 4096;

  sp_graph(ring R, adjacency_mode mode, std::uint64_t materialize_cap = default_materialize_cap)
      : ring_(std::move(R)), mode_(mode) {
    order_ = ring_.order();
    n_ = order_ * order_;
    d_ = order_;
    if (mode_ == adjacency_mode::materialized) {
      if (n_ > materialize_cap)
        throw cap_error("materialized adjacency cap exceeded (n=" + std::to_string(n_) +
                        ", cap=" + std::to_string(materialize_cap) + ")");
      adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
      for (std::uint64_t a = 0; a < order_; ++a) {
        for (std::uint64_t b = 0; b < order_; ++b) {
          const std::uint64_t u = a * order_ + b;
          for (std::uint64_t t = 0; t < order_; ++t) {
            const std::uint64_t c = ring_.sub_code(ring_.mul_code(b, t), a);
            adj_[static_cast<std::size_t>(u) * n_ + (c * order_ + t)] = 1;
          }
        }
      }
    }
  }

  const ring& base_ring() const { return ring_; }
  adjacency_mode mode() const { return mode_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t d() const { return d_; }

  std::uint64_t vertex(std::uint64_t a_code, std::uint64_t b_code) const {
    return a_code * order_ + b_code;
  }
  std::uint64_t vertex(ring_elem a, ring_elem b) const {
    return ring_.code(a) * order_ + ring_.code(b);
  }
  std::pair<std::uint64_t, std::uint64_t> coords(std::uint64_t v) const {
    return {v / order_, v % order_};
  }

  // Edge test straight from the defining relation.
  bool edge_test(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const {
    return ring_.add_code(a, c) == ring_.mul_code(b, d);
  }

  bool adjacent(std::uint64_t u, std::uint64_t v) const {
    if (mode_ == adjacency_mode::materialized)
      return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
    return edge_test(u / order_, u % order_, v / order_, v % order_);
  }

  // Neighbors of u = (a,b): (b*t - a, t) for every t in R.
  std::vector<std::uint64_t> neighbors(std::uint64_t u) const {
    const std::uint64_t a = u / order_, b = u % order_;
    std::vector<std::uint64_t> out;
    out.reserve(order_);
    for (std::uint64_t t = 0; t < order_; ++t)
      out.push_back(ring_.sub_code(ring_.mul_code(b, t), a) * order_ + t);
    return out;
  }

  bool has_loop(std::uint64_t u) const { return adjacent(u, u); }

  std::uint64_t loop_count() const {
    std::uint64_t loops = 0;
    for (std::uint64_t a = 0; a < order_; ++a)
      for (std::uint64_t b = 0; b < order_; ++b)
        if (edge_test(a, b, a, b)) ++loops;
    return loops;
  }

  // Max deviation of any vertex degree from d, with degrees recounted by a
  // full edge-test scan (independent of the materialized matrix).
  std::uint64_t degree_check() const {
    std::uint64_t worst = 0;
    for (std::uint64_t u = 0; u < n_; ++u) {
      const std::uint64_t a = u / order_, b = u % order_;
      std::uint64_t deg = 0;
      for (std::uint64_t v = 0; v < n_; ++v)
        if (edge_test(a, b, v / order_, v % order_)) ++deg;
      const std::uint64_t dev = deg > d_ ? deg - d_ : d_ - deg;
      worst = std::max(worst, dev);
    }
    return worst;
  }

  // Row-sum deviation of the materialized matrix (loops counted once).
  std::uint64_t row_sum_check() const {
    require_materialized("row_sum_check");
    std::uint64_t worst = 0;
    for (std::uint64_t u = 0; u < n_; ++u) {
      std::uint64_t s = 0;
      const std::uint8_t* row = &adj_[static_cast<std::size_t>(u) * n_];
      for (std::uint64_t v = 0; v < n_; ++v) s += row[v];
      worst = std::max(worst, s > d_ ? s - d_ : d_ - s);
    }
    return worst;
  }

  // Closed form for the number of common neighbors of U and V:
  // with alpha = nu(b-d), the count is q^alpha when nu(a-c) >= alpha, else 0.
  std::uint64_t common_neighbors_closed_form(std::uint64_t u, std::uint64_t v) const {
    const std::uint64_t a = u / order_, b = u % order_;
    const std::uint64_t c = v / order_, d = v % order_;
    const unsigned alpha = ring_.valuation_code(ring_.sub_code(b, d));
    if (ring_.valuation_code(ring_.sub_code(a, c)) < alpha) return 0;
    std::uint64_t out = 1;
    for (unsigned i = 0; i < alpha; ++i) out *= ring_.q();
    return out;
  }

  std::uint64_t common_neighbors_bruteforce(std::uint64_t u, std::uint64_t v) const {
    const std::uint64_t a = u / order_, b = u % order_;
    const std::uint64_t c = v / order_, d = v % order_;
    std::uint64_t count = 0;
    for (std::uint64_t w = 0; w < n_; ++w) {
      const std::uint64_t wa = w / order_, wb = w % order_;
      if (edge_test(a, b, wa, wb) && edge_test(wa, wb, c, d)) ++count;
    }
    return count;
  }

  // e(B,C): ordered pairs (u,w), u in B, w in C, that are edges.  Loops count
  // once, as the pair (u,u).  Two exact paths: the direct |B||C| scan, and a
  // neighbor-enumeration path with bitset membership, picked by cost unless
  // forced.
  enum class count_path { automatic, pairwise, bitset };

  std::uint64_t edge_count(std::span<const std::uint64_t> B, std::span<const std::uint64_t> C,
                           count_path path = count_path::automatic) const {
    if (B.empty() || C.empty()) return 0;
    if (path == count_path::automatic)
      path = C.size() > d_ ? count_path::bitset : count_path::pairwise;
    if (path == count_path::pairwise) {
      std::uint64_t count = 0;
      for (std::uint64_t u : B) {
        const std::uint64_t a = u / order_, b = u % order_;
        for (std::uint64_t w : C)
          if (edge_test(a, b, w / order_, w % order_)) ++count;
      }
      return count;
    }
    std::vector<bool> in_c(n_, false);
    for (std::uint64_t w : C) in_c[w] = true;
    std::uint64_t count = 0;
    for (std::uint64_t u : B) {
      const std::uint64_t a = u / order_, b = u % order_;
      for (std::uint64_t t = 0; t < order_; ++t) {
        const std::uint64_t v = ring_.sub_code(ring_.mul_code(b, t), a) * order_ + t;
        if (in_c[v]) ++count;
      }
    }
    return count;
  }

  // Breadth-first reachability from vertex 0.
  bool connected() const {
    std::vector<bool> seen(n_, false);
    std::vector<std::uint64_t> queue{0};
    seen[0] = true;
    std::uint64_t visited = 1;
    while (!queue.empty()) {
      const std::uint64_t u = queue.back();
      queue.pop_back();
      const std::uint64_t a = u / order_, b = u % order_;
      for (std::uint64_t t = 0; t < order_; ++t) {
        const std::uint64_t v = ring_.sub_code(ring_.mul_code(b, t), a) * order_ + t;
        if (!seen[v]) {
          seen[v] = true;
          ++visited;
          queue.push_back(v);
        }
      }
    }
    return visited == n_;
  }

  const std::vector<std::uint8_t>& adjacency() const {
    require_materialized("adjacency");
    return adj_;
  }

  // Dense double copy of the adjacency for the eigensolver (works in either
  // mode; subject to the same vertex cap as materialization).
  std::vector<double> adjacency_as_double(std::uint64_t cap = default_materialize_cap) const {
    if (n_ > cap)
      throw cap_error("adjacency matrix cap exceeded (n=" + std::to_string(n_) + ")");
    std::vector<double> m(static_cast<std::size_t>(n_) * n_, 0.0);
    if (mode_ == adjacency_mode::materialized) {
      for (std::size_t i = 0; i < adj_.size(); ++i) m[i] = adj_[i];
    } else {
      for (std::uint64_t a = 0; a < order_; ++a)
        for (std::uint64_t b = 0; b < order_; ++b) {
          const std::uint64_t u = a * order_ + b;
          for (std::uint64_t t = 0; t < order_; ++t) {
            const std::uint64_t v = ring_.sub_code(ring_.mul_code(b, t), a) * order_ + t;
            m[static_cast<std::size_t>(u) * n_ + v] = 1.0;
          }
        }
    }
    return m;
  }

 private:
  void require_materialized(const char* what) const {
    if (mode_ != adjacency_mode::materialized)
      throw error(std::string(what) + " requires materialized adjacency mode");
  }

  ring ring_;
  adjacency_mode mode_;
  std::uint64_t order_ = 0, n_ = 0, d_ = 0;
  std::vector<std::uint8_t> adj_;
};

}  // namespace fvr
