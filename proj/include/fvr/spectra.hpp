#pragma once

// Spectral certification of the sum-product graph.
//
// verify_a2_identity checks, in exact integer arithmetic, that
//   A^2 = J + (q^r - 1) I - sum_{alpha=0..r} E_alpha
//                         + sum_{alpha=1..r-1} (q^alpha - 1) F_alpha,
// where E_alpha / F_alpha are the 0/1 matrices of the valuation conditions
//   E_alpha: nu(b-d) = alpha and nu(a-c) <  alpha
//   F_alpha: nu(b-d) = alpha and nu(a-c) >= alpha
// and that every E_alpha row sum stays below q^{2r-alpha} and every F_alpha
// row sum below q^{2(r-alpha)}.
//
// certify computes the full spectrum, takes lambda = max(lambda_2, -lambda_n),
// and compares it against the bound sqrt(2 r q^{2r-1}).

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvr/jacobi.hpp"
#include "fvr/sp_graph.hpp"

namespace fvr {

struct a2_report {
  bool identity_ok = false;
  std::int64_t max_deviation = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> first_mismatch;
  bool row_sum_bounds_ok = false;
  std::vector<std::uint64_t> e_row_sum_max;  // indexed by alpha, 0..r
  std::vector<std::uint64_t> f_row_sum_max;  // indexed by alpha, 0..r (only 1..r-1 populated)
  bool ok() const { return identity_ok && row_sum_bounds_ok; }
};

inline a2_report verify_a2_identity(const sp_graph& g) {
  const ring& R = g.base_ring();
  const std::uint64_t n = g.n();
  const std::uint64_t order = R.order();
  const unsigned r = R.r();
  const auto& adj = g.adjacency();  // requires materialized mode

  // q^alpha table and the pairwise valuation table nu(x - y)
  std::vector<std::uint64_t> qpow(r + 1, 1);
  for (unsigned i = 1; i <= r; ++i) qpow[i] = qpow[i - 1] * R.q();
  std::vector<std::uint8_t> val_sub(order * order);
  for (std::uint64_t x = 0; x < order; ++x)
    for (std::uint64_t y = 0; y < order; ++y)
      val_sub[x * order + y] = static_cast<std::uint8_t>(R.valuation_code(R.sub_code(x, y)));

  // exact A^2 (entries are at most d, fits easily in 32 bits)
  std::vector<std::uint32_t> a2(static_cast<std::size_t>(n) * n, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint8_t* arow = &adj[static_cast<std::size_t>(i) * n];
    std::uint32_t* crow = &a2[static_cast<std::size_t>(i) * n];
    for (std::uint64_t k = 0; k < n; ++k) {
      if (arow[k] == 0) continue;
      const std::uint8_t* brow = &adj[static_cast<std::size_t>(k) * n];
      for (std::uint64_t j = 0; j < n; ++j) crow[j] += brow[j];
    }
  }

  a2_report rep;
  rep.e_row_sum_max.assign(r + 1, 0);
  rep.f_row_sum_max.assign(r + 1, 0);
  rep.identity_ok = true;

  std::vector<std::uint64_t> e_row(r + 1), f_row(r + 1);
  for (std::uint64_t u = 0; u < n; ++u) {
    const std::uint64_t a = u / order, b = u % order;
    std::fill(e_row.begin(), e_row.end(), 0);
    std::fill(f_row.begin(), f_row.end(), 0);
    for (std::uint64_t v = 0; v < n; ++v) {
      const std::uint64_t c = v / order, d = v % order;
      const unsigned alpha = val_sub[b * order + d];
      const unsigned beta = val_sub[a * order + c];
      const bool e_ind = beta < alpha;
      const bool f_ind = beta >= alpha && alpha >= 1 && alpha <= r - 1;
      if (e_ind) ++e_row[alpha];
      if (f_ind) ++f_row[alpha];
      std::int64_t expect = 1 + (u == v ? static_cast<std::int64_t>(qpow[r]) - 1 : 0);
      if (e_ind) expect -= 1;
      if (f_ind) expect += static_cast<std::int64_t>(qpow[alpha]) - 1;
      const std::int64_t got = a2[static_cast<std::size_t>(u) * n + v];
      const std::int64_t dev = got - expect;
      if (dev != 0) {
        rep.identity_ok = false;
        if (!rep.first_mismatch) rep.first_mismatch = {u, v};
        rep.max_deviation = std::max<std::int64_t>(rep.max_deviation, dev < 0 ? -dev : dev);
      }
    }
    for (unsigned alpha = 0; alpha <= r; ++alpha) {
      rep.e_row_sum_max[alpha] = std::max(rep.e_row_sum_max[alpha], e_row[alpha]);
      rep.f_row_sum_max[alpha] = std::max(rep.f_row_sum_max[alpha], f_row[alpha]);
    }
  }

  auto q_to = [&](unsigned e) {
    std::uint64_t acc = 1;
    for (unsigned i = 0; i < e; ++i) acc *= R.q();
    return acc;
  };
  rep.row_sum_bounds_ok = rep.e_row_sum_max[0] == 0;  // E_0 must be empty
  for (unsigned alpha = 1; alpha <= r; ++alpha)
    if (rep.e_row_sum_max[alpha] >= q_to(2 * r - alpha)) rep.row_sum_bounds_ok = false;
  for (unsigned alpha = 1; alpha + 1 <= r; ++alpha)
    if (rep.f_row_sum_max[alpha] >= q_to(2 * (r - alpha))) rep.row_sum_bounds_ok = false;
  return rep;
}

struct spectral_cert {
  std::string ring_text;
  std::uint64_t n = 0, d = 0;
  std::vector<double> eigenvalues;  // descending
  double lambda = 0.0;              // max(lambda_2, -lambda_n)
  double bound = 0.0;               // sqrt(2 r q^{2r-1})
  bool bound_holds = false;
  bool bound_nontrivial = false;  // bound < d
  bool connected = false;
  bool non_bipartite = false;
  double residual = 0.0;  // max ||A v - theta v||_inf over all eigenpairs
  // extras used by tests and reports (not part of the JSON schema)
  std::uint64_t loops = 0;
  double trace_sum = 0.0;     // sum of eigenvalues
  double trace_square = 0.0;  // sum of squared eigenvalues
  unsigned sweeps = 0;
};

inline spectral_cert certify(const sp_graph& g,
                             std::uint64_t eigen_cap = sp_graph::default_materialize_cap) {
  const std::uint64_t n = g.n();
  std::vector<double> a = g.adjacency_as_double(eigen_cap);
  sym_eigen_result eig = jacobi_eigen_sym(a, n);

  spectral_cert cert;
  cert.ring_text = g.base_ring().to_string();
  cert.n = n;
  cert.d = g.d();
  cert.eigenvalues = eig.values;
  cert.sweeps = eig.sweeps;

  const double lambda2 = n >= 2 ? eig.values[1] : 0.0;
  const double lambda_min = eig.values.back();
  cert.lambda = std::max(lambda2, -lambda_min);

  const ring& R = g.base_ring();
  long double b2 = 2.0L * R.r();
  for (unsigned i = 0; i + 1 < 2 * R.r(); ++i) b2 *= R.q();
  cert.bound = static_cast<double>(std::sqrt(b2));

  // residual of every eigenpair against the original adjacency
  double residual = 0.0;
  {
    const std::size_t nn = static_cast<std::size_t>(n);
    std::vector<double> v(nn);
    for (std::size_t j = 0; j < nn; ++j) {
      for (std::size_t i = 0; i < nn; ++i) v[i] = eig.vectors[i * nn + j];
      for (std::size_t i = 0; i < nn; ++i) {
        double av = 0.0;
        const double* arow = &a[i * nn];
        for (std::size_t k = 0; k < nn; ++k) av += arow[k] * v[k];
        residual = std::max(residual, std::abs(av - eig.values[j] * v[i]));
      }
    }
  }
  cert.residual = residual;

  const double tol = 1e-6 * static_cast<double>(cert.d);
  cert.bound_holds = cert.lambda <= cert.bound + 1e-9;
  cert.bound_nontrivial = cert.bound < static_cast<double>(cert.d);
  cert.connected = g.connected() && lambda2 < static_cast<double>(cert.d) - tol;
  cert.non_bipartite = lambda_min > -static_cast<double>(cert.d) + tol;

  cert.loops = g.loop_count();
  for (double v : eig.values) {
    cert.trace_sum += v;
    cert.trace_square += v * v;
  }
  return cert;
}

// Expander mixing: |e(B,C) - d|B||C|/n| <= lambda sqrt(|B||C|), with the
// certified lambda.  slack_out (optional) receives rhs - lhs.
inline bool mixing_check(const sp_graph& g, const spectral_cert& cert,
                         std::span<const std::uint64_t> B, std::span<const std::uint64_t> C,
                         double* slack_out = nullptr) {
  const long double e = static_cast<long double>(g.edge_count(B, C));
  const long double main_term = static_cast<long double>(g.d()) * B.size() * C.size() /
                                static_cast<long double>(g.n());
  const long double lhs = e > main_term ? e - main_term : main_term - e;
  const long double rhs =
      static_cast<long double>(cert.lambda) *
      std::sqrt(static_cast<long double>(B.size()) * static_cast<long double>(C.size()));
  if (slack_out) *slack_out = static_cast<double>(rhs - lhs);
  return lhs <= rhs + 1e-6L;
}

}  // namespace fvr
