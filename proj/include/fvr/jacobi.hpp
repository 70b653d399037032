#pragma once

// Dense symmetric eigensolver: threshold cyclic Jacobi rotations on the upper
// triangle, accumulating the rotation product for eigenvectors.  A sweep only
// rotates pairs above a threshold proportional to the current off-diagonal
// norm; if a whole sweep rotates nothing the threshold drops to zero, so
// progress is guaranteed.  Sweeps continue until the off-diagonal Frobenius
// norm falls below off_target_factor * n (times the input magnitude scale).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fvr {

struct sym_eigen_result {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // row-major n x n; column j pairs with values[j]
  unsigned sweeps = 0;
  double off_norm = 0.0;
};

// a: row-major n x n, symmetric (only the upper triangle is read).
inline sym_eigen_result jacobi_eigen_sym(std::vector<double> a, std::size_t n,
                                         double off_target_factor = 1e-10,
                                         unsigned max_sweeps = 256) {
  if (a.size() != n * n) throw std::invalid_argument("jacobi_eigen_sym: size mismatch");
  sym_eigen_result res;
  if (n == 0) return res;
  if (n == 1) {
    res.values = {a[0]};
    res.vectors = {1.0};
    return res;
  }

  // vt holds the transpose of the rotation product: row j is eigenvector j.
  std::vector<double> vt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  auto off_frobenius = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
  };

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) scale = std::max(scale, std::abs(a[i * n + j]));
  const double target = off_target_factor * static_cast<double>(n) * std::max(scale, 1.0);

  auto rotate = [](double& x, double& y, double s, double tau) {
    const double g = x, h = y;
    x = g - s * (h + g * tau);
    y = h + s * (g - h * tau);
  };

  unsigned sweep = 0;
  bool force_full = false;
  double off = off_frobenius();
  while (off > target) {
    if (sweep >= max_sweeps)
      throw std::runtime_error("jacobi_eigen_sym: no convergence after " +
                               std::to_string(max_sweeps) + " sweeps");
    const double thresh = force_full ? 0.0 : 0.5 * off / static_cast<double>(n);
    std::size_t rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0 || std::abs(apq) <= thresh) continue;
        ++rotations;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        for (std::size_t j = 0; j < p; ++j) rotate(a[j * n + p], a[j * n + q], s, tau);
        for (std::size_t j = p + 1; j < q; ++j) rotate(a[p * n + j], a[j * n + q], s, tau);
        for (std::size_t j = q + 1; j < n; ++j) rotate(a[p * n + j], a[q * n + j], s, tau);
        double* vp = &vt[p * n];
        double* vq = &vt[q * n];
        for (std::size_t k = 0; k < n; ++k) rotate(vp[k], vq[k], s, tau);
      }
    }
    force_full = rotations == 0;
    ++sweep;
    off = off_frobenius();
  }
  res.sweeps = sweep;
  res.off_norm = off;

  res.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.values[i] = a[i * n + i];

  // sort eigenpairs descending and transpose the vector block back
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t x, std::size_t y) { return res.values[x] > res.values[y]; });
  std::vector<double> vals(n);
  res.vectors.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    vals[j] = res.values[idx[j]];
    const double* src = &vt[idx[j] * n];
    for (std::size_t i = 0; i < n; ++i) res.vectors[i * n + j] = src[i];
  }
  res.values = std::move(vals);
  return res;
}

}  // namespace fvr
