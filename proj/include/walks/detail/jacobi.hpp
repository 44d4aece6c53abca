#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace walks::detail {

/// Eigenvalues (ascending) of a Hermitian matrix given in row-major order,
/// by cyclic Jacobi rotations.  The input buffer is consumed as workspace.
/// Only the eigenvalues are produced; n is assumed small (matrices here are
/// density matrices, Gram matrices and similar).
inline std::vector<double> hermitian_eigenvalues(int n, std::vector<std::complex<double>> a) {
  using C = std::complex<double>;
  auto at = [&](int i, int j) -> C& { return a[static_cast<std::size_t>(i) * n + j]; };

  double frob2 = 0.0;
  for (const C& v : a) frob2 += std::norm(v);
  const double stop = 1e-28 * std::max(1.0, frob2);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off2 = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off2 += 2.0 * std::norm(at(p, q));
    if (off2 <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const C g = at(p, q);
        const double mag = std::abs(g);
        if (mag * mag <= stop / (static_cast<double>(n) * n)) continue;

        const C phase = g / mag;
        const double alpha = at(p, p).real();
        const double beta = at(q, q).real();
        const double tau = (beta - alpha) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Two-sided rotation U* A U with U = [[c, s*phase], [-s*conj(phase), c]]
        // on the (p, q) plane zeroes the (p, q) entry.
        at(p, p) = alpha - t * mag;
        at(q, q) = beta + t * mag;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const C apk = at(p, k);
          const C aqk = at(q, k);
          at(p, k) = c * apk - s * phase * aqk;
          at(q, k) = s * std::conj(phase) * apk + c * aqk;
          at(k, p) = std::conj(at(p, k));
          at(k, q) = std::conj(at(q, k));
        }
      }
    }
  }

  std::vector<double> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = at(i, i).real();
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

/// Eigenvalues (ascending) of a real symmetric matrix in row-major order.
inline std::vector<double> symmetric_eigenvalues(int n, const std::vector<double>& a) {
  std::vector<std::complex<double>> c(a.begin(), a.end());
  return hermitian_eigenvalues(n, std::move(c));
}

}  // namespace walks::detail
