#include "walks/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "walks/detail/jacobi.hpp"

namespace walks {

namespace {

constexpr double kDedupTol = 1e-10;       // max-norm identification of vertices
constexpr double kSingularValueTol = 1e-9;
constexpr int kMaxFullAmbient = 8;        // 8! = 40320 candidate vertices
constexpr int kMaxAmbient = 1024;

double max_norm_diff(const ProbabilityVector& a, const ProbabilityVector& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Phase-one simplex for  sum_j lambda_j v_j = y,  sum_j lambda_j = 1,
/// lambda >= 0: minimizes the sum of artificial variables with Bland's rule
/// (artificial columns are retired once they leave the basis).  Returns the
/// max-norm residual of the equality system at the optimum.
double feasibility_residual(const std::vector<ProbabilityVector>& verts,
                            const ProbabilityVector& y) {
  const int n = y.size();
  const int rows = n + 1;
  const int m = static_cast<int>(verts.size());
  const int cols = m + rows + 1;  // structural, artificial, right-hand side
  constexpr double kPivotTol = 1e-11;

  std::vector<double> t(static_cast<std::size_t>(rows) * cols, 0.0);
  auto T = [&](int r, int c) -> double& { return t[static_cast<std::size_t>(r) * cols + c]; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) T(i, j) = verts[j][i];
  for (int j = 0; j < m; ++j) T(n, j) = 1.0;
  for (int r = 0; r < rows; ++r) T(r, m + r) = 1.0;
  for (int i = 0; i < n; ++i) T(i, cols - 1) = y[i];
  T(n, cols - 1) = 1.0;

  // Reduced-cost row for the all-artificial basis: z_j = -sum_r A[r][j].
  std::vector<double> z(cols, 0.0);
  for (int j = 0; j < m; ++j)
    for (int r = 0; r < rows; ++r) z[j] -= T(r, j);
  for (int r = 0; r < rows; ++r) z[cols - 1] -= T(r, cols - 1);

  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) basis[r] = m + r;

  const long long max_iters = 2000LL + 50LL * (m + rows);
  for (long long iter = 0; iter < max_iters; ++iter) {
    // Bland: smallest-index improving column.  Only structural columns are
    // eligible, so artificials never re-enter once they leave the basis.
    int enter = -1;
    for (int j = 0; j < m; ++j) {
      if (z[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      const double a = T(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = T(r, cols - 1) / a;
      if (ratio < best_ratio - 1e-15 ||
          (ratio < best_ratio + 1e-15 && (leave < 0 || basis[r] < basis[leave]))) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) break;  // cannot happen for a bounded phase-one objective

    basis[leave] = enter;
    const double pivot = T(leave, enter);
    for (int c = 0; c < cols; ++c) T(leave, c) /= pivot;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = T(r, enter);
      if (f == 0.0) continue;
      for (int c = 0; c < cols; ++c) T(r, c) -= f * T(leave, c);
    }
    const double fz = z[enter];
    if (fz != 0.0)
      for (int c = 0; c < cols; ++c) z[c] -= fz * T(leave, c);
  }

  std::vector<double> lambda(m, 0.0);
  for (int r = 0; r < rows; ++r)
    if (basis[r] < m) lambda[basis[r]] = std::max(0.0, T(r, cols - 1));

  double residual = 0.0;
  double lambda_sum = 0.0;
  std::vector<double> combo(n, 0.0);
  for (int j = 0; j < m; ++j) {
    if (lambda[j] == 0.0) continue;
    lambda_sum += lambda[j];
    for (int i = 0; i < n; ++i) combo[i] += lambda[j] * verts[j][i];
  }
  for (int i = 0; i < n; ++i) residual = std::max(residual, std::abs(combo[i] - y[i]));
  residual = std::max(residual, std::abs(lambda_sum - 1.0));
  return residual;
}

}  // namespace

ProbPolytope ProbPolytope::subgroup(const GroupSpec& group, const ProbabilityVector& x) {
  const int n = group.order();
  if (x.size() != n) throw domain_error("base vector length does not match group order");
  if (n > kMaxAmbient) throw capacity_error("polytope ambient dimension limited to 1024");
  std::vector<ProbabilityVector> verts;
  verts.reserve(n);
  for (GroupElement r = 0; r < n; ++r) {
    auto shifted = ProbabilityVector::renormalized(group.permutation_rep(r).apply_row(x.span()));
    bool duplicate = false;
    for (const auto& v : verts) {
      if (max_norm_diff(v, shifted) <= kDedupTol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) verts.push_back(std::move(shifted));
  }
  return ProbPolytope(PolytopeKind::Subgroup, n, std::move(verts));
}

ProbPolytope ProbPolytope::full(const ProbabilityVector& x) {
  const int n = x.size();
  if (n > kMaxFullAmbient)
    throw capacity_error("full permutation polytope limited to n <= " +
                         std::to_string(kMaxFullAmbient));

  // Entries equal within the dedup tolerance collapse onto one representative
  // value, so enumerating distinct arrangements of the resulting multiset
  // yields exactly the distinct-vertex list with no pairwise comparison pass.
  std::vector<double> sorted = x.entries();
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> canonical;
  canonical.reserve(n);
  for (int i = 0; i < n;) {
    int j = i;
    double sum = 0.0;
    while (j < n && sorted[j] - sorted[i] <= kDedupTol) sum += sorted[j++];
    const double representative = sum / (j - i);
    for (int k = i; k < j; ++k) canonical.push_back(representative);
    i = j;
  }

  std::vector<ProbabilityVector> verts;
  std::vector<double> arrangement = canonical;  // ascending: first permutation
  do {
    verts.push_back(ProbabilityVector::renormalized(arrangement));
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  return ProbPolytope(PolytopeKind::Full, n, std::move(verts));
}

bool ProbPolytope::contains(const ProbabilityVector& y, double tol) const {
  if (y.size() != ambient_) throw domain_error("point length does not match polytope ambient dimension");
  return feasibility_residual(vertices_, y) <= tol;
}

bool ProbPolytope::is_subset_of(const ProbPolytope& other, double tol) const {
  if (ambient_ != other.ambient_)
    throw domain_error("polytope ambient dimensions do not match");
  for (const auto& v : vertices_) {
    if (!other.contains(v, tol)) return false;
  }
  return true;
}

int ProbPolytope::dimension() const {
  const int v = static_cast<int>(vertices_.size());
  if (v <= 1) return 0;
  const int n = ambient_;
  // rank of D = [v_i - v_0], via the spectrum of the n x n Gram matrix D^T D:
  // singular values are the square roots of its eigenvalues.
  std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 1; i < v; ++i) {
    for (int a = 0; a < n; ++a) {
      const double da = vertices_[i][a] - vertices_[0][a];
      if (da == 0.0) continue;
      for (int b = 0; b < n; ++b)
        gram[static_cast<std::size_t>(a) * n + b] += da * (vertices_[i][b] - vertices_[0][b]);
    }
  }
  const std::vector<double> eigs = detail::symmetric_eigenvalues(n, gram);
  // Rank cutoff: the nominal tolerance, floored by the eigensolver's noise
  // level, which scales with the largest eigenvalue.
  const double lambda_max = eigs.empty() ? 0.0 : eigs.back();
  const double cutoff = std::max(kSingularValueTol * kSingularValueTol, 1e-12 * lambda_max);
  int rank = 0;
  for (double lambda : eigs)
    if (lambda > cutoff) ++rank;
  return rank;
}

double ProbPolytope::circumradius_about(const ProbabilityVector& center) const {
  if (center.size() != ambient_)
    throw domain_error("center length does not match polytope ambient dimension");
  double radius = 0.0;
  for (const auto& v : vertices_) {
    double d2 = 0.0;
    for (int i = 0; i < ambient_; ++i) {
      const double diff = v[i] - center[i];
      d2 += diff * diff;
    }
    radius = std::max(radius, std::sqrt(d2));
  }
  return radius;
}

}  // namespace walks
