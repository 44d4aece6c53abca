#include "walks/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "walks/detail/jacobi.hpp"

namespace walks::quantum {

namespace {

constexpr double kIdentityTol = 1e-10;   // unitarity / hermiticity / trace checks
constexpr double kEigenvalueFloor = -1e-9;
constexpr double kDeterminantFloor = 1e-8;  // genericity screen threshold
constexpr int kMaxQuantumDim = 63;
constexpr long long kMaxSteps = 1000000;

void check_dim(int d) {
  if (d < 2) throw domain_error("quantum dimension must be >= 2");
  if (d > kMaxQuantumDim) throw capacity_error("quantum dimension limited to d <= 63");
}

void check_odd_dim(int d) {
  check_dim(d);
  if (d % 2 == 0)
    throw unsupported_error("displacement phases need 2^{-1} mod d: odd d >= 3 required");
}

int mod(long long x, int d) {
  const long long r = x % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

/// |det| of a k x k complex matrix (column list), by partial-pivot
/// elimination.  Used only for small k in the genericity screen.
double abs_determinant(std::vector<std::vector<Complex>> cols) {
  const int k = static_cast<int>(cols.size());
  double scale = 1.0;
  for (int step = 0; step < k; ++step) {
    int pivot = step;
    for (int c = step + 1; c < k; ++c)
      if (std::abs(cols[c][step]) > std::abs(cols[pivot][step])) pivot = c;
    if (pivot != step) std::swap(cols[pivot], cols[step]);
    const Complex head = cols[step][step];
    const double mag = std::abs(head);
    if (mag == 0.0) return 0.0;
    scale *= mag;
    for (int c = step + 1; c < k; ++c) {
      const Complex f = cols[c][step] / head;
      for (int r = step; r < k; ++r) cols[c][r] -= f * cols[step][r];
    }
  }
  return scale;
}

/// Visit every size-k index subset of {0..n-1}.  The visitor returns false
/// to stop early.
template <typename Visit>
void for_each_subset(int n, int k, Visit&& visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!visit(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Smallest |det| over all size-d subsets of the coherent family.
double exhaustive_min_determinant(const std::vector<std::vector<Complex>>& coherent, int d) {
  double min_det = std::numeric_limits<double>::infinity();
  for_each_subset(static_cast<int>(coherent.size()), d, [&](const std::vector<int>& idx) {
    std::vector<std::vector<Complex>> cols;
    cols.reserve(d);
    for (int i : idx) cols.push_back(coherent[i]);
    min_det = std::min(min_det, abs_determinant(std::move(cols)));
    return min_det > kDeterminantFloor;  // stop early once degenerate
  });
  return min_det;
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw domain_error("matrix dimensions must be positive");
  m_.assign(static_cast<std::size_t>(rows) * cols, Complex{0.0, 0.0});
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
  if (cols_ != other.rows_) throw domain_error("matrix product dimensions do not match");
  ComplexMatrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Complex v = at(i, k);
      if (v == Complex{0.0, 0.0}) continue;
      for (int j = 0; j < other.cols_; ++j) out.at(i, j) += v * other.at(k, j);
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw domain_error("matrix sum dimensions do not match");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < m_.size(); ++i) out.m_[i] = m_[i] + other.m_[i];
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw domain_error("matrix difference dimensions do not match");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < m_.size(); ++i) out.m_[i] = m_[i] - other.m_[i];
  return out;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < m_.size(); ++i) out.m_[i] = factor * m_[i];
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::power(int n) const {
  if (rows_ != cols_) throw domain_error("matrix power requires a square matrix");
  if (n < 0) throw domain_error("matrix power requires n >= 0");
  ComplexMatrix result = identity(rows_);
  ComplexMatrix base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Complex ComplexMatrix::trace() const {
  if (rows_ != cols_) throw domain_error("trace requires a square matrix");
  Complex t{0.0, 0.0};
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

std::vector<Complex> ComplexMatrix::apply(std::span<const Complex> ket) const {
  if (static_cast<int>(ket.size()) != cols_) throw domain_error("ket length does not match matrix");
  std::vector<Complex> out(rows_, Complex{0.0, 0.0});
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i] += at(i, j) * ket[j];
  return out;
}

bool ComplexMatrix::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  return max_abs_diff(*this * adjoint(), identity(rows_)) <= tol;
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> psi) {
  const int d = static_cast<int>(psi.size());
  ComplexMatrix p(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) p.at(i, j) = psi[i] * std::conj(psi[j]);
  return p;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw domain_error("matrix comparison dimensions do not match");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

Complex root_of_unity(int d, long long x) {
  const double angle = 2.0 * std::numbers::pi * mod(x, d) / d;
  return {std::cos(angle), std::sin(angle)};
}

ComplexMatrix shift_matrix(int d) {
  check_dim(d);
  ComplexMatrix x(d, d);
  for (int j = 0; j < d; ++j) x.at((j + 1) % d, j) = 1.0;
  return x;
}

ComplexMatrix clock_matrix(int d) {
  check_dim(d);
  ComplexMatrix z(d, d);
  for (int j = 0; j < d; ++j) z.at(j, j) = root_of_unity(d, j);
  return z;
}

ComplexMatrix fourier_matrix(int d) {
  check_odd_dim(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexMatrix f(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      f.at(j, k) = root_of_unity(d, static_cast<long long>(j) * k) * scale;
  return f;
}

ComplexMatrix displacement(int d, int alpha, int beta) {
  check_odd_dim(d);
  if (alpha < 0 || alpha >= d || beta < 0 || beta >= d)
    throw domain_error("displacement exponents out of range [0, d)");
  const int half_inverse = (d + 1) / 2;  // 2^{-1} mod d for odd d
  const Complex phase =
      root_of_unity(d, -static_cast<long long>(half_inverse) * alpha * beta);
  // D(alpha, beta)[r][c] = omega(alpha r - 2^{-1} alpha beta) delta(r, c + beta).
  ComplexMatrix out(d, d);
  for (int c = 0; c < d; ++c) {
    const int r = (c + beta) % d;
    out.at(r, c) = phase * root_of_unity(d, static_cast<long long>(alpha) * r);
  }
  return out;
}

ComplexMatrix displacement(int d, int nu) {
  check_odd_dim(d);
  if (nu < 0 || nu >= d * d) throw domain_error("displacement index out of range [0, d^2)");
  return displacement(d, nu / d, nu % d);
}

std::vector<ComplexMatrix> shift_family(int d) {
  check_dim(d);
  std::vector<ComplexMatrix> family;
  family.reserve(d);
  const ComplexMatrix x = shift_matrix(d);
  ComplexMatrix current = ComplexMatrix::identity(d);
  for (int a = 0; a < d; ++a) {
    family.push_back(current);
    if (a + 1 < d) current = x * current;
  }
  return family;
}

std::vector<ComplexMatrix> displacement_family(int d) {
  check_odd_dim(d);
  std::vector<ComplexMatrix> family;
  family.reserve(static_cast<std::size_t>(d) * d);
  for (int nu = 0; nu < d * d; ++nu) family.push_back(displacement(d, nu));
  return family;
}

std::vector<Complex> coherent_state(const FiducialVector& eta, int nu) {
  const int d = eta.d();
  if (nu < 0 || nu >= d * d) throw domain_error("coherent state index out of range [0, d^2)");
  const int alpha = nu / d;
  const int beta = nu % d;
  const int half_inverse = (d + 1) / 2;
  std::vector<Complex> c(d);
  for (int r = 0; r < d; ++r) {
    c[r] = root_of_unity(d, static_cast<long long>(alpha) * r -
                                static_cast<long long>(half_inverse) * alpha * beta) *
           eta.amplitudes()[mod(r - beta, d)];
  }
  return c;
}

namespace {

std::vector<std::vector<Complex>> coherent_family(const FiducialVector& eta) {
  std::vector<std::vector<Complex>> family;
  const int d = eta.d();
  family.reserve(static_cast<std::size_t>(d) * d);
  for (int nu = 0; nu < d * d; ++nu) family.push_back(coherent_state(eta, nu));
  return family;
}

/// Throws validation_error when the coherent family built on `amplitudes`
/// fails the requested genericity screen.
void run_screen(const FiducialVector& eta, GenericityScreen screen) {
  const int d = eta.d();
  const auto family = coherent_family(eta);

  if (screen == GenericityScreen::Exhaustive && d > 5)
    throw capacity_error("exhaustive genericity screen limited to d <= 5");

  if (d == 3 || screen == GenericityScreen::Exhaustive) {
    const double min_det = exhaustive_min_determinant(family, d);
    if (min_det <= kDeterminantFloor)
      throw validation_error("fiducial fails genericity screen: coherent subset with |det| " +
                             std::to_string(min_det));
    return;
  }

  // Necessary conditions for d >= 5: distinct coherent states must not
  // coincide, and the family must resolve the identity (automatic for a
  // normalized fiducial; checked as a numerical sanity condition).
  const int n = d * d;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Complex overlap{0.0, 0.0};
      for (int r = 0; r < d; ++r) overlap += std::conj(family[a][r]) * family[b][r];
      if (std::abs(overlap) >= 1.0 - kDeterminantFloor)
        throw validation_error("fiducial fails genericity screen: coherent states " +
                               std::to_string(a) + " and " + std::to_string(b) + " coincide");
    }
  }
  ComplexMatrix frame(d, d);
  for (const auto& state : family) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) frame.at(i, j) += state[i] * std::conj(state[j]);
  }
  if (max_abs_diff(frame, ComplexMatrix::identity(d).scaled(static_cast<double>(d))) > 1e-8)
    throw validation_error("fiducial fails genericity screen: coherent family does not resolve the identity");
}

std::vector<Complex> normalized_or_throw(std::vector<Complex> amplitudes) {
  double norm2 = 0.0;
  for (const Complex& a : amplitudes) norm2 += std::norm(a);
  if (norm2 <= 0.0) throw validation_error("fiducial amplitudes are all zero");
  const double norm = std::sqrt(norm2);
  for (Complex& a : amplitudes) a /= norm;
  return amplitudes;
}

}  // namespace

FiducialVector FiducialVector::random(int d, std::uint64_t seed, GenericityScreen screen) {
  check_odd_dim(d);
  SplitMix64 rng{seed};
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Complex> amplitudes(d);
    for (int r = 0; r < d; ++r)
      amplitudes[r] = Complex{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    try {
      FiducialVector eta(normalized_or_throw(std::move(amplitudes)));
      run_screen(eta, screen);
      return eta;
    } catch (const validation_error&) {
      // Degenerate draw (measure zero); take the next one from the stream.
    }
  }
  throw validation_error("seeded fiducial generation failed the genericity screen repeatedly");
}

FiducialVector FiducialVector::from_amplitudes(std::vector<Complex> amplitudes,
                                               GenericityScreen screen) {
  check_odd_dim(static_cast<int>(amplitudes.size()));
  FiducialVector eta(normalized_or_throw(std::move(amplitudes)));
  run_screen(eta, screen);
  return eta;
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw validation_error("density matrix must be square");
  check_dim(rho_.rows());
  if (max_abs_diff(rho_, rho_.adjoint()) > kIdentityTol)
    throw validation_error("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - Complex{1.0, 0.0}) > kIdentityTol)
    throw validation_error("density matrix trace is not 1");
  const auto eigs = detail::hermitian_eigenvalues(rho_.rows(), rho_.data());
  if (eigs.front() < kEigenvalueFloor)
    throw validation_error("density matrix has a negative eigenvalue: " +
                           std::to_string(eigs.front()));
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  double norm2 = 0.0;
  for (const Complex& a : psi) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-9) throw validation_error("pure state is not normalized");
  ComplexMatrix p = ComplexMatrix::projector(psi);
  if (norm2 != 1.0) p = p.scaled(1.0 / norm2);
  return DensityMatrix(std::move(p));
}

DensityMatrix DensityMatrix::basis_state(int d, int j) {
  check_dim(d);
  if (j < 0 || j >= d) throw domain_error("basis state index out of range");
  std::vector<Complex> psi(d, Complex{0.0, 0.0});
  psi[j] = 1.0;
  return pure(psi);
}

DensityMatrix DensityMatrix::momentum_state(int d, int j) {
  check_odd_dim(d);
  if (j < 0 || j >= d) throw domain_error("momentum state index out of range");
  const ComplexMatrix f = fourier_matrix(d);
  std::vector<Complex> psi(d);
  for (int a = 0; a < d; ++a) psi[a] = f.at(a, j);
  return pure(psi);
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  check_dim(d);
  return DensityMatrix(ComplexMatrix::identity(d).scaled(1.0 / d));
}

ProjectiveMeasurement projective_nonselective(const DensityMatrix& rho) {
  const int d = rho.d();
  std::vector<double> q(d);
  ComplexMatrix sigma(d, d);
  for (int j = 0; j < d; ++j) {
    q[j] = rho.matrix().at(j, j).real();
    sigma.at(j, j) = q[j];
  }
  return {ProbabilityVector::renormalized(std::move(q)), DensityMatrix(std::move(sigma))};
}

PovmMeasurement povm_nonselective(const DensityMatrix& rho, const FiducialVector& eta) {
  const int d = rho.d();
  if (eta.d() != d) throw domain_error("fiducial dimension does not match state");
  const auto family = coherent_family(eta);
  std::vector<double> q(static_cast<std::size_t>(d) * d);
  ComplexMatrix sigma(d, d);
  for (int nu = 0; nu < d * d; ++nu) {
    // q_nu = (1/d) <C;nu| rho |C;nu>
    const auto applied = rho.matrix().apply(family[nu]);
    Complex expectation{0.0, 0.0};
    for (int r = 0; r < d; ++r) expectation += std::conj(family[nu][r]) * applied[r];
    q[nu] = expectation.real() / d;
    const ComplexMatrix projector = ComplexMatrix::projector(family[nu]);
    sigma = sigma + projector.scaled(q[nu]);
  }
  ComplexMatrix defect = rho.matrix() - sigma;
  return {ProbabilityVector::renormalized(std::move(q)), DensityMatrix(std::move(sigma)),
          std::move(defect)};
}

DensityMatrix random_unitary_channel(const DensityMatrix& rho,
                                     std::span<const ComplexMatrix> family,
                                     const ProbabilityVector& weights) {
  if (family.empty()) throw domain_error("unitary family must be non-empty");
  if (static_cast<int>(family.size()) != weights.size())
    throw domain_error("weights length does not match unitary family size");
  const int d = rho.d();
  ComplexMatrix out(d, d);
  for (std::size_t a = 0; a < family.size(); ++a) {
    const ComplexMatrix& u = family[a];
    if (u.rows() != d || u.cols() != d)
      throw domain_error("unitary family dimension does not match state");
    if (!u.is_unitary()) throw domain_error("channel member is not unitary");
    const double w = weights[static_cast<int>(a)];
    if (w == 0.0) continue;
    out = out + (u * rho.matrix() * u.adjoint()).scaled(w);
  }
  return DensityMatrix(std::move(out));
}

TransitionMatrix projective_walk_transition(const ProbabilityVector& weights) {
  const int d = weights.size();
  check_dim(d);
  // For the shift family |<X;j| X^a |X;k>|^2 = delta(j, k + a), so the
  // induced matrix is exactly the group circulant of the weights over Z(d).
  return TransitionMatrix::from_step(StepDistribution(GroupSpec::cyclic(d), weights));
}

TransitionMatrix projective_walk_transition(std::span<const ComplexMatrix> family,
                                            const ProbabilityVector& weights) {
  if (family.empty()) throw domain_error("unitary family must be non-empty");
  if (static_cast<int>(family.size()) != weights.size())
    throw domain_error("weights length does not match unitary family size");
  const int d = family.front().rows();
  check_dim(d);
  std::vector<double> v(static_cast<std::size_t>(d) * d, 0.0);
  for (std::size_t a = 0; a < family.size(); ++a) {
    const ComplexMatrix& u = family[a];
    if (u.rows() != d || u.cols() != d) throw domain_error("unitary family dimensions differ");
    if (!u.is_unitary()) throw domain_error("channel member is not unitary");
    const double w = weights[static_cast<int>(a)];
    if (w == 0.0) continue;
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(k) * d + j] += w * std::norm(u.at(j, k));
  }
  return TransitionMatrix(d, std::move(v));
}

TransitionMatrix povm_walk_transition(const FiducialVector& eta, const ProbabilityVector& weights) {
  const int d = eta.d();
  const int n = d * d;
  if (weights.size() != n) throw domain_error("weights length must be d^2");
  const GroupSpec group = GroupSpec::product(d);
  const auto family = coherent_family(eta);

  // The outcome kernel (1/d) |<C;mu|C;nu>|^2 depends only on mu - nu, so one
  // measurement + displacement round is the group circulant of
  // p(r) = (1/d) sum_a weights[a] |<C;r|C;a>|^2 over Z(d) x Z(d).
  std::vector<double> p(n, 0.0);
  for (int r = 0; r < n; ++r) {
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      const double w = weights[a];
      if (w == 0.0) continue;
      Complex overlap{0.0, 0.0};
      for (int x = 0; x < d; ++x) overlap += std::conj(family[r][x]) * family[a][x];
      sum += w * std::norm(overlap);
    }
    p[r] = sum / d;
  }
  return TransitionMatrix::from_step(
      StepDistribution(group, ProbabilityVector::renormalized(std::move(p))));
}

MeasuredWalk measured_walk(const DensityMatrix& rho0, MeasurementMode mode,
                           const ProbabilityVector& weights,
                           const std::optional<FiducialVector>& fiducial, long long steps) {
  if (steps < 0) throw domain_error("measured walk requires steps >= 0");
  if (steps > kMaxSteps) throw capacity_error("measured walk limited to steps <= 1e6");
  const int d = rho0.d();

  std::vector<ComplexMatrix> family;
  TransitionMatrix induced = [&] {
    if (mode == MeasurementMode::Projective) {
      if (weights.size() != d) throw domain_error("projective walk weights must have length d");
      family = shift_family(d);
      return projective_walk_transition(weights);
    }
    if (!fiducial) throw domain_error("povm walk requires a fiducial vector");
    if (fiducial->d() != d) throw domain_error("fiducial dimension does not match state");
    if (weights.size() != d * d) throw domain_error("povm walk weights must have length d^2");
    family = displacement_family(d);
    return povm_walk_transition(*fiducial, weights);
  }();

  auto measure = [&](const DensityMatrix& rho) -> std::pair<ProbabilityVector, DensityMatrix> {
    if (mode == MeasurementMode::Projective) {
      auto m = projective_nonselective(rho);
      return {std::move(m.probabilities), std::move(m.state)};
    }
    auto m = povm_nonselective(rho, *fiducial);
    return {std::move(m.probabilities), std::move(m.state)};
  };

  MeasuredWalk walk{{}, std::move(induced), rho0};
  DensityMatrix rho = rho0;
  for (long long n = 0;; ++n) {
    auto [probabilities, post] = measure(rho);
    walk.probabilities.push_back(std::move(probabilities));
    if (n == steps) break;
    rho = random_unitary_channel(post, family, weights);
  }
  walk.final_state = std::move(rho);
  return walk;
}

}  // namespace walks::quantum
