#include "walks/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace walks {

namespace {

constexpr double kSumTol = 1e-12;        // strict constructor tolerance on sums
constexpr double kDriftTol = 1e-9;       // accepted drift on the renormalizing path
constexpr double kNegClip = 1e-12;       // magnitude of negative noise clipped to 0
constexpr double kMembershipTol = 1e-10; // entrywise tolerance for circulant reconstruction
constexpr long long kMaxSteps = 1000000;

std::vector<double> checked_entries(std::vector<double> entries, double sum_tol, bool clip_negative) {
  if (entries.empty()) throw domain_error("probability vector must be non-empty");
  double sum = 0.0;
  for (double& e : entries) {
    if (e < 0.0) {
      if (clip_negative && e >= -kNegClip) {
        e = 0.0;
      } else {
        throw validation_error("probability entry is negative: " + std::to_string(e));
      }
    }
    sum += e;
  }
  if (std::abs(sum - 1.0) > sum_tol)
    throw validation_error("probabilities sum to " + std::to_string(sum) + ", not 1");
  if (sum != 1.0 && clip_negative) {
    for (double& e : entries) e /= sum;
  }
  return entries;
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> entries)
    : entries_(checked_entries(std::move(entries), kSumTol, /*clip_negative=*/false)) {}

ProbabilityVector ProbabilityVector::renormalized(std::vector<double> entries) {
  return ProbabilityVector(Unchecked{},
                           checked_entries(std::move(entries), kDriftTol, /*clip_negative=*/true));
}

ProbabilityVector ProbabilityVector::uniform(int n) {
  if (n < 1) throw domain_error("uniform vector requires n >= 1");
  return ProbabilityVector(Unchecked{}, std::vector<double>(n, 1.0 / n));
}

ProbabilityVector ProbabilityVector::delta(int n, int at) {
  if (n < 1) throw domain_error("point mass requires n >= 1");
  if (at < 0 || at >= n) throw domain_error("point mass position out of range");
  std::vector<double> e(n, 0.0);
  e[at] = 1.0;
  return ProbabilityVector(Unchecked{}, std::move(e));
}

double ProbabilityVector::at(int i) const {
  if (i < 0 || i >= size()) throw domain_error("probability index out of range");
  return entries_[static_cast<std::size_t>(i)];
}

StepDistribution::StepDistribution(GroupSpec group, ProbabilityVector probabilities)
    : group_(group), probabilities_(std::move(probabilities)) {
  if (probabilities_.size() != group_.order())
    throw domain_error("step distribution length " + std::to_string(probabilities_.size()) +
                       " does not match group order " + std::to_string(group_.order()));
}

TransitionMatrix::TransitionMatrix(int n, std::vector<double> row_major) : n_(n), m_(std::move(row_major)) {
  if (n_ < 1) throw domain_error("transition matrix requires n >= 1");
  if (m_.size() != static_cast<std::size_t>(n_) * n_)
    throw domain_error("transition matrix storage size does not match n*n");

  for (double& e : m_) {
    if (e < 0.0) {
      if (e >= -kNegClip) e = 0.0;
      else throw validation_error("transition matrix entry is negative: " + std::to_string(e));
    }
  }
  // Column sums are only checked; row sums are renormalized when the drift is
  // small, so long chains of products remain stochastic to working precision.
  for (int a = 0; a < n_; ++a) {
    double rs = 0.0;
    for (int b = 0; b < n_; ++b) rs += m_[static_cast<std::size_t>(a) * n_ + b];
    const double err = std::abs(rs - 1.0);
    if (err > kDriftTol)
      throw validation_error("row " + std::to_string(a) + " sums to " + std::to_string(rs));
    if (err > 0.0)
      for (int b = 0; b < n_; ++b) m_[static_cast<std::size_t>(a) * n_ + b] /= rs;
  }
  for (int b = 0; b < n_; ++b) {
    double cs = 0.0;
    for (int a = 0; a < n_; ++a) cs += m_[static_cast<std::size_t>(a) * n_ + b];
    if (std::abs(cs - 1.0) > kDriftTol)
      throw validation_error("column " + std::to_string(b) + " sums to " + std::to_string(cs) +
                             "; matrix is not doubly stochastic");
  }
}

TransitionMatrix TransitionMatrix::from_step(const StepDistribution& p) {
  const GroupSpec& g = p.group();
  const int n = g.order();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  // P[a][b] = p(b - a): the probability of stepping from g_a to g_b.
  for (int a = 0; a < n; ++a) {
    const GroupElement ia = g.inverse(a);
    for (int b = 0; b < n; ++b) m[static_cast<std::size_t>(a) * n + b] = p[g.add(ia, b)];
  }
  TransitionMatrix t(n, std::move(m));
  t.certificate_ = p;
  return t;
}

TransitionMatrix TransitionMatrix::identity(int n) {
  if (n < 1) throw domain_error("identity matrix requires n >= 1");
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a) m[static_cast<std::size_t>(a) * n + a] = 1.0;
  return TransitionMatrix(n, std::move(m));
}

double TransitionMatrix::at(int a, int b) const {
  if (a < 0 || a >= n_ || b < 0 || b >= n_) throw domain_error("transition matrix index out of range");
  return m_[static_cast<std::size_t>(a) * n_ + b];
}

std::vector<double> TransitionMatrix::row(int a) const {
  if (a < 0 || a >= n_) throw domain_error("transition matrix row out of range");
  return {m_.begin() + static_cast<std::ptrdiff_t>(a) * n_,
          m_.begin() + static_cast<std::ptrdiff_t>(a + 1) * n_};
}

std::vector<double> TransitionMatrix::apply_row(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw domain_error("vector length does not match matrix size");
  std::vector<double> y(n_, 0.0);
  for (int a = 0; a < n_; ++a) {
    const double xa = x[a];
    if (xa == 0.0) continue;
    const double* row = m_.data() + static_cast<std::size_t>(a) * n_;
    for (int b = 0; b < n_; ++b) y[b] += xa * row[b];
  }
  return y;
}

TransitionMatrix TransitionMatrix::operator*(const TransitionMatrix& other) const {
  if (n_ != other.n_) throw domain_error("transition matrix sizes do not match");
  std::vector<double> m(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int a = 0; a < n_; ++a) {
    const double* ra = m_.data() + static_cast<std::size_t>(a) * n_;
    double* out = m.data() + static_cast<std::size_t>(a) * n_;
    for (int k = 0; k < n_; ++k) {
      const double v = ra[k];
      if (v == 0.0) continue;
      const double* rk = other.m_.data() + static_cast<std::size_t>(k) * n_;
      for (int b = 0; b < n_; ++b) out[b] += v * rk[b];
    }
  }
  TransitionMatrix t(n_, std::move(m));
  if (certificate_ && other.certificate_ && certificate_->group() == other.certificate_->group()) {
    // The circulant of a convolution is the product of the circulants, so the
    // product stays inside the same Birkhoff subpolytope.
    const GroupSpec& g = certificate_->group();
    std::vector<double> conv(g.order(), 0.0);
    for (int r = 0; r < g.order(); ++r)
      for (int s = 0; s < g.order(); ++s)
        conv[g.add(r, s)] += (*certificate_)[r] * (*other.certificate_)[s];
    t.certificate_ = StepDistribution(g, ProbabilityVector::renormalized(std::move(conv)));
  }
  return t;
}

TransitionMatrix TransitionMatrix::power(long long n) const {
  if (n < 0) throw domain_error("matrix power requires n >= 0");
  if (n > kMaxSteps) throw capacity_error("matrix power limited to n <= 1e6");
  TransitionMatrix result = TransitionMatrix::identity(n_);
  if (certificate_)
    result.certificate_ = StepDistribution(
        certificate_->group(), ProbabilityVector::delta(n_, 0));
  TransitionMatrix base = *this;
  long long k = n;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

ProbabilityVector evolve(const ProbabilityVector& q0, const TransitionMatrix& P, long long steps) {
  if (steps < 0) throw domain_error("evolve requires steps >= 0");
  if (steps > kMaxSteps) throw capacity_error("evolve limited to steps <= 1e6");
  if (q0.size() != P.size()) throw domain_error("initial vector length does not match matrix size");
  std::vector<double> q = q0.entries();
  for (long long i = 0; i < steps; ++i) {
    q = P.apply_row(q);
    // Rescale periodically so rounding drift stays far below the accepted
    // tolerance even over very long runs.
    if ((i & 1023) == 1023) {
      const double sum = std::accumulate(q.begin(), q.end(), 0.0);
      for (double& e : q) e /= sum;
    }
  }
  return ProbabilityVector::renormalized(std::move(q));
}

std::vector<ProbabilityVector> trajectory(const ProbabilityVector& q0, const TransitionMatrix& P,
                                          long long steps) {
  if (steps < 0) throw domain_error("trajectory requires steps >= 0");
  if (steps > kMaxSteps) throw capacity_error("trajectory limited to steps <= 1e6");
  if (q0.size() != P.size()) throw domain_error("initial vector length does not match matrix size");
  std::vector<ProbabilityVector> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(q0);
  std::vector<double> q = q0.entries();
  for (long long i = 0; i < steps; ++i) {
    q = P.apply_row(q);
    out.push_back(ProbabilityVector::renormalized(q));
    q = out.back().entries();
  }
  return out;
}

Spectrum spectrum(const StepDistribution& p) {
  const GroupSpec& g = p.group();
  const int d = g.d();
  const int n = g.order();
  const double tau = 2.0 * std::numbers::pi / d;
  Spectrum s;
  s.eigenvalues.reserve(n);
  s.labels.reserve(n);

  // chi_k(a) = omega(k a) for cyclic groups; chi_{j,k}(alpha, beta) =
  // omega(j alpha + k beta) for product groups, omega(x) = exp(2 pi i x / d).
  auto character_sum = [&](auto&& phase_of) {
    std::complex<double> e{0.0, 0.0};
    for (int r = 0; r < n; ++r) {
      const double prob = p[r];
      if (prob == 0.0) continue;
      const int ph = phase_of(r) % d;
      e += prob * std::complex<double>(std::cos(tau * ph), std::sin(tau * ph));
    }
    return e;
  };

  if (g.kind() == GroupKind::Cyclic) {
    for (int k = 0; k < d; ++k) {
      s.eigenvalues.push_back(character_sum([&](int a) { return k * a; }));
      s.labels.push_back("chi_" + std::to_string(k));
    }
  } else {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        s.eigenvalues.push_back(character_sum([&](int r) {
          const auto [alpha, beta] = g.to_pair(r);
          return j * alpha + k * beta;
        }));
        s.labels.push_back("chi_{" + std::to_string(j) + "," + std::to_string(k) + "}");
      }
    }
  }

  s.eigenvalues[0] = {1.0, 0.0};  // trivial character: exact by construction
  s.e_max = 0.0;
  for (std::size_t i = 1; i < s.eigenvalues.size(); ++i)
    s.e_max = std::max(s.e_max, std::abs(s.eigenvalues[i]));
  if (s.e_max > 1.0 + 1e-10)
    throw validation_error("character eigenvalue modulus exceeds 1");
  s.e_max = std::min(s.e_max, 1.0);
  return s;
}

bool is_ergodic(const Spectrum& s, double tol) { return s.e_max < 1.0 - tol; }

double mixing_time_heuristic(const Spectrum& s, double eps) {
  if (eps <= 0.0 || eps >= 1.0) throw domain_error("mixing threshold must lie in (0, 1)");
  if (!is_ergodic(s))
    throw unsupported_error("mixing time is undefined for a non-ergodic walk");
  if (s.e_max == 0.0) return 0.0;
  return std::log(eps) / std::log(s.e_max);
}

std::optional<long long> mixing_time_empirical(const ProbabilityVector& q0,
                                               const TransitionMatrix& P, double eps,
                                               long long max_steps) {
  if (eps <= 0.0) throw domain_error("mixing threshold must be positive");
  if (max_steps < 0) throw domain_error("mixing search requires max_steps >= 0");
  if (max_steps > kMaxSteps) throw capacity_error("mixing search limited to max_steps <= 1e6");
  if (q0.size() != P.size()) throw domain_error("initial vector length does not match matrix size");
  const int n = P.size();
  const double u = 1.0 / n;
  std::vector<double> q = q0.entries();
  auto tv_to_uniform = [&]() {
    double tv = 0.0;
    for (double e : q) tv += std::abs(e - u);
    return 0.5 * tv;
  };
  for (long long step = 0; step <= max_steps; ++step) {
    if (tv_to_uniform() <= eps) return step;
    if (step < max_steps) {
      q = P.apply_row(q);
      if ((step & 1023) == 1023) {
        const double sum = std::accumulate(q.begin(), q.end(), 0.0);
        for (double& e : q) e /= sum;
      }
    }
  }
  return std::nullopt;
}

std::optional<StepDistribution> subpolytope_membership(const GroupSpec& group,
                                                       const TransitionMatrix& P) {
  const int n = group.order();
  if (P.size() != n) throw domain_error("matrix size does not match group order");
  // Row 0 of a group circulant reads off the step distribution: P[0][r] = p(r).
  std::vector<double> candidate = P.row(0);
  for (int a = 0; a < n; ++a) {
    const GroupElement ia = group.inverse(a);
    for (int b = 0; b < n; ++b) {
      if (std::abs(P.at(a, b) - candidate[group.add(ia, b)]) > kMembershipTol) return std::nullopt;
    }
  }
  return StepDistribution(group, ProbabilityVector::renormalized(std::move(candidate)));
}

}  // namespace walks
