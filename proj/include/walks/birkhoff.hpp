#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "walks/errors.hpp"
#include "walks/group.hpp"

namespace walks {

/// A probability distribution over {0..n-1}: entries >= 0, sum within 1e-12
/// of 1.  The `renormalized` factory accepts small floating-point drift
/// (entries >= -1e-12 clipped to 0, sum within 1e-9 of 1) and rescales; it is
/// the path used by internal arithmetic such as repeated matrix application.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> entries);

  static ProbabilityVector renormalized(std::vector<double> entries);
  static ProbabilityVector uniform(int n);
  /// Point mass at `at` (the maximally concentrated vector when at == 0).
  static ProbabilityVector delta(int n, int at);

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  double at(int i) const;
  const std::vector<double>& entries() const { return entries_; }
  std::span<const double> span() const { return entries_; }

  bool operator==(const ProbabilityVector& other) const = default;

 private:
  struct Unchecked {};
  ProbabilityVector(Unchecked, std::vector<double> entries) : entries_(std::move(entries)) {}

  std::vector<double> entries_;
};

/// A probability distribution over the elements of a specific group: the law
/// of one step of the walk.
class StepDistribution {
 public:
  StepDistribution(GroupSpec group, ProbabilityVector probabilities);

  const GroupSpec& group() const { return group_; }
  const ProbabilityVector& probabilities() const { return probabilities_; }
  double operator[](GroupElement r) const { return probabilities_[r]; }

  bool operator==(const StepDistribution& other) const = default;

 private:
  GroupSpec group_;
  ProbabilityVector probabilities_;
};

/// An n x n doubly stochastic matrix (rows and columns sum to 1, entries
/// >= 0), acting on probability row vectors from the right: q' = q * P.
///
/// When built from a StepDistribution p the matrix is the group circulant
/// P[a][b] = p(b - a) = sum_r p(r) M(r), and the step distribution is kept
/// as a certificate that P lies in the Birkhoff subpolytope of the group.
/// Products of certified matrices stay certified (the certificate is the
/// convolution of the factors' step distributions).
class TransitionMatrix {
 public:
  /// Validates double stochasticity: entries >= -1e-12 (clipped to 0), every
  /// row and column sum within 1e-12 of 1 (drift up to 1e-9 is renormalized
  /// row-by-row to keep long products stable).
  TransitionMatrix(int n, std::vector<double> row_major);

  static TransitionMatrix from_step(const StepDistribution& p);
  static TransitionMatrix identity(int n);

  int size() const { return n_; }
  double at(int a, int b) const;
  const std::vector<double>& row_major() const { return m_; }
  std::vector<double> row(int a) const;

  /// Step distribution certifying membership in a Birkhoff subpolytope,
  /// when the matrix was built from one (or is a product of such).
  const std::optional<StepDistribution>& certificate() const { return certificate_; }

  /// Row-vector action y = x * P.
  std::vector<double> apply_row(std::span<const double> x) const;

  TransitionMatrix operator*(const TransitionMatrix& other) const;
  TransitionMatrix power(long long n) const;

 private:
  int n_;
  std::vector<double> m_;
  std::optional<StepDistribution> certificate_;
};

/// Eigenvalues of a group-circulant transition matrix, indexed by the group
/// characters: e[k] = sum_g p(g) chi_k(g).  e[0] (trivial character) is 1;
/// every modulus is <= 1.  `e_max` is the largest nontrivial modulus, the
/// quantity controlling convergence to the uniform vector.
struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<std::string> labels;  ///< "chi_k" (cyclic) or "chi_{j,k}" (product)
  double e_max = 0.0;
};

/// Evolve `q0` for `steps` applications of P.  steps >= 0; steps <= 1e6.
ProbabilityVector evolve(const ProbabilityVector& q0, const TransitionMatrix& P, long long steps);

/// Full trajectory q^(0), q^(1), ..., q^(steps).
std::vector<ProbabilityVector> trajectory(const ProbabilityVector& q0, const TransitionMatrix& P,
                                          long long steps);

/// Character-basis spectrum of the walk with step distribution p.
Spectrum spectrum(const StepDistribution& p);

/// True when every nontrivial eigenvalue has modulus < 1 - tol.
bool is_ergodic(const Spectrum& s, double tol = 1e-10);

/// log(eps) / log(e_max): the scale on which total variation to uniform
/// decays.  Requires ergodicity (else unsupported_error).  Returns 0 when
/// e_max == 0 (one step reaches uniform exactly).
double mixing_time_heuristic(const Spectrum& s, double eps);

/// Smallest n <= max_steps with TV(q^(n), uniform) <= eps, or nullopt.
std::optional<long long> mixing_time_empirical(const ProbabilityVector& q0,
                                               const TransitionMatrix& P, double eps,
                                               long long max_steps);

/// If P is the group circulant of some step distribution over `group`,
/// return that distribution; otherwise nullopt.  The candidate is read off
/// row 0 (P[0][r] = p(r)) and checked entrywise against the reconstruction
/// within 1e-10.
std::optional<StepDistribution> subpolytope_membership(const GroupSpec& group,
                                                       const TransitionMatrix& P);

}  // namespace walks
