#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "walks/birkhoff.hpp"
#include "walks/errors.hpp"
#include "walks/group.hpp"

namespace walks::quantum {

using Complex = std::complex<double>;

/// Dense row-major complex matrix with just the operations the measurement
/// walks need.
class ComplexMatrix {
 public:
  ComplexMatrix(int rows, int cols);
  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Complex& at(int i, int j) { return m_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Complex& at(int i, int j) const { return m_[static_cast<std::size_t>(i) * cols_ + j]; }
  const std::vector<Complex>& data() const { return m_; }

  ComplexMatrix operator*(const ComplexMatrix& other) const;
  ComplexMatrix operator+(const ComplexMatrix& other) const;
  ComplexMatrix operator-(const ComplexMatrix& other) const;
  ComplexMatrix scaled(Complex factor) const;
  ComplexMatrix adjoint() const;
  ComplexMatrix power(int n) const;
  Complex trace() const;
  std::vector<Complex> apply(std::span<const Complex> ket) const;

  bool is_unitary(double tol = 1e-10) const;

  /// Rank-one projector |psi><psi|.
  static ComplexMatrix projector(std::span<const Complex> psi);

 private:
  int rows_, cols_;
  std::vector<Complex> m_;
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// omega(x) = exp(2 pi i x / d).
Complex root_of_unity(int d, long long x);

/// Cyclic shift: X |j> = |j + 1 mod d>.  d >= 2.
ComplexMatrix shift_matrix(int d);

/// Phase operator: Z |j> = omega(j) |j>.  d >= 2.
ComplexMatrix clock_matrix(int d);

/// Finite Fourier transform F[j][k] = omega(j k) / sqrt(d).  Odd d >= 3
/// (the measurement constructions below need an inverse of 2 mod d).
/// Satisfies F F* = 1 and F^4 = 1.
ComplexMatrix fourier_matrix(int d);

/// Displacement operator D(alpha, beta) = Z^alpha X^beta omega(-2^{-1} alpha
/// beta), with 2^{-1} = (d+1)/2 mod d.  Odd d >= 3.  D(0,0) = 1 and the
/// family is closed under products up to phases.
ComplexMatrix displacement(int d, int alpha, int beta);

/// Single-index displacement: nu = d*alpha + beta.
ComplexMatrix displacement(int d, int nu);

/// The d shift unitaries { X^a : a = 0..d-1 }.
std::vector<ComplexMatrix> shift_family(int d);

/// The d^2 displacement unitaries { D(nu) : nu = 0..d^2-1 }.
std::vector<ComplexMatrix> displacement_family(int d);

/// How thoroughly fiducial genericity is screened.
enum class GenericityScreen {
  /// d = 3: every triple of coherent states must be linearly independent
  /// (84 determinants).  d >= 5: necessary conditions only -- the coherent
  /// family resolves the identity and no two coherent states coincide.
  Default,
  /// Check every d-subset of the d^2 coherent states for linear
  /// independence.  Practical for d <= 5 (53130 determinants at d = 5);
  /// larger d is rejected.
  Exhaustive,
};

/// A normalized reference ket |eta> whose displaced copies D(nu)|eta> form
/// the coherent family.  Construction enforces a genericity screen: every
/// small subset of coherent states must be in general position (minimum
/// |det| above 1e-8), which rules out degenerate choices such as position
/// or momentum basis states.
class FiducialVector {
 public:
  /// Deterministic fiducial from a seeded generator; draws again (same
  /// stream) in the rare case a draw fails the screen.
  static FiducialVector random(int d, std::uint64_t seed,
                               GenericityScreen screen = GenericityScreen::Default);

  /// Normalizes the given nonzero amplitudes and applies the screen;
  /// throws validation_error on degenerate input (e.g. a position or
  /// momentum basis state).
  static FiducialVector from_amplitudes(std::vector<Complex> amplitudes,
                                        GenericityScreen screen = GenericityScreen::Default);

  int d() const { return static_cast<int>(amplitudes_.size()); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

 private:
  explicit FiducialVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {}
  std::vector<Complex> amplitudes_;
};

/// Coherent state |C; nu> = D(nu) |eta>, computed in closed form:
/// component r equals omega(-2^{-1} alpha beta + alpha r) eta_{r - beta}.
std::vector<Complex> coherent_state(const FiducialVector& eta, int nu);

/// A d x d density matrix: Hermitian within 1e-10, unit trace within 1e-10,
/// eigenvalues >= -1e-9.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho);

  static DensityMatrix pure(std::span<const Complex> psi);
  /// |j><j| in the position basis.
  static DensityMatrix basis_state(int d, int j);
  /// F |j><j| F*: an eigenstate of the shift operator.
  static DensityMatrix momentum_state(int d, int j);
  static DensityMatrix maximally_mixed(int d);

  int d() const { return rho_.rows(); }
  const ComplexMatrix& matrix() const { return rho_; }

 private:
  ComplexMatrix rho_;
};

/// Non-selective measurement in the position basis: probabilities
/// q_j = rho_jj and post-measurement state sum_j q_j |j><j| (off-diagonal
/// terms removed).
struct ProjectiveMeasurement {
  ProbabilityVector probabilities;
  DensityMatrix state;
};
ProjectiveMeasurement projective_nonselective(const DensityMatrix& rho);

/// Non-selective coherent-state POVM measurement with Kraus operators
/// Pi(nu)/sqrt(d): probabilities q_nu = (1/d) <C;nu|rho|C;nu>, post state
/// sigma = sum_nu q_nu Pi(nu), and the traceless coherence defect
/// rho - sigma that the measurement erased.
struct PovmMeasurement {
  ProbabilityVector probabilities;
  DensityMatrix state;
  ComplexMatrix coherence_defect;
};
PovmMeasurement povm_nonselective(const DensityMatrix& rho, const FiducialVector& eta);

/// Random unitary channel rho -> sum_a weights[a] U_a rho U_a*.
DensityMatrix random_unitary_channel(const DensityMatrix& rho,
                                     std::span<const ComplexMatrix> family,
                                     const ProbabilityVector& weights);

/// Classical transition matrix induced on position outcomes by one
/// measurement + shift-channel round: V[k][j] = sum_a weights[a]
/// |<X;j| X^a |X;k>|^2.  For the shift family this is exactly the group
/// circulant of `weights` over Z(d), so the result carries a certificate.
TransitionMatrix projective_walk_transition(const ProbabilityVector& weights);

/// Same bridge for an arbitrary unitary family: V[k][j] = sum_a weights[a]
/// |U_a[j][k]|^2.  Doubly stochastic, but in general not a group circulant
/// (use subpolytope_membership to test).
TransitionMatrix projective_walk_transition(std::span<const ComplexMatrix> family,
                                            const ProbabilityVector& weights);

/// Classical transition matrix induced on coherent-state outcomes by one
/// POVM measurement + displacement-channel round:
/// W[nu][mu] = (1/d) sum_a weights[a] |<C;mu|C;nu + a>|^2.
/// Always a group circulant over Z(d) x Z(d) (certificate attached); with
/// uniform weights it collapses to the flat matrix J / d^2.
TransitionMatrix povm_walk_transition(const FiducialVector& eta, const ProbabilityVector& weights);

enum class MeasurementMode { Projective, Povm };

/// Trajectory of a measurement-driven walk: at each step the outcome
/// statistics of the current state are recorded, the state is replaced by
/// its non-selective post-measurement form, and the random unitary channel
/// (shift family or displacement family, by mode) is applied.
/// The recorded rows satisfy rows[n] = rows[0] * induced^n.
struct MeasuredWalk {
  std::vector<ProbabilityVector> probabilities;  ///< q^(0) .. q^(steps)
  TransitionMatrix induced;                      ///< V (d x d) or W (d^2 x d^2)
  DensityMatrix final_state;
};
MeasuredWalk measured_walk(const DensityMatrix& rho0, MeasurementMode mode,
                           const ProbabilityVector& weights,
                           const std::optional<FiducialVector>& fiducial, long long steps);

}  // namespace walks::quantum
