#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "walks/birkhoff.hpp"
#include "walks/group.hpp"
#include "walks/quantum.hpp"

namespace walks {

/// Step distribution p(nu) = C(n-1, nu) f^nu (1-f)^(n-1-nu), nu = 0..n-1:
/// the binomial family used by the worked product-group examples.
ProbabilityVector binomial_step_distribution(int n, double f);

/// Quantum half of an experiment: which measurement drives the walk.
struct QuantumConfig {
  quantum::MeasurementMode mode = quantum::MeasurementMode::Projective;
  int d = 3;
  ProbabilityVector weights{std::vector<double>{1.0}};  ///< length d or d^2 by mode
  std::uint64_t fiducial_seed = 1;                      ///< povm mode only

  enum class InitialState { Basis, Momentum, MaximallyMixed };
  InitialState rho0_kind = InitialState::Basis;
  int rho0_index = 0;
};

/// A fully described walk experiment, parsed from JSON.  Exactly one of
/// {step (classical), quantum} is present.
///
/// Schema:
///   {
///     "group": {"kind": "cyclic" | "product", "d": int},     (classical)
///     "step_distribution": [floats] | {"binomial_f": float}, (classical)
///     "initial": [floats] | {"delta": int} | "uniform",      (optional; default delta 0)
///     "steps": int >= 0,
///     "epsilon": float in (0, 1),                            (optional; default 0.1)
///     "quantum": {                                           (quantum)
///       "mode": "projective" | "povm",
///       "d": odd int >= 3 (povm) or int >= 2 (projective),
///       "weights": [floats],                                 (length d or d^2)
///       "fiducial_seed": int,                                (optional; povm)
///       "steps": int,                                        (alias for top-level steps)
///       "rho0": {"basis_state": j} | {"momentum_state": j} | {"maximally_mixed": true}
///     }
///   }
///
/// The environment variable ABELIAN_WALK_SEED, when set, overrides
/// fiducial_seed.
struct ExperimentConfig {
  std::optional<GroupSpec> group;
  std::optional<ProbabilityVector> step;
  std::optional<ProbabilityVector> initial;  ///< classical; defaults to delta at 0
  std::optional<QuantumConfig> quantum;
  long long steps = 0;
  double epsilon = 0.1;

  /// Structural errors throw parse_error; semantic ones validation_error
  /// (or capacity_error for size limits).
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  bool is_quantum() const { return quantum.has_value(); }
  /// Group the outcome distributions live on (cyclic d for projective mode,
  /// product d for povm mode, the configured group classically).
  GroupSpec outcome_group() const;
};

struct TrajectoryRow {
  long long n = 0;
  std::vector<double> q;
  double entropy_nats = 0.0;
  double gini = 0.0;
  double tv_to_uniform = 0.0;
};

struct SpectrumSummary {
  double e_max = 0.0;
  bool ergodic = false;
  std::optional<double> mixing_heuristic;  ///< absent when not ergodic
  std::vector<std::complex<double>> eigenvalues;
  std::vector<std::string> labels;
};

struct PolytopeSummary {
  int window = 0;  ///< chain checked for steps 0..window
  std::vector<int> vertex_counts;
  std::vector<bool> subset_chain;  ///< [k-1]: hull(q^(k)) inside hull(q^(k-1))
  int initial_dimension = 0;
  double initial_circumradius = 0.0;  ///< about the uniform vector
};

/// Each flag is computed from the realized trajectory, not assumed.
struct MonotonicityFlags {
  bool majorization_chain = false;
  bool entropy_nondecreasing = false;
  bool gini_nonincreasing = false;
  bool tv_nonincreasing = false;
};

struct TrajectoryReport {
  std::string mode;  ///< "classical", "projective" or "povm"
  GroupSpec group = GroupSpec::cyclic(2);
  long long steps = 0;
  double epsilon = 0.1;
  std::vector<TrajectoryRow> rows;
  std::optional<SpectrumSummary> spectrum;
  std::optional<long long> empirical_mixing_time;
  long long mixing_search_window = 0;
  PolytopeSummary polytope;
  MonotonicityFlags monotone;
  /// Quantum runs: the induced classical transition matrix (row-major) and,
  /// when it is a group circulant, its step distribution.
  std::optional<std::vector<double>> induced_matrix;
  std::optional<std::vector<double>> induced_step;
};

TrajectoryReport run_experiment(const ExperimentConfig& config);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;  ///< non-empty explains a failure or records a value
};

struct VerifySummary {
  std::vector<VerifyCheck> checks;
  bool all_pass = false;
};

/// Re-derives the structural guarantees from the realized run: double
/// stochasticity, the uniform fixed point, subpolytope membership, the
/// monotone measure chains, polytope nesting, and (for quantum runs) that
/// the density-matrix simulation matches the induced classical matrix.
VerifySummary verify_experiment(const ExperimentConfig& config);

/// CSV with header  n,q_0,...,q_{l-1},entropy_nats,gini,tv_to_u  and values
/// printed to 12 significant digits.
std::string trajectory_csv(const TrajectoryReport& report);

/// Trajectory rows as a JSON array (alternative to CSV).
std::string trajectory_json(const TrajectoryReport& report);

/// Full report as JSON (spectrum, polytope, flags, induced matrix, ...).
std::string report_json(const TrajectoryReport& report);

/// Verification outcome as JSON.
std::string verify_json(const VerifySummary& summary);

/// Writes via a temporary file in the same directory plus an atomic rename,
/// so a failed run never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Optional seed override read from ABELIAN_WALK_SEED.
std::optional<std::uint64_t> seed_override_from_env();

}  // namespace walks
