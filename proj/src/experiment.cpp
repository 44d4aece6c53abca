#include "walks/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "walks/measures.hpp"
#include "walks/polytope.hpp"

namespace walks {

namespace {

using nlohmann::json;

constexpr long long kMaxConfigSteps = 1000000;
constexpr int kPolytopeWindowCap = 8;  // nesting chain checked on a short prefix

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

const json& require_key(const json& j, const char* key, const char* where) {
  const auto it = j.find(key);
  if (it == j.end())
    throw parse_error(std::string("missing key \"") + key + "\" in " + where);
  return *it;
}

long long require_integer(const json& v, const char* what) {
  if (!v.is_number_integer())
    throw parse_error(std::string(what) + " must be an integer");
  return v.get<long long>();
}

double require_number(const json& v, const char* what) {
  if (!v.is_number())
    throw parse_error(std::string(what) + " must be a number");
  return v.get<double>();
}

std::string require_string(const json& v, const char* what) {
  if (!v.is_string())
    throw parse_error(std::string(what) + " must be a string");
  return v.get<std::string>();
}

std::vector<double> require_number_array(const json& v, const char* what) {
  if (!v.is_array())
    throw parse_error(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(require_number(e, what));
  return out;
}

GroupSpec parse_group(const json& v) {
  if (!v.is_object()) throw parse_error("\"group\" must be an object");
  const std::string kind = require_string(require_key(v, "kind", "\"group\""), "group kind");
  const long long d = require_integer(require_key(v, "d", "\"group\""), "group d");
  if (d < 2 || d > 4096) throw validation_error("group d out of range [2, 4096]");
  if (kind == "cyclic") return GroupSpec::cyclic(static_cast<int>(d));
  if (kind == "product") return GroupSpec::product(static_cast<int>(d));
  throw parse_error("group kind must be \"cyclic\" or \"product\"");
}

QuantumConfig parse_quantum(const json& v) {
  if (!v.is_object()) throw parse_error("\"quantum\" must be an object");
  QuantumConfig qc;
  const std::string mode = require_string(require_key(v, "mode", "\"quantum\""), "quantum mode");
  if (mode == "projective") {
    qc.mode = quantum::MeasurementMode::Projective;
  } else if (mode == "povm") {
    qc.mode = quantum::MeasurementMode::Povm;
  } else {
    throw parse_error("quantum mode must be \"projective\" or \"povm\"");
  }
  const long long d = require_integer(require_key(v, "d", "\"quantum\""), "quantum d");
  if (d < 2 || d > 63) throw validation_error("quantum d out of range [2, 63]");
  if (qc.mode == quantum::MeasurementMode::Povm && (d < 3 || d % 2 == 0))
    throw validation_error("povm mode requires odd d >= 3");
  qc.d = static_cast<int>(d);

  qc.weights = ProbabilityVector(
      require_number_array(require_key(v, "weights", "\"quantum\""), "quantum weights"));
  const int expected = qc.mode == quantum::MeasurementMode::Projective ? qc.d : qc.d * qc.d;
  if (qc.weights.size() != expected)
    throw validation_error("quantum weights must have length " + std::to_string(expected));

  if (const auto it = v.find("fiducial_seed"); it != v.end())
    qc.fiducial_seed = static_cast<std::uint64_t>(require_integer(*it, "fiducial_seed"));

  const json& rho0 = require_key(v, "rho0", "\"quantum\"");
  if ((rho0.is_string() && rho0.get<std::string>() == "maximally_mixed") ||
      (rho0.is_object() && rho0.contains("maximally_mixed") &&
       rho0.at("maximally_mixed").is_boolean() && rho0.at("maximally_mixed").get<bool>())) {
    qc.rho0_kind = QuantumConfig::InitialState::MaximallyMixed;
  } else if (rho0.is_object() && rho0.contains("basis_state")) {
    qc.rho0_kind = QuantumConfig::InitialState::Basis;
    qc.rho0_index = static_cast<int>(require_integer(rho0.at("basis_state"), "basis_state"));
  } else if (rho0.is_object() && rho0.contains("momentum_state")) {
    qc.rho0_kind = QuantumConfig::InitialState::Momentum;
    qc.rho0_index = static_cast<int>(require_integer(rho0.at("momentum_state"), "momentum_state"));
  } else {
    throw parse_error(
        "rho0 must be {\"basis_state\": j}, {\"momentum_state\": j} or {\"maximally_mixed\": true}");
  }
  if (qc.rho0_kind != QuantumConfig::InitialState::MaximallyMixed &&
      (qc.rho0_index < 0 || qc.rho0_index >= qc.d))
    throw validation_error("rho0 index out of range [0, d)");
  return qc;
}

quantum::DensityMatrix make_rho0(const QuantumConfig& qc) {
  switch (qc.rho0_kind) {
    case QuantumConfig::InitialState::Basis:
      return quantum::DensityMatrix::basis_state(qc.d, qc.rho0_index);
    case QuantumConfig::InitialState::Momentum:
      return quantum::DensityMatrix::momentum_state(qc.d, qc.rho0_index);
    case QuantumConfig::InitialState::MaximallyMixed:
    default:
      return quantum::DensityMatrix::maximally_mixed(qc.d);
  }
}

SpectrumSummary summarize_spectrum(const Spectrum& s, double epsilon) {
  SpectrumSummary out;
  out.e_max = s.e_max;
  out.ergodic = is_ergodic(s);
  if (out.ergodic) out.mixing_heuristic = mixing_time_heuristic(s, epsilon);
  out.eigenvalues = s.eigenvalues;
  out.labels = s.labels;
  return out;
}

/// Everything both run_experiment and verify_experiment need: the realized
/// outcome rows and the transition matrix they evolve under.
struct Artifacts {
  std::string mode;
  GroupSpec group;
  TransitionMatrix matrix;
  std::vector<ProbabilityVector> rows;
  std::optional<std::vector<double>> induced_matrix;  // quantum runs only
};

Artifacts realize(const ExperimentConfig& config) {
  const GroupSpec g = config.outcome_group();
  if (!config.is_quantum()) {
    const StepDistribution p(g, *config.step);
    TransitionMatrix matrix = TransitionMatrix::from_step(p);
    const ProbabilityVector q0 = config.initial.value_or(ProbabilityVector::delta(g.order(), 0));
    auto rows = trajectory(q0, matrix, config.steps);
    return {"classical", g, std::move(matrix), std::move(rows), std::nullopt};
  }

  const QuantumConfig& qc = *config.quantum;
  std::optional<quantum::FiducialVector> eta;
  if (qc.mode == quantum::MeasurementMode::Povm)
    eta = quantum::FiducialVector::random(qc.d, qc.fiducial_seed);
  auto walk = quantum::measured_walk(make_rho0(qc), qc.mode, qc.weights, eta, config.steps);
  const std::string mode =
      qc.mode == quantum::MeasurementMode::Projective ? "projective" : "povm";
  std::optional<std::vector<double>> dense = walk.induced.row_major();
  return {mode, g, std::move(walk.induced), std::move(walk.probabilities), std::move(dense)};
}

MonotonicityFlags compute_monotone(const std::vector<ProbabilityVector>& rows,
                                   const std::vector<TrajectoryRow>& derived) {
  constexpr double slack = 1e-12;
  MonotonicityFlags flags{true, true, true, true};
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    if (!majorizes(rows[k], rows[k + 1])) flags.majorization_chain = false;
    if (derived[k + 1].entropy_nats < derived[k].entropy_nats - slack)
      flags.entropy_nondecreasing = false;
    if (derived[k + 1].gini > derived[k].gini + slack) flags.gini_nonincreasing = false;
    if (derived[k + 1].tv_to_uniform > derived[k].tv_to_uniform + slack)
      flags.tv_nonincreasing = false;
  }
  return flags;
}

std::vector<TrajectoryRow> derive_rows(const std::vector<ProbabilityVector>& rows,
                                       const ProbabilityVector& u) {
  std::vector<TrajectoryRow> out;
  out.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    TrajectoryRow row;
    row.n = static_cast<long long>(k);
    row.q = rows[k].entries();
    row.entropy_nats = entropy(rows[k]);
    row.gini = gini(rows[k]);
    row.tv_to_uniform = tv_distance(rows[k], u);
    out.push_back(std::move(row));
  }
  return out;
}

PolytopeSummary summarize_polytopes(const GroupSpec& g,
                                    const std::vector<ProbabilityVector>& rows,
                                    const ProbabilityVector& u) {
  PolytopeSummary out;
  out.window = std::min<int>(static_cast<int>(rows.size()) - 1, kPolytopeWindowCap);
  std::vector<ProbPolytope> polys;
  polys.reserve(out.window + 1);
  for (int k = 0; k <= out.window; ++k) {
    polys.push_back(ProbPolytope::subgroup(g, rows[k]));
    out.vertex_counts.push_back(static_cast<int>(polys.back().vertices().size()));
    if (k > 0) out.subset_chain.push_back(polys[k].is_subset_of(polys[k - 1]));
  }
  out.initial_dimension = polys.front().dimension();
  out.initial_circumradius = polys.front().circumradius_about(u);
  return out;
}

}  // namespace

ProbabilityVector binomial_step_distribution(int n, double f) {
  if (n < 1) throw domain_error("binomial step distribution requires n >= 1");
  if (!(f >= 0.0 && f <= 1.0)) throw validation_error("binomial parameter f must lie in [0, 1]");
  if (f == 0.0) return ProbabilityVector::delta(n, 0);
  if (f == 1.0) return ProbabilityVector::delta(n, n - 1);
  const int m = n - 1;
  std::vector<double> p(n);
  for (int nu = 0; nu <= m; ++nu) {
    const double log_choose =
        std::lgamma(m + 1.0) - std::lgamma(nu + 1.0) - std::lgamma(m - nu + 1.0);
    p[nu] = std::exp(log_choose + nu * std::log(f) + (m - nu) * std::log1p(-f));
  }
  return ProbabilityVector::renormalized(std::move(p));
}

GroupSpec ExperimentConfig::outcome_group() const {
  if (!quantum) {
    if (!group) throw validation_error("classical experiment requires a \"group\"");
    return *group;
  }
  return quantum->mode == quantum::MeasurementMode::Projective ? GroupSpec::cyclic(quantum->d)
                                                               : GroupSpec::product(quantum->d);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw parse_error("top level must be a JSON object");

  ExperimentConfig c;
  std::optional<long long> steps_top;
  std::optional<long long> steps_quantum;

  if (const auto it = j.find("quantum"); it != j.end()) c.quantum = parse_quantum(*it);

  if (c.quantum) {
    for (const char* key : {"group", "step_distribution", "initial"}) {
      if (j.contains(key))
        throw validation_error(std::string("\"") + key + "\" is not allowed with \"quantum\"");
    }
    if (const auto it = j.at("quantum").find("steps"); it != j.at("quantum").end())
      steps_quantum = require_integer(*it, "quantum steps");
  } else {
    c.group = parse_group(require_key(j, "group", "the configuration"));
    const json& step = require_key(j, "step_distribution", "the configuration");
    if (step.is_array()) {
      c.step = ProbabilityVector(require_number_array(step, "step_distribution"));
    } else if (step.is_object() && step.contains("binomial_f")) {
      c.step = binomial_step_distribution(c.group->order(),
                                          require_number(step.at("binomial_f"), "binomial_f"));
    } else {
      throw parse_error("step_distribution must be an array or {\"binomial_f\": f}");
    }
    if (c.step->size() != c.group->order())
      throw validation_error("step_distribution length " + std::to_string(c.step->size()) +
                             " does not match group order " + std::to_string(c.group->order()));

    if (const auto it = j.find("initial"); it != j.end()) {
      if (it->is_array()) {
        c.initial = ProbabilityVector(require_number_array(*it, "initial"));
      } else if (it->is_object() && it->contains("delta")) {
        const long long at = require_integer(it->at("delta"), "initial delta");
        if (at < 0 || at >= c.group->order())
          throw validation_error("initial delta position out of range");
        c.initial = ProbabilityVector::delta(c.group->order(), static_cast<int>(at));
      } else if (it->is_string() && it->get<std::string>() == "uniform") {
        c.initial = ProbabilityVector::uniform(c.group->order());
      } else {
        throw parse_error("initial must be an array, {\"delta\": j} or \"uniform\"");
      }
      if (c.initial->size() != c.group->order())
        throw validation_error("initial length does not match group order");
    }
  }

  if (const auto it = j.find("steps"); it != j.end())
    steps_top = require_integer(*it, "steps");
  if (steps_top && steps_quantum && *steps_top != *steps_quantum)
    throw validation_error("steps given twice with different values");
  if (!steps_top && !steps_quantum) throw parse_error("missing key \"steps\"");
  c.steps = steps_top ? *steps_top : *steps_quantum;
  if (c.steps < 0) throw validation_error("steps must be >= 0");
  if (c.steps > kMaxConfigSteps) throw capacity_error("steps limited to 1e6");

  if (const auto it = j.find("epsilon"); it != j.end()) {
    c.epsilon = require_number(*it, "epsilon");
    if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
      throw validation_error("epsilon must lie in (0, 1)");
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig c = from_json_text(buffer.str());
  if (c.quantum) {
    if (const auto seed = seed_override_from_env()) c.quantum->fiducial_seed = *seed;
  }
  return c;
}

TrajectoryReport run_experiment(const ExperimentConfig& config) {
  Artifacts art = realize(config);
  TrajectoryReport r;
  r.mode = art.mode;
  r.group = art.group;
  r.steps = config.steps;
  r.epsilon = config.epsilon;

  const ProbabilityVector u = ProbabilityVector::uniform(art.group.order());
  r.rows = derive_rows(art.rows, u);
  r.monotone = compute_monotone(art.rows, r.rows);
  r.polytope = summarize_polytopes(art.group, art.rows, u);

  if (const auto& cert = art.matrix.certificate()) {
    r.spectrum = summarize_spectrum(spectrum(*cert), config.epsilon);
    r.induced_step = cert->probabilities().entries();
  }
  r.induced_matrix = std::move(art.induced_matrix);
  if (!config.is_quantum()) r.induced_step.reset();  // only reported for quantum runs

  r.mixing_search_window = std::max<long long>(config.steps, 1024);
  r.empirical_mixing_time =
      mixing_time_empirical(art.rows.front(), art.matrix, config.epsilon, r.mixing_search_window);
  return r;
}

namespace {

void add_check(VerifySummary& s, const std::string& name, bool pass, std::string detail = "") {
  s.checks.push_back({name, pass, std::move(detail)});
}

}  // namespace

VerifySummary verify_experiment(const ExperimentConfig& config) {
  Artifacts art = realize(config);
  const int n = art.group.order();
  VerifySummary s;

  {
    double worst = 0.0;
    for (int a = 0; a < n; ++a) {
      double row_sum = 0.0, col_sum = 0.0;
      for (int b = 0; b < n; ++b) {
        row_sum += art.matrix.at(a, b);
        col_sum += art.matrix.at(b, a);
      }
      worst = std::max({worst, std::abs(row_sum - 1.0), std::abs(col_sum - 1.0)});
    }
    add_check(s, "transition matrix is doubly stochastic", worst <= 1e-10,
              "max row/column sum deviation " + fmt_short(worst));
  }
  {
    const ProbabilityVector u = ProbabilityVector::uniform(n);
    const auto image = art.matrix.apply_row(u.span());
    double worst = 0.0;
    for (int b = 0; b < n; ++b) worst = std::max(worst, std::abs(image[b] - 1.0 / n));
    add_check(s, "uniform vector is a fixed point", worst <= 1e-12,
              "max deviation " + fmt_short(worst));
  }
  {
    const auto member = subpolytope_membership(art.group, art.matrix);
    add_check(s, "matrix lies in the group subpolytope", member.has_value(),
              member ? "group circulant reconstruction succeeded"
                     : "matrix is not a group circulant");
  }
  {
    double worst = 0.0;
    std::vector<double> q = art.rows.front().entries();
    for (std::size_t k = 1; k < art.rows.size(); ++k) {
      q = art.matrix.apply_row(q);
      for (int b = 0; b < n; ++b) worst = std::max(worst, std::abs(q[b] - art.rows[k][b]));
    }
    add_check(s, "trajectory matches transition matrix powers", worst <= 1e-9,
              "max deviation " + fmt_short(worst));
  }
  {
    const ProbabilityVector u = ProbabilityVector::uniform(n);
    const auto derived = derive_rows(art.rows, u);
    const MonotonicityFlags flags = compute_monotone(art.rows, derived);
    add_check(s, "each state majorizes its successor", flags.majorization_chain);
    add_check(s, "entropy is nondecreasing", flags.entropy_nondecreasing);
    add_check(s, "gini index is nonincreasing", flags.gini_nonincreasing);
    add_check(s, "total variation to uniform is nonincreasing", flags.tv_nonincreasing);
    const PolytopeSummary poly = summarize_polytopes(art.group, art.rows, u);
    const bool nested =
        std::all_of(poly.subset_chain.begin(), poly.subset_chain.end(), [](bool b) { return b; });
    add_check(s, "reachable polytopes are nested", nested,
              "checked " + std::to_string(poly.subset_chain.size()) + " consecutive steps");
  }

  s.all_pass = std::all_of(s.checks.begin(), s.checks.end(),
                           [](const VerifyCheck& c) { return c.pass; });
  return s;
}

std::string trajectory_csv(const TrajectoryReport& report) {
  std::ostringstream out;
  const int n = report.rows.empty() ? 0 : static_cast<int>(report.rows.front().q.size());
  out << "n";
  for (int i = 0; i < n; ++i) out << ",q_" << i;
  out << ",entropy_nats,gini,tv_to_u\n";
  for (const TrajectoryRow& row : report.rows) {
    out << row.n;
    for (double v : row.q) out << ',' << fmt12(v);
    out << ',' << fmt12(row.entropy_nats) << ',' << fmt12(row.gini) << ','
        << fmt12(row.tv_to_uniform) << '\n';
  }
  return out.str();
}

namespace {

json rows_to_json(const TrajectoryReport& report) {
  json rows = json::array();
  for (const TrajectoryRow& row : report.rows) {
    rows.push_back({{"n", row.n},
                    {"q", row.q},
                    {"entropy_nats", row.entropy_nats},
                    {"gini", row.gini},
                    {"tv_to_u", row.tv_to_uniform}});
  }
  return rows;
}

}  // namespace

std::string trajectory_json(const TrajectoryReport& report) {
  return rows_to_json(report).dump(2) + "\n";
}

std::string report_json(const TrajectoryReport& report) {
  json j;
  j["mode"] = report.mode;
  j["group"] = {{"kind", report.group.kind() == GroupKind::Cyclic ? "cyclic" : "product"},
                {"d", report.group.d()},
                {"order", report.group.order()}};
  j["steps"] = report.steps;
  j["epsilon"] = report.epsilon;
  j["rows"] = rows_to_json(report);
  if (report.spectrum) {
    json eig = json::array();
    for (const auto& e : report.spectrum->eigenvalues)
      eig.push_back({e.real(), e.imag()});
    j["spectrum"] = {{"e_max", report.spectrum->e_max},
                     {"ergodic", report.spectrum->ergodic},
                     {"eigenvalues", eig},
                     {"labels", report.spectrum->labels}};
    if (report.spectrum->mixing_heuristic)
      j["spectrum"]["mixing_time_heuristic"] = *report.spectrum->mixing_heuristic;
  }
  if (report.empirical_mixing_time)
    j["empirical_mixing_time"] = *report.empirical_mixing_time;
  else
    j["empirical_mixing_time"] = nullptr;
  j["mixing_search_window"] = report.mixing_search_window;
  j["polytope"] = {{"window", report.polytope.window},
                   {"vertex_counts", report.polytope.vertex_counts},
                   {"subset_chain", report.polytope.subset_chain},
                   {"initial_dimension", report.polytope.initial_dimension},
                   {"initial_circumradius", report.polytope.initial_circumradius}};
  j["monotone"] = {{"majorization_chain", report.monotone.majorization_chain},
                   {"entropy_nondecreasing", report.monotone.entropy_nondecreasing},
                   {"gini_nonincreasing", report.monotone.gini_nonincreasing},
                   {"tv_nonincreasing", report.monotone.tv_nonincreasing}};
  if (report.induced_matrix) j["induced_matrix"] = *report.induced_matrix;
  if (report.induced_step) j["induced_step_distribution"] = *report.induced_step;
  return j.dump(2) + "\n";
}

std::string verify_json(const VerifySummary& summary) {
  json checks = json::array();
  for (const VerifyCheck& c : summary.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  json j = {{"checks", checks}, {"all_pass", summary.all_pass}};
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw error("failed renaming temporary file onto " + path.string());
  }
}

std::optional<std::uint64_t> seed_override_from_env() {
  const char* raw = std::getenv("ABELIAN_WALK_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t value = 0;
  const char* end = raw + std::string_view(raw).size();
  const auto [ptr, err] = std::from_chars(raw, end, value);
  if (err != std::errc{} || ptr != end)
    throw validation_error("ABELIAN_WALK_SEED must be an unsigned integer");
  return value;
}

}  // namespace walks
