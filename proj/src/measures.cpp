#include "walks/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace walks {

namespace {

constexpr double kMajorizationSlack = 1e-12;

}  // namespace

LorenzProfile lorenz(const ProbabilityVector& x) {
  const int n = x.size();
  LorenzProfile profile;
  profile.ascending_order.resize(n);
  std::iota(profile.ascending_order.begin(), profile.ascending_order.end(), 0);
  std::stable_sort(profile.ascending_order.begin(), profile.ascending_order.end(),
                   [&](int a, int b) { return x[a] < x[b]; });
  profile.values.resize(n);
  double cumulative = 0.0;
  for (int a = 0; a < n; ++a) {
    cumulative += x[profile.ascending_order[a]];
    profile.values[a] = cumulative;
  }
  return profile;
}

bool majorizes(const ProbabilityVector& x, const ProbabilityVector& y) {
  if (x.size() != y.size()) throw domain_error("majorization requires equal lengths");
  const LorenzProfile lx = lorenz(x);
  const LorenzProfile ly = lorenz(y);
  for (int a = 0; a < x.size(); ++a) {
    if (lx.values[a] > ly.values[a] + kMajorizationSlack) return false;
  }
  return true;
}

double gini(const ProbabilityVector& x) {
  const LorenzProfile profile = lorenz(x);
  const double sum = std::accumulate(profile.values.begin(), profile.values.end(), 0.0);
  return 1.0 - 2.0 * sum / (x.size() + 1);
}

double gini_pairwise(const ProbabilityVector& x) {
  const int n = x.size();
  double sum = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) sum += std::abs(x[a] - x[b]);
  return sum / (2.0 * (n + 1));
}

double entropy(const ProbabilityVector& x) {
  double h = 0.0;
  for (int a = 0; a < x.size(); ++a) {
    const double p = x[a];
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double entropy_bits(const ProbabilityVector& x) { return entropy(x) / std::log(2.0); }

double tv_distance(const ProbabilityVector& x, const ProbabilityVector& y) {
  if (x.size() != y.size()) throw domain_error("total variation requires equal lengths");
  double sum = 0.0;
  for (int a = 0; a < x.size(); ++a) sum += std::abs(x[a] - y[a]);
  return 0.5 * sum;
}

}  // namespace walks
