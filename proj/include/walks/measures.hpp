#pragma once

#include <vector>

#include "walks/birkhoff.hpp"

namespace walks {

/// Cumulative sums of the entries sorted in ascending order:
/// L[a] = x_(0) + ... + x_(a), so L[n-1] = 1.  Ties keep original index
/// order (stable sort), recorded in `ascending_order`.
struct LorenzProfile {
  std::vector<double> values;
  std::vector<int> ascending_order;
};

LorenzProfile lorenz(const ProbabilityVector& x);

/// x majorizes y: every Lorenz partial sum of x is <= the corresponding one
/// of y (within slack 1e-12).  "More unequal" vectors majorize flatter ones;
/// this is a preorder, and permutations of each other majorize both ways.
bool majorizes(const ProbabilityVector& x, const ProbabilityVector& y);

/// Gini inequality index from the Lorenz profile:
/// G(x) = 1 - (2 / (n+1)) * sum_a L[a].
/// Ranges over [0, (n-1)/(n+1)]: 0 for uniform, (n-1)/(n+1) for a point mass.
double gini(const ProbabilityVector& x);

/// Same index via pairwise absolute differences:
/// G(x) = (1 / (2 (n+1))) * sum_{a,b} |x_a - x_b|.  Agrees with gini() to 1e-10.
double gini_pairwise(const ProbabilityVector& x);

/// Shannon entropy in nats, with 0 * ln 0 = 0.  Range [0, ln n].
double entropy(const ProbabilityVector& x);

/// Shannon entropy in bits (display convenience).
double entropy_bits(const ProbabilityVector& x);

/// Total variation distance: (1/2) sum_a |x_a - y_a|, which equals the
/// largest discrepancy |x(A) - y(A)| over subsets A.  Range [0, 1].
double tv_distance(const ProbabilityVector& x, const ProbabilityVector& y);

}  // namespace walks
