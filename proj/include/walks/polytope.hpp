#pragma once

#include <vector>

#include "walks/birkhoff.hpp"
#include "walks/group.hpp"

namespace walks {

enum class PolytopeKind {
  /// Convex hull of ALL permutations of the base vector (image of the full
  /// Birkhoff polytope).
  Full,
  /// Convex hull of the group-shifted copies x * M(r) only (image of the
  /// Birkhoff subpolytope of the group).
  Subgroup,
};

/// A convex polytope of probability vectors given by an explicit vertex
/// list: the set of points x * P reachable from a base vector x when P
/// ranges over (a subpolytope of) the doubly stochastic matrices.
class ProbPolytope {
 public:
  /// Vertices { x * M(r) : r in the group }, duplicates within 1e-10
  /// (max norm) removed.  Walk iterates x * P^k generate a shrinking nested
  /// family of these polytopes.
  static ProbPolytope subgroup(const GroupSpec& group, const ProbabilityVector& x);

  /// Vertices = all distinct permutations of x (entries equal within 1e-10
  /// treated as identical).  Limited to n <= 8 (up to 8! vertices).
  static ProbPolytope full(const ProbabilityVector& x);

  PolytopeKind kind() const { return kind_; }
  int ambient() const { return ambient_; }
  const std::vector<ProbabilityVector>& vertices() const { return vertices_; }

  /// Feasibility of y = sum_j lambda_j v_j, lambda >= 0, sum lambda = 1,
  /// decided by a phase-one simplex; the verdict is max-norm residual <= tol.
  bool contains(const ProbabilityVector& y, double tol = 1e-9) const;

  /// Every vertex of *this lies in `other`.
  bool is_subset_of(const ProbPolytope& other, double tol = 1e-9) const;

  /// Affine dimension: the rank of { v_i - v_0 }, counting singular values
  /// above 1e-9.  Zero for a single point; n-1 for a full simplex.
  int dimension() const;

  /// Largest Euclidean distance from `center` to a vertex (e.g. about the
  /// uniform vector, which every one of these polytopes contains).
  double circumradius_about(const ProbabilityVector& center) const;

 private:
  ProbPolytope(PolytopeKind kind, int ambient, std::vector<ProbabilityVector> vertices)
      : kind_(kind), ambient_(ambient), vertices_(std::move(vertices)) {}

  PolytopeKind kind_;
  int ambient_;
  std::vector<ProbabilityVector> vertices_;
};

}  // namespace walks
