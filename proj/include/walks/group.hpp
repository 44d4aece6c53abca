#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "walks/errors.hpp"

namespace walks {

/// Group elements are canonical indices 0..order-1.  For product groups the
/// index packs a pair (alpha, beta) as nu = d*alpha + beta.
using GroupElement = int;

/// A permutation of {0..n-1} viewed as the 0/1 matrix M with
/// M[a][pi(a)] = 1, acting on row vectors from the right: (x * M)[pi(a)] = x[a].
class PermutationMatrix {
 public:
  /// `image[a]` is pi(a); must be a bijection on {0..n-1}.
  explicit PermutationMatrix(std::vector<int> image);

  int size() const { return static_cast<int>(image_.size()); }
  int image(int a) const;

  /// Entry M[a][b] = 1 iff b == pi(a).
  double at(int a, int b) const { return image(a) == b ? 1.0 : 0.0; }

  /// Row-major dense 0/1 matrix.
  std::vector<double> dense() const;

  /// Row-vector action y = x * M, i.e. y[pi(a)] = x[a].
  std::vector<double> apply_row(std::span<const double> x) const;

  /// Matrix product (this * other): first permute by `this`, then by `other`.
  PermutationMatrix operator*(const PermutationMatrix& other) const;

  /// Transpose, which equals the inverse permutation.
  PermutationMatrix transpose() const;

  bool operator==(const PermutationMatrix& other) const = default;

 private:
  std::vector<int> image_;
};

enum class GroupKind { Cyclic, Product };

/// A finite Abelian group presented concretely: either Z(d) with addition
/// mod d, or the product Z(d) x Z(d) with componentwise addition mod d
/// (the translation group of a d-level quantum system modulo phases).
class GroupSpec {
 public:
  static GroupSpec cyclic(int d);
  static GroupSpec product(int d);

  GroupKind kind() const { return kind_; }
  int d() const { return d_; }
  /// Number of elements: d for cyclic, d*d for product.
  int order() const { return order_; }

  /// Group operation on canonical indices.  For product groups this is
  /// componentwise addition mod d of the decoded pairs, NOT addition mod d^2.
  GroupElement add(GroupElement g, GroupElement h) const;

  GroupElement inverse(GroupElement g) const;

  /// Decode nu -> (alpha, beta) with alpha = nu / d, beta = nu % d.
  /// Only defined for product groups.
  std::pair<int, int> to_pair(GroupElement nu) const;

  /// Encode (alpha, beta) -> d*alpha + beta.  Only defined for product groups.
  GroupElement from_pair(int alpha, int beta) const;

  /// Permutation representation: M(r)[a][b] = 1 iff b = a + r.  This is a
  /// faithful homomorphism: M(r) M(s) = M(r + s), M(-r) = M(r)^T.
  PermutationMatrix permutation_rep(GroupElement r) const;

  /// Full order x order addition table, table[g][h] = g + h.
  /// Throws capacity_error when order > 4096.
  std::vector<std::vector<GroupElement>> cayley_table() const;

  bool operator==(const GroupSpec& other) const = default;

 private:
  GroupSpec(GroupKind kind, int d, int order) : kind_(kind), d_(d), order_(order) {}

  void check_element(GroupElement g) const;

  GroupKind kind_;
  int d_;
  int order_;
};

}  // namespace walks
