#include "walks/group.hpp"

#include <algorithm>
#include <string>

namespace walks {

namespace {

constexpr int kMaxTableOrder = 4096;

}  // namespace

PermutationMatrix::PermutationMatrix(std::vector<int> image) : image_(std::move(image)) {
  const int n = static_cast<int>(image_.size());
  if (n == 0) throw domain_error("permutation must be non-empty");
  std::vector<char> seen(n, 0);
  for (int v : image_) {
    if (v < 0 || v >= n) throw domain_error("permutation image out of range");
    if (seen[v]) throw domain_error("permutation image repeats a value");
    seen[v] = 1;
  }
}

int PermutationMatrix::image(int a) const {
  if (a < 0 || a >= size()) throw domain_error("permutation index out of range");
  return image_[a];
}

std::vector<double> PermutationMatrix::dense() const {
  const int n = size();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a) m[static_cast<std::size_t>(a) * n + image_[a]] = 1.0;
  return m;
}

std::vector<double> PermutationMatrix::apply_row(std::span<const double> x) const {
  const int n = size();
  if (static_cast<int>(x.size()) != n) throw domain_error("vector length does not match permutation size");
  std::vector<double> y(n, 0.0);
  for (int a = 0; a < n; ++a) y[image_[a]] = x[a];
  return y;
}

PermutationMatrix PermutationMatrix::operator*(const PermutationMatrix& other) const {
  if (size() != other.size()) throw domain_error("permutation sizes do not match");
  std::vector<int> composed(image_.size());
  for (int a = 0; a < size(); ++a) composed[a] = other.image_[image_[a]];
  return PermutationMatrix(std::move(composed));
}

PermutationMatrix PermutationMatrix::transpose() const {
  std::vector<int> inv(image_.size());
  for (int a = 0; a < size(); ++a) inv[image_[a]] = a;
  return PermutationMatrix(std::move(inv));
}

GroupSpec GroupSpec::cyclic(int d) {
  if (d < 2) throw domain_error("cyclic group requires d >= 2");
  return GroupSpec(GroupKind::Cyclic, d, d);
}

GroupSpec GroupSpec::product(int d) {
  if (d < 2) throw domain_error("product group requires d >= 2");
  if (d > 64) throw capacity_error("product group order d*d exceeds 4096");
  return GroupSpec(GroupKind::Product, d, d * d);
}

void GroupSpec::check_element(GroupElement g) const {
  if (g < 0 || g >= order_)
    throw domain_error("group element " + std::to_string(g) + " out of range [0, " +
                       std::to_string(order_) + ")");
}

GroupElement GroupSpec::add(GroupElement g, GroupElement h) const {
  check_element(g);
  check_element(h);
  if (kind_ == GroupKind::Cyclic) return (g + h) % d_;
  const auto [ga, gb] = to_pair(g);
  const auto [ha, hb] = to_pair(h);
  return from_pair((ga + ha) % d_, (gb + hb) % d_);
}

GroupElement GroupSpec::inverse(GroupElement g) const {
  check_element(g);
  if (kind_ == GroupKind::Cyclic) return (d_ - g) % d_;
  const auto [a, b] = to_pair(g);
  return from_pair((d_ - a) % d_, (d_ - b) % d_);
}

std::pair<int, int> GroupSpec::to_pair(GroupElement nu) const {
  if (kind_ != GroupKind::Product) throw domain_error("pair coding is defined only for product groups");
  check_element(nu);
  return {nu / d_, nu % d_};
}

GroupElement GroupSpec::from_pair(int alpha, int beta) const {
  if (kind_ != GroupKind::Product) throw domain_error("pair coding is defined only for product groups");
  if (alpha < 0 || alpha >= d_ || beta < 0 || beta >= d_)
    throw domain_error("pair components out of range [0, d)");
  return d_ * alpha + beta;
}

PermutationMatrix GroupSpec::permutation_rep(GroupElement r) const {
  check_element(r);
  std::vector<int> image(order_);
  for (int a = 0; a < order_; ++a) image[a] = add(a, r);
  return PermutationMatrix(std::move(image));
}

std::vector<std::vector<GroupElement>> GroupSpec::cayley_table() const {
  if (order_ > kMaxTableOrder)
    throw capacity_error("cayley_table limited to order <= " + std::to_string(kMaxTableOrder));
  std::vector<std::vector<GroupElement>> table(order_, std::vector<GroupElement>(order_));
  for (int g = 0; g < order_; ++g)
    for (int h = 0; h < order_; ++h) table[g][h] = add(g, h);
  return table;
}

}  // namespace walks
