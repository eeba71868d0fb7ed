#pragma once

#include <span>
#include <string>
#include <vector>

#include "rescomp/core/types.hpp"

namespace rescomp {

/// Ordered list of local dimensions (m_1, ..., m_s) of spatially separated
/// subsystems. The total Hilbert-space dimension is their product.
class SubsystemShape {
 public:
  SubsystemShape() : dims_{1} {}
  explicit SubsystemShape(std::vector<int> dims);
  SubsystemShape(std::initializer_list<int> dims) : SubsystemShape(std::vector<int>(dims)) {}

  const std::vector<int>& dims() const noexcept { return dims_; }
  int factors() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int factor) const { return dims_.at(static_cast<std::size_t>(factor)); }
  Index total() const noexcept { return total_; }

  /// Shape of n copies: the dims list repeated n times.
  SubsystemShape n_copy(int n) const;
  SubsystemShape concat(const SubsystemShape& other) const;
  /// Shape of the listed factors, in the listed order.
  SubsystemShape select(std::span<const int> factors) const;

  std::string to_string() const;

  friend bool operator==(const SubsystemShape&, const SubsystemShape&) = default;

 private:
  std::vector<int> dims_;
  Index total_ = 1;
};

/// Throws InvalidPermutation unless perm is a permutation of 0..count-1.
void check_permutation(std::span<const int> perm, int count);

/// Throws EmptyKeepSet / InvalidArgument for a bad list of kept factors.
void check_keep_set(std::span<const int> keep, int count);

}  // namespace rescomp
