#include "rescomp/core/shape.hpp"

#include <algorithm>

#include "rescomp/core/error.hpp"

namespace rescomp {

SubsystemShape::SubsystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw Error(ErrorCode::InvalidArgument, "shape needs at least one factor");
  total_ = 1;
  for (int d : dims_) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "subsystem dimension must be >= 1");
    total_ *= d;
    if (total_ > kMaxDimension)
      throw Error(ErrorCode::DimensionCap, "total dimension exceeds " + std::to_string(kMaxDimension));
  }
}

SubsystemShape SubsystemShape::n_copy(int n) const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "copy count must be >= 1");
  std::vector<int> out;
  out.reserve(dims_.size() * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.insert(out.end(), dims_.begin(), dims_.end());
  return SubsystemShape(std::move(out));
}

SubsystemShape SubsystemShape::concat(const SubsystemShape& other) const {
  std::vector<int> out = dims_;
  out.insert(out.end(), other.dims_.begin(), other.dims_.end());
  return SubsystemShape(std::move(out));
}

SubsystemShape SubsystemShape::select(std::span<const int> factors) const {
  std::vector<int> out;
  for (int f : factors) out.push_back(dims_.at(static_cast<std::size_t>(f)));
  return SubsystemShape(std::move(out));
}

std::string SubsystemShape::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims_[i]);
  }
  return s;
}

void check_permutation(std::span<const int> perm, int count) {
  if (static_cast<int>(perm.size()) != count)
    throw Error(ErrorCode::InvalidPermutation, "permutation length does not match factor count");
  std::vector<bool> seen(static_cast<std::size_t>(count), false);
  for (int p : perm) {
    if (p < 0 || p >= count || seen[static_cast<std::size_t>(p)])
      throw Error(ErrorCode::InvalidPermutation, "not a permutation of the factors");
    seen[static_cast<std::size_t>(p)] = true;
  }
}

void check_keep_set(std::span<const int> keep, int count) {
  if (keep.empty()) throw Error(ErrorCode::EmptyKeepSet, "partial trace must keep at least one factor");
  std::vector<bool> seen(static_cast<std::size_t>(count), false);
  for (int k : keep) {
    if (k < 0 || k >= count) throw Error(ErrorCode::InvalidArgument, "kept factor index out of range");
    if (seen[static_cast<std::size_t>(k)]) throw Error(ErrorCode::InvalidArgument, "kept factor listed twice");
    seen[static_cast<std::size_t>(k)] = true;
  }
}

}  // namespace rescomp
