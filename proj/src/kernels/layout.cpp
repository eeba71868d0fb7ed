#include "rescomp/kernels/layout.hpp"

#include <algorithm>

namespace rescomp::kernels {

std::vector<int> digits_of(Index flat, std::span<const int> dims) {
  std::vector<int> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = static_cast<int>(flat % dims[k]);
    flat /= dims[k];
  }
  return d;
}

Index flat_of(std::span<const int> digits, std::span<const int> dims) {
  Index flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + digits[k];
  return flat;
}

SplitTable split_table(std::span<const int> dims, std::span<const int> keep) {
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;
  std::vector<int> kept_dims, traced_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? kept_dims : traced_dims).push_back(dims[k]);

  SplitTable t;
  for (int d : kept_dims) t.kept_dim *= d;
  for (int d : traced_dims) t.traced_dim *= d;
  Index total = t.kept_dim * t.traced_dim;
  t.compose.assign(static_cast<std::size_t>(total), 0);
  std::vector<int> kd, td;
  for (Index flat = 0; flat < total; ++flat) {
    std::vector<int> d = digits_of(flat, dims);
    kd.clear();
    td.clear();
    for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? kd : td).push_back(d[k]);
    Index ki = flat_of(kd, kept_dims);
    Index ti = flat_of(td, traced_dims);
    t.compose[static_cast<std::size_t>(ki * t.traced_dim + ti)] = flat;
  }
  return t;
}

std::vector<Index> permutation_table(std::span<const int> dims, std::span<const int> perm) {
  std::vector<int> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[static_cast<std::size_t>(perm[k])];
  Index total = 1;
  for (int d : dims) total *= d;
  std::vector<Index> table(static_cast<std::size_t>(total));
  std::vector<int> old_digits(dims.size());
  for (Index a = 0; a < total; ++a) {
    std::vector<int> nd = digits_of(a, new_dims);
    for (std::size_t k = 0; k < perm.size(); ++k) old_digits[static_cast<std::size_t>(perm[k])] = nd[k];
    table[static_cast<std::size_t>(a)] = flat_of(old_digits, dims);
  }
  return table;
}

}  // namespace rescomp::kernels
