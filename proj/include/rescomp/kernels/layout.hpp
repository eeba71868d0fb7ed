#pragma once

#include <span>
#include <vector>

#include "rescomp/core/types.hpp"

namespace rescomp::kernels {

/// Mixed-radix digits of a flat index over dims (factor 0 most significant).
std::vector<int> digits_of(Index flat, std::span<const int> dims);
Index flat_of(std::span<const int> digits, std::span<const int> dims);

/// Row index table for a partial trace: compose[k * traced + t] is the full
/// index whose kept digits encode k and traced digits encode t.
struct SplitTable {
  Index kept_dim = 1;
  Index traced_dim = 1;
  std::vector<Index> compose;
};
SplitTable split_table(std::span<const int> dims, std::span<const int> keep);

/// new_to_old[a] = index of the input basis element mapped to output element a
/// when output factor k is input factor perm[k].
std::vector<Index> permutation_table(std::span<const int> dims, std::span<const int> perm);

}  // namespace rescomp::kernels
