#pragma once

#include <cstdint>
#include <random>

#include "rescomp/core/channel.hpp"

namespace rescomp {

using Rng = std::mt19937_64;

/// Haar-random unit vector.
Vector haar_random_vector(Index dim, Rng& rng);
/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
Matrix haar_random_unitary(Index dim, Rng& rng);

/// Reduced state of a Haar-random pure state on shape ⊗ C^rank; rank ≤ total dim.
DensityMatrix random_density_matrix(const SubsystemShape& shape, Index rank, std::uint64_t seed);
DensityMatrix random_density_matrix(const SubsystemShape& shape, Index rank, Rng& rng);

/// Kraus blocks of a Haar-random isometry C^{d_in} → C^{d_out} ⊗ C^{kraus_count}.
QuantumChannel random_channel(const SubsystemShape& input, const SubsystemShape& output, int kraus_count,
                              std::uint64_t seed);
QuantumChannel random_channel(const SubsystemShape& input, const SubsystemShape& output, int kraus_count,
                              Rng& rng);

}  // namespace rescomp
