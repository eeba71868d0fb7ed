#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rescomp/free_sets/family.hpp"

namespace rescomp {

enum class PostulateStatus { Pass, Fail, NotFalsifiable };

struct PostulateCheck {
  int postulate = 0;  // 1..5
  std::string name;
  PostulateStatus status = PostulateStatus::Pass;
  int checks = 0;
  std::string detail;
  std::optional<DensityMatrix> counterexample;
};

struct PostulateReport {
  std::string family;
  std::vector<PostulateCheck> checks;
  /// True when no checked postulate failed.
  bool all_pass() const;
  /// One line per postulate.
  std::string to_text() const;
  nlohmann::json to_json() const;
};

/// Randomized closure checks on `samples` random members (mixtures of
/// extreme points): I tensor products land in the 2-copy family; II partial
/// traces land in the reduced family; III factor permutations land in the
/// permuted family (the family itself when the dims do not change); V
/// pairwise mixtures at t = 0.1..0.9 are members. IV is not falsifiable.
/// II and III are also probed on 2-copy members. Throws InvalidArgument for
/// samples < 1.
PostulateReport validate_postulates(const FreeSetFamily& fam, int samples, std::uint64_t seed,
                                    double tol = kMembershipTol);

std::string to_string(PostulateStatus s);

}  // namespace rescomp
