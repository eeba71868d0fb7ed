#include <doctest.h>

#include "support.hpp"

using namespace rescomp;

TEST_CASE("data processing") {
  const testing::Suite s = testing::data_processing_suite(20, 2024);
  INFO(s.first_failure);
  CHECK(s.pass());
}

TEST_CASE("convexity and faithfulness") {
  const testing::Suite s = testing::convexity_faithfulness_suite(2, 2025);
  INFO(s.first_failure);
  CHECK(s.pass());
}

TEST_CASE("monotonicity under free channels") {
  const testing::Suite s = testing::monotonicity_suite(2, 1, 2026);
  INFO(s.first_failure);
  CHECK(s.pass());
}

TEST_CASE("generated channels preserve their families") {
  Rng rng(3);
  for (const FreeSetFamily& fam : testing::property_families()) {
    const QuantumChannel ch = testing::random_free_channel(fam, rng);
    CHECK(ch.trace_preservation_error() < 1e-10);
    CHECK(testing::preserves(ch, fam));
  }
}
