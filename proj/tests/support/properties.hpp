// Randomized property checks shared by the unit tests and the acceptance run.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trackenrich::props {

struct Result {
  std::string name;
  bool ok = false;
  std::string detail;
};

Result assignment_matches_brute_force(std::uint64_t seed, int trials = 1000);
Result interpolation_hits_recorded_points(std::uint64_t seed, int trials = 1000);
Result gap_decomposes_into_linear_plus_correction(std::uint64_t seed, int trials = 1000);
Result alpha_zero_is_linear(std::uint64_t seed, int trials = 1000);
Result forecast_matches_unrolled_recursion(std::uint64_t seed, int trials = 500);
Result ar1_coefficient_recovered(std::uint64_t seed);
Result frame_assignments_injective(std::uint64_t seed, int matches = 4);
Result axis_flip_and_round_trips(std::uint64_t seed, int trials = 200);

std::vector<Result> run_all(std::uint64_t seed);

}  // namespace trackenrich::props
