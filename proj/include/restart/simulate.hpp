#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "restart/distribution.hpp"
#include "restart/error.hpp"
#include "restart/reset.hpp"

namespace restart {

struct SimulationConfig {
  std::size_t replicates = 100000;
  std::uint64_t seed = 42;
  std::size_t max_cycles = 0;       ///< 0 sizes the cap from a pilot estimate of P(R < T)
  std::vector<double> probe_times;  ///< tail estimates are reported here
  std::size_t parallel_chunks = 1;  ///< worker count; never changes the output
  bool direct_branching = false;    ///< draw every copy instead of one min-law draw
};

struct TailEstimate {
  double t = 0.0;
  double value = 0.0;
  double standard_error = 0.0;
};

/**
 * Aggregated replicates. Censored replicates (cycle cap reached, or an
 * infinite completion time) enter the estimates at their accumulated time.
 */
struct SimulationResult {
  double mean = 0.0;
  double mean_standard_error = 0.0;
  std::vector<TailEstimate> tail;
  std::size_t replicates = 0;
  std::size_t censored = 0;
  double censored_fraction = 0.0;
  std::size_t max_cycles = 0;
  /// cycle_histogram[k] = replicates that finished in cycle k (index 0 unused).
  std::vector<std::size_t> cycle_histogram;
};

/// Thrown when more than 1% of replicates are censored; carries the full result.
class CensoringError : public Error {
 public:
  CensoringError(const std::string& what, SimulationResult partial)
      : Error(ErrorCode::ExcessiveCensoring, what), partial_(std::move(partial)) {}

  const SimulationResult& partial() const noexcept { return partial_; }

 private:
  SimulationResult partial_;
};

/// Seed of replicate `index`: splitmix64 over (seed, index).
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index);

/// Repeated reset: draw (T_k, R_k) until T_k <= R_k, output R_1 + ... + R_{k-1} + T_k.
SimulationResult simulate_reset(const Distribution& law, const ResetLaw& reset, const SimulationConfig& config);

/// One reset opportunity: T_1 if T_1 <= R, else R + T_2.
SimulationResult simulate_single_reset(const Distribution& law, const ResetLaw& reset,
                                       const SimulationConfig& config);

/**
 * Cycle k races the minimum of l^{k-1} copies against R_k. Throws
 * ExcessiveBranching when a replicate needs more than 10^6 copies in a cycle.
 * For l = 1 in min-law mode the random streams match simulate_reset.
 */
SimulationResult simulate_branching(const Distribution& law, const ResetLaw& reset, int l,
                                    const SimulationConfig& config);

}  // namespace restart
