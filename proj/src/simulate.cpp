#include "restart/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "restart/numeric.hpp"

namespace restart {

namespace {

constexpr double kMaxCopies = 1e6;
constexpr std::size_t kPilot = 4096;
constexpr std::size_t kCycleCeiling = 10'000'000;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Outcome {
  double time = 0.0;
  std::size_t cycles = 0;
  bool censored = false;
  bool overflow = false;
};

using Replicate = std::function<Outcome(Rng&, std::size_t max_cycles)>;

// Cap so that P(R < T)^cap < 1e-6, from a pilot run on its own stream.
std::size_t size_cycle_cap(const Distribution& law, const ResetLaw& reset, std::uint64_t seed) {
  Rng rng(replicate_seed(seed ^ 0x5bd1e995ULL, std::numeric_limits<std::uint64_t>::max()));
  std::size_t resets = 0;
  for (std::size_t i = 0; i < kPilot; ++i) {
    const double t = law.sample(rng);
    const double r = reset.sample(rng);
    if (r < t) ++resets;
  }
  const double n = static_cast<double>(kPilot);
  const double p = static_cast<double>(resets) / n;
  const double upper = std::min(p + 3.0 * std::sqrt(p * (1.0 - p) / n) + 1.0 / n, 1.0 - 1e-7);
  const double cap = std::ceil(std::log(1e-6) / std::log(upper));
  return std::clamp<std::size_t>(static_cast<std::size_t>(cap), 64, kCycleCeiling);
}

SimulationResult run(const SimulationConfig& config, std::size_t max_cycles, const Replicate& replicate) {
  if (config.replicates == 0) throw Error(ErrorCode::InvalidParameter, "replicates must be at least 1");
  const std::size_t n = config.replicates;
  std::vector<Outcome> outcomes(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        Rng rng(replicate_seed(config.seed, i));
        outcomes[i] = replicate(rng, max_cycles);
      },
      std::max<std::size_t>(config.parallel_chunks, 1));

  for (const auto& o : outcomes) {
    if (o.overflow) throw Error(ErrorCode::ExcessiveBranching, "more than 1e6 copies needed in one cycle");
  }

  SimulationResult result;
  result.replicates = n;
  result.max_cycles = max_cycles;
  double sum = 0.0;
  std::size_t max_seen = 0;
  for (const auto& o : outcomes) {
    sum += o.time;
    if (o.censored) ++result.censored;
    max_seen = std::max(max_seen, o.cycles);
  }
  const double count = static_cast<double>(n);
  result.mean = sum / count;
  if (std::isfinite(result.mean) && n > 1) {
    double ss = 0.0;
    for (const auto& o : outcomes) ss += (o.time - result.mean) * (o.time - result.mean);
    result.mean_standard_error = std::sqrt(ss / (count - 1.0) / count);
  } else {
    result.mean_standard_error = std::isfinite(result.mean) ? 0.0 : kInf;
  }
  result.censored_fraction = static_cast<double>(result.censored) / count;

  result.cycle_histogram.assign(max_seen + 1, 0);
  for (const auto& o : outcomes) ++result.cycle_histogram[o.cycles];

  std::vector<double> times(n);
  std::transform(outcomes.begin(), outcomes.end(), times.begin(), [](const Outcome& o) { return o.time; });
  std::sort(times.begin(), times.end());
  for (double t : config.probe_times) {
    const auto above = static_cast<double>(times.end() - std::upper_bound(times.begin(), times.end(), t));
    const double p = above / count;
    result.tail.push_back({t, p, std::sqrt(p * (1.0 - p) / count)});
  }

  if (result.censored_fraction > 0.01) {
    throw CensoringError(std::to_string(result.censored) + " of " + std::to_string(n) + " replicates censored",
                         std::move(result));
  }
  return result;
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (index * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  return splitmix64(state);
}

SimulationResult simulate_reset(const Distribution& law, const ResetLaw& reset, const SimulationConfig& config) {
  return simulate_branching(law, reset, 1, config);
}

SimulationResult simulate_single_reset(const Distribution& law, const ResetLaw& reset,
                                       const SimulationConfig& config) {
  return run(config, 2, [&](Rng& rng, std::size_t) {
    Outcome o;
    const double t1 = law.sample(rng);
    const double r = reset.sample(rng);
    if (t1 <= r) {
      o.cycles = 1;
      o.censored = !std::isfinite(t1);
      o.time = o.censored ? 0.0 : t1;
    } else {
      const double t2 = law.sample(rng);
      o.cycles = 2;
      o.censored = !std::isfinite(t2);
      o.time = o.censored ? r : r + t2;
    }
    return o;
  });
}

SimulationResult simulate_branching(const Distribution& law, const ResetLaw& reset, int l,
                                    const SimulationConfig& config) {
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be at least 1");
  const std::size_t cap = config.max_cycles > 0 ? config.max_cycles : size_cycle_cap(law, reset, config.seed);
  const bool direct = config.direct_branching;
  return run(config, cap, [&, l, direct](Rng& rng, std::size_t max_cycles) {
    Outcome o;
    double elapsed = 0.0;
    double copies = 1.0;
    for (std::size_t k = 1; k <= max_cycles; ++k) {
      if (copies > kMaxCopies) {
        o.overflow = true;
        return o;
      }
      double t;
      if (direct) {
        t = kInf;
        const auto m = static_cast<std::size_t>(copies);
        for (std::size_t j = 0; j < m; ++j) t = std::min(t, law.sample(rng));
      } else {
        t = copies == 1.0 ? law.sample(rng) : law.sample_min(rng, copies);
      }
      const double r = reset.sample(rng);
      o.cycles = k;
      if (t <= r) {
        o.censored = !std::isfinite(t);
        o.time = o.censored ? elapsed : elapsed + t;
        return o;
      }
      elapsed += r;
      copies *= static_cast<double>(l);
    }
    o.time = elapsed;
    o.censored = true;
    return o;
  });
}

}  // namespace restart
