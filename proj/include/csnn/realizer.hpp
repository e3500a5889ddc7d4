#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csnn/network.hpp"
#include "csnn/rational.hpp"

namespace csnn {

// splitmix64. Constants are part of the file-format contract: the same seed
// must reproduce the same realization anywhere.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Dyadic uniform draw in [0,1): next()/2^64, reduced.
  Rational next_unit();

  // lo + (hi-lo)*unit; requires lo <= hi.
  Rational next_in(const Rational& lo, const Rational& hi);

  // Uniform-ish integer in [lo,hi] (modulo reduction; bias is irrelevant
  // here, only determinism matters).
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);

private:
  std::uint64_t state_;
};

struct IntRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

struct RationalRange {
  Rational lo;
  Rational hi;
};

struct RealizationConfig {
  std::uint64_t seed = 0;
  IntRange splits_per_input{1, 1};
  Rational time_horizon = Rational(1);
  RationalRange delay_range{Rational(0), Rational(0)};
  IntRange kernel_atoms{1, 1};
  RationalRange kernel_span{Rational(0), Rational(0)};
  std::optional<RationalRange> refractory_range;
};

// Throws InvalidSpec when a range is empty or a bound is out of domain.
void validate_config(const RealizationConfig& cfg);

struct Impulse {
  Rational time;
  Rational charge;
};

struct InputEpisode {
  std::map<std::string, std::vector<Impulse>> impulses;

  Rational aggregate(const std::string& neuron) const;
  std::map<std::string, Rational> aggregates() const;
};

// Everything stochastic about one run, drawn up front so the engine stays a
// pure function. Synapse-indexed fields align with net.synapses; neuron
// draws are refractory durations.
struct Realization {
  InputEpisode episode;
  std::vector<Rational> delays;
  std::vector<std::vector<KernelAtom>> kernels;
  std::vector<std::optional<Rational>> refractory;
};

// Split each u_i into a random number of impulses at random times in
// [0, horizon). Parts carry the sign of u_i; the last part is the exact
// remainder, so the sum is exact. u_i = 0 yields no impulses.
InputEpisode realize_episode(const std::vector<std::string>& ids,
                             const std::vector<Rational>& u,
                             const RealizationConfig& cfg, SplitMix64& rng);

// Draw per-synapse delay and kernel. Kernel fractions use the same
// remainder construction, so they sum to 1 exactly.
void sample_delays_and_kernels(const NetworkSpec& net, const RealizationConfig& cfg,
                               SplitMix64& rng, std::vector<Rational>& delays,
                               std::vector<std::vector<KernelAtom>>& kernels);

// Refractory duration per neuron. The neuron's own range wins over the
// config range; with neither, no draw.
std::vector<std::optional<Rational>> sample_refractory(const NetworkSpec& net,
                                                       const RealizationConfig& cfg,
                                                       SplitMix64& rng);

// Full realization of (net, u) from one seed: episode, then synapse draws
// in synapse order, then refractory draws in neuron order. The consumption
// order is fixed so seeds are portable.
Realization realize(const NetworkSpec& net, const std::vector<Rational>& u,
                    const RealizationConfig& cfg);

// Deterministic realization taking the delays/kernels written in the
// network and the episode verbatim; no draws at all.
Realization verbatim_realization(const NetworkSpec& net, InputEpisode episode);

} // namespace csnn
