#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csnn/network.hpp"
#include "csnn/qann.hpp"
#include "csnn/realizer.hpp"

namespace csnn {

// Layered random DAG: 2..5 layers, integer level ladders {0..L} with
// L in 1..4, dyadic weights in [-3,3], sigma identity or a random monotone
// table (nonzero sigma(0) exercises the baseline-charge path), occasional
// per-neuron refractory ranges.
NetworkSpec random_network(SplitMix64& rng, std::size_t max_neurons);

// Dyadic aggregates in [-3,6]: wide enough to hit both saturation ends.
std::vector<Rational> random_aggregate(SplitMix64& rng, std::size_t count);

// Random acyclic spec whose node activations are arbitrary half-open
// piecewise-constant maps with at most max_slices pieces.
QannSpec random_qann(SplitMix64& rng, std::size_t max_nodes, std::size_t max_slices);

// Deterministic reconstruction of one fuzz case from its recorded seed.
struct FuzzCase {
  NetworkSpec net;
  std::vector<Rational> u;
};
FuzzCase make_fuzz_case(std::uint64_t net_seed, std::size_t max_neurons);

// The realization config the harnesses use: multiple splits, nonzero
// delays, multi-atom kernels, and refractory draws all enabled.
RealizationConfig harness_config(std::uint64_t seed);

struct HarnessSummary {
  std::uint64_t cases = 0;
  std::uint64_t runs = 0;
  std::uint64_t events = 0;
  // Failure tallies by concern, so callers can report them separately.
  std::uint64_t invariance_failures = 0;  // kappa differs between realizations
  std::uint64_t static_failures = 0;      // engine differs from static evaluation
  std::uint64_t mismatch_failures = 0;    // outputs/levels differ from the oracle
  std::uint64_t ledger_failures = 0;
  std::uint64_t progress_failures = 0;
  std::uint64_t termination_failures = 0; // budget exhaustion or engine error
  std::vector<std::string> failures;      // each carries the seeds needed to replay
  bool pass() const { return failures.empty(); }
};

// The harnesses below run their independent cases on a worker pool and
// merge per-case results in seed order, so summaries are identical no
// matter how many threads the host machine has.

// Terminal-output invariance: every realization of (net, u) must produce
// the identical kappa, which must also equal the static evaluation of the
// extracted weight/activation network. Every run is audited for the charge
// ledger and the per-spike progress bound; the first realization also runs
// with reversed tie-breaking.
HarnessSummary fuzz_invariance(std::uint64_t seed, std::size_t nets,
                               std::size_t realizations, std::size_t max_neurons);

// Synthesis round trip: random quantized specs, materialized as networks,
// must simulate to the static evaluation for every input and realization.
HarnessSummary qann_roundtrip(std::uint64_t seed, std::size_t specs, std::size_t inputs,
                              std::size_t realizations, std::size_t max_slices);

// Single-neuron terminal map: arbitrary level sets, capacitances, and
// impulse splittings must land on decode(z) with output sigma(decode(z)).
HarnessSummary terminal_map_check(std::uint64_t seed, std::size_t trials);

} // namespace csnn
