#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csnn/qann.hpp"
#include "csnn/rational.hpp"

namespace csnn {

// Synchronous decoded dynamics kappa' = act(W*kappa + b), studied on a
// finite per-component value box. Activations are componentwise quantizers
// (decode-then-emit maps and clipped floors are both expressible).
struct DecodedSystem {
  std::vector<std::vector<Rational>> weights; // row i feeds component i
  std::vector<Rational> bias;
  std::vector<Quantizer> activation;          // one per component
  std::vector<std::vector<Rational>> box;     // candidate values per component

  std::size_t size() const { return bias.size(); }
};

void validate(const DecodedSystem& sys);

// {0,...,5} per component, enough for every bundled example.
std::vector<std::vector<Rational>> default_box(std::size_t n);

// Express a node's decode-then-emit map as a quantizer (breakpoints are the
// levels above the minimum).
Quantizer node_to_quantizer(const QannNode& node);

// One synchronous step.
std::vector<Rational> apply_update(const DecodedSystem& sys, const std::vector<Rational>& kappa);

enum class OrbitKind { FixedPoint, Cycle, BudgetExceeded, BoxEscape };

struct OrbitResult {
  OrbitKind kind = OrbitKind::BudgetExceeded;
  std::vector<std::vector<Rational>> trajectory;   // visited states, kappa0 first
  std::size_t period = 0;                          // 1 for FixedPoint, >= 2 for Cycle
  std::vector<std::vector<Rational>> cycle_states; // in visit order
};

// Iterate until a state repeats (exact comparison), the box is left, or
// max_steps updates have run.
OrbitResult sync_iterate(const DecodedSystem& sys, std::vector<Rational> kappa0,
                         std::size_t max_steps);

// Exhaustively test every point of the box product lattice against
// kappa = act(W*kappa + b). Throws BoxTooLarge past point_limit.
std::vector<std::vector<Rational>> enumerate_fixed_points(
    const DecodedSystem& sys, std::uint64_t point_limit = 10000000);

struct ExampleOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<ExampleOutcome> examples;
  bool all_pass = false;
};

// The three bundled recurrent systems with their expected behavior:
// a positive self-loop with two coexisting fixed points, a negative
// self-loop oscillating 0 <-> 1, and a three-unit system whose fixed
// points exist but whose iteration from rest cycles instead of settling.
SuiteReport counterexample_suite();

// Same suite over a custom integer candidate box {lo..hi} on every axis.
// The recorded behaviors hold for any box containing {0, 1}.
SuiteReport counterexample_suite(std::int64_t box_lo, std::int64_t box_hi);

} // namespace csnn
