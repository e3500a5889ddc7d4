#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csnn/levels.hpp"
#include "csnn/network.hpp"
#include "csnn/rational.hpp"

namespace csnn {

// Piecewise-constant map with half-open pieces:
// (-inf, b0) -> values[0], [b_{i-1}, b_i) -> values[i], [b_last, inf) -> values[k].
struct Quantizer {
  std::vector<Rational> breakpoints; // strictly increasing
  std::vector<Rational> values;      // breakpoints.size() + 1 entries

  void validate() const; // NotRealizable on malformed structure
  Rational eval(const Rational& x) const;
};

// floor(max(x,0)), optionally clipped from above.
Rational quantized_relu(const Rational& x,
                        const std::optional<Rational>& clip = std::nullopt);

// The quantizer whose eval equals quantized_relu with the given clip level.
Quantizer quantized_relu_quantizer(long long clip);

// One static network node. Its activation is the decode-then-emit
// composition: levels fix the input-charge slices, sigma maps the chosen
// level to the output value.
struct QannNode {
  std::string id;
  Rational capacitance = Rational(1);
  LevelSet levels;
  ActivationTable sigma;

  Rational activation(const Rational& z) const;
};

struct QannEdge {
  std::string pre;
  std::string post;
  Rational weight;
};

struct QannSpec {
  std::vector<QannNode> nodes;
  std::vector<QannEdge> edges;

  std::optional<std::size_t> index_of(const std::string& id) const;
};

void validate(const QannSpec& q);

struct QannEval {
  std::vector<Rational> kappa; // node order
  std::vector<Rational> z;
};

// Evaluate along a topological order, then independently re-check the
// fixed-point identity kappa = act(u + W*kappa) on the result. Throws
// NotAcyclic on cyclic specs.
QannEval qann_eval(const QannSpec& q, const std::vector<Rational>& u);

// Forget timing: keep per-neuron (levels, C, sigma) and the weights.
// Throws NotAcyclic when the net has a cycle.
QannSpec snn_to_qann(const NetworkSpec& net);

// Materialize a spec as a network with zero delays and delta kernels; the
// terminal outputs then equal qann_eval exactly.
NetworkSpec qann_to_snn(const QannSpec& q);

// Realize an arbitrary half-open piecewise-constant activation as a node:
// every breakpoint becomes a level, 0 is inserted (the initial level), and
// a sentinel below the lowest breakpoint generates the leftmost piece.
// Throws NotRealizable on malformed quantizers.
QannNode synthesize_quantizer_node(const std::string& id, const Quantizer& quant);

// Human-readable synthesis trail for one node (levels chosen, sentinel).
std::string synthesis_log(const std::string& id, const Quantizer& quant,
                          const QannNode& node);

} // namespace csnn
