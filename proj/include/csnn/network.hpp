#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csnn/levels.hpp"
#include "csnn/rational.hpp"

namespace csnn {

/// Uniform draw bounds for a neuron's stochastic refractory duration.
struct RefractoryRange {
  Rational min;
  Rational max;
};

struct NeuronSpec {
  std::string id;
  Rational capacitance; // C > 0
  LevelSet levels;
  ActivationTable sigma;
  std::optional<RefractoryRange> refractory;
};

struct KernelAtom {
  Rational offset;   // >= 0, relative to arrival after the delay
  Rational fraction; // fractions of one kernel sum exactly to 1
};

struct SynapseSpec {
  std::string pre;
  std::string post;
  Rational weight;
  Rational delay; // >= 0
  std::vector<KernelAtom> kernel;
};

struct NetworkSpec {
  std::vector<NeuronSpec> neurons;
  std::vector<SynapseSpec> synapses;

  std::optional<std::size_t> index_of(const std::string& id) const;
  const NeuronSpec& neuron(const std::string& id) const;
};

/// Throws InvalidSpec / InvalidLevelSet on the first structural problem:
/// duplicate ids, dangling synapse endpoints, duplicate (pre,post) pairs,
/// non-normalized kernels, negative delays, non-total sigma, C <= 0.
void validate(const NetworkSpec& net);

/// Result of the acyclicity check: either a deterministic topological
/// order (ties broken by ascending id) or a directed cycle witness.
struct TopoResult {
  std::vector<std::string> order; // valid iff cycle.empty()
  std::vector<std::string> cycle; // one directed cycle, smallest id first
  bool acyclic() const { return cycle.empty(); }
};

TopoResult topo_sort(const std::vector<std::string>& ids,
                     const std::vector<std::pair<std::string, std::string>>& edges);

TopoResult check_acyclic(const NetworkSpec& net);

} // namespace csnn
