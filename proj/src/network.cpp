#include "csnn/network.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "csnn/errors.hpp"

namespace csnn {

std::optional<std::size_t> NetworkSpec::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < neurons.size(); ++i)
    if (neurons[i].id == id) return i;
  return std::nullopt;
}

const NeuronSpec& NetworkSpec::neuron(const std::string& id) const {
  auto idx = index_of(id);
  if (!idx) throw SnnError(ErrorCode::InvalidSpec, "unknown neuron id \"" + id + "\"");
  return neurons[*idx];
}

void validate(const NetworkSpec& net) {
  std::set<std::string> ids;
  for (const NeuronSpec& n : net.neurons) {
    if (n.id.empty())
      throw SnnError(ErrorCode::InvalidSpec, "neuron with empty id");
    if (!ids.insert(n.id).second)
      throw SnnError(ErrorCode::InvalidSpec, "duplicate neuron id \"" + n.id + "\"");
    if (n.capacitance <= Rational(0))
      throw SnnError(ErrorCode::InvalidSpec, "neuron \"" + n.id + "\": capacitance must be positive");
    if (n.levels.size() < 2)
      throw SnnError(ErrorCode::InvalidSpec, "neuron \"" + n.id + "\": needs at least two discharge levels");
    if (!n.sigma.total_on(n.levels))
      throw SnnError(ErrorCode::InvalidSpec, "neuron \"" + n.id + "\": sigma is not total on the level set");
    if (n.refractory) {
      if (n.refractory->min < Rational(0) || n.refractory->max < n.refractory->min)
        throw SnnError(ErrorCode::InvalidSpec, "neuron \"" + n.id + "\": bad refractory range");
    }
    if (auto bad = validate_partition(build_partition(n.levels, n.capacitance)))
      throw SnnError(ErrorCode::InvariantViolation, "neuron \"" + n.id + "\": partition " + bad->what);
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (const SynapseSpec& s : net.synapses) {
    if (!ids.count(s.pre))
      throw SnnError(ErrorCode::InvalidSpec, "synapse pre endpoint \"" + s.pre + "\" does not exist");
    if (!ids.count(s.post))
      throw SnnError(ErrorCode::InvalidSpec, "synapse post endpoint \"" + s.post + "\" does not exist");
    if (!pairs.insert({s.pre, s.post}).second)
      throw SnnError(ErrorCode::InvalidSpec, "duplicate synapse (" + s.pre + " -> " + s.post + ")");
    if (s.delay < Rational(0))
      throw SnnError(ErrorCode::InvalidSpec, "synapse (" + s.pre + " -> " + s.post + "): negative delay");
    if (s.kernel.empty())
      throw SnnError(ErrorCode::InvalidSpec, "synapse (" + s.pre + " -> " + s.post + "): empty kernel");
    Rational total(0);
    for (const KernelAtom& a : s.kernel) {
      if (a.offset < Rational(0))
        throw SnnError(ErrorCode::InvalidSpec, "synapse (" + s.pre + " -> " + s.post + "): negative kernel offset");
      total += a.fraction;
    }
    if (total != Rational(1))
      throw SnnError(ErrorCode::InvalidSpec,
                     "synapse (" + s.pre + " -> " + s.post + "): kernel fractions sum to " + total.str() + ", not 1");
  }
}

TopoResult topo_sort(const std::vector<std::string>& ids,
                     const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> out;
  std::map<std::string, std::size_t> in_degree;
  for (const std::string& id : ids) {
    out[id];
    in_degree[id] = 0;
  }
  for (const auto& [pre, post] : edges) {
    out[pre].push_back(post);
    ++in_degree[post];
  }

  TopoResult result;
  std::set<std::string> ready;
  for (const auto& [id, deg] : in_degree)
    if (deg == 0) ready.insert(id);

  std::map<std::string, std::size_t> remaining = in_degree;
  while (!ready.empty()) {
    std::string id = *ready.begin(); // ascending id tie-break
    ready.erase(ready.begin());
    result.order.push_back(id);
    for (const std::string& next : out[id])
      if (--remaining[next] == 0) ready.insert(next);
  }
  if (result.order.size() == ids.size()) return result;

  // Every leftover node keeps at least one leftover predecessor, so a
  // backward walk must revisit a node; the revisited stretch is a cycle.
  std::set<std::string> leftover;
  for (const auto& [id, deg] : remaining)
    if (deg > 0) leftover.insert(id);
  std::map<std::string, std::vector<std::string>> in;
  for (const auto& [pre, post] : edges)
    if (leftover.count(pre) && leftover.count(post)) in[post].push_back(pre);

  std::vector<std::string> path;
  std::map<std::string, std::size_t> seen_at;
  std::string cur = *leftover.begin();
  while (!seen_at.count(cur)) {
    seen_at[cur] = path.size();
    path.push_back(cur);
    cur = *std::min_element(in[cur].begin(), in[cur].end());
  }
  std::vector<std::string> cycle(path.begin() + static_cast<std::ptrdiff_t>(seen_at[cur]), path.end());
  std::reverse(cycle.begin(), cycle.end()); // backward walk -> forward cycle
  auto smallest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), smallest, cycle.end());
  result.order.clear();
  result.cycle = std::move(cycle);
  return result;
}

TopoResult check_acyclic(const NetworkSpec& net) {
  std::vector<std::string> ids;
  ids.reserve(net.neurons.size());
  for (const NeuronSpec& n : net.neurons) ids.push_back(n.id);
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(net.synapses.size());
  for (const SynapseSpec& s : net.synapses) edges.emplace_back(s.pre, s.post);
  return topo_sort(ids, edges);
}

} // namespace csnn
