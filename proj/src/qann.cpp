#include "csnn/qann.hpp"

#include <algorithm>
#include <set>

#include "csnn/errors.hpp"

namespace csnn {

void Quantizer::validate() const {
  if (values.size() != breakpoints.size() + 1)
    throw SnnError(ErrorCode::NotRealizable,
                   "quantizer needs exactly one value per piece (breakpoints+1)");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i - 1] < breakpoints[i]))
      throw SnnError(ErrorCode::NotRealizable, "quantizer breakpoints must strictly increase");
}

Rational Quantizer::eval(const Rational& x) const {
  // index of the first breakpoint > x; piece index equals count of
  // breakpoints <= x.
  std::size_t lo = 0;
  std::size_t hi = breakpoints.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (breakpoints[mid] <= x)
      lo = mid + 1;
    else
      hi = mid;
  }
  return values[lo];
}

Rational quantized_relu(const Rational& x, const std::optional<Rational>& clip) {
  Rational y = x.sign() > 0 ? x.floor() : Rational(0);
  if (clip && y > *clip) return *clip;
  return y;
}

Quantizer quantized_relu_quantizer(long long clip) {
  Quantizer q;
  q.values.push_back(Rational(0));
  for (long long v = 1; v <= clip; ++v) {
    q.breakpoints.push_back(Rational(static_cast<long long>(v)));
    q.values.push_back(Rational(static_cast<long long>(v)));
  }
  q.validate();
  return q;
}

Rational QannNode::activation(const Rational& z) const {
  return sigma.at(levels.at(decode_index(z, levels)));
}

std::optional<std::size_t> QannSpec::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return std::nullopt;
}

void validate(const QannSpec& q) {
  std::set<std::string> seen;
  for (const QannNode& n : q.nodes) {
    if (n.id.empty()) throw SnnError(ErrorCode::InvalidSpec, "node with empty id");
    if (!seen.insert(n.id).second)
      throw SnnError(ErrorCode::InvalidSpec, "duplicate node id " + n.id);
    if (n.capacitance.sign() <= 0)
      throw SnnError(ErrorCode::InvalidSpec, "node " + n.id + " needs C > 0");
    if (n.levels.size() < 2)
      throw SnnError(ErrorCode::InvalidSpec, "node " + n.id + " needs at least two levels");
    if (!n.sigma.total_on(n.levels))
      throw SnnError(ErrorCode::InvalidSpec, "node " + n.id + " sigma not total on its levels");
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const QannEdge& e : q.edges) {
    if (!q.index_of(e.pre))
      throw SnnError(ErrorCode::InvalidSpec, "edge from unknown node " + e.pre);
    if (!q.index_of(e.post))
      throw SnnError(ErrorCode::InvalidSpec, "edge into unknown node " + e.post);
    if (!pairs.insert({e.pre, e.post}).second)
      throw SnnError(ErrorCode::InvalidSpec, "duplicate edge " + e.pre + " -> " + e.post);
  }
}

QannEval qann_eval(const QannSpec& q, const std::vector<Rational>& u) {
  validate(q);
  if (u.size() != q.nodes.size())
    throw SnnError(ErrorCode::InvalidSpec, "input vector length does not match node count");

  std::vector<std::string> ids;
  ids.reserve(q.nodes.size());
  for (const QannNode& n : q.nodes) ids.push_back(n.id);
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(q.edges.size());
  for (const QannEdge& e : q.edges) edges.push_back({e.pre, e.post});
  TopoResult topo = topo_sort(ids, edges);
  if (!topo.acyclic()) {
    std::string cycle;
    for (const std::string& id : topo.cycle) cycle += (cycle.empty() ? "" : " -> ") + id;
    throw SnnError(ErrorCode::NotAcyclic, "interaction graph has a cycle: " + cycle);
  }

  QannEval out;
  out.kappa.assign(q.nodes.size(), Rational(0));
  out.z.assign(q.nodes.size(), Rational(0));
  std::vector<bool> done(q.nodes.size(), false);
  for (const std::string& id : topo.order) {
    std::size_t i = *q.index_of(id);
    Rational z = u[i];
    for (const QannEdge& e : q.edges) {
      if (e.post != id) continue;
      std::size_t j = *q.index_of(e.pre);
      if (!done[j])
        throw SnnError(ErrorCode::InvariantViolation, "topological order visited " + id +
                                                          " before its input " + e.pre);
      z = z + e.weight * out.kappa[j];
    }
    out.z[i] = z;
    out.kappa[i] = q.nodes[i].activation(z);
    done[i] = true;
  }

  // Independent fixed-point re-check, not trusting the traversal above.
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    Rational z = u[i];
    for (const QannEdge& e : q.edges)
      if (e.post == q.nodes[i].id) z = z + e.weight * out.kappa[*q.index_of(e.pre)];
    if (z != out.z[i] || q.nodes[i].activation(z) != out.kappa[i])
      throw SnnError(ErrorCode::InvariantViolation,
                     "fixed-point identity failed at node " + q.nodes[i].id);
  }
  return out;
}

QannSpec snn_to_qann(const NetworkSpec& net) {
  validate(net);
  TopoResult topo = check_acyclic(net);
  if (!topo.acyclic()) {
    std::string cycle;
    for (const std::string& id : topo.cycle) cycle += (cycle.empty() ? "" : " -> ") + id;
    throw SnnError(ErrorCode::NotAcyclic, "network has a cycle: " + cycle);
  }
  QannSpec q;
  for (const NeuronSpec& n : net.neurons) {
    QannNode node;
    node.id = n.id;
    node.capacitance = n.capacitance;
    node.levels = n.levels;
    node.sigma = n.sigma;
    q.nodes.push_back(std::move(node));
  }
  for (const SynapseSpec& s : net.synapses) q.edges.push_back({s.pre, s.post, s.weight});
  return q;
}

NetworkSpec qann_to_snn(const QannSpec& q) {
  validate(q);
  NetworkSpec net;
  for (const QannNode& n : q.nodes) {
    NeuronSpec spec;
    spec.id = n.id;
    spec.capacitance = n.capacitance;
    spec.levels = n.levels;
    spec.sigma = n.sigma;
    net.neurons.push_back(std::move(spec));
  }
  for (const QannEdge& e : q.edges) {
    SynapseSpec s;
    s.pre = e.pre;
    s.post = e.post;
    s.weight = e.weight;
    s.delay = Rational(0);
    s.kernel = {{Rational(0), Rational(1)}};
    net.synapses.push_back(std::move(s));
  }
  validate(net);
  return net;
}

QannNode synthesize_quantizer_node(const std::string& id, const Quantizer& quant) {
  quant.validate();
  std::set<Rational> level_set;
  level_set.insert(Rational(0));
  for (const Rational& b : quant.breakpoints) level_set.insert(b);
  if (!quant.breakpoints.empty())
    level_set.insert(quant.breakpoints.front() - Rational(1));
  else
    level_set.insert(Rational(-1)); // constant map still needs two levels

  std::vector<Rational> levels(level_set.begin(), level_set.end());
  QannNode node;
  node.id = id;
  node.capacitance = Rational(1);
  node.levels = LevelSet(levels);
  // Every slice [L_i, L_{i+1}) sits inside one quantizer piece because all
  // breakpoints are levels; the slice owner L_i is itself in the slice
  // (and the minimal level is in the unbounded first slice), so sampling
  // the quantizer at each level reproduces the whole map.
  ActivationTable sigma;
  for (const Rational& level : levels) sigma.set(level, quant.eval(level));
  node.sigma = std::move(sigma);
  return node;
}

std::string synthesis_log(const std::string& id, const Quantizer& quant,
                          const QannNode& node) {
  std::string log = "node " + id + ": " + std::to_string(quant.breakpoints.size()) +
                    " breakpoints -> levels {";
  for (std::size_t i = 0; i < node.levels.size(); ++i) {
    if (i) log += ", ";
    log += node.levels.at(i).str();
  }
  log += "}";
  Rational sentinel = quant.breakpoints.empty() ? Rational(-1)
                                                : quant.breakpoints.front() - Rational(1);
  log += ", sentinel " + sentinel.str();
  return log;
}

} // namespace csnn
