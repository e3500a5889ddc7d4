#include "csnn/qann.hpp"

#include <set>

#include "csnn/engine.hpp"
#include "csnn/errors.hpp"
#include "csnn/realizer.hpp"
#include "doctest.h"

using csnn::LevelSet;
using csnn::NetworkSpec;
using csnn::QannEdge;
using csnn::QannNode;
using csnn::QannSpec;
using csnn::Quantizer;
using csnn::Rational;
using csnn::SnnError;

namespace {

Rational rat(const char* s) { return Rational::parse(s); }

QannNode unit_node(const std::string& id) {
  QannNode n;
  n.id = id;
  n.capacitance = Rational(1);
  n.levels = LevelSet({Rational(0), Rational(1), Rational(2), Rational(3)});
  n.sigma = csnn::ActivationTable::identity(n.levels);
  return n;
}

} // namespace

TEST_CASE("quantized relu floors, clips and zeroes negatives") {
  CHECK(csnn::quantized_relu(rat("3/5")) == Rational(0));
  CHECK(csnn::quantized_relu(rat("11/10")) == Rational(1));
  CHECK(csnn::quantized_relu(Rational(-5)) == Rational(0));
  CHECK(csnn::quantized_relu(Rational(10), Rational(3)) == Rational(3));
  CHECK(csnn::quantized_relu(rat("5/2"), Rational(3)) == Rational(2));
}

TEST_CASE("the relu quantizer agrees with the closed form everywhere probed") {
  Quantizer q = csnn::quantized_relu_quantizer(3);
  const char* probes[] = {"-5", "-1/2", "0", "3/5", "1", "11/10", "5/2", "3", "7", "9/2"};
  for (const char* s : probes) {
    Rational x = rat(s);
    CHECK(q.eval(x) == csnn::quantized_relu(x, Rational(3)));
  }
}

TEST_CASE("quantizer validation catches malformed structure") {
  Quantizer q;
  q.breakpoints = {Rational(1), Rational(1)};
  q.values = {Rational(0), Rational(1), Rational(2)};
  CHECK_THROWS_AS(q.validate(), SnnError);

  q.breakpoints = {Rational(1)};
  q.values = {Rational(0)};
  CHECK_THROWS_AS(q.validate(), SnnError); // one value short

  q.values = {Rational(0), Rational(1)};
  CHECK_NOTHROW(q.validate());
}

TEST_CASE("node activation is decode-then-emit") {
  QannNode n = unit_node("x");
  CHECK(n.activation(rat("27/10")) == Rational(2));
  CHECK(n.activation(rat("-7/10")) == Rational(0));
  CHECK(n.activation(Rational(9)) == Rational(3));

  n.sigma.set(Rational(2), Rational(40)); // sigma need not be the identity
  CHECK(n.activation(rat("5/2")) == Rational(40));
}

TEST_CASE("evaluation of a single node") {
  QannSpec q;
  q.nodes = {unit_node("n")};
  csnn::QannEval out = csnn::qann_eval(q, {rat("27/10")});
  CHECK(out.kappa == std::vector<Rational>{Rational(2)});
  CHECK(out.z == std::vector<Rational>{rat("27/10")});
}

TEST_CASE("evaluation of a chain feeds terminal outputs forward") {
  QannSpec q;
  q.nodes = {unit_node("n1"), unit_node("n2")};
  q.edges = {{"n1", "n2", Rational(1)}};
  csnn::QannEval out = csnn::qann_eval(q, {rat("27/10"), Rational(0)});
  CHECK(out.kappa == std::vector<Rational>{Rational(2), Rational(2)});
  CHECK(out.z == std::vector<Rational>{rat("27/10"), Rational(2)});
}

TEST_CASE("evaluation rejects cyclic interaction graphs") {
  QannSpec q;
  q.nodes = {unit_node("a"), unit_node("b")};
  q.edges = {{"a", "b", Rational(1)}, {"b", "a", Rational(1)}};
  try {
    csnn::qann_eval(q, {Rational(0), Rational(0)});
    FAIL("expected NotAcyclic");
  } catch (const SnnError& e) {
    CHECK(e.code() == csnn::ErrorCode::NotAcyclic);
    CHECK(std::string(e.what()).find("a -> b") != std::string::npos);
  }
}

TEST_CASE("spec validation rejects structural defects") {
  QannSpec q;
  q.nodes = {unit_node("a"), unit_node("a")};
  CHECK_THROWS_AS(csnn::validate(q), SnnError);

  q.nodes = {unit_node("a")};
  q.edges = {{"a", "ghost", Rational(1)}};
  CHECK_THROWS_AS(csnn::validate(q), SnnError);

  q.edges = {{"a", "a", Rational(1)}, {"a", "a", Rational(2)}};
  CHECK_THROWS_AS(csnn::validate(q), SnnError); // duplicate edge

  q = QannSpec{};
  q.nodes = {unit_node("a")};
  q.nodes[0].capacitance = Rational(0);
  CHECK_THROWS_AS(csnn::validate(q), SnnError);
}

TEST_CASE("forgetting timing keeps exactly the static data") {
  NetworkSpec net;
  csnn::NeuronSpec a;
  a.id = "a";
  a.capacitance = rat("3/2");
  a.levels = LevelSet({Rational(0), Rational(1)});
  a.sigma = csnn::ActivationTable::identity(a.levels);
  csnn::NeuronSpec b = a;
  b.id = "b";
  b.refractory = csnn::RefractoryRange{Rational(0), Rational(1)};
  net.neurons = {a, b};
  csnn::SynapseSpec s;
  s.pre = "a";
  s.post = "b";
  s.weight = rat("-5/3");
  s.delay = rat("7/2");
  s.kernel = {{Rational(0), rat("1/3")}, {Rational(2), rat("2/3")}};
  net.synapses = {s};

  QannSpec q = csnn::snn_to_qann(net);
  REQUIRE(q.nodes.size() == 2);
  CHECK(q.nodes[0].capacitance == rat("3/2"));
  CHECK(q.nodes[0].levels == net.neurons[0].levels);
  CHECK(q.nodes[0].sigma == net.neurons[0].sigma);
  REQUIRE(q.edges.size() == 1);
  CHECK(q.edges[0].weight == rat("-5/3"));

  // Delays, kernels and refractory windows are gone; two nets differing
  // only there map to the same spec.
  NetworkSpec net2 = net;
  net2.synapses[0].delay = Rational(0);
  net2.synapses[0].kernel = {{Rational(0), Rational(1)}};
  net2.neurons[1].refractory.reset();
  QannSpec q2 = csnn::snn_to_qann(net2);
  CHECK(q2.nodes[1].levels == q.nodes[1].levels);
  CHECK(q2.edges[0].weight == q.edges[0].weight);
}

TEST_CASE("snn_to_qann refuses cyclic networks") {
  NetworkSpec net;
  csnn::NeuronSpec a;
  a.id = "a";
  a.capacitance = Rational(1);
  a.levels = LevelSet({Rational(0), Rational(1)});
  a.sigma = csnn::ActivationTable::identity(a.levels);
  csnn::NeuronSpec b = a;
  b.id = "b";
  net.neurons = {a, b};
  csnn::SynapseSpec s1;
  s1.pre = "a";
  s1.post = "b";
  s1.weight = Rational(1);
  s1.delay = Rational(1);
  s1.kernel = {{Rational(0), Rational(1)}};
  csnn::SynapseSpec s2 = s1;
  s2.pre = "b";
  s2.post = "a";
  net.synapses = {s1, s2};
  CHECK_THROWS_AS(csnn::snn_to_qann(net), SnnError);
}

TEST_CASE("materializing a spec gives delta synapses the engine agrees with") {
  QannSpec q;
  q.nodes = {unit_node("n1"), unit_node("n2")};
  q.edges = {{"n1", "n2", rat("3/2")}};
  NetworkSpec net = csnn::qann_to_snn(q);
  REQUIRE(net.synapses.size() == 1);
  CHECK(net.synapses[0].delay == Rational(0));
  REQUIRE(net.synapses[0].kernel.size() == 1);
  CHECK(net.synapses[0].kernel[0].fraction == Rational(1));

  std::vector<Rational> u = {rat("27/10"), rat("-1/2")};
  csnn::QannEval expected = csnn::qann_eval(q, u);

  csnn::InputEpisode ep;
  ep.impulses["n1"] = {{Rational(0), u[0]}};
  ep.impulses["n2"] = {{Rational(0), u[1]}};
  csnn::RunResult r = csnn::run(net, csnn::verbatim_realization(net, std::move(ep)));
  CHECK(r.status == csnn::RunStatus::Terminated);
  CHECK(r.report.kappa == expected.kappa);
  CHECK(r.report.z == expected.z);
}

TEST_CASE("synthesis turns the clipped relu into consecutive integer levels") {
  QannNode n = csnn::synthesize_quantizer_node("x", csnn::quantized_relu_quantizer(3));
  CHECK(n.levels == LevelSet({Rational(0), Rational(1), Rational(2), Rational(3)}));
  for (std::size_t i = 0; i < n.levels.size(); ++i)
    CHECK(n.sigma.at(n.levels.at(i)) == n.levels.at(i)); // identity table
}

TEST_CASE("synthesis covers an offset quantizer with a sentinel level") {
  Quantizer q;
  q.breakpoints = {rat("1/2"), rat("3/2")};
  q.values = {Rational(0), Rational(4), Rational(9)};
  QannNode n = csnn::synthesize_quantizer_node("x", q);
  CHECK(n.levels ==
        LevelSet({rat("-1/2"), Rational(0), rat("1/2"), rat("3/2")}));
  CHECK(n.sigma.at(rat("-1/2")) == Rational(0));
  CHECK(n.sigma.at(Rational(0)) == Rational(0));
  CHECK(n.sigma.at(rat("1/2")) == Rational(4));
  CHECK(n.sigma.at(rat("3/2")) == Rational(9));

  std::string log = csnn::synthesis_log("x", q, n);
  CHECK(log.find("sentinel -1/2") != std::string::npos);
  CHECK(log.find("2 breakpoints") != std::string::npos);
}

TEST_CASE("a constant quantizer still synthesizes two levels") {
  Quantizer q;
  q.values = {Rational(7)};
  QannNode n = csnn::synthesize_quantizer_node("c", q);
  CHECK(n.levels == LevelSet({Rational(-1), Rational(0)}));
  CHECK(n.activation(Rational(-100)) == Rational(7));
  CHECK(n.activation(Rational(100)) == Rational(7));
}

TEST_CASE("synthesized nodes reproduce their quantizer pointwise") {
  csnn::SplitMix64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<Rational> cuts;
    std::int64_t pieces = rng.next_int(1, 6);
    while (cuts.size() + 1 < static_cast<std::size_t>(pieces))
      cuts.insert(rng.next_in(Rational(-3), Rational(3)));
    Quantizer q;
    q.breakpoints.assign(cuts.begin(), cuts.end());
    for (std::int64_t p = 0; p < pieces; ++p)
      q.values.push_back(rng.next_in(Rational(-3), Rational(3)));
    QannNode node = csnn::synthesize_quantizer_node("t", q);

    // Probe each breakpoint, just around it, and random points.
    std::vector<Rational> probes = {Rational(-10), Rational(10), Rational(0)};
    for (const Rational& b : q.breakpoints) {
      probes.push_back(b);
      probes.push_back(b - rat("1/1000"));
      probes.push_back(b + rat("1/1000"));
    }
    for (int extra = 0; extra < 10; ++extra)
      probes.push_back(rng.next_in(Rational(-5), Rational(5)));
    for (const Rational& z : probes)
      CHECK(node.activation(z) == q.eval(z));
  }
}

TEST_CASE("round trip through a network preserves the activation map") {
  Quantizer q;
  q.breakpoints = {rat("1/2"), rat("3/2")};
  q.values = {Rational(0), Rational(4), Rational(9)};
  QannSpec spec;
  spec.nodes = {csnn::synthesize_quantizer_node("x", q)};
  NetworkSpec net = csnn::qann_to_snn(spec);
  QannSpec back = csnn::snn_to_qann(net);
  REQUIRE(back.nodes.size() == 1);
  csnn::SplitMix64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Rational z = rng.next_in(Rational(-4), Rational(4));
    CHECK(back.nodes[0].activation(z) == q.eval(z));
  }
}
