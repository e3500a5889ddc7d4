#include "csnn/neuron.hpp"

#include "csnn/errors.hpp"
#include "csnn/realizer.hpp"
#include "doctest.h"

using csnn::LevelSet;
using csnn::NeuronSpec;
using csnn::NeuronState;
using csnn::Rational;
using csnn::SnnError;
using csnn::SpikeDirection;
using csnn::SpikeRecord;

namespace {

Rational rat(const char* s) { return Rational::parse(s); }

NeuronSpec unit_neuron() {
  NeuronSpec n;
  n.id = "u";
  n.capacitance = Rational(1);
  n.levels = LevelSet({Rational(0), Rational(1), Rational(2), Rational(3)});
  n.sigma = csnn::ActivationTable::identity(n.levels);
  return n;
}

} // namespace

TEST_CASE("initial state sits at level 0 with sigma(0) already emitted") {
  NeuronSpec spec = unit_neuron();
  spec.sigma.set(Rational(0), Rational(5)); // resting output need not be 0
  NeuronState s = csnn::initial_state(spec);
  CHECK(s.potential == Rational(0));
  CHECK(spec.levels.at(s.level_index) == Rational(0));
  CHECK(s.cum_input == Rational(0));
  CHECK(s.cum_output == Rational(5));
  CHECK(s.spike_count == 0);
  CHECK_FALSE(s.refractory_until.has_value());
}

TEST_CASE("pre-decision potential adds the incoming charge over C") {
  NeuronState s;
  s.potential = Rational(0);
  CHECK(csnn::pre_decision_potential(s, rat("27/10"), Rational(1)) == rat("27/10"));
  s.potential = rat("1/2");
  CHECK(csnn::pre_decision_potential(s, Rational(0), Rational(1)) == rat("1/2"));
  s.potential = Rational(0);
  CHECK(csnn::pre_decision_potential(s, Rational(3), Rational(2)) == rat("3/2"));
}

TEST_CASE("spike decision at each corner of the rule") {
  NeuronSpec spec = unit_neuron();
  CHECK(csnn::spike_decision(Rational(1), 0, spec) == SpikeDirection::Up);
  CHECK_FALSE(csnn::spike_decision(rat("-1/4"), 0, spec).has_value()); // floor holds
  CHECK(csnn::spike_decision(rat("-1/4"), 2, spec) == SpikeDirection::Down);
  CHECK_FALSE(csnn::spike_decision(rat("1/2"), 3, spec).has_value()); // ceiling holds
  CHECK(csnn::spike_decision(rat("99/100"), 0, spec) == std::nullopt); // strict >=
  CHECK(csnn::spike_decision(Rational(0), 2, spec) == std::nullopt);   // down needs < 0
}

TEST_CASE("up spike moves one level and discharges exactly the gap") {
  NeuronSpec spec = unit_neuron();
  NeuronState s = csnn::initial_state(spec);
  s.potential = rat("27/10"); // pre-decision potential already applied
  s.cum_input = rat("27/10");
  SpikeRecord rec = csnn::apply_spike(s, SpikeDirection::Up, spec, Rational(0));
  CHECK(spec.levels.at(s.level_index) == Rational(1));
  CHECK(s.potential == rat("17/10"));
  CHECK(rec.q_dis == Rational(1));
  CHECK(rec.q_out == Rational(1));
  CHECK(csnn::ledger_residual(s, spec) == Rational(0));
}

TEST_CASE("down spike restores the discharged gap to the membrane") {
  NeuronSpec spec = unit_neuron();
  NeuronState s = csnn::initial_state(spec);
  s.level_index = 2;
  s.potential = rat("-1/4");
  s.cum_input = rat("7/4"); // consistent books: 1*(-1/4) = 7/4 - 2
  s.cum_output = Rational(2);
  SpikeRecord rec = csnn::apply_spike(s, SpikeDirection::Down, spec, Rational(0));
  CHECK(spec.levels.at(s.level_index) == Rational(1));
  CHECK(s.potential == rat("3/4"));
  CHECK(rec.q_dis == Rational(-1));
  CHECK(rec.q_out == Rational(-1));
  CHECK(csnn::ledger_residual(s, spec) == Rational(0));
}

TEST_CASE("output increment follows sigma, not the level step") {
  NeuronSpec spec;
  spec.id = "s";
  spec.capacitance = Rational(1);
  spec.levels = LevelSet({Rational(0), Rational(1)});
  spec.sigma.set(Rational(0), Rational(0));
  spec.sigma.set(Rational(1), Rational(5));
  NeuronState s = csnn::initial_state(spec);
  s.potential = Rational(1);
  s.cum_input = Rational(1);
  SpikeRecord rec = csnn::apply_spike(s, SpikeDirection::Up, spec, Rational(0));
  CHECK(rec.q_dis == Rational(1)); // well still steps by the level gap
  CHECK(rec.q_out == Rational(5)); // emitted charge follows sigma
  CHECK(s.cum_output == Rational(5));
}

TEST_CASE("illegal transitions are rejected at the level-set ends") {
  NeuronSpec spec = unit_neuron();
  NeuronState s = csnn::initial_state(spec);
  CHECK_THROWS_AS(csnn::apply_spike(s, SpikeDirection::Down, spec, Rational(0)),
                  SnnError);
  s.level_index = 3;
  CHECK_THROWS_AS(csnn::apply_spike(s, SpikeDirection::Up, spec, Rational(0)),
                  SnnError);
}

TEST_CASE("integrate-and-fire runs bursts to quiescence") {
  NeuronSpec spec = unit_neuron();
  std::vector<SpikeRecord> spikes;

  NeuronState s = csnn::initial_state(spec);
  csnn::integrate_and_fire(s, rat("27/10"), spec, Rational(0), false, spikes);
  CHECK(spikes.size() == 2); // two up crossings
  CHECK(spec.levels.at(s.level_index) == Rational(2));
  CHECK(s.potential == rat("7/10"));
  CHECK(csnn::ledger_residual(s, spec) == Rational(0));

  spikes.clear();
  s = csnn::initial_state(spec);
  csnn::integrate_and_fire(s, rat("-3/10"), spec, Rational(0), false, spikes);
  CHECK(spikes.empty()); // cannot go below the minimal level
  CHECK(s.potential == rat("-3/10"));
  CHECK(spec.levels.at(s.level_index) == Rational(0));

  spikes.clear();
  s = csnn::initial_state(spec);
  csnn::integrate_and_fire(s, Rational(10), spec, Rational(0), false, spikes);
  CHECK(spikes.size() == 3); // saturates at the top level
  CHECK(spec.levels.at(s.level_index) == Rational(3));
  CHECK(s.potential == Rational(7));
  CHECK(csnn::ledger_residual(s, spec) == Rational(0));
}

TEST_CASE("gated delivery integrates charge without deciding") {
  NeuronSpec spec = unit_neuron();
  std::vector<SpikeRecord> spikes;
  NeuronState s = csnn::initial_state(spec);
  csnn::integrate_and_fire(s, Rational(2), spec, Rational(0), true, spikes);
  CHECK(spikes.empty());
  CHECK(s.potential == Rational(2)); // above threshold, decision deferred
  CHECK(s.cum_input == Rational(2));
  CHECK(csnn::ledger_residual(s, spec) == Rational(0));
}

TEST_CASE("silence matches the absence of a decision") {
  NeuronSpec spec = unit_neuron();
  CHECK(csnn::is_silent(rat("7/10"), 2, spec));
  CHECK(csnn::is_silent(rat("-3/10"), 0, spec)); // negative is silent at the floor
  CHECK_FALSE(csnn::is_silent(Rational(1), 1, spec));
  CHECK(csnn::is_silent(Rational(5), 3, spec)); // any height is silent at the top
  CHECK_FALSE(csnn::is_silent(rat("-1/1000"), 3, spec));
}

TEST_CASE("phi measures the distance to the silent band") {
  NeuronSpec spec = unit_neuron();
  CHECK(csnn::phi(rat("5/2"), 0, spec) == rat("3/2"));
  CHECK(csnn::phi(rat("-3/4"), 2, spec) == rat("3/4"));
  CHECK(csnn::phi(rat("7/10"), 2, spec) == Rational(0)); // silent -> zero
  CHECK(csnn::phi(Rational(100), 3, spec) == Rational(0)); // top level, no up rule
  CHECK(csnn::phi(Rational(1), 0, spec) == Rational(0));   // boundary sits at zero
}

TEST_CASE("delta_min is the minimal level gap in potential units") {
  CHECK(csnn::delta_min(LevelSet({Rational(0), Rational(1), Rational(2), Rational(3)}),
                        Rational(1)) == Rational(1));
  CHECK(csnn::delta_min(LevelSet({Rational(-1), Rational(0), Rational(2)}),
                        Rational(1)) == Rational(1));
  CHECK(csnn::delta_min(LevelSet({Rational(0), Rational(1)}), Rational(2)) ==
        rat("1/2"));
}

TEST_CASE("every spike satisfies strict progress") {
  NeuronSpec spec = unit_neuron();
  Rational dmin = csnn::delta_min(spec.levels, spec.capacitance);
  csnn::SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    NeuronState s = csnn::initial_state(spec);
    std::vector<SpikeRecord> spikes;
    for (int step = 0; step < 5; ++step)
      csnn::integrate_and_fire(s, rng.next_in(Rational(-4), Rational(4)), spec,
                               Rational(step), false, spikes);
    for (const SpikeRecord& rec : spikes) {
      bool ok = rec.silent_after || rec.phi_after <= rec.phi_before - dmin;
      CHECK(ok);
    }
    CHECK(csnn::ledger_residual(s, spec) == Rational(0));
    // Output telescopes to sigma at the terminal level.
    CHECK(s.cum_output == spec.sigma.at(spec.levels.at(s.level_index)));
  }
}

TEST_CASE("one-shot delivery lands on the decoded level") {
  NeuronSpec spec = unit_neuron();
  spec.capacitance = rat("5/3"); // decoding must not depend on C
  csnn::SplitMix64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    Rational z = rng.next_in(Rational(-2), Rational(5));
    NeuronState s = csnn::initial_state(spec);
    std::vector<SpikeRecord> spikes;
    csnn::integrate_and_fire(s, z, spec, Rational(0), false, spikes);
    CHECK(s.level_index == csnn::decode_index(z, spec.levels));
    CHECK(csnn::is_silent(s.potential, s.level_index, spec));
  }
}
