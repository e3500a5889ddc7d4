#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "csnn/network.hpp"
#include "csnn/rational.hpp"

namespace csnn {

enum class SpikeDirection { Up, Down };

inline const char* spike_direction_name(SpikeDirection d) {
  return d == SpikeDirection::Up ? "up" : "down";
}

// Full dynamical state of one neuron. Invariant maintained by every
// transition: C * potential == cum_input - (level_value - level_value(0)),
// i.e. charge moved onto the membrane plus charge stored in the well
// accounts exactly for all charge received.
struct NeuronState {
  Rational potential;          // V, in potential units
  std::size_t level_index = 0; // index into the neuron's level set
  Rational cum_input;          // total input charge received so far
  Rational cum_output;         // sigma(current level); starts at sigma(0)
  std::uint64_t spike_count = 0;
  std::optional<Rational> refractory_until; // absolute time; blocked while t < until
};

NeuronState initial_state(const NeuronSpec& spec);

// One threshold crossing, recorded for audits.
struct SpikeRecord {
  Rational time;
  std::string neuron;
  SpikeDirection direction;
  Rational q_dis;       // signed level step absorbed by the well
  Rational q_out;       // sigma(new level) - sigma(old level)
  Rational phi_before;  // distance to silence, measured at the new level
  Rational phi_after;
  bool silent_after = false;
};

// Potential the decision rule sees: V(t-) plus the incoming charge dumped
// on the capacitor.
Rational pre_decision_potential(const NeuronState& state, const Rational& dq_in,
                                const Rational& capacitance);

// Decide whether `v_hat` triggers a spike from `level_index`. Up wins when
// both rules fire is impossible (up needs v_hat >= v_thr > 0, down needs
// v_hat < 0).
std::optional<SpikeDirection> spike_decision(const Rational& v_hat,
                                             std::size_t level_index,
                                             const NeuronSpec& spec);

// Execute one spike: move the well one level, subtract the discharged
// charge from the potential, and report the output increment. Throws
// IllegalTransition if asked to step past an end of the level set.
SpikeRecord apply_spike(NeuronState& state, SpikeDirection direction,
                        const NeuronSpec& spec, const Rational& time);

// True when no decision rule fires at the current state.
bool is_silent(const Rational& potential, std::size_t level_index, const NeuronSpec& spec);

// Distance from `potential` to the closure of the silent band at
// `level_index`, in potential units. Zero inside the band.
Rational phi(const Rational& potential, std::size_t level_index, const NeuronSpec& spec);

// Smallest guaranteed per-spike decrease of phi: (minimum adjacent level
// gap) / C.
Rational delta_min(const LevelSet& levels, const Rational& capacitance);

// Deliver dq_in at `time` and run the decision loop to quiescence. When
// `gated` the charge integrates but no decisions are taken. Appends one
// SpikeRecord per crossing.
void integrate_and_fire(NeuronState& state, const Rational& dq_in,
                        const NeuronSpec& spec, const Rational& time,
                        bool gated, std::vector<SpikeRecord>& spikes);

// Exact per-neuron charge ledger: C * (V - V0) == cum_input - stored charge
// delta. Returns the residual, zero when the books balance.
Rational ledger_residual(const NeuronState& state, const NeuronSpec& spec);

} // namespace csnn
