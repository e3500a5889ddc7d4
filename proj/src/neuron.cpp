#include "csnn/neuron.hpp"

#include "csnn/errors.hpp"

namespace csnn {

NeuronState initial_state(const NeuronSpec& spec) {
  NeuronState s;
  s.potential = Rational(0);
  s.level_index = spec.levels.zero_index();
  s.cum_input = Rational(0);
  s.cum_output = spec.sigma.at(Rational(0));
  s.spike_count = 0;
  s.refractory_until.reset();
  return s;
}

Rational pre_decision_potential(const NeuronState& state, const Rational& dq_in,
                                const Rational& capacitance) {
  return state.potential + dq_in / capacitance;
}

std::optional<SpikeDirection> spike_decision(const Rational& v_hat,
                                             std::size_t level_index,
                                             const NeuronSpec& spec) {
  const LevelSet& levels = spec.levels;
  if (level_index + 1 < levels.size() &&
      v_hat >= v_thr(level_index, levels, spec.capacitance))
    return SpikeDirection::Up;
  if (level_index > 0 && v_hat.sign() < 0)
    return SpikeDirection::Down;
  return std::nullopt;
}

SpikeRecord apply_spike(NeuronState& state, SpikeDirection direction,
                        const NeuronSpec& spec, const Rational& time) {
  const LevelSet& levels = spec.levels;
  std::size_t old_index = state.level_index;
  std::size_t new_index;
  if (direction == SpikeDirection::Up) {
    if (old_index + 1 >= levels.size())
      throw SnnError(ErrorCode::IllegalTransition,
                     "up spike from maximal level of neuron " + spec.id);
    new_index = old_index + 1;
  } else {
    if (old_index == 0)
      throw SnnError(ErrorCode::IllegalTransition,
                     "down spike from minimal level of neuron " + spec.id);
    new_index = old_index - 1;
  }

  SpikeRecord rec;
  rec.time = time;
  rec.neuron = spec.id;
  rec.direction = direction;
  rec.q_dis = levels.at(new_index) - levels.at(old_index);
  rec.q_out = spec.sigma.at(levels.at(new_index)) - spec.sigma.at(levels.at(old_index));
  rec.phi_before = phi(state.potential, new_index, spec);

  state.potential = state.potential - rec.q_dis / spec.capacitance;
  state.level_index = new_index;
  state.cum_output = state.cum_output + rec.q_out;
  state.spike_count += 1;

  rec.phi_after = phi(state.potential, new_index, spec);
  rec.silent_after = is_silent(state.potential, new_index, spec);
  return rec;
}

bool is_silent(const Rational& potential, std::size_t level_index, const NeuronSpec& spec) {
  return !spike_decision(potential, level_index, spec).has_value();
}

Rational phi(const Rational& potential, std::size_t level_index, const NeuronSpec& spec) {
  const LevelSet& levels = spec.levels;
  bool has_up = level_index + 1 < levels.size();
  bool has_down = level_index > 0;
  if (has_up) {
    Rational thr = v_thr(level_index, levels, spec.capacitance);
    if (potential > thr) return potential - thr;
  }
  if (has_down && potential.sign() < 0) return -potential;
  return Rational(0);
}

Rational delta_min(const LevelSet& levels, const Rational& capacitance) {
  return levels.min_gap() / capacitance;
}

void integrate_and_fire(NeuronState& state, const Rational& dq_in,
                        const NeuronSpec& spec, const Rational& time,
                        bool gated, std::vector<SpikeRecord>& spikes) {
  state.cum_input = state.cum_input + dq_in;
  state.potential = state.potential + dq_in / spec.capacitance;
  if (gated) return;
  // Terminates: consecutive spikes share a direction, so at most
  // levels.size() - 1 iterations.
  while (auto dir = spike_decision(state.potential, state.level_index, spec))
    spikes.push_back(apply_spike(state, *dir, spec, time));
}

Rational ledger_residual(const NeuronState& state, const NeuronSpec& spec) {
  Rational stored = spec.levels.at(state.level_index); // initial level is 0
  return spec.capacitance * state.potential - state.cum_input + stored;
}

} // namespace csnn
