#include "csnn/engine.hpp"

#include <algorithm>

#include "csnn/errors.hpp"

namespace csnn {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::InputImpulse: return "input";
    case EventKind::SynapticCharge: return "synaptic";
    case EventKind::RefractoryRelease: return "release";
  }
  return "?";
}

std::vector<Event> schedule_episode(const InputEpisode& episode, const NetworkSpec& net,
                                    std::uint64_t& seq) {
  std::vector<Event> events;
  for (const auto& [id, impulses] : episode.impulses) {
    std::optional<std::size_t> index = net.index_of(id);
    if (!index)
      throw SnnError(ErrorCode::InvalidEpisode, "episode names unknown neuron " + id);
    for (const Impulse& imp : impulses) {
      if (imp.time.sign() < 0)
        throw SnnError(ErrorCode::InvalidEpisode,
                       "impulse at negative time " + imp.time.str() + " for neuron " + id);
      Event e;
      e.time = imp.time;
      e.seq = seq++;
      e.kind = EventKind::InputImpulse;
      e.neuron = *index;
      e.charge = imp.charge;
      events.push_back(std::move(e));
    }
  }
  return events;
}

std::vector<Event> emit_baseline_charges(const NetworkSpec& net, const Realization& realization,
                                         std::uint64_t& seq) {
  std::vector<Event> events;
  for (std::size_t s = 0; s < net.synapses.size(); ++s) {
    const SynapseSpec& syn = net.synapses[s];
    const NeuronSpec& pre = net.neuron(syn.pre);
    Rational q0 = pre.sigma.at(Rational(0));
    if (q0.is_zero()) continue;
    std::size_t post = *net.index_of(syn.post);
    for (const KernelAtom& atom : realization.kernels[s]) {
      Rational charge = syn.weight * q0 * atom.fraction;
      if (charge.is_zero()) continue;
      Event e;
      e.time = realization.delays[s] + atom.offset;
      e.seq = seq++;
      e.kind = EventKind::SynapticCharge;
      e.neuron = post;
      e.charge = charge;
      e.synapse = s;
      events.push_back(std::move(e));
    }
  }
  return events;
}

namespace {

bool refractory_blocked(const NeuronState& state, const Rational& now) {
  return state.refractory_until && now < *state.refractory_until;
}

} // namespace

RunResult run(const NetworkSpec& net, const Realization& realization,
              const EngineOptions& options) {
  validate(net);
  if (realization.delays.size() != net.synapses.size() ||
      realization.kernels.size() != net.synapses.size())
    throw SnnError(ErrorCode::InvalidSpec, "realization synapse data does not match network");
  if (realization.refractory.size() != net.neurons.size())
    throw SnnError(ErrorCode::InvalidSpec, "realization refractory data does not match network");
  for (const Rational& d : realization.delays)
    if (d.sign() < 0) throw SnnError(ErrorCode::InvalidSpec, "negative delay in realization");

  // Outgoing synapses per presynaptic neuron, in synapse order.
  std::vector<std::vector<std::size_t>> outgoing(net.neurons.size());
  for (std::size_t s = 0; s < net.synapses.size(); ++s)
    outgoing[*net.index_of(net.synapses[s].pre)].push_back(s);
  std::vector<std::size_t> post_index(net.synapses.size());
  for (std::size_t s = 0; s < net.synapses.size(); ++s)
    post_index[s] = *net.index_of(net.synapses[s].post);

  std::vector<NeuronState> states;
  states.reserve(net.neurons.size());
  for (const NeuronSpec& n : net.neurons) states.push_back(initial_state(n));

  std::uint64_t seq = 0;
  EventQueue queue(options.reverse_ties);
  for (Event& e : emit_baseline_charges(net, realization, seq)) queue.push(std::move(e));
  for (Event& e : schedule_episode(realization.episode, net, seq)) queue.push(std::move(e));

  RunResult result;
  Rational last_time(0);
  std::uint64_t processed = 0;
  std::vector<SpikeRecord> burst;

  while (!queue.empty()) {
    if (processed >= options.event_budget) {
      result.status = RunStatus::BudgetExceeded;
      break;
    }
    Event event = queue.pop();
    ++processed;
    last_time = event.time;
    NeuronState& state = states[event.neuron];
    const NeuronSpec& spec = net.neurons[event.neuron];

    burst.clear();
    bool gated = false;
    if (event.kind == EventKind::RefractoryRelease) {
      if (state.refractory_until && event.time < *state.refractory_until) {
        // stale release; a newer one is in flight
      } else {
        state.refractory_until.reset();
        integrate_and_fire(state, Rational(0), spec, event.time, false, burst);
      }
    } else {
      gated = refractory_blocked(state, event.time);
      integrate_and_fire(state, event.charge, spec, event.time, gated, burst);
    }

    // Propagate every spike of the burst through the outgoing synapses.
    for (const SpikeRecord& rec : burst) {
      if (rec.q_out.is_zero()) continue;
      for (std::size_t s : outgoing[event.neuron]) {
        const SynapseSpec& syn = net.synapses[s];
        for (const KernelAtom& atom : realization.kernels[s]) {
          Rational charge = syn.weight * rec.q_out * atom.fraction;
          if (charge.is_zero()) continue;
          Event out;
          out.time = event.time + realization.delays[s] + atom.offset;
          out.seq = seq++;
          out.kind = EventKind::SynapticCharge;
          out.neuron = post_index[s];
          out.charge = charge;
          out.synapse = s;
          queue.push(std::move(out));
        }
      }
    }

    // One refractory window per burst, re-checked at its end.
    if (!burst.empty() && realization.refractory[event.neuron] &&
        realization.refractory[event.neuron]->sign() > 0) {
      Rational until = event.time + *realization.refractory[event.neuron];
      state.refractory_until = until;
      Event release;
      release.time = until;
      release.seq = seq++;
      release.kind = EventKind::RefractoryRelease;
      release.neuron = event.neuron;
      queue.push(std::move(release));
    }

    if (options.debug_ledger) {
      Rational residual = ledger_residual(state, spec);
      if (!residual.is_zero())
        throw SnnError(ErrorCode::InvariantViolation,
                       "charge ledger residual " + residual.str() + " at neuron " + spec.id +
                           " after event at t=" + event.time.str());
    }

    if (options.record_trace) {
      if (!burst.empty())
        result.trace.output_samples[spec.id].push_back({event.time, state.cum_output});
      TraceEntry entry;
      entry.event = std::move(event);
      entry.gated = gated;
      entry.spikes = burst;
      result.trace.entries.push_back(std::move(entry));
    }
  }

  if (result.status == RunStatus::Terminated) {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (!is_silent(states[i].potential, states[i].level_index, net.neurons[i]))
        throw SnnError(ErrorCode::InvariantViolation,
                       "queue drained but neuron " + net.neurons[i].id + " is not silent");
  }

  TerminalReport& report = result.report;
  report.termination_time = last_time;
  report.total_events = processed;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const NeuronState& s = states[i];
    report.kappa.push_back(s.cum_output);
    report.z.push_back(s.cum_input);
    report.levels.push_back(net.neurons[i].levels.at(s.level_index));
    report.spike_counts.push_back(s.spike_count);
  }
  result.final_states = std::move(states);
  return result;
}

std::vector<std::string> ledger_audit(const RunResult& result, const NetworkSpec& net,
                                      const std::vector<Rational>& u) {
  std::vector<std::string> issues;
  if (u.size() != net.neurons.size()) {
    issues.push_back("aggregate vector length does not match neuron count");
    return issues;
  }
  for (std::size_t i = 0; i < net.neurons.size(); ++i) {
    const NeuronSpec& spec = net.neurons[i];
    const NeuronState& state = result.final_states[i];
    Rational residual = ledger_residual(state, spec);
    if (!residual.is_zero())
      issues.push_back("neuron " + spec.id + ": C*V - (z - level) = " + residual.str());
  }
  // Network bookkeeping: every inflow is external input or a weighted
  // terminal output (baseline plus spike increments telescope to kappa).
  // Only meaningful once the queue drained; a budget-stopped run still has
  // charges in flight, while the per-neuron books above hold at any instant.
  if (result.status != RunStatus::Terminated) return issues;
  for (std::size_t i = 0; i < net.neurons.size(); ++i) {
    Rational expected = u[i];
    for (std::size_t s = 0; s < net.synapses.size(); ++s) {
      if (*net.index_of(net.synapses[s].post) != i) continue;
      std::size_t pre = *net.index_of(net.synapses[s].pre);
      expected = expected + net.synapses[s].weight * result.report.kappa[pre];
    }
    if (expected != result.report.z[i])
      issues.push_back("neuron " + net.neurons[i].id + ": z = " + result.report.z[i].str() +
                       " but u + W*kappa = " + expected.str());
  }
  return issues;
}

std::vector<std::string> strict_progress_audit(const Trace& trace, const NetworkSpec& net) {
  std::vector<std::string> issues;
  for (const TraceEntry& entry : trace.entries) {
    for (const SpikeRecord& rec : entry.spikes) {
      if (!net.index_of(rec.neuron)) {
        issues.push_back("spike from unknown neuron " + rec.neuron);
        continue;
      }
      const NeuronSpec& spec = net.neuron(rec.neuron);
      if (rec.silent_after) continue;
      Rational dm = delta_min(spec.levels, spec.capacitance);
      if (rec.phi_after > rec.phi_before - dm)
        issues.push_back("neuron " + rec.neuron + " at t=" + rec.time.str() +
                         ": phi " + rec.phi_before.str() + " -> " + rec.phi_after.str() +
                         " misses the required decrease " + dm.str());
    }
  }
  return issues;
}

} // namespace csnn
