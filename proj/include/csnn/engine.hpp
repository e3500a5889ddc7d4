#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "csnn/network.hpp"
#include "csnn/neuron.hpp"
#include "csnn/realizer.hpp"

namespace csnn {

enum class EventKind { InputImpulse, SynapticCharge, RefractoryRelease };

const char* event_kind_name(EventKind k);

struct Event {
  Rational time;
  std::uint64_t seq = 0; // insertion order, the deterministic tie-break
  EventKind kind = EventKind::InputImpulse;
  std::size_t neuron = 0;               // index into net.neurons
  Rational charge;                      // zero for RefractoryRelease
  std::optional<std::size_t> synapse;   // source, SynapticCharge only
};

// Min-queue on (time, seq). reverse_ties flips the seq comparison only;
// the terminal output must not care, and the fuzz harness checks that.
class EventQueue {
public:
  explicit EventQueue(bool reverse_ties = false) : heap_(Order{reverse_ties}) {}

  void push(Event e) { heap_.push(std::move(e)); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

private:
  struct Order {
    bool reverse_ties;
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return reverse_ties ? a.seq < b.seq : a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Order> heap_;
};

struct TraceEntry {
  Event event;
  bool gated = false; // delivered during refractory: charge only, no decisions
  std::vector<SpikeRecord> spikes;
};

struct Trace {
  std::vector<TraceEntry> entries;
  // Per-neuron cumulative-output step samples (time, value after the jump).
  std::map<std::string, std::vector<std::pair<Rational, Rational>>> output_samples;
};

struct TerminalReport {
  std::vector<Rational> kappa;        // sigma(terminal level), neuron order
  std::vector<Rational> z;            // total inflow charge per neuron
  std::vector<Rational> levels;       // terminal discharge level values
  std::vector<std::uint64_t> spike_counts;
  Rational termination_time;
  std::uint64_t total_events = 0;
};

enum class RunStatus { Terminated, BudgetExceeded };

struct EngineOptions {
  std::uint64_t event_budget = 10000000;
  bool reverse_ties = false;
  bool debug_ledger = false; // audit the per-neuron ledger after every event
  bool record_trace = true;
};

struct RunResult {
  RunStatus status = RunStatus::Terminated;
  TerminalReport report;
  Trace trace;
  std::vector<NeuronState> final_states;
};

// One InputImpulse event per impulse, in episode order. Unknown neuron ids
// or negative times are InvalidEpisode.
std::vector<Event> schedule_episode(const InputEpisode& episode, const NetworkSpec& net,
                                    std::uint64_t& seq);

// Baseline charges: a presynaptic sigma(0) = q0 != 0 transmits W*q0 through
// each kernel atom at tau + offset, exactly once per synapse. Zero charges
// are not scheduled.
std::vector<Event> emit_baseline_charges(const NetworkSpec& net, const Realization& realization,
                                         std::uint64_t& seq);

// Process events in (time, seq) order until the queue drains or the budget
// is hit. On normal termination every neuron is silent (asserted). Throws
// InvalidSpec/InvalidEpisode on malformed inputs, InvariantViolation if an
// internal audit fails.
RunResult run(const NetworkSpec& net, const Realization& realization,
              const EngineOptions& options = {});

// Exact conservation audit of a run: per neuron C*V(T) = z - level(T), and
// for terminated runs also the network identity z = u + W*kappa (a
// budget-stopped run legitimately has charges in flight). Returns
// human-readable violations; empty means the books balance.
std::vector<std::string> ledger_audit(const RunResult& result, const NetworkSpec& net,
                                      const std::vector<Rational>& u);

// Checks every recorded spike for phi_after <= phi_before - delta_min or
// silence after the spike. Empty result means the progress bound held.
std::vector<std::string> strict_progress_audit(const Trace& trace, const NetworkSpec& net);

} // namespace csnn
