// Acceptance gate. Eight checks, one [PASS]/[FAIL] line each, exit 1 if any
// fails. Every value comparison is exact rational equality; the only numeric
// tolerances in this file are the two wall-clock bounds stated inline.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "csnn/cyclic.hpp"
#include "csnn/engine.hpp"
#include "csnn/fuzz.hpp"
#include "csnn/levels.hpp"
#include "csnn/network.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool g_all_pass = true;

void line(bool ok, const char* name, double secs, const std::string& detail) {
  std::printf("[%s] %-34s (%6.2fs)  %s\n", ok ? "PASS" : "FAIL", name, secs,
              detail.c_str());
  if (!ok) g_all_pass = false;
}

std::string replay_hints(const csnn::HarnessSummary& s, std::size_t max_lines = 3) {
  std::string out;
  for (std::size_t i = 0; i < s.failures.size() && i < max_lines; ++i) {
    out += "\n        " + s.failures[i];
  }
  if (s.failures.size() > max_lines) {
    out += "\n        ... " + std::to_string(s.failures.size() - max_lines) + " more";
  }
  return out;
}

// Three binary units wired so the synchronous decoded map has fixed points
// that iteration from rest never reaches: it settles into a period-2 cycle
// instead. As a continuous-time network the loop spikes forever, which is
// exactly what the budget reporting has to surface as BudgetExceeded rather
// than a hang or a crash.
csnn::NetworkSpec oscillating_loop() {
  using csnn::Rational;
  csnn::NetworkSpec net;
  csnn::LevelSet binary({Rational(0), Rational(1)});
  for (const char* id : {"n1", "n2", "n3"}) {
    csnn::NeuronSpec n;
    n.id = id;
    n.capacitance = Rational(1);
    n.levels = binary;
    n.sigma = csnn::ActivationTable::identity(binary);
    net.neurons.push_back(n);
  }
  auto edge = [](const char* pre, const char* post, long w) {
    csnn::SynapseSpec s;
    s.pre = pre;
    s.post = post;
    s.weight = csnn::Rational(w);
    s.delay = csnn::Rational(1);
    s.kernel = {{csnn::Rational(0), csnn::Rational(1)}};
    return s;
  };
  net.synapses = {edge("n1", "n2", 1), edge("n1", "n3", 1),
                  edge("n2", "n3", -2), edge("n3", "n2", -2)};
  csnn::validate(net);
  return net;
}

} // namespace

int main() {
  const std::uint64_t seed = 2026;

  // 1. Hand-checked cyclic counterexamples, required to finish inside 1s.
  {
    auto t0 = Clock::now();
    csnn::SuiteReport suite = csnn::counterexample_suite();
    double secs = seconds_since(t0);
    std::string detail;
    for (const auto& ex : suite.examples) {
      if (!detail.empty()) detail += ", ";
      detail += ex.name + (ex.pass ? " ok" : " FAILED: " + ex.detail);
    }
    bool ok = suite.all_pass && secs < 1.0;
    if (suite.all_pass && secs >= 1.0) detail += " (over the 1s bound)";
    line(ok, "cyclic counterexample suite", secs, detail);
  }

  // One shared fuzz pass backs checks 2, 3 and contributes to 5, 6, 7:
  // random layered networks, every realization audited, first realization
  // also rerun with reversed tie-breaking and against static evaluation.
  auto fuzz_t0 = Clock::now();
  csnn::HarnessSummary fuzz = csnn::fuzz_invariance(seed, 100, 20, 20);
  double fuzz_secs = seconds_since(fuzz_t0);
  std::string fuzz_scale = std::to_string(fuzz.cases) + " networks, " +
                           std::to_string(fuzz.runs) + " runs, " +
                           std::to_string(fuzz.events) + " events";

  // 2. Terminal outputs are invariant across realizations and tie orders.
  line(fuzz.invariance_failures == 0, "terminal-output invariance", fuzz_secs,
       fuzz.invariance_failures == 0
           ? fuzz_scale
           : std::to_string(fuzz.invariance_failures) + " divergent cases" +
                 replay_hints(fuzz));

  // 3. Event-driven terminal output equals the static forward evaluation.
  line(fuzz.static_failures == 0, "static-evaluation agreement", fuzz_secs,
       fuzz.static_failures == 0
           ? fuzz_scale
           : std::to_string(fuzz.static_failures) + " disagreements" +
                 replay_hints(fuzz));

  // 4. Conversion round trip: random quantized specs materialized as
  // networks simulate to their own static evaluation on every input.
  auto qr_t0 = Clock::now();
  csnn::HarnessSummary qr = csnn::qann_roundtrip(seed, 50, 5, 5, 6);
  double qr_secs = seconds_since(qr_t0);
  line(qr.mismatch_failures == 0, "conversion round trip", qr_secs,
       qr.mismatch_failures == 0
           ? std::to_string(qr.cases) + " spec/input pairs, " +
                 std::to_string(qr.runs) + " runs"
           : std::to_string(qr.mismatch_failures) + " mismatches" +
                 replay_hints(qr));

  // 8's harness runs here so 5, 6, 7 can fold its audits in; reported last.
  auto tm_t0 = Clock::now();
  csnn::HarnessSummary tm = csnn::terminal_map_check(seed, 1000);
  double tm_secs = seconds_since(tm_t0);

  double audited_secs = fuzz_secs + qr_secs + tm_secs;
  std::string audited_scale =
      std::to_string(fuzz.runs + qr.runs + tm.runs) + " audited runs";

  // 5. The per-neuron charge books balance after every event (debug ledger
  // on in every harness run) and the terminal network identity holds.
  std::uint64_t ledger_bad =
      fuzz.ledger_failures + qr.ledger_failures + tm.ledger_failures;
  line(ledger_bad == 0, "exact charge-ledger conservation", audited_secs,
       ledger_bad == 0 ? audited_scale
                       : std::to_string(ledger_bad) + " imbalances" +
                             replay_hints(fuzz) + replay_hints(qr) +
                             replay_hints(tm));

  // 6. Every recorded spike lowers the distance potential by its neuron's
  // delta_min or leaves the neuron silent.
  std::uint64_t progress_bad =
      fuzz.progress_failures + qr.progress_failures + tm.progress_failures;
  line(progress_bad == 0, "strict per-spike progress", audited_secs,
       progress_bad == 0 ? audited_scale
                         : std::to_string(progress_bad) + " violations" +
                               replay_hints(fuzz) + replay_hints(qr) +
                               replay_hints(tm));

  // 7. Termination reporting: every acyclic run drains its queue, and a
  // genuinely oscillating loop hits the budget and says so, with the
  // per-event ledger and the progress audit still clean.
  {
    auto t0 = Clock::now();
    std::uint64_t acyclic_bad = fuzz.termination_failures +
                                qr.termination_failures + tm.termination_failures;
    csnn::NetworkSpec loop = oscillating_loop();
    csnn::InputEpisode ep;
    ep.impulses["n1"] = {{csnn::Rational(0), csnn::Rational(1)}};
    csnn::EngineOptions opt;
    opt.event_budget = 5000;
    opt.debug_ledger = true;
    std::string detail;
    bool cyclic_ok = false;
    try {
      csnn::RunResult r = csnn::run(loop, csnn::verbatim_realization(loop, ep), opt);
      bool budgeted = r.status == csnn::RunStatus::BudgetExceeded &&
                      r.report.total_events == opt.event_budget;
      std::vector<std::string> progress = csnn::strict_progress_audit(r.trace, loop);
      cyclic_ok = budgeted && progress.empty();
      detail = budgeted ? "cyclic stress stopped at the 5000-event budget"
                        : "cyclic stress was not reported as budget-exceeded";
      if (!progress.empty())
        detail += "; progress audit: " + progress.front();
    } catch (const std::exception& e) {
      detail = std::string("cyclic stress threw: ") + e.what();
    }
    double secs = seconds_since(t0);
    bool ok = acyclic_bad == 0 && cyclic_ok;
    std::string acyclic_part =
        acyclic_bad == 0 ? "all acyclic runs terminated"
                         : std::to_string(acyclic_bad) + " acyclic runs failed to" +
                               " terminate cleanly" + replay_hints(fuzz);
    line(ok, "termination and budget reporting", audited_secs + secs,
         acyclic_part + "; " + detail);
  }

  // 8. Single-neuron terminal map: the terminal level decodes the aggregate
  // input exactly, for every splitting. Required to finish inside 10s.
  {
    bool ok = tm.mismatch_failures == 0 && tm_secs < 10.0;
    std::string detail =
        tm.mismatch_failures == 0
            ? std::to_string(tm.cases) + " single-neuron trials"
            : std::to_string(tm.mismatch_failures) + " wrong terminals" +
                  replay_hints(tm);
    if (tm.mismatch_failures == 0 && tm_secs >= 10.0)
      detail += " (over the 10s bound)";
    line(ok, "single-neuron terminal map", tm_secs, detail);
  }

  return g_all_pass ? 0 : 1;
}
