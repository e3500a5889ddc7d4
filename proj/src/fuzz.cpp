#include "csnn/fuzz.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <set>
#include <thread>

#include "csnn/engine.hpp"
#include "csnn/errors.hpp"
#include "csnn/levels.hpp"

namespace csnn {

namespace {

ActivationTable random_sigma(SplitMix64& rng, const LevelSet& levels) {
  if (rng.next_int(0, 1) == 0) return ActivationTable::identity(levels);
  ActivationTable table;
  Rational v = rng.next_in(Rational(-2), Rational(2));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    table.set(levels.at(i), v);
    v = v + rng.next_in(Rational(0), Rational(2)); // nondecreasing, repeats allowed
  }
  return table;
}

std::string format_vec(const std::vector<Rational>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].str();
  }
  return out + ")";
}

} // namespace

NetworkSpec random_network(SplitMix64& rng, std::size_t max_neurons) {
  std::size_t n = static_cast<std::size_t>(
      rng.next_int(2, static_cast<std::int64_t>(max_neurons < 2 ? 2 : max_neurons)));
  std::int64_t layer_count = rng.next_int(2, 5);
  std::vector<std::int64_t> layer(n);
  for (std::size_t i = 0; i < n; ++i) layer[i] = rng.next_int(0, layer_count - 1);

  NetworkSpec net;
  for (std::size_t i = 0; i < n; ++i) {
    NeuronSpec spec;
    spec.id = "n" + std::to_string(i);
    spec.capacitance = Rational(1);
    std::int64_t top = rng.next_int(1, 4);
    std::vector<Rational> levels;
    for (std::int64_t v = 0; v <= top; ++v) levels.push_back(Rational(v));
    spec.levels = LevelSet(levels);
    spec.sigma = random_sigma(rng, spec.levels);
    if (rng.next_int(0, 3) == 0) {
      Rational lo = rng.next_in(Rational(0), Rational(1, 4));
      spec.refractory = RefractoryRange{lo, lo + rng.next_in(Rational(0), Rational(1, 2))};
    }
    net.neurons.push_back(std::move(spec));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (layer[i] >= layer[j]) continue; // strictly forward across layers
      if (rng.next_int(0, 1) == 0) continue;
      SynapseSpec s;
      s.pre = net.neurons[i].id;
      s.post = net.neurons[j].id;
      s.weight = rng.next_in(Rational(-3), Rational(3));
      s.delay = Rational(0);
      s.kernel = {{Rational(0), Rational(1)}};
      net.synapses.push_back(std::move(s));
    }
  }
  validate(net);
  return net;
}

std::vector<Rational> random_aggregate(SplitMix64& rng, std::size_t count) {
  std::vector<Rational> u;
  u.reserve(count);
  for (std::size_t i = 0; i < count; ++i) u.push_back(rng.next_in(Rational(-3), Rational(6)));
  return u;
}

QannSpec random_qann(SplitMix64& rng, std::size_t max_nodes, std::size_t max_slices) {
  std::size_t n =
      static_cast<std::size_t>(rng.next_int(1, static_cast<std::int64_t>(max_nodes)));
  std::int64_t layer_count = rng.next_int(2, 5);
  std::vector<std::int64_t> layer(n);
  for (std::size_t i = 0; i < n; ++i) layer[i] = rng.next_int(0, layer_count - 1);

  QannSpec q;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t pieces = rng.next_int(1, static_cast<std::int64_t>(max_slices));
    std::set<Rational> cuts;
    while (cuts.size() + 1 < static_cast<std::size_t>(pieces))
      cuts.insert(rng.next_in(Rational(-3), Rational(3)));
    Quantizer quant;
    quant.breakpoints.assign(cuts.begin(), cuts.end());
    for (std::int64_t p = 0; p < pieces; ++p)
      quant.values.push_back(rng.next_in(Rational(-3), Rational(3)));
    q.nodes.push_back(synthesize_quantizer_node("q" + std::to_string(i), quant));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (layer[i] >= layer[j]) continue;
      if (rng.next_int(0, 1) == 0) continue;
      q.edges.push_back(
          {q.nodes[i].id, q.nodes[j].id, rng.next_in(Rational(-3), Rational(3))});
    }
  }
  validate(q);
  return q;
}

FuzzCase make_fuzz_case(std::uint64_t net_seed, std::size_t max_neurons) {
  SplitMix64 rng(net_seed);
  FuzzCase fc{random_network(rng, max_neurons), {}};
  fc.u = random_aggregate(rng, fc.net.neurons.size());
  return fc;
}

RealizationConfig harness_config(std::uint64_t seed) {
  RealizationConfig cfg;
  cfg.seed = seed;
  cfg.splits_per_input = {1, 4};
  cfg.time_horizon = Rational(2);
  cfg.delay_range = {Rational(0), Rational(3, 2)};
  cfg.kernel_atoms = {1, 3};
  cfg.kernel_span = {Rational(0), Rational(1)};
  cfg.refractory_range = RationalRange{Rational(0), Rational(1, 2)};
  return cfg;
}

namespace {

// One audited engine run; returns false and appends to failures when any
// check (termination, ledger, progress, expected kappa) fails.  Mismatches
// against expected_kappa/expected_levels are tallied into *mismatch_bucket
// so callers can distinguish invariance breaks from oracle disagreements.
bool audited_run(const NetworkSpec& net, const std::vector<Rational>& u,
                 const Realization& realization, bool reverse_ties,
                 const std::vector<Rational>* expected_kappa, const std::string& tag,
                 HarnessSummary& summary, std::vector<Rational>* kappa_out,
                 std::uint64_t* mismatch_bucket = nullptr,
                 const std::vector<Rational>* expected_levels = nullptr) {
  EngineOptions opt;
  opt.debug_ledger = true;
  opt.reverse_ties = reverse_ties;
  RunResult result;
  try {
    result = run(net, realization, opt);
  } catch (const SnnError& e) {
    summary.failures.push_back(tag + ": engine error: " + e.what());
    ++summary.termination_failures;
    return false;
  }
  ++summary.runs;
  summary.events += result.report.total_events;
  bool ok = true;
  if (result.status != RunStatus::Terminated) {
    summary.failures.push_back(tag + ": event budget exceeded");
    ++summary.termination_failures;
    ok = false;
  }
  for (const std::string& issue : ledger_audit(result, net, u)) {
    summary.failures.push_back(tag + ": ledger: " + issue);
    ++summary.ledger_failures;
    ok = false;
  }
  for (const std::string& issue : strict_progress_audit(result.trace, net)) {
    summary.failures.push_back(tag + ": progress: " + issue);
    ++summary.progress_failures;
    ok = false;
  }
  if (expected_kappa && result.report.kappa != *expected_kappa) {
    summary.failures.push_back(tag + ": kappa " + format_vec(result.report.kappa) +
                               " != expected " + format_vec(*expected_kappa));
    if (mismatch_bucket) ++*mismatch_bucket;
    ok = false;
  }
  if (expected_levels && result.report.levels != *expected_levels) {
    summary.failures.push_back(tag + ": terminal levels " + format_vec(result.report.levels) +
                               " != expected " + format_vec(*expected_levels));
    if (mismatch_bucket) ++*mismatch_bucket;
    ok = false;
  }
  if (kappa_out) *kappa_out = result.report.kappa;
  return ok;
}

// Cases are independent, so they run on a worker pool; each case writes its
// own summary and the parts are merged in case order afterwards, so the
// result (counters and failure text alike) does not depend on thread count.
void pooled_cases(std::size_t count,
                  const std::function<void(std::size_t, HarnessSummary&)>& body,
                  HarnessSummary& summary) {
  if (count == 0) return;
  std::vector<HarnessSummary> parts(count);
  auto run_one = [&](std::size_t k) {
    try {
      body(k, parts[k]);
    } catch (const std::exception& e) {
      parts[k].failures.push_back("case " + std::to_string(k) +
                                  ": unexpected error: " + e.what());
      ++parts[k].termination_failures;
    }
  };
  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (workers > count) workers = count;
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) run_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1))
          run_one(k);
      });
    for (std::thread& t : pool) t.join();
  }
  for (HarnessSummary& part : parts) {
    summary.cases += part.cases;
    summary.runs += part.runs;
    summary.events += part.events;
    summary.invariance_failures += part.invariance_failures;
    summary.static_failures += part.static_failures;
    summary.mismatch_failures += part.mismatch_failures;
    summary.ledger_failures += part.ledger_failures;
    summary.progress_failures += part.progress_failures;
    summary.termination_failures += part.termination_failures;
    for (std::string& f : part.failures) summary.failures.push_back(std::move(f));
  }
}

} // namespace

HarnessSummary fuzz_invariance(std::uint64_t seed, std::size_t nets,
                               std::size_t realizations, std::size_t max_neurons) {
  HarnessSummary summary;
  SplitMix64 master(seed);
  std::vector<std::uint64_t> case_seeds(nets);
  for (std::uint64_t& s : case_seeds) s = master.next();

  pooled_cases(nets, [&](std::size_t k, HarnessSummary& part) {
    SplitMix64 case_rng(case_seeds[k]);
    std::uint64_t net_seed = case_rng.next();
    FuzzCase fc = make_fuzz_case(net_seed, max_neurons);
    ++part.cases;
    std::string net_tag = "net_seed=" + std::to_string(net_seed);

    std::vector<Rational> reference;
    bool have_reference = false;
    for (std::size_t m = 0; m < realizations; ++m) {
      std::uint64_t real_seed = case_rng.next();
      std::string tag = net_tag + " realization_seed=" + std::to_string(real_seed);
      Realization realization = realize(fc.net, fc.u, harness_config(real_seed));
      if (!have_reference) {
        have_reference = audited_run(fc.net, fc.u, realization, false, nullptr, tag,
                                     part, &reference);
        // The tie-break order must not matter either; rerun the same
        // realization with ties reversed.
        if (have_reference)
          audited_run(fc.net, fc.u, realization, true, &reference,
                      tag + " (reversed ties)", part, nullptr,
                      &part.invariance_failures);
      } else {
        audited_run(fc.net, fc.u, realization, false, &reference, tag, part, nullptr,
                    &part.invariance_failures);
      }
    }

    if (have_reference) {
      try {
        QannEval eval = qann_eval(snn_to_qann(fc.net), fc.u);
        if (eval.kappa != reference) {
          part.failures.push_back(net_tag + ": static evaluation " +
                                  format_vec(eval.kappa) + " != engine " +
                                  format_vec(reference));
          ++part.static_failures;
        }
      } catch (const SnnError& e) {
        part.failures.push_back(net_tag + ": static evaluation error: " + e.what());
        ++part.static_failures;
      }
    }
  }, summary);
  return summary;
}

HarnessSummary qann_roundtrip(std::uint64_t seed, std::size_t specs, std::size_t inputs,
                              std::size_t realizations, std::size_t max_slices) {
  HarnessSummary summary;
  SplitMix64 master(seed);
  std::vector<std::uint64_t> case_seeds(specs);
  for (std::uint64_t& s : case_seeds) s = master.next();

  pooled_cases(specs, [&](std::size_t k, HarnessSummary& part) {
    SplitMix64 case_rng(case_seeds[k]);
    std::uint64_t spec_seed = case_rng.next();
    SplitMix64 rng(spec_seed);
    QannSpec q = random_qann(rng, 6, max_slices);
    NetworkSpec net = qann_to_snn(q);
    ++part.cases;
    for (std::size_t i = 0; i < inputs; ++i) {
      std::uint64_t input_seed = case_rng.next();
      SplitMix64 input_rng(input_seed);
      std::vector<Rational> u;
      for (std::size_t c = 0; c < q.nodes.size(); ++c)
        u.push_back(input_rng.next_in(Rational(-4), Rational(4)));
      std::vector<Rational> expected;
      try {
        expected = qann_eval(q, u).kappa;
      } catch (const SnnError& e) {
        part.failures.push_back("spec_seed=" + std::to_string(spec_seed) +
                                ": evaluation error: " + e.what());
        ++part.mismatch_failures;
        continue;
      }
      for (std::size_t r = 0; r < realizations; ++r) {
        std::uint64_t real_seed = case_rng.next();
        std::string tag = "spec_seed=" + std::to_string(spec_seed) +
                          " input_seed=" + std::to_string(input_seed) +
                          " realization_seed=" + std::to_string(real_seed);
        Realization realization = realize(net, u, harness_config(real_seed));
        audited_run(net, u, realization, false, &expected, tag, part, nullptr,
                    &part.mismatch_failures);
      }
    }
  }, summary);
  return summary;
}

HarnessSummary terminal_map_check(std::uint64_t seed, std::size_t trials) {
  HarnessSummary summary;
  SplitMix64 master(seed);
  std::vector<std::uint64_t> case_seeds(trials);
  for (std::uint64_t& s : case_seeds) s = master.next();

  pooled_cases(trials, [&](std::size_t k, HarnessSummary& part) {
    std::uint64_t trial_seed = case_seeds[k];
    SplitMix64 rng(trial_seed);
    std::string tag = "trial_seed=" + std::to_string(trial_seed);

    std::set<Rational> level_values{Rational(0)};
    std::size_t count = static_cast<std::size_t>(rng.next_int(2, 6));
    while (level_values.size() < count)
      level_values.insert(rng.next_in(Rational(-4), Rational(4)));
    LevelSet levels(std::vector<Rational>(level_values.begin(), level_values.end()));

    NeuronSpec spec;
    spec.id = "n0";
    spec.capacitance = Rational(1, 4) + rng.next_in(Rational(0), Rational(15, 4));
    spec.levels = levels;
    spec.sigma = random_sigma(rng, levels);
    NetworkSpec net;
    net.neurons.push_back(spec);

    Rational z = rng.next_in(levels.min() - Rational(2), levels.max() + Rational(2));
    RealizationConfig cfg = harness_config(rng.next());
    cfg.splits_per_input = {1, 5};
    Realization realization = realize(net, {z}, cfg);
    ++part.cases;

    Rational terminal_level = levels.at(decode_index(z, levels));
    std::vector<Rational> expected_kappa = {spec.sigma.at(terminal_level)};
    std::vector<Rational> expected_levels = {terminal_level};
    audited_run(net, {z}, realization, false, &expected_kappa, tag, part, nullptr,
                &part.mismatch_failures, &expected_levels);
  }, summary);
  return summary;
}

} // namespace csnn
