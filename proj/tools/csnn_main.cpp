// csnn: exact-rational spiking-network simulator and verifier.
//
// Exit codes are a stable contract: 0 success, 1 property violation,
// 2 input error, 3 event budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "csnn/cyclic.hpp"
#include "csnn/engine.hpp"
#include "csnn/errors.hpp"
#include "csnn/fuzz.hpp"
#include "csnn/io.hpp"
#include "csnn/qann.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;
constexpr int kBudget = 3;

using csnn::Rational;

int exit_code_for(csnn::ErrorCode code) {
  switch (code) {
  case csnn::ErrorCode::IllegalTransition:
  case csnn::ErrorCode::InvariantViolation:
    return kViolation; // the books broke, not the inputs
  default:
    return kInputError;
  }
}

std::pair<std::string, std::string> split_pair(const std::string& text,
                                               const std::string& flag) {
  std::size_t pos = text.find(':');
  if (pos == std::string::npos || text.find(':', pos + 1) != std::string::npos)
    throw csnn::SnnError(csnn::ErrorCode::ParseError,
                         flag + " expects lo:hi, got \"" + text + "\"");
  return {text.substr(0, pos), text.substr(pos + 1)};
}

std::int64_t parse_integer(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw csnn::SnnError(csnn::ErrorCode::ParseError,
                         flag + ": not an integer: \"" + text + "\"");
  }
}

csnn::IntRange int_range(const std::string& text, const std::string& flag) {
  auto [lo, hi] = split_pair(text, flag);
  return {parse_integer(lo, flag), parse_integer(hi, flag)};
}

csnn::RationalRange rational_range(const std::string& text, const std::string& flag) {
  auto [lo, hi] = split_pair(text, flag);
  try {
    return {Rational::parse(lo), Rational::parse(hi)};
  } catch (const csnn::SnnError& e) {
    throw csnn::SnnError(csnn::ErrorCode::ParseError, flag + ": " + e.what());
  }
}

std::uint64_t event_budget() {
  const char* env = std::getenv("SNN_EVENT_BUDGET");
  if (!env || !*env) return csnn::EngineOptions{}.event_budget;
  std::string text(env);
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || v == 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw csnn::SnnError(csnn::ErrorCode::ParseError,
                         "SNN_EVENT_BUDGET must be a positive integer, got \"" +
                             text + "\"");
  }
}

// Empty path means stdout.
void emit_json(const csnn::Json& j, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << "\n";
  else
    csnn::save_json_file(j, path);
}

struct SimulateArgs {
  std::string net_path;
  std::string episode_path;
  std::uint64_t seed = 0;
  std::string splits, delay_range, kernel_atoms, kernel_span, horizon, refractory;
  std::string trace_path, report_path;
};

int cmd_simulate(const SimulateArgs& args) {
  csnn::NetworkSpec net = csnn::parse_network(csnn::load_json_file(args.net_path));
  csnn::EpisodeDoc ep = csnn::parse_episode(csnn::load_json_file(args.episode_path));

  csnn::RealizationConfig cfg;
  cfg.seed = args.seed;
  if (!args.splits.empty()) cfg.splits_per_input = int_range(args.splits, "--splits");
  if (!args.delay_range.empty())
    cfg.delay_range = rational_range(args.delay_range, "--delay-range");
  if (!args.kernel_atoms.empty())
    cfg.kernel_atoms = int_range(args.kernel_atoms, "--kernel-atoms");
  if (!args.kernel_span.empty())
    cfg.kernel_span = rational_range(args.kernel_span, "--kernel-span");
  if (!args.horizon.empty()) cfg.time_horizon = Rational::parse(args.horizon);
  if (!args.refractory.empty())
    cfg.refractory_range = rational_range(args.refractory, "--refractory-range");
  csnn::validate_config(cfg);

  std::vector<Rational> u(net.neurons.size(), Rational(0));
  csnn::Realization realization;
  if (ep.aggregate) {
    for (const auto& [id, charge] : *ep.aggregate) {
      auto idx = net.index_of(id);
      if (!idx)
        throw csnn::SnnError(csnn::ErrorCode::InvalidEpisode,
                             "episode names unknown neuron \"" + id + "\"");
      u[*idx] = charge;
    }
    realization = csnn::realize(net, u, cfg);
  } else {
    // Explicit impulse lists run verbatim; the stochastic flags are unused.
    realization = csnn::verbatim_realization(net, *ep.impulses);
    for (std::size_t i = 0; i < net.neurons.size(); ++i)
      u[i] = realization.episode.aggregate(net.neurons[i].id);
  }

  csnn::EngineOptions opt;
  opt.event_budget = event_budget();
  csnn::RunResult result = csnn::run(net, realization, opt);

  std::vector<std::string> ledger = csnn::ledger_audit(result, net, u);
  std::vector<std::string> progress = csnn::strict_progress_audit(result.trace, net);
  emit_json(csnn::serialize_report(csnn::make_report_doc(result, net, ledger)),
            args.report_path);
  if (!args.trace_path.empty()) {
    std::ofstream out(args.trace_path);
    if (!out)
      throw csnn::SnnError(csnn::ErrorCode::ParseError,
                           "cannot open trace file " + args.trace_path);
    csnn::write_trace(out, result.trace, net);
  }
  for (const std::string& issue : progress) std::cerr << "progress: " << issue << "\n";

  if (result.status == csnn::RunStatus::BudgetExceeded) return kBudget;
  if (!ledger.empty() || !progress.empty()) return kViolation;
  return kOk;
}

struct FuzzArgs {
  std::size_t nets = 100;
  std::size_t realizations = 20;
  std::uint64_t seed = 42;
  std::size_t max_neurons = 20;
  std::string report_path;
};

int cmd_fuzz_invariance(const FuzzArgs& args) {
  csnn::HarnessSummary s =
      csnn::fuzz_invariance(args.seed, args.nets, args.realizations, args.max_neurons);
  csnn::Json j{{"cases", s.cases},
               {"runs", s.runs},
               {"events", s.events},
               {"invariance_failures", s.invariance_failures},
               {"static_failures", s.static_failures},
               {"mismatch_failures", s.mismatch_failures},
               {"ledger_failures", s.ledger_failures},
               {"progress_failures", s.progress_failures},
               {"termination_failures", s.termination_failures},
               {"failures", s.failures}};
  emit_json(j, args.report_path);
  if (!s.pass()) {
    std::size_t shown = 0;
    for (const std::string& f : s.failures) {
      if (shown++ == 5) {
        std::cerr << "... " << s.failures.size() - 5 << " more\n";
        break;
      }
      std::cerr << f << "\n";
    }
    return kViolation;
  }
  return kOk;
}

int cmd_convert(const std::string& direction, const std::string& in_path,
                const std::string& out_path) {
  if (direction == "snn-to-qann") {
    csnn::NetworkSpec net = csnn::parse_network(csnn::load_json_file(in_path));
    emit_json(csnn::serialize_qann(csnn::snn_to_qann(net)), out_path);
  } else {
    csnn::QannParseResult parsed = csnn::parse_qann(csnn::load_json_file(in_path));
    for (const std::string& line : parsed.synthesis) std::cerr << line << "\n";
    emit_json(csnn::serialize_network(csnn::qann_to_snn(parsed.spec)), out_path);
  }
  return kOk;
}

int cmd_counterexamples(bool as_json, const std::string& box) {
  std::int64_t lo = 0, hi = 5;
  if (!box.empty()) {
    auto [a, b] = split_pair(box, "--box");
    lo = parse_integer(a, "--box");
    hi = parse_integer(b, "--box");
  }
  csnn::SuiteReport report = csnn::counterexample_suite(lo, hi);
  if (as_json) {
    csnn::Json examples = csnn::Json::array();
    for (const csnn::ExampleOutcome& ex : report.examples)
      examples.push_back({{"name", ex.name}, {"pass", ex.pass}, {"detail", ex.detail}});
    std::cout << csnn::Json{{"examples", examples}, {"all_pass", report.all_pass}}.dump(2)
              << "\n";
  } else {
    for (const csnn::ExampleOutcome& ex : report.examples)
      std::cout << (ex.pass ? "[PASS] " : "[FAIL] ") << ex.name << ": " << ex.detail
                << "\n";
  }
  return report.all_pass ? kOk : kViolation;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-rational spiking-network simulator and verifier"};
  app.require_subcommand(1);
  int exit_code = kOk;

  SimulateArgs sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one network/episode pair to termination");
  simulate->add_option("net", sim.net_path, "network JSON file")->required();
  simulate->add_option("episode", sim.episode_path, "episode JSON file")->required();
  simulate->add_option("--seed", sim.seed, "realization seed (aggregate episodes)");
  simulate->add_option("--splits", sim.splits, "impulses per input, lo:hi");
  simulate->add_option("--delay-range", sim.delay_range, "synapse delay draw, lo:hi");
  simulate->add_option("--kernel-atoms", sim.kernel_atoms, "kernel atom count, lo:hi");
  simulate->add_option("--kernel-span", sim.kernel_span, "kernel offset draw, lo:hi");
  simulate->add_option("--horizon", sim.horizon, "input splitting window length");
  simulate->add_option("--refractory-range", sim.refractory,
                       "refractory draw for neurons without their own range, lo:hi");
  simulate->add_option("--trace", sim.trace_path, "write line-delimited event trace");
  simulate->add_option("--report", sim.report_path, "report file (default stdout)");
  simulate->callback([&] { exit_code = cmd_simulate(sim); });

  FuzzArgs fz;
  CLI::App* fuzz = app.add_subcommand(
      "fuzz-invariance", "Random networks x realizations; terminal outputs must agree");
  fuzz->add_option("--nets", fz.nets, "number of random networks");
  fuzz->add_option("--realizations", fz.realizations, "realizations per network");
  fuzz->add_option("--seed", fz.seed, "master seed");
  fuzz->add_option("--max-neurons", fz.max_neurons, "network size cap");
  fuzz->add_option("--report", fz.report_path, "summary JSON file (default stdout)");
  fuzz->callback([&] { exit_code = cmd_fuzz_invariance(fz); });

  std::string direction, conv_in, conv_out;
  CLI::App* convert = app.add_subcommand("convert", "Convert between network forms");
  convert->add_option("--direction", direction, "snn-to-qann or qann-to-snn")
      ->required()
      ->check(CLI::IsMember({"snn-to-qann", "qann-to-snn"}));
  convert->add_option("in", conv_in, "input file")->required();
  convert->add_option("out", conv_out, "output file (default stdout)");
  convert->callback([&] { exit_code = cmd_convert(direction, conv_in, conv_out); });

  bool as_json = false;
  std::string box;
  CLI::App* golden =
      app.add_subcommand("counterexamples", "Run the recorded cyclic-dynamics suite");
  golden->add_flag("--json", as_json, "machine-readable output");
  golden->add_option("--box", box, "integer candidate box lo:hi (default 0:5)");
  golden->callback([&] { exit_code = cmd_counterexamples(as_json, box); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e); // prints message or help
    return rc == 0 ? kOk : kInputError;
  } catch (const csnn::SnnError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return exit_code;
}
