#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csnn/engine.hpp"
#include "csnn/network.hpp"
#include "csnn/qann.hpp"
#include "csnn/realizer.hpp"

namespace csnn {

using Json = nlohmann::json;

// All rational-valued fields travel as strings "p/q" (or integer strings).
// JSON numbers in those positions are rejected: exactness is part of the
// file contract, and numbers pass through floating point in most stacks.

Json load_json_file(const std::string& path);
void save_json_file(const Json& j, const std::string& path);

NetworkSpec parse_network(const Json& j);
Json serialize_network(const NetworkSpec& net);

struct EpisodeDoc {
  std::optional<std::map<std::string, Rational>> aggregate; // needs a realization config
  std::optional<InputEpisode> impulses;                     // runs verbatim
};

EpisodeDoc parse_episode(const Json& j);
Json serialize_episode(const InputEpisode& episode);
Json serialize_aggregate(const std::map<std::string, Rational>& aggregate);

struct QannParseResult {
  QannSpec spec;
  std::vector<std::string> synthesis; // one line per quantizer-form node realized
};

// Nodes come in two forms: explicit {"levels", "sigma"} or a piecewise map
// {"breakpoints", "values"} that gets realized into levels on load. Output
// is always the explicit form.
QannParseResult parse_qann(const Json& j);
Json serialize_qann(const QannSpec& q);

struct ReportDoc {
  std::string status; // "terminated" | "budget-exceeded"
  std::map<std::string, Rational> kappa;
  std::map<std::string, Rational> z;
  std::map<std::string, Rational> levels;
  std::map<std::string, std::uint64_t> spike_counts;
  Rational termination_time;
  std::uint64_t total_events = 0;
  std::vector<std::string> ledger; // empty means the audit passed
};

ReportDoc make_report_doc(const RunResult& result, const NetworkSpec& net,
                          const std::vector<std::string>& ledger_issues);
Json serialize_report(const ReportDoc& doc);
ReportDoc parse_report(const Json& j);

RealizationConfig parse_config(const Json& j);
Json serialize_config(const RealizationConfig& cfg);

// Line-delimited JSON, one object per processed event.
void write_trace(std::ostream& out, const Trace& trace, const NetworkSpec& net);

} // namespace csnn
