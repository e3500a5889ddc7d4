#include "csnn/io.hpp"

#include <fstream>
#include <ostream>

#include "csnn/errors.hpp"

namespace csnn {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SnnError(ErrorCode::ParseError, path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field \"" + std::string(key) + "\"");
  return *it;
}

Rational rational_at(const Json& j, const std::string& path) {
  if (j.is_number())
    fail(path, "rationals must be strings like \"27/10\", got a JSON number");
  if (!j.is_string()) fail(path, "expected a rational string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const SnnError& e) {
    fail(path, e.what());
  }
}

std::string str_at(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Rational rat_field(const Json& j, const char* key, const std::string& path) {
  return rational_at(field(j, key, path), path + "." + key);
}

std::uint64_t uint_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number_unsigned()) fail(path + "." + key, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<Rational> rational_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of rational strings");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

ActivationTable sigma_table(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object mapping level -> value");
  ActivationTable table;
  for (auto it = j.begin(); it != j.end(); ++it) {
    Rational level;
    try {
      level = Rational::parse(it.key());
    } catch (const SnnError& e) {
      fail(path + " key \"" + it.key() + "\"", e.what());
    }
    table.set(level, rational_at(it.value(), path + "[\"" + it.key() + "\"]"));
  }
  return table;
}

std::vector<KernelAtom> kernel_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [offset, fraction] pairs");
  std::vector<KernelAtom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    const Json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2) fail(p, "expected [offset, fraction]");
    atoms.push_back({rational_at(pair[0], p + "[0]"), rational_at(pair[1], p + "[1]")});
  }
  return atoms;
}

Json kernel_json(const std::vector<KernelAtom>& atoms) {
  Json arr = Json::array();
  for (const KernelAtom& a : atoms) arr.push_back(Json::array({a.offset.str(), a.fraction.str()}));
  return arr;
}

Json sigma_json(const ActivationTable& sigma) {
  Json obj = Json::object();
  for (const auto& [level, value] : sigma.entries()) obj[level.str()] = value.str();
  return obj;
}

Json rational_map_json(const std::map<std::string, Rational>& m) {
  Json obj = Json::object();
  for (const auto& [k, v] : m) obj[k] = v.str();
  return obj;
}

std::map<std::string, Rational> rational_map(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object of rational strings");
  std::map<std::string, Rational> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out[it.key()] = rational_at(it.value(), path + "[\"" + it.key() + "\"]");
  return out;
}

} // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SnnError(ErrorCode::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw SnnError(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void save_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SnnError(ErrorCode::ParseError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

NetworkSpec parse_network(const Json& j) {
  NetworkSpec net;
  const Json& neurons = field(j, "neurons", "network");
  if (!neurons.is_array()) fail("network.neurons", "expected an array");
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    std::string path = "neurons[" + std::to_string(i) + "]";
    const Json& nj = neurons[i];
    NeuronSpec n;
    n.id = str_at(nj, "id", path);
    n.capacitance = rat_field(nj, "C", path);
    try {
      n.levels = LevelSet(rational_array(field(nj, "levels", path), path + ".levels"));
    } catch (const SnnError& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      fail(path + ".levels", e.what());
    }
    n.sigma = sigma_table(field(nj, "sigma", path), path + ".sigma");
    if (nj.contains("refractory")) {
      const Json& rj = nj["refractory"];
      n.refractory = RefractoryRange{rat_field(rj, "min", path + ".refractory"),
                                     rat_field(rj, "max", path + ".refractory")};
    }
    net.neurons.push_back(std::move(n));
  }
  const Json& synapses = field(j, "synapses", "network");
  if (!synapses.is_array()) fail("network.synapses", "expected an array");
  for (std::size_t i = 0; i < synapses.size(); ++i) {
    std::string path = "synapses[" + std::to_string(i) + "]";
    const Json& sj = synapses[i];
    SynapseSpec s;
    s.pre = str_at(sj, "pre", path);
    s.post = str_at(sj, "post", path);
    s.weight = rat_field(sj, "weight", path);
    s.delay = rat_field(sj, "delay", path);
    s.kernel = kernel_array(field(sj, "kernel", path), path + ".kernel");
    net.synapses.push_back(std::move(s));
  }
  validate(net);
  return net;
}

Json serialize_network(const NetworkSpec& net) {
  Json j;
  j["neurons"] = Json::array();
  for (const NeuronSpec& n : net.neurons) {
    Json nj;
    nj["id"] = n.id;
    nj["C"] = n.capacitance.str();
    Json levels = Json::array();
    for (std::size_t i = 0; i < n.levels.size(); ++i) levels.push_back(n.levels.at(i).str());
    nj["levels"] = std::move(levels);
    nj["sigma"] = sigma_json(n.sigma);
    if (n.refractory)
      nj["refractory"] = Json{{"min", n.refractory->min.str()}, {"max", n.refractory->max.str()}};
    j["neurons"].push_back(std::move(nj));
  }
  j["synapses"] = Json::array();
  for (const SynapseSpec& s : net.synapses) {
    Json sj;
    sj["pre"] = s.pre;
    sj["post"] = s.post;
    sj["weight"] = s.weight.str();
    sj["delay"] = s.delay.str();
    sj["kernel"] = kernel_json(s.kernel);
    j["synapses"].push_back(std::move(sj));
  }
  return j;
}

EpisodeDoc parse_episode(const Json& j) {
  EpisodeDoc doc;
  if (!j.is_object()) fail("episode", "expected an object");
  bool has_aggregate = j.contains("aggregate");
  bool has_impulses = j.contains("impulses");
  if (has_aggregate == has_impulses)
    fail("episode", "provide exactly one of \"aggregate\" or \"impulses\"");
  if (has_aggregate) {
    doc.aggregate = rational_map(j["aggregate"], "episode.aggregate");
    return doc;
  }
  const Json& imp = j["impulses"];
  if (!imp.is_object()) fail("episode.impulses", "expected an object of impulse lists");
  InputEpisode episode;
  for (auto it = imp.begin(); it != imp.end(); ++it) {
    std::string path = "episode.impulses[\"" + it.key() + "\"]";
    if (!it.value().is_array()) fail(path, "expected an array of [time, charge] pairs");
    std::vector<Impulse>& list = episode.impulses[it.key()];
    for (std::size_t i = 0; i < it.value().size(); ++i) {
      std::string p = path + "[" + std::to_string(i) + "]";
      const Json& pair = it.value()[i];
      if (!pair.is_array() || pair.size() != 2) fail(p, "expected [time, charge]");
      list.push_back({rational_at(pair[0], p + "[0]"), rational_at(pair[1], p + "[1]")});
    }
  }
  doc.impulses = std::move(episode);
  return doc;
}

Json serialize_episode(const InputEpisode& episode) {
  Json imp = Json::object();
  for (const auto& [id, list] : episode.impulses) {
    Json arr = Json::array();
    for (const Impulse& i : list) arr.push_back(Json::array({i.time.str(), i.charge.str()}));
    imp[id] = std::move(arr);
  }
  return Json{{"impulses", std::move(imp)}};
}

Json serialize_aggregate(const std::map<std::string, Rational>& aggregate) {
  return Json{{"aggregate", rational_map_json(aggregate)}};
}

QannParseResult parse_qann(const Json& j) {
  QannParseResult result;
  const Json& nodes = field(j, "nodes", "qann");
  if (!nodes.is_array()) fail("qann.nodes", "expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string path = "nodes[" + std::to_string(i) + "]";
    const Json& nj = nodes[i];
    std::string id = str_at(nj, "id", path);
    bool explicit_form = nj.contains("levels");
    bool quantizer_form = nj.contains("breakpoints");
    if (explicit_form == quantizer_form)
      fail(path, "node needs exactly one of \"levels\" or \"breakpoints\"");
    if (explicit_form) {
      QannNode node;
      node.id = id;
      node.capacitance =
          nj.contains("C") ? rat_field(nj, "C", path) : Rational(1);
      try {
        node.levels = LevelSet(rational_array(nj["levels"], path + ".levels"));
      } catch (const SnnError& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        fail(path + ".levels", e.what());
      }
      node.sigma = sigma_table(field(nj, "sigma", path), path + ".sigma");
      result.spec.nodes.push_back(std::move(node));
    } else {
      Quantizer quant;
      quant.breakpoints = rational_array(nj["breakpoints"], path + ".breakpoints");
      quant.values = rational_array(field(nj, "values", path), path + ".values");
      QannNode node = synthesize_quantizer_node(id, quant);
      result.synthesis.push_back(synthesis_log(id, quant, node));
      result.spec.nodes.push_back(std::move(node));
    }
  }
  const Json& edges = field(j, "edges", "qann");
  if (!edges.is_array()) fail("qann.edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string path = "edges[" + std::to_string(i) + "]";
    const Json& ej = edges[i];
    result.spec.edges.push_back(
        {str_at(ej, "pre", path), str_at(ej, "post", path), rat_field(ej, "weight", path)});
  }
  validate(result.spec);
  return result;
}

Json serialize_qann(const QannSpec& q) {
  Json j;
  j["nodes"] = Json::array();
  for (const QannNode& n : q.nodes) {
    Json nj;
    nj["id"] = n.id;
    nj["C"] = n.capacitance.str();
    Json levels = Json::array();
    for (std::size_t i = 0; i < n.levels.size(); ++i) levels.push_back(n.levels.at(i).str());
    nj["levels"] = std::move(levels);
    nj["sigma"] = sigma_json(n.sigma);
    j["nodes"].push_back(std::move(nj));
  }
  j["edges"] = Json::array();
  for (const QannEdge& e : q.edges)
    j["edges"].push_back(Json{{"pre", e.pre}, {"post", e.post}, {"weight", e.weight.str()}});
  return j;
}

ReportDoc make_report_doc(const RunResult& result, const NetworkSpec& net,
                          const std::vector<std::string>& ledger_issues) {
  ReportDoc doc;
  doc.status = result.status == RunStatus::Terminated ? "terminated" : "budget-exceeded";
  for (std::size_t i = 0; i < net.neurons.size(); ++i) {
    const std::string& id = net.neurons[i].id;
    doc.kappa[id] = result.report.kappa[i];
    doc.z[id] = result.report.z[i];
    doc.levels[id] = result.report.levels[i];
    doc.spike_counts[id] = result.report.spike_counts[i];
  }
  doc.termination_time = result.report.termination_time;
  doc.total_events = result.report.total_events;
  doc.ledger = ledger_issues;
  return doc;
}

Json serialize_report(const ReportDoc& doc) {
  Json j;
  j["status"] = doc.status;
  j["kappa"] = rational_map_json(doc.kappa);
  j["z"] = rational_map_json(doc.z);
  j["levels"] = rational_map_json(doc.levels);
  Json counts = Json::object();
  for (const auto& [id, c] : doc.spike_counts) counts[id] = c;
  j["spike_counts"] = std::move(counts);
  j["termination_time"] = doc.termination_time.str();
  j["total_events"] = doc.total_events;
  if (doc.ledger.empty())
    j["ledger"] = "ok";
  else
    j["ledger"] = doc.ledger;
  return j;
}

ReportDoc parse_report(const Json& j) {
  ReportDoc doc;
  doc.status = str_at(j, "status", "report");
  doc.kappa = rational_map(field(j, "kappa", "report"), "report.kappa");
  doc.z = rational_map(field(j, "z", "report"), "report.z");
  doc.levels = rational_map(field(j, "levels", "report"), "report.levels");
  const Json& counts = field(j, "spike_counts", "report");
  if (!counts.is_object()) fail("report.spike_counts", "expected an object");
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (!it.value().is_number_unsigned())
      fail("report.spike_counts[\"" + it.key() + "\"]", "expected a nonnegative integer");
    doc.spike_counts[it.key()] = it.value().get<std::uint64_t>();
  }
  doc.termination_time = rat_field(j, "termination_time", "report");
  doc.total_events = uint_field(j, "total_events", "report");
  const Json& ledger = field(j, "ledger", "report");
  if (ledger.is_string()) {
    if (ledger.get<std::string>() != "ok") fail("report.ledger", "expected \"ok\" or an array");
  } else if (ledger.is_array()) {
    for (const Json& item : ledger) {
      if (!item.is_string()) fail("report.ledger", "expected strings");
      doc.ledger.push_back(item.get<std::string>());
    }
  } else {
    fail("report.ledger", "expected \"ok\" or an array");
  }
  return doc;
}

RealizationConfig parse_config(const Json& j) {
  RealizationConfig cfg;
  if (!j.is_object()) fail("config", "expected an object");
  auto int_range = [&](const char* key, IntRange fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j[key];
    std::string path = std::string("config.") + key;
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      fail(path, "expected [lo, hi] integers");
    return IntRange{v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
  };
  auto rat_range = [&](const char* key, RationalRange fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j[key];
    std::string path = std::string("config.") + key;
    if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi] rational strings");
    return RationalRange{rational_at(v[0], path + "[0]"), rational_at(v[1], path + "[1]")};
  };
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("config.seed", "expected a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.splits_per_input = int_range("splits_per_input", cfg.splits_per_input);
  if (j.contains("time_horizon")) cfg.time_horizon = rat_field(j, "time_horizon", "config");
  cfg.delay_range = rat_range("delay_range", cfg.delay_range);
  cfg.kernel_atoms = int_range("kernel_atoms", cfg.kernel_atoms);
  cfg.kernel_span = rat_range("kernel_span", cfg.kernel_span);
  if (j.contains("refractory_range"))
    cfg.refractory_range = rat_range("refractory_range", RationalRange{});
  validate_config(cfg);
  return cfg;
}

Json serialize_config(const RealizationConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["splits_per_input"] = Json::array({cfg.splits_per_input.lo, cfg.splits_per_input.hi});
  j["time_horizon"] = cfg.time_horizon.str();
  j["delay_range"] = Json::array({cfg.delay_range.lo.str(), cfg.delay_range.hi.str()});
  j["kernel_atoms"] = Json::array({cfg.kernel_atoms.lo, cfg.kernel_atoms.hi});
  j["kernel_span"] = Json::array({cfg.kernel_span.lo.str(), cfg.kernel_span.hi.str()});
  if (cfg.refractory_range)
    j["refractory_range"] =
        Json::array({cfg.refractory_range->lo.str(), cfg.refractory_range->hi.str()});
  return j;
}

void write_trace(std::ostream& out, const Trace& trace, const NetworkSpec& net) {
  for (const TraceEntry& entry : trace.entries) {
    Json j;
    j["t"] = entry.event.time.str();
    j["seq"] = entry.event.seq;
    j["kind"] = event_kind_name(entry.event.kind);
    j["neuron"] = net.neurons[entry.event.neuron].id;
    j["charge"] = entry.event.charge.str();
    if (entry.event.synapse) j["synapse"] = *entry.event.synapse;
    if (entry.gated) j["gated"] = true;
    Json spikes = Json::array();
    for (const SpikeRecord& rec : entry.spikes) {
      Json sj;
      sj["dir"] = spike_direction_name(rec.direction);
      sj["q_dis"] = rec.q_dis.str();
      sj["q_out"] = rec.q_out.str();
      sj["phi_before"] = rec.phi_before.str();
      sj["phi_after"] = rec.phi_after.str();
      sj["silent_after"] = rec.silent_after;
      spikes.push_back(std::move(sj));
    }
    j["spikes"] = std::move(spikes);
    out << j.dump() << "\n";
  }
}

} // namespace csnn
