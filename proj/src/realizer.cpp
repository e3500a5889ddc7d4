#include "csnn/realizer.hpp"

#include "csnn/errors.hpp"

namespace csnn {

Rational SplitMix64::next_unit() {
  Rational::Integer num(next());
  Rational::Integer den(1);
  den <<= 64;
  return Rational(std::move(num), std::move(den));
}

Rational SplitMix64::next_in(const Rational& lo, const Rational& hi) {
  if (lo == hi) return lo;
  return lo + (hi - lo) * next_unit();
}

std::int64_t SplitMix64::next_int(std::int64_t lo, std::int64_t hi) {
  if (lo == hi) return lo;
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

void validate_config(const RealizationConfig& cfg) {
  auto bad = [](const std::string& what) {
    throw SnnError(ErrorCode::InvalidSpec, "realization config: " + what);
  };
  if (cfg.splits_per_input.lo < 1 || cfg.splits_per_input.lo > cfg.splits_per_input.hi)
    bad("splits_per_input must be a nonempty range with lo >= 1");
  if (cfg.time_horizon.sign() <= 0) bad("time_horizon must be > 0");
  if (cfg.delay_range.lo.sign() < 0 || cfg.delay_range.lo > cfg.delay_range.hi)
    bad("delay_range must be nonempty and nonnegative");
  if (cfg.kernel_atoms.lo < 1 || cfg.kernel_atoms.lo > cfg.kernel_atoms.hi)
    bad("kernel_atoms must be a nonempty range with lo >= 1");
  if (cfg.kernel_span.lo.sign() < 0 || cfg.kernel_span.lo > cfg.kernel_span.hi)
    bad("kernel_span must be nonempty and nonnegative");
  if (cfg.refractory_range &&
      (cfg.refractory_range->lo.sign() < 0 || cfg.refractory_range->lo > cfg.refractory_range->hi))
    bad("refractory_range must be nonempty and nonnegative");
}

Rational InputEpisode::aggregate(const std::string& neuron) const {
  Rational total(0);
  auto it = impulses.find(neuron);
  if (it == impulses.end()) return total;
  for (const Impulse& imp : it->second) total = total + imp.charge;
  return total;
}

std::map<std::string, Rational> InputEpisode::aggregates() const {
  std::map<std::string, Rational> out;
  for (const auto& [id, list] : impulses) {
    Rational total(0);
    for (const Impulse& imp : list) total = total + imp.charge;
    out[id] = total;
  }
  return out;
}

InputEpisode realize_episode(const std::vector<std::string>& ids,
                             const std::vector<Rational>& u,
                             const RealizationConfig& cfg, SplitMix64& rng) {
  if (ids.size() != u.size())
    throw SnnError(ErrorCode::InvalidEpisode, "aggregate vector length does not match neuron count");
  InputEpisode episode;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<Impulse>& list = episode.impulses[ids[i]];
    if (u[i].is_zero()) continue;
    std::int64_t k = rng.next_int(cfg.splits_per_input.lo, cfg.splits_per_input.hi);
    Rational remaining = u[i];
    for (std::int64_t j = 0; j + 1 < k; ++j) {
      Rational part = remaining * rng.next_unit(); // same sign as remaining
      remaining = remaining - part;
      list.push_back({rng.next_in(Rational(0), cfg.time_horizon), part});
    }
    list.push_back({rng.next_in(Rational(0), cfg.time_horizon), remaining});
  }
  return episode;
}

static std::vector<KernelAtom> draw_kernel(const RealizationConfig& cfg, SplitMix64& rng) {
  std::int64_t n = rng.next_int(cfg.kernel_atoms.lo, cfg.kernel_atoms.hi);
  std::vector<KernelAtom> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  Rational remaining(1);
  for (std::int64_t j = 0; j < n; ++j) {
    Rational offset = rng.next_in(cfg.kernel_span.lo, cfg.kernel_span.hi);
    Rational fraction = (j + 1 < n) ? remaining * rng.next_unit() : remaining;
    remaining = remaining - fraction;
    atoms.push_back({offset, fraction});
  }
  return atoms;
}

void sample_delays_and_kernels(const NetworkSpec& net, const RealizationConfig& cfg,
                               SplitMix64& rng, std::vector<Rational>& delays,
                               std::vector<std::vector<KernelAtom>>& kernels) {
  delays.clear();
  kernels.clear();
  delays.reserve(net.synapses.size());
  kernels.reserve(net.synapses.size());
  for (std::size_t s = 0; s < net.synapses.size(); ++s) {
    delays.push_back(rng.next_in(cfg.delay_range.lo, cfg.delay_range.hi));
    kernels.push_back(draw_kernel(cfg, rng));
  }
}

std::vector<std::optional<Rational>> sample_refractory(const NetworkSpec& net,
                                                       const RealizationConfig& cfg,
                                                       SplitMix64& rng) {
  std::vector<std::optional<Rational>> draws;
  draws.reserve(net.neurons.size());
  for (const NeuronSpec& n : net.neurons) {
    if (n.refractory)
      draws.push_back(rng.next_in(n.refractory->min, n.refractory->max));
    else if (cfg.refractory_range)
      draws.push_back(rng.next_in(cfg.refractory_range->lo, cfg.refractory_range->hi));
    else
      draws.push_back(std::nullopt);
  }
  return draws;
}

Realization realize(const NetworkSpec& net, const std::vector<Rational>& u,
                    const RealizationConfig& cfg) {
  validate_config(cfg);
  SplitMix64 rng(cfg.seed);
  std::vector<std::string> ids;
  ids.reserve(net.neurons.size());
  for (const NeuronSpec& n : net.neurons) ids.push_back(n.id);

  Realization r;
  r.episode = realize_episode(ids, u, cfg, rng);
  sample_delays_and_kernels(net, cfg, rng, r.delays, r.kernels);
  r.refractory = sample_refractory(net, cfg, rng);
  return r;
}

Realization verbatim_realization(const NetworkSpec& net, InputEpisode episode) {
  Realization r;
  r.episode = std::move(episode);
  r.delays.reserve(net.synapses.size());
  r.kernels.reserve(net.synapses.size());
  for (const SynapseSpec& s : net.synapses) {
    r.delays.push_back(s.delay);
    r.kernels.push_back(s.kernel);
  }
  r.refractory.assign(net.neurons.size(), std::nullopt);
  return r;
}

} // namespace csnn
