#include "csnn/cyclic.hpp"

#include <algorithm>
#include <map>

#include "csnn/errors.hpp"

namespace csnn {

void validate(const DecodedSystem& sys) {
  std::size_t n = sys.bias.size();
  if (sys.weights.size() != n)
    throw SnnError(ErrorCode::InvalidSpec, "weight matrix row count does not match bias length");
  for (const auto& row : sys.weights)
    if (row.size() != n)
      throw SnnError(ErrorCode::InvalidSpec, "weight matrix must be square");
  if (sys.activation.size() != n)
    throw SnnError(ErrorCode::InvalidSpec, "need one activation per component");
  for (const Quantizer& q : sys.activation) q.validate();
  if (sys.box.size() != n)
    throw SnnError(ErrorCode::InvalidSpec, "need one box axis per component");
  for (const auto& axis : sys.box)
    if (axis.empty())
      throw SnnError(ErrorCode::InvalidSpec, "box axis must be nonempty");
}

std::vector<std::vector<Rational>> default_box(std::size_t n) {
  std::vector<Rational> axis;
  for (int v = 0; v <= 5; ++v) axis.push_back(Rational(v));
  return std::vector<std::vector<Rational>>(n, axis);
}

Quantizer node_to_quantizer(const QannNode& node) {
  Quantizer q;
  for (std::size_t i = 0; i < node.levels.size(); ++i) {
    if (i > 0) q.breakpoints.push_back(node.levels.at(i));
    q.values.push_back(node.sigma.at(node.levels.at(i)));
  }
  q.validate();
  return q;
}

std::vector<Rational> apply_update(const DecodedSystem& sys, const std::vector<Rational>& kappa) {
  std::size_t n = sys.size();
  std::vector<Rational> next(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    Rational z = sys.bias[i];
    for (std::size_t j = 0; j < n; ++j) z = z + sys.weights[i][j] * kappa[j];
    next[i] = sys.activation[i].eval(z);
  }
  return next;
}

namespace {

bool in_box(const DecodedSystem& sys, const std::vector<Rational>& kappa) {
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    const auto& axis = sys.box[i];
    if (std::find(axis.begin(), axis.end(), kappa[i]) == axis.end()) return false;
  }
  return true;
}

} // namespace

OrbitResult sync_iterate(const DecodedSystem& sys, std::vector<Rational> kappa0,
                         std::size_t max_steps) {
  validate(sys);
  if (kappa0.size() != sys.size())
    throw SnnError(ErrorCode::InvalidSpec, "initial state length does not match system");

  OrbitResult out;
  std::map<std::vector<Rational>, std::size_t> seen; // exact revisit detection
  std::vector<Rational> state = std::move(kappa0);
  for (std::size_t step = 0; step <= max_steps; ++step) {
    auto it = seen.find(state);
    if (it != seen.end()) {
      std::size_t start = it->second;
      out.period = out.trajectory.size() - start;
      out.kind = out.period == 1 ? OrbitKind::FixedPoint : OrbitKind::Cycle;
      out.cycle_states.assign(out.trajectory.begin() + static_cast<std::ptrdiff_t>(start),
                              out.trajectory.end());
      return out;
    }
    if (!in_box(sys, state)) {
      out.kind = OrbitKind::BoxEscape;
      out.trajectory.push_back(state);
      return out;
    }
    seen[state] = out.trajectory.size();
    out.trajectory.push_back(state);
    state = apply_update(sys, state);
  }
  out.kind = OrbitKind::BudgetExceeded;
  return out;
}

std::vector<std::vector<Rational>> enumerate_fixed_points(const DecodedSystem& sys,
                                                          std::uint64_t point_limit) {
  validate(sys);
  std::uint64_t total = 1;
  for (const auto& axis : sys.box) {
    if (axis.size() > point_limit || total > point_limit / axis.size())
      throw SnnError(ErrorCode::BoxTooLarge, "box exceeds the enumeration limit of " +
                                                 std::to_string(point_limit) + " points");
    total *= axis.size();
  }

  std::size_t n = sys.size();
  std::vector<std::vector<Rational>> found;
  std::vector<std::size_t> odo(n, 0);
  std::vector<Rational> kappa(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) kappa[i] = sys.box[i][0];
  while (true) {
    if (apply_update(sys, kappa) == kappa) found.push_back(kappa);
    std::size_t axis = 0;
    while (axis < n) {
      if (++odo[axis] < sys.box[axis].size()) {
        kappa[axis] = sys.box[axis][odo[axis]];
        break;
      }
      odo[axis] = 0;
      kappa[axis] = sys.box[axis][0];
      ++axis;
    }
    if (axis == n) break;
  }
  return found;
}

namespace {

std::vector<std::vector<Rational>> integer_box(std::size_t n, std::int64_t lo,
                                               std::int64_t hi) {
  if (lo > hi)
    throw SnnError(ErrorCode::InvalidSpec, "box bounds out of order");
  std::vector<Rational> axis;
  for (std::int64_t v = lo; v <= hi; ++v) axis.push_back(Rational(v));
  return std::vector<std::vector<Rational>>(n, axis);
}

DecodedSystem scalar_relu_system(const Rational& w, const Rational& b,
                                 std::int64_t box_lo, std::int64_t box_hi) {
  DecodedSystem sys;
  sys.weights = {{w}};
  sys.bias = {b};
  sys.activation = {quantized_relu_quantizer(10)};
  sys.box = integer_box(1, box_lo, box_hi);
  return sys;
}

std::string format_states(const std::vector<std::vector<Rational>>& states) {
  std::string out;
  for (const auto& s : states) {
    if (!out.empty()) out += ", ";
    out += "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += ",";
      out += s[i].str();
    }
    out += ")";
  }
  return out;
}

} // namespace

SuiteReport counterexample_suite() { return counterexample_suite(0, 5); }

SuiteReport counterexample_suite(std::int64_t box_lo, std::int64_t box_hi) {
  SuiteReport report;
  std::string box_label =
      "{" + std::to_string(box_lo) + ".." + std::to_string(box_hi) + "}";

  {
    // Positive self-loop kappa = relu_q(kappa/2 + 3/5): 0 and 1 coexist.
    ExampleOutcome ex;
    ex.name = "positive-self-loop";
    DecodedSystem sys =
        scalar_relu_system(Rational(1, 2), Rational(3, 5), box_lo, box_hi);
    auto fixed = enumerate_fixed_points(sys);
    std::vector<std::vector<Rational>> expected = {{Rational(0)}, {Rational(1)}};
    ex.pass = fixed == expected;
    ex.detail = "fixed points in " + box_label + ": " + format_states(fixed);
    report.examples.push_back(std::move(ex));
  }

  {
    // Negative self-loop kappa -> relu_q(-kappa/2 + 6/5): 2-cycle 0 <-> 1.
    ExampleOutcome ex;
    ex.name = "negative-self-loop";
    DecodedSystem sys =
        scalar_relu_system(Rational(-1, 2), Rational(6, 5), box_lo, box_hi);
    OrbitResult orbit = sync_iterate(sys, {Rational(0)}, 100);
    std::vector<std::vector<Rational>> expected = {{Rational(0)}, {Rational(1)}};
    ex.pass = orbit.kind == OrbitKind::Cycle && orbit.period == 2 &&
              orbit.cycle_states == expected;
    ex.detail = "orbit from 0: " + format_states(orbit.trajectory) +
                " (period " + std::to_string(orbit.period) + ")";
    report.examples.push_back(std::move(ex));
  }

  {
    // Three units: static solutions exist, yet iteration from rest cycles.
    ExampleOutcome ex;
    ex.name = "reachability-gap";
    DecodedSystem sys;
    sys.weights = {{Rational(0), Rational(0), Rational(0)},
                   {Rational(1), Rational(0), Rational(-2)},
                   {Rational(1), Rational(-2), Rational(0)}};
    sys.bias = {Rational(1), Rational(0), Rational(0)};
    sys.activation = {quantized_relu_quantizer(10), quantized_relu_quantizer(10),
                      quantized_relu_quantizer(10)};
    sys.box = integer_box(3, box_lo, box_hi);

    auto fixed = enumerate_fixed_points(sys);
    auto has = [&](std::vector<Rational> k) {
      return std::find(fixed.begin(), fixed.end(), k) != fixed.end();
    };
    bool members = has({Rational(1), Rational(1), Rational(0)}) &&
                   has({Rational(1), Rational(0), Rational(1)});

    OrbitResult orbit = sync_iterate(sys, {Rational(0), Rational(0), Rational(0)}, 100);
    std::vector<std::vector<Rational>> expected_cycle = {
        {Rational(1), Rational(0), Rational(0)}, {Rational(1), Rational(1), Rational(1)}};
    bool cycles = orbit.kind == OrbitKind::Cycle && orbit.period == 2 &&
                  orbit.cycle_states == expected_cycle;

    ex.pass = members && cycles;
    ex.detail = "fixed points found: " + format_states(fixed) +
                "; orbit from rest: " + format_states(orbit.trajectory);
    report.examples.push_back(std::move(ex));
  }

  report.all_pass = true;
  for (const ExampleOutcome& ex : report.examples) report.all_pass = report.all_pass && ex.pass;
  return report;
}

} // namespace csnn
