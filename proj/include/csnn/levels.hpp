#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csnn/rational.hpp"

namespace csnn {

/// Finite ordered set of admissible discharge levels Q_m < ... < Q_M.
///
/// Must contain 0, so the zero initial condition is itself an admissible
/// level, and must have at least two members so that a threshold exists.
class LevelSet {
public:
  // Placeholder for deferred construction; invalid until assigned from the
  // validating constructor. validate() rejects specs still carrying one.
  LevelSet() = default;

  explicit LevelSet(std::vector<Rational> levels);

  std::size_t size() const { return levels_.size(); }
  const Rational& at(std::size_t i) const { return levels_[i]; }
  const Rational& min() const { return levels_.front(); }
  const Rational& max() const { return levels_.back(); }
  const std::vector<Rational>& values() const { return levels_; }

  std::size_t zero_index() const { return zero_index_; }
  std::optional<std::size_t> index_of(const Rational& level) const;

  const Rational& succ(std::size_t i) const; // throws NoSuccessor at the top
  const Rational& pred(std::size_t i) const; // throws NoPredecessor at the bottom

  /// Minimal adjacent gap min_q (succ(q) - q), in charge units.
  Rational min_gap() const;

  friend bool operator==(const LevelSet& a, const LevelSet& b) { return a.levels_ == b.levels_; }

private:
  std::vector<Rational> levels_;
  std::size_t zero_index_ = 0;
};

/// Output encoding sigma: level -> emitted charge. Total on the level set it
/// is paired with; need not be injective or monotone.
class ActivationTable {
public:
  ActivationTable() = default;
  explicit ActivationTable(std::map<Rational, Rational> entries) : entries_(std::move(entries)) {}

  static ActivationTable identity(const LevelSet& levels);

  const Rational& at(const Rational& level) const;
  bool contains(const Rational& level) const { return entries_.count(level) != 0; }
  void set(const Rational& level, const Rational& value) { entries_[level] = value; }
  bool total_on(const LevelSet& levels) const;

  const std::map<Rational, Rational>& entries() const { return entries_; }

  friend bool operator==(const ActivationTable& a, const ActivationTable& b) { return a.entries_ == b.entries_; }

private:
  std::map<Rational, Rational> entries_;
};

/// One half-open input-charge slice [lower, upper) owned by a level.
/// A missing bound means -inf / +inf.
struct Slice {
  Rational level;
  std::optional<Rational> lower; // nullopt = -inf
  std::optional<Rational> upper; // nullopt = +inf

  bool contains(const Rational& z) const {
    if (lower && z < *lower) return false;
    if (upper && z >= *upper) return false;
    return true;
  }
};

/// Ordered list of slices covering the real line; the decoding map reads
/// the level off the slice that contains the total injected charge.
struct DecodingPartition {
  std::vector<Slice> slices;
};

struct PartitionViolation {
  std::string what;              // "gap" | "overlap" | structural message
  std::optional<Rational> at;    // witness point, when one exists
};

/// Canonical partition induced by a level set: (-inf, Q_{m+1}) for the
/// minimal level, [q, succ(q)) for interior levels, [Q_M, +inf) at the top.
/// The capacitance scales thresholds, not slice bounds, so it does not
/// appear here.
DecodingPartition build_partition(const LevelSet& levels, const Rational& capacitance);

/// Checks covering, disjointness and half-open orientation; reports the
/// first gap or overlap instead of failing.
std::optional<PartitionViolation> validate_partition(const DecodingPartition& partition);

/// Decoding map D: total injected charge -> the unique level whose slice
/// contains it.
const Rational& decode(const Rational& z, const DecodingPartition& partition);

/// Same map computed directly on the level set; returns the level index.
/// Serves as the closed-form route alongside the slice scan above.
std::size_t decode_index(const Rational& z, const LevelSet& levels);

/// Spike threshold V_thr(q) = (succ(q) - q) / C for q below the maximum.
Rational v_thr(std::size_t level_index, const LevelSet& levels, const Rational& capacitance);
Rational v_thr(const Rational& level, const LevelSet& levels, const Rational& capacitance);

} // namespace csnn
