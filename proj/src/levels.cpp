#include "csnn/levels.hpp"

#include <algorithm>

namespace csnn {

LevelSet::LevelSet(std::vector<Rational> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2)
    throw SnnError(ErrorCode::InvalidLevelSet, "need at least two discharge levels");
  for (std::size_t i = 1; i < levels_.size(); ++i)
    if (!(levels_[i - 1] < levels_[i]))
      throw SnnError(ErrorCode::InvalidLevelSet, "levels must be strictly increasing");
  auto zero = index_of(Rational(0));
  if (!zero)
    throw SnnError(ErrorCode::InvalidLevelSet, "level set must contain 0 (the initial discharge state)");
  zero_index_ = *zero;
}

std::optional<std::size_t> LevelSet::index_of(const Rational& level) const {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), level);
  if (it == levels_.end() || *it != level) return std::nullopt;
  return static_cast<std::size_t>(it - levels_.begin());
}

const Rational& LevelSet::succ(std::size_t i) const {
  if (i + 1 >= levels_.size())
    throw SnnError(ErrorCode::NoSuccessor, "succ undefined at the maximal level " + levels_.back().str());
  return levels_[i + 1];
}

const Rational& LevelSet::pred(std::size_t i) const {
  if (i == 0)
    throw SnnError(ErrorCode::NoPredecessor, "pred undefined at the minimal level " + levels_.front().str());
  return levels_[i - 1];
}

Rational LevelSet::min_gap() const {
  Rational best = levels_[1] - levels_[0];
  for (std::size_t i = 2; i < levels_.size(); ++i) {
    Rational gap = levels_[i] - levels_[i - 1];
    if (gap < best) best = gap;
  }
  return best;
}

ActivationTable ActivationTable::identity(const LevelSet& levels) {
  std::map<Rational, Rational> entries;
  for (const Rational& q : levels.values()) entries[q] = q;
  return ActivationTable(std::move(entries));
}

const Rational& ActivationTable::at(const Rational& level) const {
  auto it = entries_.find(level);
  if (it == entries_.end())
    throw SnnError(ErrorCode::InvalidSpec, "sigma undefined at level " + level.str());
  return it->second;
}

bool ActivationTable::total_on(const LevelSet& levels) const {
  for (const Rational& q : levels.values())
    if (!contains(q)) return false;
  return true;
}

DecodingPartition build_partition(const LevelSet& levels, const Rational& capacitance) {
  if (capacitance <= Rational(0))
    throw SnnError(ErrorCode::InvalidSpec, "capacitance must be positive");
  DecodingPartition partition;
  const std::size_t n = levels.size();
  partition.slices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Slice s;
    s.level = levels.at(i);
    if (i > 0) s.lower = levels.at(i);
    if (i + 1 < n) s.upper = levels.at(i + 1);
    partition.slices.push_back(std::move(s));
  }
  return partition;
}

std::optional<PartitionViolation> validate_partition(const DecodingPartition& partition) {
  const auto& slices = partition.slices;
  if (slices.empty())
    return PartitionViolation{"empty partition", std::nullopt};
  if (slices.front().lower)
    return PartitionViolation{"first slice must extend to -inf", *slices.front().lower};
  if (slices.back().upper)
    return PartitionViolation{"last slice must extend to +inf", *slices.back().upper};
  for (std::size_t i = 0; i < slices.size(); ++i) {
    if (slices[i].lower && slices[i].upper && !(*slices[i].lower < *slices[i].upper))
      return PartitionViolation{"empty slice", *slices[i].lower};
    if (i + 1 == slices.size()) continue;
    if (!slices[i].upper || !slices[i + 1].lower)
      return PartitionViolation{"interior slice with infinite bound", std::nullopt};
    const Rational& hi = *slices[i].upper;
    const Rational& lo = *slices[i + 1].lower;
    if (hi < lo) return PartitionViolation{"gap", hi};
    if (lo < hi) return PartitionViolation{"overlap", lo};
  }
  for (std::size_t i = 0; i < slices.size(); ++i)
    for (std::size_t j = i + 1; j < slices.size(); ++j)
      if (slices[i].level == slices[j].level)
        return PartitionViolation{"duplicate level " + slices[i].level.str(), std::nullopt};
  return std::nullopt;
}

const Rational& decode(const Rational& z, const DecodingPartition& partition) {
  for (const Slice& s : partition.slices)
    if (s.contains(z)) return s.level;
  // Unreachable on a validated partition.
  throw SnnError(ErrorCode::InvariantViolation, "no slice contains " + z.str());
}

std::size_t decode_index(const Rational& z, const LevelSet& levels) {
  // Largest level <= z; everything below Q_{m+1} decodes to the minimum.
  const auto& vals = levels.values();
  auto it = std::upper_bound(vals.begin(), vals.end(), z);
  if (it == vals.begin()) return 0;
  return static_cast<std::size_t>(it - vals.begin()) - 1;
}

Rational v_thr(std::size_t level_index, const LevelSet& levels, const Rational& capacitance) {
  return (levels.succ(level_index) - levels.at(level_index)) / capacitance;
}

Rational v_thr(const Rational& level, const LevelSet& levels, const Rational& capacitance) {
  auto idx = levels.index_of(level);
  if (!idx) throw SnnError(ErrorCode::InvalidSpec, level.str() + " is not a level");
  return v_thr(*idx, levels, capacitance);
}

} // namespace csnn
