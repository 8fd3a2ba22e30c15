#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynrel/errors.hpp"
#include "dynrel/ocel.hpp"

namespace dynrel {

enum class CardinalityTag { none, one_to_one, many_to_one, many_to_many };

inline const char* to_string(CardinalityTag tag) {
  switch (tag) {
    case CardinalityTag::none: return "none";
    case CardinalityTag::one_to_one: return "one-to-one";
    case CardinalityTag::many_to_one: return "many-to-one";
    case CardinalityTag::many_to_many: return "many-to-many";
  }
  return "none";
}

struct CardinalityClass {
  CardinalityTag tag = CardinalityTag::none;
  std::optional<TypeIndex> many_side;  // set iff tag == many_to_one

  friend bool operator==(const CardinalityClass&, const CardinalityClass&) = default;
};

/// Whole-log ("static") or same-event ("dynamic") co-occurrence counting.
enum class CountingMode { static_links, dynamic_links };

/// Fan-out maxima for every ordered pair of types, stored row-major.
class CooccurrenceStats {
 public:
  explicit CooccurrenceStats(std::size_t type_count = 0)
      : n_(type_count), static_(n_ * n_, 0), dynamic_(n_ * n_, 0), support_(n_ * n_, 0) {}

  std::size_t type_count() const { return n_; }

  /// Max over objects a of type A of the distinct B-objects ever co-occurring with a.
  std::size_t static_fanout_max(TypeIndex a, TypeIndex b) const { return static_[at(a, b)]; }
  /// Max over events and objects a of type A of the B-objects in that event.
  std::size_t dynamic_fanout_max(TypeIndex a, TypeIndex b) const { return dynamic_[at(a, b)]; }
  /// Number of events containing both an A- and a B-object.
  std::size_t support(TypeIndex a, TypeIndex b) const { return support_[at(a, b)]; }

  std::size_t fanout(TypeIndex a, TypeIndex b, CountingMode mode) const {
    return mode == CountingMode::static_links ? static_fanout_max(a, b) : dynamic_fanout_max(a, b);
  }

  friend bool operator==(const CooccurrenceStats&, const CooccurrenceStats&) = default;

 private:
  friend CooccurrenceStats compute_stats(const EventLog& log);

  std::size_t at(TypeIndex a, TypeIndex b) const {
    if (a >= n_ || b >= n_) throw QueryError("unknown object type index");
    return static_cast<std::size_t>(a) * n_ + b;
  }

  std::size_t n_;
  std::vector<std::size_t> static_;
  std::vector<std::size_t> dynamic_;
  std::vector<std::size_t> support_;
};

inline CooccurrenceStats compute_stats(const EventLog& log) {
  const std::size_t n = log.types().size();
  CooccurrenceStats stats(n);
  std::vector<std::vector<ObjectIndex>> partners(log.objects().size());
  std::vector<std::size_t> per_type(n, 0);

  for (const auto& e : log.events()) {
    std::fill(per_type.begin(), per_type.end(), 0);
    for (ObjectIndex o : e.objects) ++per_type[log.type_of(o)];
    for (TypeIndex a = 0; a < n; ++a) {
      if (per_type[a] == 0) continue;
      for (TypeIndex b = 0; b < n; ++b) {
        if (a == b || per_type[b] == 0) continue;
        const std::size_t k = static_cast<std::size_t>(a) * n + b;
        ++stats.support_[k];
        stats.dynamic_[k] = std::max(stats.dynamic_[k], per_type[b]);
      }
    }
    for (ObjectIndex o : e.objects) {
      for (ObjectIndex p : e.objects) {
        if (p != o && log.type_of(p) != log.type_of(o)) partners[o].push_back(p);
      }
    }
  }

  for (ObjectIndex o = 0; o < partners.size(); ++o) {
    auto& list = partners[o];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    std::fill(per_type.begin(), per_type.end(), 0);
    for (ObjectIndex p : list) ++per_type[log.type_of(p)];
    const TypeIndex a = log.type_of(o);
    for (TypeIndex b = 0; b < n; ++b) {
      const std::size_t k = static_cast<std::size_t>(a) * n + b;
      stats.static_[k] = std::max(stats.static_[k], per_type[b]);
    }
  }
  return stats;
}

/// Educated guess of the cardinality between two distinct types.
inline CardinalityClass classify(const CooccurrenceStats& stats, TypeIndex a, TypeIndex b, CountingMode mode) {
  if (a >= stats.type_count() || b >= stats.type_count()) throw QueryError("unknown object type");
  if (a == b) throw QueryError("cardinality is only defined between distinct types");
  if (stats.support(a, b) == 0) return {};
  const std::size_t ab = stats.fanout(a, b, mode);
  const std::size_t ba = stats.fanout(b, a, mode);
  if (ab <= 1 && ba <= 1) return {CardinalityTag::one_to_one, std::nullopt};
  if (ab > 1 && ba > 1) return {CardinalityTag::many_to_many, std::nullopt};
  // Each A sees many B's and each B one A: B is the many side.
  return {CardinalityTag::many_to_one, ab > 1 ? b : a};
}

inline CardinalityClass classify(const CooccurrenceStats& stats, const EventLog& log, std::string_view a,
                                 std::string_view b, CountingMode mode) {
  auto ta = log.find_type(a);
  auto tb = log.find_type(b);
  if (!ta) throw QueryError("unknown object type " + std::string(a));
  if (!tb) throw QueryError("unknown object type " + std::string(b));
  return classify(stats, *ta, *tb, mode);
}

/// Unordered-pair counts per class; `none` pairs are not counted.
struct CardinalityCounts {
  std::size_t one_to_one = 0;
  std::size_t many_to_one = 0;
  std::size_t many_to_many = 0;

  friend bool operator==(const CardinalityCounts&, const CardinalityCounts&) = default;
};

struct CardinalitySummary {
  CardinalityCounts static_counts;
  CardinalityCounts dynamic_counts;

  friend bool operator==(const CardinalitySummary&, const CardinalitySummary&) = default;
};

inline CardinalitySummary summarize(const CooccurrenceStats& stats) {
  CardinalitySummary out;
  auto bump = [](CardinalityCounts& c, CardinalityTag tag) {
    switch (tag) {
      case CardinalityTag::one_to_one: ++c.one_to_one; break;
      case CardinalityTag::many_to_one: ++c.many_to_one; break;
      case CardinalityTag::many_to_many: ++c.many_to_many; break;
      case CardinalityTag::none: break;
    }
  };
  const auto n = static_cast<TypeIndex>(stats.type_count());
  for (TypeIndex a = 0; a < n; ++a) {
    for (TypeIndex b = a + 1; b < n; ++b) {
      bump(out.static_counts, classify(stats, a, b, CountingMode::static_links).tag);
      bump(out.dynamic_counts, classify(stats, a, b, CountingMode::dynamic_links).tag);
    }
  }
  return out;
}

inline CardinalitySummary summarize(const EventLog& log) { return summarize(compute_stats(log)); }

}  // namespace dynrel
