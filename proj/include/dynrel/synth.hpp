#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dynrel/errors.hpp"
#include "dynrel/linkrec.hpp"
#include "dynrel/ocel.hpp"
#include "dynrel/schema.hpp"

namespace dynrel {

/// What an activity's events do to one relationship of their reference type.
enum class TouchAction {
  set_children,  // reference type is the one side: list the complete child set
  set_parent,    // reference type is the many side (or one-to-one): list the single partner
  none,
};

struct Touch {
  std::string partner;  // type on the other end of the relationship
  TouchAction action = TouchAction::none;
};

struct ActivitySpec {
  std::string name;
  std::string reference_type;
  std::vector<Touch> touches;
};

struct GeneratorConfig {
  std::vector<std::string> types;
  RelationshipSchema schema;
  std::vector<ActivitySpec> activities;
  std::map<std::string, std::size_t> object_counts;
  std::size_t event_count = 0;
  bool locality_respecting = true;
  /// Chance per touch that an event re-parents another object's child.
  /// Only used when locality_respecting is false.
  double violation_rate = 0.25;
  /// Make every relationship observable: each many-to-one relationship gets
  /// an event listing two children, each one-to-one relationship one pairing.
  bool coverage_forcing = false;
  std::size_t max_children = 4;
  std::uint64_t seed = 0;
};

/// Link identified by names, independent of any log's indices.
struct NamedLink {
  std::string relationship;  // SchemaEntry::label()
  std::string parent;
  std::string child;

  friend auto operator<=>(const NamedLink&, const NamedLink&) = default;
};

using NamedTimeline = std::map<NamedLink, std::vector<Interval>>;

struct GroundTruth {
  NamedTimeline timeline;
  std::map<std::string, std::string> assignment;  // activity -> reference type
  RelationshipSchema schema;
  std::vector<std::size_t> planted_a5_violations;
};

struct GeneratedLog {
  EventLog log;
  GroundTruth truth;
};

namespace detail {

// Random draws are defined directly on mt19937_64 output so that the
// sequence does not depend on the standard library's distributions.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

  /// k distinct elements of `pool`, in ascending order.
  std::vector<std::uint32_t> pick(std::vector<std::uint32_t> pool, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + below(pool.size() - i)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 rng_;
};

class Generator {
 public:
  explicit Generator(const GeneratorConfig& config) : cfg_(config), draw_(config.seed) { check(); }

  GeneratedLog run() {
    LogBuilder builder;
    for (const auto& t : cfg_.types) {
      builder.add_type(t);
      const std::size_t n = cfg_.object_counts.at(t);
      for (std::size_t i = 1; i <= n; ++i) {
        ids_[t].push_back(t + "-" + std::to_string(i));
        builder.add_object(ids_[t].back(), t);
      }
    }
    const auto& entries = cfg_.schema.entries();
    parent_.resize(entries.size());
    children_.resize(entries.size());
    for (std::size_t r = 0; r < entries.size(); ++r) {
      parent_[r].assign(ids_[entries[r].child].size(), kFree);
      children_[r].resize(ids_[entries[r].parent].size());
    }

    std::vector<std::size_t> witnesses = pending_witnesses();
    const Timestamp start = Timestamp::from_seconds(1704067200);  // 2024-01-01T00:00:00Z
    for (std::size_t i = 0; i < cfg_.event_count; ++i) {
      position_ = i;
      planted_ = false;
      emitted_.clear();
      const ActivitySpec* activity = nullptr;
      if (i < witnesses.size()) {
        activity = &witness_event(witnesses[i]);
      } else {
        activity = &cfg_.activities[draw_.below(cfg_.activities.size())];
        ref_ = static_cast<std::uint32_t>(draw_.below(ids_[activity->reference_type].size()));
        for (const auto& touch : activity->touches) apply(*activity, touch, false);
      }
      std::vector<std::string> objects{ids_[activity->reference_type][ref_]};
      objects.insert(objects.end(), emitted_.begin(), emitted_.end());
      builder.add_event("e" + std::to_string(i + 1), activity->name, Timestamp{start.micros + static_cast<std::int64_t>(i) * 1'000'000},
                        objects);
      truth_.assignment[activity->name] = activity->reference_type;
      if (planted_) truth_.planted_a5_violations.push_back(i);
    }
    truth_.schema = cfg_.schema;
    return GeneratedLog{std::move(builder).build(), std::move(truth_)};
  }

 private:
  static constexpr std::uint32_t kFree = 0xffffffffu;

  std::size_t relationship_of(const std::string& a, const std::string& b) const { return *cfg_.schema.find(a, b); }

  void check() const {
    std::set<std::string> types(cfg_.types.begin(), cfg_.types.end());
    if (types.size() != cfg_.types.size()) throw ConfigError("duplicate type names");
    for (const auto& t : cfg_.types) {
      if (t.empty()) throw ConfigError("empty type name");
      auto it = cfg_.object_counts.find(t);
      if (it == cfg_.object_counts.end() || it->second == 0) {
        throw ConfigError("type " + t + " needs a positive object count");
      }
    }
    for (const auto& e : cfg_.schema.entries()) {
      if (!types.contains(e.parent) || !types.contains(e.child)) {
        throw ConfigError("relationship " + e.label() + " names an undeclared type");
      }
    }
    if (cfg_.event_count > 0 && cfg_.activities.empty()) throw ConfigError("events requested but no activities");
    if (cfg_.violation_rate < 0.0 || cfg_.violation_rate > 1.0) throw ConfigError("violation rate must be in [0,1]");
    if (cfg_.max_children == 0) throw ConfigError("max children must be positive");

    std::set<std::string> names;
    for (const auto& a : cfg_.activities) {
      if (a.name.empty() || !names.insert(a.name).second) throw ConfigError("activity names must be unique and non-empty");
      if (!types.contains(a.reference_type)) {
        throw ConfigError("activity " + a.name + " has unknown reference type " + a.reference_type);
      }
      std::set<std::string> partners;
      for (const auto& touch : a.touches) {
        if (!partners.insert(touch.partner).second) {
          throw ConfigError("activity " + a.name + " touches " + touch.partner + " twice");
        }
        auto r = cfg_.schema.find(a.reference_type, touch.partner);
        if (!r) {
          throw ConfigError("activity " + a.name + ": no relationship between " + a.reference_type + " and " +
                            touch.partner);
        }
        const SchemaEntry& e = cfg_.schema.entries()[*r];
        const bool ref_is_parent = e.parent == a.reference_type;
        if (touch.action == TouchAction::set_children && (e.one_to_one || !ref_is_parent)) {
          throw ConfigError("activity " + a.name + ": set_children needs " + a.reference_type +
                            " on the one side of a many-to-one relationship with " + touch.partner);
        }
        if (touch.action == TouchAction::set_parent && !e.one_to_one && ref_is_parent) {
          throw ConfigError("activity " + a.name + ": set_parent on " + e.label() + " where " + a.reference_type +
                            " is the one side");
        }
      }
    }
    if (cfg_.coverage_forcing) {
      std::size_t needed = 0;
      for (std::size_t r = 0; r < cfg_.schema.size(); ++r) {
        const SchemaEntry& e = cfg_.schema.entries()[r];
        if (!witness_activity(r)) {
          throw ConfigError("coverage forcing: no activity can witness relationship " + e.label());
        }
        if (!e.one_to_one && cfg_.object_counts.at(e.child) < 2) {
          throw ConfigError("coverage forcing: relationship " + e.label() + " needs at least two " + e.child +
                            " objects");
        }
        ++needed;
      }
      if (cfg_.event_count > 0 && cfg_.event_count < needed) {
        throw ConfigError("coverage forcing needs at least " + std::to_string(needed) + " events");
      }
    }
  }

  const ActivitySpec* witness_activity(std::size_t r) const {
    const SchemaEntry& e = cfg_.schema.entries()[r];
    for (const auto& a : cfg_.activities) {
      for (const auto& touch : a.touches) {
        if (!e.involves(a.reference_type) || touch.partner != e.partner_of(a.reference_type)) continue;
        if (e.one_to_one ? touch.action == TouchAction::set_parent
                         : touch.action == TouchAction::set_children) {
          return &a;
        }
      }
    }
    return nullptr;
  }

  std::vector<std::size_t> pending_witnesses() const {
    std::vector<std::size_t> out;
    if (!cfg_.coverage_forcing || cfg_.event_count == 0) return out;
    for (std::size_t r = 0; r < cfg_.schema.size(); ++r) out.push_back(r);
    return out;
  }

  // A witness event touches only its target relationship, which no earlier
  // event has touched, so every child is still free.
  const ActivitySpec& witness_event(std::size_t r) {
    const ActivitySpec& a = *witness_activity(r);
    ref_ = static_cast<std::uint32_t>(draw_.below(ids_[a.reference_type].size()));
    const SchemaEntry& e = cfg_.schema.entries()[r];
    for (const auto& touch : a.touches) {
      if (touch.partner == e.partner_of(a.reference_type)) apply(a, touch, true);
    }
    return a;
  }

  void apply(const ActivitySpec& a, const Touch& touch, bool witness) {
    if (touch.action == TouchAction::none) return;
    const std::size_t r = relationship_of(a.reference_type, touch.partner);
    const SchemaEntry& e = cfg_.schema.entries()[r];
    if (e.one_to_one) {
      pair_up(r, e.parent == a.reference_type);
    } else if (touch.action == TouchAction::set_children) {
      set_children(r, witness);
    } else {
      set_parent(r);
    }
  }

  void set_children(std::size_t r, bool witness) {
    const SchemaEntry& e = cfg_.schema.entries()[r];
    const std::vector<std::uint32_t> current = children_[r][ref_];
    std::vector<std::uint32_t> local_pool;
    std::vector<std::uint32_t> foreign;
    for (std::uint32_t c = 0; c < parent_[r].size(); ++c) {
      if (parent_[r][c] == kFree || parent_[r][c] == ref_) {
        local_pool.push_back(c);
      } else {
        foreign.push_back(c);
      }
    }
    std::vector<std::uint32_t> next;
    if (witness) {
      next = draw_.pick(local_pool, 2);
    } else if (!cfg_.locality_respecting && !foreign.empty() && draw_.chance(cfg_.violation_rate)) {
      next = draw_.pick(foreign, 1 + draw_.below(std::min<std::size_t>(2, foreign.size())));
      if (!local_pool.empty()) {
        auto kept = draw_.pick(local_pool, draw_.below(std::min(local_pool.size(), cfg_.max_children) + 1));
        next.insert(next.end(), kept.begin(), kept.end());
        std::sort(next.begin(), next.end());
      }
    } else {
      if (local_pool.empty()) return;
      next = draw_.pick(local_pool, 1 + draw_.below(std::min(local_pool.size(), cfg_.max_children)));
    }

    for (std::uint32_t c : current) {
      if (!std::binary_search(next.begin(), next.end(), c)) unlink(r, ref_, c);
    }
    for (std::uint32_t c : next) {
      if (parent_[r][c] == ref_) continue;
      if (parent_[r][c] != kFree) {
        unlink(r, parent_[r][c], c);
        planted_ = true;
      }
      link(r, ref_, c);
    }
    for (std::uint32_t c : next) emitted_.push_back(ids_[e.child][c]);
  }

  void set_parent(std::size_t r) {
    const SchemaEntry& e = cfg_.schema.entries()[r];
    const auto p = static_cast<std::uint32_t>(draw_.below(ids_[e.parent].size()));
    const std::uint32_t current = parent_[r][ref_];
    if (current != p) {
      if (current != kFree) unlink(r, current, ref_);
      link(r, p, ref_);
    }
    emitted_.push_back(ids_[e.parent][p]);
  }

  // One-to-one: parent_ maps typeB -> typeA, children_ holds at most one typeB.
  void pair_up(std::size_t r, bool ref_is_a) {
    const SchemaEntry& e = cfg_.schema.entries()[r];
    const std::string& other_type = ref_is_a ? e.child : e.parent;
    auto partner = [&](std::uint32_t obj, bool is_a) -> std::uint32_t {
      if (is_a) return children_[r][obj].empty() ? kFree : children_[r][obj].front();
      return parent_[r][obj];
    };
    std::vector<std::uint32_t> free_pool;
    std::vector<std::uint32_t> foreign;
    for (std::uint32_t o = 0; o < ids_[other_type].size(); ++o) {
      const std::uint32_t p = partner(o, !ref_is_a);
      (p == kFree || p == ref_ ? free_pool : foreign).push_back(o);
    }
    std::uint32_t other = 0;
    bool steal = false;
    if (!cfg_.locality_respecting && !foreign.empty() && draw_.chance(cfg_.violation_rate)) {
      other = foreign[draw_.below(foreign.size())];
      steal = true;
    } else {
      if (free_pool.empty()) return;
      other = free_pool[draw_.below(free_pool.size())];
    }
    const std::uint32_t a = ref_is_a ? ref_ : other;
    const std::uint32_t b = ref_is_a ? other : ref_;
    if (parent_[r][b] != a) {
      const std::uint32_t ref_partner = partner(ref_, ref_is_a);
      if (ref_partner != kFree) {
        ref_is_a ? unlink(r, ref_, ref_partner) : unlink(r, ref_partner, ref_);
      }
      const std::uint32_t other_partner = partner(other, !ref_is_a);
      if (other_partner != kFree) {
        ref_is_a ? unlink(r, other_partner, other) : unlink(r, other, other_partner);
        if (steal) planted_ = true;
      }
      link(r, a, b);
    }
    emitted_.push_back(ids_[other_type][other]);
  }

  NamedLink named(std::size_t r, std::uint32_t parent, std::uint32_t child) const {
    const SchemaEntry& e = cfg_.schema.entries()[r];
    return NamedLink{e.label(), ids_.at(e.parent)[parent], ids_.at(e.child)[child]};
  }

  void link(std::size_t r, std::uint32_t parent, std::uint32_t child) {
    auto& kids = children_[r][parent];
    kids.insert(std::lower_bound(kids.begin(), kids.end(), child), child);
    parent_[r][child] = parent;
    truth_.timeline[named(r, parent, child)].push_back(Interval{position_, std::nullopt});
  }

  void unlink(std::size_t r, std::uint32_t parent, std::uint32_t child) {
    auto& kids = children_[r][parent];
    kids.erase(std::lower_bound(kids.begin(), kids.end(), child));
    parent_[r][child] = kFree;
    truth_.timeline[named(r, parent, child)].back().to = position_;
  }

  const GeneratorConfig& cfg_;
  Draw draw_;
  std::map<std::string, std::vector<std::string>> ids_;
  std::vector<std::vector<std::uint32_t>> parent_;                 // per relationship, per child
  std::vector<std::vector<std::vector<std::uint32_t>>> children_;  // per relationship, per parent
  GroundTruth truth_;
  std::vector<std::string> emitted_;
  std::size_t position_ = 0;
  std::uint32_t ref_ = 0;
  bool planted_ = false;
};

}  // namespace detail

/// Emits a log from evolving link state under snapshot semantics, together
/// with the exact timeline the log encodes. Deterministic in `config.seed`.
inline GeneratedLog generate(const GeneratorConfig& config) { return detail::Generator(config).run(); }

/// Renames a reconstruction's timeline with object ids and relationship labels.
inline NamedTimeline named_timeline(const EventLog& log, const ReconstructionResult& result) {
  NamedTimeline out;
  for (const auto& [link, intervals] : result.timeline) {
    out[NamedLink{result.relationships.at(link.relationship).label(), log.object_id(link.parent),
                  log.object_id(link.child)}] = intervals;
  }
  return out;
}

/// Differences between a reconstruction and the generator's ground truth;
/// empty iff timelines and locality violations agree exactly.
inline std::vector<std::string> oracle_check(const EventLog& log, const GroundTruth& truth,
                                             const ReconstructionResult& result) {
  if (result.event_count != log.events().size()) throw QueryError("result was not computed from this log");
  if (result.relationships.size() != truth.schema.size()) throw QueryError("result uses a different schema");
  for (std::size_t i = 0; i < result.relationships.size(); ++i) {
    if (result.relationships[i].label() != truth.schema.entries()[i].label()) {
      throw QueryError("result uses a different schema");
    }
  }

  auto render = [](const NamedLink& l) { return "(" + l.parent + ", " + l.child + ") of " + l.relationship; };
  auto render_intervals = [](const std::vector<Interval>& ivs) {
    std::string s;
    for (const auto& iv : ivs) {
      s += "[" + std::to_string(iv.from) + "," + (iv.to ? std::to_string(*iv.to) : std::string("-")) + ")";
    }
    return s;
  };

  std::vector<std::string> diffs;
  const NamedTimeline got = named_timeline(log, result);
  for (const auto& [link, ivs] : truth.timeline) {
    auto it = got.find(link);
    if (it == got.end()) {
      diffs.push_back("missing link " + render(link) + " " + render_intervals(ivs));
    } else if (it->second != ivs) {
      diffs.push_back("link " + render(link) + ": expected " + render_intervals(ivs) + ", got " +
                      render_intervals(it->second));
    }
  }
  for (const auto& [link, ivs] : got) {
    if (!truth.timeline.contains(link)) diffs.push_back("unexpected link " + render(link) + " " + render_intervals(ivs));
  }
  if (result.a5_violations != truth.planted_a5_violations) {
    auto list = [](const std::vector<std::size_t>& v) {
      std::string s = "{";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + "}";
    };
    diffs.push_back("locality violations: expected " + list(truth.planted_a5_violations) + ", got " +
                    list(result.a5_violations));
  }
  return diffs;
}

struct RandomConfigLimits {
  std::size_t max_types = 6;
  std::size_t min_events = 1;
  std::size_t max_events = 500;
  bool locality_respecting = true;
  bool coverage_forcing = true;
  double violation_rate = 0.25;
};

/// A random generator configuration whose schema is a forest, so two types
/// listed by one event are related only through the reference type.
inline GeneratorConfig random_config(std::uint64_t seed, const RandomConfigLimits& limits = {}) {
  static const char* const kNames[] = {"order", "item", "employee", "team", "package", "truck",
                                       "invoice", "customer", "route", "shelf", "pallet", "driver"};
  detail::Draw draw(seed ^ 0x9e3779b97f4a7c15ull);
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.locality_respecting = limits.locality_respecting;
  cfg.coverage_forcing = limits.coverage_forcing;
  cfg.violation_rate = limits.violation_rate;

  const std::size_t max_types = std::clamp<std::size_t>(limits.max_types, 2, std::size(kNames));
  const std::size_t n = 2 + draw.below(max_types - 1);
  for (std::size_t i = 0; i < n; ++i) {
    cfg.types.emplace_back(kNames[i]);
    cfg.object_counts[kNames[i]] = 2 + draw.below(5);
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i > 1 && draw.chance(0.15)) continue;
    const std::string& a = cfg.types[draw.below(i)];
    const std::string& b = cfg.types[i];
    if (draw.chance(0.2)) {
      cfg.schema.add_one_to_one(a, b);
    } else if (draw.chance(0.5)) {
      cfg.schema.add_many_to_one(a, b);
    } else {
      cfg.schema.add_many_to_one(b, a);
    }
  }

  auto action_for = [&](const std::string& ref, const SchemaEntry& e) {
    return (!e.one_to_one && e.parent == ref) ? TouchAction::set_children : TouchAction::set_parent;
  };
  for (const auto& t : cfg.types) {
    const std::size_t count = 1 + draw.below(2);
    for (std::size_t k = 0; k < count; ++k) {
      ActivitySpec a{"act " + t + " " + std::to_string(k + 1), t, {}};
      for (const auto& e : cfg.schema.entries()) {
        if (e.involves(t) && draw.chance(0.6)) a.touches.push_back(Touch{e.partner_of(t), action_for(t, e)});
      }
      cfg.activities.push_back(std::move(a));
    }
  }
  // Every relationship gets at least one activity able to witness it.
  for (const auto& e : cfg.schema.entries()) {
    const std::string& owner = e.parent;
    for (auto& a : cfg.activities) {
      if (a.reference_type != owner) continue;
      const bool has = std::any_of(a.touches.begin(), a.touches.end(),
                                   [&](const Touch& t) { return t.partner == e.child; });
      if (!has) a.touches.push_back(Touch{e.child, action_for(owner, e)});
      break;
    }
  }

  const std::size_t lo = std::max(limits.min_events, cfg.schema.size());
  const std::size_t hi = std::max(lo, limits.max_events);
  cfg.event_count = lo + draw.below(hi - lo + 1);
  return cfg;
}

}  // namespace dynrel
