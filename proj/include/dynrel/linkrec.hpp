#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynrel/errors.hpp"
#include "dynrel/ocel.hpp"
#include "dynrel/ratio.hpp"
#include "dynrel/reftype.hpp"
#include "dynrel/schema.hpp"

namespace dynrel {

/// Instance-level link of a schema relationship. `parent` is on the one side
/// (typeA for one-to-one entries), `child` on the many side.
struct Link {
  std::uint32_t relationship = 0;  // index into the schema entries
  ObjectIndex parent = 0;
  ObjectIndex child = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

enum class ChangeKind { add, remove };
enum class ChangeOrigin { explicit_change, implicit_change };

inline const char* to_string(ChangeKind k) { return k == ChangeKind::add ? "add" : "delete"; }
inline const char* to_string(ChangeOrigin o) {
  return o == ChangeOrigin::explicit_change ? "explicit" : "implicit";
}

/// One link addition or deletion caused by an event. `local` holds iff the
/// event's reference object is an endpoint of the link.
struct ModificationRecord {
  std::size_t event_position = 0;
  Link link;
  ChangeKind kind = ChangeKind::add;
  ChangeOrigin origin = ChangeOrigin::explicit_change;
  bool local = true;

  friend bool operator==(const ModificationRecord&, const ModificationRecord&) = default;
};

/// Half-open span of event positions [from, to); an open `to` means the
/// link is still active at the end of the log.
struct Interval {
  std::size_t from = 0;
  std::optional<std::size_t> to;

  bool contains(std::size_t position) const { return from <= position && (!to || position < *to); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

using LinkTimeline = std::map<Link, std::vector<Interval>>;

struct ReconstructionResult {
  std::vector<SchemaEntry> relationships;  // copy of the schema the links index into
  std::size_t event_count = 0;
  LinkTimeline timeline;
  std::vector<ModificationRecord> modifications;
  std::vector<std::size_t> skipped_events;  // activity without a reference type
  std::vector<std::size_t> a3_violations;   // not exactly one reference object
  std::vector<std::size_t> a5_violations;   // at least one non-local modification
  std::vector<std::size_t> a4_conflicts;    // several one-side partners listed
  std::vector<Diagnostic> diagnostics;

  std::size_t processed_count() const { return event_count - skipped_events.size() - a3_violations.size(); }
};

struct ReconstructOptions {
  /// Off: only violation sets are filled. Used by search, which needs the ratio alone.
  bool record_history = true;
};

/// Replays a log under a schema and reference assignment. Construction
/// resolves the schema and groups event objects by type once, so repeated
/// runs with different assignments share that work.
class Reconstructor {
 public:
  Reconstructor(const EventLog& log, const RelationshipSchema& schema)
      : log_(&log), relationships_(schema.entries()) {
    validate_schema(log, schema);
    roles_.resize(log.types().size());
    for (std::uint32_t r = 0; r < relationships_.size(); ++r) {
      const SchemaEntry& e = relationships_[r];
      const TypeIndex p = *log.find_type(e.parent);
      const TypeIndex c = *log.find_type(e.child);
      resolved_.push_back(Resolved{p, c, e.one_to_one});
      roles_[p].push_back(Role{r, true, c});
      roles_[c].push_back(Role{r, false, p});
    }

    // Objects of each event sorted by (type, index), with one range per type.
    for (const auto& e : log.events()) {
      std::vector<ObjectIndex> objs = e.objects;
      std::stable_sort(objs.begin(), objs.end(),
                       [&](ObjectIndex a, ObjectIndex b) { return log.type_of(a) < log.type_of(b); });
      const auto base = static_cast<std::uint32_t>(grouped_.size());
      range_offsets_.push_back(static_cast<std::uint32_t>(ranges_.size()));
      for (std::size_t k = 0; k < objs.size(); ++k) {
        const TypeIndex t = log.type_of(objs[k]);
        if (k == 0 || t != log.type_of(objs[k - 1])) {
          ranges_.push_back(TypeRange{t, base + static_cast<std::uint32_t>(k), 0});
        }
        ranges_.back().end = base + static_cast<std::uint32_t>(k) + 1;
        grouped_.push_back(objs[k]);
      }
    }
    range_offsets_.push_back(static_cast<std::uint32_t>(ranges_.size()));
  }

  const EventLog& log() const { return *log_; }
  const std::vector<SchemaEntry>& relationships() const { return relationships_; }

  ReconstructionResult run(const ReferenceAssignment& assignment, ReconstructOptions options = {}) const {
    check_assignment(assignment);
    Run state(*this, options.record_history);
    for (const auto& e : log_->events()) state.apply(e, assignment.choice[e.activity]);
    return std::move(state).finish();
  }

 private:
  struct Resolved {
    TypeIndex parent;
    TypeIndex child;
    bool one_to_one;
  };
  struct Role {
    std::uint32_t relationship;
    bool as_parent;  // the reference type is the parent side
    TypeIndex partner;
  };
  struct TypeRange {
    TypeIndex type;
    std::uint32_t begin;
    std::uint32_t end;
  };
  struct Span {
    const ObjectIndex* first = nullptr;
    std::size_t size = 0;
    const ObjectIndex* begin() const { return first; }
    const ObjectIndex* end() const { return first + size; }
  };

  static constexpr ObjectIndex kNone = std::numeric_limits<ObjectIndex>::max();

  Span objects_of(std::size_t position, TypeIndex t) const {
    for (std::uint32_t i = range_offsets_[position]; i < range_offsets_[position + 1]; ++i) {
      if (ranges_[i].type == t) return Span{grouped_.data() + ranges_[i].begin, ranges_[i].end - ranges_[i].begin};
    }
    return {};
  }

  void check_assignment(const ReferenceAssignment& a) const {
    if (a.choice.size() != log_->activities().size()) {
      throw AssignmentError("assignment covers " + std::to_string(a.choice.size()) + " activities, log has " +
                            std::to_string(log_->activities().size()));
    }
    for (const auto& c : a.choice) {
      if (c && *c >= log_->types().size()) throw AssignmentError("assignment names an unknown object type");
    }
  }

  // Mutable link state for one replay.
  class Run {
   public:
    Run(const Reconstructor& rec, bool record)
        : rec_(rec), record_(record) {
      const std::size_t objects = rec.log_->objects().size();
      parent_of_.assign(rec.resolved_.size(), std::vector<ObjectIndex>(objects, kNone));
      children_of_.assign(rec.resolved_.size(), std::vector<std::vector<ObjectIndex>>(objects));
      out_.relationships = rec.relationships_;
      out_.event_count = rec.log_->events().size();
    }

    void apply(const Event& e, const std::optional<TypeIndex>& ref_type) {
      position_ = e.position;
      if (!ref_type) {
        out_.skipped_events.push_back(position_);
        return;
      }
      const Span refs = rec_.objects_of(position_, *ref_type);
      if (refs.size != 1) {
        out_.a3_violations.push_back(position_);
        return;
      }
      ref_ = *refs.begin();
      non_local_ = false;
      conflict_ = false;
      for (const Role& role : rec_.roles_[*ref_type]) {
        const Span partners = rec_.objects_of(position_, role.partner);
        if (partners.size == 0) continue;
        const Resolved& rel = rec_.resolved_[role.relationship];
        if (rel.one_to_one) {
          pair_up(role, partners, e);
        } else if (role.as_parent) {
          replace_children(role.relationship, partners);
        } else {
          set_parent(role, partners, e);
        }
      }
      if (non_local_) out_.a5_violations.push_back(position_);
      if (conflict_) out_.a4_conflicts.push_back(position_);
    }

    ReconstructionResult finish() && { return std::move(out_); }

   private:
    // Rule (b): the listed partners become exactly the reference object's children.
    void replace_children(std::uint32_t rel, Span listed) {
      const std::vector<ObjectIndex> old = children_of_[rel][ref_];
      std::vector<ObjectIndex> added;
      for (ObjectIndex c : old) {
        if (!std::binary_search(listed.begin(), listed.end(), c)) detach(rel, ref_, c, ChangeOrigin::explicit_change);
      }
      for (ObjectIndex c : listed) {
        if (std::binary_search(old.begin(), old.end(), c)) continue;
        added.push_back(c);
      }
      for (ObjectIndex c : added) {
        if (parent_of_[rel][c] != kNone) detach(rel, parent_of_[rel][c], c, ChangeOrigin::implicit_change);
      }
      for (ObjectIndex c : added) attach(rel, ref_, c);
    }

    // Rule (a): the single listed partner becomes the reference object's parent.
    void set_parent(const Role& role, Span listed, const Event& e) {
      if (listed.size > 1) {
        flag_conflict(role, e);
        return;
      }
      const std::uint32_t rel = role.relationship;
      const ObjectIndex p = *listed.begin();
      const ObjectIndex current = parent_of_[rel][ref_];
      if (current == p) return;
      if (current != kNone) detach(rel, current, ref_, ChangeOrigin::implicit_change);
      attach(rel, p, ref_);
    }

    // One-to-one: rule (a) from both sides; each endpoint keeps one partner.
    void pair_up(const Role& role, Span listed, const Event& e) {
      if (listed.size > 1) {
        flag_conflict(role, e);
        return;
      }
      const std::uint32_t rel = role.relationship;
      const ObjectIndex other = *listed.begin();
      const ObjectIndex a = role.as_parent ? ref_ : other;
      const ObjectIndex b = role.as_parent ? other : ref_;
      if (parent_of_[rel][b] == a) return;
      auto partner_of_a = [&]() -> ObjectIndex {
        const auto& kids = children_of_[rel][a];
        return kids.empty() ? kNone : kids.front();
      };
      auto drop_a = [&] {
        if (ObjectIndex k = partner_of_a(); k != kNone) detach(rel, a, k, ChangeOrigin::implicit_change);
      };
      auto drop_b = [&] {
        if (ObjectIndex p = parent_of_[rel][b]; p != kNone) detach(rel, p, b, ChangeOrigin::implicit_change);
      };
      // The reference object's own former partner first.
      if (role.as_parent) {
        drop_a();
        drop_b();
      } else {
        drop_b();
        drop_a();
      }
      attach(rel, a, b);
    }

    void flag_conflict(const Role& role, const Event& e) {
      conflict_ = true;
      const auto& entry = rec_.relationships_[role.relationship];
      out_.diagnostics.push_back(Diagnostic{
          Severity::warning, "one-side-conflict",
          "event " + e.id + " lists several " + rec_.log_->type_name(role.partner) + " objects for relationship " +
              entry.label() + "; relationship left unchanged",
          position_});
    }

    void attach(std::uint32_t rel, ObjectIndex parent, ObjectIndex child) {
      auto& kids = children_of_[rel][parent];
      kids.insert(std::lower_bound(kids.begin(), kids.end(), child), child);
      parent_of_[rel][child] = parent;
      emit(Link{rel, parent, child}, ChangeKind::add, ChangeOrigin::explicit_change);
    }

    void detach(std::uint32_t rel, ObjectIndex parent, ObjectIndex child, ChangeOrigin origin) {
      auto& kids = children_of_[rel][parent];
      kids.erase(std::lower_bound(kids.begin(), kids.end(), child));
      parent_of_[rel][child] = kNone;
      emit(Link{rel, parent, child}, ChangeKind::remove, origin);
    }

    void emit(const Link& link, ChangeKind kind, ChangeOrigin origin) {
      const bool local = link.parent == ref_ || link.child == ref_;
      if (!local) non_local_ = true;
      if (!record_) return;
      out_.modifications.push_back(ModificationRecord{position_, link, kind, origin, local});
      auto& intervals = out_.timeline[link];
      if (kind == ChangeKind::add) {
        intervals.push_back(Interval{position_, std::nullopt});
      } else {
        intervals.back().to = position_;
      }
    }

    const Reconstructor& rec_;
    bool record_;
    ReconstructionResult out_;
    std::vector<std::vector<ObjectIndex>> parent_of_;
    std::vector<std::vector<std::vector<ObjectIndex>>> children_of_;
    std::size_t position_ = 0;
    ObjectIndex ref_ = 0;
    bool non_local_ = false;
    bool conflict_ = false;
  };

  const EventLog* log_;
  std::vector<SchemaEntry> relationships_;
  std::vector<Resolved> resolved_;
  std::vector<std::vector<Role>> roles_;  // per type
  std::vector<ObjectIndex> grouped_;
  std::vector<TypeRange> ranges_;
  std::vector<std::uint32_t> range_offsets_;  // per event, into ranges_
};

inline ReconstructionResult reconstruct(const EventLog& log, const RelationshipSchema& schema,
                                        const ReferenceAssignment& assignment, ReconstructOptions options = {}) {
  return Reconstructor(log, schema).run(assignment, options);
}

/// Links active immediately after the event at `position - 1`; position 0
/// is before the first event.
inline std::vector<Link> links_at(const ReconstructionResult& result, std::size_t position) {
  if (position > result.event_count) {
    throw QueryError("position " + std::to_string(position) + " is outside 0.." + std::to_string(result.event_count));
  }
  std::vector<Link> out;
  if (position == 0) return out;
  for (const auto& [link, intervals] : result.timeline) {
    for (const auto& iv : intervals) {
      if (iv.contains(position - 1)) {
        out.push_back(link);
        break;
      }
    }
  }
  return out;
}

inline std::vector<ModificationRecord> history_of(const ReconstructionResult& result, ObjectIndex object) {
  std::vector<ModificationRecord> out;
  for (const auto& m : result.modifications) {
    if (m.link.parent == object || m.link.child == object) out.push_back(m);
  }
  return out;
}

inline std::vector<ModificationRecord> history_of(const ReconstructionResult& result, const EventLog& log,
                                                  std::string_view object_id) {
  auto o = log.find_object(object_id);
  if (!o) throw QueryError("unknown object " + std::string(object_id));
  return history_of(result, *o);
}

/// Share of processed events whose modifications all involve their
/// reference object; 1 when nothing was processed.
inline Ratio a5_ratio(const ReconstructionResult& result) {
  const std::size_t processed = result.processed_count();
  if (processed == 0) return Ratio::one();
  return Ratio{processed - result.a5_violations.size(), processed};
}

}  // namespace dynrel
