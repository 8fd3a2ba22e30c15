#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dynrel/errors.hpp"
#include "dynrel/timestamp.hpp"

namespace dynrel {

using TypeIndex = std::uint32_t;
using ObjectIndex = std::uint32_t;
using ActivityIndex = std::uint32_t;

using Json = nlohmann::ordered_json;

struct ObjectInstance {
  std::string id;
  TypeIndex type = 0;
  Json attributes = Json::array();  // retained, never interpreted

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

/// Object-to-object annotation from OCEL 2.0 files. Metadata only: analysis
/// works from event-to-object references alone.
struct ObjectRelation {
  ObjectIndex source = 0;
  ObjectIndex target = 0;
  std::string qualifier;

  friend bool operator==(const ObjectRelation&, const ObjectRelation&) = default;
};

struct Event {
  std::string id;
  ActivityIndex activity = 0;
  Timestamp timestamp;
  std::vector<ObjectIndex> objects;     // ascending, no duplicates
  std::vector<std::string> qualifiers;  // parallel to `objects`
  Json attributes = Json::array();
  std::size_t position = 0;           // index in canonical order
  std::size_t document_position = 0;  // index in the source document

  // Document position is provenance, not content.
  friend bool operator==(const Event& a, const Event& b) {
    return a.id == b.id && a.activity == b.activity && a.timestamp == b.timestamp &&
           a.objects == b.objects && a.qualifiers == b.qualifiers &&
           a.attributes == b.attributes && a.position == b.position;
  }
};

enum class Severity { warning, error };

struct Diagnostic {
  Severity severity = Severity::warning;
  std::string code;
  std::string message;
  std::optional<std::size_t> event_position;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Sorts by (timestamp, document position) and renumbers positions 0..n-1.
inline std::vector<Event> canonical_order(std::vector<Event> events) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.document_position < b.document_position;
  });
  for (std::size_t i = 0; i < events.size(); ++i) events[i].position = i;
  return events;
}

/// An object-centric event log. Immutable once built; construct through LogBuilder.
class EventLog {
 public:
  EventLog() = default;

  const std::vector<std::string>& types() const { return types_; }
  const std::vector<ObjectInstance>& objects() const { return objects_; }
  /// Activities in order of first occurrence in the canonical event order.
  const std::vector<std::string>& activities() const { return activities_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<ObjectRelation>& object_relations() const { return object_relations_; }
  /// Activities declared by the document but never used by an event.
  const std::vector<std::string>& unused_activities() const { return unused_activities_; }
  /// Warnings raised while building (duplicate references collapsed).
  const std::vector<Diagnostic>& build_diagnostics() const { return build_diagnostics_; }

  std::optional<TypeIndex> find_type(std::string_view name) const { return find(type_index_, name); }
  std::optional<ObjectIndex> find_object(std::string_view id) const { return find(object_index_, id); }
  std::optional<ActivityIndex> find_activity(std::string_view name) const {
    return find(activity_index_, name);
  }

  TypeIndex type_of(ObjectIndex o) const { return objects_[o].type; }
  const std::string& type_name(TypeIndex t) const { return types_.at(t); }
  const std::string& object_id(ObjectIndex o) const { return objects_.at(o).id; }
  const std::string& activity_name(ActivityIndex a) const { return activities_.at(a); }

  friend bool operator==(const EventLog& a, const EventLog& b) {
    return a.types_ == b.types_ && a.objects_ == b.objects_ && a.activities_ == b.activities_ &&
           a.events_ == b.events_ && a.object_relations_ == b.object_relations_;
  }

 private:
  friend class LogBuilder;

  using Index = std::unordered_map<std::string, std::uint32_t>;

  static std::optional<std::uint32_t> find(const Index& index, std::string_view key) {
    auto it = index.find(std::string(key));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> types_;
  std::vector<ObjectInstance> objects_;
  std::vector<std::string> activities_;
  std::vector<Event> events_;
  std::vector<ObjectRelation> object_relations_;
  std::vector<std::string> unused_activities_;
  std::vector<Diagnostic> build_diagnostics_;
  Index type_index_;
  Index object_index_;
  Index activity_index_;
};

/// Object reference of an event as it appears in a document.
struct ObjectRef {
  std::string object_id;
  std::string qualifier;
};

/// Accumulates a log in document order; `build()` resolves references,
/// collapses duplicates and applies the canonical order.
class LogBuilder {
 public:
  TypeIndex add_type(const std::string& name) {
    if (name.empty()) throw ValidationError("empty object type name", {});
    auto [it, inserted] = log_.type_index_.try_emplace(name, static_cast<TypeIndex>(log_.types_.size()));
    if (inserted) log_.types_.push_back(name);
    return it->second;
  }

  void declare_activity(const std::string& name) {
    if (declared_set_.insert(name).second) declared_.push_back(name);
  }

  ObjectIndex add_object(const std::string& id, const std::string& type, Json attributes = Json::array()) {
    if (id.empty()) throw ValidationError("empty object id", {});
    const TypeIndex t = add_type(type);
    auto [it, inserted] = log_.object_index_.try_emplace(id, static_cast<ObjectIndex>(log_.objects_.size()));
    if (!inserted) {
      duplicate_ids_.push_back(id);
      return it->second;
    }
    log_.objects_.push_back(ObjectInstance{id, t, std::move(attributes)});
    return it->second;
  }

  void add_event(std::string id, std::string activity, Timestamp time, std::vector<ObjectRef> refs,
                 Json attributes = Json::array()) {
    pending_.push_back(Pending{std::move(id), std::move(activity), time, std::move(refs), std::move(attributes)});
  }

  /// Shorthand with empty qualifiers.
  void add_event(std::string id, std::string activity, Timestamp time, const std::vector<std::string>& object_ids) {
    std::vector<ObjectRef> refs;
    refs.reserve(object_ids.size());
    for (const auto& o : object_ids) refs.push_back(ObjectRef{o, {}});
    add_event(std::move(id), std::move(activity), time, std::move(refs));
  }

  void add_event(std::string id, std::string activity, Timestamp time, std::initializer_list<const char*> object_ids) {
    add_event(std::move(id), std::move(activity), time, std::vector<std::string>(object_ids.begin(), object_ids.end()));
  }

  void add_object_relation(std::string source, std::string target, std::string qualifier) {
    pending_relations_.push_back({std::move(source), std::move(target), std::move(qualifier)});
  }

  EventLog build() && {
    std::vector<std::string> dangling;
    std::unordered_set<std::string> dangling_seen;
    auto note_dangling = [&](const std::string& id) {
      if (dangling_seen.insert(id).second) dangling.push_back(id);
    };

    if (!duplicate_ids_.empty()) throw ValidationError("duplicate object ids", duplicate_ids_);

    std::unordered_set<std::string> event_ids;
    std::vector<std::string> duplicate_events;
    std::vector<Event> events;
    std::vector<std::string> activity_of;
    std::vector<std::vector<std::string>> duplicates_of;
    events.reserve(pending_.size());
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      Pending& p = pending_[i];
      if (!event_ids.insert(p.id).second) duplicate_events.push_back(p.id);
      Event e;
      e.id = std::move(p.id);
      e.timestamp = p.time;
      e.attributes = std::move(p.attributes);
      e.document_position = i;
      activity_of.push_back(std::move(p.activity));

      std::vector<std::pair<ObjectIndex, std::string>> resolved;
      std::vector<std::string> duplicates;
      for (auto& ref : p.refs) {
        auto o = log_.find_object(ref.object_id);
        if (!o) {
          note_dangling(ref.object_id);
          continue;
        }
        resolved.emplace_back(*o, std::move(ref.qualifier));
      }
      std::stable_sort(resolved.begin(), resolved.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t k = 0; k < resolved.size(); ++k) {
        if (k > 0 && resolved[k].first == resolved[k - 1].first) {
          duplicates.push_back(log_.objects_[resolved[k].first].id);
          continue;
        }
        e.objects.push_back(resolved[k].first);
        e.qualifiers.push_back(std::move(resolved[k].second));
      }
      duplicates_of.push_back(std::move(duplicates));
      events.push_back(std::move(e));
    }

    std::vector<ObjectRelation> relations;
    for (auto& r : pending_relations_) {
      auto s = log_.find_object(r.source);
      auto t = log_.find_object(r.target);
      if (!s) note_dangling(r.source);
      if (!t) note_dangling(r.target);
      if (s && t) relations.push_back(ObjectRelation{*s, *t, std::move(r.qualifier)});
    }

    if (!dangling.empty()) throw ValidationError("dangling object references", dangling);
    if (!duplicate_events.empty()) throw ValidationError("duplicate event ids", duplicate_events);

    events = canonical_order(std::move(events));

    for (auto& e : events) {
      const std::size_t slot = e.document_position;
      const std::string& name = activity_of[slot];
      auto [it, inserted] =
          log_.activity_index_.try_emplace(name, static_cast<ActivityIndex>(log_.activities_.size()));
      if (inserted) log_.activities_.push_back(name);
      e.activity = it->second;
      for (const auto& dup : duplicates_of[slot]) {
        log_.build_diagnostics_.push_back(Diagnostic{Severity::warning, "duplicate-object",
                                                     "event " + e.id + " lists object " + dup +
                                                         " more than once; treated as a set",
                                                     e.position});
      }
    }
    for (const auto& a : declared_) {
      if (!log_.activity_index_.contains(a)) log_.unused_activities_.push_back(a);
    }

    log_.events_ = std::move(events);
    log_.object_relations_ = std::move(relations);
    return std::move(log_);
  }

 private:
  struct Pending {
    std::string id;
    std::string activity;
    Timestamp time;
    std::vector<ObjectRef> refs;
    Json attributes;
  };
  struct PendingRelation {
    std::string source;
    std::string target;
    std::string qualifier;
  };

  EventLog log_;
  std::vector<Pending> pending_;
  std::vector<PendingRelation> pending_relations_;
  std::vector<std::string> declared_;
  std::unordered_set<std::string> declared_set_;
  std::vector<std::string> duplicate_ids_;
};

/// Warnings and errors for a log. No errors means every downstream
/// operation accepts the log.
inline std::vector<Diagnostic> validate(const EventLog& log) {
  std::vector<Diagnostic> out = log.build_diagnostics();
  if (log.events().empty()) {
    out.push_back(Diagnostic{Severity::warning, "empty-log", "empty log", std::nullopt});
  }
  for (const auto& e : log.events()) {
    if (e.objects.empty()) {
      out.push_back(Diagnostic{Severity::warning, "empty-object-set",
                               "event " + e.id + " references no objects", e.position});
    }
    for (ObjectIndex o : e.objects) {
      if (o >= log.objects().size()) {
        out.push_back(Diagnostic{Severity::error, "dangling-reference",
                                 "event " + e.id + " references an unknown object", e.position});
      }
    }
    if (e.activity >= log.activities().size()) {
      out.push_back(Diagnostic{Severity::error, "unknown-activity",
                               "event " + e.id + " has an unknown activity", e.position});
    }
  }
  for (const auto& a : log.unused_activities()) {
    out.push_back(Diagnostic{Severity::warning, "unused-activity",
                             "activity " + a + " is declared but never used", std::nullopt});
  }
  return out;
}

inline bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

}  // namespace dynrel
