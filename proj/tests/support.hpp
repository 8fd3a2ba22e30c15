#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dynrel/dynrel.hpp"

namespace dynrel::testing {

inline std::string fixture(const std::string& name) { return std::string(DYNREL_FIXTURES) + "/" + name; }

inline Timestamp minute(int m) { return Timestamp::from_seconds(1704099600 + 60 * m); }

/// Order/item log with snapshot semantics (three events).
inline EventLog snapshot_log() {
  LogBuilder b;
  b.add_object("o1", "order");
  for (auto i : {"i1", "i2", "i3"}) b.add_object(i, "item");
  b.add_event("e1", "create order", minute(0), {"o1", "i1", "i2"});
  b.add_event("e2", "reduce order", minute(1), {"o1", "i1"});
  b.add_event("e3", "add to order", minute(2), {"o1", "i1", "i3"});
  return std::move(b).build();
}

/// Orders with items and handling employees (eight events).
inline EventLog merged_log() {
  LogBuilder b;
  b.add_object("o1", "order");
  b.add_object("o2", "order");
  for (auto i : {"i1", "i2", "i3", "i4", "i5"}) b.add_object(i, "item");
  b.add_object("p1", "employee");
  b.add_object("p2", "employee");
  b.add_event("e1", "create order", minute(0), {"o1", "i1", "i2", "p1"});
  b.add_event("e2", "reduce order", minute(1), {"o1", "i1"});
  b.add_event("e3", "add to order", minute(2), {"o1", "i1", "i3"});
  b.add_event("e4", "create order", minute(3), {"o2", "i4", "i5", "p1"});
  b.add_event("e5", "wrap item", minute(4), {"i4"});
  b.add_event("e6", "change order manager", minute(5), {"o1", "p2"});
  b.add_event("e7", "ship order", minute(6), {"o1", "i1", "i3"});
  b.add_event("e8", "ship order", minute(7), {"o2", "i4", "i5"});
  return std::move(b).build();
}

/// Teams and employees with one non-local re-parenting (four events).
inline EventLog teams_log() {
  LogBuilder b;
  for (auto t : {"t1", "t2", "t3"}) b.add_object(t, "team");
  for (auto p : {"p1", "p2", "p3", "p4"}) b.add_object(p, "employee");
  b.add_event("e1", "create team", minute(0), {"t1", "p1", "p2"});
  b.add_event("e2", "create team", minute(1), {"t2", "p3", "p4"});
  b.add_event("e3", "add employee to team", minute(2), {"t2", "p2"});
  b.add_event("e4", "create team", minute(3), {"t3", "p1", "p3"});
  return std::move(b).build();
}

inline RelationshipSchema snapshot_schema() {
  RelationshipSchema s;
  s.add_many_to_one("order", "item");
  return s;
}

inline RelationshipSchema merged_schema() {
  RelationshipSchema s;
  s.add_many_to_one("order", "item");
  s.add_many_to_one("employee", "order");
  return s;
}

inline RelationshipSchema teams_schema() {
  RelationshipSchema s;
  s.add_many_to_one("team", "employee");
  return s;
}

inline ReferenceAssignment assign(const EventLog& log, const std::map<std::string, std::string>& names) {
  return resolve_assignment(log, names);
}

inline ReferenceAssignment snapshot_assignment(const EventLog& log) {
  return assign(log, {{"create order", "order"}, {"reduce order", "order"}, {"add to order", "order"}});
}

inline ReferenceAssignment merged_assignment(const EventLog& log) {
  return assign(log, {{"create order", "order"},
                      {"reduce order", "order"},
                      {"add to order", "order"},
                      {"wrap item", "item"},
                      {"change order manager", "order"},
                      {"ship order", "order"}});
}

inline ReferenceAssignment teams_assignment(const EventLog& log) {
  return assign(log, {{"create team", "team"}, {"add employee to team", "employee"}});
}

using NameLink = std::tuple<std::string, std::string, std::string>;  // label, parent, child

inline std::set<NameLink> names(const EventLog& log, const ReconstructionResult& r, const std::vector<Link>& links) {
  std::set<NameLink> out;
  for (const auto& l : links) {
    out.emplace(r.relationships[l.relationship].label(), log.object_id(l.parent), log.object_id(l.child));
  }
  return out;
}

/// Pairs (parent, child) of the links active after the first `n` events.
inline std::set<std::pair<std::string, std::string>> pairs_at(const EventLog& log, const ReconstructionResult& r,
                                                              std::size_t n) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& l : links_at(r, n)) out.emplace(log.object_id(l.parent), log.object_id(l.child));
  return out;
}

// ---------------------------------------------------------------------------
// Independent replay oracle: the link rules applied to a plain set of
// (relationship, parent, child) triples, with no incremental indices.

struct OracleReplay {
  std::vector<std::set<std::tuple<std::size_t, ObjectIndex, ObjectIndex>>> after;  // per event
  std::vector<std::size_t> non_local;
  std::vector<std::size_t> a3;
  std::vector<std::size_t> skipped;
};

inline OracleReplay oracle_replay(const EventLog& log, const RelationshipSchema& schema,
                                  const ReferenceAssignment& assignment) {
  OracleReplay out;
  std::set<std::tuple<std::size_t, ObjectIndex, ObjectIndex>> active;
  const auto& entries = schema.entries();
  for (const auto& e : log.events()) {
    const auto& choice = assignment.choice[e.activity];
    auto of_type = [&](const std::string& type) {
      std::vector<ObjectIndex> v;
      for (ObjectIndex o : e.objects) {
        if (log.type_name(log.type_of(o)) == type) v.push_back(o);
      }
      return v;
    };
    if (!choice) {
      out.skipped.push_back(e.position);
      out.after.push_back(active);
      continue;
    }
    const std::string ref_type = log.type_name(*choice);
    const auto refs = of_type(ref_type);
    if (refs.size() != 1) {
      out.a3.push_back(e.position);
      out.after.push_back(active);
      continue;
    }
    const ObjectIndex r = refs[0];
    bool non_local = false;
    auto erase = [&](std::size_t k, ObjectIndex p, ObjectIndex c) {
      active.erase({k, p, c});
      if (p != r && c != r) non_local = true;
    };
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const SchemaEntry& rel = entries[k];
      if (!rel.involves(ref_type)) continue;
      const auto listed = of_type(rel.partner_of(ref_type));
      if (listed.empty()) continue;
      if (!rel.one_to_one && rel.parent == ref_type) {
        const std::set<ObjectIndex> wanted(listed.begin(), listed.end());
        for (auto it = active.begin(); it != active.end();) {
          auto [kk, p, c] = *it++;
          if (kk == k && p == r && !wanted.contains(c)) erase(k, p, c);
        }
        for (ObjectIndex c : listed) {
          if (active.contains({k, r, c})) continue;
          for (auto it = active.begin(); it != active.end();) {
            auto [kk, p, cc] = *it++;
            if (kk == k && cc == c) erase(k, p, cc);
          }
          active.insert({k, r, c});
        }
      } else {
        if (listed.size() > 1) continue;
        const ObjectIndex o = listed[0];
        const ObjectIndex a = rel.parent == ref_type ? r : o;
        const ObjectIndex b = rel.parent == ref_type ? o : r;
        if (active.contains({k, a, b})) continue;
        for (auto it = active.begin(); it != active.end();) {
          auto [kk, p, c] = *it++;
          if (kk != k) continue;
          if (c == b || (rel.one_to_one && p == a)) erase(k, p, c);
        }
        active.insert({k, a, b});
      }
    }
    if (non_local) out.non_local.push_back(e.position);
    out.after.push_back(active);
  }
  return out;
}

/// Random raw log: arbitrary object sets per event, no generator structure.
inline EventLog random_raw_log(std::mt19937_64& rng, std::size_t types, std::size_t events) {
  static const char* const kTypes[] = {"alpha", "beta", "gamma", "delta", "eps"};
  LogBuilder b;
  std::vector<std::string> ids;
  for (std::size_t t = 0; t < types; ++t) {
    const std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back(std::string(kTypes[t]) + std::to_string(i));
      b.add_object(ids.back(), kTypes[t]);
    }
  }
  for (std::size_t i = 0; i < events; ++i) {
    std::vector<std::string> objs;
    for (const auto& id : ids) {
      if (rng() % 3 == 0) objs.push_back(id);
    }
    b.add_event("e" + std::to_string(i), "act" + std::to_string(rng() % 4), Timestamp::from_seconds(rng() % 50),
                objs);
  }
  return std::move(b).build();
}

inline RelationshipSchema random_schema(std::mt19937_64& rng, const EventLog& log) {
  RelationshipSchema s;
  const auto& types = log.types();
  for (std::size_t a = 0; a < types.size(); ++a) {
    for (std::size_t b = a + 1; b < types.size(); ++b) {
      switch (rng() % 4) {
        case 0: break;
        case 1: s.add_one_to_one(types[a], types[b]); break;
        case 2: s.add_many_to_one(types[a], types[b]); break;
        default: s.add_many_to_one(types[b], types[a]); break;
      }
    }
  }
  return s;
}

inline ReferenceAssignment random_assignment(std::mt19937_64& rng, const EventLog& log) {
  ReferenceAssignment a;
  for (std::size_t i = 0; i < log.activities().size(); ++i) {
    if (rng() % 6 == 0) {
      a.choice.emplace_back(std::nullopt);
    } else {
      a.choice.emplace_back(static_cast<TypeIndex>(rng() % log.types().size()));
    }
  }
  return a;
}

}  // namespace dynrel::testing
