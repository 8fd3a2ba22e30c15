#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dynrel/errors.hpp"
#include "dynrel/linkrec.hpp"
#include "dynrel/ocel.hpp"
#include "dynrel/schema.hpp"
#include "dynrel/synth.hpp"

namespace dynrel {

class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("cannot write " + path);
}

namespace detail {

template <typename E>
Json parse_json(std::string_view text, const char* what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw E(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

// ---- relationship schema file -------------------------------------------
// [{"typeA": "order", "typeB": "item", "cardinality": "many-to-one", "manySide": "item"}, ...]

inline RelationshipSchema schema_from_json(const Json& doc) {
  if (!doc.is_array()) throw SchemaError("schema file must be a JSON array");
  RelationshipSchema schema;
  for (const auto& node : doc) {
    if (!node.is_object()) throw SchemaError("schema entries must be objects");
    auto str = [&](const char* key) -> std::string {
      auto it = node.find(key);
      if (it == node.end() || !it->is_string()) throw SchemaError(std::string("schema entry needs string \"") + key + "\"");
      return it->get<std::string>();
    };
    const std::string a = str("typeA");
    const std::string b = str("typeB");
    const std::string card = str("cardinality");
    Provenance prov = Provenance::user_supplied;
    if (node.value("provenance", std::string{}) == "inferred") prov = Provenance::inferred;
    if (card == "one-to-one") {
      if (node.contains("manySide")) throw SchemaError("one-to-one entry " + a + "/" + b + " must not name a manySide");
      schema.add_one_to_one(a, b, prov);
    } else if (card == "many-to-one") {
      const std::string many = str("manySide");
      if (many != a && many != b) throw SchemaError("manySide " + many + " is neither " + a + " nor " + b);
      schema.add_many_to_one(many == a ? b : a, many, prov);
    } else {
      throw SchemaError("unsupported cardinality \"" + card + "\" (expected one-to-one or many-to-one)");
    }
  }
  return schema;
}

inline RelationshipSchema parse_schema(std::string_view text) {
  return schema_from_json(detail::parse_json<SchemaError>(text, "schema file"));
}

inline Json schema_to_json(const RelationshipSchema& schema) {
  Json out = Json::array();
  for (const auto& e : schema.entries()) {
    Json node;
    if (e.one_to_one) {
      node = Json{{"typeA", e.parent}, {"typeB", e.child}, {"cardinality", "one-to-one"}};
    } else {
      node = Json{{"typeA", e.parent}, {"typeB", e.child}, {"cardinality", "many-to-one"}, {"manySide", e.child}};
    }
    node["provenance"] = e.provenance == Provenance::inferred ? "inferred" : "user_supplied";
    out.push_back(std::move(node));
  }
  return out;
}

// ---- reference assignment file -------------------------------------------
// {"create order": "order", "wrap item": "item"}

inline std::map<std::string, std::string> assignment_from_json(const Json& doc) {
  if (!doc.is_object()) throw AssignmentError("assignment file must be a JSON object");
  std::map<std::string, std::string> out;
  for (const auto& [activity, type] : doc.items()) {
    if (!type.is_string()) throw AssignmentError("assignment for " + activity + " must be a type name");
    out[activity] = type.get<std::string>();
  }
  return out;
}

inline std::map<std::string, std::string> parse_assignment(std::string_view text) {
  return assignment_from_json(detail::parse_json<AssignmentError>(text, "assignment file"));
}

inline Json assignment_to_json(const std::map<std::string, std::string>& names) {
  Json out = Json::object();
  for (const auto& [a, t] : names) out[a] = t;
  return out;
}

// ---- timeline export and modification trace ------------------------------

inline Json intervals_to_json(const std::vector<Interval>& intervals) {
  Json out = Json::array();
  for (const auto& iv : intervals) {
    out.push_back(Json{{"fromEvent", iv.from}, {"toEvent", iv.to ? Json(*iv.to) : Json(nullptr)}});
  }
  return out;
}

inline std::vector<Interval> intervals_from_json(const Json& doc) {
  std::vector<Interval> out;
  for (const auto& node : doc) {
    Interval iv{node.at("fromEvent").get<std::size_t>(), std::nullopt};
    if (!node.at("toEvent").is_null()) iv.to = node.at("toEvent").get<std::size_t>();
    out.push_back(iv);
  }
  return out;
}

inline Json timeline_to_json(const NamedTimeline& timeline) {
  Json out = Json::array();
  for (const auto& [link, intervals] : timeline) {
    out.push_back(Json{{"relationship", link.relationship},
                       {"parent", link.parent},
                       {"child", link.child},
                       {"intervals", intervals_to_json(intervals)}});
  }
  return out;
}

inline NamedTimeline timeline_from_json(const Json& doc) {
  NamedTimeline out;
  for (const auto& node : doc) {
    out[NamedLink{node.at("relationship").get<std::string>(), node.at("parent").get<std::string>(),
                  node.at("child").get<std::string>()}] = intervals_from_json(node.at("intervals"));
  }
  return out;
}

inline Json timeline_to_json(const EventLog& log, const ReconstructionResult& result) {
  return timeline_to_json(named_timeline(log, result));
}

inline Json link_to_json(const EventLog& log, const ReconstructionResult& result, const Link& link) {
  return Json{{"relationship", result.relationships.at(link.relationship).label()},
              {"parent", log.object_id(link.parent)},
              {"child", log.object_id(link.child)}};
}

inline Json modification_to_json(const EventLog& log, const ReconstructionResult& result,
                                 const ModificationRecord& m) {
  Json out{{"event", m.event_position}, {"eventId", log.events().at(m.event_position).id}};
  const Json link = link_to_json(log, result, m.link);
  for (const auto& [k, v] : link.items()) out[k] = v;
  out["kind"] = to_string(m.kind);
  out["origin"] = to_string(m.origin);
  out["local"] = m.local;
  return out;
}

/// JSON lines, one modification record per line.
inline std::string modification_trace(const EventLog& log, const ReconstructionResult& result) {
  std::string out;
  for (const auto& m : result.modifications) {
    out += modification_to_json(log, result, m).dump();
    out += '\n';
  }
  return out;
}

// ---- generator config and ground-truth sidecar ---------------------------

inline const char* to_string(TouchAction a) {
  switch (a) {
    case TouchAction::set_children: return "set_children";
    case TouchAction::set_parent: return "set_parent";
    case TouchAction::none: return "none";
  }
  return "none";
}

inline GeneratorConfig generator_config_from_json(const Json& doc) {
  try {
    GeneratorConfig cfg;
    cfg.types = doc.at("types").get<std::vector<std::string>>();
    cfg.schema = schema_from_json(doc.at("schema"));
    for (const auto& a : doc.at("activities")) {
      ActivitySpec spec{a.at("name").get<std::string>(), a.at("referenceType").get<std::string>(), {}};
      for (const auto& t : a.value("touches", Json::array())) {
        const std::string action = t.at("action").get<std::string>();
        TouchAction act = TouchAction::none;
        if (action == "set_children") {
          act = TouchAction::set_children;
        } else if (action == "set_parent") {
          act = TouchAction::set_parent;
        } else if (action != "none") {
          throw ConfigError("unknown touch action " + action);
        }
        spec.touches.push_back(Touch{t.at("partner").get<std::string>(), act});
      }
      cfg.activities.push_back(std::move(spec));
    }
    for (const auto& [t, n] : doc.at("objectCounts").items()) cfg.object_counts[t] = n.get<std::size_t>();
    cfg.event_count = doc.at("eventCount").get<std::size_t>();
    cfg.locality_respecting = doc.value("localityRespecting", true);
    cfg.violation_rate = doc.value("violationRate", 0.25);
    cfg.coverage_forcing = doc.value("coverageForcing", false);
    cfg.max_children = doc.value("maxChildren", std::size_t{4});
    cfg.seed = doc.value("seed", std::uint64_t{0});
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  } catch (const SchemaError& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
}

inline GeneratorConfig parse_generator_config(std::string_view text) {
  return generator_config_from_json(detail::parse_json<ConfigError>(text, "generator config"));
}

inline Json generator_config_to_json(const GeneratorConfig& cfg) {
  Json activities = Json::array();
  for (const auto& a : cfg.activities) {
    Json touches = Json::array();
    for (const auto& t : a.touches) touches.push_back(Json{{"partner", t.partner}, {"action", to_string(t.action)}});
    activities.push_back(Json{{"name", a.name}, {"referenceType", a.reference_type}, {"touches", touches}});
  }
  Json counts = Json::object();
  for (const auto& t : cfg.types) counts[t] = cfg.object_counts.at(t);
  return Json{{"types", cfg.types},
              {"schema", schema_to_json(cfg.schema)},
              {"activities", activities},
              {"objectCounts", counts},
              {"eventCount", cfg.event_count},
              {"localityRespecting", cfg.locality_respecting},
              {"violationRate", cfg.violation_rate},
              {"coverageForcing", cfg.coverage_forcing},
              {"maxChildren", cfg.max_children},
              {"seed", cfg.seed}};
}

inline Json ground_truth_to_json(const GroundTruth& truth) {
  return Json{{"schema", schema_to_json(truth.schema)},
              {"assignment", assignment_to_json(truth.assignment)},
              {"plantedA5Violations", truth.planted_a5_violations},
              {"timeline", timeline_to_json(truth.timeline)}};
}

inline GroundTruth ground_truth_from_json(const Json& doc) {
  GroundTruth truth;
  truth.schema = schema_from_json(doc.at("schema"));
  truth.assignment = assignment_from_json(doc.at("assignment"));
  truth.planted_a5_violations = doc.at("plantedA5Violations").get<std::vector<std::size_t>>();
  truth.timeline = timeline_from_json(doc.at("timeline"));
  return truth;
}

}  // namespace dynrel
