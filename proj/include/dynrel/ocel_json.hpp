#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "dynrel/errors.hpp"
#include "dynrel/ocel.hpp"
#include "dynrel/timestamp.hpp"

namespace dynrel {

enum class OcelFormat { automatic, ocel1_json, ocel2_json };

namespace detail {

inline const Json& require(const Json& node, const char* key, const std::string& where) {
  auto it = node.find(key);
  if (it == node.end()) throw FormatError(where + ": missing key \"" + key + "\"");
  return *it;
}

inline std::string require_string(const Json& node, const char* key, const std::string& where) {
  const Json& v = require(node, key, where);
  if (!v.is_string()) throw FormatError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

inline Timestamp require_time(const Json& node, const char* key, const std::string& where) {
  const std::string text = require_string(node, key, where);
  auto t = parse_timestamp(text);
  if (!t) throw FormatError(where + ": invalid timestamp \"" + text + "\"");
  return *t;
}

// OCEL 1.0 value maps become OCEL 2.0 style [{name, value}] lists.
inline Json attributes_from_map(const Json& node, const char* key) {
  Json out = Json::array();
  auto it = node.find(key);
  if (it == node.end() || !it->is_object()) return out;
  for (const auto& [name, value] : it->items()) out.push_back(Json{{"name", name}, {"value", value}});
  return out;
}

inline Json attributes_from_list(const Json& node) {
  auto it = node.find("attributes");
  if (it == node.end() || it->is_null()) return Json::array();
  return *it;
}

inline EventLog parse_ocel1(const Json& doc) {
  LogBuilder b;
  if (auto g = doc.find("ocel:global-log"); g != doc.end() && g->is_object()) {
    if (auto ts = g->find("ocel:object-types"); ts != g->end() && ts->is_array()) {
      for (const auto& t : *ts) {
        if (t.is_string()) b.add_type(t.get<std::string>());
      }
    }
  }
  if (auto objs = doc.find("ocel:objects"); objs != doc.end()) {
    if (!objs->is_object()) throw FormatError("\"ocel:objects\" must be an object");
    for (const auto& [id, obj] : objs->items()) {
      const std::string where = "object " + id;
      b.add_object(id, require_string(obj, "ocel:type", where), attributes_from_map(obj, "ocel:ovmap"));
    }
  }
  const Json& events = doc.at("ocel:events");
  if (!events.is_object()) throw FormatError("\"ocel:events\" must be an object");
  for (const auto& [id, ev] : events.items()) {
    const std::string where = "event " + id;
    const Json& omap = require(ev, "ocel:omap", where);
    if (!omap.is_array()) throw FormatError(where + ": \"ocel:omap\" must be an array");
    std::vector<ObjectRef> refs;
    for (const auto& o : omap) {
      if (!o.is_string()) throw FormatError(where + ": object references must be strings");
      refs.push_back(ObjectRef{o.get<std::string>(), {}});
    }
    b.add_event(id, require_string(ev, "ocel:activity", where), require_time(ev, "ocel:timestamp", where),
                std::move(refs), attributes_from_map(ev, "ocel:vmap"));
  }
  return std::move(b).build();
}

inline EventLog parse_ocel2(const Json& doc) {
  LogBuilder b;
  if (auto ts = doc.find("objectTypes"); ts != doc.end() && ts->is_array()) {
    for (const auto& t : *ts) b.add_type(require_string(t, "name", "objectTypes entry"));
  }
  if (auto ts = doc.find("eventTypes"); ts != doc.end() && ts->is_array()) {
    for (const auto& t : *ts) b.declare_activity(require_string(t, "name", "eventTypes entry"));
  }
  if (auto objs = doc.find("objects"); objs != doc.end()) {
    if (!objs->is_array()) throw FormatError("\"objects\" must be an array");
    for (const auto& obj : *objs) {
      const std::string id = require_string(obj, "id", "object");
      b.add_object(id, require_string(obj, "type", "object " + id), attributes_from_list(obj));
      if (auto rels = obj.find("relationships"); rels != obj.end() && rels->is_array()) {
        for (const auto& r : *rels) {
          b.add_object_relation(id, require_string(r, "objectId", "object " + id),
                                r.value("qualifier", std::string{}));
        }
      }
    }
  }
  const Json& events = doc.at("events");
  for (const auto& ev : events) {
    const std::string id = require_string(ev, "id", "event");
    const std::string where = "event " + id;
    std::vector<ObjectRef> refs;
    if (auto rels = ev.find("relationships"); rels != ev.end() && !rels->is_null()) {
      if (!rels->is_array()) throw FormatError(where + ": \"relationships\" must be an array");
      for (const auto& r : *rels) {
        std::string q;
        if (auto qi = r.find("qualifier"); qi != r.end() && qi->is_string()) q = qi->get<std::string>();
        refs.push_back(ObjectRef{require_string(r, "objectId", where), std::move(q)});
      }
    }
    b.add_event(id, require_string(ev, "type", where), require_time(ev, "time", where), std::move(refs),
                attributes_from_list(ev));
  }
  return std::move(b).build();
}

}  // namespace detail

/// Detects the dialect of a parsed document; throws FormatError if neither.
inline OcelFormat detect_format(const Json& doc) {
  if (doc.is_object() && doc.contains("ocel:events")) return OcelFormat::ocel1_json;
  if (doc.is_object() && doc.contains("events") && doc["events"].is_array()) return OcelFormat::ocel2_json;
  throw FormatError("unknown log format: expected \"ocel:events\" (OCEL 1.0) or an \"events\" array (OCEL 2.0)");
}

/// Parses an OCEL 1.0 or OCEL 2.0 JSON document into a validated,
/// canonically ordered log.
inline EventLog parse_ocel(std::string_view bytes, OcelFormat hint = OcelFormat::automatic) {
  Json doc;
  try {
    doc = Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  const OcelFormat format = detect_format(doc);
  if (hint != OcelFormat::automatic && hint != format) {
    throw FormatError("document does not match the requested format");
  }
  try {
    return format == OcelFormat::ocel1_json ? detail::parse_ocel1(doc) : detail::parse_ocel2(doc);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(e.what());
  }
}

/// Canonical OCEL 2.0 JSON rendering: events in canonical order, objects
/// and types in log order.
inline Json to_ocel2_json(const EventLog& log) {
  Json doc;
  Json types = Json::array();
  for (const auto& t : log.types()) types.push_back(Json{{"name", t}, {"attributes", Json::array()}});
  Json event_types = Json::array();
  for (const auto& a : log.activities()) event_types.push_back(Json{{"name", a}, {"attributes", Json::array()}});
  for (const auto& a : log.unused_activities()) {
    event_types.push_back(Json{{"name", a}, {"attributes", Json::array()}});
  }

  std::vector<Json> relations_of(log.objects().size(), Json::array());
  for (const auto& r : log.object_relations()) {
    relations_of[r.source].push_back(Json{{"objectId", log.object_id(r.target)}, {"qualifier", r.qualifier}});
  }
  Json objects = Json::array();
  for (std::size_t i = 0; i < log.objects().size(); ++i) {
    const auto& o = log.objects()[i];
    Json node{{"id", o.id}, {"type", log.type_name(o.type)}, {"attributes", o.attributes}};
    if (!relations_of[i].empty()) node["relationships"] = relations_of[i];
    objects.push_back(std::move(node));
  }

  Json events = Json::array();
  for (const auto& e : log.events()) {
    Json rels = Json::array();
    for (std::size_t k = 0; k < e.objects.size(); ++k) {
      rels.push_back(Json{{"objectId", log.object_id(e.objects[k])}, {"qualifier", e.qualifiers[k]}});
    }
    events.push_back(Json{{"id", e.id},
                          {"type", log.activity_name(e.activity)},
                          {"time", format_timestamp(e.timestamp)},
                          {"attributes", e.attributes},
                          {"relationships", std::move(rels)}});
  }
  doc["objectTypes"] = std::move(types);
  doc["eventTypes"] = std::move(event_types);
  doc["objects"] = std::move(objects);
  doc["events"] = std::move(events);
  return doc;
}

}  // namespace dynrel
