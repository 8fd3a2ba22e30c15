#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynrel/cardinality.hpp"
#include "dynrel/errors.hpp"
#include "dynrel/ocel.hpp"

namespace dynrel {

enum class Provenance { user_supplied, inferred };

/// One relationship between two distinct types. For many-to-one entries
/// `parent` is the one side and `child` the many side; one-to-one entries
/// keep the two types in declaration order (typeA, typeB).
struct SchemaEntry {
  std::string parent;
  std::string child;
  bool one_to_one = false;
  Provenance provenance = Provenance::user_supplied;

  bool involves(const std::string& type) const { return parent == type || child == type; }
  const std::string& partner_of(const std::string& type) const { return parent == type ? child : parent; }

  /// `order->item` for many-to-one, `order<->invoice` for one-to-one.
  std::string label() const { return parent + (one_to_one ? "<->" : "->") + child; }

  friend bool operator==(const SchemaEntry&, const SchemaEntry&) = default;
};

/// Relationship domain knowledge: at most one entry per unordered pair of
/// distinct types, only one-to-one and many-to-one.
class RelationshipSchema {
 public:
  RelationshipSchema() = default;

  void add(SchemaEntry entry) {
    if (entry.parent.empty() || entry.child.empty()) throw SchemaError("relationship with an empty type name");
    if (entry.parent == entry.child) {
      throw SchemaError("relationship " + entry.label() + " must relate two distinct types");
    }
    if (find(entry.parent, entry.child)) {
      throw SchemaError("duplicate relationship between " + entry.parent + " and " + entry.child);
    }
    entries_.push_back(std::move(entry));
  }

  void add_many_to_one(std::string one_side, std::string many_side,
                       Provenance provenance = Provenance::user_supplied) {
    add(SchemaEntry{std::move(one_side), std::move(many_side), false, provenance});
  }

  void add_one_to_one(std::string a, std::string b, Provenance provenance = Provenance::user_supplied) {
    add(SchemaEntry{std::move(a), std::move(b), true, provenance});
  }

  const std::vector<SchemaEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::optional<std::size_t> find(const std::string& a, const std::string& b) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if ((e.parent == a && e.child == b) || (e.parent == b && e.child == a)) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const RelationshipSchema&, const RelationshipSchema&) = default;

 private:
  std::vector<SchemaEntry> entries_;
};

/// Throws SchemaError if an entry names a type the log does not have.
inline void validate_schema(const EventLog& log, const RelationshipSchema& schema) {
  for (const auto& e : schema.entries()) {
    for (const auto* t : {&e.parent, &e.child}) {
      if (!log.find_type(*t)) throw SchemaError("relationship " + e.label() + " names unknown type " + *t);
    }
  }
}

struct SchemaInference {
  /// Minimum number of co-occurring events before a pair becomes an entry.
  std::size_t min_support = 1;
};

struct SchemaBuildResult {
  RelationshipSchema schema;
  std::vector<Diagnostic> diagnostics;
};

/// Returns the user schema if given (validated), otherwise one entry per
/// pair classified one-to-one or many-to-one from same-event co-occurrence.
inline SchemaBuildResult build_schema(const EventLog& log, const std::optional<RelationshipSchema>& user_schema,
                                      SchemaInference options = {}) {
  SchemaBuildResult out;
  if (user_schema) {
    validate_schema(log, *user_schema);
    for (auto e : user_schema->entries()) {
      e.provenance = Provenance::user_supplied;
      out.schema.add(std::move(e));
    }
    return out;
  }

  const CooccurrenceStats stats = compute_stats(log);
  const auto n = static_cast<TypeIndex>(log.types().size());
  for (TypeIndex a = 0; a < n; ++a) {
    for (TypeIndex b = a + 1; b < n; ++b) {
      const CardinalityClass c = classify(stats, a, b, CountingMode::dynamic_links);
      if (c.tag == CardinalityTag::none) continue;
      const std::string& na = log.type_name(a);
      const std::string& nb = log.type_name(b);
      if (stats.support(a, b) < options.min_support) {
        out.diagnostics.push_back(Diagnostic{Severity::warning, "low-support",
                                             "pair " + na + "/" + nb + " co-occurs in only " +
                                                 std::to_string(stats.support(a, b)) + " event(s); not inferred",
                                             std::nullopt});
        continue;
      }
      switch (c.tag) {
        case CardinalityTag::one_to_one:
          out.schema.add_one_to_one(na, nb, Provenance::inferred);
          break;
        case CardinalityTag::many_to_one: {
          const bool a_is_many = *c.many_side == a;
          out.schema.add_many_to_one(a_is_many ? nb : na, a_is_many ? na : nb, Provenance::inferred);
          break;
        }
        case CardinalityTag::many_to_many:
          out.diagnostics.push_back(Diagnostic{Severity::warning, "many-to-many",
                                               "pair " + na + "/" + nb +
                                                   " is many-to-many within events; reify it upstream",
                                               std::nullopt});
          break;
        case CardinalityTag::none: break;
      }
    }
  }
  return out;
}

}  // namespace dynrel
