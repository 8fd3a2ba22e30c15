#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dynrel/cardinality.hpp"
#include "dynrel/io.hpp"
#include "dynrel/linkrec.hpp"
#include "dynrel/ocel.hpp"
#include "dynrel/reftype.hpp"
#include "dynrel/schema.hpp"
#include "dynrel/search.hpp"

namespace dynrel {

struct AnalysisOptions {
  std::optional<RelationshipSchema> schema;                   // inferred when absent
  std::optional<std::map<std::string, std::string>> assignment;  // searched when absent
  SearchConfig search;
  SchemaInference inference;
  bool run_search = true;
};

/// How the locality ratio was obtained.
enum class RatioSource { none, given_assignment, exhaustive_search, heuristic_search };

struct AnalysisReport {
  std::string log_name;
  std::size_t type_count = 0;
  CardinalitySummary cardinality;
  Coverage coverage;
  std::optional<BigInt> rt;
  std::optional<double> rt_log10;
  RelationshipSchema schema;
  std::optional<Ratio> a5;
  RatioSource a5_source = RatioSource::none;
  std::size_t evaluations = 0;
  std::map<std::string, std::string> assignment;  // the one behind `a5`
  std::size_t processed_events = 0;
  std::size_t skipped_events = 0;
  std::size_t a3_violations = 0;
  std::vector<Diagnostic> diagnostics;
};

inline AnalysisReport analyze(const EventLog& log, std::string name, const AnalysisOptions& options,
                              const SearchProgress& progress = {}) {
  AnalysisReport r;
  r.log_name = std::move(name);
  r.type_count = log.types().size();
  r.diagnostics = validate(log);
  r.cardinality = summarize(log);

  const CandidateMap cands = candidates(log);
  r.coverage = coverage(cands);
  r.rt = combination_count(cands);
  r.rt_log10 = combination_log10(cands);

  SchemaBuildResult built = build_schema(log, options.schema, options.inference);
  r.schema = built.schema;
  r.diagnostics.insert(r.diagnostics.end(), built.diagnostics.begin(), built.diagnostics.end());

  auto record = [&](const ReconstructionResult& res) {
    r.processed_events = res.processed_count();
    r.skipped_events = res.skipped_events.size();
    r.a3_violations = res.a3_violations.size();
    r.diagnostics.insert(r.diagnostics.end(), res.diagnostics.begin(), res.diagnostics.end());
  };

  if (options.assignment) {
    const ReferenceAssignment a = resolve_assignment(log, *options.assignment);
    for (ActivityIndex bad : non_candidate_choices(cands, a)) {
      r.diagnostics.push_back(Diagnostic{Severity::warning, "not-a-candidate",
                                         "reference type " + log.type_name(*a.choice[bad]) + " of activity " +
                                             log.activity_name(bad) + " is not exactly-once in all its events",
                                         std::nullopt});
    }
    const ReconstructionResult res = reconstruct(log, r.schema, a, ReconstructOptions{false});
    record(res);
    r.a5 = a5_ratio(res);
    r.a5_source = RatioSource::given_assignment;
    r.assignment = assignment_names(log, a);
  } else if (options.run_search && r.coverage.full()) {
    const SearchResult s = search_best(log, r.schema, cands, options.search, progress);
    record(reconstruct(log, r.schema, s.best_assignment, ReconstructOptions{false}));
    r.a5 = s.best_ratio;
    r.a5_source = s.exhaustive ? RatioSource::exhaustive_search : RatioSource::heuristic_search;
    r.evaluations = s.evaluations;
    r.assignment = assignment_names(log, s.best_assignment);
  }
  return r;
}

/// Nearest whole percent, halves rounded up, in exact integer arithmetic.
inline std::uint64_t rounded_percent(const Ratio& q) {
  const Ratio r = q.reduced();
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(r.numerator) * 200 + r.denominator) /
                                    (static_cast<unsigned __int128>(r.denominator) * 2));
}

inline std::uint64_t floor_percent(const Ratio& q) {
  const Ratio r = q.reduced();
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(r.numerator) * 100 / r.denominator);
}

inline std::string counts_cell(const CardinalityCounts& c) {
  return std::to_string(c.one_to_one) + "/" + std::to_string(c.many_to_one) + "/" + std::to_string(c.many_to_many);
}

/// Exact below 10^15, otherwise `≈10^k`; `--` when undefined.
inline std::string rt_cell(const AnalysisReport& r) {
  if (!r.rt) return "--";
  const std::string digits = r.rt->str();
  if (digits.size() <= 15) return digits;
  return "≈10^" + std::to_string(static_cast<long long>(std::llround(*r.rt_log10)));
}

/// Heuristic results are lower bounds and print as `≥NN%`.
inline std::string a5_cell(const AnalysisReport& r) {
  if (!r.a5) return "--";
  if (r.a5_source == RatioSource::heuristic_search) return "≥" + std::to_string(floor_percent(*r.a5)) + "%";
  return std::to_string(rounded_percent(*r.a5)) + "%";
}

inline const char* to_string(RatioSource s) {
  switch (s) {
    case RatioSource::none: return "none";
    case RatioSource::given_assignment: return "assignment";
    case RatioSource::exhaustive_search: return "exhaustive";
    case RatioSource::heuristic_search: return "heuristic";
  }
  return "none";
}

inline const char* to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

inline Json counts_to_json(const CardinalityCounts& c) {
  return Json{{"oo", c.one_to_one}, {"mo", c.many_to_one}, {"mm", c.many_to_many}};
}

inline Json report_to_json(const AnalysisReport& r) {
  Json a3{{"covered", r.coverage.covered},
          {"total", r.coverage.total},
          {"percent", r.coverage.percent()},
          {"rt", r.rt ? Json(r.rt->str()) : Json(nullptr)},
          {"rtLog10", r.rt_log10 ? Json(*r.rt_log10) : Json(nullptr)}};
  Json a5{{"ratio", r.a5 ? Json(r.a5->str()) : Json(nullptr)},
          {"percent", r.a5 ? Json(100.0 * r.a5->value()) : Json(nullptr)},
          {"source", to_string(r.a5_source)},
          {"exhaustive", r.a5_source == RatioSource::exhaustive_search},
          {"evaluations", r.evaluations},
          {"processedEvents", r.processed_events},
          {"skippedEvents", r.skipped_events},
          {"a3ViolatingEvents", r.a3_violations},
          {"assignment", assignment_to_json(r.assignment)}};
  Json diags = Json::array();
  for (const auto& d : r.diagnostics) {
    Json node{{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}};
    if (d.event_position) node["event"] = *d.event_position;
    diags.push_back(std::move(node));
  }
  return Json{{"log", r.log_name},
              {"types", r.type_count},
              {"static", counts_to_json(r.cardinality.static_counts)},
              {"dynamic", counts_to_json(r.cardinality.dynamic_counts)},
              {"assumption3", a3},
              {"assumption5", a5},
              {"schema", schema_to_json(r.schema)},
              {"diagnostics", diags}};
}

inline std::string render_markdown(const std::vector<AnalysisReport>& reports) {
  std::ostringstream out;
  out << "| OCEL | #Σ | static oo/mo/mm | dynamic oo/mo/mm | Assumpt. 3 | rt | Assumpt. 5 |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    out << "| " << r.log_name << " | " << r.type_count << " | " << counts_cell(r.cardinality.static_counts) << " | "
        << counts_cell(r.cardinality.dynamic_counts) << " | " << r.coverage.covered << "/" << r.coverage.total
        << " (" << std::llround(r.coverage.percent()) << "%) | " << rt_cell(r) << " | " << a5_cell(r) << " |\n";
  }
  return out.str();
}

inline std::string render_csv(const std::vector<AnalysisReport>& reports) {
  std::ostringstream out;
  out << "log,types,static_oo,static_mo,static_mm,dynamic_oo,dynamic_mo,dynamic_mm,a3_covered,a3_total,rt,"
         "rt_log10,a5_ratio,a5_percent,a5_source\n";
  for (const auto& r : reports) {
    const auto& s = r.cardinality.static_counts;
    const auto& d = r.cardinality.dynamic_counts;
    std::string name = r.log_name;
    if (name.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : name) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      name = quoted + "\"";
    }
    out << name << ',' << r.type_count << ',' << s.one_to_one << ',' << s.many_to_one << ',' << s.many_to_many << ','
        << d.one_to_one << ',' << d.many_to_one << ',' << d.many_to_many << ',' << r.coverage.covered << ','
        << r.coverage.total << ',' << (r.rt ? r.rt->str() : "") << ',';
    if (r.rt_log10) out << *r.rt_log10;
    out << ',' << (r.a5 ? r.a5->str() : "") << ',';
    if (r.a5) out << 100.0 * r.a5->value();
    out << ',' << to_string(r.a5_source) << '\n';
  }
  return out.str();
}

}  // namespace dynrel
