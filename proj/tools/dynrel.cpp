// Command-line front end: analyze, cardinality, reftypes, links, check,
// generate, report.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dynrel/dynrel.hpp"

namespace fs = std::filesystem;
using namespace dynrel;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kIo = 2, kParse = 3, kValidation = 4, kSearch = 5 };

struct Common {
  std::string format = "md";
  std::string schema_path;
  std::string assignment_path;
  std::string search_mode = "auto";
  std::uint64_t seed = 0;
  std::uint64_t exhaustive_bound = 100000;
  std::size_t restarts = 8;
  std::size_t max_passes = 10;
  std::size_t threads = 1;
  std::size_t min_support = 1;
  bool progress = false;
};

std::size_t default_threads() {
  if (const char* env = std::getenv("DYNREL_THREADS")) {
    try {
      return std::max<std::size_t>(1, std::stoul(env));
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void add_format(CLI::App* cmd, Common& c, std::vector<std::string> allowed = {"json", "md", "csv"}) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(allowed));
}

void add_search_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--search", c.search_mode, "Assignment search mode")
      ->check(CLI::IsMember({"auto", "exhaustive", "heuristic"}));
  cmd->add_option("--seed", c.seed, "Seed for heuristic restarts");
  cmd->add_option("--exhaustive-bound", c.exhaustive_bound, "Largest space searched exhaustively in auto mode")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--restarts", c.restarts, "Heuristic restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--max-passes", c.max_passes, "Heuristic passes per restart")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads for exhaustive search (default: $DYNREL_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-support", c.min_support, "Co-occurring events needed to infer a relationship")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--progress", c.progress, "Report search progress on stderr");
}

EventLog load_log(const std::string& path) { return parse_ocel(read_file(path)); }

std::optional<RelationshipSchema> load_schema(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return parse_schema(read_file(path));
}

SearchConfig search_config(const Common& c) {
  SearchConfig s;
  s.mode = c.search_mode == "exhaustive"  ? SearchMode::exhaustive
           : c.search_mode == "heuristic" ? SearchMode::heuristic
                                          : SearchMode::automatic;
  s.seed = c.seed;
  s.exhaustive_bound = c.exhaustive_bound;
  s.restarts = c.restarts;
  s.max_passes = c.max_passes;
  s.threads = c.threads;
  return s;
}

SearchProgress progress_printer(const Common& c) {
  if (!c.progress) return {};
  return [](std::size_t evaluations, const Ratio& best) {
    if (evaluations % 1000 == 0) {
      std::cerr << "evaluations " << evaluations << ", best " << best.str() << "\n";
    }
  };
}

AnalysisReport run_analysis(const std::string& path, const Common& c) {
  const EventLog log = load_log(path);
  AnalysisOptions opts;
  opts.schema = load_schema(c.schema_path);
  if (!c.assignment_path.empty()) opts.assignment = parse_assignment(read_file(c.assignment_path));
  opts.search = search_config(c);
  opts.inference.min_support = c.min_support;
  return analyze(log, fs::path(path).stem().string(), opts, progress_printer(c));
}

std::string rendered(const std::vector<AnalysisReport>& reports, const std::string& format) {
  if (format == "json") {
    if (reports.size() == 1) return report_to_json(reports.front()).dump(2) + "\n";
    Json all = Json::array();
    for (const auto& r : reports) all.push_back(report_to_json(r));
    return all.dump(2) + "\n";
  }
  if (format == "csv") return render_csv(reports);
  return render_markdown(reports);
}

int cmd_analyze(const std::string& path, const Common& c) {
  const AnalysisReport r = run_analysis(path, c);
  std::cout << rendered({r}, c.format);
  if (c.format == "md") {
    if (r.a5) {
      std::cout << "\nAssumption 5 ratio: " << r.a5->str() << " (" << to_string(r.a5_source) << ", "
                << r.evaluations << " evaluations)\n";
    }
    for (const auto& d : r.diagnostics) std::cout << to_string(d.severity) << ": " << d.message << "\n";
  }
  return kOk;
}

int cmd_report(const std::vector<std::string>& paths, const Common& c) {
  std::vector<AnalysisReport> reports;
  for (const auto& p : paths) reports.push_back(run_analysis(p, c));
  std::cout << rendered(reports, c.format);
  return kOk;
}

int cmd_cardinality(const std::string& path, const Common& c) {
  const EventLog log = load_log(path);
  const CooccurrenceStats stats = compute_stats(log);
  const CardinalitySummary summary = summarize(stats);
  Json pairs = Json::array();
  std::ostringstream table;
  table << "| type A | type B | support | static A→B | static B→A | dynamic A→B | dynamic B→A | static | dynamic |\n";
  table << "|---|---|---|---|---|---|---|---|---|\n";
  auto describe = [&](const CardinalityClass& k) {
    std::string s = to_string(k.tag);
    if (k.many_side) s += " (many: " + log.type_name(*k.many_side) + ")";
    return s;
  };
  const auto n = static_cast<TypeIndex>(log.types().size());
  for (TypeIndex a = 0; a < n; ++a) {
    for (TypeIndex b = a + 1; b < n; ++b) {
      const auto st = classify(stats, a, b, CountingMode::static_links);
      const auto dy = classify(stats, a, b, CountingMode::dynamic_links);
      pairs.push_back(Json{{"typeA", log.type_name(a)},
                           {"typeB", log.type_name(b)},
                           {"support", stats.support(a, b)},
                           {"staticFanoutAB", stats.static_fanout_max(a, b)},
                           {"staticFanoutBA", stats.static_fanout_max(b, a)},
                           {"dynamicFanoutAB", stats.dynamic_fanout_max(a, b)},
                           {"dynamicFanoutBA", stats.dynamic_fanout_max(b, a)},
                           {"static", describe(st)},
                           {"dynamic", describe(dy)}});
      table << "| " << log.type_name(a) << " | " << log.type_name(b) << " | " << stats.support(a, b) << " | "
            << stats.static_fanout_max(a, b) << " | " << stats.static_fanout_max(b, a) << " | "
            << stats.dynamic_fanout_max(a, b) << " | " << stats.dynamic_fanout_max(b, a) << " | " << describe(st)
            << " | " << describe(dy) << " |\n";
    }
  }
  if (c.format == "json") {
    std::cout << Json{{"pairs", pairs},
                      {"static", counts_to_json(summary.static_counts)},
                      {"dynamic", counts_to_json(summary.dynamic_counts)}}
                     .dump(2)
              << "\n";
  } else if (c.format == "csv") {
    std::cout << "typeA,typeB,support,static_ab,static_ba,dynamic_ab,dynamic_ba,static,dynamic\n";
    for (const auto& p : pairs) {
      std::cout << p["typeA"].get<std::string>() << ',' << p["typeB"].get<std::string>() << ',' << p["support"]
                << ',' << p["staticFanoutAB"] << ',' << p["staticFanoutBA"] << ',' << p["dynamicFanoutAB"] << ','
                << p["dynamicFanoutBA"] << ",\"" << p["static"].get<std::string>() << "\",\""
                << p["dynamic"].get<std::string>() << "\"\n";
    }
  } else {
    std::cout << table.str() << "\nstatic oo/mo/mm: " << counts_cell(summary.static_counts)
              << "\ndynamic oo/mo/mm: " << counts_cell(summary.dynamic_counts) << "\n";
  }
  return kOk;
}

int cmd_reftypes(const std::string& path, const Common& c) {
  const EventLog log = load_log(path);
  const CandidateMap cands = candidates(log);
  const Coverage cov = coverage(cands);
  const auto rt = combination_count(cands);
  const auto rt_log = combination_log10(cands);
  if (c.format == "json") {
    Json acts = Json::object();
    for (ActivityIndex a = 0; a < cands.per_activity.size(); ++a) {
      Json set = Json::array();
      for (TypeIndex t : cands.per_activity[a]) set.push_back(log.type_name(t));
      acts[log.activity_name(a)] = set;
    }
    std::cout << Json{{"candidates", acts},
                      {"covered", cov.covered},
                      {"total", cov.total},
                      {"percent", cov.percent()},
                      {"rt", rt ? Json(rt->str()) : Json(nullptr)},
                      {"rtLog10", rt_log ? Json(*rt_log) : Json(nullptr)}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  const bool csv = c.format == "csv";
  std::cout << (csv ? "activity,candidates\n" : "| activity | candidates |\n|---|---|\n");
  for (ActivityIndex a = 0; a < cands.per_activity.size(); ++a) {
    std::string set;
    for (TypeIndex t : cands.per_activity[a]) set += (set.empty() ? "" : csv ? ";" : ", ") + log.type_name(t);
    if (csv) {
      std::cout << '"' << log.activity_name(a) << "\"," << set << "\n";
    } else {
      std::cout << "| " << log.activity_name(a) << " | " << (set.empty() ? "--" : set) << " |\n";
    }
  }
  if (!csv) {
    std::cout << "\ncoverage: " << cov.covered << "/" << cov.total << " (" << std::llround(cov.percent()) << "%)\n"
              << "rt: " << (rt ? rt->str() : std::string("--")) << "\n";
  }
  return kOk;
}

struct Replay {
  EventLog log;
  ReconstructionResult result;
};

Replay replay(const std::string& path, const Common& c) {
  Replay r{load_log(path), {}};
  const RelationshipSchema schema = build_schema(r.log, load_schema(c.schema_path)).schema;
  const ReferenceAssignment a = resolve_assignment(r.log, parse_assignment(read_file(c.assignment_path)));
  r.result = reconstruct(r.log, schema, a);
  return r;
}

std::string link_text(const EventLog& log, const ReconstructionResult& res, const Link& l) {
  return "(" + log.object_id(l.parent) + ", " + log.object_id(l.child) + ") " +
         res.relationships.at(l.relationship).label();
}

int cmd_links(const std::string& path, const Common& c, std::optional<std::size_t> at,
              const std::string& history) {
  const Replay r = replay(path, c);
  const bool json = c.format == "json";
  if (at) {
    const auto links = links_at(r.result, *at);
    if (json) {
      Json out = Json::array();
      for (const auto& l : links) out.push_back(link_to_json(r.log, r.result, l));
      std::cout << out.dump(2) << "\n";
    } else {
      for (const auto& l : links) std::cout << link_text(r.log, r.result, l) << "\n";
    }
    return kOk;
  }
  const auto records = history_of(r.result, r.log, history);
  if (json) {
    Json out = Json::array();
    for (const auto& m : records) out.push_back(modification_to_json(r.log, r.result, m));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& m : records) {
      std::cout << "event " << m.event_position << " (" << r.log.events()[m.event_position].id
                << "): " << to_string(m.kind) << " " << link_text(r.log, r.result, m.link) << " ["
                << to_string(m.origin) << ", " << (m.local ? "local" : "non-local") << "]\n";
    }
  }
  return kOk;
}

int cmd_check(const std::string& path, const Common& c, const std::string& timeline_out,
              const std::string& trace_out) {
  const Replay r = replay(path, c);
  const Ratio ratio = a5_ratio(r.result);
  if (!timeline_out.empty()) write_file(timeline_out, timeline_to_json(r.log, r.result).dump(2) + "\n");
  if (!trace_out.empty()) write_file(trace_out, modification_trace(r.log, r.result));
  auto ids = [&](const std::vector<std::size_t>& positions) {
    Json out = Json::array();
    for (auto p : positions) out.push_back(r.log.events()[p].id);
    return out;
  };
  if (c.format == "json") {
    std::cout << Json{{"a5Ratio", ratio.str()},
                      {"a5Percent", 100.0 * ratio.value()},
                      {"processedEvents", r.result.processed_count()},
                      {"skippedEvents", ids(r.result.skipped_events)},
                      {"a3Violations", ids(r.result.a3_violations)},
                      {"a5Violations", ids(r.result.a5_violations)},
                      {"oneSideConflicts", ids(r.result.a4_conflicts)},
                      {"modifications", r.result.modifications.size()}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "a5 ratio: " << ratio.str() << " (" << rounded_percent(ratio) << "%)\n"
              << "processed events: " << r.result.processed_count() << "\n"
              << "skipped events: " << r.result.skipped_events.size() << "\n"
              << "assumption 3 violations: " << r.result.a3_violations.size() << "\n"
              << "assumption 5 violations: " << ids(r.result.a5_violations).dump() << "\n"
              << "modifications: " << r.result.modifications.size() << "\n";
    for (const auto& d : r.result.diagnostics) std::cout << to_string(d.severity) << ": " << d.message << "\n";
  }
  return kOk;
}

int cmd_generate(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  GeneratorConfig cfg = parse_generator_config(read_file(config_path));
  if (seed) cfg.seed = *seed;
  const GeneratedLog g = generate(cfg);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const std::string log_path = (fs::path(out_dir) / "log.json").string();
  const std::string truth_path = (fs::path(out_dir) / "truth.json").string();
  write_file(log_path, to_ocel2_json(g.log).dump(2) + "\n");
  write_file(truth_path, ground_truth_to_json(g.truth).dump(2) + "\n");
  std::cout << "wrote " << log_path << " (" << g.log.events().size() << " events, " << g.log.objects().size()
            << " objects)\nwrote " << truth_path << " (" << g.truth.timeline.size() << " links, "
            << g.truth.planted_a5_violations.size() << " planted violations)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic relationship analysis for object-centric event logs"};
  app.require_subcommand(1);
  Common c;
  c.threads = default_threads();

  std::string log_path;
  std::vector<std::string> log_paths;
  std::optional<std::size_t> at;
  std::string history;
  std::string timeline_out;
  std::string trace_out;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> gen_seed;

  auto* analyze = app.add_subcommand("analyze", "Full assumption report for one log");
  analyze->add_option("log", log_path, "OCEL JSON file")->required();
  analyze->add_option("--schema", c.schema_path, "Relationship schema JSON (inferred when omitted)");
  analyze->add_option("--assignment", c.assignment_path, "Reference assignment JSON (searched when omitted)");
  add_format(analyze, c);
  add_search_flags(analyze, c);

  auto* card = app.add_subcommand("cardinality", "Static and dynamic cardinality per type pair");
  card->add_option("log", log_path, "OCEL JSON file")->required();
  add_format(card, c);

  auto* refs = app.add_subcommand("reftypes", "Reference type candidates, coverage and rt");
  refs->add_option("log", log_path, "OCEL JSON file")->required();
  add_format(refs, c);

  auto* links = app.add_subcommand("links", "Active links at a position or the history of an object");
  links->add_option("log", log_path, "OCEL JSON file")->required();
  links->add_option("--schema", c.schema_path, "Relationship schema JSON (inferred when omitted)");
  links->add_option("--assignment", c.assignment_path, "Reference assignment JSON")->required();
  auto* at_opt = links->add_option("--at", at, "Links active after the first N events");
  auto* hist_opt = links->add_option("--history", history, "Modification history of an object id");
  at_opt->excludes(hist_opt);
  add_format(links, c);

  auto* check = app.add_subcommand("check", "Reconstruct links and measure the locality ratio");
  check->add_option("log", log_path, "OCEL JSON file")->required();
  check->add_option("--schema", c.schema_path, "Relationship schema JSON (inferred when omitted)");
  check->add_option("--assignment", c.assignment_path, "Reference assignment JSON")->required();
  check->add_option("--timeline-out", timeline_out, "Write the link timeline JSON here");
  check->add_option("--trace-out", trace_out, "Write the modification trace (JSON lines) here");
  add_format(check, c);

  auto* gen = app.add_subcommand("generate", "Generate a log with ground truth");
  gen->add_option("config", config_path, "Generator config JSON")->required();
  gen->add_option("out_dir", out_dir, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Override the config seed");

  auto* report = app.add_subcommand("report", "Summary table over several logs");
  report->add_option("logs", log_paths, "OCEL JSON files")->required();
  report->add_option("--schema", c.schema_path, "Relationship schema JSON applied to every log");
  add_format(report, c);
  add_search_flags(report, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kOther;
  }

  try {
    if (*analyze) return cmd_analyze(log_path, c);
    if (*card) return cmd_cardinality(log_path, c);
    if (*refs) return cmd_reftypes(log_path, c);
    if (*links) {
      if (!at && history.empty()) {
        std::cerr << "links: one of --at or --history is required\n";
        return kOther;
      }
      return cmd_links(log_path, c, at, history);
    }
    if (*check) return cmd_check(log_path, c, timeline_out, trace_out);
    if (*gen) return cmd_generate(config_path, out_dir, gen_seed);
    if (*report) return cmd_report(log_paths, c);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "invalid log: " << e.what() << "\n";
    return kParse;
  } catch (const SearchPreconditionError& e) {
    std::cerr << "search: " << e.what() << "\n";
    return kSearch;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kValidation;
  } catch (const AssignmentError& e) {
    std::cerr << "assignment error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const QueryError& e) {
    std::cerr << "query error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
