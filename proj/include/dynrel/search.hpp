#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "dynrel/errors.hpp"
#include "dynrel/linkrec.hpp"
#include "dynrel/ratio.hpp"
#include "dynrel/reftype.hpp"
#include "dynrel/schema.hpp"

namespace dynrel {

enum class SearchMode { automatic, exhaustive, heuristic };

struct SearchConfig {
  std::uint64_t exhaustive_bound = 100000;
  SearchMode mode = SearchMode::automatic;
  std::size_t restarts = 8;
  std::size_t max_passes = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // exhaustive mode only
};

struct SearchResult {
  ReferenceAssignment best_assignment;
  Ratio best_ratio;
  std::size_t evaluations = 0;
  bool exhaustive = false;
};

/// Called after every evaluation with the running count and best ratio.
using SearchProgress = std::function<void(std::size_t evaluations, const Ratio& best)>;

namespace detail {

class AssignmentObjective {
 public:
  AssignmentObjective(const Reconstructor& rec, const CandidateMap& cands) : rec_(rec), cands_(cands) {}

  ReferenceAssignment assignment(const std::vector<std::size_t>& digits) const {
    ReferenceAssignment a;
    a.choice.reserve(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) a.choice.emplace_back(cands_.per_activity[i][digits[i]]);
    return a;
  }

  Ratio evaluate(const std::vector<std::size_t>& digits) const {
    return a5_ratio(rec_.run(assignment(digits), ReconstructOptions{false}));
  }

  // Mixed-radix decoding of an enumeration index, last activity fastest.
  std::vector<std::size_t> digits_of(std::uint64_t index) const {
    std::vector<std::size_t> digits(cands_.per_activity.size(), 0);
    for (std::size_t i = digits.size(); i-- > 0;) {
      const std::size_t radix = cands_.per_activity[i].size();
      digits[i] = static_cast<std::size_t>(index % radix);
      index /= radix;
    }
    return digits;
  }

 private:
  const Reconstructor& rec_;
  const CandidateMap& cands_;
};

struct Best {
  std::optional<Ratio> ratio;
  std::vector<std::size_t> digits;

  // Higher ratio wins; equal ratios go to the earlier enumeration position.
  bool offer(const Ratio& r, const std::vector<std::size_t>& d) {
    if (!ratio || r > *ratio || (r == *ratio && d < digits)) {
      ratio = r;
      digits = d;
      return true;
    }
    return false;
  }
};

inline SearchResult search_exhaustive(const AssignmentObjective& objective, std::uint64_t count, std::size_t threads,
                                      const SearchProgress& progress) {
  threads = std::max<std::size_t>(1, std::min<std::uint64_t>(threads, count));
  std::vector<Best> partial(threads);
  if (threads == 1) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto d = objective.digits_of(i);
      partial[0].offer(objective.evaluate(d), d);
      if (progress) progress(static_cast<std::size_t>(i + 1), *partial[0].ratio);
    }
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t i = t; i < count; i += threads) {
          const auto d = objective.digits_of(i);
          partial[t].offer(objective.evaluate(d), d);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  Best best;
  for (const auto& p : partial) {
    if (p.ratio) best.offer(*p.ratio, p.digits);
  }
  if (progress && threads > 1) progress(static_cast<std::size_t>(count), *best.ratio);
  return SearchResult{objective.assignment(best.digits), *best.ratio, static_cast<std::size_t>(count), true};
}

// Coordinate ascent with restarts. Restart 0 starts from the first
// assignment in enumeration order, later restarts from seeded random ones.
inline SearchResult search_heuristic(const AssignmentObjective& objective, const CandidateMap& cands,
                                     const SearchConfig& config, const SearchProgress& progress) {
  std::mt19937_64 rng(config.seed);
  const std::size_t n = cands.per_activity.size();
  Best best;
  std::size_t evaluations = 0;
  auto evaluate = [&](const std::vector<std::size_t>& d) {
    const Ratio r = objective.evaluate(d);
    ++evaluations;
    if (progress) progress(evaluations, best.ratio ? std::max(*best.ratio, r) : r);
    return r;
  };

  for (std::size_t restart = 0; restart < config.restarts; ++restart) {
    std::vector<std::size_t> digits(n, 0);
    if (restart > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        digits[i] = std::uniform_int_distribution<std::size_t>(0, cands.per_activity[i].size() - 1)(rng);
      }
    }
    std::optional<Ratio> current;
    for (std::size_t pass = 0; pass < config.max_passes; ++pass) {
      std::optional<Ratio> pass_start = current;
      for (std::size_t a = 0; a < n; ++a) {
        const std::size_t options = cands.per_activity[a].size();
        if (options < 2) continue;
        const std::size_t kept = digits[a];
        std::optional<Ratio> chosen;
        std::size_t chosen_k = kept;
        for (std::size_t k = 0; k < options; ++k) {
          Ratio r;
          if (k == kept && current) {
            r = *current;
          } else {
            digits[a] = k;
            r = evaluate(digits);
            if (k == kept && !pass_start) pass_start = r;
          }
          if (!chosen || r > *chosen) {
            chosen = r;
            chosen_k = k;
          }
        }
        digits[a] = chosen_k;
        current = chosen;
      }
      if (!current) {
        // Every activity has a single candidate.
        current = evaluate(digits);
        break;
      }
      if (pass_start && *current <= *pass_start) break;
    }
    best.offer(*current, digits);
  }
  return SearchResult{objective.assignment(best.digits), best.ratio.value_or(Ratio::one()), evaluations, false};
}

}  // namespace detail

/// Reference-type assignment maximizing the locality ratio. Auto mode
/// enumerates the whole space when it has at most `exhaustive_bound`
/// assignments and runs seeded coordinate ascent otherwise.
inline SearchResult search_best(const EventLog& log, const RelationshipSchema& schema, const CandidateMap& cands,
                                const SearchConfig& config, const SearchProgress& progress = {}) {
  if (config.exhaustive_bound == 0 || config.restarts == 0 || config.max_passes == 0) {
    throw ConfigError("search bounds must be positive");
  }
  if (cands.per_activity.size() != log.activities().size()) {
    throw SearchPreconditionError("candidate map does not belong to this log");
  }
  const auto count = combination_count(cands);
  if (!count) {
    throw SearchPreconditionError(
        "not every activity has a reference type candidate; reconstruct with a partial assignment instead");
  }
  if (cands.per_activity.empty()) {
    return SearchResult{ReferenceAssignment{}, Ratio::one(), 0, true};
  }

  const Reconstructor rec(log, schema);
  const detail::AssignmentObjective objective(rec, cands);
  const bool fits = *count <= config.exhaustive_bound;
  bool exhaustive = config.mode == SearchMode::exhaustive || (config.mode == SearchMode::automatic && fits);
  if (exhaustive && *count > std::numeric_limits<std::uint64_t>::max()) {
    throw SearchPreconditionError("combination space too large for exhaustive search");
  }
  if (exhaustive) {
    return detail::search_exhaustive(objective, count->convert_to<std::uint64_t>(), config.threads, progress);
  }
  return detail::search_heuristic(objective, cands, config, progress);
}

}  // namespace dynrel
