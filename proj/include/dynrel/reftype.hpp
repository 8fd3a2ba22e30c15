#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dynrel/errors.hpp"
#include "dynrel/ocel.hpp"

namespace dynrel {

using BigInt = boost::multiprecision::cpp_int;

/// Per activity, the types occurring exactly once in every one of its events.
struct CandidateMap {
  std::vector<std::vector<TypeIndex>> per_activity;  // ascending type order

  std::size_t activity_count() const { return per_activity.size(); }

  friend bool operator==(const CandidateMap&, const CandidateMap&) = default;
};

/// Chosen reference type per activity. An empty slot leaves the activity
/// unassigned (partial assignment); its events are skipped by reconstruction.
struct ReferenceAssignment {
  std::vector<std::optional<TypeIndex>> choice;

  bool complete() const {
    for (const auto& c : choice) {
      if (!c) return false;
    }
    return true;
  }

  friend bool operator==(const ReferenceAssignment&, const ReferenceAssignment&) = default;
};

inline CandidateMap candidates(const EventLog& log) {
  const std::size_t n = log.types().size();
  CandidateMap out;
  // still[a][t]: type t has occurred exactly once in every event of a so far.
  std::vector<std::vector<char>> still(log.activities().size(), std::vector<char>(n, 1));
  std::vector<std::size_t> per_type(n, 0);
  for (const auto& e : log.events()) {
    std::fill(per_type.begin(), per_type.end(), 0);
    for (ObjectIndex o : e.objects) ++per_type[log.type_of(o)];
    auto& row = still[e.activity];
    for (std::size_t t = 0; t < n; ++t) {
      if (per_type[t] != 1) row[t] = 0;
    }
  }
  out.per_activity.resize(log.activities().size());
  for (std::size_t a = 0; a < still.size(); ++a) {
    for (std::size_t t = 0; t < n; ++t) {
      if (still[a][t]) out.per_activity[a].push_back(static_cast<TypeIndex>(t));
    }
  }
  return out;
}

struct Coverage {
  std::size_t covered = 0;  // activities with at least one candidate
  std::size_t total = 0;

  bool full() const { return covered == total; }
  double percent() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total); }

  friend bool operator==(const Coverage&, const Coverage&) = default;
};

inline Coverage coverage(const CandidateMap& cands) {
  Coverage c;
  c.total = cands.per_activity.size();
  for (const auto& set : cands.per_activity) {
    if (!set.empty()) ++c.covered;
  }
  return c;
}

/// Number of complete assignments; empty when some activity has no candidate.
inline std::optional<BigInt> combination_count(const CandidateMap& cands) {
  if (!coverage(cands).full()) return std::nullopt;
  BigInt product = 1;
  for (const auto& set : cands.per_activity) product *= set.size();
  return product;
}

/// Base-10 logarithm of combination_count, summed per factor so that it
/// stays finite for counts far beyond double range.
inline std::optional<double> combination_log10(const CandidateMap& cands) {
  if (!coverage(cands).full()) return std::nullopt;
  double sum = 0.0;
  for (const auto& set : cands.per_activity) sum += std::log10(static_cast<double>(set.size()));
  return sum;
}

/// Lazy lexicographic enumeration of every complete assignment: the last
/// activity varies fastest, candidates in ascending type order.
class AssignmentStream {
 public:
  explicit AssignmentStream(const CandidateMap& cands) : cands_(&cands), digits_(cands.per_activity.size(), 0) {
    if (!coverage(cands).full()) {
      throw SearchPreconditionError("cannot enumerate assignments: some activity has no reference type candidate");
    }
  }

  /// Next assignment, or nullopt when exhausted.
  std::optional<ReferenceAssignment> next() {
    if (done_) return std::nullopt;
    ReferenceAssignment out = current();
    advance();
    return out;
  }

  /// Candidate index per activity of the assignment `next()` returns next.
  const std::vector<std::size_t>& digits() const { return digits_; }

 private:
  ReferenceAssignment current() const {
    ReferenceAssignment a;
    a.choice.reserve(digits_.size());
    for (std::size_t i = 0; i < digits_.size(); ++i) a.choice.emplace_back(cands_->per_activity[i][digits_[i]]);
    return a;
  }

  void advance() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (++digits_[i] < cands_->per_activity[i].size()) return;
      digits_[i] = 0;
    }
    done_ = true;
  }

  const CandidateMap* cands_;
  std::vector<std::size_t> digits_;
  bool done_ = false;
};

inline AssignmentStream enumerate_assignments(const CandidateMap& cands) { return AssignmentStream(cands); }

/// Activities whose chosen type is not one of their candidates.
inline std::vector<ActivityIndex> non_candidate_choices(const CandidateMap& cands, const ReferenceAssignment& a) {
  std::vector<ActivityIndex> out;
  for (std::size_t i = 0; i < a.choice.size() && i < cands.per_activity.size(); ++i) {
    if (!a.choice[i]) continue;
    const auto& set = cands.per_activity[i];
    if (std::find(set.begin(), set.end(), *a.choice[i]) == set.end()) out.push_back(static_cast<ActivityIndex>(i));
  }
  return out;
}

/// Resolves an activity-name -> type-name map against a log. Activities the
/// map omits stay unassigned.
inline ReferenceAssignment resolve_assignment(const EventLog& log, const std::map<std::string, std::string>& names) {
  ReferenceAssignment a;
  a.choice.resize(log.activities().size());
  for (const auto& [activity, type] : names) {
    auto ai = log.find_activity(activity);
    if (!ai) throw AssignmentError("assignment names unknown activity " + activity);
    auto ti = log.find_type(type);
    if (!ti) throw AssignmentError("assignment names unknown type " + type + " for activity " + activity);
    a.choice[*ai] = *ti;
  }
  return a;
}

inline std::map<std::string, std::string> assignment_names(const EventLog& log, const ReferenceAssignment& a) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < a.choice.size(); ++i) {
    if (a.choice[i]) out[log.activity_name(static_cast<ActivityIndex>(i))] = log.type_name(*a.choice[i]);
  }
  return out;
}

}  // namespace dynrel
