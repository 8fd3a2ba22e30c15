#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace dynrel {
namespace {

std::vector<std::string> names_of(const EventLog& log, const std::vector<TypeIndex>& ts) {
  std::vector<std::string> out;
  for (TypeIndex t : ts) out.push_back(log.type_name(t));
  return out;
}

using Names = std::vector<std::string>;

TEST(RefType, MergedLogCandidates) {
  const EventLog log = testing::merged_log();
  const CandidateMap c = candidates(log);
  ASSERT_EQ(c.per_activity.size(), 6u);
  auto of = [&](const char* a) { return names_of(log, c.per_activity[*log.find_activity(a)]); };
  EXPECT_EQ(of("create order"), (Names{"order", "employee"}));
  EXPECT_EQ(of("reduce order"), (Names{"order", "item"}));
  EXPECT_EQ(of("add to order"), (Names{"order"}));
  EXPECT_EQ(of("wrap item"), (Names{"item"}));
  EXPECT_EQ(of("change order manager"), (Names{"order", "employee"}));
  EXPECT_EQ(of("ship order"), (Names{"order"}));

  const Coverage cov = coverage(c);
  EXPECT_EQ(cov.covered, 6u);
  EXPECT_EQ(cov.total, 6u);
  EXPECT_TRUE(cov.full());
  EXPECT_DOUBLE_EQ(cov.percent(), 100.0);
  EXPECT_EQ(*combination_count(c), 8);
  EXPECT_NEAR(*combination_log10(c), std::log10(8.0), 1e-12);
}

TEST(RefType, TeamsCandidates) {
  const EventLog log = testing::teams_log();
  const CandidateMap c = candidates(log);
  EXPECT_EQ(names_of(log, c.per_activity[0]), (Names{"team"}));
  EXPECT_EQ(names_of(log, c.per_activity[1]), (Names{"team", "employee"}));
  EXPECT_EQ(*combination_count(c), 2);
}

TEST(RefType, StreamLengthEqualsCount) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 30; ++round) {
    const EventLog log = testing::random_raw_log(rng, 2 + round % 3, 1 + rng() % 12);
    const CandidateMap c = candidates(log);
    if (!coverage(c).full()) {
      EXPECT_FALSE(combination_count(c));
      EXPECT_THROW(enumerate_assignments(c), SearchPreconditionError);
      continue;
    }
    auto stream = enumerate_assignments(c);
    std::set<std::vector<std::optional<TypeIndex>>> seen;
    std::optional<std::vector<std::optional<TypeIndex>>> prev;
    while (auto a = stream.next()) {
      EXPECT_TRUE(a->complete());
      EXPECT_TRUE(non_candidate_choices(c, *a).empty());
      if (prev) {  // candidate lists are ascending
        EXPECT_LT(*prev, a->choice);
      }
      prev = a->choice;
      seen.insert(a->choice);
    }
    EXPECT_EQ(BigInt(seen.size()), *combination_count(c));
  }
}

TEST(RefType, MergedStreamEnumeratesEight) {
  const CandidateMap c = candidates(testing::merged_log());
  auto stream = enumerate_assignments(c);
  std::size_t n = 0;
  while (stream.next()) ++n;
  EXPECT_EQ(n, 8u);
}

TEST(RefType, CandidatesAreExactlyOnceTypes) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 30; ++round) {
    const EventLog log = testing::random_raw_log(rng, 3, 1 + rng() % 20);
    const CandidateMap c = candidates(log);
    for (ActivityIndex a = 0; a < log.activities().size(); ++a) {
      for (TypeIndex t = 0; t < log.types().size(); ++t) {
        bool every = true;
        for (const auto& e : log.events()) {
          if (e.activity != a) continue;
          std::size_t k = 0;
          for (ObjectIndex o : e.objects) k += log.type_of(o) == t;
          every = every && k == 1;
        }
        const auto& set = c.per_activity[a];
        EXPECT_EQ(every, std::find(set.begin(), set.end(), t) != set.end());
      }
    }
  }
}

TEST(RefType, NoCandidateMeansZeroCombinations) {
  LogBuilder b;
  b.add_object("a1", "A");
  b.add_object("a2", "A");
  b.add_event("e1", "pair", Timestamp{0}, {"a1", "a2"});
  b.add_event("e2", "solo", Timestamp{1}, {"a1"});
  const EventLog log = std::move(b).build();
  const CandidateMap c = candidates(log);
  EXPECT_TRUE(c.per_activity[0].empty());
  EXPECT_EQ(coverage(c).covered, 1u);
  EXPECT_FALSE(coverage(c).full());
  EXPECT_FALSE(combination_count(c));
  EXPECT_FALSE(combination_log10(c));
}

TEST(RefType, HugeCountIsExact) {
  CandidateMap c;
  c.per_activity.assign(200, std::vector<TypeIndex>{0, 1, 2});
  const BigInt n = *combination_count(c);
  BigInt expect = 1;
  for (int i = 0; i < 200; ++i) expect *= 3;
  EXPECT_EQ(n, expect);
  EXPECT_EQ(n.str().size(), 96u);
  EXPECT_NEAR(*combination_log10(c), 200 * std::log10(3.0), 1e-9);
}

TEST(RefType, ResolveAssignment) {
  const EventLog log = testing::merged_log();
  const auto a = testing::merged_assignment(log);
  EXPECT_TRUE(a.complete());
  EXPECT_EQ(assignment_names(log, a).at("wrap item"), "item");
  EXPECT_THROW(resolve_assignment(log, {{"ghost", "order"}}), AssignmentError);
  EXPECT_THROW(resolve_assignment(log, {{"wrap item", "ghost"}}), AssignmentError);
  const auto partial = resolve_assignment(log, {{"wrap item", "item"}});
  EXPECT_FALSE(partial.complete());
  const auto odd = resolve_assignment(log, {{"wrap item", "order"}});
  EXPECT_EQ(non_candidate_choices(candidates(log), odd),
            std::vector<ActivityIndex>{*log.find_activity("wrap item")});
}

}  // namespace
}  // namespace dynrel
