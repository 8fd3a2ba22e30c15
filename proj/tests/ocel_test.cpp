#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace dynrel {
namespace {

using testing::fixture;

TEST(Timestamp, ParsesCommonForms) {
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00Z")->micros, 0);
  EXPECT_EQ(parse_timestamp("1970-01-01 00:00:01")->micros, 1'000'000);
  EXPECT_EQ(parse_timestamp("1970-01-01T01:00:00+01:00")->micros, 0);
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00-0130")->micros, 5'400'000'000);
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00.5Z")->micros, 500'000);
  EXPECT_EQ(parse_timestamp("1970-01-02")->micros, 86'400'000'000);
  EXPECT_EQ(parse_timestamp("2024-01-01T00:00:00Z")->micros, 1704067200LL * 1'000'000);
}

TEST(Timestamp, RejectsGarbage) {
  EXPECT_FALSE(parse_timestamp(""));
  EXPECT_FALSE(parse_timestamp("yesterday"));
  EXPECT_FALSE(parse_timestamp("2024-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_timestamp("2024-01-01T00:00:00Zjunk"));
}

TEST(Timestamp, FormatRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    Timestamp t{static_cast<std::int64_t>(rng() % 4'000'000'000'000'000ULL) - 1'000'000'000'000'000LL};
    auto back = parse_timestamp(format_timestamp(t));
    ASSERT_TRUE(back) << format_timestamp(t);
    EXPECT_EQ(*back, t);
  }
  EXPECT_EQ(format_timestamp(Timestamp{0}), "1970-01-01T00:00:00Z");
  EXPECT_EQ(format_timestamp(Timestamp{1500}), "1970-01-01T00:00:00.001500Z");
  EXPECT_EQ(format_timestamp(Timestamp{250'000}), "1970-01-01T00:00:00.250Z");
}

TEST(Ocel, ParsesOcel2Fixture) {
  const EventLog log = parse_ocel(read_file(fixture("ex3.json")));
  EXPECT_EQ(log.types(), (std::vector<std::string>{"order", "item", "employee"}));
  EXPECT_EQ(log.objects().size(), 9u);
  ASSERT_EQ(log.events().size(), 8u);
  EXPECT_EQ(log.events()[4].id, "e5");
  EXPECT_EQ(log.activity_name(log.events()[4].activity), "wrap item");
  EXPECT_EQ(log.activities().size(), 6u);
  EXPECT_EQ(log, testing::merged_log());
}

TEST(Ocel, ParsesOcel1Fixture) {
  const EventLog log = parse_ocel(read_file(fixture("ex4.ocel1.json")));
  EXPECT_EQ(detect_format(Json::parse(read_file(fixture("ex4.ocel1.json")))), OcelFormat::ocel1_json);
  EXPECT_EQ(log.events().size(), 4u);
  EXPECT_EQ(log.activities(), (std::vector<std::string>{"create team", "add employee to team"}));
  const auto t = log.find_type("team");
  ASSERT_TRUE(t);
  EXPECT_EQ(log.type_of(*log.find_object("t3")), *t);
}

TEST(Ocel, HintMismatchIsFormatError) {
  EXPECT_THROW(parse_ocel(read_file(fixture("ex4.ocel1.json")), OcelFormat::ocel2_json), FormatError);
  EXPECT_THROW(parse_ocel(R"({"something": 1})"), FormatError);
  EXPECT_THROW(parse_ocel(R"({"events": [{"id": 3}]})"), FormatError);
}

TEST(Ocel, ParseErrorCarriesOffset) {
  try {
    parse_ocel("{\"events\": [}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 12u);
  }
}

TEST(Ocel, EmptyLogIsValidWithWarning) {
  const EventLog log = parse_ocel(R"({"objectTypes": [], "eventTypes": [], "objects": [], "events": []})");
  EXPECT_TRUE(log.events().empty());
  const auto diags = validate(log);
  EXPECT_FALSE(has_errors(diags));
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags[0].code, "empty-log");
}

TEST(Ocel, DanglingReferenceNamesOffenders) {
  LogBuilder b;
  b.add_object("o1", "order");
  b.add_event("e1", "create", Timestamp{0}, {"o1", "x9"});
  b.add_event("e2", "create", Timestamp{1}, {"x8"});
  try {
    std::move(b).build();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.offenders(), (std::vector<std::string>{"x9", "x8"}));
  }
}

TEST(Ocel, DuplicateIdsRejected) {
  LogBuilder b;
  b.add_object("o1", "order");
  b.add_object("o1", "order");
  EXPECT_THROW(std::move(b).build(), ValidationError);
  LogBuilder c;
  c.add_object("o1", "order");
  c.add_event("e1", "a", Timestamp{0}, {"o1"});
  c.add_event("e1", "a", Timestamp{1}, {"o1"});
  EXPECT_THROW(std::move(c).build(), ValidationError);
}

TEST(Ocel, DuplicateReferenceCollapsesWithWarning) {
  LogBuilder b;
  b.add_object("o1", "order");
  b.add_event("e1", "create", Timestamp{0}, {"o1", "o1"});
  const EventLog log = std::move(b).build();
  EXPECT_EQ(log.events()[0].objects.size(), 1u);
  ASSERT_EQ(log.build_diagnostics().size(), 1u);
  EXPECT_EQ(log.build_diagnostics()[0].code, "duplicate-object");
}

TEST(Ocel, EmptyObjectSetAndUnusedActivityWarn) {
  LogBuilder b;
  b.declare_activity("never");
  b.add_event("e1", "noop", Timestamp{0}, std::vector<std::string>{});
  const auto diags = validate(std::move(b).build());
  std::vector<std::string> codes;
  for (const auto& d : diags) codes.push_back(d.code);
  EXPECT_EQ(codes, (std::vector<std::string>{"empty-object-set", "unused-activity"}));
  EXPECT_FALSE(has_errors(diags));
}

TEST(Ocel, CanonicalOrderBreaksTiesByDocumentPosition) {
  LogBuilder b;
  b.add_object("o", "t");
  b.add_event("late", "x", Timestamp{5}, {"o"});
  b.add_event("tie-a", "y", Timestamp{1}, {"o"});
  b.add_event("tie-b", "z", Timestamp{1}, {"o"});
  const EventLog log = std::move(b).build();
  std::vector<std::string> ids;
  for (const auto& e : log.events()) ids.push_back(e.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"tie-a", "tie-b", "late"}));
  EXPECT_EQ(log.activities(), (std::vector<std::string>{"y", "z", "x"}));
  for (std::size_t i = 0; i < log.events().size(); ++i) EXPECT_EQ(log.events()[i].position, i);
}

TEST(Ocel, CanonicalOrderIsIdempotent) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const EventLog log = testing::random_raw_log(rng, 3, 40);
    const auto again = canonical_order(log.events());
    EXPECT_EQ(again, log.events());
    for (std::size_t i = 1; i < log.events().size(); ++i) {
      const auto& a = log.events()[i - 1];
      const auto& b = log.events()[i];
      EXPECT_TRUE(a.timestamp < b.timestamp ||
                  (a.timestamp == b.timestamp && a.document_position < b.document_position));
    }
  }
}

TEST(Ocel, Ocel2RoundTrip) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 20; ++round) {
    const EventLog log = testing::random_raw_log(rng, 1 + round % 5, 30);
    const EventLog back = parse_ocel(to_ocel2_json(log).dump());
    EXPECT_EQ(back, log);
  }
  for (auto f : {"ex1.json", "ex3.json", "ex4.ocel1.json"}) {
    const EventLog log = parse_ocel(read_file(fixture(f)));
    EXPECT_EQ(parse_ocel(to_ocel2_json(log).dump()), log) << f;
  }
}

}  // namespace
}  // namespace dynrel
