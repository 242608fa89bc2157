// Copyright 2026 The qaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qaug/corpus.hpp"
#include "qaug/errors.hpp"
#include "qaug/plans.hpp"
#include "support/filter_fixture.hpp"

using namespace qaug;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string figure_summary() {
  auto s = read_file(fs::path(QAUG_TEST_DATA_DIR) / "figure_summary.txt");
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

RecordedBackend figure_backend() { return RecordedBackend(fs::path(QAUG_TEST_DATA_DIR) / "figure_fixture.jsonl"); }

std::string random_words(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  static const std::vector<std::string> v = {"Sarah", "method", "the", "council", "budget", "of", "a", "river",
                                             "42",    "x-ray",  "don't", "team", "plan", "and", "Mr", "set"};
  std::uniform_int_distribution<std::size_t> len(lo, hi), pick(0, v.size() - 1);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s.push_back(' ');
    s += v[pick(rng)];
  }
  return s;
}

Plan random_plan(std::mt19937_64& rng, Strategy strategy) {
  std::uniform_int_distribution<std::size_t> sentences(1, 5), per(0, 4);
  std::vector<PlanUnit> units;
  const std::size_t n = sentences(rng);
  for (std::size_t s = 0; s < n; ++s) {
    switch (strategy) {
      case Strategy::content_questions:
        units.push_back({s, random_words(rng, 1, 8) + "?", std::nullopt, std::nullopt});
        break;
      case Strategy::keywords: {
        std::vector<std::string> kws;
        for (std::size_t k = per(rng); k > 0; --k) kws.push_back(random_words(rng, 1, 3));
        units.push_back({s, std::nullopt, std::nullopt, std::move(kws)});
        break;
      }
      case Strategy::blueprint_qa:
        for (std::size_t k = per(rng); k > 0; --k)
          units.push_back({s, random_words(rng, 1, 8) + "?", random_words(rng, 1, 3), std::nullopt});
        break;
    }
  }
  if (units.empty()) units.push_back({0, "Who?", "Sarah", std::nullopt});
  Plan p;
  p.strategy = strategy;
  p.sentence_count = n;
  p.text = serialize_plan(strategy, units, n);
  p.units = std::move(units);
  return p;
}

std::vector<std::size_t> orders(const std::vector<QaPair>& pairs) {
  std::vector<std::size_t> out;
  for (const auto& p : pairs) out.push_back(p.order);
  return out;
}

}  // namespace

TEST_CASE("strategy names") {
  CHECK(parse_strategy("content-questions") == Strategy::content_questions);
  CHECK(parse_strategy("blueprint") == Strategy::blueprint_qa);
  for (auto s : {Strategy::content_questions, Strategy::keywords, Strategy::blueprint_qa})
    CHECK(parse_strategy(to_string(s)) == s);
  CHECK_THROWS_AS(parse_strategy("entity-chain"), ConfigError);
}

TEST_CASE("serialization round-trips for random plans") {
  std::mt19937_64 rng(5);
  for (auto strategy : {Strategy::content_questions, Strategy::keywords, Strategy::blueprint_qa}) {
    for (int i = 0; i < 500; ++i) {
      const auto p = random_plan(rng, strategy);
      const auto parsed = parse_plan(p.text, strategy);
      CHECK(parsed == p);
      CHECK(serialize_plan(strategy, parsed.units, parsed.sentence_count) == p.text);
    }
  }
}

TEST_CASE("keyword plans keep one segment per sentence") {
  const std::vector<PlanUnit> units = {{0, std::nullopt, std::nullopt, std::vector<std::string>{"a", "b"}},
                                       {1, std::nullopt, std::nullopt, std::vector<std::string>{}},
                                       {2, std::nullopt, std::nullopt, std::vector<std::string>{"c"}}};
  const auto text = serialize_plan(Strategy::keywords, units, 3);
  CHECK(text == "a | b ||  || c");
  CHECK(parse_plan(text, Strategy::keywords).sentence_count == 3);
}

TEST_CASE("plan parsing errors") {
  CHECK_THROWS_AS(parse_plan("", Strategy::content_questions), EmptyPlan);
  CHECK_THROWS_AS(parse_plan("no question mark", Strategy::content_questions), ParseError);
  CHECK_THROWS_AS(parse_plan("answer without question", Strategy::blueprint_qa), ParseError);
  CHECK_THROWS_AS(parse_plan(" || ", Strategy::blueprint_qa), EmptyPlan);
  CHECK_THROWS_AS(serialize_plan(Strategy::keywords, {{3, std::nullopt, std::nullopt, std::vector<std::string>{"x"}}}, 2),
                  IndexOutOfRange);
}

TEST_CASE("normalize_answer") {
  CHECK(normalize_answer("  The Socratic method. ") == "socratic method");
  CHECK(normalize_answer("an apple!") == "apple");
  CHECK(normalize_answer("Sarah") == "sarah");
  CHECK(normalize_answer("theory") == "theory");
  CHECK(normalize_answer("the") == "the");
}

TEST_CASE("figure plans are reproduced by the recorded backend") {
  auto backend = figure_backend();
  const auto summary = figure_summary();

  const auto content = extract_content_questions(summary, backend);
  CHECK(content.text ==
        "How did Sarah use the Socratic method? What were the benefits of the Socratic method? What did Sarah think of the method?");
  CHECK(content.units.size() == 3);

  const auto keywords = extract_keywords_plan(summary, backend);
  CHECK(keywords.text ==
        "Group discussion | Sarah | Socratic method | questions | thinking | assumptions || method | classmates | understanding | disagreement || studies");
  CHECK(keywords.sentence_count == 3);

  const auto blueprint = extract_blueprint(summary, backend);
  const std::string prefix =
      "What type of discussion did Sarah have about a philosophical concept? Group discussion | Who used the Socratic method? Sarah | "
      "What method did Sarah use to stimulate critical thinking? Socratic method | What did Sarah ask in the Socratic method? questions | "
      "What did Sarah clarify in the Socratic method? assumptions";
  CHECK(blueprint.text.rfind(prefix, 0) == 0);
  CHECK(parse_plan(blueprint.text, Strategy::blueprint_qa) == blueprint);
  // The last sentence loses its only pair to round-trip and gets it back.
  CHECK(blueprint.units.back().answer == "studies");
  CHECK(blueprint.units.back().sentence_index == 2);
}

TEST_CASE("blueprint answers are spans of their sentence") {
  auto backend = figure_backend();
  const auto summary = figure_summary();
  const auto spans = segment_sentences(summary);
  for (const auto& p : blueprint_candidates(summary, backend)) {
    const auto& s = spans.at(p.sentence_index);
    std::string sentence = summary.substr(s.start, s.end - s.start);
    std::string answer = p.answer;
    for (auto* t : {&sentence, &answer})
      for (auto& c : *t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    CHECK(sentence.find(answer) != std::string::npos);
  }
}

TEST_CASE("round-trip filter keeps exactly the matching pairs") {
  auto backend = RecordedBackend::from_lines(filter_fixture::backend_lines());
  std::vector<QaPair> pairs;
  std::vector<std::size_t> expected;
  for (const auto& c : filter_fixture::round_trip_cases()) {
    pairs.push_back(c.pair);
    if (c.round_trip) expected.push_back(c.pair.order);
  }
  const auto kept = filter_round_trip(pairs, backend, filter_fixture::kSummary);
  CHECK(orders(kept) == expected);
  CHECK(kept[0].match == RoundTrip::exact);
  CHECK(kept[1].match == RoundTrip::normalized);
  CHECK(filter_round_trip(kept, backend, filter_fixture::kSummary) == kept);
  CHECK(filter_round_trip({}, backend, filter_fixture::kSummary).empty());
}

TEST_CASE("rheme filter drops pairs whose question gives the answer away") {
  std::vector<QaPair> pairs;
  std::vector<std::size_t> expected;
  for (const auto& c : filter_fixture::rheme_cases()) {
    pairs.push_back(c.pair);
    if (!c.rheme_drop) expected.push_back(c.pair.order);
  }
  const auto kept = filter_rheme(pairs);
  CHECK(orders(kept) == expected);
  CHECK(filter_rheme(kept) == kept);
  CHECK(filter_rheme({}).empty());

  QaPair figure{"What did Sarah clarify in the Socratic method?", "assumptions", 0, 0, true, RoundTrip::exact};
  CHECK(filter_rheme({figure}).size() == 1);
  QaPair given{"Was the Socratic method used?", "Socratic method", 0, 0, true, RoundTrip::exact};
  CHECK(filter_rheme({given}).empty());
}

TEST_CASE("coverage filter restores one pair per orphaned sentence") {
  const auto candidates = filter_fixture::coverage_candidates();
  const auto survivors = filter_fixture::coverage_survivors();
  const auto covered = filter_coverage(survivors, candidates);
  CHECK(orders(covered) == std::vector<std::size_t>{0, 1, 4, 5});
  CHECK(filter_coverage(covered, candidates) == covered);

  // Never removes, never invents.
  CHECK(filter_coverage(candidates, candidates) == candidates);
  std::vector<QaPair> only_first(candidates.begin(), candidates.begin() + 2);
  CHECK(filter_coverage(only_first, only_first) == only_first);
  CHECK(filter_coverage({}, {}).empty());
}

TEST_CASE("blueprint extraction fails when nothing survives") {
  const std::string summary = "Bob left.";
  auto backend = RecordedBackend::from_lines({
      R"({"op":"nounphrases","sentence":"Bob left.","spans":[]})",
  });
  CHECK_THROWS_AS(extract_blueprint(summary, backend), EmptyPlan);
  HeuristicBackend heuristic;
  CHECK_THROWS_AS(extract_content_questions("   ", heuristic), PreconditionViolation);
}

TEST_CASE("single-sentence summary gives a single-question plan") {
  HeuristicBackend backend;
  const auto p = extract_content_questions("Sarah used the Socratic method.", backend);
  CHECK(p.units.size() == 1);
  CHECK(p.text == "What did Sarah do?");
}

TEST_CASE("plan records round-trip through JSON") {
  auto backend = figure_backend();
  PlanRecord rec{"doc", "q1", extract_blueprint(figure_summary(), backend)};
  const auto back = parse_plan_record(plan_record_to_json(rec), 1);
  CHECK(back.doc_id == "doc");
  CHECK(back.query_id == "q1");
  CHECK(back.plan == rec.plan);
  CHECK_THROWS_AS(parse_plan_record(R"({"doc_id":"d","strategy":"keywords"})", 3), ParseError);
  CHECK_THROWS_AS(parse_plan_record(R"({"doc_id":"d","strategy":"poem","plan_text":"x"})", 3), ParseError);
}

TEST_CASE("analysis statistics on hand-sized inputs") {
  auto plan = [](std::string doc, std::string q, Strategy s, std::string text) {
    return PlanRecord{std::move(doc), std::move(q), parse_plan(text, s)};
  };
  std::map<SummaryKey, std::string> summaries = {{{"d1", "a"}, "the cat sat on the mat."},
                                                 {{"d1", "b"}, "the cat sat on the mat."},
                                                 {{"d2", "a"}, "dogs bark."}};
  SUBCASE("duplicate plans have full overlap") {
    const auto stats = analyze_plans({plan("d1", "a", Strategy::keywords, "cat | mat"),
                                      plan("d1", "b", Strategy::keywords, "cat | mat")},
                                     summaries);
    const auto& s = stats.at(Strategy::keywords);
    CHECK(s.plans == 2);
    CHECK(s.plan_pairs == 1);
    CHECK(*s.max_overlap == 1.0);
    CHECK(*s.mean_overlap == 1.0);
    CHECK(s.length_ratio == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
    CHECK(s.summary_rouge1 == doctest::Approx(2.0 * 2.0 / 8.0).epsilon(1e-15));
  }
  SUBCASE("one plan per document leaves cross-query fields absent") {
    const auto stats = analyze_plans({plan("d1", "a", Strategy::keywords, "cat"),
                                      plan("d2", "a", Strategy::keywords, "dogs")},
                                     summaries);
    const auto& s = stats.at(Strategy::keywords);
    CHECK_FALSE(s.mean_overlap.has_value());
    CHECK_FALSE(s.max_overlap.has_value());
    CHECK(s.plan_pairs == 0);
  }
  SUBCASE("strategies are reported separately") {
    const auto stats = analyze_plans({plan("d1", "a", Strategy::keywords, "cat"),
                                      plan("d1", "a", Strategy::content_questions, "Who sat?")},
                                     summaries);
    CHECK(stats.size() == 2);
  }
  SUBCASE("missing summary") {
    CHECK_THROWS_AS(analyze_plans({plan("d9", "a", Strategy::keywords, "cat")}, summaries), MissingReference);
  }
}

TEST_CASE("dataset statistics") {
  std::istringstream in(
      R"({"doc_id":"m1","document":"One two three four.","summary":"a b"})" "\n"
      R"({"doc_id":"m1","summary":"c d e f"})" "\n"
      "\n"
      R"({"doc_id":"s1","document":"x, y!","summaries":["p","q r","s","t u v"]})" "\n");
  const auto st = dataset_stats(in);
  CHECK(st.examples == 3);
  CHECK(st.documents == 2);
  CHECK(st.references == 6);
  CHECK(st.mean_document_words == 10.0 / 3.0);
  CHECK(st.mean_summary_words == 13.0 / 6.0);

  std::istringstream orphan(R"({"doc_id":"m1","summary":"a"})");
  CHECK_THROWS_AS(dataset_stats(orphan), ParseError);
  std::istringstream conflicting(R"({"doc_id":"m1","document":"a b","summary":"a"})" "\n"
                                 R"({"doc_id":"m1","document":"a b c","summary":"a"})");
  CHECK_THROWS_AS(dataset_stats(conflicting), ParseError);
  std::istringstream empty_refs(R"({"doc_id":"m1","document":"a","summaries":[]})");
  CHECK_THROWS_AS(dataset_stats(empty_refs), ParseError);
}
