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

#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "qaug/builder.hpp"
#include "qaug/errors.hpp"
#include "support/synthetic.hpp"

using namespace qaug;

namespace {

Document prose(const std::string& id, const std::string& text) {
  return chunk_document({id, RecordKind::prose, text, {}}, 512).at(0);
}

std::string words(std::size_t n, const std::string& stem = "w") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s.push_back(' ');
    s += stem + std::to_string(i);
  }
  return s;
}

// `n` questions of 10 tokens each (nine words and "?").
std::string question_block(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s.push_back(' ');
    s += words(9, "q" + std::to_string(i) + "x") + "?";
  }
  return s;
}

struct FailingBackend final : Backend {
  BackendKind kind() const override { return BackendKind::remote; }

 protected:
  std::string do_generate(const QgRequest&) override { throw BackendUnavailable("down"); }
  std::string do_answer(std::string_view, std::string_view) override { throw BackendUnavailable("down"); }
  std::vector<NounPhrase> do_noun_phrases(std::string_view) override { throw BackendUnavailable("down"); }
};

struct MissingBackend final : Backend {
  BackendKind kind() const override { return BackendKind::recorded; }

 protected:
  std::string do_generate(const QgRequest&) override { throw FixtureMiss("none"); }
  std::string do_answer(std::string_view, std::string_view) override { throw FixtureMiss("none"); }
  std::vector<NounPhrase> do_noun_phrases(std::string_view) override { throw FixtureMiss("none"); }
};

BuildReport run(const std::string& corpus, const BuildConfig& config, Backend& backend, std::string* out_text = nullptr) {
  std::istringstream in(corpus);
  std::ostringstream out;
  auto report = build_dataset(in, out, config, backend);
  if (out_text) *out_text = out.str();
  return report;
}

std::vector<nlohmann::json> lines_of(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::size_t occurrences(const std::string& s, std::string_view needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + needle.size())) ++n;
  return n;
}

}  // namespace

TEST_CASE("mode names and tokens") {
  for (auto m : {Mode::reconstruct, Mode::ask, Mode::answer, Mode::ask_and_answer})
    CHECK(parse_mode(to_string(m)) == m);
  CHECK(parse_mode("ask&answer") == Mode::ask_and_answer);
  CHECK_THROWS_AS(parse_mode("summarize"), ConfigError);
  CHECK(mode_token(Mode::reconstruct).empty());
  CHECK(mode_token(Mode::ask_and_answer) == "<ask&answer>");
  CHECK_FALSE(has_questions(Mode::reconstruct));
  CHECK(has_questions(Mode::answer));
}

TEST_CASE("assemble_instance layouts") {
  const auto doc = prose("d", "Alpha one here. Beta two here. Gamma three here.");
  const auto sel = select_gap_sentences(doc, 0.45, 0);
  PseudoSummary pseudo;
  pseudo.indices = {0, 1};
  pseudo.sentences = {"S1", "S2"};
  pseudo.text = "S1 S2";
  const std::vector<Question> qs = {{"Q1?", 0}, {"Q2?", 1}};
  const auto body = apply_mask(doc, sel).text;

  const auto aa = assemble_instance(doc, sel, pseudo, qs, Mode::ask_and_answer);
  CHECK(aa.target == "Q1? Q2? <qsep> S1 S2");
  CHECK(aa.source == "<ask&answer> " + body);

  const auto rc = assemble_instance(doc, sel, pseudo, {}, Mode::reconstruct);
  CHECK(rc.source == body);
  CHECK(rc.target == "S1 S2");

  const auto ask = assemble_instance(doc, sel, pseudo, qs, Mode::ask);
  CHECK(ask.source == "<ask> " + body);
  CHECK(ask.target == "Q1? Q2?");

  const auto ans = assemble_instance(doc, sel, pseudo, qs, Mode::answer);
  CHECK(ans.source == "<answer> Q1? Q2? " + body);
  CHECK(ans.target == "S1 S2");
  CHECK(ans.meta.questions.size() == 2);
  CHECK(ans.meta.selected == sel.selected);
}

TEST_CASE("assemble_instance rejects a question count mismatch") {
  const auto doc = prose("d", "One a b. Two c d. Three e f. Four g h. Five i j. Six k l.");
  const auto sel = select_gap_sentences(doc, 0.45, 0);
  REQUIRE(sel.selected.size() == 3);
  const auto pseudo = build_pseudo_summary(doc, sel, 256);
  REQUIRE(pseudo.sentences.size() == 3);
  CHECK_THROWS_AS(assemble_instance(doc, sel, pseudo, {{"A?", 0}, {"B?", 1}}, Mode::ask), QuestionCountMismatch);
  CHECK_NOTHROW(assemble_instance(doc, sel, pseudo, {}, Mode::reconstruct));
}

TEST_CASE("answer-mode source keeps questions and trims the document tail") {
  PretrainInstance inst;
  inst.id = "x";
  inst.mode = Mode::answer;
  inst.layout.body = words(600);
  inst.layout.question_block = question_block(4);
  inst.layout.summary_sentences = {"S1."};
  REQUIRE(count_tokens(inst.layout.question_block) == 40);
  BuildConfig config;
  auto result = enforce_budgets(inst, config);
  REQUIRE(std::holds_alternative<PretrainInstance>(result));
  const auto& out = std::get<PretrainInstance>(result);
  CHECK(count_tokens(out.layout.body) == 471);
  CHECK(count_tokens(out.source) == 512);
  CHECK(out.source.rfind("<answer> " + inst.layout.question_block + " w0 ", 0) == 0);
  CHECK(out.meta.truncated.source);
  CHECK_FALSE(out.meta.truncated.target);
}

TEST_CASE("questions over half the input budget are skipped") {
  PretrainInstance inst;
  inst.id = "x";
  inst.mode = Mode::answer;
  inst.layout.body = words(10);
  inst.layout.question_block = question_block(30);
  inst.layout.summary_sentences = {"S1."};
  auto result = enforce_budgets(inst, BuildConfig{});
  REQUIRE(std::holds_alternative<Skip>(result));
  CHECK(std::get<Skip>(result).reason == "questions exceed half input budget");
}

TEST_CASE("targets lose whole summary sentences, never questions") {
  PretrainInstance inst;
  inst.id = "x";
  inst.mode = Mode::ask_and_answer;
  inst.layout.body = words(20);
  inst.layout.question_block = question_block(2);
  inst.layout.summary_sentences = {words(99, "a") + ".", words(99, "b") + ".", words(99, "c") + "."};
  auto result = enforce_budgets(inst, BuildConfig{});
  REQUIRE(std::holds_alternative<PretrainInstance>(result));
  const auto& out = std::get<PretrainInstance>(result);
  CHECK(out.layout.summary_sentences.size() == 2);
  CHECK(out.target.rfind(inst.layout.question_block + " <qsep> a0 ", 0) == 0);
  CHECK(count_tokens(out.target) == 221);
  CHECK(out.meta.truncated.target);

  inst.mode = Mode::ask;
  inst.layout.question_block = question_block(26);
  auto skipped = enforce_budgets(inst, BuildConfig{});
  REQUIRE(std::holds_alternative<Skip>(skipped));
  CHECK(std::get<Skip>(skipped).reason == "question block exceeds target budget");
}

TEST_CASE("instances under budget are unchanged") {
  const auto doc = prose("d", "Alpha one here. Beta two here. Gamma three here.");
  const auto sel = select_gap_sentences(doc, 0.45, 0);
  const auto pseudo = build_pseudo_summary(doc, sel, 256);
  std::vector<Question> qs;
  for (auto i : pseudo.indices) qs.push_back({"Why " + std::to_string(i) + "?", i});
  for (auto m : {Mode::reconstruct, Mode::ask, Mode::answer, Mode::ask_and_answer}) {
    const auto inst = assemble_instance(doc, sel, pseudo, qs, m);
    auto result = enforce_budgets(inst, BuildConfig{});
    REQUIRE(std::holds_alternative<PretrainInstance>(result));
    const auto& out = std::get<PretrainInstance>(result);
    CHECK(out.source == inst.source);
    CHECK(out.target == inst.target);
    CHECK_FALSE(out.meta.truncated.source);
    CHECK_FALSE(out.meta.truncated.target);
  }
}

TEST_CASE("choose_mode degenerates at proportions 0 and 1 and is keyed by id") {
  BuildConfig zero, one, quarter;
  zero.ask_answer_proportion = 0.0;
  one.ask_answer_proportion = 1.0;
  std::size_t hits = 0;
  constexpr std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = "doc" + std::to_string(i);
    CHECK(choose_mode(zero, id) == Mode::reconstruct);
    CHECK(choose_mode(one, id) == Mode::ask_and_answer);
    const auto m = choose_mode(quarter, id);
    CHECK(m == choose_mode(quarter, id));
    if (m == Mode::ask_and_answer) ++hits;
  }
  // Binomial sd at n = 20000 is about 0.0031; 4 sd either side.
  const double frac = static_cast<double>(hits) / n;
  CHECK(frac > 0.2377);
  CHECK(frac < 0.2623);
}

TEST_CASE("BuildConfig validation") {
  BuildConfig c;
  CHECK_NOTHROW(c.validate());
  c.ask_answer_proportion = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.gsr = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.workers = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.augmentation_mode = Mode::reconstruct;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.input_budget = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("reserved markers in corpus text are neutralized") {
  const auto n = neutralize_reserved_tokens("a <mask> b <ask&answer> c <qsep> <b>");
  for (const auto& t : word_tokenize(n)) CHECK_FALSE(is_reserved_token(t));
  CHECK(n.find("<b>") != std::string::npos);
  CHECK(neutralize_reserved_tokens("plain text") == "plain text");

  BuildConfig config;
  config.ask_answer_proportion = 0.0;
  HeuristicBackend backend;
  std::string out;
  run(R"({"id":"a","text":"The <qsep> marker appeared. It <mask> stayed. Then it left again."})" "\n", config,
      backend, &out);
  const auto inst = lines_of(out).at(0);
  CHECK(occurrences(inst["source"], "<qsep>") == 0);
  CHECK(occurrences(inst["target"], "<qsep>") == 0);
}

TEST_CASE("empty corpus gives an empty dataset and a zeroed report") {
  HeuristicBackend backend;
  std::string out;
  const auto r = run("", BuildConfig{}, backend, &out);
  CHECK(out.empty());
  CHECK(r.records == 0);
  CHECK(r.documents == 0);
  CHECK(r.emitted == 0);
  CHECK(r.skipped == 0);
  CHECK(r.mean_source_tokens == 0.0);
  CHECK_FALSE(r.aborted);
}

TEST_CASE("conservation and mode grammar over 1000 documents") {
  BuildConfig config;
  config.ask_answer_proportion = 0.25;
  HeuristicBackend backend;
  std::string out;
  const auto r = run(synth::prose_corpus(1000, 7), config, backend, &out);
  CHECK(r.records == 1000);
  CHECK(r.documents == 1000);
  CHECK(r.emitted + r.skipped == 1000);
  std::size_t modes = 0;
  for (const auto& [m, c] : r.mode_counts) modes += c;
  CHECK(modes == 1000);
  CHECK(r.mode_counts.at("ask") == 0);
  CHECK(r.mode_counts.at("answer") == 0);

  const auto insts = lines_of(out);
  CHECK(insts.size() == r.emitted);
  for (const auto& j : insts) {
    const std::string source = j["source"], target = j["target"];
    const auto mode = parse_mode(j["mode"].get<std::string>());
    std::size_t tokens = 0;
    for (auto tok : {kAskToken, kAnswerToken, kAskAnswerToken}) tokens += occurrences(source, tok);
    if (mode == Mode::reconstruct) {
      CHECK(tokens == 0);
      CHECK(occurrences(target, kQsepToken) == 0);
    } else {
      CHECK(tokens == 1);
      CHECK(source.rfind(std::string(kAskAnswerToken) + " ", 0) == 0);
      CHECK(occurrences(target, kQsepToken) == 1);
      CHECK(j["meta"]["questions"].size() == j["meta"]["selected"].size());
    }
    CHECK(count_tokens(source) <= 512);
    CHECK(count_tokens(target) <= 256);
  }
}

TEST_CASE("output is byte-identical across worker counts") {
  const auto corpus = synth::prose_corpus(1200, 11, 2, 30);
  BuildConfig one;
  one.ask_answer_proportion = 0.5;
  BuildConfig eight = one;
  eight.workers = 8;
  HeuristicBackend backend;
  std::string a, b;
  const auto ra = run(corpus, one, backend, &a);
  const auto rb = run(corpus, eight, backend, &b);
  CHECK(a == b);
  CHECK(ra.to_json() == rb.to_json());

  BuildConfig reseeded = one;
  reseeded.seed = 1;
  std::string c;
  run(corpus, reseeded, backend, &c);
  CHECK(a != c);
}

TEST_CASE("backend failures become skips and can abort the build") {
  const auto corpus = synth::prose_corpus(300, 3);
  BuildConfig config;
  config.ask_answer_proportion = 1.0;
  FailingBackend failing;
  const auto r = run(corpus, config, failing);
  CHECK(r.aborted);
  CHECK(r.skipped == 300);
  CHECK(r.skip_reasons.at("backend unavailable") == 300);

  config.max_skip_rate = 1.0;
  CHECK_FALSE(run(corpus, config, failing).aborted);

  config.ask_answer_proportion = 0.0;
  config.max_skip_rate = 0.1;
  const auto fine = run(corpus, config, failing);
  CHECK_FALSE(fine.aborted);
  CHECK(fine.emitted == 300);

  MissingBackend missing;
  BuildConfig always;
  always.ask_answer_proportion = 1.0;
  const auto outcome = process_document(prose("m", "One a b. Two c d. Three e f."), always, missing);
  REQUIRE(std::holds_alternative<Skip>(outcome.result));
  CHECK(std::get<Skip>(outcome.result).reason == "fixture miss");
}

TEST_CASE("corpus errors abort the build") {
  HeuristicBackend backend;
  CHECK_THROWS_AS(run("{\"id\":\"a\",\"text\":\"x.\"}\n{broken\n", BuildConfig{}, backend), ParseError);
  CHECK_THROWS_AS(run("{\"id\":\"a\",\"text\":\"x.\"}\n{\"id\":\"a\",\"text\":\"y.\"}\n", BuildConfig{}, backend),
                  ParseError);
  BuildConfig dialogue;
  dialogue.corpus_kind = RecordKind::dialogue;
  CHECK_THROWS_AS(run("{\"id\":\"a\",\"text\":\"x.\"}\n", dialogue, backend), ParseError);
}

TEST_CASE("empty records are skipped and counted") {
  HeuristicBackend backend;
  const auto r = run("{\"id\":\"a\",\"text\":\"  \"}\n{\"id\":\"b\",\"text\":\"Real text here.\"}\n", BuildConfig{}, backend);
  CHECK(r.records == 2);
  CHECK(r.emitted + r.skipped == 2);
  CHECK(r.skip_reasons.at("empty document") == 1);
}

TEST_CASE("dialogue summaries and questions are rewritten to third person") {
  nlohmann::json rec = {
      {"id", "chat1"},
      {"kind", "dialogue"},
      {"turns",
       {{{"speaker", "Alice"}, {"text", "I think you should visit the museum with me."}},
        {{"speaker", "Bob"}, {"text", "I will go there with my sister tomorrow."}},
        {{"speaker", "Alice"}, {"text", "Your sister loves the new gallery, and I love it too."}},
        {{"speaker", "Bob"}, {"text", "Then we will meet you at noon."}}}}};
  BuildConfig config;
  config.corpus_kind = RecordKind::dialogue;
  config.ask_answer_proportion = 1.0;
  config.gsr = 1.0;
  config.mask_rate = 0.0;
  HeuristicBackend backend;
  std::string out;
  const auto r = run(rec.dump() + "\n", config, backend, &out);
  REQUIRE(r.emitted == 1);
  const auto inst = lines_of(out).at(0);
  const std::string source = inst["source"], target = inst["target"];
  // One sentence is masked; the rest stay in dialogue form.
  CHECK((source.find("Alice:") != std::string::npos || source.find("Bob:") != std::string::npos));
  CHECK(source.find("I ") != std::string::npos);
  for (const auto& t : word_tokenize(target)) {
    CHECK(t != "i");
    CHECK(t != "my");
    CHECK(t != "your");
  }
  CHECK(target.find("Alice") != std::string::npos);
  CHECK(target.find("Bob") != std::string::npos);
}

TEST_CASE("instance_to_json carries the documented fields") {
  const auto doc = prose("d", "Alpha one here. Beta two here. Gamma three here.");
  const auto sel = select_gap_sentences(doc, 0.45, 0);
  const auto pseudo = build_pseudo_summary(doc, sel, 256);
  const auto j = nlohmann::json::parse(instance_to_json(assemble_instance(doc, sel, pseudo, {}, Mode::reconstruct)));
  CHECK(j["id"] == "d#0");
  CHECK(j["mode"] == "reconstruct");
  CHECK(j["meta"]["selected"] == sel.selected);
  CHECK(j["meta"]["truncated"]["chunk"] == false);
  CHECK(j["meta"]["questions"].empty());
}
