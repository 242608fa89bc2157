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

#include <nlohmann/json.hpp>

#include "qaug/builder.hpp"
#include "qaug/errors.hpp"
#include "qaug/rng.hpp"

namespace qaug {
namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out += parts[i];
  }
  return out;
}

void rstrip(std::string& s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
    s.pop_back();
}

// Third-person form of sentence `idx` of a dialogue document, without the
// "SPEAKER:" prefix when the sentence opens a turn.
std::string third_person(const Document& doc, std::size_t idx, std::string_view text) {
  const TurnRef* turn = doc.turn_of(idx);
  if (!turn) return std::string(text);
  if (turn->addressee.empty())
    throw UnsupportedDialogue("turn by " + turn->speaker + " in " + doc.id +
                              " does not come from a two-speaker dialogue");
  std::string_view body = text;
  const std::string prefix = turn->speaker + ":";
  if (doc.sentences.at(idx).start == turn->start && body.substr(0, prefix.size()) == prefix) {
    auto rest = body.substr(prefix.size());
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (!rest.empty()) body = rest;
  }
  return ThirdPersonRewriter::rewrite(body, turn->speaker, turn->addressee);
}

void compose(PretrainInstance& inst) {
  const auto& L = inst.layout;
  const std::string summary = join(L.summary_sentences, " ");
  switch (inst.mode) {
    case Mode::reconstruct:
      inst.source = L.body;
      inst.target = summary;
      break;
    case Mode::ask:
      inst.source = std::string(kAskToken) + " " + L.body;
      inst.target = L.question_block;
      break;
    case Mode::answer:
      inst.source = std::string(kAnswerToken) + " " + L.question_block + " " + L.body;
      inst.target = summary;
      break;
    case Mode::ask_and_answer:
      inst.source = std::string(kAskAnswerToken) + " " + L.body;
      inst.target = L.question_block + " " + std::string(kQsepToken) + " " + summary;
      break;
  }
}

std::size_t sum_tokens(const std::vector<std::string>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += count_tokens(p);
  return n;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::reconstruct:
      return "reconstruct";
    case Mode::ask:
      return "ask";
    case Mode::answer:
      return "answer";
    case Mode::ask_and_answer:
      return "ask_and_answer";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "reconstruct") return Mode::reconstruct;
  if (text == "ask") return Mode::ask;
  if (text == "answer") return Mode::answer;
  if (text == "ask_and_answer" || text == "ask&answer") return Mode::ask_and_answer;
  throw ConfigError("unknown mode \"" + std::string(text) + "\"");
}

bool has_questions(Mode mode) { return mode != Mode::reconstruct; }

std::string_view mode_token(Mode mode) {
  switch (mode) {
    case Mode::reconstruct:
      return "";
    case Mode::ask:
      return kAskToken;
    case Mode::answer:
      return kAnswerToken;
    case Mode::ask_and_answer:
      return kAskAnswerToken;
  }
  return "";
}

void BuildConfig::validate() const {
  auto ratio = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must be in [0, 1]");
  };
  ratio(gsr, "gsr");
  ratio(mask_rate, "mask rate");
  ratio(ask_answer_proportion, "ask/answer proportion");
  ratio(max_skip_rate, "max skip rate");
  if (gsr == 0.0) throw ConfigError("gsr must be greater than 0");
  if (input_budget == 0 || target_budget == 0) throw ConfigError("budgets must be positive");
  if (workers == 0) throw ConfigError("workers must be >= 1");
  if (augmentation_mode == Mode::reconstruct)
    throw ConfigError("augmentation mode must be ask, answer, or ask_and_answer");
  backend.validate();
}

Mode choose_mode(const BuildConfig& config, std::string_view doc_id) {
  KeyedRng rng(config.seed, doc_id, "mode");
  return rng.uniform01() < config.ask_answer_proportion ? config.augmentation_mode
                                                        : Mode::reconstruct;
}

PretrainInstance assemble_instance(const Document& doc, const GapSelection& sel,
                                   const PseudoSummary& pseudo,
                                   const std::vector<Question>& questions, Mode mode) {
  if (has_questions(mode) && questions.size() != pseudo.sentences.size())
    throw QuestionCountMismatch(pseudo.sentences.size(), questions.size());

  PretrainInstance inst;
  inst.id = doc.id;
  inst.mode = mode;
  inst.meta.selected = sel.selected;
  inst.meta.masked = sel.masked;
  inst.meta.kept = sel.kept;
  inst.meta.truncated.chunk = doc.truncated;
  inst.meta.truncated.summary = pseudo.truncated;
  inst.layout.body = apply_mask(doc, sel).text;

  const bool dialogue = !doc.turns.empty();
  for (std::size_t i = 0; i < pseudo.sentences.size(); ++i) {
    inst.layout.summary_sentences.push_back(
        dialogue ? third_person(doc, pseudo.indices.at(i), pseudo.sentences[i]) : pseudo.sentences[i]);
  }
  if (has_questions(mode)) {
    std::vector<std::string> texts;
    for (const auto& q : questions) {
      Question out = q;
      if (dialogue) out.text = normalize_question(third_person(doc, q.source_index, q.text));
      texts.push_back(out.text);
      inst.meta.questions.push_back(std::move(out));
    }
    inst.layout.question_block = join(texts, " ");
  }
  compose(inst);
  return inst;
}

std::variant<PretrainInstance, Skip> enforce_budgets(PretrainInstance inst, const BuildConfig& config) {
  auto& L = inst.layout;
  const std::size_t question_tokens = count_tokens(L.question_block);

  // Source: mode token and prepended questions are never cut.
  std::size_t prefix = inst.mode == Mode::reconstruct ? 0 : 1;
  if (inst.mode == Mode::answer) {
    if (2 * question_tokens > config.input_budget)
      return Skip{inst.id, "questions exceed half input budget"};
    prefix += question_tokens;
  }
  if (prefix >= config.input_budget) return Skip{inst.id, "no room for document in input budget"};
  const std::size_t body_room = config.input_budget - prefix;
  if (count_tokens(L.body) > body_room) {
    L.body.resize(prefix_end_for_tokens(L.body, body_room));
    rstrip(L.body);
    inst.meta.truncated.source = true;
  }

  // Target: the question block is never cut; summary text drops whole
  // trailing sentences.
  std::size_t target_fixed = 0;
  if (inst.mode == Mode::ask || inst.mode == Mode::ask_and_answer) {
    target_fixed = question_tokens + (inst.mode == Mode::ask_and_answer ? 1 : 0);
    const bool needs_summary = inst.mode == Mode::ask_and_answer;
    if (target_fixed > config.target_budget || (needs_summary && target_fixed >= config.target_budget))
      return Skip{inst.id, "question block exceeds target budget"};
  }
  if (inst.mode != Mode::ask) {
    const std::size_t room = config.target_budget - target_fixed;
    auto& sents = L.summary_sentences;
    while (sents.size() > 1 && sum_tokens(sents) > room) {
      sents.pop_back();
      inst.meta.truncated.target = true;
    }
    if (!sents.empty() && count_tokens(sents.front()) > room) {
      sents.front().resize(prefix_end_for_tokens(sents.front(), room));
      rstrip(sents.front());
      inst.meta.truncated.target = true;
    }
  }
  compose(inst);
  return inst;
}

std::string neutralize_reserved_tokens(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    out.push_back(text[i]);
    if (text[i] != '<') continue;
    for (auto tok : {kAskAnswerToken, kAnswerToken, kAskToken, kQsepToken, kMaskToken}) {
      if (text.substr(i, tok.size()) == tok) {
        out.push_back(' ');
        break;
      }
    }
  }
  return out;
}

std::string instance_to_json(const PretrainInstance& inst) {
  nlohmann::json questions = nlohmann::json::array();
  for (const auto& q : inst.meta.questions)
    questions.push_back({{"text", q.text}, {"source_index", q.source_index}});
  const auto& t = inst.meta.truncated;
  nlohmann::json j = {
      {"id", inst.id},
      {"mode", std::string(to_string(inst.mode))},
      {"source", inst.source},
      {"target", inst.target},
      {"meta",
       {{"selected", inst.meta.selected},
        {"masked", inst.meta.masked},
        {"kept", inst.meta.kept},
        {"questions", questions},
        {"truncated",
         {{"chunk", t.chunk}, {"summary", t.summary}, {"source", t.source}, {"target", t.target}}}}}};
  return j.dump();
}

}  // namespace qaug
