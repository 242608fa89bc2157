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

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "qaug/corpus.hpp"
#include "qaug/errors.hpp"
#include "qaug/plans.hpp"

namespace qaug {
namespace {

std::vector<std::string> summary_sentences(std::string_view summary) {
  std::vector<SentenceSpan> spans;
  try {
    spans = segment_sentences(summary);
  } catch (const EmptyDocument&) {
    throw PreconditionViolation("plan extraction needs a non-empty summary");
  }
  std::vector<std::string> out;
  out.reserve(spans.size());
  for (const auto& s : spans) out.emplace_back(summary.substr(s.start, s.end - s.start));
  return out;
}

std::vector<std::string_view> split(std::string_view text, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto hit = text.find(sep, pos);
    if (hit == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      return parts;
    }
    parts.push_back(text.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::vector<const PlanUnit*>> group_by_sentence(const std::vector<PlanUnit>& units,
                                                            std::size_t sentence_count) {
  std::vector<std::vector<const PlanUnit*>> groups(sentence_count);
  for (const auto& u : units) {
    if (u.sentence_index >= sentence_count)
      throw IndexOutOfRange("plan unit refers to sentence " + std::to_string(u.sentence_index) +
                            " of " + std::to_string(sentence_count));
    groups[u.sentence_index].push_back(&u);
  }
  return groups;
}

template <typename F>
std::string join_groups(const std::vector<std::vector<const PlanUnit*>>& groups, F render) {
  std::string out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g) out.append(kSentenceSeparator);
    for (std::size_t k = 0; k < groups[g].size(); ++k) {
      if (k) out.append(kUnitSeparator);
      out += render(*groups[g][k]);
    }
  }
  return out;
}

const std::unordered_set<std::string> kArticles = {"a", "an", "the"};

std::vector<PlanUnit> pairs_to_units(const std::vector<QaPair>& pairs) {
  std::vector<PlanUnit> units;
  for (const auto& p : pairs) units.push_back({p.sentence_index, p.question, p.answer, std::nullopt});
  return units;
}

Plan make_plan(Strategy strategy, std::vector<PlanUnit> units, std::size_t sentence_count) {
  Plan plan;
  plan.strategy = strategy;
  plan.sentence_count = sentence_count;
  plan.text = serialize_plan(strategy, units, sentence_count);
  plan.units = std::move(units);
  return plan;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::content_questions:
      return "content_questions";
    case Strategy::keywords:
      return "keywords";
    case Strategy::blueprint_qa:
      return "blueprint_qa";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "content-questions" || text == "content_questions") return Strategy::content_questions;
  if (text == "keywords") return Strategy::keywords;
  if (text == "blueprint" || text == "blueprint_qa") return Strategy::blueprint_qa;
  throw ConfigError("unknown strategy \"" + std::string(text) +
                    "\" (expected content-questions, keywords, or blueprint)");
}

std::string serialize_plan(Strategy strategy, const std::vector<PlanUnit>& units,
                           std::size_t sentence_count) {
  switch (strategy) {
    case Strategy::content_questions: {
      std::string out;
      for (std::size_t i = 0; i < units.size(); ++i) {
        if (i) out.push_back(' ');
        out += units[i].question.value_or("");
      }
      return out;
    }
    case Strategy::keywords:
      return join_groups(group_by_sentence(units, sentence_count), [](const PlanUnit& u) {
        std::string out;
        const auto& kws = u.keywords ? *u.keywords : std::vector<std::string>{};
        for (std::size_t k = 0; k < kws.size(); ++k) {
          if (k) out.append(kUnitSeparator);
          out += kws[k];
        }
        return out;
      });
    case Strategy::blueprint_qa:
      return join_groups(group_by_sentence(units, sentence_count), [](const PlanUnit& u) {
        return u.question.value_or("") + " " + u.answer.value_or("");
      });
  }
  return {};
}

Plan parse_plan(std::string_view text, Strategy strategy) {
  std::vector<PlanUnit> units;
  std::size_t sentence_count = 0;
  switch (strategy) {
    case Strategy::content_questions: {
      std::size_t start = 0;
      for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '?' || (i + 1 < text.size() && text[i + 1] != ' ')) continue;
        auto q = trim(text.substr(start, i + 1 - start));
        if (!q.empty()) units.push_back({units.size(), std::string(q), std::nullopt, std::nullopt});
        start = i + 1;
      }
      if (!trim(text.substr(std::min(start, text.size()))).empty())
        throw ParseError(0, "content-question plan has trailing text without '?'");
      sentence_count = units.size();
      break;
    }
    case Strategy::keywords: {
      const auto groups = split(text, kSentenceSeparator);
      sentence_count = groups.size();
      for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<std::string> kws;
        if (!groups[g].empty())
          for (auto k : split(groups[g], kUnitSeparator)) kws.emplace_back(k);
        units.push_back({g, std::nullopt, std::nullopt, std::move(kws)});
      }
      break;
    }
    case Strategy::blueprint_qa: {
      const auto groups = split(text, kSentenceSeparator);
      sentence_count = groups.size();
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) continue;
        for (auto item : split(groups[g], kUnitSeparator)) {
          const auto q_end = item.find("? ");
          if (q_end == std::string_view::npos)
            throw ParseError(0, "blueprint unit \"" + std::string(item) + "\" has no question");
          units.push_back({g, std::string(item.substr(0, q_end + 1)),
                           std::string(item.substr(q_end + 2)), std::nullopt});
        }
      }
      break;
    }
  }
  if (units.empty()) throw EmptyPlan("plan text has no units");
  Plan plan;
  plan.strategy = strategy;
  plan.units = std::move(units);
  plan.sentence_count = sentence_count;
  plan.text = std::string(text);
  return plan;
}

std::string normalize_answer(std::string_view answer) {
  std::string s;
  for (char c : trim(answer)) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  auto is_terminal = [](char c) { return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?'; };
  while (!s.empty() && (is_terminal(s.back()) || std::isspace(static_cast<unsigned char>(s.back())))) s.pop_back();
  for (std::string_view article : {"a ", "an ", "the "}) {
    if (s.rfind(article, 0) == 0) {
      s.erase(0, article.size());
      break;
    }
  }
  return std::string(trim(s));
}

Plan extract_content_questions(std::string_view summary, Backend& backend) {
  const auto sentences = summary_sentences(summary);
  std::vector<PlanUnit> units;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto q = backend.generate_question({std::string(summary), sentences[i], i});
    units.push_back({i, std::move(q.text), std::nullopt, std::nullopt});
  }
  return make_plan(Strategy::content_questions, std::move(units), sentences.size());
}

Plan extract_keywords_plan(std::string_view summary, Backend& backend) {
  const auto sentences = summary_sentences(summary);
  std::vector<PlanUnit> units;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::vector<std::string> kws;
    for (auto& np : backend.extract_noun_phrases(sentences[i])) kws.push_back(std::move(np.text));
    units.push_back({i, std::nullopt, std::nullopt, std::move(kws)});
  }
  return make_plan(Strategy::keywords, std::move(units), sentences.size());
}

std::vector<QaPair> blueprint_candidates(std::string_view summary, Backend& backend) {
  const auto sentences = summary_sentences(summary);
  std::vector<QaPair> pairs;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (auto& np : backend.extract_noun_phrases(sentences[i])) {
      auto q = backend.generate_question({std::string(summary), np.text, i});
      QaPair p;
      p.question = std::move(q.text);
      p.answer = std::move(np.text);
      p.sentence_index = i;
      p.order = pairs.size();
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

Plan extract_blueprint(std::string_view summary, Backend& backend) {
  const std::size_t n_sentences = summary_sentences(summary).size();
  auto candidates = blueprint_candidates(summary, backend);
  score_round_trip(candidates, backend, summary);

  std::vector<QaPair> kept;
  for (const auto& p : candidates)
    if (p.round_trip_ok) kept.push_back(p);
  kept = filter_coverage(filter_rheme(std::move(kept)), candidates);
  if (kept.empty()) throw EmptyPlan("every QA pair was filtered out");
  return make_plan(Strategy::blueprint_qa, pairs_to_units(kept), n_sentences);
}

void score_round_trip(std::vector<QaPair>& pairs, Backend& backend, std::string_view context) {
  for (auto& p : pairs) {
    const auto got = backend.answer_question(p.question, context);
    if (trim(got) == trim(p.answer)) {
      p.match = RoundTrip::exact;
    } else if (normalize_answer(got) == normalize_answer(p.answer)) {
      p.match = RoundTrip::normalized;
    } else {
      p.match = RoundTrip::none;
    }
    p.round_trip_ok = p.match != RoundTrip::none;
  }
}

std::vector<QaPair> filter_round_trip(std::vector<QaPair> pairs, Backend& backend,
                                      std::string_view context) {
  score_round_trip(pairs, backend, context);
  std::erase_if(pairs, [](const QaPair& p) { return !p.round_trip_ok; });
  return pairs;
}

std::vector<QaPair> filter_rheme(std::vector<QaPair> pairs) {
  std::erase_if(pairs, [](const QaPair& p) {
    const auto q = content_tokens(p.question);
    const std::unordered_set<std::string> in_question(q.begin(), q.end());
    for (const auto& tok : content_tokens(p.answer)) {
      if (kArticles.count(tok)) continue;
      if (!in_question.count(tok)) return false;
    }
    return true;
  });
  return pairs;
}

std::vector<QaPair> filter_coverage(std::vector<QaPair> survivors,
                                    const std::vector<QaPair>& candidates) {
  std::unordered_set<std::size_t> covered;
  for (const auto& p : survivors) covered.insert(p.sentence_index);

  std::vector<const QaPair*> best;  // per orphaned sentence, in first-seen order
  for (const auto& c : candidates) {
    if (covered.count(c.sentence_index)) continue;
    auto it = std::find_if(best.begin(), best.end(),
                           [&](const QaPair* b) { return b->sentence_index == c.sentence_index; });
    if (it == best.end()) {
      best.push_back(&c);
    } else if (c.match > (*it)->match) {
      *it = &c;
    }
  }
  for (const auto* b : best) survivors.push_back(*b);
  std::stable_sort(survivors.begin(), survivors.end(), [](const QaPair& a, const QaPair& b) {
    if (a.sentence_index != b.sentence_index) return a.sentence_index < b.sentence_index;
    return a.order < b.order;
  });
  return survivors;
}

}  // namespace qaug
