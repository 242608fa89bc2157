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
#include <istream>
#include <nlohmann/json.hpp>
#include <unordered_map>
#include <unordered_set>

#include "qaug/corpus.hpp"
#include "qaug/errors.hpp"
#include "qaug/plans.hpp"

namespace qaug {
namespace {

nlohmann::json parse_line(std::string_view line, std::size_t line_no) {
  try {
    auto j = nlohmann::json::parse(line);
    if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

std::string required_string(const nlohmann::json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw ParseError(line_no, std::string("missing or non-string field \"") + key + "\"");
  return it->get<std::string>();
}

std::string optional_string(const nlohmann::json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  if (!it->is_string()) throw ParseError(line_no, std::string("field \"") + key + "\" must be a string");
  return it->get<std::string>();
}

bool blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

}  // namespace

std::string plan_record_to_json(const PlanRecord& record) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : record.plan.units) {
    nlohmann::json ju = {{"sentence_index", u.sentence_index}};
    if (u.question) ju["question"] = *u.question;
    if (u.answer) ju["answer"] = *u.answer;
    if (u.keywords) ju["keywords"] = *u.keywords;
    units.push_back(std::move(ju));
  }
  nlohmann::json j = {{"doc_id", record.doc_id},
                      {"query_id", record.query_id},
                      {"strategy", std::string(to_string(record.plan.strategy))},
                      {"plan_text", record.plan.text},
                      {"units", std::move(units)}};
  return j.dump();
}

PlanRecord parse_plan_record(std::string_view line, std::size_t line_no) {
  const auto j = parse_line(line, line_no);
  PlanRecord rec;
  rec.doc_id = required_string(j, "doc_id", line_no);
  rec.query_id = optional_string(j, "query_id", line_no);
  try {
    const auto strategy = parse_strategy(required_string(j, "strategy", line_no));
    rec.plan = parse_plan(required_string(j, "plan_text", line_no), strategy);
  } catch (const ParseError& e) {
    throw ParseError(line_no, e.what());
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
  return rec;
}

SummaryRecord parse_summary_record(std::string_view line, std::size_t line_no) {
  const auto j = parse_line(line, line_no);
  return {required_string(j, "doc_id", line_no), optional_string(j, "query_id", line_no),
          required_string(j, "summary", line_no)};
}

std::size_t word_count(std::string_view text) { return content_tokens(text).size(); }

std::map<Strategy, OverlapStats> analyze_plans(const std::vector<PlanRecord>& plans,
                                               const std::map<SummaryKey, std::string>& summaries) {
  struct Acc {
    double length = 0.0, rouge = 0.0, overlap = 0.0, max_overlap = 0.0;
    std::size_t plans = 0, pairs = 0;
    std::map<std::string, std::vector<const PlanRecord*>> by_doc;
  };
  std::map<Strategy, Acc> acc;

  for (const auto& p : plans) {
    auto it = summaries.find({p.doc_id, p.query_id});
    if (it == summaries.end())
      throw MissingReference("no summary for doc \"" + p.doc_id + "\" query \"" + p.query_id + "\"");
    const auto summary = content_tokens(it->second);
    if (summary.empty())
      throw PreconditionViolation("summary for doc \"" + p.doc_id + "\" has no words");
    const auto plan = content_tokens(p.plan.text);
    auto& a = acc[p.plan.strategy];
    a.length += static_cast<double>(plan.size()) / static_cast<double>(summary.size());
    a.rouge += rouge_n(plan, summary, 1).f1;
    ++a.plans;
    a.by_doc[p.doc_id].push_back(&p);
  }

  std::map<Strategy, OverlapStats> out;
  for (auto& [strategy, a] : acc) {
    OverlapStats s;
    s.plans = a.plans;
    s.length_ratio = a.length / static_cast<double>(a.plans);
    s.summary_rouge1 = a.rouge / static_cast<double>(a.plans);
    for (const auto& [doc, group] : a.by_doc) {
      for (std::size_t i = 0; i < group.size(); ++i) {
        const auto ti = word_tokenize(group[i]->plan.text);
        for (std::size_t k = i + 1; k < group.size(); ++k) {
          const double o = lexical_overlap(ti, word_tokenize(group[k]->plan.text));
          a.overlap += o;
          a.max_overlap = std::max(a.max_overlap, o);
          ++a.pairs;
        }
      }
    }
    s.plan_pairs = a.pairs;
    if (a.pairs > 0) {
      s.mean_overlap = a.overlap / static_cast<double>(a.pairs);
      s.max_overlap = a.max_overlap;
    }
    out.emplace(strategy, s);
  }
  return out;
}

DatasetStats dataset_stats(std::istream& in) {
  DatasetStats stats;
  std::unordered_map<std::string, std::size_t> doc_words;
  double doc_total = 0.0, summary_total = 0.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto j = parse_line(line, line_no);
    const auto doc_id = required_string(j, "doc_id", line_no);

    auto known = doc_words.find(doc_id);
    if (j.contains("document")) {
      const auto words = word_count(required_string(j, "document", line_no));
      if (known != doc_words.end() && known->second != words)
        throw ParseError(line_no, "document \"" + doc_id + "\" differs from an earlier record");
      known = doc_words.emplace(doc_id, words).first;
    } else if (known == doc_words.end()) {
      throw ParseError(line_no, "first record for \"" + doc_id + "\" has no document text");
    }

    std::vector<std::string> refs;
    if (auto it = j.find("summaries"); it != j.end()) {
      if (!it->is_array() || it->empty())
        throw ParseError(line_no, "\"summaries\" must be a non-empty array");
      for (const auto& r : *it) {
        if (!r.is_string()) throw ParseError(line_no, "\"summaries\" entries must be strings");
        refs.push_back(r.get<std::string>());
      }
    } else {
      refs.push_back(required_string(j, "summary", line_no));
    }

    ++stats.examples;
    doc_total += static_cast<double>(known->second);
    for (const auto& r : refs) summary_total += static_cast<double>(word_count(r));
    stats.references += refs.size();
  }
  stats.documents = doc_words.size();
  if (stats.examples > 0) stats.mean_document_words = doc_total / static_cast<double>(stats.examples);
  if (stats.references > 0)
    stats.mean_summary_words = summary_total / static_cast<double>(stats.references);
  return stats;
}

}  // namespace qaug
