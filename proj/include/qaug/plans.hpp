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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qaug/metrics.hpp"
#include "qaug/qg.hpp"

namespace qaug {

enum class Strategy { content_questions, keywords, blueprint_qa };

std::string_view to_string(Strategy s);
// Accepts "content-questions", "keywords", "blueprint" and the enum spellings.
Strategy parse_strategy(std::string_view text);

// Plan separators, as used in published keyword/blueprint plans.
inline constexpr std::string_view kUnitSeparator = " | ";
inline constexpr std::string_view kSentenceSeparator = " || ";

struct PlanUnit {
  std::size_t sentence_index = 0;
  std::optional<std::string> question;
  std::optional<std::string> answer;
  std::optional<std::vector<std::string>> keywords;

  bool operator==(const PlanUnit&) const = default;
};

struct Plan {
  Strategy strategy = Strategy::content_questions;
  std::vector<PlanUnit> units;
  std::size_t sentence_count = 0;
  std::string text;

  bool operator==(const Plan&) const = default;
};

// Canonical text of a plan:
//   content questions: questions joined by single spaces
//   keywords:          keywords joined by " | ", sentences by " || "
//   blueprint:         "Q? answer" joined by " | ", sentences by " || "
std::string serialize_plan(Strategy strategy, const std::vector<PlanUnit>& units,
                           std::size_t sentence_count);
Plan parse_plan(std::string_view text, Strategy strategy);

enum class RoundTrip { none = 0, normalized = 1, exact = 2 };

struct QaPair {
  std::string question;
  std::string answer;  // noun phrase from the summary sentence
  std::size_t sentence_index = 0;
  std::size_t order = 0;  // position among all candidates (sentence, then phrase order)
  bool round_trip_ok = false;
  RoundTrip match = RoundTrip::none;

  bool operator==(const QaPair&) const = default;
};

// Lowercase, trim, drop a leading article and terminal punctuation.
std::string normalize_answer(std::string_view answer);

Plan extract_content_questions(std::string_view summary, Backend& backend);
Plan extract_keywords_plan(std::string_view summary, Backend& backend);
Plan extract_blueprint(std::string_view summary, Backend& backend);

// One pair per noun phrase per sentence, questions generated with the full
// summary as context.
std::vector<QaPair> blueprint_candidates(std::string_view summary, Backend& backend);

// Answers each question over `context` and records how well the answer
// matches the pair's own answer.
void score_round_trip(std::vector<QaPair>& pairs, Backend& backend, std::string_view context);
// Scores the pairs and keeps those whose answers round-trip.
std::vector<QaPair> filter_round_trip(std::vector<QaPair> pairs, Backend& backend,
                                      std::string_view context);
// Drops pairs whose question already contains every content word of the answer.
std::vector<QaPair> filter_rheme(std::vector<QaPair> pairs);
// Re-adds, for each sentence that had candidates but lost all of them, the
// candidate with the best round-trip match. Never removes pairs.
std::vector<QaPair> filter_coverage(std::vector<QaPair> survivors,
                                    const std::vector<QaPair>& candidates);

// ---- plan files and analysis -------------------------------------------------

struct PlanRecord {
  std::string doc_id;
  std::string query_id;
  Plan plan;
};

std::string plan_record_to_json(const PlanRecord& record);
PlanRecord parse_plan_record(std::string_view line, std::size_t line_no);

struct SummaryRecord {
  std::string doc_id;
  std::string query_id;
  std::string summary;
};
SummaryRecord parse_summary_record(std::string_view line, std::size_t line_no);

using SummaryKey = std::pair<std::string, std::string>;  // (doc_id, query_id)

// Word count used for plan and dataset lengths: non-punctuation tokens.
std::size_t word_count(std::string_view text);

std::map<Strategy, OverlapStats> analyze_plans(const std::vector<PlanRecord>& plans,
                                               const std::map<SummaryKey, std::string>& summaries);

struct DatasetStats {
  std::size_t examples = 0;
  std::size_t documents = 0;
  std::size_t references = 0;  // total reference summaries
  double mean_document_words = 0.0;  // averaged over examples
  double mean_summary_words = 0.0;  // averaged over all references
};

// Reads {"doc_id", "document", "summary" | "summaries": [...]} records. The
// document text may be omitted on repeated doc_ids.
DatasetStats dataset_stats(std::istream& in);

}  // namespace qaug
