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
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qaug/corpus.hpp"
#include "qaug/gsg.hpp"
#include "qaug/qg.hpp"

namespace qaug {

enum class Mode { reconstruct, ask, answer, ask_and_answer };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);
bool has_questions(Mode mode);
// Source prefix for a mode; empty for reconstruct.
std::string_view mode_token(Mode mode);

struct TruncationFlags {
  bool chunk = false;    // input document was cut to fit the input budget
  bool summary = false;  // pseudo-summary dropped sentences (or kept one over budget)
  bool source = false;   // document tail trimmed by budget enforcement
  bool target = false;   // summary sentences trimmed by budget enforcement
};

struct InstanceMeta {
  std::vector<std::size_t> selected;
  std::vector<std::size_t> masked;
  std::vector<std::size_t> kept;
  std::vector<Question> questions;
  TruncationFlags truncated;
};

// Components the serialized source/target are built from; kept so budget
// enforcement can trim the right part.
struct InstanceLayout {
  std::string body;                            // masked document
  std::string question_block;                  // questions joined by spaces
  std::vector<std::string> summary_sentences;  // pseudo-summary, after rewriting
};

struct PretrainInstance {
  std::string id;
  Mode mode = Mode::reconstruct;
  std::string source;
  std::string target;
  InstanceMeta meta;
  InstanceLayout layout;
};

struct Skip {
  std::string id;
  std::string reason;
};

struct BuildConfig {
  double gsr = kDefaultGapSentenceRatio;
  double mask_rate = kDefaultMaskRate;
  double ask_answer_proportion = 0.25;
  // Mode drawn instead of reconstruct with probability ask_answer_proportion.
  Mode augmentation_mode = Mode::ask_and_answer;
  std::size_t input_budget = 512;
  std::size_t target_budget = 256;
  std::uint64_t seed = 0;
  BackendSpec backend;
  RecordKind corpus_kind = RecordKind::prose;
  double max_skip_rate = 0.10;
  std::size_t workers = 1;

  void validate() const;  // throws ConfigError
};

Mode choose_mode(const BuildConfig& config, std::string_view doc_id);

// Builds source/target for `mode`. Dialogue documents get their summary
// sentences and questions rewritten to third person; the source keeps the
// dialogue as is. Throws QuestionCountMismatch when a question-bearing mode
// does not get one question per pseudo-summary sentence.
PretrainInstance assemble_instance(const Document& doc, const GapSelection& sel,
                                   const PseudoSummary& pseudo,
                                   const std::vector<Question>& questions, Mode mode);

std::variant<PretrainInstance, Skip> enforce_budgets(PretrainInstance instance,
                                                     const BuildConfig& config);

// Replaces literal reserved markers in corpus text so they cannot be
// confused with the ones the builder inserts.
std::string neutralize_reserved_tokens(std::string_view text);

std::string instance_to_json(const PretrainInstance& instance);

struct BuildReport {
  std::size_t records = 0;
  std::size_t documents = 0;  // units after chunking/packing, plus empty records
  std::size_t emitted = 0;
  std::size_t skipped = 0;
  std::size_t truncated_chunks = 0;
  std::map<std::string, std::size_t> mode_counts;
  std::map<std::string, std::size_t> skip_reasons;
  std::vector<std::string> skipped_ids;  // first few, for diagnostics
  double mean_source_tokens = 0.0;
  double mean_target_tokens = 0.0;
  bool aborted = false;

  std::string to_json() const;
};

// Outcome for one document, as produced by the per-document pipeline.
struct DocumentOutcome {
  Mode mode = Mode::reconstruct;
  std::variant<PretrainInstance, Skip> result;
};

DocumentOutcome process_document(const Document& doc, const BuildConfig& config, Backend& backend);

// Streams JSONL records from `corpus`, writes one JSONL instance per emitted
// document to `out` in input order. Malformed input throws ParseError.
BuildReport build_dataset(std::istream& corpus, std::ostream& out, const BuildConfig& config,
                          Backend& backend);

}  // namespace qaug
