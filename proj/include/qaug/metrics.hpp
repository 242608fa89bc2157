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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qaug {

using Tokens = std::vector<std::string>;
using TokenSpan = std::span<const std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore from_counts(std::size_t overlap, std::size_t candidate_total,
                                std::size_t reference_total);
};

enum class RougeVariant { rouge1, rouge2, rougeL };

// Clipped n-gram overlap, n in {1, 2}.
RougeScore rouge_n(TokenSpan candidate, TokenSpan reference, int n);
RougeScore rouge_l(TokenSpan candidate, TokenSpan reference);
RougeScore rouge(RougeVariant variant, TokenSpan candidate, TokenSpan reference);

std::size_t lcs_length(TokenSpan a, TokenSpan b);

// Score against the reference with the highest F1; ties go to the lowest
// index. Throws MissingReference when `references` is empty.
struct MultiRefResult {
  RougeScore score;
  std::size_t best_index = 0;
};
MultiRefResult multi_ref_max(TokenSpan candidate, const std::vector<Tokens>& references,
                             RougeVariant variant);

std::size_t levenshtein_distance(TokenSpan a, TokenSpan b);
// Distance divided by max(|a|, |b|); 0 when both are empty.
double levenshtein_norm(TokenSpan a, TokenSpan b);

// |V(a) ∩ V(b)| / min(|V(a)|, |V(b)|) over lowercased, non-punctuation
// vocabularies; 0 if either vocabulary is empty.
double lexical_overlap(TokenSpan a, TokenSpan b);

struct OverlapStats {
  double length_ratio = 0.0;                 // plan words / summary words, averaged
  double summary_rouge1 = 0.0;               // mean ROUGE-1 F1 of plan vs summary
  std::optional<double> mean_overlap;        // across plans of the same document
  std::optional<double> max_overlap;
  std::size_t plans = 0;
  std::size_t plan_pairs = 0;
};

}  // namespace qaug
