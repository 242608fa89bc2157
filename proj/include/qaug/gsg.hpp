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
#include <string>
#include <vector>

#include "qaug/corpus.hpp"

namespace qaug {

inline constexpr double kDefaultGapSentenceRatio = 0.45;
inline constexpr double kDefaultMaskRate = 0.8;

struct GapSelection {
  std::vector<std::size_t> selected;  // ascending
  std::vector<double> scores;         // one per document sentence
  std::vector<std::size_t> masked;    // ascending, subset of selected
  std::vector<std::size_t> kept;      // ascending, selected \ masked
};

struct MaskedDocument {
  std::string text;
  std::vector<std::size_t> mask_positions;  // sentinel k replaces sentence mask_positions[k]
};

struct PseudoSummary {
  std::vector<std::size_t> indices;  // source sentence of each entry below
  std::vector<std::string> sentences;
  std::string text;
  bool truncated = false;
};

// round(x) with halves rounded up.
std::size_t round_half_up(double x);
// clamp(round(gsr * n), 1, n)
std::size_t gap_sentence_count(std::size_t n, double gsr);
// clamp(round(mask_rate * k), 1, k) for k >= 1
std::size_t masked_count(std::size_t k, double mask_rate);

// Leave-one-out ROUGE-1 F1 of each sentence against the rest of the document.
std::vector<double> score_gap_sentences(const Document& doc);

GapSelection select_gap_sentences(const Document& doc, double gsr, std::uint64_t seed,
                                  double mask_rate = kDefaultMaskRate);

MaskedDocument apply_mask(const Document& doc, const GapSelection& sel);

PseudoSummary build_pseudo_summary(const Document& doc, const GapSelection& sel,
                                   std::size_t target_budget);

}  // namespace qaug
