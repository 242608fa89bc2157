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

#include "qaug/gsg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "qaug/errors.hpp"
#include "qaug/metrics.hpp"
#include "qaug/rng.hpp"

namespace qaug {
namespace {

using Counts = std::unordered_map<std::string, std::size_t>;

Counts unigram_counts(const std::vector<std::string>& tokens) {
  Counts c;
  for (const auto& t : tokens) ++c[t];
  return c;
}


void check_selection(const Document& doc, const GapSelection& sel) {
  const auto n = doc.sentences.size();
  for (auto idx : sel.selected)
    if (idx >= n) throw IndexOutOfRange("selected sentence " + std::to_string(idx) + " of " + std::to_string(n));
  for (auto idx : sel.masked)
    if (idx >= n) throw IndexOutOfRange("masked sentence " + std::to_string(idx) + " of " + std::to_string(n));
}

}  // namespace

std::size_t round_half_up(double x) {
  // The epsilon absorbs representation error in products like 0.45 * 30.
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

std::size_t gap_sentence_count(std::size_t n, double gsr) {
  if (n == 0) return 0;
  return std::clamp<std::size_t>(round_half_up(gsr * static_cast<double>(n)), 1, n);
}

std::size_t masked_count(std::size_t k, double mask_rate) {
  if (k == 0) return 0;
  return std::clamp<std::size_t>(round_half_up(mask_rate * static_cast<double>(k)), 1, k);
}

std::vector<double> score_gap_sentences(const Document& doc) {
  if (doc.sentences.empty()) throw EmptyDocument("document " + doc.id + " has no sentences");
  const std::size_t n = doc.sentences.size();
  std::vector<std::vector<std::string>> toks(n);
  Counts total;
  std::size_t total_len = 0;
  for (std::size_t i = 0; i < n; ++i) {
    toks[i] = content_tokens(doc.sentence_text(i));
    for (const auto& t : toks[i]) ++total[t];
    total_len += toks[i].size();
  }

  std::vector<double> scores(n, 0.0);
  if (n == 1) return scores;
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = unigram_counts(toks[i]);
    std::size_t overlap = 0;
    for (const auto& [w, c] : own) {
      const std::size_t rest = total.at(w) - c;
      overlap += std::min(c, rest);
    }
    scores[i] = RougeScore::from_counts(overlap, toks[i].size(), total_len - toks[i].size()).f1;
  }
  return scores;
}

GapSelection select_gap_sentences(const Document& doc, double gsr, std::uint64_t seed,
                                  double mask_rate) {
  if (!(gsr > 0.0 && gsr <= 1.0)) throw PreconditionViolation("gap sentence ratio must be in (0, 1]");
  if (!(mask_rate >= 0.0 && mask_rate <= 1.0)) throw PreconditionViolation("mask rate must be in [0, 1]");

  GapSelection sel;
  sel.scores = score_gap_sentences(doc);
  const std::size_t n = sel.scores.size();
  const std::size_t k = gap_sentence_count(n, gsr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sel.scores[a] > sel.scores[b]; });
  sel.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(sel.selected.begin(), sel.selected.end());

  // Partial Fisher-Yates over the selected indices picks the masked subset.
  const std::size_t m = masked_count(k, mask_rate);
  std::vector<std::size_t> pool = sel.selected;
  KeyedRng rng(seed, doc.id, "mask");
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  sel.masked.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
  sel.kept.assign(pool.begin() + static_cast<std::ptrdiff_t>(m), pool.end());
  std::sort(sel.masked.begin(), sel.masked.end());
  std::sort(sel.kept.begin(), sel.kept.end());
  return sel;
}

MaskedDocument apply_mask(const Document& doc, const GapSelection& sel) {
  check_selection(doc, sel);
  MaskedDocument out;
  std::size_t cursor = 0;
  for (auto idx : sel.masked) {
    const auto& s = doc.sentences[idx];
    out.text.append(doc.text, cursor, s.start - cursor);
    out.text.append(kMaskToken);
    out.mask_positions.push_back(idx);
    cursor = s.end;
  }
  out.text.append(doc.text, cursor, std::string::npos);
  return out;
}

PseudoSummary build_pseudo_summary(const Document& doc, const GapSelection& sel,
                                   std::size_t target_budget) {
  check_selection(doc, sel);
  PseudoSummary ps;
  std::size_t used = 0;
  for (auto idx : sel.selected) {
    const std::size_t t = doc.sentences[idx].token_count;
    if (!ps.sentences.empty() && used + t > target_budget) {
      ps.truncated = true;
      break;
    }
    if (ps.sentences.empty() && t > target_budget) ps.truncated = true;
    ps.indices.push_back(idx);
    ps.sentences.emplace_back(doc.sentence_text(idx));
    used += t;
  }
  for (std::size_t i = 0; i < ps.sentences.size(); ++i) {
    if (i) ps.text.push_back(' ');
    ps.text += ps.sentences[i];
  }
  return ps;
}

}  // namespace qaug
