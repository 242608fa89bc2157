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

#include "qaug/metrics.hpp"

#include <algorithm>
#include <set>
#include <string_view>
#include <unordered_map>

#include "qaug/corpus.hpp"
#include "qaug/errors.hpp"

namespace qaug {
namespace {

std::unordered_map<std::string, std::size_t> ngram_counts(TokenSpan tokens, int n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::set<std::string> vocabulary(TokenSpan tokens) {
  std::set<std::string> v;
  for (const auto& t : tokens) {
    if (!t.empty() && !is_punctuation_token(t)) v.insert(lower(t));
  }
  return v;
}

}  // namespace

RougeScore RougeScore::from_counts(std::size_t overlap, std::size_t candidate_total,
                                   std::size_t reference_total) {
  RougeScore s;
  s.precision = candidate_total ? static_cast<double>(overlap) / candidate_total : 0.0;
  s.recall = reference_total ? static_cast<double>(overlap) / reference_total : 0.0;
  // Equal to 2PR/(P+R), computed in one division so equal ratios compare equal.
  if (overlap > 0 && candidate_total > 0 && reference_total > 0)
    s.f1 = 2.0 * static_cast<double>(overlap) /
           static_cast<double>(candidate_total + reference_total);
  return s;
}

RougeScore rouge_n(TokenSpan candidate, TokenSpan reference, int n) {
  if (n != 1 && n != 2) throw PreconditionViolation("rouge_n supports n = 1 or 2");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [g, c] : cand) cand_total += c;
  for (const auto& [g, c] : ref) {
    ref_total += c;
    if (auto it = cand.find(g); it != cand.end()) overlap += std::min(c, it->second);
  }
  return RougeScore::from_counts(overlap, cand_total, ref_total);
}

std::size_t lcs_length(TokenSpan a, TokenSpan b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(TokenSpan candidate, TokenSpan reference) {
  return RougeScore::from_counts(lcs_length(candidate, reference), candidate.size(),
                                 reference.size());
}

RougeScore rouge(RougeVariant variant, TokenSpan candidate, TokenSpan reference) {
  switch (variant) {
    case RougeVariant::rouge1:
      return rouge_n(candidate, reference, 1);
    case RougeVariant::rouge2:
      return rouge_n(candidate, reference, 2);
    case RougeVariant::rougeL:
      return rouge_l(candidate, reference);
  }
  return {};
}

MultiRefResult multi_ref_max(TokenSpan candidate, const std::vector<Tokens>& references,
                             RougeVariant variant) {
  if (references.empty()) throw MissingReference();
  MultiRefResult best;
  best.score = rouge(variant, candidate, references.front());
  for (std::size_t i = 1; i < references.size(); ++i) {
    const auto s = rouge(variant, candidate, references[i]);
    if (s.f1 > best.score.f1) best = {s, i};
  }
  return best;
}

std::size_t levenshtein_distance(TokenSpan a, TokenSpan b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double levenshtein_norm(TokenSpan a, TokenSpan b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

double lexical_overlap(TokenSpan a, TokenSpan b) {
  const auto va = vocabulary(a);
  const auto vb = vocabulary(b);
  if (va.empty() || vb.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& w : va) shared += vb.count(w);
  return static_cast<double>(shared) / static_cast<double>(std::min(va.size(), vb.size()));
}

}  // namespace qaug
