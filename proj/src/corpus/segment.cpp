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
#include <array>

#include "qaug/corpus.hpp"
#include "qaug/errors.hpp"

namespace qaug {
namespace {

constexpr std::array<std::string_view, 9> kAbbreviations = {
    "mr", "mrs", "dr", "prof", "st", "vs", "etc", "e.g", "i.e"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Length of a closing quote/bracket at i, 0 if none.
std::size_t closer_len(std::string_view t, std::size_t i) {
  const char c = t[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (t.substr(i, 3) == "\xE2\x80\x9D" || t.substr(i, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

bool opens_sentence(std::string_view t, std::size_t i) {
  const char c = t[i];
  if (c >= 'A' && c <= 'Z') return true;
  if (c == '"' || c == '\'') return true;
  return t.substr(i, 3) == "\xE2\x80\x9C" || t.substr(i, 3) == "\xE2\x80\x98";
}

bool is_abbreviation(std::string_view t, std::size_t period) {
  std::size_t b = period;
  while (b > 0 && !is_space(t[b - 1])) --b;
  std::string word;
  for (std::size_t i = b; i < period; ++i) {
    const char c = t[i];
    if (word.empty() && (c == '(' || c == '"' || c == '\'' || c == '[')) continue;
    word.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

}  // namespace

std::vector<SentenceSpan> segment_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n && is_space(text[i])) ++i;
  if (i == n) throw EmptyDocument("text is empty or whitespace-only");

  std::size_t start = i;
  while (i < n) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    const std::size_t punct_begin = i;
    while (i < n && is_terminal(text[i])) ++i;
    const bool single_period = (i - punct_begin == 1) && text[punct_begin] == '.';
    while (i < n) {
      const auto len = closer_len(text, i);
      if (len == 0) break;
      i += len;
    }
    const std::size_t end = i;
    if (end >= n || !is_space(text[end])) continue;
    std::size_t next = end;
    while (next < n && is_space(text[next])) ++next;
    if (next == n) break;
    if (!opens_sentence(text, next)) continue;
    if (single_period && is_abbreviation(text, punct_begin)) continue;
    spans.push_back({start, end, 0});
    start = next;
    i = next;
  }
  std::size_t last = n;
  while (last > start && is_space(text[last - 1])) --last;
  spans.push_back({start, last, 0});

  for (auto& s : spans) s.token_count = count_tokens(text.substr(s.start, s.end - s.start));
  return spans;
}

std::size_t Document::token_count() const {
  std::size_t total = 0;
  for (const auto& s : sentences) total += s.token_count;
  return total;
}

const TurnRef* Document::turn_of(std::size_t sentence) const {
  const auto& s = sentences.at(sentence);
  for (const auto& t : turns) {
    if (s.start >= t.start && s.end <= t.end) return &t;
  }
  return nullptr;
}

}  // namespace qaug
