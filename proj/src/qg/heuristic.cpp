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
#include <set>
#include <string>
#include <unordered_set>

#include "qaug/corpus.hpp"
#include "qaug/qg.hpp"

namespace qaug {
namespace {

const std::unordered_set<std::string> kAuxiliaries = {
    "am",    "is",   "are",    "was",   "were",  "be",  "been", "being", "has",
    "have",  "had",  "do",     "does",  "did",   "will", "would", "can",  "could",
    "shall", "should", "may",  "might", "must"};

const std::unordered_set<std::string> kIrregularPast = {
    "was",  "were", "had",  "did",   "said", "went",    "made",  "took", "got",
    "saw",  "came", "gave", "knew",  "thought", "told", "found", "left", "ran",
    "sat",  "felt", "kept", "began", "brought", "wrote", "spoke", "met", "led",
    "held", "stood", "heard", "meant", "lost", "paid", "sent",  "built", "taught"};

const std::unordered_set<std::string> kDeterminers = {
    "the", "a", "an", "this", "that", "these", "those", "his", "her", "its",
    "their", "our", "my", "your", "some", "every", "each"};

const std::unordered_set<std::string> kPronouns = {
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them"};

const std::unordered_set<std::string> kFunctionWords = {
    "in", "on", "at", "by", "for", "with", "about", "of", "to", "from", "into", "over",
    "under", "after", "before", "between", "through", "during", "without", "within", "as",
    "and", "or", "but", "nor", "so", "yet", "because", "while", "if", "than", "when",
    "where", "which", "who", "whom", "whose", "what", "there", "here", "then", "not", "also"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         static_cast<unsigned char>(c) >= 0x80;
}

// A whitespace-delimited word with edge punctuation split off.
struct Word {
  std::size_t begin = 0;  // core, without edge punctuation
  std::size_t end = 0;
  std::size_t raw_begin = 0;
  std::size_t raw_end = 0;
  std::string low;
  bool capitalized = false;
  bool trailing_punct = false;  // punctuation between the core and next space
};

std::vector<Word> split_words(std::string_view s) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    const std::size_t rb = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    const std::size_t re = i;
    std::size_t b = rb, e = re;
    while (b < e && !is_alnum(s[b])) ++b;
    while (e > b && !is_alnum(s[e - 1])) --e;
    if (b == e) continue;  // punctuation-only chunk
    Word w;
    w.begin = b;
    w.end = e;
    w.raw_begin = rb;
    w.raw_end = re;
    w.low = lower(s.substr(b, e - b));
    w.capitalized = s[b] >= 'A' && s[b] <= 'Z';
    w.trailing_punct = e < re;
    words.push_back(std::move(w));
  }
  return words;
}

bool is_past(const std::string& w) {
  return kIrregularPast.count(w) > 0 || (w.size() >= 4 && w.ends_with("ed"));
}

bool is_verb(const std::string& w) { return kAuxiliaries.count(w) > 0 || is_past(w); }

}  // namespace

std::string HeuristicBackend::do_generate(const QgRequest& req) {
  constexpr std::size_t kMaxSubjectWords = 8;
  const std::string_view s = req.answer_sentence;
  const auto words = split_words(s);
  if (words.empty()) return "What is this about?";

  std::size_t verb = words.size();
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (is_verb(words[k].low)) {
      verb = k;
      break;
    }
  }
  std::size_t subject_len = std::min({verb, words.size(), kMaxSubjectWords});
  if (subject_len == 0) subject_len = 1;
  const bool past = verb < words.size() && is_past(words[verb].low);

  const std::size_t b = words.front().begin;
  std::string subject(s.substr(b, words[subject_len - 1].end - b));
  if (kDeterminers.count(words.front().low)) subject[0] = static_cast<char>(std::tolower(subject[0]));
  if (past) return "What did " + subject + " do?";
  return "What is true of " + subject + "?";
}

std::string HeuristicBackend::do_answer(std::string_view question, std::string_view context) {
  constexpr std::size_t kMaxSpan = 8;
  const auto toks = word_tokenize_with_offsets(context);
  std::set<std::string> qvocab;
  for (auto& t : content_tokens(question)) qvocab.insert(std::move(t));

  std::size_t best_overlap = 0, best_len = 0, best_start = 0;
  bool found = false;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    std::size_t overlap = 0;
    for (std::size_t len = 1; len <= kMaxSpan && i + len <= toks.size(); ++len) {
      const auto& t = toks[i + len - 1];
      if (!is_punctuation_token(t.token) && qvocab.count(t.token)) ++overlap;
      if (!found || overlap > best_overlap || (overlap == best_overlap && len > best_len)) {
        best_overlap = overlap;
        best_len = len;
        best_start = i;
        found = true;
      }
    }
  }
  if (!found) return std::string(context);
  const auto b = toks[best_start].begin;
  const auto e = toks[best_start + best_len - 1].end;
  return std::string(context.substr(b, e - b));
}

std::vector<NounPhrase> HeuristicBackend::do_noun_phrases(std::string_view sentence) {
  const auto words = split_words(sentence);
  std::vector<NounPhrase> out;
  auto emit = [&](std::size_t first, std::size_t last) {
    const auto b = words[first].begin;
    const auto e = words[last].end;
    out.push_back({b, e, std::string(sentence.substr(b, e - b))});
  };
  auto terminates = [&](std::size_t k) {
    const auto& w = words[k].low;
    if (is_verb(w) || kFunctionWords.count(w) || kPronouns.count(w) || kDeterminers.count(w))
      return true;
    return k > 0 && w.ends_with("s") && kPronouns.count(words[k - 1].low) > 0;
  };
  // Punctuation glued to the front of a word (e.g. an opening quote) also
  // separates phrases.
  auto leading_punct = [&](std::size_t k) { return words[k].begin > words[k].raw_begin; };

  std::size_t k = 0;
  while (k < words.size()) {
    const auto& w = words[k];
    if (kDeterminers.count(w.low) && !w.trailing_punct) {
      std::size_t last = k;
      std::size_t j = k + 1;
      while (j < words.size() && !terminates(j) && !leading_punct(j)) {
        last = j;
        if (words[j].trailing_punct) break;
        ++j;
      }
      if (last > k) {
        emit(k, last);
        k = last + 1;
        continue;
      }
      ++k;
      continue;
    }
    if (w.capitalized && !terminates(k)) {
      std::size_t last = k;
      std::size_t j = k + 1;
      if (!w.trailing_punct) {
        while (j < words.size() && words[j].capitalized && !terminates(j) && !leading_punct(j)) {
          last = j;
          if (words[j].trailing_punct) break;
          ++j;
        }
      }
      emit(k, last);
      k = last + 1;
      continue;
    }
    ++k;
  }
  return out;
}

}  // namespace qaug
