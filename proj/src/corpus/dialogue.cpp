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

#include <set>

#include "qaug/corpus.hpp"
#include "qaug/errors.hpp"

namespace qaug {
namespace {

enum class Referent { speaker, speaker_possessive, both, addressee, addressee_possessive };

struct PronounRule {
  std::string_view word;
  Referent referent;
};

constexpr PronounRule kRules[] = {
    {"i", Referent::speaker},
    {"me", Referent::speaker},
    {"my", Referent::speaker_possessive},
    {"mine", Referent::speaker_possessive},
    {"we", Referent::both},
    {"us", Referent::both},
    {"you", Referent::addressee},
    {"your", Referent::addressee_possessive},
};

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || u >= 0x80;
}

const PronounRule* match(std::string_view word) {
  if (word.size() > 4) return nullptr;
  std::string low(word);
  for (char& c : low) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  for (const auto& r : kRules) {
    if (r.word == low) return &r;
  }
  return nullptr;
}

template <typename OnWord, typename OnOther>
void scan_words(std::string_view text, OnWord&& on_word, OnOther&& on_other) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(text[i])) {
      on_other(text[i]);
      ++i;
      continue;
    }
    const std::size_t b = i;
    while (i < text.size() && is_word_byte(text[i])) ++i;
    on_word(text.substr(b, i - b));
  }
}

}  // namespace

ThirdPersonRewriter::ThirdPersonRewriter(const RawRecord& dialogue) : turns_(dialogue.turns) {
  std::set<std::string> speakers;
  for (const auto& t : turns_) speakers.insert(t.speaker);
  if (speakers.size() != 2) {
    throw UnsupportedDialogue("dialogue " + dialogue.id + " has " +
                              std::to_string(speakers.size()) + " speakers, expected 2");
  }
  // Order of first appearance, so A is whoever speaks first.
  a_ = turns_.front().speaker;
  for (const auto& s : speakers)
    if (s != a_) b_ = s;
}

std::string ThirdPersonRewriter::addressee_of(const std::string& speaker) const {
  return speaker == a_ ? b_ : a_;
}

std::string ThirdPersonRewriter::rewrite_turn(std::size_t turn_index) const {
  const auto& t = turns_.at(turn_index);
  return rewrite(t.utterance, t.speaker, addressee_of(t.speaker));
}

std::string ThirdPersonRewriter::rewrite(std::string_view text, std::string_view speaker,
                                         std::string_view addressee) {
  std::string out;
  out.reserve(text.size() + 16);
  scan_words(
      text,
      [&](std::string_view w) {
        const auto* rule = match(w);
        if (!rule) {
          out.append(w);
          return;
        }
        switch (rule->referent) {
          case Referent::speaker:
            out.append(speaker);
            break;
          case Referent::speaker_possessive:
            out.append(speaker).append("'s");
            break;
          case Referent::both:
            out.append(speaker).append(" and ").append(addressee);
            break;
          case Referent::addressee:
            out.append(addressee);
            break;
          case Referent::addressee_possessive:
            out.append(addressee).append("'s");
            break;
        }
      },
      [&](char c) { out.push_back(c); });
  return out;
}

std::size_t ThirdPersonRewriter::count_matches(std::string_view text) {
  std::size_t n = 0;
  scan_words(
      text, [&](std::string_view w) { n += match(w) != nullptr; }, [](char) {});
  return n;
}

ThirdPersonRewriter to_third_person(const RawRecord& dialogue) {
  if (dialogue.kind != RecordKind::dialogue)
    throw PreconditionViolation("to_third_person expects a dialogue record: " + dialogue.id);
  return ThirdPersonRewriter(dialogue);
}

}  // namespace qaug
