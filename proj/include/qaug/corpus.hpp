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
#include <string>
#include <string_view>
#include <vector>

namespace qaug {

enum class RecordKind { prose, dialogue };

std::string_view to_string(RecordKind kind);

struct Turn {
  std::string speaker;
  std::string utterance;
};

// One line of an input corpus. Exactly one of `text` / `turns` is used,
// selected by `kind`.
struct RawRecord {
  std::string id;
  RecordKind kind = RecordKind::prose;
  std::string text;
  std::vector<Turn> turns;
};

struct SentenceSpan {
  std::size_t start = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
  std::size_t token_count = 0;
};

// Speaker attribution of a byte range inside a dialogue document.
struct TurnRef {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string speaker;
  std::string addressee;
};

struct Origin {
  std::string record_id;
  std::size_t chunk_index = 0;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<SentenceSpan> sentences;
  Origin origin;
  bool truncated = false;
  std::vector<TurnRef> turns;  // dialogue documents only

  std::string_view sentence_text(std::size_t i) const {
    const auto& s = sentences.at(i);
    return std::string_view(text).substr(s.start, s.end - s.start);
  }
  std::size_t token_count() const;
  // Turn containing sentence i, or nullptr for prose.
  const TurnRef* turn_of(std::size_t sentence) const;
};

// ---- tokenization ----------------------------------------------------------

struct TokenOffset {
  std::string token;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Reserved markers that must survive tokenization as single tokens.
inline constexpr std::string_view kMaskToken = "<mask>";
inline constexpr std::string_view kAskToken = "<ask>";
inline constexpr std::string_view kAnswerToken = "<answer>";
inline constexpr std::string_view kAskAnswerToken = "<ask&answer>";
inline constexpr std::string_view kQsepToken = "<qsep>";

bool is_reserved_token(std::string_view s);

// Lowercased word tokens. Letters/digits group into words; every punctuation
// character is its own token; the reserved markers above are one token each.
std::vector<std::string> word_tokenize(std::string_view text);
std::vector<TokenOffset> word_tokenize_with_offsets(std::string_view text);
std::size_t count_tokens(std::string_view text);

bool is_punctuation_token(std::string_view token);
// word_tokenize minus punctuation-only tokens; the unit for ROUGE and overlap.
std::vector<std::string> content_tokens(std::string_view text);
// Byte offset just past the `n`-th token (or text.size() if fewer tokens).
std::size_t prefix_end_for_tokens(std::string_view text, std::size_t n);

// ---- segmentation and packing ---------------------------------------------

std::vector<SentenceSpan> segment_sentences(std::string_view text);

std::vector<Document> chunk_document(const RawRecord& record, std::size_t input_budget);

// Renders one dialogue as "SPEAKER: utterance\n" lines.
std::string render_dialogue(const RawRecord& record);

// Packs whole dialogues greedily into documents of at most `input_budget`
// word tokens. Used batch-wise; DialoguePacker is the streaming form.
std::vector<Document> concat_dialogues(const std::vector<RawRecord>& records,
                                       std::size_t input_budget);

class DialoguePacker {
 public:
  explicit DialoguePacker(std::size_t input_budget) : budget_(input_budget) {}

  // Adds a dialogue; returns a document when the pending pack is closed.
  std::vector<Document> push(const RawRecord& record);
  std::optional<Document> finish();

 private:
  std::size_t budget_;
  std::vector<RawRecord> pending_;
  std::size_t pending_tokens_ = 0;
  std::size_t emitted_ = 0;

  Document make_document(const std::vector<RawRecord>& dialogues, bool truncated);
};

// ---- third person ---------------------------------------------------------

// Rewrites first/second person pronouns in a two-speaker dialogue turn into
// speaker names. Verbs are not re-inflected.
class ThirdPersonRewriter {
 public:
  explicit ThirdPersonRewriter(const RawRecord& dialogue);

  const std::string& speaker_a() const { return a_; }
  const std::string& speaker_b() const { return b_; }

  std::string rewrite_turn(std::size_t turn_index) const;
  std::string addressee_of(const std::string& speaker) const;

  static std::string rewrite(std::string_view text, std::string_view speaker,
                             std::string_view addressee);
  // Number of pronoun substitutions `rewrite` would make.
  static std::size_t count_matches(std::string_view text);

 private:
  std::vector<Turn> turns_;
  std::string a_;
  std::string b_;
};

ThirdPersonRewriter to_third_person(const RawRecord& dialogue);

// ---- records --------------------------------------------------------------

// Parses one JSONL corpus line; throws ParseError carrying `line_no`.
RawRecord parse_raw_record(std::string_view line, std::size_t line_no);
std::string serialize_raw_record(const RawRecord& record);

}  // namespace qaug
