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

Document make_chunk(const RawRecord& record, const std::vector<SentenceSpan>& spans,
                    std::size_t first, std::size_t last, std::size_t chunk_index) {
  Document doc;
  doc.id = record.id + "#" + std::to_string(chunk_index);
  doc.origin = {record.id, chunk_index};
  const std::size_t base = spans[first].start;
  doc.text = record.text.substr(base, spans[last].end - base);
  for (std::size_t k = first; k <= last; ++k) {
    doc.sentences.push_back({spans[k].start - base, spans[k].end - base, spans[k].token_count});
  }
  return doc;
}

std::string single_line(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string render_turn(const Turn& t) { return t.speaker + ": " + single_line(t.utterance) + "\n"; }

}  // namespace

std::string_view to_string(RecordKind kind) {
  return kind == RecordKind::prose ? "prose" : "dialogue";
}

std::vector<Document> chunk_document(const RawRecord& record, std::size_t input_budget) {
  if (record.kind != RecordKind::prose)
    throw PreconditionViolation("chunk_document expects a prose record: " + record.id);
  if (input_budget == 0) throw PreconditionViolation("input budget must be positive");

  const auto spans = segment_sentences(record.text);
  std::vector<Document> chunks;
  std::size_t first = 0;
  std::size_t tokens = 0;
  bool open = false;
  auto flush = [&](std::size_t last) {
    chunks.push_back(make_chunk(record, spans, first, last, chunks.size()));
    open = false;
    tokens = 0;
  };

  for (std::size_t k = 0; k < spans.size(); ++k) {
    const std::size_t t = spans[k].token_count;
    if (open && tokens + t > input_budget) flush(k - 1);
    if (t > input_budget) {
      Document doc = make_chunk(record, spans, k, k, chunks.size());
      const auto cut = prefix_end_for_tokens(doc.text, input_budget);
      doc.text.resize(cut);
      while (!doc.text.empty() && (doc.text.back() == ' ' || doc.text.back() == '\t'))
        doc.text.pop_back();
      doc.sentences = {{0, doc.text.size(), count_tokens(doc.text)}};
      doc.truncated = true;
      chunks.push_back(std::move(doc));
      continue;
    }
    if (!open) {
      first = k;
      open = true;
    }
    tokens += t;
  }
  if (open) flush(spans.size() - 1);
  return chunks;
}

std::string render_dialogue(const RawRecord& record) {
  std::string out;
  for (const auto& t : record.turns) out += render_turn(t);
  return out;
}

Document DialoguePacker::make_document(const std::vector<RawRecord>& dialogues, bool truncated) {
  Document doc;
  doc.id = dialogues.front().id;
  if (dialogues.size() > 1) doc.id += "+" + std::to_string(dialogues.size() - 1);
  doc.origin = {dialogues.front().id, emitted_++};
  doc.truncated = truncated;

  for (const auto& d : dialogues) {
    std::set<std::string> speakers;
    for (const auto& t : d.turns) speakers.insert(t.speaker);
    for (const auto& t : d.turns) {
      std::string addressee;
      if (speakers.size() == 2) {
        for (const auto& s : speakers)
          if (s != t.speaker) addressee = s;
      }
      const std::string line = render_turn(t);
      const std::size_t line_start = doc.text.size();
      const std::size_t line_end = line_start + line.size() - 1;  // excludes '\n'
      doc.text += line;
      doc.turns.push_back({line_start, line_end, t.speaker, addressee});
      const auto body = std::string_view(doc.text).substr(line_start, line_end - line_start);
      for (const auto& s : segment_sentences(body)) {
        doc.sentences.push_back({s.start + line_start, s.end + line_start, s.token_count});
      }
    }
  }
  return doc;
}

std::vector<Document> DialoguePacker::push(const RawRecord& record) {
  if (record.kind != RecordKind::dialogue || record.turns.empty())
    throw PreconditionViolation("dialogue record needs at least one turn: " + record.id);
  std::vector<Document> out;
  const std::size_t tokens = count_tokens(render_dialogue(record));

  if (!pending_.empty() && pending_tokens_ + tokens > budget_) {
    out.push_back(make_document(pending_, false));
    pending_.clear();
    pending_tokens_ = 0;
  }
  if (tokens > budget_) {
    // Cut at a turn boundary; a first turn that alone exceeds the budget is
    // hard-truncated so the document is never empty.
    RawRecord cut = record;
    cut.turns.clear();
    std::size_t used = 0;
    for (const auto& t : record.turns) {
      const std::size_t tt = count_tokens(render_turn(t));
      if (used + tt > budget_) break;
      cut.turns.push_back(t);
      used += tt;
    }
    if (cut.turns.empty()) {
      Turn first = record.turns.front();
      const std::string prefix = first.speaker + ": ";
      const std::size_t prefix_tokens = count_tokens(prefix);
      const std::size_t room = budget_ > prefix_tokens ? budget_ - prefix_tokens : 0;
      const std::string utter = single_line(first.utterance);
      first.utterance = utter.substr(0, prefix_end_for_tokens(utter, room));
      cut.turns.push_back(first);
    }
    out.push_back(make_document({cut}, true));
    return out;
  }
  pending_.push_back(record);
  pending_tokens_ += tokens;
  return out;
}

std::optional<Document> DialoguePacker::finish() {
  if (pending_.empty()) return std::nullopt;
  Document doc = make_document(pending_, false);
  pending_.clear();
  pending_tokens_ = 0;
  return doc;
}

std::vector<Document> concat_dialogues(const std::vector<RawRecord>& records,
                                       std::size_t input_budget) {
  if (input_budget == 0) throw PreconditionViolation("input budget must be positive");
  DialoguePacker packer(input_budget);
  std::vector<Document> out;
  for (const auto& r : records) {
    for (auto& d : packer.push(r)) out.push_back(std::move(d));
  }
  if (auto last = packer.finish()) out.push_back(std::move(*last));
  return out;
}

}  // namespace qaug
