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

#include <nlohmann/json.hpp>

#include "qaug/corpus.hpp"
#include "qaug/errors.hpp"

namespace qaug {

using nlohmann::json;

RawRecord parse_raw_record(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line_no, "record must be a JSON object");

  RawRecord r;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
    throw ParseError(line_no, "missing or empty \"id\"");
  r.id = j["id"].get<std::string>();

  const std::string kind = j.value("kind", std::string("prose"));
  const bool has_text = j.contains("text");
  const bool has_turns = j.contains("turns");
  if (kind == "prose") {
    r.kind = RecordKind::prose;
    if (!has_text || !j["text"].is_string()) throw ParseError(line_no, "prose record needs \"text\"");
    if (has_turns) throw ParseError(line_no, "prose record must not carry \"turns\"");
    r.text = j["text"].get<std::string>();
  } else if (kind == "dialogue") {
    r.kind = RecordKind::dialogue;
    if (!has_turns || !j["turns"].is_array())
      throw ParseError(line_no, "dialogue record needs a \"turns\" array");
    if (has_text) throw ParseError(line_no, "dialogue record must not carry \"text\"");
    for (const auto& t : j["turns"]) {
      if (!t.is_object() || !t.contains("speaker") || !t.contains("text") ||
          !t["speaker"].is_string() || !t["text"].is_string())
        throw ParseError(line_no, "each turn needs string \"speaker\" and \"text\"");
      r.turns.push_back({t["speaker"].get<std::string>(), t["text"].get<std::string>()});
    }
    if (r.turns.empty()) throw ParseError(line_no, "dialogue record has no turns");
  } else {
    throw ParseError(line_no, "unknown kind \"" + kind + "\"");
  }
  return r;
}

std::string serialize_raw_record(const RawRecord& record) {
  json j;
  j["id"] = record.id;
  j["kind"] = std::string(to_string(record.kind));
  if (record.kind == RecordKind::prose) {
    j["text"] = record.text;
  } else {
    j["turns"] = json::array();
    for (const auto& t : record.turns) j["turns"].push_back({{"speaker", t.speaker}, {"text", t.utterance}});
  }
  return j.dump();
}

}  // namespace qaug
