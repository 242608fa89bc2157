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

#include <fstream>

#include "qaug/errors.hpp"
#include "qaug/qg.hpp"

namespace qaug {
namespace {

std::string keyed(std::string_view context, std::string_view text) {
  std::string key = request_hash("context", context);
  key.push_back('\x1f');
  key.append(text);
  return key;
}

std::string preview(std::string_view s) {
  constexpr std::size_t kMax = 80;
  if (s.size() <= kMax) return std::string(s);
  return std::string(s.substr(0, kMax)) + "...";
}

}  // namespace

RecordedBackend::RecordedBackend(const std::filesystem::path& fixture) {
  std::ifstream in(fixture);
  if (!in) throw ConfigError("cannot open fixture file " + fixture.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) load_line(line, ++line_no);
}

RecordedBackend RecordedBackend::from_lines(const std::vector<std::string>& lines) {
  RecordedBackend b;
  for (std::size_t i = 0; i < lines.size(); ++i) b.load_line(lines[i], i + 1);
  return b;
}

void RecordedBackend::load_line(const std::string& line, std::size_t line_no) {
  if (line.find_first_not_of(" \t\r") == std::string::npos) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
    const auto op = j.at("op").get<std::string>();
    if (op == "generate") {
      generate_[keyed(j.at("context").get<std::string>(), j.at("answer").get<std::string>())] =
          j.at("question").get<std::string>();
    } else if (op == "answer") {
      answer_[keyed(j.at("context").get<std::string>(), j.at("question").get<std::string>())] =
          j.at("answer").get<std::string>();
    } else if (op == "nounphrases") {
      const auto sentence = j.at("sentence").get<std::string>();
      const auto offsets = char_to_byte_offsets(sentence);
      std::vector<NounPhrase> spans;
      for (const auto& s : j.at("spans")) {
        NounPhrase np{s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>(),
                      s.at("text").get<std::string>()};
        if (np.start >= np.end || np.end >= offsets.size())
          throw ParseError(line_no, "span offsets outside the sentence");
        np.start = offsets[np.start];
        np.end = offsets[np.end];
        spans.push_back(std::move(np));
      }
      spans_[sentence] = std::move(spans);
    } else {
      throw ParseError(line_no, "unknown fixture op \"" + op + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no, std::string("bad fixture line: ") + e.what());
  }
}

std::string RecordedBackend::do_generate(const QgRequest& req) {
  auto it = generate_.find(keyed(req.context, req.answer_sentence));
  if (it == generate_.end())
    throw FixtureMiss("no recorded question for \"" + preview(req.answer_sentence) + "\"");
  return it->second;
}

std::string RecordedBackend::do_answer(std::string_view question, std::string_view context) {
  auto it = answer_.find(keyed(context, question));
  if (it == answer_.end()) throw FixtureMiss("no recorded answer for \"" + preview(question) + "\"");
  return it->second;
}

std::vector<NounPhrase> RecordedBackend::do_noun_phrases(std::string_view sentence) {
  auto it = spans_.find(std::string(sentence));
  if (it == spans_.end())
    throw FixtureMiss("no recorded noun phrases for \"" + preview(sentence) + "\"");
  return it->second;
}

}  // namespace qaug
