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

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "qaug/errors.hpp"
#include "qaug/qg.hpp"
#include "qaug/rng.hpp"

namespace qaug {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

char ascii_lower(char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c; }

bool contains_ignore_case(std::string_view hay, std::string_view needle) {
  auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end(),
                        [](char a, char b) { return ascii_lower(a) == ascii_lower(b); });
  return needle.empty() || it != hay.end();
}

}  // namespace

std::string normalize_question(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : trim(raw)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  while (!out.empty() && (out.back() == '?' || out.back() == ' ')) out.pop_back();
  if (out.empty()) return out;
  out.push_back('?');
  return out;
}

std::vector<std::size_t> char_to_byte_offsets(std::string_view utf8) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < utf8.size(); ++i) {
    if ((static_cast<unsigned char>(utf8[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(utf8.size());
  return out;
}

std::string request_hash(std::string_view route, std::string_view payload) {
  std::string buf(route);
  buf.push_back('\n');
  buf.append(payload);
  const std::uint64_t h1 = splitmix64(fnv1a64(buf));
  const std::uint64_t h2 = splitmix64(fnv1a64(buf, 0x84222325cbf29ce4ULL) ^ buf.size());
  char hex[33];
  std::snprintf(hex, sizeof hex, "%016llx%016llx", static_cast<unsigned long long>(h1),
                static_cast<unsigned long long>(h2));
  return hex;
}

void BackendSpec::validate() const {
  if (kind == BackendKind::remote && endpoint.empty())
    throw ConfigError("remote backend requires an endpoint");
  if (kind == BackendKind::remote && endpoint.rfind("http://", 0) != 0)
    throw ConfigError("remote endpoint must be a plain http:// URL (no TLS support): " + endpoint);
  if (kind == BackendKind::recorded && fixture_path.empty())
    throw ConfigError("recorded backend requires a fixture file");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (max_in_flight == 0) throw ConfigError("max_in_flight must be >= 1");
}

BackendSpec BackendSpec::parse(std::string_view text) {
  BackendSpec spec;
  if (text == "heuristic") {
    spec.kind = BackendKind::heuristic;
  } else if (text.rfind("recorded:", 0) == 0) {
    spec.kind = BackendKind::recorded;
    spec.fixture_path = std::string(text.substr(9));
  } else if (text.rfind("http://", 0) == 0 || text.rfind("https://", 0) == 0) {
    spec.kind = BackendKind::remote;
    spec.endpoint = std::string(text);
  } else if (text == "remote") {
    spec.kind = BackendKind::remote;
  } else {
    throw ConfigError("unknown backend \"" + std::string(text) +
                      "\" (expected heuristic, recorded:<file>, or an http URL)");
  }
  if (spec.kind == BackendKind::remote) {
    if (const char* env = std::getenv(kEndpointEnvVar); env && *env) spec.endpoint = env;
  }
  return spec;
}

// ---- ResponseCache ----------------------------------------------------------

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    torn_tail_ = in.eof() && !line.empty();
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      entries_.emplace(j.at("request_hash").get<std::string>(), j.at("response"));
    } catch (const nlohmann::json::exception& e) {
      // A torn final line from an interrupted run is dropped, not fatal.
      spdlog::warn("ignoring malformed cache line {} in {}: {}", line_no, path_.string(), e.what());
    }
  }
}

std::optional<nlohmann::json> ResponseCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  if (auto it = entries_.find(key); it != entries_.end()) return std::optional<nlohmann::json>(std::in_place, it->second);
  return std::nullopt;
}

nlohmann::json ResponseCache::insert_or_get(const std::string& key, nlohmann::json value) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.emplace(key, std::move(value));
  if (inserted && !path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    if (torn_tail_) out << '\n';
    torn_tail_ = false;
    out << nlohmann::json{{"request_hash", key}, {"response", it->second}}.dump() << '\n';
  }
  return it->second;
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

// ---- Backend ----------------------------------------------------------------

Question Backend::generate_question(const QgRequest& req) {
  if (trim(req.answer_sentence).empty())
    throw PreconditionViolation("question generation needs a non-empty answer sentence");
  if (!contains_ignore_case(req.context, req.answer_sentence))
    spdlog::warn("answer sentence not found in its context: \"{}\"", req.answer_sentence);
  auto text = normalize_question(do_generate(req));
  if (text.empty()) throw BackendRejected("backend returned an empty question");
  return {std::move(text), req.source_index};
}

std::string Backend::answer_question(std::string_view question, std::string_view context) {
  if (trim(question).empty() || trim(context).empty())
    throw PreconditionViolation("question answering needs a question and a context");
  return std::string(trim(do_answer(question, context)));
}

std::vector<NounPhrase> Backend::extract_noun_phrases(std::string_view sentence) {
  if (trim(sentence).empty())
    throw PreconditionViolation("noun phrase extraction needs a non-empty sentence");
  return do_noun_phrases(sentence);
}

std::shared_ptr<Backend> make_backend(const BackendSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case BackendKind::heuristic:
      return std::make_shared<HeuristicBackend>();
    case BackendKind::recorded:
      return std::make_shared<RecordedBackend>(spec.fixture_path);
    case BackendKind::remote:
      return std::make_shared<RemoteBackend>(spec);
  }
  throw ConfigError("unknown backend kind");
}

}  // namespace qaug
