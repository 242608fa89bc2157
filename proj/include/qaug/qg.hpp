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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qaug {

struct QgRequest {
  std::string context;          // unmasked document or full summary
  std::string answer_sentence;  // sentence (or noun phrase) the question must target
  std::size_t source_index = 0;
};

struct Question {
  std::string text;
  std::size_t source_index = 0;
};

struct NounPhrase {
  std::size_t start = 0;  // byte offsets into the request sentence
  std::size_t end = 0;
  std::string text;
};

enum class BackendKind { heuristic, recorded, remote };

struct BackendSpec {
  BackendKind kind = BackendKind::heuristic;
  std::string endpoint;          // remote: "http://host:port[/prefix]"
  std::string fixture_path;      // recorded
  std::string cache_path;        // remote: on-disk response cache, optional
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds backoff{200};
  int max_retries = 3;
  std::size_t max_in_flight = 8;

  void validate() const;

  // "heuristic", "recorded:<fixture.jsonl>", "remote", or an http URL.
  static BackendSpec parse(std::string_view text);
};

// Trims, collapses whitespace, and ends the text with exactly one '?'.
std::string normalize_question(std::string_view raw);

// Byte offset of every character start in a UTF-8 string, plus its size.
// Wire-format offsets count characters; NounPhrase offsets count bytes.
std::vector<std::size_t> char_to_byte_offsets(std::string_view utf8);

// Stable hex digest of a request, used for fixture and cache keys.
std::string request_hash(std::string_view route, std::string_view payload);

// Thread-safe request -> response memo, optionally mirrored to a
// newline-delimited {"request_hash", "response"} file.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path path);

  std::optional<nlohmann::json> get(const std::string& key) const;
  // Inserts unless present; returns the stored value either way.
  nlohmann::json insert_or_get(const std::string& key, nlohmann::json value);
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  bool torn_tail_ = false;  // file does not end in a newline
  mutable std::mutex mu_;
  std::unordered_map<std::string, nlohmann::json> entries_;
};

class Backend {
 public:
  virtual ~Backend() = default;

  Question generate_question(const QgRequest& req);
  std::string answer_question(std::string_view question, std::string_view context);
  std::vector<NounPhrase> extract_noun_phrases(std::string_view sentence);

  virtual BackendKind kind() const = 0;

 protected:
  virtual std::string do_generate(const QgRequest& req) = 0;
  virtual std::string do_answer(std::string_view question, std::string_view context) = 0;
  virtual std::vector<NounPhrase> do_noun_phrases(std::string_view sentence) = 0;
};

// Deterministic rule-based stand-in for the neural services. Output quality
// is low; it keeps the pipeline runnable without a model server.
class HeuristicBackend final : public Backend {
 public:
  BackendKind kind() const override { return BackendKind::heuristic; }

 protected:
  std::string do_generate(const QgRequest& req) override;
  std::string do_answer(std::string_view question, std::string_view context) override;
  std::vector<NounPhrase> do_noun_phrases(std::string_view sentence) override;
};

// Replays responses from a JSONL fixture file. Lines look like
//   {"op":"generate","context":C,"answer":A,"question":Q}
//   {"op":"answer","context":C,"question":Q,"answer":A}
//   {"op":"nounphrases","sentence":S,"spans":[{"start":0,"end":5,"text":"Sarah"}]}
// Span offsets count characters, as on the wire.
class RecordedBackend final : public Backend {
 public:
  explicit RecordedBackend(const std::filesystem::path& fixture);
  static RecordedBackend from_lines(const std::vector<std::string>& lines);

  BackendKind kind() const override { return BackendKind::recorded; }
  std::size_t size() const { return generate_.size() + answer_.size() + spans_.size(); }

 protected:
  std::string do_generate(const QgRequest& req) override;
  std::string do_answer(std::string_view question, std::string_view context) override;
  std::vector<NounPhrase> do_noun_phrases(std::string_view sentence) override;

 private:
  RecordedBackend() = default;
  void load_line(const std::string& line, std::size_t line_no);

  std::unordered_map<std::string, std::string> generate_;
  std::unordered_map<std::string, std::string> answer_;
  std::unordered_map<std::string, std::vector<NounPhrase>> spans_;
};

class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(BackendSpec spec);
  ~RemoteBackend() override;

  BackendKind kind() const override { return BackendKind::remote; }
  // Number of HTTP requests actually sent (cache hits excluded).
  std::size_t requests_sent() const;

 protected:
  std::string do_generate(const QgRequest& req) override;
  std::string do_answer(std::string_view question, std::string_view context) override;
  std::vector<NounPhrase> do_noun_phrases(std::string_view sentence) override;

 private:
  struct Impl;
  nlohmann::json call(const std::string& route, const nlohmann::json& body);

  BackendSpec spec_;
  std::unique_ptr<Impl> impl_;
};

std::shared_ptr<Backend> make_backend(const BackendSpec& spec);

// Environment variable that overrides the endpoint of a remote backend.
inline constexpr const char* kEndpointEnvVar = "QAUG_BACKEND_ENDPOINT";

}  // namespace qaug
