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

#include <atomic>
#include <httplib.h>
#include <semaphore>
#include <thread>

#include "qaug/errors.hpp"
#include "qaug/qg.hpp"

namespace qaug {
namespace {

struct Endpoint {
  std::string base;    // scheme://host:port
  std::string prefix;  // path prefix without trailing '/'
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint must be an http URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.base = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    e.prefix = url.substr(path_start);
    while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  }
  return e;
}

class InFlight {
 public:
  explicit InFlight(std::counting_semaphore<>& sem) : sem_(sem) { sem_.acquire(); }
  ~InFlight() { sem_.release(); }
  InFlight(const InFlight&) = delete;
  InFlight& operator=(const InFlight&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

}  // namespace

struct RemoteBackend::Impl {
  explicit Impl(const BackendSpec& spec)
      : endpoint(split_endpoint(spec.endpoint)),
        in_flight(static_cast<std::ptrdiff_t>(spec.max_in_flight)),
        cache(spec.cache_path.empty() ? ResponseCache() : ResponseCache(spec.cache_path)) {}

  Endpoint endpoint;
  std::counting_semaphore<> in_flight;
  ResponseCache cache;
  std::atomic<std::size_t> sent{0};
};

RemoteBackend::RemoteBackend(BackendSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  impl_ = std::make_unique<Impl>(spec_);
}

RemoteBackend::~RemoteBackend() = default;

std::size_t RemoteBackend::requests_sent() const { return impl_->sent.load(); }

nlohmann::json RemoteBackend::call(const std::string& route, const nlohmann::json& body) {
  const std::string payload = body.dump();
  const std::string key = request_hash(route, payload);
  if (auto hit = impl_->cache.get(key)) return *hit;

  const std::string path = impl_->endpoint.prefix + route;
  std::string last_error;
  for (int attempt = 0; attempt <= spec_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(spec_.backoff * (1 << (attempt - 1)));
    httplib::Result res{nullptr, httplib::Error::Unknown};
    {
      InFlight slot(impl_->in_flight);
      httplib::Client client(impl_->endpoint.base);
      const auto secs = spec_.timeout.count() / 1000;
      const auto usecs = (spec_.timeout.count() % 1000) * 1000;
      client.set_connection_timeout(secs, usecs);
      client.set_read_timeout(secs, usecs);
      client.set_write_timeout(secs, usecs);
      ++impl_->sent;
      res = client.Post(path, payload, "application/json");
    }
    if (!res) {
      last_error = httplib::to_string(res.error());
      spdlog::debug("POST {} failed (attempt {}): {}", path, attempt + 1, last_error);
      continue;
    }
    const int status = res->status;
    if (status >= 200 && status < 300) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error&) {
        throw BackendRejected("malformed JSON from " + path);
      }
      return impl_->cache.insert_or_get(key, std::move(j));
    }
    if (status >= 400 && status < 500) {
      throw BackendRejected("POST " + path + " returned " + std::to_string(status) + ": " + res->body);
    }
    last_error = "HTTP " + std::to_string(status);
    spdlog::debug("POST {} returned {} (attempt {})", path, status, attempt + 1);
  }
  throw BackendUnavailable("POST " + impl_->endpoint.base + path + " failed after " +
                           std::to_string(spec_.max_retries + 1) + " attempts: " + last_error);
}

std::string RemoteBackend::do_generate(const QgRequest& req) {
  const auto j = call("/v1/generate", {{"context", req.context}, {"answer", req.answer_sentence}});
  if (!j.contains("question") || !j["question"].is_string())
    throw BackendRejected("/v1/generate response lacks a \"question\" string");
  return j["question"].get<std::string>();
}

std::string RemoteBackend::do_answer(std::string_view question, std::string_view context) {
  const auto j = call("/v1/answer", {{"context", context}, {"question", question}});
  if (!j.contains("answer") || !j["answer"].is_string())
    throw BackendRejected("/v1/answer response lacks an \"answer\" string");
  return j["answer"].get<std::string>();
}

std::vector<NounPhrase> RemoteBackend::do_noun_phrases(std::string_view sentence) {
  const auto j = call("/v1/nounphrases", {{"sentence", sentence}});
  if (!j.contains("spans") || !j["spans"].is_array())
    throw BackendRejected("/v1/nounphrases response lacks a \"spans\" array");
  const auto offsets = char_to_byte_offsets(sentence);
  const std::size_t n_chars = offsets.size() - 1;
  std::vector<NounPhrase> out;
  std::size_t prev_end = 0;
  for (const auto& s : j["spans"]) {
    if (!s.is_object() || !s.contains("start") || !s.contains("end") || !s.contains("text") ||
        !s["start"].is_number_unsigned() || !s["end"].is_number_unsigned() || !s["text"].is_string())
      throw BackendRejected("/v1/nounphrases span must carry integer start/end and text");
    NounPhrase np{s["start"].get<std::size_t>(), s["end"].get<std::size_t>(),
                  s["text"].get<std::string>()};
    if (np.start >= np.end || np.end > n_chars || np.start < prev_end)
      throw BackendRejected("/v1/nounphrases spans must be ordered, non-overlapping, in range");
    prev_end = np.end;
    np.start = offsets[np.start];
    np.end = offsets[np.end];
    out.push_back(std::move(np));
  }
  return out;
}

}  // namespace qaug
