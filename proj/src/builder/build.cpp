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
#include <atomic>
#include <exception>
#include <istream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "qaug/builder.hpp"
#include "qaug/errors.hpp"

namespace qaug {
namespace {

// Fixed so that abort decisions do not depend on the worker count.
constexpr std::size_t kBatchSize = 512;
constexpr std::size_t kMinDocumentsBeforeAbort = 200;
constexpr std::size_t kMaxReportedSkips = 50;

struct Unit {
  std::optional<Document> doc;  // empty for records that produced no text
  std::string id;
};

std::vector<DocumentOutcome> process_batch(const std::vector<Unit>& batch, const BuildConfig& config,
                                           Backend& backend) {
  std::vector<DocumentOutcome> results(batch.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    for (std::size_t i = next++; i < batch.size(); i = next++) {
      try {
        if (!batch[i].doc) {
          results[i] = {choose_mode(config, batch[i].id), Skip{batch[i].id, "empty document"}};
        } else {
          results[i] = process_document(*batch[i].doc, config, backend);
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t n_threads = std::min(config.workers, batch.size());
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

DocumentOutcome process_document(const Document& doc, const BuildConfig& config, Backend& backend) {
  DocumentOutcome outcome;
  outcome.mode = choose_mode(config, doc.id);
  auto skip = [&](std::string reason) {
    outcome.result = Skip{doc.id, std::move(reason)};
    return outcome;
  };

  const auto sel = select_gap_sentences(doc, config.gsr, config.seed, config.mask_rate);
  const auto pseudo = build_pseudo_summary(doc, sel, config.target_budget);

  std::vector<Question> questions;
  if (has_questions(outcome.mode)) {
    try {
      for (std::size_t i = 0; i < pseudo.indices.size(); ++i) {
        questions.push_back(backend.generate_question(
            {doc.text, pseudo.sentences[i], pseudo.indices[i]}));
      }
    } catch (const BackendUnavailable& e) {
      spdlog::warn("{}: {}", doc.id, e.what());
      return skip("backend unavailable");
    } catch (const BackendRejected& e) {
      spdlog::warn("{}: {}", doc.id, e.what());
      return skip("backend rejected request");
    } catch (const FixtureMiss& e) {
      spdlog::warn("{}: {}", doc.id, e.what());
      return skip("fixture miss");
    }
  }

  try {
    outcome.result = enforce_budgets(assemble_instance(doc, sel, pseudo, questions, outcome.mode), config);
  } catch (const UnsupportedDialogue& e) {
    spdlog::warn("{}", e.what());
    return skip("unsupported dialogue");
  }
  return outcome;
}

std::string BuildReport::to_json() const {
  nlohmann::json j = {{"records", records},
                      {"documents", documents},
                      {"emitted", emitted},
                      {"skipped", skipped},
                      {"truncated_chunks", truncated_chunks},
                      {"mode_counts", mode_counts},
                      {"skip_reasons", skip_reasons},
                      {"skipped_ids", skipped_ids},
                      {"mean_source_tokens", mean_source_tokens},
                      {"mean_target_tokens", mean_target_tokens},
                      {"aborted", aborted}};
  return j.dump(2);
}

BuildReport build_dataset(std::istream& corpus, std::ostream& out, const BuildConfig& config,
                          Backend& backend) {
  config.validate();
  BuildReport report;
  for (auto m : {Mode::reconstruct, Mode::ask, Mode::answer, Mode::ask_and_answer})
    report.mode_counts[std::string(to_string(m))] = 0;

  double source_tokens = 0.0, target_tokens = 0.0;
  std::vector<Unit> batch;
  batch.reserve(kBatchSize);

  auto flush = [&] {
    if (batch.empty()) return;
    const auto results = process_batch(batch, config, backend);
    for (const auto& r : results) {
      ++report.documents;
      ++report.mode_counts[std::string(to_string(r.mode))];
      if (const auto* inst = std::get_if<PretrainInstance>(&r.result)) {
        out << instance_to_json(*inst) << '\n';
        ++report.emitted;
        source_tokens += static_cast<double>(count_tokens(inst->source));
        target_tokens += static_cast<double>(count_tokens(inst->target));
      } else {
        const auto& s = std::get<Skip>(r.result);
        ++report.skipped;
        ++report.skip_reasons[s.reason];
        if (report.skipped_ids.size() < kMaxReportedSkips) report.skipped_ids.push_back(s.id);
      }
    }
    batch.clear();
    if (report.documents >= kMinDocumentsBeforeAbort &&
        static_cast<double>(report.skipped) > config.max_skip_rate * static_cast<double>(report.documents)) {
      report.aborted = true;
    }
  };
  auto push = [&](Document doc) {
    if (doc.truncated) ++report.truncated_chunks;
    std::string id = doc.id;
    batch.push_back({std::move(doc), std::move(id)});
    if (batch.size() == kBatchSize) flush();
  };

  DialoguePacker packer(config.input_budget);
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (!report.aborted && std::getline(corpus, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    RawRecord rec = parse_raw_record(line, line_no);
    if (!seen_ids.insert(rec.id).second) throw ParseError(line_no, "duplicate record id \"" + rec.id + "\"");
    if (rec.kind != config.corpus_kind)
      throw ParseError(line_no, "record kind " + std::string(to_string(rec.kind)) +
                                    " does not match corpus kind " +
                                    std::string(to_string(config.corpus_kind)));
    ++report.records;

    if (rec.kind == RecordKind::prose) {
      rec.text = neutralize_reserved_tokens(rec.text);
      std::vector<Document> docs;
      try {
        docs = chunk_document(rec, config.input_budget);
      } catch (const EmptyDocument&) {
        batch.push_back({std::nullopt, rec.id});
        if (batch.size() == kBatchSize) flush();
        continue;
      }
      for (auto& d : docs) push(std::move(d));
    } else {
      for (auto& t : rec.turns) {
        t.speaker = neutralize_reserved_tokens(t.speaker);
        t.utterance = neutralize_reserved_tokens(t.utterance);
      }
      for (auto& d : packer.push(rec)) push(std::move(d));
    }
  }
  if (!report.aborted) {
    if (auto last = packer.finish()) push(std::move(*last));
    flush();
  }

  if (report.emitted > 0) {
    report.mean_source_tokens = source_tokens / static_cast<double>(report.emitted);
    report.mean_target_tokens = target_tokens / static_cast<double>(report.emitted);
  }
  if (!report.aborted && report.documents > 0 &&
      static_cast<double>(report.skipped) > config.max_skip_rate * static_cast<double>(report.documents)) {
    report.aborted = true;
  }
  return report;
}

}  // namespace qaug
