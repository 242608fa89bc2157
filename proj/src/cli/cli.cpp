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

#include "qaug/cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>

#include "qaug/builder.hpp"
#include "qaug/errors.hpp"
#include "qaug/metrics.hpp"
#include "qaug/plans.hpp"

namespace qaug {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// Routes spdlog output to the caller's error stream while a command runs.
class LogScope {
 public:
  explicit LogScope(std::ostream& err) : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    sink->set_pattern("[%l] %v");
    auto logger = std::make_shared<spdlog::logger>("qaug", sink);
    logger->set_level(spdlog::level::warn);
    spdlog::set_default_logger(std::move(logger));
  }
  ~LogScope() { spdlog::set_default_logger(previous_); }
  LogScope(const LogScope&) = delete;
  LogScope& operator=(const LogScope&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

// Options that may come from a flag, a config file, or a built-in default,
// in that order of precedence.
class Settings {
 public:
  void add(CLI::App* app, const std::string& key, const std::string& help, std::string def) {
    auto& e = entries_[key];
    e.def = std::move(def);
    e.opt = app->add_option("--" + key, e.flag_value, help);
    if (!e.def.empty()) e.opt->default_str(e.def);
  }

  void load_config(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto text = trim(line.substr(0, line.find('#')));
      if (text.empty()) continue;
      const auto eq = text.find('=');
      auto where = [&] { return "config " + path + " line " + std::to_string(line_no) + ": "; };
      if (eq == std::string::npos) throw ConfigError(where() + "expected \"key = value\"");
      auto key = trim(std::string_view(text).substr(0, eq));
      const auto value = trim(std::string_view(text).substr(eq + 1));
      for (auto& c : key)
        if (c == '_') c = '-';
      if (!entries_.count(key)) throw ConfigError(where() + "unknown key \"" + key + "\"");
      if (value.empty()) throw ConfigError(where() + "empty value for \"" + key + "\"");
      if (!config_.emplace(key, value).second)
        throw ConfigError(where() + "duplicate key \"" + key + "\"");
    }
  }

  std::string get(const std::string& key) const {
    const auto& e = entries_.at(key);
    if (e.opt->count() > 0) return e.flag_value;
    if (auto it = config_.find(key); it != config_.end()) return it->second;
    return e.def;
  }

  double get_double(const std::string& key) const {
    const auto s = get(key);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) bad(key, s);
    return v;
  }

  std::uint64_t get_u64(const std::string& key) const {
    const auto s = get(key);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) bad(key, s);
    return v;
  }

 private:
  [[noreturn]] static void bad(const std::string& key, const std::string& value) {
    throw ConfigError("invalid value for " + key + ": \"" + value + "\"");
  }

  struct Entry {
    CLI::Option* opt = nullptr;
    std::string flag_value;
    std::string def;
  };
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> config_;
};

void add_backend_settings(CLI::App* cmd, Settings& s) {
  s.add(cmd, "backend", "heuristic, recorded:<fixture.jsonl>, or http://host:port[/prefix]", "heuristic");
  s.add(cmd, "cache", "response cache file for the remote backend", "");
  s.add(cmd, "timeout-ms", "remote request timeout in milliseconds", "30000");
  s.add(cmd, "retries", "remote retries after a failed attempt", "3");
  s.add(cmd, "max-in-flight", "maximum concurrent remote requests", "8");
  s.add(cmd, "log-level", "trace, debug, info, warn, error, or off", "warn");
}

BackendSpec backend_spec(const Settings& s) {
  auto spec = BackendSpec::parse(s.get("backend"));
  spec.cache_path = s.get("cache");
  spec.timeout = std::chrono::milliseconds(s.get_u64("timeout-ms"));
  spec.max_retries = static_cast<int>(s.get_u64("retries"));
  spec.max_in_flight = static_cast<std::size_t>(s.get_u64("max-in-flight"));
  return spec;
}

void apply_log_level(const Settings& s) {
  const auto level = spdlog::level::from_str(s.get("log-level"));
  if (level == spdlog::level::off && s.get("log-level") != "off")
    throw ConfigError("unknown log level \"" + s.get("log-level") + "\"");
  spdlog::set_level(level);
}

bool same_file(const std::string& a, const std::string& b) {
  std::error_code ec;
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

// ---- build --------------------------------------------------------------------

struct BuildArgs {
  std::string corpus, out, report, config;
  Settings settings;
};

void setup_build(CLI::App& app, BuildArgs& a) {
  auto* cmd = app.add_subcommand("build", "Build a pretraining dataset from a JSONL corpus");
  cmd->add_option("--corpus", a.corpus, "input corpus (JSONL records)")->required();
  cmd->add_option("--out", a.out, "output dataset (JSONL instances)")->required();
  cmd->add_option("--report", a.report, "build report path (default: <out>.report.json)");
  cmd->add_option("--config", a.config, "config file of \"key = value\" lines");
  auto& s = a.settings;
  s.add(cmd, "gsr", "gap sentence ratio", "0.45");
  s.add(cmd, "mask-rate", "fraction of selected sentences that are masked", "0.8");
  s.add(cmd, "prop", "fraction of documents given question augmentation", "0.25");
  s.add(cmd, "mode", "augmentation mode: ask, answer, or ask_and_answer", "ask_and_answer");
  s.add(cmd, "input-budget", "source length limit in tokens", "512");
  s.add(cmd, "target-budget", "target length limit in tokens", "256");
  s.add(cmd, "seed", "random seed", "0");
  s.add(cmd, "corpus-kind", "prose or dialogue", "prose");
  s.add(cmd, "max-skip-rate", "abort when more than this fraction of documents is skipped", "0.1");
  s.add(cmd, "workers", "worker threads", "1");
  add_backend_settings(cmd, s);
}

int run_build(BuildArgs& a, std::ostream& out) {
  auto& s = a.settings;
  if (!a.config.empty()) s.load_config(a.config);
  apply_log_level(s);

  BuildConfig config;
  config.gsr = s.get_double("gsr");
  config.mask_rate = s.get_double("mask-rate");
  config.ask_answer_proportion = s.get_double("prop");
  config.augmentation_mode = parse_mode(s.get("mode"));
  config.input_budget = s.get_u64("input-budget");
  config.target_budget = s.get_u64("target-budget");
  config.seed = s.get_u64("seed");
  const auto kind = s.get("corpus-kind");
  if (kind == "prose") {
    config.corpus_kind = RecordKind::prose;
  } else if (kind == "dialogue") {
    config.corpus_kind = RecordKind::dialogue;
  } else {
    throw ConfigError("corpus-kind must be prose or dialogue, got \"" + kind + "\"");
  }
  config.max_skip_rate = s.get_double("max-skip-rate");
  config.workers = s.get_u64("workers");
  config.backend = backend_spec(s);
  config.validate();

  if (a.report.empty()) a.report = a.out + ".report.json";
  if (same_file(a.corpus, a.out) || same_file(a.corpus, a.report) || same_file(a.out, a.report))
    throw ConfigError("corpus, output, and report paths must be distinct");

  auto corpus = open_in(a.corpus);
  auto backend = make_backend(config.backend);
  auto dataset = open_out(a.out);
  const auto report = build_dataset(corpus, dataset, config, *backend);
  dataset.close();
  if (!dataset) throw Error("failed writing " + a.out);
  open_out(a.report) << report.to_json() << '\n';

  out << "documents " << report.documents << ", emitted " << report.emitted << ", skipped "
      << report.skipped << '\n';
  if (report.aborted) {
    spdlog::error("skip rate {}/{} exceeds {}; build aborted", report.skipped, report.documents,
                  config.max_skip_rate);
    return kExitAborted;
  }
  return kExitOk;
}

// ---- plans --------------------------------------------------------------------

struct PlansArgs {
  std::string in, out, config;
  Settings settings;
};

void setup_plans(CLI::App& app, PlansArgs& a) {
  auto* cmd = app.add_subcommand("plans", "Extract control plans from reference summaries");
  cmd->add_option("--in", a.in, "summaries (JSONL: doc_id, query_id, summary)")->required();
  cmd->add_option("--out", a.out, "output plan file (JSONL)")->required();
  cmd->add_option("--config", a.config, "config file of \"key = value\" lines");
  a.settings.add(cmd, "strategy", "content-questions, keywords, or blueprint", "");
  add_backend_settings(cmd, a.settings);
}

int run_plans(PlansArgs& a, std::ostream& out) {
  auto& s = a.settings;
  if (!a.config.empty()) s.load_config(a.config);
  apply_log_level(s);
  if (s.get("strategy").empty()) throw ConfigError("--strategy is required");
  const auto strategy = parse_strategy(s.get("strategy"));
  if (same_file(a.in, a.out)) throw ConfigError("input and output paths must be distinct");

  auto in = open_in(a.in);
  auto backend = make_backend(backend_spec(s));
  auto plans = open_out(a.out);
  std::size_t written = 0, empty = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto rec = parse_summary_record(line, line_no);
    PlanRecord pr{rec.doc_id, rec.query_id, {}};
    try {
      switch (strategy) {
        case Strategy::content_questions:
          pr.plan = extract_content_questions(rec.summary, *backend);
          break;
        case Strategy::keywords:
          pr.plan = extract_keywords_plan(rec.summary, *backend);
          break;
        case Strategy::blueprint_qa:
          pr.plan = extract_blueprint(rec.summary, *backend);
          break;
      }
    } catch (const EmptyPlan& e) {
      spdlog::warn("{} / {}: {}", rec.doc_id, rec.query_id, e.what());
      ++empty;
      continue;
    }
    plans << plan_record_to_json(pr) << '\n';
    ++written;
  }
  out << "plans written " << written << ", empty " << empty << '\n';
  return kExitOk;
}

// ---- analyze ------------------------------------------------------------------

struct AnalyzeArgs {
  std::vector<std::string> plan_files, datasets;
  std::string summaries, json, log_level = "warn";
};

void setup_analyze(CLI::App& app, AnalyzeArgs& a) {
  auto* cmd = app.add_subcommand("analyze", "Plan statistics, or dataset statistics with --dataset");
  cmd->add_option("--plans", a.plan_files, "plan files (JSONL), one or more");
  cmd->add_option("--summaries", a.summaries, "summaries the plans were extracted from (JSONL)");
  cmd->add_option("--dataset", a.datasets, "dataset files for statistics mode, one or more");
  cmd->add_option("--json", a.json, "also write the statistics as JSON to this path");
  cmd->add_option("--log-level", a.log_level, "trace, debug, info, warn, error, or off");
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

int run_dataset_stats(const AnalyzeArgs& a, std::ostream& out) {
  nlohmann::json j = nlohmann::json::object();
  out << "dataset\texamples\tdocuments\treferences\tdoc_words\tsummary_words\n";
  for (const auto& path : a.datasets) {
    auto in = open_in(path);
    const auto st = dataset_stats(in);
    out << path << '\t' << st.examples << '\t' << st.documents << '\t' << st.references << '\t'
        << fixed(st.mean_document_words, 2) << '\t' << fixed(st.mean_summary_words, 2) << '\n';
    j[path] = {{"examples", st.examples},
               {"documents", st.documents},
               {"references", st.references},
               {"mean_document_words", st.mean_document_words},
               {"mean_summary_words", st.mean_summary_words}};
  }
  if (!a.json.empty()) open_out(a.json) << j.dump(2) << '\n';
  return kExitOk;
}

int run_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.datasets.empty()) {
    if (!a.plan_files.empty()) throw ConfigError("--dataset cannot be combined with --plans");
    return run_dataset_stats(a, out);
  }
  if (a.plan_files.empty() || a.summaries.empty())
    throw ConfigError("analyze needs --plans and --summaries, or --dataset");

  std::map<SummaryKey, std::string> summaries;
  {
    auto in = open_in(a.summaries);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto rec = parse_summary_record(line, line_no);
      summaries[{rec.doc_id, rec.query_id}] = std::move(rec.summary);
    }
  }
  std::vector<PlanRecord> plans;
  std::set<SummaryKey> orphans;
  for (const auto& path : a.plan_files) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto rec = parse_plan_record(line, line_no);
      if (!summaries.count({rec.doc_id, rec.query_id})) orphans.insert({rec.doc_id, rec.query_id});
      plans.push_back(std::move(rec));
    }
  }
  if (!orphans.empty()) {
    err << "error: plans without a matching summary:\n";
    for (const auto& [doc, query] : orphans) err << "  doc_id=" << doc << " query_id=" << query << '\n';
    return kExitError;
  }

  const auto stats = analyze_plans(plans, summaries);
  nlohmann::json j = nlohmann::json::object();
  out << "strategy\tplans\tlength_pct\trouge1\tavg_overlap_pct\tmax_overlap_pct\n";
  for (const auto& [strategy, st] : stats) {
    auto pct = [](const std::optional<double>& v) { return v ? fixed(100.0 * *v, 1) : std::string("-"); };
    out << to_string(strategy) << '\t' << st.plans << '\t' << fixed(100.0 * st.length_ratio, 1) << '\t'
        << fixed(100.0 * st.summary_rouge1, 1) << '\t' << pct(st.mean_overlap) << '\t'
        << pct(st.max_overlap) << '\n';
    j[std::string(to_string(strategy))] = {{"plans", st.plans},
                                           {"plan_pairs", st.plan_pairs},
                                           {"length_ratio", st.length_ratio},
                                           {"summary_rouge1", st.summary_rouge1},
                                           {"mean_overlap", optional_json(st.mean_overlap)},
                                           {"max_overlap", optional_json(st.max_overlap)}};
  }
  if (!a.json.empty()) open_out(a.json) << j.dump(2) << '\n';
  return kExitOk;
}

// ---- rouge --------------------------------------------------------------------

struct RougeArgs {
  std::string candidates, variant = "all", multi_ref = "max", log_level = "warn";
  std::vector<std::string> references;
};

void setup_rouge(CLI::App& app, RougeArgs& a) {
  auto* cmd = app.add_subcommand("rouge", "Score candidates against one or more reference files");
  cmd->add_option("--candidates", a.candidates, "candidate file, one summary per line")->required();
  cmd->add_option("--references", a.references, "reference files, line-aligned with the candidates")
      ->required();
  cmd->add_option("--variant", a.variant, "rouge1, rouge2, rougeL, or all")
      ->check(CLI::IsMember({"rouge1", "rouge2", "rougeL", "all"}))
      ->capture_default_str();
  cmd->add_option("--multi-ref", a.multi_ref, "aggregation over references: max or mean")
      ->check(CLI::IsMember({"max", "mean"}))
      ->capture_default_str();
  cmd->add_option("--log-level", a.log_level, "trace, debug, info, warn, error, or off");
}

std::vector<std::string> read_lines(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

int run_rouge(const RougeArgs& a, std::ostream& out, std::ostream& err) {
  const auto candidates = read_lines(a.candidates);
  std::vector<std::vector<std::string>> refs;
  for (const auto& path : a.references) {
    refs.push_back(read_lines(path));
    if (refs.back().size() != candidates.size()) {
      err << "error: " << path << " has " << refs.back().size() << " lines but " << a.candidates
          << " has " << candidates.size() << '\n';
      return kExitError;
    }
  }

  std::vector<std::pair<std::string, RougeVariant>> variants;
  if (a.variant == "all" || a.variant == "rouge1") variants.emplace_back("rouge1", RougeVariant::rouge1);
  if (a.variant == "all" || a.variant == "rouge2") variants.emplace_back("rouge2", RougeVariant::rouge2);
  if (a.variant == "all" || a.variant == "rougeL") variants.emplace_back("rougeL", RougeVariant::rougeL);

  for (const auto& [name, variant] : variants) {
    double p = 0.0, r = 0.0, f = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto cand = content_tokens(candidates[i]);
      std::vector<Tokens> ref_tokens;
      for (const auto& file : refs) ref_tokens.push_back(content_tokens(file[i]));
      RougeScore s;
      if (a.multi_ref == "max") {
        s = multi_ref_max(cand, ref_tokens, variant).score;
      } else {
        for (const auto& rt : ref_tokens) {
          const auto one = rouge(variant, cand, rt);
          s.precision += one.precision / static_cast<double>(ref_tokens.size());
          s.recall += one.recall / static_cast<double>(ref_tokens.size());
          s.f1 += one.f1 / static_cast<double>(ref_tokens.size());
        }
      }
      p += s.precision;
      r += s.recall;
      f += s.f1;
    }
    const double n = candidates.empty() ? 1.0 : static_cast<double>(candidates.size());
    out << name << "\tP=" << fixed(p / n, 6) << "\tR=" << fixed(r / n, 6) << "\tF1=" << fixed(f / n, 6)
        << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  LogScope log_scope(err);
  CLI::App app{"qaug: question-augmented pretraining data and control plans", "qaug"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qaug 0.1.0");

  BuildArgs build;
  PlansArgs plans;
  AnalyzeArgs analyze;
  RougeArgs rouge_args;
  setup_build(app, build);
  setup_plans(app, plans);
  setup_analyze(app, analyze);
  setup_rouge(app, rouge_args);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (app.got_subcommand("build")) return run_build(build, out);
    if (app.got_subcommand("plans")) return run_plans(plans, out);
    if (app.got_subcommand("analyze")) {
      spdlog::set_level(spdlog::level::from_str(analyze.log_level));
      return run_analyze(analyze, out, err);
    }
    if (app.got_subcommand("rouge")) {
      spdlog::set_level(spdlog::level::from_str(rouge_args.log_level));
      return run_rouge(rouge_args, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace qaug
