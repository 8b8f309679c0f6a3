// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace voxroute {

using json = nlohmann::json;

namespace {

class Mean {
 public:
  void add(double v) {
    if (std::isfinite(v)) {
      sum_ += v;
      ++n_;
    }
  }
  std::optional<double> value() const {
    if (n_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(n_);
  }

 private:
  double sum_ = 0.0;
  std::size_t n_ = 0;
};

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string();
}

void write_csv(const std::filesystem::path& path, const std::vector<SampleArtifact>& artifacts,
               double (*field)(const SystemMetrics&)) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ArtifactIoError("cannot write plot data: " + path.string());
  }
  out << "sample_index,value\n";
  for (const auto& a : artifacts) {
    const double v = field(a.metrics.raw);
    out << a.sample_index << ',' << (std::isfinite(v) ? format_number(v) : "") << '\n';
  }
  if (!out.flush()) {
    throw ArtifactIoError("failed writing plot data: " + path.string());
  }
}

std::string default_run_id() {
  std::string ts = format_rfc3339(utc_now());
  // 2026-10-18T12:34:56.789Z -> 20261018T123456789Z
  std::string id;
  for (char c : ts) {
    if (c != '-' && c != ':' && c != '.') id.push_back(c);
  }
  return id;
}

}  // namespace

std::optional<double> percent(std::size_t count, std::size_t total) {
  if (total == 0) {
    return std::nullopt;
  }
  // The ratio is taken in binary floating point first and then rounded to
  // one decimal exactly as printed (ties to even on the stored value). This
  // is how 23/80 reads 28.7 rather than 28.8.
  const double pct = static_cast<double>(count) / static_cast<double>(total) * 100.0;
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), pct, std::chars_format::fixed, 1);
  double rounded = pct;
  if (ec == std::errc{}) {
    std::from_chars(buf, end, rounded);
  }
  return rounded;
}

SummaryReport compute_summary(const std::vector<SampleArtifact>& artifacts) {
  SummaryReport r;
  r.total_samples = artifacts.size();
  Mean cpu, lat, temp, cpu_p, lat_p, temp_p, infer;
  for (const auto& a : artifacts) {
    // Every artifact carries exactly one decision by construction.
    ++r.routed_count;
    const bool online = a.decision.mode == InferenceMode::Online;
    ++(online ? r.online_count : r.offline_count);
    if (a.transcript.asr_correct) ++r.asr_correct_count;
    if (a.no_repair_correct) {
      ++r.no_repair_correct_count;
      ++(online ? r.no_repair_correct_online_count : r.no_repair_correct_offline_count);
    }
    if (a.transcript.asr_correct && a.no_repair_correct) ++r.end_to_end_no_repair_count;
    if (a.metrics.perturbation.fired) ++r.balancer_fired_count;
    if (a.metrics.raw.probe_failed) ++r.probe_failed_count;

    cpu.add(a.metrics.raw.cpu_pct);
    lat.add(a.metrics.raw.latency_ms);
    temp.add(a.metrics.raw.temp_c);
    cpu_p.add(a.metrics.perturbation.perturbed.cpu_pct);
    lat_p.add(a.metrics.perturbation.perturbed.latency_ms);
    temp_p.add(a.metrics.perturbation.perturbed.temp_c);
    if (a.inference.succeeded) infer.add(a.inference.latency_ms);
  }
  const auto n = r.total_samples;
  r.routed_pct = percent(r.routed_count, n);
  r.online_pct = percent(r.online_count, n);
  r.offline_pct = percent(r.offline_count, n);
  r.asr_correct_pct = percent(r.asr_correct_count, n);
  r.no_repair_correct_pct = percent(r.no_repair_correct_count, n);
  r.no_repair_correct_online_pct = percent(r.no_repair_correct_online_count, r.online_count);
  r.no_repair_correct_offline_pct = percent(r.no_repair_correct_offline_count, r.offline_count);
  r.end_to_end_no_repair_pct = percent(r.end_to_end_no_repair_count, n);
  r.avg_cpu_pct = cpu.value();
  r.avg_latency_ms = lat.value();
  r.avg_temp_c = temp.value();
  r.avg_cpu_pct_perturbed = cpu_p.value();
  r.avg_latency_ms_perturbed = lat_p.value();
  r.avg_temp_c_perturbed = temp_p.value();
  r.avg_inference_latency_ms = infer.value();
  return r;
}

json summary_to_json(const SummaryReport& r) {
  return json{
      {"total_samples", r.total_samples},
      {"routed_count", r.routed_count},
      {"routed_pct", opt(r.routed_pct)},
      {"online_count", r.online_count},
      {"offline_count", r.offline_count},
      {"online_pct", opt(r.online_pct)},
      {"offline_pct", opt(r.offline_pct)},
      {"asr_correct_count", r.asr_correct_count},
      {"asr_correct_pct", opt(r.asr_correct_pct)},
      {"no_repair_correct_count", r.no_repair_correct_count},
      {"no_repair_correct_pct", opt(r.no_repair_correct_pct)},
      {"no_repair_correct_online_count", r.no_repair_correct_online_count},
      {"no_repair_correct_online_pct", opt(r.no_repair_correct_online_pct)},
      {"no_repair_correct_offline_count", r.no_repair_correct_offline_count},
      {"no_repair_correct_offline_pct", opt(r.no_repair_correct_offline_pct)},
      {"end_to_end_no_repair_count", r.end_to_end_no_repair_count},
      {"end_to_end_no_repair_pct", opt(r.end_to_end_no_repair_pct)},
      {"balancer_fired_count", r.balancer_fired_count},
      {"probe_failed_count", r.probe_failed_count},
      {"avg_cpu_pct", opt(r.avg_cpu_pct)},
      {"avg_latency_ms", opt(r.avg_latency_ms)},
      {"avg_temp_c", opt(r.avg_temp_c)},
      {"avg_cpu_pct_perturbed", opt(r.avg_cpu_pct_perturbed)},
      {"avg_latency_ms_perturbed", opt(r.avg_latency_ms_perturbed)},
      {"avg_temp_c_perturbed", opt(r.avg_temp_c_perturbed)},
      {"avg_inference_latency_ms", opt(r.avg_inference_latency_ms)},
      {"definitions",
       {{"asr_correct", "normalized hypothesis equals normalized reference; digits and number words differ"},
        {"no_repair_correct",
         "every parsed command validated without repair and the parsed list equals the expected list"},
        {"percentages", "count/total*100 in double precision, rounded to one decimal; per-mode splits are relative to that mode's count"},
        {"averages", "raw pre-balancer metrics; *_perturbed are what the router saw"}}},
  };
}

void write_summary(const SummaryReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ArtifactIoError("cannot write summary: " + path.string());
  }
  out << summary_to_json(report).dump(2) << '\n';
  if (!out.flush()) {
    throw ArtifactIoError("failed writing summary: " + path.string());
  }
}

std::vector<std::filesystem::path> emit_plot_data(const std::vector<SampleArtifact>& artifacts,
                                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw ArtifactIoError("cannot create plot directory " + out_dir.string() + ": " + ec.message());
  }
  const std::vector<std::filesystem::path> paths = {out_dir / "temperature.csv", out_dir / "latency.csv",
                                                    out_dir / "workload.csv"};
  write_csv(paths[0], artifacts, [](const SystemMetrics& m) { return m.temp_c; });
  write_csv(paths[1], artifacts, [](const SystemMetrics& m) { return m.latency_ms; });
  write_csv(paths[2], artifacts, [](const SystemMetrics& m) { return m.cpu_pct; });
  return paths;
}

ReplayResult replay_corpus(const std::vector<CorpusSample>& corpus, AppConfig config, const ReplayOptions& options) {
  if (options.seed_override) {
    config.balancer.seed = *options.seed_override;
  }
  config.check();

  ReplayResult result;
  result.run_dir = options.runs_root / (options.run_id.empty() ? default_run_id() : options.run_id);
  const auto artifact_dir = result.run_dir / "artifacts";
  std::error_code ec;
  std::filesystem::create_directories(artifact_dir, ec);
  if (ec) {
    throw ArtifactIoError("cannot create run directory " + artifact_dir.string() + ": " + ec.message());
  }
  // Stale artifacts from an earlier run with the same id would be picked up
  // by `report`.
  for (const auto& entry : std::filesystem::directory_iterator(artifact_dir)) {
    if (entry.path().extension() == ".json") {
      std::filesystem::remove(entry.path(), ec);
    }
  }

  const auto history_path = config.history.path.value_or(result.run_dir / "history.jsonl");
  if (!config.history.path) {
    std::filesystem::remove(history_path, ec);
  }
  HistoryStore history = [&] {
    try {
      return HistoryStore::load(history_path);
    } catch (const HistoryIoError& e) {
      throw ArtifactIoError(e.what());
    }
  }();
  DeviceRegistry registry(config.vocab);
  Pipeline pipeline(config, make_components(config), history, registry);

  result.artifacts.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    SampleArtifact art = pipeline.run(corpus[i], i);
    if (options.canonical) {
      canonicalize(art);
    }
    write_artifact(art, artifact_dir);
    result.artifacts.push_back(std::move(art));
  }

  result.summary = compute_summary(result.artifacts);
  write_summary(result.summary, result.run_dir / "summary.json");
  emit_plot_data(result.artifacts, result.run_dir / "plots");
  return result;
}

}  // namespace voxroute
