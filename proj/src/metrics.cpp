// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "http.hpp"

namespace voxroute {

SystemMetrics sample_system(const MetricProviders& providers) {
  SystemMetrics m;
  m.sampled_at = utc_now();

  auto read = [](const MetricReader& reader) -> std::optional<double> {
    if (!reader) {
      return std::nullopt;
    }
    try {
      return reader();
    } catch (...) {
      return std::nullopt;
    }
  };

  if (auto cpu = read(providers.cpu); cpu && !std::isnan(*cpu)) {
    m.cpu_pct = std::clamp(*cpu, 0.0, 100.0);
  } else {
    m.cpu_degraded = true;
  }

  if (auto temp = read(providers.temp); temp && std::isfinite(*temp)) {
    m.temp_c = *temp;
  } else {
    m.temp_degraded = true;
  }

  if (auto lat = read(providers.latency); lat && std::isfinite(*lat) && *lat >= 0.0) {
    m.latency_ms = *lat;
  } else {
    m.latency_ms = kLatencyUnreachable;
    m.probe_failed = true;
  }
  return m;
}

LatencyProbe::LatencyProbe(std::size_t window, MetricReader measure)
    : window_(window), measure_(std::move(measure)) {
  if (window_ == 0) {
    throw std::invalid_argument("latency probe window must be >= 1");
  }
}

double LatencyProbe::probe() {
  std::optional<double> rtt;
  try {
    rtt = measure_ ? measure_() : std::nullopt;
  } catch (...) {
    rtt.reset();
  }
  const double value = (rtt && std::isfinite(*rtt) && *rtt >= 0.0) ? *rtt : kLatencyUnreachable;

  std::lock_guard lock(mu_);
  samples_.push_back(value);
  while (samples_.size() > window_) {
    samples_.pop_front();
  }
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

std::optional<double> LatencyProbe::last_mean() const {
  std::lock_guard lock(mu_);
  if (samples_.empty()) {
    return std::nullopt;
  }
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

std::deque<double> LatencyProbe::window_contents() const {
  std::lock_guard lock(mu_);
  return samples_;
}

std::optional<double> measure_http_round_trip(const std::string& endpoint_url,
                                              std::chrono::milliseconds timeout) {
  const auto start = std::chrono::steady_clock::now();
  const auto outcome = http::head(endpoint_url, timeout);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  if (!outcome.reply) {
    return std::nullopt;
  }
  return std::chrono::duration<double, std::milli>(elapsed).count();
}

double probe_latency(const std::string& endpoint_url, std::chrono::milliseconds timeout,
                     std::size_t window) {
  LatencyProbe probe(window, [&] { return measure_http_round_trip(endpoint_url, timeout); });
  double mean = kLatencyUnreachable;
  for (std::size_t i = 0; i < window; ++i) {
    mean = probe.probe();
  }
  return mean;
}

namespace {

struct CpuTicks {
  unsigned long long busy = 0;
  unsigned long long total = 0;
};

std::optional<CpuTicks> read_proc_stat() {
  std::ifstream in("/proc/stat");
  std::string line;
  if (!in || !std::getline(in, line) || line.rfind("cpu ", 0) != 0) {
    return std::nullopt;
  }
  std::istringstream fields(line.substr(4));
  std::vector<unsigned long long> v;
  unsigned long long x = 0;
  while (fields >> x) {
    v.push_back(x);
  }
  if (v.size() < 4) {
    return std::nullopt;
  }
  CpuTicks t;
  t.total = std::accumulate(v.begin(), v.end(), 0ULL);
  // idle + iowait
  const unsigned long long idle = v[3] + (v.size() > 4 ? v[4] : 0);
  t.busy = t.total - idle;
  return t;
}

}  // namespace

MetricReader make_proc_cpu_reader() {
  auto previous = std::make_shared<std::optional<CpuTicks>>();
  return [previous]() -> std::optional<double> {
    if (!*previous) {
      *previous = read_proc_stat();
      if (!*previous) {
        return std::nullopt;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    auto now = read_proc_stat();
    if (!now) {
      return std::nullopt;
    }
    const auto dt = now->total - (*previous)->total;
    const auto db = now->busy - (*previous)->busy;
    *previous = now;
    if (dt == 0) {
      return 0.0;
    }
    return 100.0 * static_cast<double>(db) / static_cast<double>(dt);
  };
}

MetricReader make_thermal_zone_reader(std::string sysfs_root) {
  return [root = std::move(sysfs_root)]() -> std::optional<double> {
    namespace fs = std::filesystem;
    std::error_code ec;
    double sum = 0.0;
    int count = 0;
    for (const auto& entry : fs::directory_iterator(root, ec)) {
      if (entry.path().filename().string().rfind("thermal_zone", 0) != 0) {
        continue;
      }
      std::ifstream in(entry.path() / "temp");
      long millideg = 0;
      if (in >> millideg) {
        sum += static_cast<double>(millideg) / 1000.0;
        ++count;
      }
    }
    if (count == 0) {
      return std::nullopt;
    }
    return sum / count;
  };
}

void BalancerConfig::check() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw std::invalid_argument("balancer probability must lie in [0, 1]");
  }
  if (!(cpu_range.first < cpu_range.second) || !(temp_range.first < temp_range.second)) {
    throw std::invalid_argument("balancer perturbation ranges must be non-empty");
  }
}

MetricBalancer::MetricBalancer(BalancerConfig cfg) : cfg_(cfg), engine_(cfg.seed) { cfg_.check(); }

double MetricBalancer::next_unit() {
  // 53 high bits -> [0, 1). Written out instead of std::uniform_real_distribution
  // so the sequence is identical across standard libraries.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

PerturbationRecord MetricBalancer::perturb(const SystemMetrics& metrics) {
  const double coin = next_unit();
  const double cpu_u = next_unit();
  const double temp_u = next_unit();

  PerturbationRecord rec;
  rec.original = metrics;
  rec.perturbed = metrics;
  rec.fired = cfg_.enabled && coin < cfg_.probability;
  if (rec.fired) {
    // high - u*(high-low) maps [0,1) onto (low, high].
    const auto [cpu_lo, cpu_hi] = cfg_.cpu_range;
    const auto [temp_lo, temp_hi] = cfg_.temp_range;
    auto push = [](double lo, double hi, double u) {
      // Rounding can land exactly on `lo` for u close to 1.
      return std::max(hi - u * (hi - lo), std::nextafter(lo, hi));
    };
    rec.perturbed.cpu_pct = push(cpu_lo, cpu_hi, cpu_u);
    rec.perturbed.temp_c = push(temp_lo, temp_hi, temp_u);
  }
  return rec;
}

}  // namespace voxroute
