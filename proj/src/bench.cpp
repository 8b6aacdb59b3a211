#include "wepa/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wepa/detect.hpp"

namespace wepa {
namespace {

using Clock = std::chrono::steady_clock;

// Keeps the optimizer from discarding benchmarked results.
volatile double g_sink = 0.0;

template <typename Fn>
TimingRow measure(TimingRow row, const ScalingGrid& grid, Fn&& fn) {
  auto run = [&](std::int64_t reps) {
    const auto start = Clock::now();
    for (std::int64_t r = 0; r < reps; ++r) g_sink = g_sink + fn();
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
        .count();
  };
  std::int64_t reps = 1;
  for (int w = 0; w < std::max(1, grid.warmup); ++w) {
    const auto elapsed = std::max<std::int64_t>(1, run(1));
    reps = std::max<std::int64_t>(1, grid.min_sample_ns / elapsed);
  }
  for (int s = 0; s < std::max(1, grid.samples); ++s) {
    row.samples_ns.push_back(run(reps) / reps);
  }
  std::vector<std::int64_t> sorted = row.samples_ns;
  std::sort(sorted.begin(), sorted.end());
  row.median_ns = sorted[sorted.size() / 2];
  return row;
}

TokenSeq random_tokens(std::size_t n, std::size_t vocab, std::uint64_t seed) {
  Rng rng(seed);
  TokenSeq y(n);
  for (auto& t : y) t = static_cast<Token>(uniform_below(rng, vocab));
  return y;
}

}  // namespace

namespace {

// costs[i * lambda + j] = log(1 - mu_j[y_i]) for token position i, key index j.
std::vector<double> baseline_costs(std::span<const Token> y,
                                   std::span<const NoiseVector> key_sequence) {
  const std::size_t lambda = key_sequence.size();
  std::vector<double> costs(y.size() * lambda);
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = 0; j < lambda; ++j) {
      costs[i * lambda + j] = std::log1p(-key_sequence[j].mu.at(y[i]));
    }
  }
  return costs;
}

double shift_statistic(std::span<const double> costs, std::size_t n, std::size_t lambda,
                       const BaselineParams& params, std::size_t shift) {
  const std::size_t k = params.block_k;
  const double gap = params.gap_cost;
  std::vector<double> prev(k + 1);
  std::vector<double> cur(k + 1);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start + k <= n; ++start) {
    // Rows: tokens y[start..start+k); columns: key indices shift+start+t.
    const std::size_t first_key = (shift + start) % lambda;
    for (std::size_t t = 0; t <= k; ++t) prev[t] = static_cast<double>(t) * gap;
    for (std::size_t i = 1; i <= k; ++i) {
      const double* row = costs.data() + (start + i - 1) * lambda;
      cur[0] = static_cast<double>(i) * gap;
      std::size_t j = first_key;
      for (std::size_t t = 1; t <= k; ++t) {
        cur[t] = std::min({prev[t - 1] + row[j], prev[t] + gap, cur[t - 1] + gap});
        if (++j == lambda) j = 0;
      }
      std::swap(prev, cur);
    }
    best = std::min(best, prev[k]);
  }
  return best;
}

void check_baseline(std::size_t n, std::size_t lambda, const BaselineParams& params) {
  if (lambda == 0) throw std::invalid_argument("baseline: empty key sequence");
  if (params.block_k == 0 || params.block_k > n) {
    throw std::invalid_argument("baseline: need 1 <= k <= |y|");
  }
}

}  // namespace

double baseline_shift_statistic(std::span<const Token> y,
                                std::span<const NoiseVector> key_sequence,
                                const BaselineParams& params, std::size_t shift) {
  check_baseline(y.size(), key_sequence.size(), params);
  const auto costs = baseline_costs(y, key_sequence);
  return shift_statistic(costs, y.size(), key_sequence.size(), params, shift);
}

double baseline_block_detect(std::span<const Token> y,
                             std::span<const NoiseVector> key_sequence,
                             const BaselineParams& params) {
  check_baseline(y.size(), key_sequence.size(), params);
  const auto costs = baseline_costs(y, key_sequence);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < key_sequence.size(); ++s) {
    best = std::min(best, shift_statistic(costs, y.size(), key_sequence.size(), params, s));
  }
  return best;
}

std::vector<NoiseVector> key_sequence_of(const KeyAutomaton& key) {
  std::vector<NoiseVector> seq;
  seq.reserve(key.lambda());
  for (State s = 0; s < key.lambda(); ++s) {
    seq.push_back({key.noise_row(s), key.precision()});
  }
  return seq;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  }
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TimingRow time_lev_dp(std::size_t m, std::size_t lambda, std::size_t degree,
                      const ScalingGrid& grid) {
  const KeyAutomaton key(KeyParams{lambda, degree, grid.vocab_size, kFloatBits,
                                   kFloatBits, derive_seed(grid.seed, 1)});
  const TokenSeq y = random_tokens(m, grid.vocab_size, derive_seed(grid.seed, 2, m));
  const CostParams costs;
  TimingRow row{"wepa", m, lambda, degree, 0, 0, {}};
  return measure(std::move(row), grid, [&] { return lev_dp(y, key, costs); });
}

TimingRow time_baseline(std::size_t length, std::size_t lambda, std::size_t k,
                        const ScalingGrid& grid) {
  const KeyAutomaton key(KeyParams{lambda, 1, grid.baseline_vocab_size, kFloatBits,
                                   kFloatBits, derive_seed(grid.seed, 3)});
  const auto seq = key_sequence_of(key);
  const TokenSeq y =
      random_tokens(length, grid.baseline_vocab_size, derive_seed(grid.seed, 4));
  const BaselineParams params{k, 1.0};
  TimingRow row{"baseline-standin", length, lambda, 1, k, 0, {}};
  return measure(std::move(row), grid,
                 [&] { return baseline_block_detect(y, seq, params); });
}

ScalingReport scaling_report(const ScalingGrid& grid) {
  if (grid.m_values.empty() || grid.lambda_values.empty() || grid.k_values.empty()) {
    throw std::invalid_argument("scaling_report: empty grid axis");
  }
  ScalingReport report;
  auto fit = [&](std::size_t first, auto key_of) {
    std::vector<double> xs, ys;
    for (std::size_t i = first; i < report.rows.size(); ++i) {
      xs.push_back(static_cast<double>(key_of(report.rows[i])));
      ys.push_back(static_cast<double>(report.rows[i].median_ns));
    }
    return xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
  };

  std::size_t first = report.rows.size();
  for (std::size_t m : grid.m_values) {
    report.rows.push_back(time_lev_dp(m, grid.lambda_for_m, grid.degree, grid));
  }
  report.slope_m = fit(first, [](const TimingRow& r) { return r.m; });

  first = report.rows.size();
  for (std::size_t lambda : grid.lambda_values) {
    report.rows.push_back(time_lev_dp(grid.m_for_lambda, lambda, grid.degree, grid));
  }
  report.slope_lambda = fit(first, [](const TimingRow& r) { return r.lambda; });

  first = report.rows.size();
  for (std::size_t k : grid.k_values) {
    report.rows.push_back(time_baseline(grid.length_for_k, grid.lambda_for_k, k, grid));
  }
  report.slope_k = fit(first, [](const TimingRow& r) { return r.k; });
  return report;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::ostringstream out;
  out << "detector,m,lambda,d,k,median_ns,samples\n";
  for (const auto& r : rows) {
    out << r.detector << ',' << r.m << ',' << r.lambda << ',' << r.degree << ','
        << r.k << ',' << r.median_ns;
    for (auto s : r.samples_ns) out << ',' << s;
    out << '\n';
  }
  return out.str();
}

}  // namespace wepa
