#pragma once

// Detection cost benchmarks.
//
// baseline_block_detect is a complexity stand-in for block-alignment detectors
// over a cyclic key sequence: for every cyclic shift and every length-k window
// of y it runs a k x k soft edit alignment, Theta(lambda * |y| * k^2). It is not
// a reimplementation of any published detector.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wepa/key.hpp"
#include "wepa/model.hpp"

namespace wepa {

struct BaselineParams {
  std::size_t block_k = 8;
  double gap_cost = 1.0;
};

/// Minimum over windows of y of the soft alignment against the key window at
/// cyclic offset `shift`.
double baseline_shift_statistic(std::span<const Token> y,
                                std::span<const NoiseVector> key_sequence,
                                const BaselineParams& params, std::size_t shift);

/// Minimum of baseline_shift_statistic over all shifts. Throws
/// std::invalid_argument if k > |y| or k == 0.
double baseline_block_detect(std::span<const Token> y,
                             std::span<const NoiseVector> key_sequence,
                             const BaselineParams& params);

/// Noise rows of a key in state order.
std::vector<NoiseVector> key_sequence_of(const KeyAutomaton& key);

struct TimingRow {
  std::string detector;  // "wepa" or "baseline-standin"
  std::size_t m = 0;
  std::size_t lambda = 0;
  std::size_t degree = 0;
  std::size_t k = 0;
  std::int64_t median_ns = 0;
  std::vector<std::int64_t> samples_ns;
};

struct ScalingGrid {
  std::vector<std::size_t> m_values{512, 1024, 2048};
  std::size_t lambda_for_m = 256;
  std::vector<std::size_t> lambda_values{512, 1024, 2048};
  std::size_t m_for_lambda = 512;
  std::vector<std::size_t> k_values{8, 16, 32};
  std::size_t lambda_for_k = 256;
  std::size_t length_for_k = 256;
  std::size_t degree = 1;
  std::size_t vocab_size = 32000;        // lev_dp inputs
  std::size_t baseline_vocab_size = 32;  // baseline materializes full noise rows
  int warmup = 1;
  int samples = 5;
  std::int64_t min_sample_ns = 100'000'000;
  std::uint64_t seed = 0;
};

struct ScalingReport {
  std::vector<TimingRow> rows;
  double slope_m = 0.0;       // wepa time vs m
  double slope_lambda = 0.0;  // wepa time vs lambda
  double slope_k = 0.0;       // baseline time vs k
};

/// Least-squares slope of log(ys) against log(xs).
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

TimingRow time_lev_dp(std::size_t m, std::size_t lambda, std::size_t degree,
                      const ScalingGrid& grid);
TimingRow time_baseline(std::size_t length, std::size_t lambda, std::size_t k,
                        const ScalingGrid& grid);

/// Throws std::invalid_argument if any axis of the grid is empty.
ScalingReport scaling_report(const ScalingGrid& grid);

/// CSV with columns detector,m,lambda,d,k,median_ns,samples...
std::string timing_csv(const std::vector<TimingRow>& rows);

}  // namespace wepa
