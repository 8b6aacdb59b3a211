#pragma once

// Experiment sweeps: repeated generate -> (attack) -> detect trials over a grid
// of lengths, attack strengths, key sizes, and bitwidths.
//
// Every trial derives its seeds from (config.seed, experiment index, trial), so
// results do not depend on scheduling.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wepa/attacks.hpp"
#include "wepa/detect.hpp"
#include "wepa/key.hpp"
#include "wepa/model.hpp"

namespace wepa {

struct SweepConfig {
  ModelSpec model = ModelSpec::uniform(2);
  TokenSeq prompt;
  KeyParams key;  // vocab_size is taken from the model; seed is unused
  CostParams costs;
  std::size_t trials = 200;
  std::size_t null_samples = 199;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool null_arm = true;

  std::vector<std::size_t> lengths;

  std::vector<AttackKind> attack_kinds;
  std::vector<double> epsilons;
  std::size_t attack_length = 50;

  std::vector<std::size_t> lambdas;
  std::size_t lambda_length = 20;

  std::vector<unsigned> bitwidths;
  unsigned bitwidth_precision = kFloatBits;
  std::size_t bitwidth_length = 20;
};

struct SweepRow {
  std::string experiment;  // length | attack | lambda | bitwidth
  std::size_t m = 0;
  std::size_t lambda = 0;
  std::size_t degree = 0;
  unsigned bitwidth = 0;
  unsigned precision = 0;
  std::string attack = "none";
  double epsilon = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double p_q33 = 0.0;
  double p_median = 0.0;
  double p_q67 = 0.0;
  double null_median = 0.0;  // NaN without a null arm
  double roc_auc = 0.0;      // NaN without a null arm
  double tpr_at_1fpr = 0.0;  // NaN without a null arm
  std::vector<double> p_values;
  std::vector<double> null_p_values;
};

/// Linear-interpolated quantile (type 7).
double quantile(std::vector<double> values, double q);

/// AUC of separating `positives` (small p-values) from `negatives`; ties count
/// one half.
double roc_auc(std::span<const double> positives, std::span<const double> negatives);

/// Fraction of positives at or below the largest threshold whose false
/// positive rate on `negatives` stays <= max_fpr.
double tpr_at_fpr(std::span<const double> positives, std::span<const double> negatives,
                  double max_fpr);

struct TrialSetup {
  KeyParams key;
  std::size_t m = 0;
  std::optional<AttackSpec> attack;
};

/// Runs `trials` watermarked (and optionally null) detections for one cell.
SweepRow run_cell(const SweepConfig& config, const std::string& experiment,
                  const TrialSetup& setup, std::uint64_t cell_seed);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// CSV with '#'-prefixed header lines recording every seed.
std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRow>& rows);

}  // namespace wepa
