#pragma once

// Watermark detection: alignment cost between a token sequence and the key
// automaton's support language, and permutation p-values over fresh keys.
//
// Smaller statistics mean stronger evidence: a matched token contributes
// log(1 - mu_y) <= 0, deletions cost gamma_d and skipped key states gamma_i.

#include <cstdint>
#include <span>
#include <vector>

#include "wepa/key.hpp"
#include "wepa/model.hpp"

namespace wepa {

struct CostParams {
  double gamma_d = 0.0;  // deleting a token of y
  double gamma_i = 2.0;  // skipping a key state

  void validate() const;
};

/// log(1 - mu). Throws std::invalid_argument unless 0 <= mu < 1.
double cost_d0(double mu);

/// Best-case match cost of token y against any noise vector state `state` can
/// emit: the free low bits at zero, i.e. cost_d0(v_{state,y}).
double cost_d0_state(const KeyAutomaton& key, State state, Token y);

/// Generalized Levenshtein distance d_L(y, M_key) by the rolling two-row
/// dynamic program; O(|y| * lambda * d).
double lev_dp(std::span<const Token> y, const KeyAutomaton& key,
              const CostParams& costs = {});

/// Exact minimum over every key path of length <= max_path_len (any start,
/// every state accepting) of the plain edit-distance recursion. Exponential in
/// max_path_len; throws std::invalid_argument when the path trie would exceed
/// `node_limit` nodes.
double lev_bruteforce(std::span<const Token> y, const KeyAutomaton& key,
                      const CostParams& costs, std::size_t max_path_len,
                      std::size_t node_limit = 20'000'000);

struct DetectionReport {
  double psi = 0.0;
  std::size_t null_samples = 0;
  double null_mean = 0.0;
  double null_std = 0.0;
  double p_hat = 1.0;
  double z = 0.0;         // NaN when null_std == 0
  double vp_bound = 1.0;
  double threshold = 0.0;
  bool verdict = false;
  std::uint64_t seed = 0;
};

/// One-sided Vysochanskij-Petunin bound on Pr[Z <= z] for a unimodal null:
///   4 / (9 (z^2 + 1))          if |z| >= sqrt(5/3)
///   4 / (3 (z^2 + 1)) - 1/3    otherwise
/// The bound only informs the left tail; z > 0 yields 1.
double vp_bound(double z);

/// Seed of the i-th null key for a run seeded with `seed`.
std::uint64_t null_key_seed(std::uint64_t seed, std::size_t index);

/// Null statistics psi_1..psi_N over fresh keys sharing the tested key's
/// shape. threads == 0 uses the hardware concurrency; results do not depend on
/// the thread count.
std::vector<double> null_statistics(std::span<const Token> y, const KeyParams& shape,
                                    const CostParams& costs, std::size_t null_samples,
                                    std::uint64_t seed, unsigned threads = 0);

/// Empirical p-value (1 + #{psi_i <= psi}) / (N + 1) with z-score and VP bound.
DetectionReport p_value(std::span<const Token> y, const KeyAutomaton& key,
                        const CostParams& costs, std::size_t null_samples,
                        std::uint64_t seed, unsigned threads = 0);

/// p_value plus verdict = (p_hat <= threshold).
DetectionReport detect(std::span<const Token> y, const KeyAutomaton& key,
                       const CostParams& costs, double threshold,
                       std::size_t null_samples, std::uint64_t seed,
                       unsigned threads = 0);

}  // namespace wepa
