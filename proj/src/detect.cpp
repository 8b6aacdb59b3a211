#include "wepa/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace wepa {
namespace {

// cost_d0_state for every state. Columns of tokens that repeat in y are
// computed once; tokens that occur once are scored into a scratch column.
class CostColumns {
 public:
  CostColumns(std::span<const Token> y, const KeyAutomaton& key)
      : key_(key), y_(y), lambda_(key.lambda()), scratch_(lambda_) {
    std::vector<std::uint32_t> occurrences(key.vocab_size(), 0);
    for (Token t : y) ++occurrences[t];
    std::vector<std::int64_t> slot(key.vocab_size(), -1);
    slot_of_position_.reserve(y.size());
    std::size_t used = 0;
    for (Token t : y) {
      if (occurrences[t] > 1 && slot[t] < 0) {
        slot[t] = static_cast<std::int64_t>(used++);
        values_.resize(used * lambda_);
        fill(t, values_.data() + (used - 1) * lambda_);
      }
      slot_of_position_.push_back(slot[t]);
    }
  }

  const double* column(std::size_t position) {
    const std::int64_t slot = slot_of_position_[position];
    if (slot >= 0) return values_.data() + static_cast<std::size_t>(slot) * lambda_;
    fill(y_[position], scratch_.data());
    return scratch_.data();
  }

 private:
  void fill(Token t, double* out) const {
    for (State u = 0; u < lambda_; ++u) out[u] = cost_d0_state(key_, u, t);
  }

  const KeyAutomaton& key_;
  std::span<const Token> y_;
  std::size_t lambda_;
  std::vector<std::int64_t> slot_of_position_;
  std::vector<double> values_;  // slot * lambda + state
  std::vector<double> scratch_;
};

}  // namespace

void CostParams::validate() const {
  if (!(gamma_i > 0.0) || !std::isfinite(gamma_i)) {
    throw std::invalid_argument("costs: gamma_i must be > 0");
  }
  if (!(gamma_d >= 0.0) || !std::isfinite(gamma_d)) {
    throw std::invalid_argument("costs: gamma_d must be >= 0");
  }
}

double cost_d0(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("cost_d0: mu must lie in [0, 1)");
  return std::log1p(-mu);
}

double cost_d0_state(const KeyAutomaton& key, State state, Token y) {
  return cost_d0(key.noise(state, y));
}

double lev_dp(std::span<const Token> y, const KeyAutomaton& key,
              const CostParams& costs) {
  costs.validate();
  check_tokens(y, key.vocab_size());
  const std::size_t lambda = key.lambda();
  const std::size_t d = key.degree();
  CostColumns table(y, key);

  std::vector<double> f(lambda, 0.0);
  std::vector<double> g(lambda, 0.0);
  auto pred = [lambda](std::size_t u, std::size_t k) {
    return u >= k ? u - k : u + lambda - k;
  };

  for (std::size_t i = 0; i < y.size(); ++i) {
    const double* cost = table.column(i);
    for (std::size_t u = 0; u < lambda; ++u) {
      double best = g[u] + costs.gamma_d;
      for (std::size_t k = 1; k <= d; ++k) {
        best = std::min(best, g[pred(u, k)] + cost[u]);
      }
      f[u] = best;
    }

    // Insertions form a cycle; sweeping from just after the global minimum
    // visits every improving chain in order.
    const std::size_t pivot =
        static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    auto relax = [&](std::size_t u) {
      for (std::size_t k = 1; k <= d; ++k) {
        f[u] = std::min(f[u], f[pred(u, k)] + costs.gamma_i);
      }
    };
    for (std::size_t u = pivot + 1; u < lambda; ++u) relax(u);
    for (std::size_t u = 0; u < pivot; ++u) relax(u);

    std::swap(f, g);
  }
  return *std::min_element(g.begin(), g.end());
}

double lev_bruteforce(std::span<const Token> y, const KeyAutomaton& key,
                      const CostParams& costs, std::size_t max_path_len,
                      std::size_t node_limit) {
  costs.validate();
  check_tokens(y, key.vocab_size());
  const std::size_t m = y.size();
  const std::size_t lambda = key.lambda();
  const std::size_t d = key.degree();

  double nodes = 1.0;
  double level = static_cast<double>(lambda);
  for (std::size_t len = 1; len <= max_path_len; ++len) {
    nodes += level;
    level *= static_cast<double>(d);
    if (nodes > static_cast<double>(node_limit)) {
      throw std::invalid_argument("lev_bruteforce: instance too large");
    }
  }

  // column[i] = cost of aligning y[0:i] with the current path prefix.
  std::vector<double> root(m + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i) root[i] = root[i - 1] + costs.gamma_d;
  double best = root[m];

  std::vector<std::vector<double>> columns(max_path_len + 1,
                                           std::vector<double>(m + 1));
  columns[0] = root;

  auto visit = [&](auto&& self, State q, std::size_t depth) -> void {
    const auto& parent = columns[depth - 1];
    auto& col = columns[depth];
    col[0] = parent[0] + costs.gamma_i;
    for (std::size_t i = 1; i <= m; ++i) {
      const double sub = parent[i - 1] + cost_d0_state(key, q, y[i - 1]);
      col[i] = std::min({col[i - 1] + costs.gamma_d, parent[i] + costs.gamma_i, sub});
    }
    best = std::min(best, col[m]);
    if (depth == max_path_len) return;
    for (State next : key.successors(q)) self(self, next, depth + 1);
  };
  if (max_path_len > 0) {
    for (State q = 0; q < lambda; ++q) visit(visit, q, 1);
  }
  return best;
}

double vp_bound(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("vp_bound: z must be finite");
  if (z > 0.0) return 1.0;
  const double z2p1 = z * z + 1.0;
  double bound = std::abs(z) >= std::sqrt(5.0 / 3.0) ? 4.0 / (9.0 * z2p1)
                                                      : 4.0 / (3.0 * z2p1) - 1.0 / 3.0;
  return std::clamp(bound, std::numeric_limits<double>::min(), 1.0);
}

std::uint64_t null_key_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, 0x6e756c6cULL, index);
}

std::vector<double> null_statistics(std::span<const Token> y, const KeyParams& shape,
                                    const CostParams& costs, std::size_t null_samples,
                                    std::uint64_t seed, unsigned threads) {
  std::vector<double> psi(null_samples);
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, null_samples)));

  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < null_samples; i += threads) {
      KeyParams params = shape;
      params.seed = null_key_seed(seed, i);
      psi[i] = lev_dp(y, KeyAutomaton(params), costs);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  return psi;
}

DetectionReport p_value(std::span<const Token> y, const KeyAutomaton& key,
                        const CostParams& costs, std::size_t null_samples,
                        std::uint64_t seed, unsigned threads) {
  if (null_samples == 0) throw std::invalid_argument("p_value: need N >= 1");
  DetectionReport report;
  report.seed = seed;
  report.null_samples = null_samples;
  report.psi = lev_dp(y, key, costs);
  const auto psi = null_statistics(y, key.params(), costs, null_samples, seed, threads);

  std::size_t at_or_below = 0;
  double sum = 0.0;
  for (double v : psi) {
    if (v <= report.psi) ++at_or_below;
    sum += v;
  }
  const auto n = static_cast<double>(null_samples);
  report.p_hat = (1.0 + static_cast<double>(at_or_below)) / (n + 1.0);
  report.null_mean = sum / n;
  double ss = 0.0;
  for (double v : psi) ss += (v - report.null_mean) * (v - report.null_mean);
  report.null_std = null_samples > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  if (report.null_std > 0.0) {
    report.z = (report.psi - report.null_mean) / report.null_std;
    report.vp_bound = vp_bound(report.z);
  } else {
    report.z = std::numeric_limits<double>::quiet_NaN();
    report.vp_bound = 1.0;
  }
  return report;
}

DetectionReport detect(std::span<const Token> y, const KeyAutomaton& key,
                       const CostParams& costs, double threshold,
                       std::size_t null_samples, std::uint64_t seed,
                       unsigned threads) {
  DetectionReport report = p_value(y, key, costs, null_samples, seed, threads);
  report.threshold = threshold;
  report.verdict = report.p_hat <= threshold;
  return report;
}

}  // namespace wepa
