#include "wepa/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wepa/decode.hpp"

namespace wepa {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: no values");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double roc_auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) return kNaN;
  double wins = 0.0;
  for (double p : positives) {
    for (double n : negatives) {
      if (p < n) wins += 1.0;
      else if (p == n) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(positives.size()) * static_cast<double>(negatives.size()));
}

double tpr_at_fpr(std::span<const double> positives, std::span<const double> negatives,
                  double max_fpr) {
  if (positives.empty() || negatives.empty()) return kNaN;
  std::vector<double> candidates(negatives.begin(), negatives.end());
  candidates.insert(candidates.end(), positives.begin(), positives.end());
  std::sort(candidates.begin(), candidates.end());
  double best = 0.0;
  for (double tau : candidates) {
    const auto fp = std::count_if(negatives.begin(), negatives.end(),
                                  [tau](double v) { return v <= tau; });
    if (static_cast<double>(fp) > max_fpr * static_cast<double>(negatives.size())) break;
    const auto tp = std::count_if(positives.begin(), positives.end(),
                                  [tau](double v) { return v <= tau; });
    best = std::max(best, static_cast<double>(tp) / static_cast<double>(positives.size()));
  }
  return best;
}

SweepRow run_cell(const SweepConfig& config, const std::string& experiment,
                  const TrialSetup& setup, std::uint64_t cell_seed) {
  SweepRow row;
  row.experiment = experiment;
  row.m = setup.m;
  row.lambda = setup.key.lambda;
  row.degree = setup.key.degree;
  row.bitwidth = setup.key.bitwidth;
  row.precision = setup.key.precision;
  row.trials = config.trials;
  row.seed = cell_seed;
  if (setup.attack) {
    row.attack = std::string(attack_kind_name(setup.attack->kind));
    row.epsilon = setup.attack->fraction;
  }
  row.p_values.resize(config.trials);
  if (config.null_arm) row.null_p_values.resize(config.trials);

  const std::size_t vocab = config.model.vocab_size();
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    KeyParams params = setup.key;
    params.vocab_size = vocab;
    params.seed = derive_seed(cell_seed, 1, t);
    const KeyAutomaton key(params);

    Rng rng(derive_seed(cell_seed, 2, t));
    TokenSeq y = generate_watermarked(config.model, key, config.prompt, setup.m, rng).tokens;
    if (setup.attack) {
      AttackSpec spec = *setup.attack;
      spec.seed = derive_seed(cell_seed, 4, t);
      y = corrupt(y, spec, vocab);
    }
    const std::uint64_t null_seed = derive_seed(cell_seed, 3, t);
    row.p_values[t] = p_value(y, key, config.costs, config.null_samples, null_seed, 1).p_hat;

    if (config.null_arm) {
      const TokenSeq plain =
          generate_plain(config.model, config.prompt, setup.m, derive_seed(cell_seed, 5, t));
      row.null_p_values[t] =
          p_value(plain, key, config.costs, config.null_samples, null_seed, 1).p_hat;
    }
  });

  row.p_q33 = quantile(row.p_values, 1.0 / 3.0);
  row.p_median = quantile(row.p_values, 0.5);
  row.p_q67 = quantile(row.p_values, 2.0 / 3.0);
  if (config.null_arm) {
    row.null_median = quantile(row.null_p_values, 0.5);
    row.roc_auc = roc_auc(row.p_values, row.null_p_values);
    row.tpr_at_1fpr = tpr_at_fpr(row.p_values, row.null_p_values, 0.01);
  } else {
    row.null_median = row.roc_auc = row.tpr_at_1fpr = kNaN;
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("sweep: trials must be >= 1");
  std::vector<SweepRow> rows;
  std::uint64_t cell = 0;
  auto next_seed = [&] { return derive_seed(config.seed, cell++); };

  for (std::size_t m : config.lengths) {
    rows.push_back(run_cell(config, "length", TrialSetup{config.key, m, std::nullopt},
                            next_seed()));
  }
  for (AttackKind kind : config.attack_kinds) {
    for (double eps : config.epsilons) {
      rows.push_back(run_cell(config, "attack",
                              TrialSetup{config.key, config.attack_length,
                                         AttackSpec{kind, eps, 0}},
                              next_seed()));
    }
  }
  for (std::size_t lambda : config.lambdas) {
    KeyParams params = config.key;
    params.lambda = lambda;
    rows.push_back(run_cell(config, "lambda",
                            TrialSetup{params, config.lambda_length, std::nullopt},
                            next_seed()));
  }
  for (unsigned b : config.bitwidths) {
    KeyParams params = config.key;
    params.bitwidth = b;
    params.precision = std::max(b, config.bitwidth_precision);
    rows.push_back(run_cell(config, "bitwidth",
                            TrialSetup{params, config.bitwidth_length, std::nullopt},
                            next_seed()));
  }
  return rows;
}

std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "# sweep_seed=" << config.seed << " trials=" << config.trials
      << " null_samples=" << config.null_samples << " gamma_d=" << config.costs.gamma_d
      << " gamma_i=" << config.costs.gamma_i << "\n";
  out << "# cell_seed=derive(sweep_seed, cell); per trial t: key=derive(cell_seed,1,t)"
         " generation=derive(cell_seed,2,t) nulls=derive(cell_seed,3,t)"
         " attack=derive(cell_seed,4,t) plain=derive(cell_seed,5,t)\n";
  out << "experiment,m,lambda,d,bitwidth,precision,attack,epsilon,trials,cell_seed,"
         "p_q33,p_median,p_q67,null_median,roc_auc,tpr_at_1fpr\n";
  out.precision(10);
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.m << ',' << r.lambda << ',' << r.degree << ','
        << r.bitwidth << ',' << r.precision << ',' << r.attack << ',' << r.epsilon << ','
        << r.trials << ',' << r.seed << ',' << r.p_q33 << ',' << r.p_median << ','
        << r.p_q67 << ',' << r.null_median << ',' << r.roc_auc << ',' << r.tpr_at_1fpr
        << '\n';
  }
  return out.str();
}

}  // namespace wepa
