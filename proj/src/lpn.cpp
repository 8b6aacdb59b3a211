#include "wepa/lpn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wepa/decode.hpp"

namespace wepa {
namespace {

void check_q(double q) {
  if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("lpn: q must lie in (0, 1/2)");
}

std::uint8_t stream_indicator(const LpnKey& key, std::size_t position) {
  const auto pair = lpn_stream_pair(key, position);
  return pair.mu0 < pair.mu1 ? 1 : 0;
}

// Noiseless parity bit for the embedded position `position`.
std::uint8_t target_bit(const LpnKey& key, std::size_t position) {
  std::vector<std::uint8_t> buffer(key.lambda);
  for (std::size_t k = 0; k < key.lambda; ++k) {
    buffer[k] = stream_indicator(key, position - key.lambda + k);
  }
  return parity(key, buffer);
}

}  // namespace

LpnKey lpn_gen(std::size_t lambda, double q, std::uint64_t seed) {
  if (lambda < 2) throw std::invalid_argument("lpn: lambda must be >= 2");
  check_q(q);
  const auto weight = static_cast<std::size_t>(std::bit_width(lambda) - 1);
  std::vector<std::size_t> indices(lambda);
  std::iota(indices.begin(), indices.end(), 0);
  Rng rng(derive_seed(seed, 0x737570ULL));
  // Partial Fisher-Yates: the first `weight` slots form a uniform subset.
  for (std::size_t i = 0; i < weight; ++i) {
    const auto j = i + uniform_below(rng, lambda - i);
    std::swap(indices[i], indices[j]);
  }
  std::vector<std::size_t> support(indices.begin(),
                                   indices.begin() + static_cast<std::ptrdiff_t>(weight));
  std::sort(support.begin(), support.end());
  return LpnKey{lambda, std::move(support), q, seed};
}

std::uint8_t parity(const LpnKey& key, std::span<const std::uint8_t> x) {
  if (x.size() != key.lambda) throw std::invalid_argument("parity: |x| != lambda");
  std::uint8_t bit = 0;
  for (std::size_t idx : key.support) bit ^= (x[idx] & 1U);
  return bit;
}

GumbelPair lpn_stream_pair(const LpnKey& key, std::size_t position) {
  return {bits_to_unit53(derive_seed(key.seed, position, 0)),
          bits_to_unit53(derive_seed(key.seed, position, 1))};
}

LpnTrace lpn_generate(const ModelSpec& model, const LpnKey& key, std::size_t m,
                      Rng& rng) {
  if (model.vocab_size() != 2) throw std::invalid_argument("lpn: model must be binary");
  if (m < key.lambda + 1) throw std::invalid_argument("lpn: m < lambda + 1");
  check_q(key.q);

  LpnTrace trace;
  trace.tokens.reserve(m);
  double entropy = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const auto pi = next_dist(model, trace.tokens);
    auto pair = lpn_stream_pair(key, i);
    if (lpn_is_embedded(key, i)) {
      const std::uint8_t b = target_bit(key, i);
      const std::uint8_t flip = uniform01(rng) < key.q ? 1 : 0;
      const std::uint8_t want = b ^ flip;
      const std::uint8_t have = pair.mu0 < pair.mu1 ? 1 : 0;
      const bool swap = have != want;
      if (swap) std::swap(pair.mu0, pair.mu1);
      trace.parity_bits.push_back(b);
      trace.swapped.push_back(swap ? 1 : 0);
      entropy += entropy_bits(pi);
    }
    const double mu[2] = {pair.mu0, pair.mu1};
    trace.tokens.push_back(gamma_exp_min(mu, pi));
  }
  if (!trace.swapped.empty()) {
    trace.mean_embedded_entropy = entropy / static_cast<double>(trace.swapped.size());
  }
  return trace;
}

LpnReport lpn_detect(std::span<const Token> y, const LpnKey& key, double theta) {
  check_tokens(y, 2);
  const std::size_t t = y.size() / (key.lambda + 1);
  if (t == 0) throw std::invalid_argument("lpn_detect: no embedded positions");
  LpnReport report;
  report.embedded_positions = t;
  report.theta = theta;
  std::size_t matches = 0;
  for (std::size_t k = 1; k <= t; ++k) {
    const std::size_t i = k * (key.lambda + 1);
    // The pair used at i is the stream pair reordered to carry the parity bit,
    // so its indicator is the parity bit itself.
    const std::uint8_t x = target_bit(key, i);
    report.swapped.push_back(stream_indicator(key, i) != x ? 1 : 0);
    if (y[i - 1] == x) ++matches;
  }
  report.match_rate = static_cast<double>(matches) / static_cast<double>(t);
  report.verdict = report.match_rate >= 0.5 + theta;
  return report;
}

double entropy_threshold(double q) {
  check_q(q);
  return 2.0 + std::log2(1.0 - q) -
         (3.0 - 4.0 * q) / (4.0 * (1.0 - q)) * std::log2(3.0 - 4.0 * q);
}

}  // namespace wepa
