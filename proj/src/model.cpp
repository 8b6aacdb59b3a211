#include "wepa/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wepa {

ModelSpec ModelSpec::uniform(std::size_t vocab_size) {
  if (vocab_size == 0) throw std::invalid_argument("model: empty vocabulary");
  ModelSpec m;
  m.kind_ = Kind::kUniform;
  m.vocab_size_ = vocab_size;
  return m;
}

ModelSpec ModelSpec::categorical(std::vector<double> probs) {
  if (probs.empty()) throw std::invalid_argument("model: empty vocabulary");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("model: negative or non-finite probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("model: probabilities do not sum to 1");
  }
  ModelSpec m;
  m.kind_ = Kind::kCategorical;
  m.vocab_size_ = probs.size();
  m.probs_ = std::move(probs);
  return m;
}

ModelSpec ModelSpec::markov(std::size_t vocab_size, std::size_t order,
                            double alpha,
                            std::map<TokenSeq, std::vector<double>> counts) {
  if (vocab_size == 0) throw std::invalid_argument("model: empty vocabulary");
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("model: alpha must be >= 0");
  }
  for (const auto& [context, row] : counts) {
    if (context.size() > order) {
      throw std::invalid_argument("model: context longer than order");
    }
    check_tokens(context, vocab_size);
    if (row.size() != vocab_size) {
      throw std::invalid_argument("model: count row size != vocab size");
    }
    for (double c : row) {
      if (!std::isfinite(c) || c < 0.0) {
        throw std::invalid_argument("model: negative count");
      }
    }
  }
  ModelSpec m;
  m.kind_ = Kind::kMarkov;
  m.vocab_size_ = vocab_size;
  m.order_ = order;
  m.alpha_ = alpha;
  m.counts_ = std::move(counts);
  return m;
}

ModelSpec train_markov(std::span<const Token> corpus, std::size_t vocab_size,
                       std::size_t order, double alpha) {
  check_tokens(corpus, vocab_size);
  std::map<TokenSeq, std::vector<double>> counts;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t k = 0; k <= std::min(order, i); ++k) {
      TokenSeq context(corpus.begin() + static_cast<std::ptrdiff_t>(i - k),
                       corpus.begin() + static_cast<std::ptrdiff_t>(i));
      auto& row = counts[context];
      if (row.empty()) row.assign(vocab_size, 0.0);
      row[corpus[i]] += 1.0;
    }
  }
  return ModelSpec::markov(vocab_size, order, alpha, std::move(counts));
}

TokenSeq tokenize_bytes(std::string_view text) {
  TokenSeq out;
  out.reserve(text.size());
  for (unsigned char c : text) out.push_back(c);
  return out;
}

void check_tokens(std::span<const Token> tokens, std::size_t vocab_size) {
  for (Token t : tokens) {
    if (t >= vocab_size) {
      throw std::out_of_range("token " + std::to_string(t) +
                              " outside vocabulary of size " +
                              std::to_string(vocab_size));
    }
  }
}

std::vector<double> next_dist(const ModelSpec& model, std::span<const Token> prefix) {
  const std::size_t v = model.vocab_size();
  check_tokens(prefix, v);
  switch (model.kind()) {
    case ModelSpec::Kind::kUniform:
      return std::vector<double>(v, 1.0 / static_cast<double>(v));
    case ModelSpec::Kind::kCategorical:
      return model.probs();
    case ModelSpec::Kind::kMarkov:
      break;
  }

  // Longest context with at least one observation wins.
  const std::size_t max_k = std::min(model.order(), prefix.size());
  for (std::size_t k = max_k + 1; k-- > 0;) {
    TokenSeq context(prefix.end() - static_cast<std::ptrdiff_t>(k), prefix.end());
    auto it = model.counts().find(context);
    if (it == model.counts().end()) continue;
    const auto& row = it->second;
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    const double denom = total + model.alpha() * static_cast<double>(v);
    if (denom <= 0.0) continue;
    std::vector<double> out(v);
    for (std::size_t j = 0; j < v; ++j) out[j] = (row[j] + model.alpha()) / denom;
    return out;
  }
  return std::vector<double>(v, 1.0 / static_cast<double>(v));
}

Token sample_categorical(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  Token last_positive = 0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0.0) continue;
    last_positive = static_cast<Token>(j);
    acc += probs[j];
    if (u < acc) return static_cast<Token>(j);
  }
  return last_positive;
}

TokenSeq generate_plain(const ModelSpec& model, std::span<const Token> prompt,
                        std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  TokenSeq context(prompt.begin(), prompt.end());
  TokenSeq out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Token y = sample_categorical(next_dist(model, context), rng);
    out.push_back(y);
    context.push_back(y);
  }
  return out;
}

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy_rate(const ModelSpec& model, std::size_t samples, std::size_t m,
                    std::uint64_t seed) {
  if (samples == 0 || m == 0) {
    throw std::invalid_argument("entropy_rate: samples and m must be >= 1");
  }
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, s));
    TokenSeq prefix;
    for (std::size_t i = 0; i < m; ++i) {
      const auto dist = next_dist(model, prefix);
      total += entropy_bits(dist);
      prefix.push_back(sample_categorical(dist, rng));
    }
  }
  return total / static_cast<double>(samples * m);
}

}  // namespace wepa
