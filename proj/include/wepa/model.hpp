#pragma once

// Toy autoregressive token models.

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "wepa/rng.hpp"

namespace wepa {

using Token = std::uint32_t;
using TokenSeq = std::vector<Token>;

class ModelSpec {
 public:
  enum class Kind { kUniform, kCategorical, kMarkov };

  static ModelSpec uniform(std::size_t vocab_size);
  static ModelSpec categorical(std::vector<double> probs);
  /// `counts` maps a context (the `order` most recent tokens, oldest first) to
  /// per-token counts. next_dist smooths with add-alpha; an unseen context
  /// backs off to shorter contexts and finally to uniform.
  static ModelSpec markov(std::size_t vocab_size, std::size_t order, double alpha,
                          std::map<TokenSeq, std::vector<double>> counts);

  Kind kind() const { return kind_; }
  std::size_t vocab_size() const { return vocab_size_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::map<TokenSeq, std::vector<double>>& counts() const { return counts_; }

 private:
  ModelSpec() = default;

  Kind kind_ = Kind::kUniform;
  std::size_t vocab_size_ = 0;
  std::vector<double> probs_;
  std::size_t order_ = 0;
  double alpha_ = 0.1;
  std::map<TokenSeq, std::vector<double>> counts_;
};

/// Counts every context of length 1..order (and the empty context) in `corpus`.
ModelSpec train_markov(std::span<const Token> corpus, std::size_t vocab_size,
                       std::size_t order, double alpha = 0.1);

/// Byte-level tokenization: one token per UTF-8 code unit, vocabulary 256.
TokenSeq tokenize_bytes(std::string_view text);

/// Conditional distribution of the next token. Throws std::out_of_range if a
/// prefix token is outside the vocabulary.
std::vector<double> next_dist(const ModelSpec& model, std::span<const Token> prefix);

/// Draws one token from a probability vector by inversion.
Token sample_categorical(std::span<const double> probs, Rng& rng);

TokenSeq generate_plain(const ModelSpec& model, std::span<const Token> prompt,
                        std::size_t m, std::uint64_t seed);

/// Shannon entropy in bits.
double entropy_bits(std::span<const double> probs);

/// Monte-Carlo mean of H(y_i | y_<i) over `samples` sequences of length m.
double entropy_rate(const ModelSpec& model, std::size_t samples, std::size_t m,
                    std::uint64_t seed);

void check_tokens(std::span<const Token> tokens, std::size_t vocab_size);

}  // namespace wepa
