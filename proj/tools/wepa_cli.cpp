// wepa: command-line front end for key generation, watermarked generation,
// detection, attacks, experiment sweeps and benchmarks.
//
// Exit codes: 0 success, 2 usage error, 3 data error. Errors are reported as a
// single JSON object on stderr.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wepa/attacks.hpp"
#include "wepa/bench.hpp"
#include "wepa/decode.hpp"
#include "wepa/detect.hpp"
#include "wepa/io.hpp"
#include "wepa/lpn.hpp"
#include "wepa/suffix_automaton.hpp"
#include "wepa/sweep.hpp"

namespace {

using namespace wepa;

constexpr int kUsageError = 2;
constexpr int kDataError = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump()
            << std::endl;
  return code;
}

unsigned parse_bits(const std::string& text) {
  if (text == "float") return kFloatBits;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw UsageError("bit count must be an integer or \"float\": " + text);
  }
}

void emit_json(const Json& j, const std::string& path) {
  write_text_file(path, j.dump(2) + "\n");
}

TokenSeq read_prompt(const std::string& path) {
  if (path.empty()) return {};
  const std::string text = read_text_file(path);
  try {
    return tokens_from_json(Json::parse(text));
  } catch (const std::exception&) {
    return tokenize_bytes(text);
  }
}

TokenSeq parse_integer_stream(const std::string& text) {
  TokenSeq out;
  std::istringstream in(text);
  long long v = 0;
  while (in >> v) {
    if (v < 0) throw DataError("negative token in integer stream");
    out.push_back(static_cast<Token>(v));
  }
  if (!in.eof()) throw DataError("integer stream contains a non-integer");
  return out;
}

// ---------------------------------------------------------------------------

struct GenKeyArgs {
  std::size_t lambda = 256;
  std::size_t degree = 1;
  std::size_t vocab = 0;
  std::string bitwidth = "float";
  std::string precision;
  std::uint64_t seed = 0;
  bool expanded = false;
  std::string out = "-";
};

int run_gen_key(const GenKeyArgs& a) {
  const unsigned b = parse_bits(a.bitwidth);
  const unsigned c = a.precision.empty() ? b : parse_bits(a.precision);
  KeyAutomaton key = [&] {
    try {
      return gen_key(a.lambda, a.degree, a.vocab, b, c, a.seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  emit_json(to_json(key, a.expanded), a.out);
  return 0;
}

struct TrainArgs {
  std::size_t order = 1;
  double alpha = 0.1;
  std::string input;
  bool integers = false;
  std::size_t vocab = 0;
  std::string out = "-";
};

int run_train(const TrainArgs& a) {
  const std::string text = read_text_file(a.input);
  TokenSeq corpus;
  std::size_t vocab = 256;
  if (a.integers) {
    corpus = parse_integer_stream(text);
    vocab = a.vocab;
    if (vocab == 0) {
      for (Token t : corpus) vocab = std::max<std::size_t>(vocab, t + 1);
    }
  } else {
    corpus = tokenize_bytes(text);
  }
  if (vocab == 0) throw DataError("empty corpus");
  try {
    emit_json(to_json(train_markov(corpus, vocab, a.order, a.alpha)), a.out);
  } catch (const std::out_of_range& e) {
    throw DataError(e.what());
  }
  return 0;
}

struct GenerateArgs {
  std::string key;
  std::string model;
  std::string prompt_file;
  std::size_t length = 0;
  std::uint64_t seed = 0;
  bool plain = false;
  std::string out = "-";
};

int run_generate(const GenerateArgs& a) {
  const ModelSpec model = model_from_json(read_json_file(a.model));
  const TokenSeq prompt = read_prompt(a.prompt_file);
  check_tokens(prompt, model.vocab_size());
  if (a.plain) {
    emit_json(Json{{"tokens", generate_plain(model, prompt, a.length, a.seed)}}, a.out);
    return 0;
  }
  if (a.key.empty()) throw UsageError("--key is required unless --plain is given");
  const KeyAutomaton key = key_from_json(read_json_file(a.key));
  if (key.vocab_size() != model.vocab_size()) {
    throw DataError("key and model vocabulary sizes differ");
  }
  Rng rng(a.seed);
  const auto trace = generate_watermarked(model, key, prompt, a.length, rng);
  Json j = to_json(trace, key);
  j["seed"] = a.seed;
  emit_json(j, a.out);
  return 0;
}

struct DetectArgs {
  std::string key;
  std::string input;
  std::size_t null_samples = 10000;
  double gamma_d = 0.0;
  double gamma_i = 2.0;
  double threshold = 0.01;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool batch = false;
};

int run_detect(const DetectArgs& a) {
  const KeyAutomaton key = key_from_json(read_json_file(a.key));
  const CostParams costs{a.gamma_d, a.gamma_i};
  try {
    costs.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto run_one = [&](const TokenSeq& y) {
    try {
      check_tokens(y, key.vocab_size());
    } catch (const std::out_of_range& e) {
      throw DataError(e.what());
    }
    return to_json(detect(y, key, costs, a.threshold, a.null_samples, a.seed, a.threads));
  };
  if (!a.batch) {
    std::cout << run_one(tokens_from_json(read_json_file(a.input))).dump(2) << "\n";
    return 0;
  }
  std::istringstream lines(read_text_file(a.input));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json parsed;
    try {
      parsed = Json::parse(line);
    } catch (const std::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
    std::cout << run_one(tokens_from_json(parsed)).dump() << "\n";
  }
  return 0;
}

struct AttackArgs {
  std::string kind;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string input;
  std::size_t vocab = 0;
  std::string out = "-";
};

int run_attack(const AttackArgs& a) {
  AttackSpec spec;
  try {
    spec = AttackSpec{parse_attack_kind(a.kind), a.epsilon, a.seed};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const TokenSeq y = tokens_from_json(read_json_file(a.input));
  try {
    check_tokens(y, a.vocab);
  } catch (const std::out_of_range& e) {
    throw DataError(e.what());
  }
  emit_json(Json{{"tokens", corrupt(y, spec, a.vocab)}}, a.out);
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out = "-";
};

int run_sweep_cmd(const SweepArgs& a) {
  const Json j = read_json_file(a.config);
  const auto base = std::filesystem::path(a.config).parent_path().string();
  const SweepConfig config = sweep_config_from_json(j, base.empty() ? "." : base);
  write_text_file(a.out, sweep_csv(config, run_sweep(config)));
  return 0;
}

struct BenchArgs {
  ScalingGrid grid;
  std::string out = "-";
};

int run_bench(const BenchArgs& a) {
  const ScalingReport report = scaling_report(a.grid);
  std::ostringstream csv;
  csv << "# baseline-standin is a complexity stand-in, not a published detector\n";
  csv << "# slope_m=" << report.slope_m << " slope_lambda=" << report.slope_lambda
      << " slope_k=" << report.slope_k << " seed=" << a.grid.seed << "\n";
  csv << timing_csv(report.rows);
  write_text_file(a.out, csv.str());
  return 0;
}

struct LpnArgs {
  std::size_t lambda = 8;
  double q = 1.0 / 3.0;
  std::size_t embedded = 400;
  std::size_t trials = 100;
  double theta = -1.0;
  double p1 = 0.5;
  std::uint64_t seed = 0;
};

int run_lpn_demo(const LpnArgs& a) {
  LpnKey probe;
  try {
    probe = lpn_gen(a.lambda, a.q, a.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double theta = a.theta >= 0.0 ? a.theta : lpn_default_theta(a.lambda);
  const ModelSpec model = ModelSpec::categorical({1.0 - a.p1, a.p1});
  const std::size_t m = a.embedded * (a.lambda + 1);

  Json watermarked = Json::array();
  Json unwatermarked = Json::array();
  std::size_t accepted = 0;
  std::size_t false_positives = 0;
  double entropy = 0.0;
  for (std::size_t t = 0; t < a.trials; ++t) {
    const LpnKey key = lpn_gen(a.lambda, a.q, derive_seed(a.seed, 1, t));
    Rng rng(derive_seed(a.seed, 2, t));
    const LpnTrace trace = lpn_generate(model, key, m, rng);
    entropy += trace.mean_embedded_entropy;
    const LpnReport wm = lpn_detect(trace.tokens, key, theta);
    accepted += wm.verdict ? 1 : 0;
    watermarked.push_back(to_json(wm));

    const TokenSeq noise = generate_plain(ModelSpec::uniform(2), {}, m, derive_seed(a.seed, 3, t));
    const LpnReport null = lpn_detect(noise, key, theta);
    false_positives += null.verdict ? 1 : 0;
    unwatermarked.push_back(to_json(null));
  }
  const auto trials = static_cast<double>(std::max<std::size_t>(a.trials, 1));
  Json out = {{"lambda", a.lambda},
              {"support_size", probe.support.size()},
              {"q", a.q},
              {"theta", theta},
              {"embedded_positions", a.embedded},
              {"length", m},
              {"trials", a.trials},
              {"seed", a.seed},
              {"entropy_threshold", entropy_threshold(a.q)},
              {"mean_embedded_entropy", entropy / trials},
              {"completeness", static_cast<double>(accepted) / trials},
              {"false_positive_rate", static_cast<double>(false_positives) / trials},
              {"watermarked", watermarked},
              {"unwatermarked", unwatermarked}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SamArgs {
  std::string text;
  std::vector<std::string> checks;
};

int run_sam_demo(const SamArgs& a) {
  if (a.text.empty()) throw UsageError("--string must be non-empty");
  const TokenSeq s = tokenize_bytes(a.text);
  const SuffixAutomaton sam = suffix_automaton_cyclic(s);

  std::vector<std::string> words = a.checks;
  if (words.empty()) {
    // Every substring of s repeated, up to length 2|s|, plus a few that are not.
    const std::string rep = a.text + a.text + a.text;
    for (std::size_t len = 1; len <= std::min<std::size_t>(2 * a.text.size(), 6); ++len) {
      words.push_back(rep.substr(1, len));
    }
    words.push_back(a.text + a.text.substr(0, 1) + a.text.substr(0, 1));
  }
  Json checks = Json::array();
  for (const auto& w : words) {
    const TokenSeq tokens = tokenize_bytes(w);
    const std::size_t reps = (a.text.size() + w.size()) / a.text.size() + 1;
    std::string rep;
    for (std::size_t r = 0; r < reps; ++r) rep += a.text;
    checks.push_back({{"word", w},
                      {"accepted", sam.accepts(tokens)},
                      {"substring_of_repetition", rep.find(w) != std::string::npos}});
  }
  Json out = {{"string", a.text},
              {"states", sam.num_states()},
              {"state_bound", 4 * a.text.size()},
              {"automaton", to_json(sam)},
              {"checks", checks}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic-automaton watermarking toolkit"};
  app.require_subcommand(1);

  GenKeyArgs gen_key_args;
  auto* gen_key_cmd = app.add_subcommand("gen-key", "Generate a watermark key");
  gen_key_cmd->add_option("--lambda", gen_key_args.lambda, "Number of key states");
  gen_key_cmd->add_option("--degree", gen_key_args.degree, "Successors per state");
  gen_key_cmd->add_option("--vocab", gen_key_args.vocab, "Vocabulary size")->required();
  gen_key_cmd->add_option("--bitwidth", gen_key_args.bitwidth, "Key bits b, or \"float\"");
  gen_key_cmd->add_option("--precision", gen_key_args.precision,
                          "Noise bits c (default: bitwidth)");
  gen_key_cmd->add_option("--seed", gen_key_args.seed);
  gen_key_cmd->add_flag("--expanded", gen_key_args.expanded, "Write the noise matrix");
  gen_key_cmd->add_option("-o,--output", gen_key_args.out);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train-model", "Fit a smoothed Markov model");
  train_cmd->add_option("--order", train_args.order);
  train_cmd->add_option("--alpha", train_args.alpha);
  train_cmd->add_option("--input", train_args.input, "UTF-8 corpus")->required();
  train_cmd->add_flag("--integers", train_args.integers,
                      "Corpus is a whitespace-separated integer token stream");
  train_cmd->add_option("--vocab", train_args.vocab, "Vocabulary size for --integers");
  train_cmd->add_option("-o,--output", train_args.out);

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "Generate tokens");
  gen_cmd->add_option("--key", gen_args.key);
  gen_cmd->add_option("--model", gen_args.model)->required();
  gen_cmd->add_option("--prompt-file", gen_args.prompt_file);
  gen_cmd->add_option("--length", gen_args.length)->required();
  gen_cmd->add_option("--seed", gen_args.seed);
  gen_cmd->add_flag("--plain", gen_args.plain, "Sample without a watermark");
  gen_cmd->add_option("-o,--output", gen_args.out);

  DetectArgs detect_args;
  auto* detect_cmd = app.add_subcommand("detect", "Test tokens for the watermark");
  detect_cmd->add_option("--key", detect_args.key)->required();
  detect_cmd->add_option("--input", detect_args.input)->required();
  detect_cmd->add_option("--null-samples", detect_args.null_samples)
      ->check(CLI::PositiveNumber);
  detect_cmd->add_option("--gamma-d", detect_args.gamma_d);
  detect_cmd->add_option("--gamma-i", detect_args.gamma_i);
  detect_cmd->add_option("--threshold", detect_args.threshold);
  detect_cmd->add_option("--seed", detect_args.seed);
  detect_cmd->add_option("--threads", detect_args.threads);
  detect_cmd->add_flag("--batch", detect_args.batch,
                       "Input holds one token array per line; one report per line");

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "Corrupt a token sequence");
  attack_cmd->add_option("--kind", attack_args.kind, "substitute | delete | insert")
      ->required();
  attack_cmd->add_option("--epsilon", attack_args.epsilon)->required();
  attack_cmd->add_option("--seed", attack_args.seed);
  attack_cmd->add_option("--input", attack_args.input)->required();
  attack_cmd->add_option("--vocab", attack_args.vocab)->required();
  attack_cmd->add_option("-o,--output", attack_args.out);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment grid");
  sweep_cmd->add_option("--config", sweep_args.config)->required();
  sweep_cmd->add_option("-o,--output", sweep_args.out);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Detection scaling benchmark (CSV)");
  bench_cmd->add_option("--m", bench_args.grid.m_values, "Lengths for the m axis");
  bench_cmd->add_option("--lambda-for-m", bench_args.grid.lambda_for_m);
  bench_cmd->add_option("--lambdas", bench_args.grid.lambda_values);
  bench_cmd->add_option("--m-for-lambda", bench_args.grid.m_for_lambda);
  bench_cmd->add_option("--ks", bench_args.grid.k_values, "Baseline block sizes");
  bench_cmd->add_option("--lambda-for-k", bench_args.grid.lambda_for_k);
  bench_cmd->add_option("--length-for-k", bench_args.grid.length_for_k);
  bench_cmd->add_option("--degree", bench_args.grid.degree);
  bench_cmd->add_option("--vocab", bench_args.grid.vocab_size, "Vocabulary for lev_dp inputs");
  bench_cmd->add_option("--baseline-vocab", bench_args.grid.baseline_vocab_size);
  bench_cmd->add_option("--samples", bench_args.grid.samples);
  bench_cmd->add_option("--warmup", bench_args.grid.warmup);
  bench_cmd->add_option("--min-sample-ns", bench_args.grid.min_sample_ns);
  bench_cmd->add_option("--seed", bench_args.grid.seed);
  bench_cmd->add_option("-o,--output", bench_args.out);

  LpnArgs lpn_args;
  auto* lpn_cmd = app.add_subcommand("lpn-demo", "Sparse-parity watermark trials");
  lpn_cmd->add_option("--lambda", lpn_args.lambda);
  lpn_cmd->add_option("--q", lpn_args.q);
  lpn_cmd->add_option("--embedded", lpn_args.embedded, "Embedded positions t per text");
  lpn_cmd->add_option("--trials", lpn_args.trials);
  lpn_cmd->add_option("--theta", lpn_args.theta, "Default 1/(2 lambda)");
  lpn_cmd->add_option("--p1", lpn_args.p1, "Probability of token 1 under the model");
  lpn_cmd->add_option("--seed", lpn_args.seed);

  SamArgs sam_args;
  auto* sam_cmd = app.add_subcommand("sam-demo", "Cyclic suffix automaton of a string");
  sam_cmd->add_option("--string", sam_args.text)->required();
  sam_cmd->add_option("--check", sam_args.checks, "Words to test for membership");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsageError, "usage", e.what());
  }

  try {
    if (*gen_key_cmd) return run_gen_key(gen_key_args);
    if (*train_cmd) return run_train(train_args);
    if (*gen_cmd) return run_generate(gen_args);
    if (*detect_cmd) return run_detect(detect_args);
    if (*attack_cmd) return run_attack(attack_args);
    if (*sweep_cmd) return run_sweep_cmd(sweep_args);
    if (*bench_cmd) return run_bench(bench_args);
    if (*lpn_cmd) return run_lpn_demo(lpn_args);
    if (*sam_cmd) return run_sam_demo(sam_args);
  } catch (const UsageError& e) {
    return fail(kUsageError, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(kDataError, "data", e.what());
  }
  return fail(kUsageError, "usage", "no subcommand");
}
