#include "wepa/io.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace wepa {
namespace {

template <typename Fn>
auto parse_or_throw(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

Json bits_to_json(unsigned bits) {
  if (bits == kFloatBits) return "float";
  return bits;
}

unsigned bits_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "float") return kFloatBits;
    throw DataError("bitwidth must be an integer or \"float\"");
  }
  return j.get<unsigned>();
}

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

Json to_json(const Pnfa& pa) {
  Json transitions = Json::array();
  for (const auto& t : pa.transitions()) {
    transitions.push_back({t.from, t.symbol, t.to, t.prob});
  }
  return {{"states", pa.num_states()},
          {"alphabet", pa.alphabet_size()},
          {"transitions", transitions},
          {"initial", pa.initial()},
          {"final", pa.final_weights()},
          {"mode", pa.mode() == Pnfa::Mode::kGenerative ? "generative" : "recognizing"}};
}

Pnfa pnfa_from_json(const Json& j) {
  return parse_or_throw("pnfa", [&] {
    std::vector<WeightedTransition> transitions;
    for (const auto& t : j.at("transitions")) {
      transitions.push_back({t.at(0).get<State>(), t.at(1).get<Symbol>(),
                             t.at(2).get<State>(), t.at(3).get<double>()});
    }
    const auto mode = j.value("mode", std::string("generative")) == "recognizing"
                          ? Pnfa::Mode::kRecognizing
                          : Pnfa::Mode::kGenerative;
    return Pnfa(j.at("states").get<std::size_t>(), j.at("alphabet").get<std::size_t>(),
                std::move(transitions), j.at("initial").get<std::vector<double>>(),
                j.at("final").get<std::vector<double>>(), mode);
  });
}

Json to_json(const Nfa& nfa) {
  Json transitions = Json::array();
  for (const auto& t : nfa.transitions()) transitions.push_back({t.from, t.symbol, t.to});
  return {{"states", nfa.num_states()},
          {"alphabet", nfa.alphabet_size()},
          {"transitions", transitions},
          {"initial", nfa.initial()},
          {"final", nfa.final_states()}};
}

Nfa nfa_from_json(const Json& j) {
  return parse_or_throw("nfa", [&] {
    std::vector<Transition> transitions;
    for (const auto& t : j.at("transitions")) {
      transitions.push_back(
          {t.at(0).get<State>(), t.at(1).get<Symbol>(), t.at(2).get<State>()});
    }
    return Nfa(j.at("states").get<std::size_t>(), j.at("alphabet").get<std::size_t>(),
               std::move(transitions), j.at("initial").get<std::vector<State>>(),
               j.at("final").get<std::vector<State>>());
  });
}

Json to_json(const SuffixAutomaton& sam) {
  Json nodes = Json::array();
  for (const auto& node : sam.nodes()) {
    Json next = Json::object();
    for (const auto& [sym, to] : node.next) next[std::to_string(sym)] = to;
    nodes.push_back({{"len", node.length}, {"link", node.link}, {"next", next}});
  }
  return {{"nodes", nodes}};
}

SuffixAutomaton suffix_automaton_from_json(const Json& j) {
  return parse_or_throw("suffix automaton", [&] {
    std::vector<SuffixAutomaton::Node> nodes;
    for (const auto& n : j.at("nodes")) {
      SuffixAutomaton::Node node;
      node.length = n.at("len").get<std::uint32_t>();
      node.link = n.at("link").get<std::int32_t>();
      for (const auto& [sym, to] : n.at("next").items()) {
        node.next[static_cast<Symbol>(std::stoul(sym))] = to.get<std::uint32_t>();
      }
      nodes.push_back(std::move(node));
    }
    return SuffixAutomaton::from_nodes(std::move(nodes));
  });
}

Json to_json(const KeyAutomaton& key, bool expanded) {
  const auto& p = key.params();
  Json j = {{"lambda", p.lambda},
            {"degree", p.degree},
            {"vocab_size", p.vocab_size},
            {"bitwidth", bits_to_json(p.bitwidth)},
            {"precision", bits_to_json(p.precision)},
            {"seed", p.seed}};
  if (expanded || key.has_explicit_noise()) {
    Json rows = Json::array();
    for (State s = 0; s < p.lambda; ++s) rows.push_back(key.noise_row(s));
    j["noise"] = rows;
  }
  return j;
}

KeyAutomaton key_from_json(const Json& j) {
  return parse_or_throw("key", [&] {
    KeyParams p;
    p.lambda = j.at("lambda").get<std::size_t>();
    p.degree = j.at("degree").get<std::size_t>();
    p.vocab_size = j.at("vocab_size").get<std::size_t>();
    p.bitwidth = bits_from_json(j.at("bitwidth"));
    p.precision = bits_from_json(j.at("precision"));
    p.seed = j.value("seed", std::uint64_t{0});
    if (!j.contains("noise")) return KeyAutomaton(p);
    std::vector<double> flat;
    const auto& rows = j.at("noise");
    if (rows.size() != p.lambda) throw DataError("key: noise needs lambda rows");
    for (const auto& row : rows) {
      if (row.size() != p.vocab_size) throw DataError("key: noise row needs vocab_size entries");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return KeyAutomaton(p, std::move(flat));
  });
}

Json to_json(const ModelSpec& model) {
  switch (model.kind()) {
    case ModelSpec::Kind::kUniform:
      return {{"kind", "uniform"}, {"vocab_size", model.vocab_size()}};
    case ModelSpec::Kind::kCategorical:
      return {{"kind", "categorical"}, {"probs", model.probs()}};
    case ModelSpec::Kind::kMarkov: {
      Json counts = Json::array();
      for (const auto& [context, row] : model.counts()) {
        counts.push_back({{"context", context}, {"counts", row}});
      }
      return {{"kind", "markov"},
              {"vocab_size", model.vocab_size()},
              {"order", model.order()},
              {"alpha", model.alpha()},
              {"counts", counts}};
    }
  }
  return {};
}

ModelSpec model_from_json(const Json& j) {
  return parse_or_throw("model", [&] {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return ModelSpec::uniform(j.at("vocab_size").get<std::size_t>());
    if (kind == "categorical") {
      return ModelSpec::categorical(j.at("probs").get<std::vector<double>>());
    }
    if (kind == "markov") {
      std::map<TokenSeq, std::vector<double>> counts;
      for (const auto& entry : j.at("counts")) {
        counts[entry.at("context").get<TokenSeq>()] =
            entry.at("counts").get<std::vector<double>>();
      }
      return ModelSpec::markov(j.at("vocab_size").get<std::size_t>(),
                               j.at("order").get<std::size_t>(),
                               j.value("alpha", 0.1), std::move(counts));
    }
    throw DataError("model: unknown kind \"" + kind + "\"");
  });
}

Json to_json(const GenerationTrace& trace, const KeyAutomaton& key) {
  Json j = {{"tokens", trace.tokens}, {"states", trace.states}};
  if (key.bitwidth() != key.precision()) {
    Json noises = Json::array();
    for (const auto& xi : trace.noises) noises.push_back(xi.mu);
    j["noises"] = noises;
  }
  return j;
}

TokenSeq tokens_from_json(const Json& j) {
  return parse_or_throw("tokens", [&] {
    const Json& arr = j.is_array() ? j : j.at("tokens");
    if (!arr.is_array()) throw DataError("tokens: expected an array");
    TokenSeq out;
    out.reserve(arr.size());
    for (const auto& t : arr) {
      if (!t.is_number_unsigned() || t.get<std::uint64_t>() > UINT32_MAX) {
        throw DataError("tokens: entries must be non-negative integers");
      }
      out.push_back(t.get<Token>());
    }
    return out;
  });
}

Json to_json(const DetectionReport& r) {
  return {{"psi", r.psi},
          {"null_samples", r.null_samples},
          {"null_mean", r.null_mean},
          {"null_std", r.null_std},
          {"p_hat", r.p_hat},
          {"z", number_or_null(r.z)},
          {"vp_bound", r.vp_bound},
          {"threshold", r.threshold},
          {"verdict", r.verdict},
          {"seed", r.seed}};
}

Json to_json(const LpnReport& r) {
  return {{"embedded_positions", r.embedded_positions},
          {"match_rate", r.match_rate},
          {"theta", r.theta},
          {"verdict", r.verdict}};
}

SweepConfig sweep_config_from_json(const Json& j, const std::string& base_dir) {
  return parse_or_throw("sweep config", [&] {
    SweepConfig c;
    if (j.contains("model")) {
      c.model = model_from_json(j.at("model"));
    } else {
      const std::filesystem::path path = j.at("model_file").get<std::string>();
      c.model = model_from_json(read_json_file(
          path.is_absolute() ? path.string() : (std::filesystem::path(base_dir) / path).string()));
    }
    c.prompt = j.value("prompt", TokenSeq{});
    if (j.contains("key")) {
      const auto& k = j.at("key");
      c.key.lambda = k.value("lambda", c.key.lambda);
      c.key.degree = k.value("degree", c.key.degree);
      if (k.contains("bitwidth")) c.key.bitwidth = bits_from_json(k.at("bitwidth"));
      if (k.contains("precision")) c.key.precision = bits_from_json(k.at("precision"));
    }
    c.key.vocab_size = c.model.vocab_size();
    c.costs.gamma_d = j.value("gamma_d", c.costs.gamma_d);
    c.costs.gamma_i = j.value("gamma_i", c.costs.gamma_i);
    c.trials = j.value("trials", c.trials);
    c.null_samples = j.value("null_samples", c.null_samples);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.null_arm = j.value("null_arm", c.null_arm);
    c.lengths = j.value("lengths", std::vector<std::size_t>{});
    if (j.contains("attacks")) {
      const auto& a = j.at("attacks");
      for (const auto& name : a.at("kinds")) {
        c.attack_kinds.push_back(parse_attack_kind(name.get<std::string>()));
      }
      c.epsilons = a.at("epsilons").get<std::vector<double>>();
      c.attack_length = a.value("length", c.attack_length);
    }
    if (j.contains("lambdas")) {
      c.lambdas = j.at("lambdas").at("values").get<std::vector<std::size_t>>();
      c.lambda_length = j.at("lambdas").value("length", c.lambda_length);
    }
    if (j.contains("bitwidths")) {
      const auto& b = j.at("bitwidths");
      c.bitwidths = b.at("values").get<std::vector<unsigned>>();
      if (b.contains("precision")) c.bitwidth_precision = bits_from_json(b.at("precision"));
      c.bitwidth_length = b.value("length", c.bitwidth_length);
    }
    c.key.validate();
    c.costs.validate();
    return c;
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

}  // namespace wepa
