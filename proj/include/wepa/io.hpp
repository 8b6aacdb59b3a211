#pragma once

// JSON serialization for every file format the CLI reads or writes.
// Parsers throw wepa::DataError on malformed documents.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "wepa/automata.hpp"
#include "wepa/decode.hpp"
#include "wepa/detect.hpp"
#include "wepa/key.hpp"
#include "wepa/lpn.hpp"
#include "wepa/model.hpp"
#include "wepa/suffix_automaton.hpp"
#include "wepa/sweep.hpp"

namespace wepa {

using Json = nlohmann::json;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const Pnfa& pa);
Pnfa pnfa_from_json(const Json& j);
Json to_json(const Nfa& nfa);
Nfa nfa_from_json(const Json& j);
Json to_json(const SuffixAutomaton& sam);
SuffixAutomaton suffix_automaton_from_json(const Json& j);

/// Compact form {lambda, degree, vocab_size, bitwidth, precision, seed};
/// `expanded` adds the explicit noise matrix. Float mode writes "float" for
/// bitwidth and precision.
Json to_json(const KeyAutomaton& key, bool expanded = false);
KeyAutomaton key_from_json(const Json& j);

Json to_json(const ModelSpec& model);
ModelSpec model_from_json(const Json& j);

/// {tokens, states}, plus "noises" unless the key has no free bits.
Json to_json(const GenerationTrace& trace, const KeyAutomaton& key);
/// Accepts a bare token array or an object with a "tokens" array.
TokenSeq tokens_from_json(const Json& j);

Json to_json(const DetectionReport& report);
Json to_json(const LpnReport& report);

SweepConfig sweep_config_from_json(const Json& j, const std::string& base_dir = ".");

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace wepa
