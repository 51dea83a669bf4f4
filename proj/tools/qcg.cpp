// qcg: parse sentences or prove sequents against a qualia lexicon.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcg/cli.hpp"

int main(int argc, char** argv) {
  using namespace qcg::cli;

  RunConfig config;
  std::vector<std::string> words;
  std::string mode = "parse";
  std::string output = "text";

  CLI::App app{"Qualia-extended categorial grammar prover"};
  app.add_option("--lexicon", config.lexicon_path, "Lexicon file");
  app.add_option("--goal", config.goal, "Goal category for parse mode")->capture_default_str();
  app.add_option("--mode", mode, "parse, prove or check-lexicon")
      ->check(CLI::IsMember({"parse", "prove", "check-lexicon"}))
      ->capture_default_str();
  app.add_option("--output", output, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  app.add_flag("--derivations", config.show_derivations, "Print proof trees");
  app.add_option("--max-readings", config.max_readings, "Readings shown per input (0 = all)")
      ->capture_default_str();
  app.add_option("input", words,
                 "Sentence or sequent; joined with spaces. Without it, one input per stdin line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : input_error;
  }

  static const std::map<std::string, Mode> modes{
      {"parse", Mode::parse}, {"prove", Mode::prove}, {"check-lexicon", Mode::check_lexicon}};
  config.mode = modes.at(mode);
  config.output = output == "structured" ? Output::structured : Output::text;

  std::vector<std::string> inputs;
  if (!words.empty()) {
    std::string joined;
    for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
    inputs.push_back(joined);
  } else if (config.mode != Mode::check_lexicon) {
    inputs = read_batch(std::cin);
  }
  return run(config, inputs, std::cout, std::cerr);
}
