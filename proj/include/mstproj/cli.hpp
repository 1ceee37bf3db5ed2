#pragma once

// Command-line driver, kept in a library so tests can run it in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mstproj/csm.hpp"
#include "mstproj/validity.hpp"

namespace mstproj::cli {

enum class Format { Text, Json, Dot };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::size_t channel_bound = 4;
  std::size_t depth = 14;
  Format format = Format::Text;
  bool all_violations = false;
  std::string output;
  unsigned k = 0;
};

enum ExitCode { kImplementable = 0, kNotImplementable = 1, kInputError = 2 };

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and runs the command.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Directory holding the bundled `.gt` corpus.
std::string corpus_dir();

nlohmann::json violation_json(const ValidityViolation& v, const GlobalType& g);
/// Counts only, as embedded in verdict documents.
nlohmann::json machine_summary_json(const SubsetMachine& m);
/// Full machine: states with members, transitions, finals.
nlohmann::json machine_json(const SubsetMachine& m, const GlobalType& g);
nlohmann::json exploration_json(const ExplorationReport& r);

}  // namespace mstproj::cli
