#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mstproj/cli.hpp"
#include "mstproj/oracle.hpp"

namespace mstproj::cli {

using nlohmann::json;

std::string corpus_dir() {
#ifdef MSTPROJ_CORPUS_DIR
  return MSTPROJ_CORPUS_DIR;
#else
  return "corpus";
#endif
}

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string name;
  std::string text;
};

Source read_source(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return {"stdin", buf.str()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return {std::filesystem::path(path).stem().string(), buf.str()};
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct Loaded {
  Source source;
  GlobalType g;
  double parse_ms;
};

Loaded load(const std::string& path) {
  Source src = read_source(path);
  auto start = std::chrono::steady_clock::now();
  try {
    GlobalType g = parse_global_type(src.text);
    require_well_formed(g);
    return {src, std::move(g), elapsed_ms(start)};
  } catch (const SyntaxError& e) {
    throw InputError(src.name + ":" + e.what());
  } catch (const WellFormednessError& e) {
    throw InputError(src.name + ": " + e.what());
  }
}

json role_list(const GlobalType& g) {
  json out = json::array();
  for (const Role& r : g.roles()) out.push_back(r.value);
  return out;
}

struct Checked {
  Verdict verdict;
  double project_ms;
  double check_ms;
};

Checked run_check(const GlobalType& g, bool all) {
  auto start = std::chrono::steady_clock::now();
  SyncAutomaton gaut = build_gaut(g);
  for (const Role& r : g.roles()) subset_construction(erase(gaut, r));
  double project_ms = elapsed_ms(start);
  start = std::chrono::steady_clock::now();
  Verdict v = check_implementability(g, all);
  return {std::move(v), project_ms, elapsed_ms(start)};
}

json verdict_json(const Verdict& v, const GlobalType& g, bool all) {
  json out = {{"implementable", v.implementable}};
  if (v.violation) out["violation"] = violation_json(*v.violation, g);
  if (all) {
    json list = json::array();
    for (const auto& x : v.violations) list.push_back(violation_json(x, g));
    out["violations"] = std::move(list);
  }
  if (v.counterexample) out["counterexample"] = format_trace(*v.counterexample);
  return out;
}

std::string roles_text(const GlobalType& g) {
  std::string out;
  for (const Role& r : g.roles()) out += (out.empty() ? "" : " ") + r.value;
  return out;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 1) throw InputError("check expects exactly one input");
  Loaded in = load(cfg.inputs.front());
  Checked c = run_check(in.g, cfg.all_violations);
  const Verdict& v = c.verdict;

  switch (cfg.format) {
    case Format::Json: {
      json doc = {{"schema", 1},
                  {"protocol", {{"name", in.source.name}, {"size", measure_size(in.g)}, {"roles", role_list(in.g)}}},
                  {"verdict", verdict_json(v, in.g, cfg.all_violations)},
                  {"projections", json::array()},
                  {"timings", {{"parse_ms", in.parse_ms}, {"project_ms", c.project_ms}, {"check_ms", c.check_ms}}}};
      if (v.projections) {
        for (const auto& m : *v.projections) doc["projections"].push_back(machine_summary_json(m));
      }
      out << doc.dump(2) << "\n";
      break;
    }
    case Format::Dot:
      for (const auto& m : v.subset_constructions) out << to_dot(m);
      break;
    case Format::Text:
      out << "protocol: " << in.source.name << " (size " << measure_size(in.g) << ", roles " << roles_text(in.g)
          << ")\n";
      out << "verdict: " << (v.implementable ? "implementable" : "not implementable") << "\n";
      if (cfg.all_violations) {
        for (const auto& x : v.violations) out << "violation: " << describe(x, in.g) << "\n";
      } else if (v.violation) {
        out << "violation: " << describe(*v.violation, in.g) << "\n";
      }
      if (v.counterexample) out << "counterexample: " << format_trace(*v.counterexample) << "\n";
      if (v.projections) {
        for (const auto& m : *v.projections) {
          out << "projection " << m.role().value << ": " << m.size() << " states, " << m.transitions().size()
              << " transitions\n";
        }
      }
      break;
  }
  return v.implementable ? kImplementable : kNotImplementable;
}

int cmd_project(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.inputs.size() != 1) throw InputError("project expects exactly one input");
  Loaded in = load(cfg.inputs.front());
  Verdict v = check_implementability(in.g);
  if (!v.implementable) {
    err << "warning: not implementable, emitting subset constructions: " << describe(*v.violation, in.g) << "\n";
  }
  switch (cfg.format) {
    case Format::Json: {
      json machines = json::array();
      for (const auto& m : v.subset_constructions) machines.push_back(machine_json(m, in.g));
      out << json{{"schema", 1}, {"implementable", v.implementable}, {"machines", std::move(machines)}}.dump(2)
          << "\n";
      break;
    }
    case Format::Dot:
      for (const auto& m : v.subset_constructions) out << to_dot(m);
      break;
    case Format::Text:
      for (const auto& m : v.subset_constructions) {
        out << "role " << m.role().value << "\n";
        for (StateIndex i = 0; i < m.size(); ++i) {
          out << "  state " << i << (m.is_final(i) ? " (final)" : "") << ":";
          for (NodeId id : m.state(i).members) out << " " << id.value;
          out << "\n";
        }
        for (const auto& t : m.transitions()) {
          out << "  " << t.source << " --" << to_string(t.label) << "--> " << t.target << "\n";
        }
      }
      break;
  }
  return v.implementable ? kImplementable : kNotImplementable;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 1) throw InputError("simulate expects exactly one input");
  Loaded in = load(cfg.inputs.front());
  Csm csm = Csm::of_subset_constructions(in.g);
  ExplorationReport r = explore(csm, cfg.channel_bound, cfg.depth);
  if (cfg.format == Format::Json) {
    json doc = exploration_json(r);
    doc["schema"] = 1;
    doc["protocol"] = in.source.name;
    doc["bound"] = cfg.channel_bound;
    doc["depth"] = cfg.depth;
    out << doc.dump(2) << "\n";
  } else {
    out << "protocol: " << in.source.name << " (bound " << cfg.channel_bound << ", depth " << cfg.depth << ")\n";
    out << "visited: " << r.visited << "\n";
    out << "frontier cut: " << (r.frontier_cut ? "yes" : "no") << "\n";
    out << "deadlocks: " << r.deadlocks.size() << "\n";
    for (const auto& d : r.deadlocks) out << "  " << format_trace(d.witness) << "\n";
  }
  return r.deadlocks.empty() ? kImplementable : kNotImplementable;
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir())) {
    if (entry.path().extension() == ".gt") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  auto files = cfg.inputs.empty() ? corpus_files() : cfg.inputs;
  json rows = json::array();
  json timings = json::object();
  std::ostringstream table;
  table << std::left;
  table.width(16);
  table << "protocol";
  table << " size  verdict              states  time_ms\n";

  for (const auto& path : files) {
    Loaded in = load(path);
    Checked c = run_check(in.g, false);
    const Verdict& v = c.verdict;
    std::size_t states = 0;
    for (const auto& m : v.subset_constructions) states += m.size();
    json row = {{"name", in.source.name},
                {"size", measure_size(in.g)},
                {"roles", role_list(in.g)},
                {"implementable", v.implementable},
                {"subset_states", states}};
    if (v.violation) row["violation"] = std::string(to_string(v.violation->kind));
    if (v.counterexample) row["counterexample"] = format_trace(*v.counterexample);
    rows.push_back(std::move(row));
    timings[in.source.name] = {{"parse_ms", in.parse_ms}, {"project_ms", c.project_ms}, {"check_ms", c.check_ms}};

    std::string verdict = v.implementable ? "yes" : "no (" + std::string(to_string(v.violation->kind)) + ")";
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %4zu  %-20s %6zu  %7.3f\n", in.source.name.c_str(), measure_size(in.g),
                  verdict.c_str(), states, in.parse_ms + c.project_ms + c.check_ms);
    table << line;
  }

  if (cfg.format == Format::Json) {
    out << json{{"schema", 1}, {"protocols", std::move(rows)}, {"timings", std::move(timings)}}.dump(2) << "\n";
  } else {
    out << table.str();
  }
  return kImplementable;
}

int cmd_gen_gk(const RunConfig& cfg, std::ostream& out) {
  if (cfg.k < 1) throw InputError("gen-gk expects k >= 1");
  out << pretty_print(generate_gk(cfg.k));
  return kImplementable;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << cfg.output << "\n";
      return kInputError;
    }
    sink = &file;
  }
  try {
    if (cfg.command == "check") return cmd_check(cfg, *sink);
    if (cfg.command == "project") return cmd_project(cfg, *sink, err);
    if (cfg.command == "simulate") return cmd_simulate(cfg, *sink);
    if (cfg.command == "bench") return cmd_bench(cfg, *sink);
    if (cfg.command == "gen-gk") return cmd_gen_gk(cfg, *sink);
    err << "error: unknown command '" << cfg.command << "'\n";
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Implementability checking and projection for global types", "mstproj"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "text";

  auto common = [&](CLI::App* sub, bool with_bounds) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--out", cfg.output, "Write output to PATH instead of stdout");
    if (with_bounds) {
      sub->add_option("--bound", cfg.channel_bound, "Channel bound for exploration")->check(CLI::PositiveNumber);
      sub->add_option("--depth", cfg.depth, "Exploration depth in events")->check(CLI::PositiveNumber);
    }
  };

  auto* check = app.add_subcommand("check", "Decide implementability");
  check->add_option("input", cfg.inputs, "Global type file, or - for stdin")->required()->expected(1);
  check->add_flag("--all", cfg.all_violations, "Report every violation");
  common(check, true);

  auto* project = app.add_subcommand("project", "Emit the subset projections");
  project->add_option("input", cfg.inputs, "Global type file, or - for stdin")->required()->expected(1);
  common(project, true);

  auto* simulate = app.add_subcommand("simulate", "Explore the CSM of the subset projections");
  simulate->add_option("input", cfg.inputs, "Global type file, or - for stdin")->required()->expected(1);
  common(simulate, true);

  auto* bench = app.add_subcommand("bench", "Check the bundled corpus (or the given files)");
  bench->add_option("inputs", cfg.inputs, "Global type files");
  common(bench, true);

  auto* gen = app.add_subcommand("gen-gk", "Print the exponential family member G_k");
  gen->add_option("k", cfg.k, "Family index")->required()->check(CLI::PositiveNumber);
  common(gen, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kInputError;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.format = format == "json" ? Format::Json : format == "dot" ? Format::Dot : Format::Text;
  return run_command(cfg, out, err);
}

}  // namespace mstproj::cli
