// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

// cvf: verify, run, explore, erase and crosscheck annotated programs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvf/oracle.hpp"
#include "cvf/parser.hpp"
#include "cvf/printer.hpp"
#include "cvf/properties.hpp"
#include "cvf/semantics.hpp"
#include "cvf/transform.hpp"
#include "cvf/verifier.hpp"
#include "cvf_embedded.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kParseError = 2;
constexpr int kInternalError = 3;

struct Config {
  std::string input;
  std::size_t depth = 64;
  bool strict_leaks = false;
  bool trace = false;
  std::string format = "text";
  unsigned jobs = 1;

  bool as_json() const { return format == "json"; }
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json heap_json(const cvf::PhysHeap& h) {
  json j = json::object();
  for (const auto& [a, v] : h) j[std::to_string(a)] = v;
  return j;
}

json steps_json(const std::vector<cvf::Step>& steps) {
  json j = json::array();
  for (const auto& s : steps) j.push_back(cvf::format_step(s));
  return j;
}

std::string config_summary(const cvf::Configuration& c) {
  if (c.cmd->is_value()) return "value " + std::to_string(c.cmd->expr.value) + ", heap " + cvf::format_heap(c.heap);
  return "heap " + cvf::format_heap(c.heap) + ", command " + cvf::pretty(*c.cmd);
}

json config_json(const cvf::Configuration& c) {
  json j{{"heap", heap_json(c.heap)}};
  if (c.cmd->is_value())
    j["value"] = c.cmd->expr.value;
  else
    j["command"] = cvf::pretty(*c.cmd);
  return j;
}

cvf::Program load(const Config& cfg) { return cvf::parse_program(read_file(cfg.input)); }

int cmd_verify(const Config& cfg) {
  cvf::Program p = load(cfg);
  cvf::VerifyOptions o;
  o.strict_leaks = cfg.strict_leaks;
  o.unfold_depth = static_cast<int>(cfg.depth);
  o.record_snapshots = cfg.trace;
  o.file = cfg.input;
  cvf::VerifyReport r = cvf::verify_program(p, o);
  if (cfg.as_json()) {
    json j = json::parse(r.json());
    if (cfg.trace) {
      j["snapshots"] = json::array();
      for (const auto& s : r.snapshots)
        j["snapshots"].push_back({{"thread", s.thread},
                                  {"point", s.point},
                                  {"line", s.loc.line},
                                  {"col", s.loc.col},
                                  {"heap", s.heap},
                                  {"pc", s.pc}});
    }
    std::cout << j.dump(2) << "\n";
  } else {
    if (cfg.trace)
      for (const auto& s : r.snapshots) {
        std::cout << "trace: " << s.thread << " " << s.point << " @" << s.loc.line << ":" << s.loc.col << ":";
        for (const auto& h : s.heap) std::cout << " [" << h << "]";
        std::cout << "\n";
      }
    std::cout << r.text();
  }
  return r.verified() ? kOk : kFailed;
}

int cmd_run(const Config& cfg) {
  cvf::Program p = load(cfg);
  cvf::RunResult r = cvf::run({{}, cvf::erase(p.main)}, cfg.depth);
  if (cfg.as_json()) {
    json j{{"status", cvf::to_string(r.status)}, {"final", config_json(r.final)}, {"steps", r.trace.size()}};
    if (cfg.trace) j["trace"] = steps_json(r.trace);
    std::cout << j.dump(2) << "\n";
  } else {
    if (cfg.trace)
      for (const auto& s : r.trace) std::cout << cvf::format_step(s) << "\n";
    std::cout << cvf::to_string(r.status) << "\n" << "final: " << config_summary(r.final) << "\n";
  }
  return r.status == cvf::RunStatus::Finished ? kOk : kFailed;
}

int cmd_explore(const Config& cfg) {
  cvf::Program p = load(cfg);
  cvf::ExploreOptions o;
  o.max_steps = cfg.depth;
  o.jobs = cfg.jobs;
  cvf::ExploreReport r = cvf::explore({{}, cvf::erase(p.main)}, o);
  bool not_okay = r.verdict == cvf::ExploreVerdict::NotOkay;
  if (cfg.as_json()) {
    json j{{"verdict", cvf::to_string(r.verdict)},
           {"states_visited", r.states_visited},
           {"max_depth_reached", r.max_depth_reached},
           {"terminals", json::array()}};
    for (const auto& t : r.terminals) j["terminals"].push_back(config_json(t));
    if (not_okay) {
      j["witness"] = steps_json(r.witness);
      j["stuck"] = config_json(r.stuck);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << cvf::to_string(r.verdict) << "\n"
              << "states: " << r.states_visited << ", max depth: " << r.max_depth_reached << "\n";
    for (const auto& t : r.terminals)
      std::cout << "terminal: value " << t.cmd->expr.value << "\n" << "final heap: " << cvf::format_heap(t.heap) << "\n";
    if (not_okay) {
      for (const auto& s : r.witness) std::cout << "  " << cvf::format_step(s) << "\n";
      std::cout << "not okay: " << config_summary(r.stuck) << "\n";
    }
  }
  return r.verdict == cvf::ExploreVerdict::SafeUpToDepth ? kOk : kFailed;
}

int cmd_erase(const Config& cfg) {
  cvf::Program p = load(cfg);
  std::string text = cvf::pretty(*cvf::erase(p.main));
  if (cfg.as_json())
    std::cout << json{{"erased", text}}.dump(2) << "\n";
  else
    std::cout << text << "\n";
  return kOk;
}

int cmd_crosscheck(const Config& cfg) {
  cvf::Program p = load(cfg);
  cvf::CrosscheckOptions o;
  o.depth = cfg.depth;
  o.jobs = cfg.jobs;
  o.verify.strict_leaks = cfg.strict_leaks;
  o.verify.file = cfg.input;
  cvf::CrosscheckReport r = cvf::soundness_crosscheck(p, o);
  std::cout << (cfg.as_json() ? r.json() + "\n" : r.text());
  return r.fatal() ? kFailed : kOk;
}

int cmd_selftest(const Config& cfg) {
  cvf::Program p = cfg.input.empty() ? cvf::parse_program(cvf::embedded::kFaaTwoThreads) : load(cfg);
  std::vector<cvf::PropertyResult> results = cvf::heap_algebra_suite(1000, 1);
  auto instances = cvf::assertion_instances(p);
  results.push_back(cvf::satisfaction_agreement(p, instances));
  results.push_back(cvf::upward_closure(p, instances, 1000, 2));
  results.push_back(cvf::consistency_equivalence(p, 200, 3));
  results.push_back(cvf::sok_monotone(p, 200, 4));
  bool ok = true;
  json j = json::array();
  for (const auto& r : results) {
    ok = ok && r.ok();
    if (cfg.as_json())
      j.push_back({{"name", r.name}, {"trials", r.trials}, {"failures", r.failures}, {"first_failure", r.first_failure}});
    else
      std::cout << (r.ok() ? "ok    " : "FAIL  ") << r.str() << "\n";
  }
  if (cfg.as_json()) std::cout << j.dump(2) << "\n";
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifier, interpreter and soundness harness for annotated concurrent programs"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--depth", cfg.depth, "Exploration/run step bound and predicate unfold depth")
      ->default_val(64)
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--strict-leaks", cfg.strict_leaks, "Report leaked chunks as failures");
  app.add_flag("--trace", cfg.trace, "Print execution steps or verifier states");
  app.add_option("--format", cfg.format, "Output format")->default_val("text")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", cfg.jobs, "Worker threads for exploration")->default_val(1)->check(CLI::PositiveNumber);

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const Sub subs[] = {
      {"verify", "Check an annotated program against the proof rules", cmd_verify},
      {"run", "Execute the erased program along the leftmost schedule", cmd_run},
      {"explore", "Explore every interleaving of the erased program", cmd_explore},
      {"erase", "Print the program with ghost code removed", cmd_erase},
      {"crosscheck", "Compare the verifier verdict with exhaustive exploration", cmd_crosscheck},
      {"selftest", "Run the built-in property suites", cmd_selftest},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> commands;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    auto* opt = sub->add_option("input", cfg.input, "Program file");
    if (std::string(s.name) != "selftest") opt->required()->check(CLI::ExistingFile);
    commands.emplace_back(sub, &s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  for (const auto& [sub, s] : commands) {
    if (!sub->parsed()) continue;
    try {
      return s->run(cfg);
    } catch (const cvf::ParseError& e) {
      std::cerr << cfg.input << ":" << e.line << ":" << e.col << ": parse error: " << e.message << "\n";
      return kParseError;
    } catch (const InputError& e) {
      std::cerr << "cvf: " << e.what() << "\n";
      return kParseError;
    } catch (const std::exception& e) {
      std::cerr << "cvf: internal error: " << e.what() << "\n";
      return kInternalError;
    }
  }
  return kInternalError;
}
