#include "pipekit/cli.hpp"

#include <CLI11.hpp>
#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "pipekit/ebg.hpp"
#include "pipekit/factorization.hpp"
#include "pipekit/http_api.hpp"
#include "pipekit/ispace.hpp"
#include "pipekit/operationalizer.hpp"
#include "pipekit/service.hpp"
#include "pipekit/specializer.hpp"

namespace pipekit {

namespace {

// Usage mistakes found after CLI11 is done (e.g. --format dsl on a tree).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `f` on the file's text, naming the file in any error.
template <typename F>
auto with_file(const std::string& path, F f) -> decltype(f(std::string{})) {
  std::string text = read_text(path);
  try {
    return f(text);
  } catch (const Error& e) {
    // what() is "Kind: msg" or "Kind at L:C: msg"; keep the position next to the file.
    std::string what = e.what();
    std::string rest = what.substr(what.find(": ") + 2);
    std::string where = e.line() > 0 ? path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) : path;
    throw Error(e.kind(), where + ": " + rest);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidJson, path + ": " + e.what());
  }
}

Program load_program(const std::string& path) {
  return with_file(path, [](const std::string& t) { return parse_program(t); });
}

Theory load_theory(const std::string& path) {
  return with_file(path, [](const std::string& t) { return parse_theory(t); });
}

FactSet load_facts(const std::string& path) {
  return with_file(path, [](const std::string& t) { return parse_facts(t); });
}

std::vector<Activity> load_activities(const std::string& path) {
  return with_file(path, [](const std::string& t) { return activities_from_json(json::parse(t)); });
}

std::vector<ContentBinding> load_bindings(const std::string& path) {
  if (path.empty()) return {};
  return with_file(path, [](const std::string& t) { return bindings_from_json(json::parse(t)); });
}

ExplanationTree load_tree(const std::string& path) {
  return with_file(path, [](const std::string& t) { return tree_from_json(json::parse(t)); });
}

class Printer {
 public:
  explicit Printer(std::ostream& out) : out_(out) {}

  std::string format;  // empty: dsl for programs, json otherwise

  void program(const Program& p) const {
    if (format.empty() || format == "dsl") {
      out_ << serialize(p);
    } else {
      value(to_json(p));
    }
  }

  void value(const json& j) const {
    if (format == "dsl") throw UsageError("--format dsl applies to programs only");
    out_ << (format == "pretty" ? j.dump(2) : j.dump()) << "\n";
  }

 private:
  std::ostream& out_;
};

std::vector<std::pair<std::string, std::string>> parse_sets(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : sets) {
    auto more = parse_input_text(s);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

int serve(Service& svc, ServeOptions opts, std::ostream& err) {
  // Signals go to a waiting thread, so the server shuts down cleanly and
  // writes its snapshot.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  HttpServer server(svc, opts);
  int port = server.bind();
  err << "listening on http://" << opts.host << ":" << port << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
  });
  server.run();
  // run() only returns after stop(); wake the waiter if something else stopped us.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_UNBLOCK, &set, nullptr);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Program specialization, factorization and explanation-based model generation."};
  app.name("pipekit");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "pipekit 1.0");

  Printer print(out);
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", print.format, "Output format")->check(CLI::IsMember({"dsl", "json", "pretty"}));
  };

  std::string model_path;
  auto add_model = [&](CLI::App* sub) { sub->add_option("model", model_path, "Program file (- for stdin)")->required(); };

  // parse
  auto* parse = app.add_subcommand("parse", "Validate a program and print it in canonical form");
  add_model(parse);
  add_format(parse);

  // ingest
  std::string sitemap_path;
  auto* ingest = app.add_subcommand("ingest", "Build a program from a sitemap JSON tree");
  ingest->add_option("sitemap", sitemap_path, "Sitemap JSON file")->required();
  add_format(ingest);

  // specialize
  std::vector<std::string> sets;
  bool stats = false;
  auto* spec = app.add_subcommand("specialize", "Partially evaluate a program with respect to input");
  add_model(spec);
  spec->add_option("--set", sets, "Input such as Party=Dem, State=CA or !Rep (repeatable)");
  spec->add_flag("--stats", stats, "Print the applied assignment and pruning counts as JSON instead");
  add_format(spec);

  // classify / coverage
  std::string activities_path;
  std::optional<double> max_complete;
  auto* classify_cmd = app.add_subcommand("classify", "Classify each activity against a program");
  add_model(classify_cmd);
  classify_cmd->add_option("--activities", activities_path, "Activities JSON")->required();
  add_format(classify_cmd);
  auto* coverage = app.add_subcommand("coverage", "Summarize how well a program supports a set of activities");
  add_model(coverage);
  coverage->add_option("--activities", activities_path, "Activities JSON")->required();
  coverage->add_option("--max-complete-ratio", max_complete, "Fail when more activities than this are complete-only")
      ->check(CLI::Range(0.0, 1.0));
  add_format(coverage);

  // explain
  std::string theory_path, goal_text;
  std::vector<std::string> facts_paths;
  bool all = false;
  ProofLimits limits;
  auto* explain_cmd = app.add_subcommand("explain", "Prove a goal from a theory and facts");
  explain_cmd->add_option("--theory", theory_path, "Theory file")->required();
  explain_cmd->add_option("--facts", facts_paths, "Facts file")->required()->expected(1);
  explain_cmd->add_option("--goal", goal_text, "Goal, e.g. politicalinfo(x47)")->required();
  explain_cmd->add_flag("--all", all, "Every proof, up to --max-solutions");
  explain_cmd->add_option("--depth", limits.max_depth, "Depth limit")->capture_default_str();
  explain_cmd->add_option("--max-solutions", limits.max_solutions, "Proof limit for --all")->capture_default_str();
  add_format(explain_cmd);

  // generalize
  std::string tree_path;
  auto* gen_cmd = app.add_subcommand("generalize", "Generalize an explanation tree away from its scenario");
  gen_cmd->add_option("tree", tree_path, "Explanation tree JSON (- for stdin)")->required();
  gen_cmd->add_option("--theory", theory_path, "Theory file")->required();
  add_format(gen_cmd);

  // cut
  std::string frontier_text, op_id = "explanation";
  auto* cut_cmd = app.add_subcommand("cut", "Split a generalized tree at an operationality frontier");
  cut_cmd->add_option("tree", tree_path, "Generalized tree JSON (- for stdin)")->required();
  cut_cmd->add_option("--frontier", frontier_text, "root | leaves | preds:p1,p2 | depth:k")->required();
  cut_cmd->add_option("--id", op_id, "Explanation id")->capture_default_str();
  add_format(cut_cmd);

  // generate
  std::vector<std::string> op_paths;
  std::string bindings_path;
  GenerateOptions gen_opts;
  auto* generate = app.add_subcommand("generate", "Compile operationalized explanations into a program");
  generate->add_option("explanations", op_paths, "Operationalized explanation JSON files")->required();
  generate->add_option("--theory", theory_path, "Theory file")->required();
  generate->add_option("--bindings", bindings_path, "Content bindings JSON");
  generate->add_flag("--strict", gen_opts.strict, "Fail on subgoals the theory cannot expand");
  generate->add_flag("--allow-unreachable", gen_opts.allow_unreachable, "Ignore bindings that match no path");
  generate->add_option("--max-depth", gen_opts.max_depth, "Rule expansion depth")->capture_default_str();
  generate->add_option("--max-paths", gen_opts.max_paths, "Path budget")->capture_default_str();
  add_format(generate);

  // assess
  std::vector<std::string> goals, frontiers;
  std::string probes_path;
  auto* assess = app.add_subcommand("assess", "Rank operationality frontiers by how well their models serve probes");
  assess->add_option("--theory", theory_path, "Theory file")->required();
  assess->add_option("--facts", facts_paths, "One facts file per scenario")->required();
  assess->add_option("--goal", goals, "Goal per scenario, or one goal for all")->required();
  assess->add_option("--frontiers,--frontier", frontiers, "Frontier specs")->required();
  assess->add_option("--probes", probes_path, "Probe activities JSON")->required();
  assess->add_option("--bindings", bindings_path, "Content bindings JSON");
  add_format(assess);

  // order
  std::string general_path, specific_path;
  SearchBudget budget;
  auto* order = app.add_subcommand("order", "Find input that specializes one program into another");
  order->add_option("--general", general_path, "General program")->required();
  order->add_option("--specific", specific_path, "Specific program")->required();
  order->add_option("--budget", budget.max_candidates, "Candidate assignments to try")->capture_default_str();
  add_format(order);

  // serve
  ServeOptions serve_opts;
  std::optional<int> port;
  std::string models_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Serve models and browsing sessions over HTTP");
  serve_cmd->add_option("--port", port, "Port (0 picks one; default $PIPE_PORT or 8080)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", serve_opts.host, "Address to bind")->capture_default_str();
  serve_cmd->add_option("--models-dir", models_dir, "Directory of *.ispace models to load");
  serve_cmd->add_option("--snapshot", serve_opts.snapshot, "Session snapshot, restored at start and written on exit");

  std::vector<const char*> argv{"pipekit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (parse->parsed()) {
      print.program(load_program(model_path));
    } else if (ingest->parsed()) {
      print.program(with_file(sitemap_path, [](const std::string& t) { return ingest_sitemap(json::parse(t)); }));
    } else if (spec->parsed()) {
      Program p = load_program(model_path);
      auto r = specialize(p, assignment_from_pairs(p, parse_sets(sets)));
      if (stats) {
        print.value(json{{"applied", to_json(r.applied)},
                         {"dropped_arms", r.dropped_arms},
                         {"hoisted_chains", r.hoisted_chains},
                         {"complete", is_complete(r.residual)}});
      } else {
        print.program(r.residual);
      }
    } else if (classify_cmd->parsed()) {
      Program p = load_program(model_path);
      json verdicts = json::array();
      for (const auto& a : load_activities(activities_path)) verdicts.push_back(to_json(classify(p, a)));
      print.value(verdicts);
    } else if (coverage->parsed()) {
      auto report = evaluate_coverage(load_program(model_path), load_activities(activities_path));
      print.value(to_json(report));
      if (max_complete && report.complete_only_ratio() > *max_complete) {
        err << "complete-only ratio " << report.complete_only_ratio() << " exceeds " << *max_complete << "\n";
        return 1;
      }
    } else if (explain_cmd->parsed()) {
      Theory th = load_theory(theory_path);
      FactSet facts = load_facts(facts_paths.front());
      Atom goal = parse_goal(goal_text);
      if (all) {
        auto proofs = explain_all(th, facts, goal, limits);
        json trees = json::array();
        for (const auto& t : proofs.trees) trees.push_back(to_json(t));
        print.value(json{{"trees", trees}, {"capped", proofs.capped}, {"depth_exceeded", proofs.depth_exceeded}});
      } else {
        auto tree = explain(th, facts, goal, limits);
        if (!tree) {
          err << "no proof of " << goal.to_string() << "\n";
          return 1;
        }
        print.value(to_json(*tree));
      }
    } else if (gen_cmd->parsed()) {
      print.value(to_json(generalize(load_tree(tree_path), load_theory(theory_path))));
    } else if (cut_cmd->parsed()) {
      print.value(to_json(cut(load_tree(tree_path), FrontierSpec::parse(frontier_text), op_id)));
    } else if (generate->parsed()) {
      Theory th = load_theory(theory_path);
      std::vector<OperationalizedExplanation> ops;
      for (const auto& p : op_paths) {
        ops.push_back(with_file(p, [](const std::string& t) { return operationalized_from_json(json::parse(t)); }));
      }
      print.program(generate_model(th, ops, load_bindings(bindings_path), gen_opts));
    } else if (assess->parsed()) {
      if (goals.size() != 1 && goals.size() != facts_paths.size()) {
        throw UsageError("--goal must be given once or once per --facts");
      }
      Theory th = load_theory(theory_path);
      std::vector<Scenario> scenarios;
      for (std::size_t i = 0; i < facts_paths.size(); ++i) {
        Atom goal = parse_goal(goals.size() == 1 ? goals[0] : goals[i]);
        auto tree = explain(th, load_facts(facts_paths[i]), goal);
        if (!tree) throw Error(ErrorKind::UnboundSubgoal, facts_paths[i] + ": no proof of " + goal.to_string());
        scenarios.push_back(Scenario{"scenario" + std::to_string(i + 1), std::move(*tree)});
      }
      std::vector<FrontierSpec> specs;
      for (const auto& f : frontiers) specs.push_back(FrontierSpec::parse(f));
      json rows = json::array();
      for (const auto& r : assess_operationality(th, scenarios, specs, load_activities(probes_path),
                                                 load_bindings(bindings_path))) {
        rows.push_back(to_json(r));
      }
      print.value(rows);
    } else if (order->parsed()) {
      auto witness = specializes_to(load_program(general_path), load_program(specific_path), budget);
      json j{{"specializes", witness.has_value()}};
      if (witness) j["assignment"] = to_json(*witness);
      print.value(j);
    } else if (serve_cmd->parsed()) {
      if (port) {
        serve_opts.port = *port;
      } else if (const char* env = std::getenv("PIPE_PORT")) {
        try {
          serve_opts.port = std::stoi(env);
        } catch (const std::exception&) {
          throw UsageError(std::string("PIPE_PORT is not a port: ") + env);
        }
      }
      Service svc;
      if (!models_dir.empty()) {
        auto ids = svc.load_models_dir(models_dir);
        err << "loaded " << ids.size() << " model(s) from " << models_dir << "\n";
      }
      if (!serve_opts.snapshot.empty()) svc.load_snapshot(serve_opts.snapshot);
      return serve(svc, serve_opts, err);
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    err << "InvalidJson: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace pipekit
