// Command-line front end: transform substitution-set grammars into range
// grammars, decide intersection emptiness, and cross-check against the
// narrowing semantics.
//
// Exit codes: 0 proved / success, 1 usage or parse error, 2 transformation
// assumption violated, 3 inconclusive (unknown verdict, no proof).

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssgr/ssgr.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::pair<ssgr::Variable, ssgr::Variable> parse_var_pair(const std::string& spec) {
  auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("--vars expects two comma-separated variables");
  return {ssgr::Variable{spec.substr(0, comma), 0}, ssgr::Variable{spec.substr(comma + 1), 0}};
}

std::pair<std::string, std::string> parse_name_pair(const std::string& spec) {
  auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("--pair expects two comma-separated nonterminals");
  return {spec.substr(0, comma), spec.substr(comma + 1)};
}

void print_violations(const ssgr::AssumptionReport& rep) {
  std::cout << "assumption violated:\n";
  for (const auto& v : rep.violations) {
    std::cout << "  rule: " << v.rule << "\n";
    if (v.kind == "position") {
      std::cout << "    pair (" << v.x.str() << "," << v.y.str() << ") at position "
                << ssgr::show(v.pos) << " under (" << ssgr::show(v.left_term) << ", "
                << ssgr::show(v.right_term) << ")\n";
    }
    std::cout << "    " << v.detail << "\n";
  }
}

void print_summary(const ssgr::Rtg& g) {
  std::cout << "start " << g.initial << ": " << g.nonterminals.size() << " nonterminals, "
            << g.rules.size() << " rules\n";
  std::cout << "reachable alphabet:";
  for (const auto& f : ssgr::reachable_alphabet(g)) std::cout << " " << f.name << "/" << f.arity;
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"range grammars for substitution-set grammars of narrowing trees"};
  app.require_subcommand(1);

  std::string ssg_path, trs_path, nt, vars_spec, goal_text, out_path;
  std::vector<std::string> pair_specs;
  int depth = 10, expr_bound = 3, ground_depth = 2, bound = 3;
  bool symmetric = false;

  auto* cmd_transform = app.add_subcommand("transform", "transform one nonterminal");
  cmd_transform->add_option("--ssg", ssg_path, "substitution-set grammar file")->required();
  cmd_transform->add_option("--nt", nt, "nonterminal to transform")->required();
  cmd_transform->add_option("--vars", vars_spec, "variable pair x,y")->required();
  cmd_transform->add_option("-o,--out", out_path, "output grammar file");
  cmd_transform->add_flag("--symmetric-patterns", symmetric,
                          "keep left patterns in range nonterminals");

  auto* cmd_check = app.add_subcommand("check", "prove intersection emptiness for pairs");
  cmd_check->add_option("--ssg", ssg_path, "substitution-set grammar file")->required();
  cmd_check->add_option("--pair", pair_specs, "nonterminal pair A,B (repeatable)")->required();
  cmd_check->add_option("--vars", vars_spec, "variable pair x,y")->required();
  cmd_check->add_option("-o,--out", out_path, "write the merged transformed grammar");
  cmd_check->add_flag("--symmetric-patterns", symmetric,
                      "keep left patterns in range nonterminals");

  auto* cmd_oracle = app.add_subcommand("oracle", "cross-check against the semantics");
  cmd_oracle->add_option("--ssg", ssg_path, "substitution-set grammar file");
  cmd_oracle->add_option("--nt", nt, "nonterminal to check");
  cmd_oracle->add_option("--vars", vars_spec, "variable pair x,y");
  cmd_oracle->add_option("--expr-bound", expr_bound, "expression enumeration bound");
  cmd_oracle->add_option("--ground-depth", ground_depth, "ground instantiation depth");
  cmd_oracle->add_option("--trs", trs_path, "conditional rewrite system file");
  cmd_oracle->add_option("--goal", goal_text, "goal clause for narrowing");
  cmd_oracle->add_option("--depth", depth, "narrowing depth bound");

  auto* cmd_eval = app.add_subcommand("eval", "print the bounded substitution set");
  cmd_eval->add_option("--ssg", ssg_path, "substitution-set grammar file")->required();
  cmd_eval->add_option("--nt", nt, "nonterminal to evaluate")->required();
  cmd_eval->add_option("--bound", bound, "expression enumeration bound");

  auto* cmd_narrow = app.add_subcommand("narrow", "enumerate narrowing solutions");
  cmd_narrow->add_option("--trs", trs_path, "conditional rewrite system file")->required();
  cmd_narrow->add_option("--goal", goal_text, "goal clause")->required();
  cmd_narrow->add_option("--depth", depth, "narrowing depth bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  using namespace ssgr;
  PatternMode mode = symmetric ? PatternMode::symmetric : PatternMode::asymmetric;

  try {
    if (cmd_transform->parsed()) {
      Ssg g = parse_ssg(slurp(ssg_path));
      auto [x1, x2] = parse_var_pair(vars_spec);
      Rtg rtg;
      try {
        rtg = ran(g, nt, x1, x2, mode);
      } catch (const AssumptionError& e) {
        print_violations(e.report);
        return 2;
      }
      print_summary(rtg);
      if (!out_path.empty())
        write_file(out_path, show(rtg));
      else
        std::cout << show(rtg);
      return 0;
    }

    if (cmd_check->parsed()) {
      Ssg g = parse_ssg(slurp(ssg_path));
      auto [x1, x2] = parse_var_pair(vars_spec);
      // requests run concurrently; the grammar is immutable and every
      // check owns its fresh-name state
      std::vector<std::future<CheckResult>> futures;
      for (const std::string& spec : pair_specs) {
        auto [a, b] = parse_name_pair(spec);
        futures.push_back(std::async(std::launch::async,
                                     [&g, a = a, b = b, x1 = x1, x2 = x2, mode] {
                                       return run_check(g, a, b, x1, x2, mode);
                                     }));
      }
      bool all_proved = true, any_violated = false;
      Rtg merged;
      bool have_merged = false;
      for (size_t i = 0; i < futures.size(); ++i) {
        CheckResult res = futures[i].get();
        if (pair_specs.size() > 1) std::cout << "pair " << pair_specs[i] << "\n";
        std::cout << "verdict: " << show(res.verdict.status) << "\n";
        for (const auto& e : res.verdict.evidence) std::cout << "  " << e << "\n";
        std::cout << "elapsed: " << res.verdict.elapsed_ms << " ms\n";
        all_proved &= res.verdict.status == VerdictStatus::infeasible_proved;
        any_violated |= res.verdict.status == VerdictStatus::assumption_violated;
        if (res.left && res.right) {
          Rtg both = merge_rtgs(*res.left, *res.right);
          merged = have_merged ? merge_rtgs(merged, both) : both;
          have_merged = true;
        }
      }
      if (!out_path.empty() && have_merged) write_file(out_path, show(merged));
      if (pair_specs.size() > 1)
        std::cout << "overall: "
                  << (any_violated ? "assumption-violated"
                                   : all_proved ? "infeasible-proved" : "unknown")
                  << "\n";
      if (any_violated) return 2;
      return all_proved ? 0 : 3;
    }

    if (cmd_oracle->parsed()) {
      bool any = false;
      int bad = 0;
      if (!ssg_path.empty()) {
        if (nt.empty() || vars_spec.empty())
          throw std::runtime_error("oracle over an ssg needs --nt and --vars");
        any = true;
        Ssg g = parse_ssg(slurp(ssg_path));
        auto [x1, x2] = parse_var_pair(vars_spec);
        OracleReport rep;
        try {
          rep = oracle_membership(g, nt, x1, x2, expr_bound, ground_depth, mode);
        } catch (const AssumptionError& e) {
          print_violations(e.report);
          return 2;
        }
        std::cout << "substitutions: " << rep.substitutions << "\n";
        std::cout << "coded instances: " << rep.instances << "\n";
        std::cout << "counterexamples: " << rep.counterexamples.size() << "\n";
        for (const auto& c : rep.counterexamples) std::cout << "  " << c << "\n";
        bad += static_cast<int>(rep.counterexamples.size());
      }
      if (!trs_path.empty()) {
        if (goal_text.empty()) throw std::runtime_error("oracle over a trs needs --goal");
        any = true;
        Ctrs R = parse_ctrs(slurp(trs_path));
        TermContext ctx;
        ctx.sig = &R.sig;
        ctx.free_identifiers_are_vars = true;
        GoalClause goal = parse_goal_clause(goal_text, ctx);
        if (!is_valid_goal_clause(goal, R.sig))
          throw std::runtime_error(
              "not a goal clause: left sides must be constructor or basic terms, right sides "
              "constructor terms");
        auto sols = narrow_solutions(goal, R, depth);
        if (sols.empty()) {
          std::cout << "no solutions found up to depth " << depth << "\n";
        } else {
          std::cout << sols.size() << " solutions up to depth " << depth << ":\n";
          for (const auto& s : sols) std::cout << "  " << show(s) << "\n";
        }
      }
      if (!any) throw std::runtime_error("oracle needs --ssg or --trs");
      return bad == 0 ? 0 : 3;
    }

    if (cmd_eval->parsed()) {
      Ssg g = parse_ssg(slurp(ssg_path));
      FreshState fs;
      auto set = subst_set(g, nt, bound, fs);
      std::cout << set.size() << " substitutions at bound " << bound << ":\n";
      for (const auto& s : set) std::cout << "  " << show(s) << "\n";
      return 0;
    }

    if (cmd_narrow->parsed()) {
      Ctrs R = parse_ctrs(slurp(trs_path));
      TermContext ctx;
      ctx.sig = &R.sig;
      ctx.free_identifiers_are_vars = true;
      GoalClause goal = parse_goal_clause(goal_text, ctx);
      if (!is_valid_goal_clause(goal, R.sig))
        throw std::runtime_error(
            "not a goal clause: left sides must be constructor or basic terms, right sides "
            "constructor terms");
      auto ders = narrow_search(goal, R, depth);
      std::cout << ders.size() << " solutions up to depth " << depth << ":\n";
      for (const auto& d : ders) {
        std::cout << "solution " << show(d.solution) << "\n";
        std::cout << "  " << show(goal) << "\n";
        for (const auto& [st, g2] : d.steps)
          std::cout << "  ~> [" << show(st) << "] " << show(g2) << "\n";
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
