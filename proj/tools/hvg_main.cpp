/*
 * Copyright 2026 the hvg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hvg/bench.hpp"
#include "hvg/counting.hpp"
#include "hvg/errors.hpp"
#include "hvg/game.hpp"
#include "hvg/indices.hpp"
#include "hvg/io.hpp"

namespace {

using namespace hvg;

int env_local_cap() {
  const char* s = std::getenv("HVG_MAX_LOCAL_CHILDREN");
  if (s == nullptr || *s == '\0') return kDefaultLocalCap;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    throw DomainError("HVG_MAX_LOCAL_CHILDREN must be an integer");
  return static_cast<int>(std::clamp(v, 1l, 62l));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    save_text(text, out_path);
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

PowerReport single_value(Method m, const NodeId& voter, PowerValue value) {
  PowerReport report;
  report.method = m;
  report.values.emplace(voter, std::move(value));
  return report;
}

// True when the whole game is one equal-weight majority vote among the
// leaves, which is what the closed form covers.
bool closed_form_game(const GameTree& tree) {
  if (!tree.is_flat()) return false;
  const TreeNode& root = tree.node(tree.root());
  return root.rule && root.rule->is_majority() && root.rule->equal_weights() &&
         root.rule->tie_breaker() < 0;
}

struct BpiArgs {
  std::string game, voter, method = "auto", format = "table", out;
  std::uint64_t samples = 100000, seed = 0;
  int precision = 6;
  bool log2 = false;
  bool sampling_flags_given = false;  // --samples/--seed appeared on the command line
};

int run_bpi(const BpiArgs& args, int local_cap) {
  GameTree tree = load_game(args.game);
  std::optional<NodeId> voter;
  if (!args.voter.empty()) {
    if (!tree.is_leaf(tree.require_node(args.voter)))
      throw DomainError("'" + args.voter + "' is an internal node, not a voter");
    voter = args.voter;
  }

  auto t0 = Clock::now();
  Method m = args.method == "auto" ? choose_method(tree, kDefaultNaiveCap, local_cap)
                                   : method_from_name(args.method);
  if (args.log2) {
    if (args.method == "auto")
      m = Method::kMebpi;
    else if (m != Method::kMebpi)
      throw DomainError("--log2 only applies to the recursive method (mebpi)");
  }
  if (args.sampling_flags_given && m != Method::kSample)
    throw DomainError("--samples and --seed only apply to --method sample");

  PowerReport report;
  switch (m) {
    case Method::kNaive:
      report = voter ? single_value(m, *voter, bpi_naive(tree, *voter)) : bpi_naive_all(tree);
      break;
    case Method::kLemma1: {
      if (!closed_form_game(tree))
        throw DomainError("method lemma1 needs a flat equal-weight majority game");
      PowerValue v = bpi_equal_weight_majority(tree.voters().size());
      report.method = Method::kLemma1;
      if (voter) {
        report.values.emplace(*voter, v);
      } else {
        for (int i : tree.voters()) report.values.emplace(tree.node(i).id, v);
      }
      break;
    }
    case Method::kMbpi:
      report = voter ? single_value(m, *voter, mbpi(tree, *voter, local_cap))
                     : mbpi_all(tree, local_cap);
      break;
    case Method::kMebpi:
      if (args.log2)
        report = voter ? single_value(m, *voter, mebpi_log2(tree, *voter, local_cap))
                       : mebpi_all_log2(tree, local_cap);
      else
        report = voter ? single_value(m, *voter, mebpi(tree, *voter, local_cap))
                       : mebpi_all(tree, local_cap);
      break;
    case Method::kSample:
      if (voter) {
        SampleEstimate est = bpi_sample(tree, *voter, args.samples, args.seed);
        report = single_value(m, *voter, PowerValue::from_rational(est.estimate_exact()));
        report.sampling = SampleInfo{est.samples, est.seed, est.halfwidth95};
      } else {
        report = bpi_sample_all(tree, args.samples, args.seed);
      }
      break;
  }
  emit(render_report(report, format_from_name(args.format), args.precision, ms_since(t0)),
       args.out);
  return 0;
}

struct CountArgs {
  std::string game, node, format = "table", out;
  int precision = 6;
  bool log2 = false, naive = false;
};

int run_count(const CountArgs& args, int local_cap) {
  if (args.naive && args.log2) throw DomainError("choose one of --naive and --log2");
  GameTree tree = load_game(args.game);
  std::optional<NodeId> only;
  if (!args.node.empty()) only = args.node;

  auto t0 = Clock::now();
  std::string text;
  OutputFormat format = format_from_name(args.format);
  if (args.naive) {
    const NodeId& root_id = tree.node(tree.root()).id;
    if (only && *only != root_id)
      throw DomainError("--naive enumerates the root game only");
    CountTable table(static_cast<std::size_t>(tree.node_count()));
    table[static_cast<std::size_t>(tree.root())] = count_naive(tree);
    text = render_counts(tree, table, format, ms_since(t0), root_id);
  } else if (args.log2) {
    Log2CountTable table = count_recursive_log2(tree, local_cap);
    text = render_counts_log2(tree, table, format, args.precision, ms_since(t0), only);
  } else {
    CountTable table = count_recursive(tree, local_cap);
    text = render_counts(tree, table, format, ms_since(t0), only);
  }
  emit(text, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact power indices for flat and hierarchical voting games"};
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "check a game document, reporting every problem");
  std::string validate_game;
  validate_cmd->add_option("game", validate_game, "game document")->required();

  BpiArgs bpi_args;
  auto* bpi_cmd = app.add_subcommand("bpi", "power index of one voter or of every voter");
  bpi_cmd->add_option("game", bpi_args.game, "game document")->required();
  bpi_cmd->add_option("--voter", bpi_args.voter, "restrict to this voter id");
  bpi_cmd->add_option("--method", bpi_args.method, "naive|mbpi|mebpi|auto|sample (also lemma1)")
      ->capture_default_str();
  auto* bpi_samples_opt =
      bpi_cmd->add_option("--samples", bpi_args.samples, "sample count for --method sample")
          ->capture_default_str();
  auto* bpi_seed_opt =
      bpi_cmd->add_option("--seed", bpi_args.seed, "generator seed for --method sample")
          ->capture_default_str();
  bpi_cmd->add_option("--precision", bpi_args.precision, "significant figures")
      ->capture_default_str()
      ->check(CLI::Range(1, 50));
  bpi_cmd->add_option("--format", bpi_args.format, "json|table|csv")->capture_default_str();
  bpi_cmd->add_option("--out", bpi_args.out, "write here instead of stdout");
  bpi_cmd->add_flag("--log2", bpi_args.log2, "carry the recursion in log space (approximate)");

  CountArgs count_args;
  auto* count_cmd = app.add_subcommand("count", "winning/losing coalition counts per node");
  count_cmd->add_option("game", count_args.game, "game document")->required();
  count_cmd->add_option("--node", count_args.node, "restrict to this node id");
  count_cmd->add_option("--format", count_args.format, "json|table|csv")->capture_default_str();
  count_cmd->add_option("--precision", count_args.precision,
                        "significant figures for --log2 output")
      ->capture_default_str()
      ->check(CLI::Range(1, 50));
  count_cmd->add_option("--out", count_args.out, "write here instead of stdout");
  count_cmd->add_flag("--log2", count_args.log2, "log-space counts (approximate)");
  count_cmd->add_flag("--naive", count_args.naive, "enumerate the root game instead of recursing");

  auto* balance_cmd = app.add_subcommand("balance", "report whether the game is balanced");
  std::string balance_game;
  bool balance_exhaustive = false;
  balance_cmd->add_option("game", balance_game, "game document")->required();
  balance_cmd->add_flag("--exhaustive", balance_exhaustive,
                        "check every coalition instead of each local rule");

  auto* lemma1_cmd =
      app.add_subcommand("lemma1", "closed-form power in an equal-weight majority game");
  std::uint64_t lemma1_n = 0;
  int lemma1_precision = 6;
  bool lemma1_exact = false;
  lemma1_cmd->add_option("n", lemma1_n, "number of voters")->required();
  lemma1_cmd->add_option("--precision", lemma1_precision, "significant figures")
      ->capture_default_str()
      ->check(CLI::Range(1, 50));
  lemma1_cmd->add_flag("--exact", lemma1_exact, "print the exact fraction instead");

  auto* gen_cmd = app.add_subcommand("gen", "generate a reproducible game document");
  GenSpec gen_spec;
  std::string gen_rule = "majority", gen_out;
  gen_cmd->add_option("--leaves", gen_spec.leaves, "number of voters")->required();
  gen_cmd->add_option("--branching", gen_spec.branching, "maximum children per node")->required();
  gen_cmd->add_option("--depth", gen_spec.depth, "maximum tree depth")->required();
  gen_cmd->add_option("--rule", gen_rule, "majority|supermajority:F|quota|table|random")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_spec.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "write here instead of stdout");

  auto* bench_cmd = app.add_subcommand("bench", "experiments: runtime, mse, slovenia");
  std::string bench_what, bench_out;
  int bench_instances = 500;
  bench_cmd->add_option("experiment", bench_what, "runtime|mse|slovenia")
      ->required()
      ->check(CLI::IsMember({"runtime", "mse", "slovenia"}));
  bench_cmd->add_option("--out", bench_out, "directory for csv/json records");
  bench_cmd->add_option("--instances", bench_instances, "instance count for mse")
      ->capture_default_str()
      ->check(CLI::Range(1, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const int local_cap = env_local_cap();

    if (*validate_cmd) {
      GameTree tree = load_game(validate_game);  // throws with the full report
      (void)tree;
      std::cout << "ok\n";
      return 0;
    }
    if (*bpi_cmd) {
      bpi_args.sampling_flags_given = bpi_samples_opt->count() > 0 || bpi_seed_opt->count() > 0;
      return run_bpi(bpi_args, local_cap);
    }
    if (*count_cmd) return run_count(count_args, local_cap);
    if (*balance_cmd) {
      GameTree tree = load_game(balance_game);
      bool balanced = balance_exhaustive ? is_balanced_exhaustive(tree)
                                         : is_balanced_local(tree, local_cap);
      std::cout << (balanced ? "balanced\n" : "unbalanced\n");
      return 0;
    }
    if (*lemma1_cmd) {
      PowerValue v = bpi_equal_weight_majority(lemma1_n);
      std::cout << (lemma1_exact ? v.fraction() : v.decimal(lemma1_precision)) << "\n";
      return 0;
    }
    if (*gen_cmd) {
      Rational fraction(3, 4);
      gen_spec.style = rule_style_from_name(gen_rule, &fraction);
      gen_spec.supermajority_fraction = fraction;
      emit(serialize_game(generate(gen_spec)), gen_out);
      return 0;
    }
    if (*bench_cmd) {
      if (bench_what == "runtime") {
        std::cout << run_runtime_experiment(bench_out).summary;
      } else if (bench_what == "mse") {
        std::cout << run_mse_experiment(default_mse_specs(bench_instances), bench_out).summary;
      } else {
        std::cout << run_slovenia_case_study(bench_out).summary;
        if (!bench_out.empty())
          save_game(build_slovenia_tree(),
                    (std::filesystem::path(bench_out) / "slovenia_game.json").string());
      }
      return 0;
    }
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
