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

#include "hvg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "hvg/counting.hpp"
#include "hvg/errors.hpp"
#include "hvg/indices.hpp"
#include "hvg/io.hpp"

namespace hvg {

RuleStyle rule_style_from_name(const std::string& name, Rational* fraction) {
  if (name == "majority") return RuleStyle::kMajority;
  if (name == "quota") return RuleStyle::kRandomQuota;
  if (name == "table") return RuleStyle::kRandomTable;
  if (name == "random") return RuleStyle::kRandomMix;
  const std::string prefix = "supermajority";
  if (name.rfind(prefix, 0) == 0) {
    std::string rest = name.substr(prefix.size());
    if (!rest.empty()) {
      if (rest[0] != ':') throw DomainError("unknown rule style '" + name + "'");
      rest = rest.substr(1);
      Rational f = rest.find('/') != std::string::npos ? parse_fraction(rest)
                                                       : parse_decimal(rest);
      if (f * 2 <= 1 || f > 1)
        throw DomainError("supermajority fraction must lie in (1/2, 1]");
      if (fraction) *fraction = f;
    }
    return RuleStyle::kSupermajority;
  }
  throw DomainError("unknown rule style '" + name + "'");
}

namespace {

const char* style_name(RuleStyle s) {
  switch (s) {
    case RuleStyle::kMajority: return "majority";
    case RuleStyle::kSupermajority: return "supermajority";
    case RuleStyle::kRandomQuota: return "quota";
    case RuleStyle::kRandomTable: return "table";
    case RuleStyle::kRandomMix: return "random";
  }
  return "?";
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  // Modulo keeps the draw sequence identical across platforms; the slight
  // bias is irrelevant for workload generation.
  std::uint64_t below(std::uint64_t n) { return eng() % n; }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
};

// Largest subtree-leaf capacity with the given per-level fan-out, saturating
// so the comparison stays safe for any int inputs.
std::uint64_t capacity(int branching, int levels, std::uint64_t limit) {
  std::uint64_t cap = 1;
  for (int i = 0; i < levels; ++i) {
    if (cap > limit / static_cast<std::uint64_t>(branching)) return limit;
    cap *= static_cast<std::uint64_t>(branching);
  }
  return cap;
}

struct TreeBuilder {
  const GenSpec& spec;
  Rng rng;
  int next_voter = 1;
  int next_group = 1;

  explicit TreeBuilder(const GenSpec& s) : spec(s), rng(s.seed) {}

  RuleSpec make_rule(const std::vector<NodeSpec>& children) {
    const int k = static_cast<int>(children.size());
    RuleStyle style = spec.style;
    if (style == RuleStyle::kRandomMix)
      style = rng.below(2) == 0 ? RuleStyle::kRandomQuota : RuleStyle::kRandomTable;
    // Wide nodes fall back from tables: a random antichain over >12 children
    // is no longer representable compactly enough to be worth generating.
    if (style == RuleStyle::kRandomTable && k > 12) style = RuleStyle::kRandomQuota;

    switch (style) {
      case RuleStyle::kMajority:
        return equal_majority_spec(children);
      case RuleStyle::kSupermajority: {
        Rational q = spec.supermajority_fraction * k;
        // ceil(f*k) as an integer quota
        BigNat num = q.get_num(), den = q.get_den(), quota;
        mpz_cdiv_q(quota.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        std::vector<std::pair<NodeId, std::uint64_t>> w;
        for (const NodeSpec& c : children) w.emplace_back(c.id, 1);
        return quota_spec(std::move(w), quota.get_ui());
      }
      case RuleStyle::kRandomQuota: {
        std::vector<std::pair<NodeId, std::uint64_t>> w;
        std::uint64_t total = 0;
        for (const NodeSpec& c : children) {
          std::uint64_t wi = rng.range(1, 9);
          total += wi;
          w.emplace_back(c.id, wi);
        }
        return quota_spec(std::move(w), rng.range(1, total));
      }
      case RuleStyle::kRandomTable: {
        std::vector<std::uint64_t> masks;
        std::uint64_t full = (k >= 64) ? ~0ull : ((1ull << k) - 1);
        int draws = static_cast<int>(rng.range(1, 5));
        for (int i = 0; i < draws; ++i) masks.push_back(1 + rng.below(full));
        RuleSpec r;
        r.kind = RuleKind::kTable;
        r.sets_are_minimal = true;  // convert_rule drops dominated sets
        for (std::uint64_t mask : masks) {
          std::vector<NodeId> ids;
          for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1)
            ids.push_back(children[std::countr_zero(rest)].id);
          r.winning_sets.push_back(std::move(ids));
        }
        return r;
      }
      case RuleStyle::kRandomMix: break;  // resolved above
    }
    throw DomainError("unreachable rule style");
  }

  NodeSpec build(int leaves, int depth_budget) {
    if (leaves == 1) return leaf_spec("v" + std::to_string(next_voter++));
    NodeSpec node;
    node.id = "g" + std::to_string(next_group++);
    std::uint64_t child_cap = capacity(spec.branching, depth_budget - 1, leaves);
    int k = static_cast<int>((leaves + child_cap - 1) / child_cap);
    k = std::max(k, 2);
    int base = leaves / k, extra = leaves % k;
    for (int j = 0; j < k; ++j)
      node.children.push_back(build(base + (j < extra ? 1 : 0), depth_budget - 1));
    node.rule = make_rule(node.children);
    return node;
  }
};

}  // namespace

GameTree generate(const GenSpec& spec) {
  if (spec.leaves < 1) throw DomainError("a game needs at least one voter");
  if (spec.leaves == 1) return GameTree::from_spec(leaf_spec("v1"));
  if (spec.branching < 2) throw DomainError("branching must be at least 2");
  if (spec.depth < 1) throw DomainError("depth must be at least 1");
  if (capacity(spec.branching, spec.depth, static_cast<std::uint64_t>(spec.leaves)) <
      static_cast<std::uint64_t>(spec.leaves))
    throw DomainError("no tree with " + std::to_string(spec.leaves) + " leaves fits branching " +
                      std::to_string(spec.branching) + " and depth " + std::to_string(spec.depth));
  if (spec.style == RuleStyle::kSupermajority &&
      (spec.supermajority_fraction * 2 <= 1 || spec.supermajority_fraction > 1))
    throw DomainError("supermajority fraction must lie in (1/2, 1]");
  TreeBuilder builder(spec);
  NodeSpec root = builder.build(spec.leaves, spec.depth);
  GameTree tree = GameTree::from_spec(root);
  tree.require_valid();
  return tree;
}

namespace {

template <class F>
double time_median_ms(F&& work, int reps, double* iqr_out) {
  std::vector<double> times;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    work();
    auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  if (iqr_out)
    *iqr_out = reps >= 4 ? times[reps - reps / 4 - 1] - times[reps / 4] : 0.0;
  return times[reps / 2];
}

void write_if(const std::string& out_dir, const std::string& name, const std::string& text) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  save_text(text, (std::filesystem::path(out_dir) / name).string());
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

TimingRow time_method(const GameTree& tree, const GenSpec& spec, const std::string& method,
                      int reps) {
  TimingRow row;
  row.spec = spec;
  row.voters = static_cast<int>(tree.voters().size());
  row.method = method;
  try {
    row.median_ms = time_median_ms(
        [&] {
          if (method == "naive")
            bpi_naive_all(tree);
          else if (method == "mbpi")
            mbpi_all(tree);
          else
            mebpi_all(tree);
        },
        reps, &row.iqr_ms);
  } catch (const CapExceededError&) {
    row.refused = true;
    row.median_ms = -1.0;
  }
  return row;
}

}  // namespace

RuntimeResult run_runtime_experiment(const std::string& out_dir) {
  RuntimeResult result;
  const std::vector<int> ladder = {8, 10, 12, 14, 16};

  struct LadderPoint {
    int n;
    double naive_ms, mbpi_ms, mebpi_ms;
  };
  std::vector<LadderPoint> points;

  for (int n : ladder) {
    GenSpec spec{n, 2, 4, RuleStyle::kMajority, Rational(3, 4), 100u + static_cast<unsigned>(n)};
    GameTree tree = generate(spec);
    LadderPoint pt{n, 0, 0, 0};
    for (const std::string& method : {std::string("naive"), std::string("mbpi"),
                                      std::string("mebpi")}) {
      TimingRow row = time_method(tree, spec, method, 5);
      if (method == "naive") pt.naive_ms = row.median_ms;
      if (method == "mbpi") pt.mbpi_ms = row.median_ms;
      if (method == "mebpi") pt.mebpi_ms = row.median_ms;
      result.rows.push_back(std::move(row));
    }
    points.push_back(pt);
  }

  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].naive_ms < points[i - 1].naive_ms) result.naive_monotone = false;
  const LadderPoint& top = points.back();
  result.speedup_naive_over_mebpi = top.mebpi_ms > 0 ? top.naive_ms / top.mebpi_ms : 0.0;

  // Sizes past the exhaustive cap: enumeration must refuse, recursion must
  // keep scaling roughly linearly in the number of nodes.
  GenSpec refuse_spec{1000, 10, 3, RuleStyle::kSupermajority, Rational(3, 4), 901};
  GameTree refuse_tree = generate(refuse_spec);
  TimingRow refused = time_method(refuse_tree, refuse_spec, "naive", 1);
  result.large_probe_refused_naive = refused.refused;
  result.rows.push_back(std::move(refused));
  result.rows.push_back(time_method(refuse_tree, refuse_spec, "mebpi", 3));

  GenSpec half_spec{5000, 10, 4, RuleStyle::kSupermajority, Rational(3, 4), 902};
  GenSpec full_spec{10000, 10, 4, RuleStyle::kSupermajority, Rational(3, 4), 903};
  TimingRow half = time_method(generate(half_spec), half_spec, "mebpi", 3);
  TimingRow full = time_method(generate(full_spec), full_spec, "mebpi", 3);
  result.mebpi_doubling_factor = half.median_ms > 0 ? full.median_ms / half.median_ms : 0.0;
  result.mebpi_largest_ms = full.median_ms;
  result.rows.push_back(std::move(half));
  result.rows.push_back(std::move(full));

  std::string plot = "n,naive_ms,mbpi_ms,mebpi_ms\n";
  for (const LadderPoint& pt : points)
    plot += std::to_string(pt.n) + "," + fmt_ms(pt.naive_ms) + "," + fmt_ms(pt.mbpi_ms) + "," +
            fmt_ms(pt.mebpi_ms) + "\n";
  write_if(out_dir, "runtime_plot.csv", plot);

  std::string records = "method,leaves,branching,depth,style,seed,median_ms,iqr_ms,refused\n";
  for (const TimingRow& row : result.rows)
    records += row.method + "," + std::to_string(row.spec.leaves) + "," +
               std::to_string(row.spec.branching) + "," + std::to_string(row.spec.depth) + "," +
               style_name(row.spec.style) + "," + std::to_string(row.spec.seed) + "," +
               (row.refused ? "" : fmt_ms(row.median_ms)) + "," + fmt_ms(row.iqr_ms) + "," +
               (row.refused ? "yes" : "no") + "\n";
  write_if(out_dir, "runtime_records.csv", records);

  std::ostringstream sum;
  sum << "runtime ladder (binary majority trees, median of 5, ms):\n";
  sum << "n naive mbpi mebpi\n";
  for (const LadderPoint& pt : points)
    sum << pt.n << " " << fmt_ms(pt.naive_ms) << " " << fmt_ms(pt.mbpi_ms) << " "
        << fmt_ms(pt.mebpi_ms) << "\n";
  sum << "speedup of recursion over enumeration at n=16: "
      << fmt_ms(result.speedup_naive_over_mebpi) << "x\n";
  sum << "enumeration at n=1000: " << (result.large_probe_refused_naive ? "refused" : "ran")
      << "\n";
  sum << "recursion time scaling n=5000 -> n=10000: x" << fmt_ms(result.mebpi_doubling_factor)
      << " (n=10000 took " << fmt_ms(result.mebpi_largest_ms) << " ms)\n";
  result.summary = sum.str();
  return result;
}

std::vector<GenSpec> default_mse_specs(int instances) {
  // Small mixed shapes, all of depth >= 2, all within the exhaustive cap.
  static const int shapes[][3] = {
      {6, 2, 3},  {8, 2, 3},  {8, 2, 4},  {9, 3, 2},  {10, 3, 3}, {10, 2, 4},
      {12, 3, 3}, {12, 2, 4}, {14, 4, 3}, {15, 4, 3}, {16, 4, 2}, {16, 2, 4},
  };
  const int kShapeCount = static_cast<int>(sizeof shapes / sizeof shapes[0]);
  std::vector<GenSpec> specs;
  for (int i = 0; i < instances; ++i) {
    const int* s = shapes[i % kShapeCount];
    specs.push_back(GenSpec{s[0], s[1], s[2], RuleStyle::kSupermajority, Rational(3, 4),
                            7000u + static_cast<unsigned>(i)});
  }
  return specs;
}

MseResult run_mse_experiment(const std::vector<GenSpec>& specs, const std::string& out_dir) {
  MseResult result;
  for (const GenSpec& spec : specs) {
    GameTree tree = generate(spec);
    PowerReport exact = bpi_naive_all(tree);
    PowerReport heuristic = mbpi_all(tree);
    PowerReport recursive = mebpi_all(tree);
    Rational mb(0), me(0);
    for (const auto& [id, truth] : exact.values) {
      Rational dh = heuristic.values.at(id).exact - truth.exact;
      Rational dr = recursive.values.at(id).exact - truth.exact;
      mb += dh * dh;
      me += dr * dr;
    }
    const int n = static_cast<int>(exact.values.size());
    MseRow row{spec, n, mb / n, me / n};
    if (row.mbpi_mse != 0) ++result.mbpi_nonzero;
    if (row.mebpi_mse != 0) ++result.mebpi_nonzero;
    result.rows.push_back(std::move(row));
  }

  std::string records = "leaves,branching,depth,style,seed,mbpi_mse,mebpi_mse\n";
  for (const MseRow& row : result.rows)
    records += std::to_string(row.spec.leaves) + "," + std::to_string(row.spec.branching) + "," +
               std::to_string(row.spec.depth) + "," + style_name(row.spec.style) + "," +
               std::to_string(row.spec.seed) + "," + to_fraction(row.mbpi_mse) + "," +
               to_fraction(row.mebpi_mse) + "\n";
  write_if(out_dir, "mse_records.csv", records);

  std::ostringstream sum;
  const int total = static_cast<int>(result.rows.size());
  sum << total << " instances\n";
  sum << "recursive method differs from enumeration on " << result.mebpi_nonzero << "/" << total
      << "\n";
  sum << "path-product heuristic differs from enumeration on " << result.mbpi_nonzero << "/"
      << total << "\n";
  result.summary = sum.str();
  return result;
}

namespace {

// Renders a value the way the reporting pipeline prints it: round half to
// even with one guard figure, then cut back to the printed width.
std::string printed_cell(const Rational& value, int figs) {
  return truncate_sig_figs(to_decimal(value, figs + 1), figs);
}

Rational council_factor(std::uint64_t members) {
  return bpi_equal_weight_majority(members).exact;
}

CouncilRow make_row(const std::string& municipality, std::uint64_t electorate, int council_size,
                    int national_size, int voter_figs, int council_figs, int national_figs,
                    int product_figs) {
  CouncilRow row;
  row.municipality = municipality;
  row.electorate = electorate;
  row.council_size = council_size;
  row.national_size = national_size;
  Rational fv = council_factor(electorate);
  Rational fc = council_factor(static_cast<std::uint64_t>(council_size));
  Rational fn = council_factor(static_cast<std::uint64_t>(national_size));
  row.voter_factor = printed_cell(fv, voter_figs);
  row.council_factor = printed_cell(fc, council_figs);
  row.national_factor = printed_cell(fn, national_figs);
  row.exact_product = fv * fc * fn;
  // The printed product multiplies the printed factors, so a reader can
  // reproduce it from the table alone.
  Rational printed = parse_decimal(row.voter_factor) * parse_decimal(row.council_factor) *
                     parse_decimal(row.national_factor);
  row.product = printed_cell(printed, product_figs);
  return row;
}

}  // namespace

GameTree build_slovenia_tree() {
  auto pad = [](std::uint64_t value, int width) {
    std::string s = std::to_string(value);
    return std::string(width > static_cast<int>(s.size()) ? width - s.size() : 0, '0') + s;
  };

  auto municipality = [&](const std::string& prefix, const std::string& first_voter,
                          const std::string& voter_prefix, std::uint64_t electorate,
                          int council_size) {
    std::vector<NodeSpec> voters;
    voters.push_back(leaf_spec(first_voter));
    for (std::uint64_t v = 2; v <= electorate; ++v)
      voters.push_back(leaf_spec(voter_prefix + pad(v, 5)));
    NodeSpec councillor;
    councillor.id = prefix + "_cllr";
    councillor.rule = equal_majority_spec(voters);
    councillor.children = std::move(voters);

    std::vector<NodeSpec> council;
    council.push_back(std::move(councillor));
    for (int c = 2; c <= council_size; ++c)
      council.push_back(leaf_spec(prefix + "_c" + pad(c, 2)));
    NodeSpec seat;
    seat.id = prefix + "_nc";
    seat.rule = equal_majority_spec(council);
    seat.children = std::move(council);
    return seat;
  };

  std::vector<NodeSpec> seats;
  seats.push_back(municipality("velenje", "velenje_voter", "vv", 10039, 33));
  seats.push_back(municipality("ljubljana", "ljubljana_voter", "lv", 65041, 45));
  for (int s = 3; s <= 40; ++s) seats.push_back(leaf_spec("nc" + pad(s, 2)));

  NodeSpec root;
  root.id = "national_council";
  root.rule = equal_majority_spec(seats);
  root.children = std::move(seats);
  return GameTree::from_spec(root);
}

CaseStudyResult run_slovenia_case_study(const std::string& out_dir) {
  CaseStudyResult result;
  result.velenje = make_row("velenje", 10039, 33, 40, 3, 5, 5, 5);
  result.ljubljana = make_row("ljubljana", 65041, 45, 40, 6, 6, 5, 4);
  result.ratio = parse_decimal(result.velenje.product) / parse_decimal(result.ljubljana.product);
  result.ratio_string = to_decimal(result.ratio, 4);

  std::ostringstream table;
  table << "municipality electorate council voter_factor council_factor national_factor product\n";
  for (const CouncilRow* row : {&result.velenje, &result.ljubljana})
    table << row->municipality << " " << row->electorate << " " << row->council_size << " "
          << row->voter_factor << " " << row->council_factor << " " << row->national_factor << " "
          << row->product << "\n";
  table << "influence ratio " << result.velenje.municipality << "/"
        << result.ljubljana.municipality << ": " << result.ratio_string << "\n";
  result.summary = table.str();

  write_if(out_dir, "slovenia_table.txt", result.summary);
  if (!out_dir.empty()) {
    std::ostringstream cells;
    cells << "{\"velenje\":{\"voter_factor\":\"" << result.velenje.voter_factor
          << "\",\"council_factor\":\"" << result.velenje.council_factor
          << "\",\"national_factor\":\"" << result.velenje.national_factor << "\",\"product\":\""
          << result.velenje.product << "\"},\"ljubljana\":{\"voter_factor\":\""
          << result.ljubljana.voter_factor << "\",\"council_factor\":\""
          << result.ljubljana.council_factor << "\",\"national_factor\":\""
          << result.ljubljana.national_factor << "\",\"product\":\"" << result.ljubljana.product
          << "\"},\"ratio\":\"" << result.ratio_string << "\"}\n";
    write_if(out_dir, "slovenia_cells.json", cells.str());
  }
  return result;
}

}  // namespace hvg
