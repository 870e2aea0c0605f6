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

#include "hvg/indices.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <unordered_map>
#include <vector>

namespace hvg {

const char* method_name(Method m) {
  switch (m) {
    case Method::kNaive: return "naive";
    case Method::kLemma1: return "lemma1";
    case Method::kMbpi: return "mbpi";
    case Method::kMebpi: return "mebpi";
    case Method::kSample: return "sample";
  }
  return "naive";
}

Method method_from_name(const std::string& name) {
  if (name == "naive") return Method::kNaive;
  if (name == "lemma1") return Method::kLemma1;
  if (name == "mbpi") return Method::kMbpi;
  if (name == "mebpi") return Method::kMebpi;
  if (name == "sample") return Method::kSample;
  throw DomainError("unknown method '" + name + "'");
}

PowerValue PowerValue::from_rational(Rational r) {
  r.canonicalize();
  if (r < 0 || r > 1) throw DomainError("power value outside [0, 1]");
  PowerValue v;
  v.approx = Log2Value::from_rational(r);
  v.exact = std::move(r);
  v.is_exact = true;
  return v;
}

PowerValue PowerValue::from_log2(Log2Value l) {
  // Log-space round-off can push a product of probabilities a hair above 1.
  if (!l.zero && l.log2 > 0) {
    if (l.log2 > 1e-9) throw DomainError("power value outside [0, 1]");
    l.log2 = 0.0;
  }
  PowerValue v;
  v.approx = l;
  v.is_exact = false;
  return v;
}

double PowerValue::to_double() const { return is_exact ? exact.get_d() : approx.to_double(); }

std::string PowerValue::decimal(int sig_figs) const {
  return is_exact ? to_decimal(exact, sig_figs) : log2_to_decimal(approx, sig_figs);
}

std::string PowerValue::fraction() const {
  if (!is_exact) throw DomainError("no exact fraction for a log-space value");
  return to_fraction(exact);
}

Rational SampleEstimate::estimate_exact() const {
  return make_rational(BigNat(static_cast<unsigned long>(swings)),
                       BigNat(static_cast<unsigned long>(samples)));
}

double SampleEstimate::estimate() const {
  return static_cast<double>(swings) / static_cast<double>(samples);
}

double hoeffding_halfwidth95(std::uint64_t samples) {
  return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(samples)));
}

namespace {

int require_voter(const GameTree& tree, const NodeId& voter) {
  int i = tree.require_node(voter);
  if (!tree.is_leaf(i)) throw DomainError("'" + voter + "' is not a voter");
  return i;
}

void check_sweep_cap(const TreeNode& parent, int local_cap) {
  int k = static_cast<int>(parent.children.size());
  if (local_cap > 62) local_cap = 62;
  if (k > local_cap)
    throw CapExceededError("node '" + parent.id + "' has " + std::to_string(k) +
                           " children; exact subset sweeps cap at " +
                           std::to_string(local_cap));
}

bool closed_form_applies(const LocalRule& r) {
  return r.is_majority() && r.equal_weights() && r.tie_breaker() < 0;
}

Rational equal_majority_bpi(std::uint64_t n) {
  return make_rational(binomial(n - 1, (n - 1) / 2), pow2(n - 1));
}

// Swing count of one child inside its parent's rule, over all 2^(k-1)
// sibling subsets. Returns numerator; denominator is 2^(k-1).
Rational local_bpi_value(const GameTree& tree, int child_idx, int local_cap) {
  const TreeNode& child = tree.node(child_idx);
  if (child.parent < 0) throw DomainError("'" + child.id + "' is the root; no parent rule");
  const TreeNode& parent = tree.node(child.parent);
  const LocalRule& r = *parent.rule;
  const int k = r.child_count();
  if (closed_form_applies(r)) return equal_majority_bpi(k);
  check_sweep_cap(parent, local_cap);

  const std::uint64_t child_bit = std::uint64_t{1} << child.pos_in_parent;
  std::vector<int> sibling_pos;
  for (int j = 0; j < k; ++j)
    if (j != child.pos_in_parent) sibling_pos.push_back(j);

  std::uint64_t swings = 0;
  std::uint64_t mask = 0;  // expanded over all k positions
  const std::uint64_t subsets = std::uint64_t{1} << (k - 1);
  for (std::uint64_t g = 0;; ++g) {
    if (r.wins_mask(mask | child_bit) && !r.wins_mask(mask)) ++swings;
    if (g + 1 == subsets) break;
    mask ^= std::uint64_t{1} << sibling_pos[std::countr_zero(g + 1)];
  }
  return make_rational(BigNat(static_cast<unsigned long>(swings)), pow2(k - 1));
}

// Sibling-subset sweep weighted by the siblings' subtree counts, templated
// over exact (BigNat) and log-space arithmetic.
struct ExactEbpiOps {
  using Num = BigNat;
  using Table = CountTable;
  static Num one() { return BigNat(1); }
  static Num zero() { return BigNat(0); }
  static void mul(Num& a, const Num& b) { a *= b; }
  static void div(Num& a, const Num& b) {
    mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  static void add(Num& a, const Num& b) { a += b; }
  static const Num& wins(const Table& t, int i) { return t.at(i).wins; }
  static const Num& losses(const Table& t, int i) { return t.at(i).losses; }
};

struct Log2EbpiOps {
  using Num = Log2Value;
  using Table = Log2CountTable;
  static Num one() { return Log2Value::one(); }
  static Num zero() { return Log2Value::zero_value(); }
  static void mul(Num& a, const Num& b) { a *= b; }
  static void div(Num& a, const Num& b) { a /= b; }
  static void add(Num& a, const Num& b) { a += b; }
  static const Num& wins(const Table& t, int i) { return t.at(i).wins; }
  static const Num& losses(const Table& t, int i) { return t.at(i).losses; }
};

// numerator and the exponent of the power-of-two denominator.
template <class Ops>
std::pair<typename Ops::Num, unsigned long> local_ebpi_sweep(
    const GameTree& tree, int child_idx, const typename Ops::Table& counts, int local_cap) {
  const TreeNode& child = tree.node(child_idx);
  const TreeNode& parent = tree.node(child.parent);
  const LocalRule& r = *parent.rule;
  const int k = r.child_count();
  check_sweep_cap(parent, local_cap);

  const std::uint64_t child_bit = std::uint64_t{1} << child.pos_in_parent;
  std::vector<int> sibling_pos;
  std::vector<int> sibling_node;
  unsigned long exponent = static_cast<unsigned long>(k - 1);
  for (int j = 0; j < k; ++j) {
    if (j == child.pos_in_parent) continue;
    sibling_pos.push_back(j);
    sibling_node.push_back(parent.children[j]);
    exponent += static_cast<unsigned long>(tree.leaves_under_count(parent.children[j]) - 1);
  }

  typename Ops::Num numerator = Ops::zero();
  typename Ops::Num prod = Ops::one();
  for (int s : sibling_node) Ops::mul(prod, Ops::losses(counts, s));

  std::uint64_t mask = 0;
  const std::uint64_t subsets = std::uint64_t{1} << (k - 1);
  for (std::uint64_t g = 0;; ++g) {
    if (r.wins_mask(mask | child_bit) && !r.wins_mask(mask)) Ops::add(numerator, prod);
    if (g + 1 == subsets) break;
    const int b = std::countr_zero(g + 1);
    const std::uint64_t bit = std::uint64_t{1} << sibling_pos[b];
    const int s = sibling_node[b];
    mask ^= bit;
    if (mask & bit) {
      Ops::mul(prod, Ops::wins(counts, s));
      Ops::div(prod, Ops::losses(counts, s));
    } else {
      Ops::mul(prod, Ops::losses(counts, s));
      Ops::div(prod, Ops::wins(counts, s));
    }
  }
  return {std::move(numerator), exponent};
}

template <class Table>
bool siblings_balanced(const GameTree& tree, int child_idx, const Table& counts) {
  const TreeNode& child = tree.node(child_idx);
  const TreeNode& parent = tree.node(child.parent);
  for (int j = 0; j < static_cast<int>(parent.children.size()); ++j)
    if (j != child.pos_in_parent && !counts.balanced(parent.children[j])) return false;
  return true;
}

// Exact local EBPI with the balanced-sibling reduction: when every sibling
// subtree splits its leaf patterns evenly, the count products cancel against
// the denominator and the value collapses to plain local BPI.
Rational local_ebpi_value(const GameTree& tree, int child_idx, const CountTable& counts,
                          int local_cap) {
  const TreeNode& child = tree.node(child_idx);
  if (child.parent < 0) throw DomainError("'" + child.id + "' is the root; no parent rule");
  if (siblings_balanced(tree, child_idx, counts))
    return local_bpi_value(tree, child_idx, local_cap);
  auto [num, exponent] = local_ebpi_sweep<ExactEbpiOps>(tree, child_idx, counts, local_cap);
  return make_rational(num, pow2(exponent));
}

Log2Value local_ebpi_value_log2(const GameTree& tree, int child_idx,
                                const Log2CountTable& counts, int local_cap) {
  const TreeNode& child = tree.node(child_idx);
  if (child.parent < 0) throw DomainError("'" + child.id + "' is the root; no parent rule");
  if (siblings_balanced(tree, child_idx, counts))
    return Log2Value::from_rational(local_bpi_value(tree, child_idx, local_cap));
  auto [num, exponent] = local_ebpi_sweep<Log2EbpiOps>(tree, child_idx, counts, local_cap);
  num /= Log2Value::from_pow2(static_cast<double>(exponent));
  return num;
}

// Per-edge value cache for the *_all passes. Wide equal-weight majorities
// over balanced subtrees share one closed-form value across all children, so
// those are cached per parent instead of per child.
template <class ValueFn>
class EdgeCache {
 public:
  explicit EdgeCache(int nodes) : per_node_(nodes) {}

  const Rational& get(const GameTree& tree, int child_idx, const ValueFn& value,
                      bool collapse_to_parent) {
    const int parent = tree.node(child_idx).parent;
    if (collapse_to_parent) {
      auto it = per_parent_.find(parent);
      if (it == per_parent_.end())
        it = per_parent_.emplace(parent, value(child_idx)).first;
      return it->second;
    }
    auto& slot = per_node_[child_idx];
    if (!slot) slot = value(child_idx);
    return *slot;
  }

 private:
  std::vector<std::optional<Rational>> per_node_;
  std::unordered_map<int, Rational> per_parent_;
};

}  // namespace

PowerValue bpi_equal_weight_majority(std::uint64_t n) {
  if (n < 1) throw DomainError("need at least one voter");
  return PowerValue::from_rational(equal_majority_bpi(n));
}

PowerValue bpi_naive(const GameTree& tree, const NodeId& voter, int naive_cap) {
  TruthTable tt = build_truth_table(tree, naive_cap);
  const int vp = tree.voter_position(require_voter(tree, voter));
  const std::uint64_t vbit = std::uint64_t{1} << vp;
  std::uint64_t swings = 0;
  for (std::uint64_t mask = 0; mask < tt.outcome.size(); ++mask) {
    if (mask & vbit) continue;
    if (tt.outcome[mask | vbit] && !tt.outcome[mask]) ++swings;
  }
  return PowerValue::from_rational(
      make_rational(BigNat(static_cast<unsigned long>(swings)), pow2(tt.voters - 1)));
}

PowerReport bpi_naive_all(const GameTree& tree, int naive_cap) {
  TruthTable tt = build_truth_table(tree, naive_cap);
  PowerReport report;
  report.method = Method::kNaive;
  const BigNat den = pow2(tt.voters - 1);
  for (int v : tree.voters()) {
    const std::uint64_t vbit = std::uint64_t{1} << tree.voter_position(v);
    std::uint64_t swings = 0;
    for (std::uint64_t mask = 0; mask < tt.outcome.size(); ++mask) {
      if (mask & vbit) continue;
      if (tt.outcome[mask | vbit] && !tt.outcome[mask]) ++swings;
    }
    report.values[tree.node(v).id] = PowerValue::from_rational(
        make_rational(BigNat(static_cast<unsigned long>(swings)), den));
  }
  return report;
}

PowerValue local_bpi(const GameTree& tree, const NodeId& child, int local_cap) {
  tree.require_valid();
  return PowerValue::from_rational(local_bpi_value(tree, tree.require_node(child), local_cap));
}

PowerValue mbpi(const GameTree& tree, const NodeId& voter, int local_cap) {
  tree.require_valid();
  Rational acc(1);
  for (int i = require_voter(tree, voter); tree.node(i).parent >= 0; i = tree.node(i).parent)
    acc *= local_bpi_value(tree, i, local_cap);
  acc.canonicalize();
  return PowerValue::from_rational(std::move(acc));
}

PowerReport mbpi_all(const GameTree& tree, int local_cap) {
  tree.require_valid();
  auto value = [&](int child) { return local_bpi_value(tree, child, local_cap); };
  EdgeCache<decltype(value)> cache(tree.node_count());
  PowerReport report;
  report.method = Method::kMbpi;
  for (int v : tree.voters()) {
    Rational acc(1);
    for (int i = v; tree.node(i).parent >= 0; i = tree.node(i).parent) {
      const LocalRule& r = *tree.node(tree.node(i).parent).rule;
      acc *= cache.get(tree, i, value, closed_form_applies(r));
    }
    acc.canonicalize();
    report.values[tree.node(v).id] = PowerValue::from_rational(std::move(acc));
  }
  return report;
}

PowerValue local_ebpi(const GameTree& tree, const NodeId& child, const CountTable& counts,
                      int local_cap) {
  tree.require_valid();
  if (counts.size() != static_cast<std::size_t>(tree.node_count()))
    throw DomainError("count table does not cover this tree");
  return PowerValue::from_rational(
      local_ebpi_value(tree, tree.require_node(child), counts, local_cap));
}

PowerValue mebpi(const GameTree& tree, const NodeId& voter, int local_cap) {
  const int vi = require_voter(tree, voter);
  CountTable counts = count_recursive(tree, local_cap);
  Rational acc(1);
  for (int i = vi; tree.node(i).parent >= 0; i = tree.node(i).parent)
    acc *= local_ebpi_value(tree, i, counts, local_cap);
  acc.canonicalize();
  return PowerValue::from_rational(std::move(acc));
}

PowerReport mebpi_all(const GameTree& tree, int local_cap) {
  CountTable counts = count_recursive(tree, local_cap);
  auto value = [&](int child) { return local_ebpi_value(tree, child, counts, local_cap); };
  EdgeCache<decltype(value)> cache(tree.node_count());
  PowerReport report;
  report.method = Method::kMebpi;
  for (int v : tree.voters()) {
    Rational acc(1);
    for (int i = v; tree.node(i).parent >= 0; i = tree.node(i).parent) {
      const int parent = tree.node(i).parent;
      const LocalRule& r = *tree.node(parent).rule;
      bool collapse = closed_form_applies(r);
      if (collapse)
        for (int c : tree.node(parent).children)
          collapse = collapse && counts.balanced(c);
      acc *= cache.get(tree, i, value, collapse);
    }
    acc.canonicalize();
    report.values[tree.node(v).id] = PowerValue::from_rational(std::move(acc));
  }
  return report;
}

PowerValue mebpi_log2(const GameTree& tree, const NodeId& voter, int local_cap) {
  const int vi = require_voter(tree, voter);
  Log2CountTable counts = count_recursive_log2(tree, local_cap);
  Log2Value acc = Log2Value::one();
  for (int i = vi; tree.node(i).parent >= 0; i = tree.node(i).parent)
    acc *= local_ebpi_value_log2(tree, i, counts, local_cap);
  return PowerValue::from_log2(acc);
}

PowerReport mebpi_all_log2(const GameTree& tree, int local_cap) {
  Log2CountTable counts = count_recursive_log2(tree, local_cap);
  std::vector<std::optional<Log2Value>> memo(tree.node_count());
  PowerReport report;
  report.method = Method::kMebpi;
  for (int v : tree.voters()) {
    Log2Value acc = Log2Value::one();
    for (int i = v; tree.node(i).parent >= 0; i = tree.node(i).parent) {
      if (!memo[i]) memo[i] = local_ebpi_value_log2(tree, i, counts, local_cap);
      acc *= *memo[i];
    }
    report.values[tree.node(v).id] = PowerValue::from_log2(acc);
  }
  return report;
}

namespace {

template <class LeafFn>
bool eval_buffered(const GameTree& tree, std::vector<char>& value, LeafFn&& leaf) {
  for (int i = tree.node_count() - 1; i >= 0; --i) {
    const TreeNode& nd = tree.node(i);
    if (nd.children.empty())
      value[i] = leaf(tree.voter_position(i)) ? 1 : 0;
    else
      value[i] = nd.rule->wins_by([&](int j) { return value[nd.children[j]] != 0; }) ? 1 : 0;
  }
  return value[0] != 0;
}

}  // namespace

SampleEstimate bpi_sample(const GameTree& tree, const NodeId& voter,
                          std::uint64_t samples, std::uint64_t seed) {
  tree.require_valid();
  if (samples < 1) throw DomainError("need at least one sample");
  const int vi = require_voter(tree, voter);
  const int vp = tree.voter_position(vi);
  const std::size_t n = tree.voters().size();

  std::mt19937_64 rng(seed);
  std::vector<char> value(tree.node_count(), 0);
  std::uint64_t swings = 0;

  if (n <= 63) {
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    const std::uint64_t vbit = std::uint64_t{1} << vp;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const std::uint64_t draw = rng() & all & ~vbit;
      const bool with = eval_buffered(tree, value,
                                      [&](int p) { return ((draw | vbit) >> p & 1) != 0; });
      const bool without = eval_buffered(tree, value, [&](int p) { return (draw >> p & 1) != 0; });
      if (with && !without) ++swings;
    }
  } else {
    Coalition draw(n);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (std::size_t w = 0; w < draw.word_count(); ++w) draw.word(w) = rng();
      draw.clamp();
      draw.set(vp, false);
      const bool without = eval_buffered(tree, value, [&](int p) { return draw.test(p); });
      draw.set(vp, true);
      const bool with = eval_buffered(tree, value, [&](int p) { return draw.test(p); });
      if (with && !without) ++swings;
    }
  }
  SampleEstimate e;
  e.swings = swings;
  e.samples = samples;
  e.seed = seed;
  e.halfwidth95 = hoeffding_halfwidth95(samples);
  return e;
}

PowerReport bpi_sample_all(const GameTree& tree, std::uint64_t samples, std::uint64_t seed) {
  tree.require_valid();
  PowerReport report;
  report.method = Method::kSample;
  report.sampling = SampleInfo{samples, seed, hoeffding_halfwidth95(samples)};
  for (int v : tree.voters()) {
    const NodeId& id = tree.node(v).id;
    // Each voter gets its own deterministic stream, offset by position.
    SampleEstimate e = bpi_sample(tree, id, samples,
                                  seed + static_cast<std::uint64_t>(tree.voter_position(v)));
    report.values[id] = PowerValue::from_rational(e.estimate_exact());
  }
  return report;
}

Method choose_method(const GameTree& tree, int naive_cap, int local_cap) {
  tree.require_valid();
  (void)naive_cap;
  if (tree.node_count() == 1) return Method::kNaive;
  if (tree.is_flat()) {
    const LocalRule& r = *tree.node(tree.root()).rule;
    return closed_form_applies(r) ? Method::kLemma1 : Method::kNaive;
  }
  bool balanced = false;
  try {
    balanced = is_balanced_local(tree, local_cap);
  } catch (const CapExceededError&) {
    balanced = false;  // cannot certify balance; use the exact path
  }
  return balanced ? Method::kMbpi : Method::kMebpi;
}

}  // namespace hvg
