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

#include "hvg/counting.hpp"

#include <bit>
#include <string>

namespace hvg {

namespace {

void check_local_cap(const TreeNode& nd, int local_cap) {
  int k = static_cast<int>(nd.children.size());
  if (local_cap > 62) local_cap = 62;  // subset masks live in one word
  if (k > local_cap)
    throw CapExceededError("node '" + nd.id + "' has " + std::to_string(k) +
                           " children; exact subset sweeps cap at " +
                           std::to_string(local_cap));
}

}  // namespace

TruthTable build_truth_table(const GameTree& tree, int naive_cap) {
  tree.require_valid();
  const int n = static_cast<int>(tree.voters().size());
  if (n > naive_cap || n > 62)
    throw CapExceededError("game has " + std::to_string(n) +
                           " voters; whole-game enumeration caps at " +
                           std::to_string(naive_cap < 62 ? naive_cap : 62));
  TruthTable tt;
  tt.voters = n;
  tt.outcome.resize(std::size_t{1} << n);
  std::vector<char> value(tree.node_count(), 0);
  for (std::uint64_t mask = 0; mask < tt.outcome.size(); ++mask) {
    for (int i = tree.node_count() - 1; i >= 0; --i) {
      const TreeNode& nd = tree.node(i);
      if (nd.children.empty())
        value[i] = mask >> tree.voter_position(i) & 1;
      else
        value[i] = nd.rule->wins_by([&](int j) { return value[nd.children[j]] != 0; }) ? 1 : 0;
    }
    tt.outcome[mask] = value[0];
  }
  return tt;
}

CountPair count_naive(const GameTree& tree, int naive_cap) {
  TruthTable tt = build_truth_table(tree, naive_cap);
  unsigned long wins = 0;
  for (char c : tt.outcome) wins += c;
  CountPair out;
  out.wins = wins;
  out.losses = pow2(tt.voters) - out.wins;
  return out;
}

namespace {

struct ExactOps {
  using Num = BigNat;
  static Num one() { return BigNat(1); }
  static Num zero() { return BigNat(0); }
  static Num from_pow2(unsigned long e) { return pow2(e); }
  static void mul(Num& a, const Num& b) { a *= b; }
  static void div(Num& a, const Num& b) {
    mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  static void add(Num& a, const Num& b) { a += b; }
};

struct Log2Ops {
  using Num = Log2Value;
  static Num one() { return Log2Value::one(); }
  static Num zero() { return Log2Value::zero_value(); }
  static Num from_pow2(unsigned long e) { return Log2Value::from_pow2(e); }
  static void mul(Num& a, const Num& b) { a *= b; }
  static void div(Num& a, const Num& b) { a /= b; }
  static void add(Num& a, const Num& b) { a += b; }
};

// Does this majority rule decide every subset without consulting a
// tie-breaker or hitting a tie at all? Equal weights with odd arity can
// never split evenly; a designated tie-breaker resolves even splits
// symmetrically. Both keep the rule balanced.
bool majority_balance_shortcut(const LocalRule& r) {
  if (!r.is_majority()) return false;
  if (r.equal_weights() && r.child_count() % 2 == 1) return true;
  return r.tie_breaker() >= 0;
}

// One bottom-up pass filling per-node win/loss multiplicities. balanced[i]
// tracks whether node i's whole subtree flips its outcome under coalition
// complement, which lets equal-split majorities above skip their sweep.
template <class Ops>
void count_tree(const GameTree& tree, int local_cap,
                std::vector<typename Ops::Num>& wins,
                std::vector<typename Ops::Num>& losses,
                std::vector<char>& balanced) {
  using Num = typename Ops::Num;
  const int n = tree.node_count();
  wins.assign(n, Ops::zero());
  losses.assign(n, Ops::zero());
  balanced.assign(n, 0);

  for (int i = n - 1; i >= 0; --i) {
    const TreeNode& nd = tree.node(i);
    if (nd.children.empty()) {
      wins[i] = Ops::one();
      losses[i] = Ops::one();
      balanced[i] = 1;
      continue;
    }
    const LocalRule& r = *nd.rule;
    const int k = static_cast<int>(nd.children.size());
    bool kids_balanced = true;
    for (int c : nd.children) kids_balanced = kids_balanced && balanced[c];

    if (kids_balanced && majority_balance_shortcut(r)) {
      wins[i] = Ops::from_pow2(tree.leaves_under_count(i) - 1);
      losses[i] = wins[i];
      balanced[i] = 1;
      continue;
    }

    check_local_cap(nd, local_cap);
    const bool weighted = !r.is_table();
    const std::uint64_t full = (std::uint64_t{1} << k) - 1;
    const int tb = r.tie_breaker();

    // Gray-code sweep: each step flips one child in/out, so the running
    // product of (wins or losses over the children) updates with one multiply
    // and one exact divide, and weighted rules keep a running weight sum.
    Num prod = Ops::one();
    for (int c : nd.children) Ops::mul(prod, losses[c]);
    std::uint64_t mask = 0;
    std::uint64_t twice_sum = 0;
    Num node_wins = Ops::zero();
    Num node_losses = Ops::zero();
    bool local_balanced = true;

    auto weighted_outcome = [&](std::uint64_t sum, bool tb_in) {
      if (tb >= 0 && sum == r.twice_quota()) return tb_in;
      return sum >= r.twice_quota();
    };
    auto visit = [&]() {
      bool win, comp_win;
      if (weighted) {
        bool tb_in = tb >= 0 && (mask >> tb & 1);
        win = weighted_outcome(twice_sum, tb_in);
        comp_win = weighted_outcome(r.twice_total_weight() - twice_sum, tb >= 0 && !tb_in);
      } else {
        win = r.wins_mask(mask);
        comp_win = r.wins_mask(full ^ mask);
      }
      local_balanced = local_balanced && (win != comp_win);
      Ops::add(win ? node_wins : node_losses, prod);
    };

    visit();
    for (std::uint64_t g = 1; g <= full; ++g) {
      const int b = std::countr_zero(g);
      const std::uint64_t bit = std::uint64_t{1} << b;
      const int c = nd.children[b];
      mask ^= bit;
      if (mask & bit) {
        if (weighted) twice_sum += 2 * r.weights()[b];
        Ops::mul(prod, wins[c]);
        Ops::div(prod, losses[c]);
      } else {
        if (weighted) twice_sum -= 2 * r.weights()[b];
        Ops::mul(prod, losses[c]);
        Ops::div(prod, wins[c]);
      }
      visit();
    }

    wins[i] = std::move(node_wins);
    losses[i] = std::move(node_losses);
    balanced[i] = kids_balanced && local_balanced ? 1 : 0;
  }
}

}  // namespace

CountTable count_recursive(const GameTree& tree, int local_cap) {
  tree.require_valid();
  std::vector<BigNat> wins, losses;
  std::vector<char> balanced;
  count_tree<ExactOps>(tree, local_cap, wins, losses, balanced);
  CountTable out(tree.node_count());
  for (int i = 0; i < tree.node_count(); ++i) {
    out[i].wins = std::move(wins[i]);
    out[i].losses = std::move(losses[i]);
  }
  out.set_balanced(std::move(balanced));
  return out;
}

Log2CountTable count_recursive_log2(const GameTree& tree, int local_cap) {
  tree.require_valid();
  std::vector<Log2Value> wins, losses;
  std::vector<char> balanced;
  count_tree<Log2Ops>(tree, local_cap, wins, losses, balanced);
  Log2CountTable out(tree.node_count());
  for (int i = 0; i < tree.node_count(); ++i) {
    out[i].wins = wins[i];
    out[i].losses = losses[i];
  }
  out.set_balanced(std::move(balanced));
  return out;
}

bool is_balanced_exhaustive(const GameTree& tree, int naive_cap) {
  TruthTable tt = build_truth_table(tree, naive_cap);
  const std::uint64_t full = (std::uint64_t{1} << tt.voters) - 1;
  for (std::uint64_t mask = 0; mask < tt.outcome.size(); ++mask)
    if (tt.outcome[mask] == tt.outcome[full ^ mask]) return false;
  return true;
}

bool is_rule_balanced(const LocalRule& rule, int local_cap) {
  if (majority_balance_shortcut(rule)) return true;
  if (rule.is_majority() && rule.equal_weights() && rule.tie_breaker() < 0)
    return false;  // even arity, equal weights: any even split ties both ways
  const int k = rule.child_count();
  if (local_cap > 62) local_cap = 62;
  if (k > local_cap)
    throw CapExceededError("rule has " + std::to_string(k) +
                           " children; balance check caps at " + std::to_string(local_cap));
  const std::uint64_t full = (std::uint64_t{1} << k) - 1;
  for (std::uint64_t mask = 0; mask <= full; ++mask)
    if (rule.wins_mask(mask) == rule.wins_mask(full ^ mask)) return false;
  return true;
}

bool is_balanced_local(const GameTree& tree, int local_cap) {
  tree.require_valid();
  for (int i = 0; i < tree.node_count(); ++i)
    if (!tree.is_leaf(i) && !is_rule_balanced(*tree.node(i).rule, local_cap)) return false;
  return true;
}

CountPair majority_counts_closed_form(std::uint64_t n) {
  if (n == 0 || n % 2 == 0)
    throw DomainError("closed-form majority counts need odd arity");
  CountPair out;
  out.wins = pow2(n - 1);
  out.losses = out.wins;
  return out;
}

}  // namespace hvg
