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

// Seeded tree generators shared by the unit and acceptance tests. Everything
// here is deterministic: same seed, same tree, on any platform.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hvg/game.hpp"

namespace hvgtest {

using hvg::GameTree;
using hvg::NodeId;
using hvg::NodeSpec;
using hvg::RuleKind;
using hvg::RuleSpec;

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::uint64_t below(std::uint64_t n) { return eng() % n; }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
};

namespace detail {

// Split `total` into `parts` positive summands, randomly.
inline std::vector<int> split(Rng& rng, int total, int parts) {
  std::vector<int> out(parts, 1);
  for (int extra = total - parts; extra > 0; --extra) ++out[rng.below(parts)];
  return out;
}

inline RuleSpec random_rule(Rng& rng, const std::vector<NodeSpec>& children, bool balanced_only) {
  const int k = static_cast<int>(children.size());
  if (balanced_only) {
    // A weighted majority whose total weight is odd can never tie, and
    // tie-free majorities flip under complement: balanced at any arity.
    std::vector<std::pair<NodeId, std::uint64_t>> w;
    std::uint64_t total = 0;
    for (const NodeSpec& c : children) {
      std::uint64_t wi = rng.range(1, 5);
      total += wi;
      w.emplace_back(c.id, wi);
    }
    if (total % 2 == 0) {
      ++w[0].second;
    }
    RuleSpec r;
    r.kind = RuleKind::kMajority;
    r.weights = std::move(w);
    return r;
  }
  switch (rng.below(5)) {
    case 0:
      return hvg::equal_majority_spec(children);
    case 1:  // majority with a tie-breaking child
      return hvg::equal_majority_spec(children, children[rng.below(k)].id);
    case 2: {  // supermajority at three quarters
      std::vector<std::pair<NodeId, std::uint64_t>> w;
      for (const NodeSpec& c : children) w.emplace_back(c.id, 1);
      return hvg::quota_spec(std::move(w), (3 * static_cast<std::uint64_t>(k) + 3) / 4);
    }
    case 3: {  // random weighted quota
      std::vector<std::pair<NodeId, std::uint64_t>> w;
      std::uint64_t total = 0;
      for (const NodeSpec& c : children) {
        std::uint64_t wi = rng.range(1, 5);
        total += wi;
        w.emplace_back(c.id, wi);
      }
      return hvg::quota_spec(std::move(w), rng.range(1, total));
    }
    default: {  // random winning-set table
      RuleSpec r;
      r.kind = RuleKind::kTable;
      r.sets_are_minimal = true;
      std::uint64_t full = (1ull << k) - 1;
      int draws = static_cast<int>(rng.range(1, 3));
      for (int i = 0; i < draws; ++i) {
        std::uint64_t mask = 1 + rng.below(full);
        std::vector<NodeId> ids;
        for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1)
          ids.push_back(children[std::countr_zero(rest)].id);
        r.winning_sets.push_back(std::move(ids));
      }
      return r;
    }
  }
}

inline NodeSpec random_subtree(Rng& rng, int leaves, int depth_left, bool balanced_only,
                               int& next_voter, int& next_group) {
  if (leaves == 1 || depth_left == 0)
    return hvg::leaf_spec("v" + std::to_string(next_voter++));
  int k = 2 + static_cast<int>(rng.below(3));  // 2..4 children
  k = std::min(k, leaves);
  NodeSpec node;
  node.id = "g" + std::to_string(next_group++);
  for (int part : split(rng, leaves, k))
    node.children.push_back(
        random_subtree(rng, part, depth_left - 1, balanced_only, next_voter, next_group));
  node.rule = random_rule(rng, node.children, balanced_only);
  return node;
}

inline GameTree random_tree_impl(std::uint64_t seed, int max_leaves, int max_depth,
                                 bool balanced_only) {
  Rng rng(seed);
  int leaves = static_cast<int>(rng.range(2, max_leaves));
  int next_voter = 1, next_group = 1;
  NodeSpec root =
      random_subtree(rng, leaves, std::max(1, max_depth), balanced_only, next_voter, next_group);
  GameTree tree = GameTree::from_spec(root);
  tree.require_valid();
  return tree;
}

}  // namespace detail

// Mixed-rule monotone tree: equal and tie-broken majorities, supermajorities,
// random weighted quotas, and random winning-set tables.
inline GameTree random_tree(std::uint64_t seed, int max_leaves = 16, int max_depth = 4) {
  return detail::random_tree_impl(seed, max_leaves, max_depth, false);
}

// Every local rule balanced (odd-total weighted majorities).
inline GameTree random_balanced_tree(std::uint64_t seed, int max_leaves = 16, int max_depth = 3) {
  return detail::random_tree_impl(seed, max_leaves, max_depth, true);
}

// One rule node over `max_voters` or fewer leaves, random rule style.
inline GameTree random_flat(std::uint64_t seed, int max_voters = 12) {
  Rng rng(seed);
  int n = static_cast<int>(rng.range(2, max_voters));
  std::vector<NodeSpec> leaves;
  for (int i = 1; i <= n; ++i) leaves.push_back(hvg::leaf_spec("v" + std::to_string(i)));
  NodeSpec root;
  root.id = "root";
  root.rule = detail::random_rule(rng, leaves, false);
  root.children = std::move(leaves);
  GameTree tree = GameTree::from_spec(root);
  tree.require_valid();
  return tree;
}

// The nine-voter running example: three unanimity groups under a majority
// root. Group counts are (1,7), the root counts (22,490).
inline GameTree unanimity_groups_tree() {
  std::vector<NodeSpec> groups;
  int v = 1;
  for (int g = 1; g <= 3; ++g) {
    std::vector<NodeSpec> members;
    for (int i = 0; i < 3; ++i) members.push_back(hvg::leaf_spec("v" + std::to_string(v++)));
    std::vector<std::pair<NodeId, std::uint64_t>> w;
    for (const NodeSpec& m : members) w.emplace_back(m.id, 1);
    groups.push_back(
        hvg::node_spec("g" + std::to_string(g), hvg::quota_spec(std::move(w), 3), std::move(members)));
  }
  NodeSpec root;
  root.id = "root";
  root.rule = hvg::equal_majority_spec(groups);
  root.children = std::move(groups);
  GameTree tree = GameTree::from_spec(root);
  tree.require_valid();
  return tree;
}

// Flat equal-weight majority over n voters, ids v1..vn. With one voter the
// game is that voter alone; a rule node needs at least two children.
inline GameTree flat_majority(int n) {
  if (n == 1) return GameTree::from_spec(hvg::leaf_spec("v1"));
  std::vector<NodeSpec> leaves;
  for (int i = 1; i <= n; ++i) leaves.push_back(hvg::leaf_spec("v" + std::to_string(i)));
  NodeSpec root;
  root.id = "root";
  root.rule = hvg::equal_majority_spec(leaves);
  root.children = std::move(leaves);
  GameTree tree = GameTree::from_spec(root);
  tree.require_valid();
  return tree;
}

}  // namespace hvgtest
