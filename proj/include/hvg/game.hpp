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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hvg/errors.hpp"

namespace hvg {

using NodeId = std::string;

// A subset of an ordered member list, as a bitset.
class Coalition {
 public:
  explicit Coalition(std::size_t width)
      : width_(width), words_((width + 63) / 64, 0) {}

  static Coalition from_mask(std::size_t width, std::uint64_t mask) {
    Coalition c(width);
    if (width > 0) c.words_[0] = width >= 64 ? mask : (mask & ((1ull << width) - 1));
    return c;
  }

  std::size_t width() const { return width_; }
  bool test(std::size_t i) const { return words_[i / 64] >> (i % 64) & 1; }
  void set(std::size_t i, bool v = true) {
    std::uint64_t bit = 1ull << (i % 64);
    if (v) words_[i / 64] |= bit; else words_[i / 64] &= ~bit;
  }
  std::uint64_t& word(std::size_t w) { return words_[w]; }
  std::size_t word_count() const { return words_.size(); }
  // Zeroes any bits past width in the last word.
  void clamp() {
    if (width_ % 64 != 0 && !words_.empty())
      words_.back() &= (1ull << (width_ % 64)) - 1;
  }

 private:
  std::size_t width_;
  std::vector<std::uint64_t> words_;
};

enum class RuleKind { kQuota, kMajority, kTable };

// The decision rule a single internal node applies to its children. Weighted
// quotas are stored doubled so "at least half the total weight" stays exact
// for odd totals. A majority rule may name one child as tie-breaker: a
// coalition hitting exactly half the weight wins iff that child is in it;
// without a tie-breaker, exact ties win (literal >=).
class LocalRule {
 public:
  static LocalRule quota_rule(std::vector<std::uint64_t> weights, std::uint64_t quota);
  // For half-integral thresholds: pass 2*quota.
  static LocalRule quota_rule_doubled(std::vector<std::uint64_t> weights,
                                      std::uint64_t twice_quota);
  static LocalRule majority_rule(std::vector<std::uint64_t> weights, int tie_breaker = -1);
  // Sets are bitmasks over child positions. The first form treats them as the
  // minimal winning family (dominated entries are dropped); the second takes
  // the full winning family, whose upward-closure validate() will check.
  static LocalRule table_rule(std::vector<std::uint64_t> minimal_sets, int child_count);
  static LocalRule table_rule_explicit(std::vector<std::uint64_t> winning_sets,
                                       int child_count);

  RuleKind kind() const { return kind_; }
  int child_count() const { return child_count_; }
  const std::vector<std::uint64_t>& weights() const { return weights_; }
  std::uint64_t twice_quota() const { return twice_quota_; }
  std::uint64_t twice_total_weight() const { return twice_total_; }
  int tie_breaker() const { return tie_breaker_; }
  bool declared_minimal() const { return declared_minimal_; }
  const std::vector<std::uint64_t>& declared_sets() const { return declared_; }
  const std::vector<std::uint64_t>& minimal_winning() const { return minimal_; }

  bool is_table() const { return kind_ == RuleKind::kTable; }
  bool is_majority() const { return kind_ == RuleKind::kMajority; }
  bool equal_weights() const;

  // Evaluate on a subset of child positions (child_count <= 63).
  bool wins_mask(std::uint64_t mask) const;

  // Evaluate with a child-position predicate; works at any arity for
  // weighted rules.
  template <class ValueFn>
  bool wins_by(ValueFn&& value) const {
    if (kind_ == RuleKind::kTable) {
      std::uint64_t mask = 0;
      for (int j = 0; j < child_count_; ++j)
        if (value(j)) mask |= 1ull << j;
      return wins_mask(mask);
    }
    std::uint64_t twice_sum = 0;
    bool tb_in = false;
    for (int j = 0; j < child_count_; ++j)
      if (value(j)) {
        twice_sum += 2 * weights_[j];
        if (j == tie_breaker_) tb_in = true;
      }
    if (tie_breaker_ >= 0 && twice_sum == twice_quota_) return tb_in;
    return twice_sum >= twice_quota_;
  }

 private:
  LocalRule() = default;

  RuleKind kind_ = RuleKind::kMajority;
  int child_count_ = 0;
  std::vector<std::uint64_t> weights_;
  std::uint64_t twice_quota_ = 0;
  std::uint64_t twice_total_ = 0;
  int tie_breaker_ = -1;
  std::vector<std::uint64_t> declared_;
  std::vector<std::uint64_t> minimal_;
  bool declared_minimal_ = true;
};

struct TreeNode {
  NodeId id;
  int parent = -1;       // -1 at the root
  int pos_in_parent = -1;
  std::vector<int> children;
  std::optional<LocalRule> rule;  // engaged exactly at internal nodes
};

struct Violation {
  std::string code;
  NodeId node;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Build-time description of one node's rule, with children named by id.
struct RuleSpec {
  RuleKind kind = RuleKind::kMajority;
  std::vector<std::pair<NodeId, std::uint64_t>> weights;  // order kept as given
  // Majority rules may skip the weight list entirely: every child weighs 1.
  // Keeps documents for very wide nodes (tens of thousands of children) flat.
  bool unit_weights = false;
  std::uint64_t twice_quota = 0;                          // quota rules only
  std::optional<NodeId> tie_breaker;                      // majority rules only
  std::vector<std::vector<NodeId>> winning_sets;          // table rules only
  bool sets_are_minimal = true;
};

struct NodeSpec {
  NodeId id;
  std::optional<RuleSpec> rule;
  std::vector<NodeSpec> children;
};

// Convenience builders for hand-written trees.
NodeSpec leaf_spec(NodeId id);
NodeSpec node_spec(NodeId id, RuleSpec rule, std::vector<NodeSpec> children);
// Equal weights 1, quota = half the arity (majority).
RuleSpec equal_majority_spec(const std::vector<NodeSpec>& children,
                             std::optional<NodeId> tie_breaker = std::nullopt);
RuleSpec quota_spec(std::vector<std::pair<NodeId, std::uint64_t>> weights,
                    std::uint64_t quota);

// An immutable rooted voting structure: leaves are voters, every internal
// node aggregates its children through its LocalRule. Nodes are stored in
// document (preorder) order, so iterating backwards visits children before
// parents. Construction never throws on bad structure; problems are kept for
// validate() so a caller can show all of them at once.
class GameTree {
 public:
  static GameTree from_spec(const NodeSpec& root);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int root() const { return 0; }
  const TreeNode& node(int i) const { return nodes_[i]; }
  int index_of(const NodeId& id) const;      // -1 when unknown
  int require_node(const NodeId& id) const;  // DomainError when unknown
  bool is_leaf(int i) const { return nodes_[i].children.empty(); }

  // Leaf node indices in document order; Coalitions are indexed by position
  // in this list.
  const std::vector<int>& voters() const { return voters_; }
  int voter_position(int node_index) const { return voter_pos_[node_index]; }
  int leaves_under_count(int i) const { return leaves_under_[i]; }
  int depth() const { return depth_; }           // edges, longest root-leaf path
  int max_branching() const { return max_branching_; }
  bool is_flat() const { return depth_ == 1; }   // one rule node over voters

  ValidationReport validate() const;
  void require_valid() const;  // ValidationError carrying the report text

  // Proper ancestors of a node, root first.
  std::vector<NodeId> ancestors(const NodeId& id) const;
  // Leaf ids under a node, document order; a leaf yields itself.
  std::vector<NodeId> leaves_under(const NodeId& id) const;
  // The depth-1 game formed by one internal node and its children as voters.
  GameTree local_subgame(const NodeId& internal) const;
  // The full subtree rooted at a node, as its own game.
  GameTree subgame(const NodeId& id) const;

  // One node's rule applied to a subset of its children (by child position).
  bool eval_local(const NodeId& internal, const Coalition& children_in) const;
  // Full bottom-up evaluation on a coalition of voters.
  bool eval_implicit(const Coalition& voters_in) const;
  // Same, with the coalition packed in one word (voter count <= 63 only).
  bool eval_voter_mask(std::uint64_t mask) const;

 private:
  GameTree() = default;
  int add_subtree(const NodeSpec& spec, int parent, int pos_in_parent);
  NodeSpec to_spec(int index) const;

  std::vector<TreeNode> nodes_;
  std::map<NodeId, int> index_;
  std::vector<int> voters_;
  std::vector<int> voter_pos_;
  std::vector<int> leaves_under_;
  int depth_ = 0;
  int max_branching_ = 0;
  std::vector<Violation> build_issues_;
};

}  // namespace hvg
