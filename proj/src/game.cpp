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

#include "hvg/game.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace hvg {

namespace {

// Sum of doubled weights with an overflow check; returns false on overflow.
bool twice_total_of(const std::vector<std::uint64_t>& weights, std::uint64_t* out) {
  unsigned __int128 acc = 0;
  for (std::uint64_t w : weights) acc += static_cast<unsigned __int128>(w) * 2;
  if (acc > UINT64_MAX) return false;
  *out = static_cast<std::uint64_t>(acc);
  return true;
}

std::vector<std::uint64_t> drop_dominated(std::vector<std::uint64_t> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<std::uint64_t> keep;
  for (std::uint64_t s : sets) {
    bool dominated = false;
    for (std::uint64_t t : sets)
      if (t != s && (s & t) == t) {
        dominated = true;
        break;
      }
    if (!dominated) keep.push_back(s);
  }
  return keep;
}

}  // namespace

LocalRule LocalRule::quota_rule(std::vector<std::uint64_t> weights, std::uint64_t quota) {
  if (quota > UINT64_MAX / 2) throw DomainError("quota too large");
  return quota_rule_doubled(std::move(weights), 2 * quota);
}

LocalRule LocalRule::quota_rule_doubled(std::vector<std::uint64_t> weights,
                                        std::uint64_t twice_quota) {
  LocalRule r;
  r.kind_ = RuleKind::kQuota;
  r.child_count_ = static_cast<int>(weights.size());
  r.weights_ = std::move(weights);
  if (!twice_total_of(r.weights_, &r.twice_total_))
    throw DomainError("total weight too large");
  r.twice_quota_ = twice_quota;
  return r;
}

LocalRule LocalRule::majority_rule(std::vector<std::uint64_t> weights, int tie_breaker) {
  LocalRule r;
  r.kind_ = RuleKind::kMajority;
  r.child_count_ = static_cast<int>(weights.size());
  r.weights_ = std::move(weights);
  if (!twice_total_of(r.weights_, &r.twice_total_))
    throw DomainError("total weight too large");
  r.twice_quota_ = r.twice_total_ / 2;  // threshold = half the total, doubled
  if (tie_breaker >= r.child_count_) throw DomainError("tie-breaker out of range");
  r.tie_breaker_ = tie_breaker < 0 ? -1 : tie_breaker;
  return r;
}

LocalRule LocalRule::table_rule(std::vector<std::uint64_t> minimal_sets, int child_count) {
  if (child_count > 63) throw DomainError("table rules support at most 63 children");
  LocalRule r;
  r.kind_ = RuleKind::kTable;
  r.child_count_ = child_count;
  r.declared_ = minimal_sets;
  r.declared_minimal_ = true;
  r.minimal_ = drop_dominated(std::move(minimal_sets));
  return r;
}

LocalRule LocalRule::table_rule_explicit(std::vector<std::uint64_t> winning_sets,
                                         int child_count) {
  if (child_count > 63) throw DomainError("table rules support at most 63 children");
  LocalRule r;
  r.kind_ = RuleKind::kTable;
  r.child_count_ = child_count;
  r.declared_ = winning_sets;
  r.declared_minimal_ = false;
  r.minimal_ = drop_dominated(std::move(winning_sets));
  return r;
}

bool LocalRule::equal_weights() const {
  for (std::uint64_t w : weights_)
    if (w != weights_[0]) return false;
  return true;
}

bool LocalRule::wins_mask(std::uint64_t mask) const {
  if (kind_ == RuleKind::kTable) {
    for (std::uint64_t m : minimal_)
      if ((mask & m) == m) return true;
    return false;
  }
  std::uint64_t twice_sum = 0;
  for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1)
    twice_sum += 2 * weights_[std::countr_zero(rest)];
  if (tie_breaker_ >= 0 && twice_sum == twice_quota_)
    return mask >> tie_breaker_ & 1;
  return twice_sum >= twice_quota_;
}

std::string ValidationReport::to_string() const {
  if (violations.empty()) return "ok";
  std::string out;
  for (const Violation& v : violations) {
    if (!out.empty()) out += "\n";
    out += v.code + " @ " + (v.node.empty() ? "<unnamed>" : v.node) + ": " + v.detail;
  }
  return out;
}

NodeSpec leaf_spec(NodeId id) { return NodeSpec{std::move(id), std::nullopt, {}}; }

NodeSpec node_spec(NodeId id, RuleSpec rule, std::vector<NodeSpec> children) {
  return NodeSpec{std::move(id), std::move(rule), std::move(children)};
}

RuleSpec equal_majority_spec(const std::vector<NodeSpec>&,
                             std::optional<NodeId> tie_breaker) {
  RuleSpec r;
  r.kind = RuleKind::kMajority;
  r.unit_weights = true;
  r.tie_breaker = std::move(tie_breaker);
  return r;
}

RuleSpec quota_spec(std::vector<std::pair<NodeId, std::uint64_t>> weights,
                    std::uint64_t quota) {
  RuleSpec r;
  r.kind = RuleKind::kQuota;
  r.weights = std::move(weights);
  r.twice_quota = 2 * quota;
  return r;
}

namespace {

// Turns a RuleSpec (children named by id) into a LocalRule (children named by
// position). Unresolvable references are recorded and patched with harmless
// placeholders so the tree stays navigable for validate().
LocalRule convert_rule(const RuleSpec& spec, const std::vector<NodeId>& child_ids,
                       const NodeId& node, std::vector<Violation>* issues) {
  const int k = static_cast<int>(child_ids.size());
  std::map<NodeId, int> pos;
  for (int j = 0; j < k; ++j) pos.emplace(child_ids[j], j);

  if (spec.kind == RuleKind::kTable) {
    if (k > 63) {
      issues->push_back({"table-too-wide", node,
                         "table rule over " + std::to_string(k) + " children"});
      return LocalRule::majority_rule(std::vector<std::uint64_t>(k, 1));
    }
    std::vector<std::uint64_t> sets;
    for (const auto& set : spec.winning_sets) {
      std::uint64_t mask = 0;
      for (const NodeId& id : set) {
        auto it = pos.find(id);
        if (it == pos.end()) {
          issues->push_back({"rule-child-mismatch", node,
                             "winning set names unknown child '" + id + "'"});
          continue;
        }
        mask |= 1ull << it->second;
      }
      sets.push_back(mask);
    }
    return spec.sets_are_minimal ? LocalRule::table_rule(std::move(sets), k)
                                 : LocalRule::table_rule_explicit(std::move(sets), k);
  }

  std::vector<std::uint64_t> weights(k, 1);
  if (spec.kind == RuleKind::kMajority && spec.unit_weights && spec.weights.empty()) {
    int tb = -1;
    if (spec.tie_breaker) {
      auto it = pos.find(*spec.tie_breaker);
      if (it == pos.end()) {
        issues->push_back({"rule-child-mismatch", node,
                           "tie-breaker '" + *spec.tie_breaker + "' is not a child"});
      } else {
        tb = it->second;
      }
    }
    return LocalRule::majority_rule(std::move(weights), tb);
  }
  std::vector<bool> covered(k, false);
  bool overflow = false;
  {
    unsigned __int128 acc = 0;
    for (const auto& [id, w] : spec.weights) {
      auto it = pos.find(id);
      if (it == pos.end()) {
        issues->push_back({"rule-child-mismatch", node,
                           "weight for unknown child '" + id + "'"});
        continue;
      }
      if (covered[it->second])
        issues->push_back({"rule-child-mismatch", node,
                           "duplicate weight for child '" + id + "'"});
      covered[it->second] = true;
      weights[it->second] = w;
      acc += static_cast<unsigned __int128>(w) * 2;
    }
    if (acc > UINT64_MAX) overflow = true;
  }
  for (int j = 0; j < k; ++j)
    if (!covered[j])
      issues->push_back({"rule-child-mismatch", node,
                         "no weight for child '" + child_ids[j] + "'"});
  if (overflow) {
    issues->push_back({"weight-overflow", node, "total weight exceeds 2^63"});
    weights.assign(k, 1);
  }

  if (spec.kind == RuleKind::kMajority) {
    int tb = -1;
    if (spec.tie_breaker) {
      auto it = pos.find(*spec.tie_breaker);
      if (it == pos.end()) {
        issues->push_back({"rule-child-mismatch", node,
                           "tie-breaker '" + *spec.tie_breaker + "' is not a child"});
      } else {
        tb = it->second;
      }
    }
    return LocalRule::majority_rule(std::move(weights), tb);
  }

  if (spec.tie_breaker)
    issues->push_back({"tie-breaker-on-non-majority", node,
                       "only majority rules may name a tie-breaker"});
  return LocalRule::quota_rule_doubled(std::move(weights), spec.twice_quota);
}

}  // namespace

GameTree GameTree::from_spec(const NodeSpec& root) {
  GameTree t;
  t.add_subtree(root, -1, -1);
  const int n = t.node_count();
  t.voter_pos_.assign(n, -1);
  t.leaves_under_.assign(n, 0);
  std::vector<int> node_depth(n, 0);
  for (int i = 1; i < n; ++i) node_depth[i] = node_depth[t.nodes_[i].parent] + 1;
  for (int i = n - 1; i >= 0; --i) {
    const TreeNode& nd = t.nodes_[i];
    if (nd.children.empty()) {
      t.leaves_under_[i] = 1;
    } else {
      for (int c : nd.children) t.leaves_under_[i] += t.leaves_under_[c];
      t.max_branching_ = std::max(t.max_branching_, static_cast<int>(nd.children.size()));
    }
  }
  for (int i = 0; i < n; ++i) {
    t.depth_ = std::max(t.depth_, node_depth[i]);
    if (t.nodes_[i].children.empty()) {
      t.voter_pos_[i] = static_cast<int>(t.voters_.size());
      t.voters_.push_back(i);
    }
  }
  return t;
}

int GameTree::add_subtree(const NodeSpec& spec, int parent, int pos_in_parent) {
  const int idx = node_count();
  nodes_.push_back(TreeNode{spec.id, parent, pos_in_parent, {}, std::nullopt});
  if (spec.id.empty())
    build_issues_.push_back({"empty-id", spec.id, "node without an id"});
  else if (!index_.emplace(spec.id, idx).second)
    build_issues_.push_back({"duplicate-id", spec.id, "id used by more than one node"});

  std::vector<int> kids;
  std::vector<NodeId> kid_ids;
  kids.reserve(spec.children.size());
  for (std::size_t c = 0; c < spec.children.size(); ++c) {
    kid_ids.push_back(spec.children[c].id);
    kids.push_back(add_subtree(spec.children[c], idx, static_cast<int>(c)));
  }
  nodes_[idx].children = std::move(kids);

  if (spec.rule && !spec.children.empty()) {
    nodes_[idx].rule = convert_rule(*spec.rule, kid_ids, spec.id, &build_issues_);
  } else if (spec.rule) {
    build_issues_.push_back({"leaf-rule", spec.id, "leaf node carries a rule"});
  }
  return idx;
}

int GameTree::index_of(const NodeId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int GameTree::require_node(const NodeId& id) const {
  int i = index_of(id);
  if (i < 0) throw DomainError("no node with id '" + id + "'");
  return i;
}

ValidationReport GameTree::validate() const {
  ValidationReport report;
  report.violations = build_issues_;
  for (int i = 0; i < node_count(); ++i) {
    const TreeNode& nd = nodes_[i];
    if (nd.children.empty()) continue;
    if (nd.children.size() == 1)
      report.violations.push_back({"single-child", nd.id,
                                   "internal node with a single child adds nothing"});
    if (!nd.rule) {
      report.violations.push_back({"missing-rule", nd.id, "internal node without a rule"});
      continue;
    }
    const LocalRule& r = *nd.rule;
    if (r.is_table()) {
      if (r.declared_sets().empty())
        report.violations.push_back({"full-set-losing", nd.id, "table has no winning sets"});
      for (std::uint64_t s : r.declared_sets())
        if (s == 0) {
          report.violations.push_back({"empty-set-winning", nd.id,
                                       "table marks the empty set as winning"});
          break;
        }
      if (!r.declared_minimal() && !r.declared_sets().empty()) {
        std::set<std::uint64_t> family(r.declared_sets().begin(), r.declared_sets().end());
        bool closed = true;
        for (std::uint64_t s : family) {
          for (int j = 0; j < r.child_count() && closed; ++j)
            if (!(s >> j & 1) && family.count(s | (1ull << j)) == 0) closed = false;
          if (!closed) break;
        }
        if (!closed)
          report.violations.push_back({"non-monotone-table", nd.id,
                                       "winning family is not closed under supersets"});
      }
    } else {
      for (std::size_t j = 0; j < r.weights().size(); ++j)
        if (r.weights()[j] == 0) {
          report.violations.push_back({"zero-weight", nd.id, "weights must be positive"});
          break;
        }
      if (r.kind() == RuleKind::kQuota &&
          (r.twice_quota() == 0 || r.twice_quota() > r.twice_total_weight()))
        report.violations.push_back({"quota-out-of-range", nd.id,
                                     "quota must lie in (0, total weight]"});
    }
  }
  return report;
}

void GameTree::require_valid() const {
  ValidationReport r = validate();
  if (!r.ok()) throw ValidationError(r.to_string());
}

std::vector<NodeId> GameTree::ancestors(const NodeId& id) const {
  std::vector<NodeId> up;
  for (int i = nodes_[require_node(id)].parent; i >= 0; i = nodes_[i].parent)
    up.push_back(nodes_[i].id);
  std::reverse(up.begin(), up.end());
  return up;
}

std::vector<NodeId> GameTree::leaves_under(const NodeId& id) const {
  std::vector<NodeId> out;
  std::vector<int> stack{require_node(id)};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    if (is_leaf(i)) {
      out.push_back(nodes_[i].id);
    } else {
      for (auto it = nodes_[i].children.rbegin(); it != nodes_[i].children.rend(); ++it)
        stack.push_back(*it);
    }
  }
  return out;
}

namespace {

RuleSpec rule_to_spec(const LocalRule& rule, const std::vector<NodeId>& child_ids) {
  RuleSpec spec;
  spec.kind = rule.kind();
  if (rule.is_table()) {
    std::vector<std::uint64_t> sets = rule.minimal_winning();
    std::sort(sets.begin(), sets.end());
    for (std::uint64_t mask : sets) {
      std::vector<NodeId> ids;
      for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1)
        ids.push_back(child_ids[std::countr_zero(rest)]);
      spec.winning_sets.push_back(std::move(ids));
    }
    return spec;
  }
  for (std::size_t j = 0; j < child_ids.size(); ++j)
    spec.weights.emplace_back(child_ids[j], rule.weights()[j]);
  if (rule.is_majority()) {
    if (rule.tie_breaker() >= 0) spec.tie_breaker = child_ids[rule.tie_breaker()];
  } else {
    spec.twice_quota = rule.twice_quota();
  }
  return spec;
}

}  // namespace

NodeSpec GameTree::to_spec(int index) const {
  const TreeNode& nd = nodes_[index];
  NodeSpec spec;
  spec.id = nd.id;
  std::vector<NodeId> kid_ids;
  for (int c : nd.children) {
    kid_ids.push_back(nodes_[c].id);
    spec.children.push_back(to_spec(c));
  }
  if (nd.rule) spec.rule = rule_to_spec(*nd.rule, kid_ids);
  return spec;
}

GameTree GameTree::local_subgame(const NodeId& internal) const {
  int i = require_node(internal);
  const TreeNode& nd = nodes_[i];
  if (nd.children.empty()) throw DomainError("'" + internal + "' is a leaf");
  NodeSpec spec;
  spec.id = nd.id;
  std::vector<NodeId> kid_ids;
  for (int c : nd.children) {
    kid_ids.push_back(nodes_[c].id);
    spec.children.push_back(leaf_spec(nodes_[c].id));
  }
  if (nd.rule) spec.rule = rule_to_spec(*nd.rule, kid_ids);
  return from_spec(spec);
}

GameTree GameTree::subgame(const NodeId& id) const {
  return from_spec(to_spec(require_node(id)));
}

bool GameTree::eval_local(const NodeId& internal, const Coalition& children_in) const {
  int i = require_node(internal);
  const TreeNode& nd = nodes_[i];
  if (!nd.rule) throw DomainError("'" + internal + "' has no rule");
  if (children_in.width() != nd.children.size())
    throw DomainError("coalition width does not match child count");
  return nd.rule->wins_by([&](int j) { return children_in.test(j); });
}

bool GameTree::eval_implicit(const Coalition& voters_in) const {
  if (voters_in.width() != voters_.size())
    throw DomainError("coalition width does not match voter count");
  std::vector<char> value(nodes_.size(), 0);
  for (int i = node_count() - 1; i >= 0; --i) {
    const TreeNode& nd = nodes_[i];
    if (nd.children.empty()) {
      value[i] = voters_in.test(voter_pos_[i]) ? 1 : 0;
    } else {
      if (!nd.rule) throw DomainError("'" + nd.id + "' has no rule");
      value[i] = nd.rule->wins_by([&](int j) { return value[nd.children[j]] != 0; }) ? 1 : 0;
    }
  }
  return value[0] != 0;
}

bool GameTree::eval_voter_mask(std::uint64_t mask) const {
  if (voters_.size() > 63) throw DomainError("mask evaluation needs <= 63 voters");
  std::vector<char> value(nodes_.size(), 0);
  for (int i = node_count() - 1; i >= 0; --i) {
    const TreeNode& nd = nodes_[i];
    if (nd.children.empty()) {
      value[i] = mask >> voter_pos_[i] & 1;
    } else {
      if (!nd.rule) throw DomainError("'" + nd.id + "' has no rule");
      value[i] = nd.rule->wins_by([&](int j) { return value[nd.children[j]] != 0; }) ? 1 : 0;
    }
  }
  return value[0] != 0;
}

}  // namespace hvg
