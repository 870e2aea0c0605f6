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
#include <vector>

#include "hvg/game.hpp"
#include "hvg/numerics.hpp"

namespace hvg {

// Whole-game enumeration refuses beyond this many voters by default.
inline constexpr int kDefaultNaiveCap = 24;
// Per-node subset sweeps refuse beyond this many children by default
// (HVG_MAX_LOCAL_CHILDREN in the CLI overrides, hard limit 62).
inline constexpr int kDefaultLocalCap = 25;

// How many voter coalitions make a node's subtree output 1 (wins) vs 0
// (losses). wins + losses = 2^(leaves under the node), always.
struct CountPair {
  BigNat wins;
  BigNat losses;
};

class CountTable {
 public:
  CountTable() = default;
  explicit CountTable(std::size_t n) : entries_(n) {}
  CountPair& operator[](std::size_t i) { return entries_[i]; }
  const CountPair& at(std::size_t i) const { return entries_.at(i); }
  std::size_t size() const { return entries_.size(); }
  // Whether the subtree at node i flips its outcome under coalition
  // complement (filled by count_recursive; downstream fast paths key off it).
  bool balanced(std::size_t i) const { return i < balanced_.size() && balanced_[i] != 0; }
  void set_balanced(std::vector<char> flags) { balanced_ = std::move(flags); }

 private:
  std::vector<CountPair> entries_;
  std::vector<char> balanced_;
};

struct Log2CountPair {
  Log2Value wins;
  Log2Value losses;
};

class Log2CountTable {
 public:
  Log2CountTable() = default;
  explicit Log2CountTable(std::size_t n) : entries_(n) {}
  Log2CountPair& operator[](std::size_t i) { return entries_[i]; }
  const Log2CountPair& at(std::size_t i) const { return entries_.at(i); }
  std::size_t size() const { return entries_.size(); }
  bool balanced(std::size_t i) const { return i < balanced_.size() && balanced_[i] != 0; }
  void set_balanced(std::vector<char> flags) { balanced_ = std::move(flags); }

 private:
  std::vector<Log2CountPair> entries_;
  std::vector<char> balanced_;
};

// Root outcome for every voter coalition, indexed by coalition bitmask.
struct TruthTable {
  int voters = 0;
  std::vector<char> outcome;
};

TruthTable build_truth_table(const GameTree& tree, int naive_cap = kDefaultNaiveCap);

// Root win/loss counts by enumerating all 2^n voter coalitions.
CountPair count_naive(const GameTree& tree, int naive_cap = kDefaultNaiveCap);

// Win/loss counts at every node, bottom-up: a node's counts come from one
// subset sweep over its children using the children's counts as multiplicities.
// Equal-weight majorities that cannot tie over balanced subtrees skip the
// sweep entirely (exactly half of all leaf patterns win).
CountTable count_recursive(const GameTree& tree, int local_cap = kDefaultLocalCap);

// Same recursion carried in log-space doubles instead of exact integers, for
// games whose counts are too large to keep exactly. Results are approximate.
Log2CountTable count_recursive_log2(const GameTree& tree, int local_cap = kDefaultLocalCap);

// A game is balanced when every coalition and its complement disagree on the
// outcome. The exhaustive check enumerates all coalitions; the local check
// tests each node's rule on its own children, which is sufficient for the
// whole game since composing balanced rules stays balanced.
bool is_balanced_exhaustive(const GameTree& tree, int naive_cap = kDefaultNaiveCap);
bool is_balanced_local(const GameTree& tree, int local_cap = kDefaultLocalCap);
bool is_rule_balanced(const LocalRule& rule, int local_cap = kDefaultLocalCap);

// Win/loss counts of an equal-weight majority over n voters, odd n only.
CountPair majority_counts_closed_form(std::uint64_t n);

}  // namespace hvg
