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

#include "hvg/counting.hpp"
#include "hvg/game.hpp"
#include "hvg/numerics.hpp"

namespace hvg {

enum class Method { kNaive, kLemma1, kMbpi, kMebpi, kSample };

// The serialized tag: "naive", "lemma1", "mbpi", "mebpi", "sample".
const char* method_name(Method m);
Method method_from_name(const std::string& name);

// A power value in [0, 1]. Exact values carry a reduced rational; log-space
// results only carry the base-2 logarithm and are flagged inexact.
struct PowerValue {
  Rational exact;    // meaningful when is_exact
  Log2Value approx;  // always usable
  bool is_exact = true;

  static PowerValue from_rational(Rational r);
  static PowerValue from_log2(Log2Value v);
  double to_double() const;
  std::string decimal(int sig_figs = 6) const;  // correctly rounded rendering
  std::string fraction() const;                 // exact values only
};

struct SampleInfo {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double halfwidth95 = 0.0;
};

struct PowerReport {
  Method method = Method::kNaive;
  std::map<NodeId, PowerValue> values;
  std::optional<SampleInfo> sampling;
};

struct SampleEstimate {
  std::uint64_t swings = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double halfwidth95 = 0.0;

  Rational estimate_exact() const;
  double estimate() const;
};

// 95% confidence half-width sqrt(ln(2/0.05) / (2*samples)).
double hoeffding_halfwidth95(std::uint64_t samples);

// Fraction of coalitions of the other voters that win with this voter and
// lose without: exact, by enumerating all of them.
PowerValue bpi_naive(const GameTree& tree, const NodeId& voter,
                     int naive_cap = kDefaultNaiveCap);
PowerReport bpi_naive_all(const GameTree& tree, int naive_cap = kDefaultNaiveCap);

// Closed form for a voter in an equal-weight majority over n voters:
// C(n-1, floor((n-1)/2)) / 2^(n-1). Holds for both parities under the
// ties-win reading of the threshold.
PowerValue bpi_equal_weight_majority(std::uint64_t n);

// Power of a child within its parent's one-node game. Equal-weight
// majorities without a tie-breaker take the closed form at any arity;
// everything else sweeps the sibling subsets (capped).
PowerValue local_bpi(const GameTree& tree, const NodeId& child,
                     int local_cap = kDefaultLocalCap);

// Product of local_bpi along the root-to-voter path; the root contributes 1.
// Exact for balanced trees; on unbalanced trees it is only a heuristic.
PowerValue mbpi(const GameTree& tree, const NodeId& voter,
                int local_cap = kDefaultLocalCap);
PowerReport mbpi_all(const GameTree& tree, int local_cap = kDefaultLocalCap);

// Like local_bpi, but each sibling pattern is weighted by the number of leaf
// coalitions realizing it (the siblings' win/loss counts):
//   numerator   = sum over sibling subsets S of
//                 (chi(S + child) - chi(S)) * prod_j (W_j if j in S else L_j)
//   denominator = 2^(k-1) * prod_j 2^(leaves_under(j) - 1)
// When every sibling subtree is balanced the products cancel and this equals
// local_bpi.
PowerValue local_ebpi(const GameTree& tree, const NodeId& child, const CountTable& counts,
                      int local_cap = kDefaultLocalCap);

// Exact power on any monotone tree: one counting pass, then the product of
// local_ebpi along the root-to-voter path. mebpi_all shares the counting
// pass and memoizes the per-edge values, so the whole-game cost stays
// O(nodes * 2^children) rather than voters * that.
PowerValue mebpi(const GameTree& tree, const NodeId& voter,
                 int local_cap = kDefaultLocalCap);
PowerReport mebpi_all(const GameTree& tree, int local_cap = kDefaultLocalCap);

// Same two passes carried in log space for games whose counts overflow any
// reasonable exact budget; results are flagged approximate.
PowerValue mebpi_log2(const GameTree& tree, const NodeId& voter,
                      int local_cap = kDefaultLocalCap);
PowerReport mebpi_all_log2(const GameTree& tree, int local_cap = kDefaultLocalCap);

// Monte Carlo estimate: samples subsets of the other voters uniformly with a
// seeded generator; same seed, same inputs => identical output.
SampleEstimate bpi_sample(const GameTree& tree, const NodeId& voter,
                          std::uint64_t samples, std::uint64_t seed);
PowerReport bpi_sample_all(const GameTree& tree, std::uint64_t samples, std::uint64_t seed);

// Routing used by the CLI's auto mode: flat games go to the naive counter
// (or the closed form when the rule is an equal-weight majority); trees whose
// every local rule is balanced go to mbpi; everything else goes to mebpi.
Method choose_method(const GameTree& tree, int naive_cap = kDefaultNaiveCap,
                     int local_cap = kDefaultLocalCap);

}  // namespace hvg
