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
#include <string>
#include <vector>

#include "hvg/game.hpp"
#include "hvg/numerics.hpp"

namespace hvg {

// How internal nodes of a generated tree decide.
enum class RuleStyle {
  kMajority,        // equal weights, majority quota
  kSupermajority,   // equal weights, quota = ceil(fraction * children)
  kRandomQuota,     // weights drawn from [1,9], quota drawn from [1, total]
  kRandomTable,     // random minimal winning family (narrow nodes only)
  kRandomMix,       // per node: random quota or random table
};

// Accepts "majority", "supermajority", "supermajority:3/4", "supermajority:0.6",
// "quota", "table", "random".
RuleStyle rule_style_from_name(const std::string& name, Rational* fraction);

struct GenSpec {
  int leaves = 0;
  int branching = 0;  // maximum children per internal node
  int depth = 0;      // maximum root-to-leaf edge count
  RuleStyle style = RuleStyle::kMajority;
  Rational supermajority_fraction = Rational(3, 4);
  std::uint64_t seed = 0;
};

// Deterministic: the same spec always yields the same tree. The shape is a
// near-even split of the leaves that fits within the branching/depth budget,
// so a majority-style spec is fully determined by (leaves, branching, depth).
GameTree generate(const GenSpec& spec);

// One timed (or refused) instance of one method on one generated tree.
struct TimingRow {
  GenSpec spec;
  int voters = 0;
  std::string method;
  double median_ms = -1.0;  // -1 when the method refused the instance
  double iqr_ms = 0.0;
  bool refused = false;
};

struct RuntimeResult {
  std::vector<TimingRow> rows;
  double speedup_naive_over_mebpi = 0.0;  // at the largest size all methods ran
  bool naive_monotone = true;             // naive time nondecreasing in size
  bool large_probe_refused_naive = false;
  double mebpi_doubling_factor = 0.0;     // time(2n) / time(n) on the scale probes
  double mebpi_largest_ms = 0.0;
  std::string summary;
};

// Times exhaustive vs. hierarchy-aware evaluation over a ladder of binary
// majority trees, then probes sizes only the recursive method can touch.
// When out_dir is nonempty, writes runtime_plot.csv and runtime_records.csv.
RuntimeResult run_runtime_experiment(const std::string& out_dir);

struct MseRow {
  GenSpec spec;
  int voters = 0;
  Rational mbpi_mse;
  Rational mebpi_mse;
};

struct MseResult {
  std::vector<MseRow> rows;
  int mbpi_nonzero = 0;
  int mebpi_nonzero = 0;
  std::string summary;
};

// Exact mean squared error of the path-product heuristic and of the recursive
// method against exhaustive enumeration, per instance. Every spec must stay
// within the exhaustive cap. Writes mse_records.csv when out_dir is nonempty.
MseResult run_mse_experiment(const std::vector<GenSpec>& specs, const std::string& out_dir);

// Supermajority-3/4 instances over mixed small shapes of depth >= 2.
std::vector<GenSpec> default_mse_specs(int instances = 500);

// Per-tier influence of one voter in a three-tier council system, with the
// printable strings the reporting pipeline produces for each cell.
struct CouncilRow {
  std::string municipality;
  std::uint64_t electorate = 0;  // voters electing one local councillor
  int council_size = 0;          // members of the municipal council
  int national_size = 0;         // members of the national council
  std::string voter_factor;      // influence on the local councillor
  std::string council_factor;    // councillor's influence in the council
  std::string national_factor;   // national councillor's influence
  std::string product;           // end-to-end influence, from the printed factors
  Rational exact_product;        // same product before any rounding
};

struct CaseStudyResult {
  CouncilRow velenje;
  CouncilRow ljubljana;
  Rational ratio;            // velenje product over ljubljana product
  std::string ratio_string;
  std::string summary;
};

// Compares one voter's end-to-end influence in the smallest and largest
// municipality of the Slovenian local-interests electoral hierarchy.
// Writes slovenia_table.txt and slovenia_cells.json when out_dir is nonempty.
CaseStudyResult run_slovenia_case_study(const std::string& out_dir);

// The full two-municipality hierarchy as a game tree: every Velenje and
// Ljubljana voter is a leaf; the remaining 38 national councillors are
// modelled as direct leaves of the national council.
GameTree build_slovenia_tree();

}  // namespace hvg
