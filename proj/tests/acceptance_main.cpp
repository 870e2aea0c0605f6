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

// End-to-end checks for the whole engine, one line of output per criterion.
// Each criterion is independent; a failure prints what went wrong and the
// binary exits nonzero after the full list has run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hvg/bench.hpp"
#include "hvg/counting.hpp"
#include "hvg/errors.hpp"
#include "hvg/game.hpp"
#include "hvg/indices.hpp"
#include "hvg/io.hpp"

using namespace hvg;

namespace {

int g_failures = 0;

template <class Fn>
void criterion(int index, const std::string& label, Fn&& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    detail = body();
    ok = detail.empty();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %2d. %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", index, label.c_str(), secs,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string check_slovenia() {
  CaseStudyResult r = run_slovenia_case_study("");
  std::ostringstream bad;
  auto expect = [&](const std::string& got, const char* want, const char* cell) {
    if (got != want) bad << cell << " printed " << got << " instead of " << want << "; ";
  };
  expect(r.velenje.voter_factor, "0.00796", "velenje voter");
  expect(r.velenje.council_factor, "0.13995", "velenje council");
  expect(r.velenje.national_factor, "0.12537", "velenje national");
  expect(r.velenje.product, "0.00013966", "velenje product");
  expect(r.ljubljana.voter_factor, "0.00312858", "ljubljana voter");
  expect(r.ljubljana.council_factor, "0.119604", "ljubljana council");
  expect(r.ljubljana.product, "0.00004691", "ljubljana product");
  if (r.ratio < Rational(297, 100) || r.ratio > Rational(299, 100))
    bad << "ratio " << r.ratio_string << " outside [2.97, 2.99]; ";
  return bad.str();
}

std::string check_recursive_oracle() {
  long voters_checked = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    GameTree t = hvgtest::random_tree(seed, 16, 4);
    PowerReport truth = bpi_naive_all(t);
    PowerReport rec = mebpi_all(t);
    for (const auto& [id, want] : truth.values) {
      ++voters_checked;
      if (rec.values.at(id).exact != want.exact)
        return "seed " + std::to_string(seed) + " voter " + id + ": recursive " +
               rec.values.at(id).fraction() + " vs enumeration " + want.fraction();
    }
  }
  if (voters_checked < 1000) return "too few voters exercised";
  return "";
}

std::string check_balanced_trees() {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    GameTree t = hvgtest::random_balanced_tree(seed, 16, 3);
    if (!is_balanced_local(t)) return "seed " + std::to_string(seed) + " generated unbalanced";
    PowerReport truth = bpi_naive_all(t);
    PowerReport product = mbpi_all(t);
    PowerReport rec = mebpi_all(t);
    for (const auto& [id, want] : truth.values) {
      if (product.values.at(id).exact != want.exact)
        return "seed " + std::to_string(seed) + " voter " + id + ": path product " +
               product.values.at(id).fraction() + " vs " + want.fraction();
      if (rec.values.at(id).exact != want.exact)
        return "seed " + std::to_string(seed) + " voter " + id + ": recursion " +
               rec.values.at(id).fraction() + " vs " + want.fraction();
    }
  }
  return "";
}

std::string check_flat_local_index() {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    GameTree t = hvgtest::random_flat(seed, 12);
    CountTable counts = count_recursive(t);
    for (int vi : t.voters()) {
      const NodeId& id = t.node(vi).id;
      if (local_ebpi(t, id, counts).exact != bpi_naive(t, id).exact)
        return "seed " + std::to_string(seed) + " voter " + id;
    }
  }
  return "";
}

std::string check_closed_form() {
  for (int n = 1; n <= 20; ++n) {
    GameTree t = hvgtest::flat_majority(n);
    Rational want = bpi_equal_weight_majority(static_cast<std::uint64_t>(n)).exact;
    PowerReport truth = bpi_naive_all(t);
    for (const auto& [id, v] : truth.values)
      if (v.exact != want)
        return "n=" + std::to_string(n) + " voter " + id + ": closed form " + to_fraction(want) +
               " vs enumeration " + v.fraction();
  }
  return "";
}

std::string check_counting() {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    GameTree t = hvgtest::random_tree(seed, 16, 4);
    CountTable counts = count_recursive(t);
    CountPair root = count_naive(t);
    if (counts.at(t.root()).wins != root.wins || counts.at(t.root()).losses != root.losses)
      return "seed " + std::to_string(seed) + ": root counts disagree with enumeration";
    for (int i = 0; i < t.node_count(); ++i) {
      BigNat total = counts.at(i).wins + counts.at(i).losses;
      if (total != pow2(static_cast<std::uint64_t>(t.leaves_under_count(i))))
        return "seed " + std::to_string(seed) + " node " + t.node(i).id +
               ": wins+losses is not 2^leaves";
    }
  }
  // The same conservation law on trees far beyond enumeration reach.
  for (int leaves : {1000, 5000, 10000}) {
    GenSpec spec{leaves, 10, leaves == 1000 ? 3 : 4, RuleStyle::kSupermajority, Rational(3, 4),
                 900u + static_cast<unsigned>(leaves / 1000)};
    GameTree big = generate(spec);
    CountTable counts = count_recursive(big);
    for (int i = 0; i < big.node_count(); ++i) {
      BigNat total = counts.at(i).wins + counts.at(i).losses;
      if (total != pow2(static_cast<std::uint64_t>(big.leaves_under_count(i))))
        return std::to_string(leaves) + "-leaf tree, node " + big.node(i).id +
               ": wins+losses is not 2^leaves";
    }
  }
  return "";
}

std::string check_runtime() {
  RuntimeResult r = run_runtime_experiment("");
  std::ostringstream bad;
  if (r.speedup_naive_over_mebpi < 10.0)
    bad << "speedup at n=16 only " << r.speedup_naive_over_mebpi << "x; ";
  if (!r.large_probe_refused_naive) bad << "enumeration was not refused at n=1000; ";
  if (r.mebpi_largest_ms >= 60000.0)
    bad << "recursion took " << r.mebpi_largest_ms / 1000.0 << " s at n=10000; ";
  return bad.str();
}

std::string check_error_sweep() {
  MseResult r = run_mse_experiment(default_mse_specs(500), "");
  std::ostringstream bad;
  if (r.mebpi_nonzero != 0)
    bad << "recursion disagreed with enumeration on " << r.mebpi_nonzero << " instances; ";
  if (r.mbpi_nonzero < 450)
    bad << "path product differed on only " << r.mbpi_nonzero << "/500 instances; ";

  GameTree worked = hvgtest::unanimity_groups_tree();
  PowerReport truth = bpi_naive_all(worked);
  for (const auto& [id, want] : truth.values) {
    Rational gap = mbpi(worked, id).exact - want.exact;
    if (gap < 0) gap = -gap;
    if (gap != Rational(9, 128))
      bad << "worked tree voter " << id << " error " << to_fraction(gap) << " not 9/128; ";
  }
  return bad.str();
}

std::string check_sampling() {
  GameTree t = hvgtest::flat_majority(15);
  const std::uint64_t seed = 20240601;
  SampleEstimate est = bpi_sample(t, "v1", 100000, seed);
  double exact = Rational(429, 2048).get_d();
  std::ostringstream bad;
  if (std::abs(est.estimate() - exact) > est.halfwidth95)
    bad << "estimate " << est.estimate() << " further than " << est.halfwidth95 << " from "
        << exact << " (seed " << seed << "); ";
  SampleEstimate rerun = bpi_sample(t, "v1", 100000, seed);
  if (rerun.swings != est.swings || rerun.samples != est.samples)
    bad << "identical seed did not reproduce identical output; ";
  return bad.str();
}

std::string check_round_trip() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "hvg_acceptance_round_trip";
  fs::create_directories(dir);
  std::string path = (dir / "game.json").string();
  for (std::uint64_t seed = 9000; seed < 9100; ++seed) {
    GameTree t = hvgtest::random_tree(seed, 14, 4);
    std::string first = serialize_game(t);
    save_game(t, path);
    GameTree back = load_game(path);
    if (serialize_game(back) != first) {
      fs::remove_all(dir);
      return "seed " + std::to_string(seed) + " changed across save/load/save";
    }
  }
  fs::remove_all(dir);
  return "";
}

}  // namespace

int main() {
  std::printf("acceptance run: exact power indices engine\n");
  criterion(1, "council case study prints its seven cells and ratio", check_slovenia);
  criterion(2, "recursion matches enumeration on 1000 random trees", check_recursive_oracle);
  criterion(3, "path product is exact on 500 balanced trees", check_balanced_trees);
  criterion(4, "count-weighted local index matches enumeration on 500 flat games",
            check_flat_local_index);
  criterion(5, "closed form matches enumeration for equal majorities up to n=20",
            check_closed_form);
  criterion(6, "counts are conserved at every node, small trees and large", check_counting);
  criterion(7, "recursion outruns enumeration and reaches 10000 voters", check_runtime);
  criterion(8, "recursion error is zero while the path product drifts", check_error_sweep);
  criterion(9, "sampling brackets the exact value and reproduces bit-for-bit", check_sampling);
  criterion(10, "documents survive save/load/save byte-identically", check_round_trip);
  if (g_failures == 0) {
    std::printf("all 10 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
