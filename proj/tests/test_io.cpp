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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "generators.hpp"
#include "hvg/counting.hpp"
#include "hvg/errors.hpp"
#include "hvg/game.hpp"
#include "hvg/indices.hpp"
#include "hvg/io.hpp"

using namespace hvg;

namespace {

const char* kMajority3 =
    "{\"format-version\":1,\"tree\":{\"id\":\"root\",\"rule\":{\"type\":\"majority\"},"
    "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"},{\"id\":\"c\"}]}}\n";

}  // namespace

TEST_CASE("format names") {
  CHECK(format_from_name("json") == OutputFormat::kJson);
  CHECK(format_from_name("table") == OutputFormat::kTableText);
  CHECK(format_from_name("table-text") == OutputFormat::kTableText);
  CHECK(format_from_name("csv") == OutputFormat::kCsv);
  CHECK_THROWS_AS(format_from_name("xml"), DomainError);
}

TEST_CASE("canonical majority document round-trips byte for byte") {
  GameTree t = parse_game(kMajority3);
  CHECK(t.voters().size() == 3);
  CHECK(t.eval_voter_mask(0b011));
  CHECK_FALSE(t.eval_voter_mask(0b001));
  CHECK(serialize_game(t) == kMajority3);
}

TEST_CASE("committed majority fixture matches the serializer") {
  std::string path = std::string(HVG_GAMES_DIR) + "/majority3.json";
  std::string bytes = read_text_file(path);
  CHECK(bytes == kMajority3);
  CHECK(serialize_game(parse_game(bytes)) == bytes);
}

TEST_CASE("quota serialization pins the key order") {
  GameTree t = GameTree::from_spec([] {
    NodeSpec root;
    root.id = "r";
    root.children = {leaf_spec("x"), leaf_spec("y"), leaf_spec("z")};
    root.rule = quota_spec({{"x", 3}, {"y", 2}, {"z", 2}}, 4);
    return root;
  }());
  const char* want =
      "{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"quota\","
      "\"weights\":{\"x\":3,\"y\":2,\"z\":2},\"quota\":4},"
      "\"children\":[{\"id\":\"x\"},{\"id\":\"y\"},{\"id\":\"z\"}]}}\n";
  CHECK(serialize_game(t) == want);
  CHECK(serialize_game(parse_game(want)) == want);
}

TEST_CASE("half-integral quotas round-trip as .5 strings") {
  const char* doc =
      "{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"quota\","
      "\"weights\":{\"a\":1,\"b\":1,\"c\":1},\"quota\":\"1.5\"},"
      "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"},{\"id\":\"c\"}]}}\n";
  GameTree t = parse_game(doc);
  // 1.5 of 3 equal votes behaves like a strict majority with ties impossible
  // to land exactly on the threshold.
  CHECK(t.eval_voter_mask(0b011));
  CHECK_FALSE(t.eval_voter_mask(0b001));
  CHECK(serialize_game(t) == doc);
}

TEST_CASE("tie breakers round-trip") {
  const char* unit =
      "{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"majority\","
      "\"tie_breaker\":\"a\"},\"children\":[{\"id\":\"a\"},{\"id\":\"b\"}]}}\n";
  GameTree t = parse_game(unit);
  CHECK(t.eval_voter_mask(0b01));        // the tie breaker alone carries a tie
  CHECK_FALSE(t.eval_voter_mask(0b10));  // the other voter alone does not
  CHECK(serialize_game(t) == unit);

  const char* weighted =
      "{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"majority\","
      "\"weights\":{\"a\":2,\"b\":1,\"c\":1},\"tie_breaker\":\"b\"},"
      "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"},{\"id\":\"c\"}]}}\n";
  CHECK(serialize_game(parse_game(weighted)) == weighted);
}

TEST_CASE("explicit unit weights canonicalize to the implicit form") {
  const char* verbose =
      "{\"format-version\":1,\"tree\":{\"id\":\"root\",\"rule\":{\"type\":\"majority\","
      "\"weights\":{\"a\":1,\"b\":1,\"c\":1}},"
      "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"},{\"id\":\"c\"}]}}\n";
  CHECK(serialize_game(parse_game(verbose)) == kMajority3);
}

TEST_CASE("winning tables serialize sorted and minimal") {
  const char* scrambled =
      "{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"table\","
      "\"minimal_winning\":[[\"b\",\"c\"],[\"a\",\"b\"]]},"
      "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"},{\"id\":\"c\"}]}}\n";
  const char* canonical =
      "{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"table\","
      "\"minimal_winning\":[[\"a\",\"b\"],[\"b\",\"c\"]]},"
      "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"},{\"id\":\"c\"}]}}\n";
  CHECK(serialize_game(parse_game(scrambled)) == canonical);
  CHECK(serialize_game(parse_game(canonical)) == canonical);
}

TEST_CASE("generated games round-trip") {
  for (std::uint64_t seed = 4000; seed < 4100; ++seed) {
    GameTree t = hvgtest::random_tree(seed, 14, 4);
    std::string once = serialize_game(t);
    GameTree back = parse_game(once);
    CHECK(serialize_game(back) == once);
    CHECK(back.node_count() == t.node_count());
  }
  for (std::uint64_t seed = 4200; seed < 4230; ++seed) {
    GameTree t = hvgtest::random_balanced_tree(seed, 12, 3);
    std::string once = serialize_game(t);
    CHECK(serialize_game(parse_game(once)) == once);
  }
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_WITH_AS(parse_game("{"),
                       doctest::Contains("not valid JSON"), ValidationError);
  CHECK_THROWS_AS(parse_game("[1,2]"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_game("{\"tree\":{\"id\":\"a\"}}"),
                       "format-version must be 1", ValidationError);
  CHECK_THROWS_AS(parse_game("{\"format-version\":2,\"tree\":{\"id\":\"a\"}}"),
                  ValidationError);
  CHECK_THROWS_WITH_AS(parse_game("{\"format-version\":1,\"tree\":{\"id\":\"a\"},\"extra\":5}"),
                       "unexpected key 'extra' in document", ValidationError);
  CHECK_THROWS_AS(parse_game("{\"format-version\":1}"), ValidationError);
}

TEST_CASE("parse rejects malformed rules") {
  auto wrap = [](const std::string& rule) {
    return "{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":" + rule +
           ",\"children\":[{\"id\":\"a\"},{\"id\":\"b\"}]}}\n";
  };
  CHECK_THROWS_AS(parse_game(wrap("{\"type\":\"ranked\"}")), ValidationError);
  // Quota rules must spell their weights out.
  CHECK_THROWS_AS(parse_game(wrap("{\"type\":\"quota\",\"quota\":1}")), ValidationError);
  // Weights must be nonnegative integers.
  CHECK_THROWS_AS(parse_game(wrap("{\"type\":\"quota\",\"weights\":{\"a\":-1,\"b\":1},\"quota\":1}")),
                  ValidationError);
  CHECK_THROWS_AS(parse_game(wrap("{\"type\":\"quota\",\"weights\":{\"a\":1.5,\"b\":1},\"quota\":1}")),
                  ValidationError);
  // Quotas are integers or exact halves, nothing finer.
  CHECK_THROWS_AS(parse_game(wrap(
                      "{\"type\":\"quota\",\"weights\":{\"a\":1,\"b\":1},\"quota\":\"16.25\"}")),
                  ValidationError);
  CHECK_THROWS_AS(parse_game(wrap(
                      "{\"type\":\"quota\",\"weights\":{\"a\":1,\"b\":1},\"quota\":true}")),
                  ValidationError);
  // tie_breaker belongs to majority rules only.
  CHECK_THROWS_AS(parse_game(wrap(
                      "{\"type\":\"quota\",\"weights\":{\"a\":1,\"b\":1},\"quota\":1,"
                      "\"tie_breaker\":\"a\"}")),
                  ValidationError);
  CHECK_THROWS_AS(parse_game(wrap("{\"type\":\"table\",\"minimal_winning\":[[\"a\"]],"
                                  "\"tie_breaker\":\"a\"}")),
                  ValidationError);
  CHECK_THROWS_AS(parse_game(wrap("{\"type\":\"table\"}")), ValidationError);
  CHECK_THROWS_AS(parse_game(wrap("{\"type\":\"table\",\"minimal_winning\":[[1]]}")),
                  ValidationError);
}

TEST_CASE("parse rejects structurally invalid trees") {
  // Duplicate ids.
  CHECK_THROWS_AS(
      parse_game("{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"majority\"},"
                 "\"children\":[{\"id\":\"a\"},{\"id\":\"a\"},{\"id\":\"b\"}]}}"),
      ValidationError);
  // A single child is not a game.
  CHECK_THROWS_AS(
      parse_game("{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"majority\"},"
                 "\"children\":[{\"id\":\"a\"}]}}"),
      ValidationError);
  // A leaf must not carry a rule.
  CHECK_THROWS_AS(
      parse_game("{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"majority\"}}}"),
      ValidationError);
  // Internal nodes need rules.
  CHECK_THROWS_AS(
      parse_game("{\"format-version\":1,\"tree\":{\"id\":\"r\","
                 "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"}]}}"),
      ValidationError);
  // A weight for an id that is not a child.
  CHECK_THROWS_AS(
      parse_game("{\"format-version\":1,\"tree\":{\"id\":\"r\",\"rule\":{\"type\":\"quota\","
                 "\"weights\":{\"a\":1,\"zz\":1},\"quota\":1},"
                 "\"children\":[{\"id\":\"a\"},{\"id\":\"b\"}]}}"),
      ValidationError);
}

TEST_CASE("power reports render in all three formats") {
  PowerReport report;
  report.method = Method::kNaive;
  report.values["a"] = PowerValue::from_rational(Rational(1, 2));
  report.values["b"] = PowerValue::from_rational(Rational(3, 8));

  CHECK(render_report(report, OutputFormat::kJson, 6, 1.5) ==
        "{\"tool\":\"hvg 0.1.0\",\"method\":\"naive\",\"timing_ms\":1.5,"
        "\"values\":{\"a\":{\"exact\":\"1/2\",\"approx\":\"0.500000\"},"
        "\"b\":{\"exact\":\"3/8\",\"approx\":\"0.375000\"}}}\n");
  CHECK(render_report(report, OutputFormat::kCsv, 6, 1.5) ==
        "voter,exact,approx\na,1/2,0.500000\nb,3/8,0.375000\n");
  CHECK(render_report(report, OutputFormat::kTableText, 4, 1.5) ==
        "voter value\na 0.5000\nb 0.3750\n");
}

TEST_CASE("sampling metadata and log-space flags show up in reports") {
  PowerReport report;
  report.method = Method::kSample;
  report.values["v"] = PowerValue::from_rational(Rational(1, 4));
  report.sampling = SampleInfo{1000, 42, 0.04};
  std::string json = render_report(report, OutputFormat::kJson, 6, 0.5);
  CHECK(json.find("\"method\":\"sample\"") != std::string::npos);
  CHECK(json.find("\"samples\":1000") != std::string::npos);
  CHECK(json.find("\"seed\":42") != std::string::npos);
  CHECK(json.find("\"halfwidth95\":") != std::string::npos);
  CHECK(json.find("\"approximate\"") == std::string::npos);

  PowerReport logs;
  logs.method = Method::kMebpi;
  logs.values["v"] = PowerValue::from_log2(Log2Value::from_rational(Rational(1, 2)));
  std::string approx = render_report(logs, OutputFormat::kJson, 3, 0.5);
  CHECK(approx.find("\"approximate\":true") != std::string::npos);
  CHECK(approx.find("\"exact\"") == std::string::npos);
  CHECK(approx.find("\"approx\":\"0.500\"") != std::string::npos);
  CHECK(render_report(logs, OutputFormat::kCsv, 3, 0.5) == "voter,exact,approx\nv,,0.500\n");
}

TEST_CASE("count tables render in all three formats") {
  GameTree t = hvgtest::flat_majority(3);
  CountTable counts = count_recursive(t);
  CHECK(render_counts(t, counts, OutputFormat::kJson, 0.5) ==
        "{\"tool\":\"hvg 0.1.0\",\"method\":\"count\",\"timing_ms\":0.5,"
        "\"counts\":{\"root\":{\"wins\":\"4\",\"losses\":\"4\"},"
        "\"v1\":{\"wins\":\"1\",\"losses\":\"1\"},"
        "\"v2\":{\"wins\":\"1\",\"losses\":\"1\"},"
        "\"v3\":{\"wins\":\"1\",\"losses\":\"1\"}}}\n");
  CHECK(render_counts(t, counts, OutputFormat::kCsv, 0.5) ==
        "node,wins,losses\nroot,4,4\nv1,1,1\nv2,1,1\nv3,1,1\n");
  CHECK(render_counts(t, counts, OutputFormat::kTableText, 0.5, NodeId("root")) ==
        "node wins losses\nroot 4 4\n");
  CHECK_THROWS_AS(render_counts(t, counts, OutputFormat::kJson, 0.5, NodeId("zzz")),
                  DomainError);
}

TEST_CASE("log-space count tables mark themselves approximate") {
  GameTree t = hvgtest::flat_majority(3);
  Log2CountTable counts = count_recursive_log2(t);
  std::string json = render_counts_log2(t, counts, OutputFormat::kJson, 3, 0.5);
  CHECK(json.find("\"approximate\":true") != std::string::npos);
  CHECK(json.find("\"root\":{\"wins\":\"4.00\",\"losses\":\"4.00\"}") != std::string::npos);
  CHECK(render_counts_log2(t, counts, OutputFormat::kTableText, 3, 0.5, NodeId("v1")) ==
        "node wins losses\nv1 1.00 1.00\n");
  CHECK_THROWS_AS(render_counts_log2(t, counts, OutputFormat::kJson, 3, 0.5, NodeId("zzz")),
                  DomainError);
}

TEST_CASE("file round trips and io errors") {
  std::string path = "hvg_io_test_tmp.json";
  GameTree t = hvgtest::unanimity_groups_tree();
  save_game(t, path);
  GameTree back = load_game(path);
  CHECK(serialize_game(back) == serialize_game(t));
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_text_file("does_not_exist_anywhere.json"), IoError);
  CHECK_THROWS_AS(load_game("does_not_exist_anywhere.json"), IoError);
  CHECK_THROWS_AS(save_text("x", "no_such_dir_zz/file.txt"), IoError);
}
