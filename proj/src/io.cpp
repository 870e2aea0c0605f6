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

#include "hvg/io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace hvg {

using ojson = nlohmann::ordered_json;

OutputFormat format_from_name(const std::string& name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "table" || name == "table-text") return OutputFormat::kTableText;
  if (name == "csv") return OutputFormat::kCsv;
  throw DomainError("unknown output format '" + name + "'");
}

namespace {

void check_keys(const ojson& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) ok = true;
    if (!ok) throw ValidationError("unexpected key '" + item.key() + "' in " + where);
  }
}

std::uint64_t parse_twice_quota(const ojson& q) {
  if (q.is_number_unsigned()) return 2 * q.get<std::uint64_t>();
  if (q.is_string()) {
    Rational r = parse_decimal(q.get<std::string>());
    r *= 2;
    r.canonicalize();
    if (r.get_den() != 1 || r < 0)
      throw ValidationError("quota must be a nonnegative integer or end in .5");
    if (!r.get_num().fits_ulong_p()) throw ValidationError("quota too large");
    return r.get_num().get_ui();
  }
  throw ValidationError("quota must be an integer or a string like \"16.5\"");
}

RuleSpec parse_rule(const ojson& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError("rule must be an object in " + where);
  std::string type = j.value("type", std::string());
  RuleSpec rule;
  if (type == "quota" || type == "majority") {
    rule.kind = type == "quota" ? RuleKind::kQuota : RuleKind::kMajority;
    check_keys(j, type == "quota" ? std::initializer_list<const char*>{"type", "weights", "quota"}
                                  : std::initializer_list<const char*>{"type", "weights", "tie_breaker"},
               where);
    if (rule.kind == RuleKind::kMajority && !j.contains("weights")) {
      // Absent weights on a majority rule mean one vote per child.
      rule.unit_weights = true;
    } else {
      if (!j.contains("weights") || !j["weights"].is_object())
        throw ValidationError("rule in " + where + " needs a weights object");
      for (const auto& item : j["weights"].items()) {
        if (!item.value().is_number_unsigned())
          throw ValidationError("weight of '" + item.key() + "' in " + where +
                                " must be a nonnegative integer");
        rule.weights.emplace_back(item.key(), item.value().get<std::uint64_t>());
      }
    }
    if (rule.kind == RuleKind::kQuota) {
      if (!j.contains("quota")) throw ValidationError("quota rule in " + where + " needs a quota");
      rule.twice_quota = parse_twice_quota(j["quota"]);
    } else if (j.contains("tie_breaker")) {
      if (!j["tie_breaker"].is_string())
        throw ValidationError("tie_breaker in " + where + " must be a child id");
      rule.tie_breaker = j["tie_breaker"].get<std::string>();
    }
    return rule;
  }
  if (type == "table") {
    rule.kind = RuleKind::kTable;
    rule.sets_are_minimal = true;
    check_keys(j, {"type", "minimal_winning"}, where);
    if (!j.contains("minimal_winning") || !j["minimal_winning"].is_array())
      throw ValidationError("table rule in " + where + " needs a minimal_winning array");
    for (const ojson& set : j["minimal_winning"]) {
      if (!set.is_array())
        throw ValidationError("minimal_winning entries in " + where + " must be arrays");
      std::vector<NodeId> ids;
      for (const ojson& id : set) {
        if (!id.is_string())
          throw ValidationError("winning-set members in " + where + " must be ids");
        ids.push_back(id.get<std::string>());
      }
      rule.winning_sets.push_back(std::move(ids));
    }
    return rule;
  }
  throw ValidationError("unknown rule type '" + type + "' in " + where);
}

NodeSpec parse_node(const ojson& j) {
  if (!j.is_object()) throw ValidationError("tree nodes must be objects");
  if (!j.contains("id") || !j["id"].is_string())
    throw ValidationError("every node needs a string id");
  NodeSpec spec;
  spec.id = j["id"].get<std::string>();
  check_keys(j, {"id", "rule", "children"}, "node '" + spec.id + "'");
  if (j.contains("children")) {
    if (!j["children"].is_array())
      throw ValidationError("children of '" + spec.id + "' must be an array");
    for (const ojson& c : j["children"]) spec.children.push_back(parse_node(c));
  }
  if (j.contains("rule")) spec.rule = parse_rule(j["rule"], "node '" + spec.id + "'");
  return spec;
}

}  // namespace

GameTree parse_game(const std::string& json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("document must be a JSON object");
  check_keys(doc, {"format-version", "tree"}, "document");
  if (!doc.contains("format-version") || !doc["format-version"].is_number_integer() ||
      doc["format-version"].get<int>() != kFormatVersion)
    throw ValidationError("format-version must be " + std::to_string(kFormatVersion));
  if (!doc.contains("tree")) throw ValidationError("document needs a tree");
  GameTree tree = GameTree::from_spec(parse_node(doc["tree"]));
  tree.require_valid();
  return tree;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return buf.str();
}

GameTree load_game(const std::string& path) { return parse_game(read_text_file(path)); }

namespace {

ojson rule_json(const LocalRule& rule, const std::vector<NodeId>& child_ids) {
  ojson j;
  if (rule.is_table()) {
    j["type"] = "table";
    std::vector<std::uint64_t> sets = rule.minimal_winning();
    std::sort(sets.begin(), sets.end());
    ojson arr = ojson::array();
    for (std::uint64_t mask : sets) {
      ojson set = ojson::array();
      for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1)
        set.push_back(child_ids[std::countr_zero(rest)]);
      arr.push_back(std::move(set));
    }
    j["minimal_winning"] = std::move(arr);
    return j;
  }
  j["type"] = rule.is_majority() ? "majority" : "quota";
  // Unit-weight majorities stay implicit; anything else spells the weights out.
  if (!(rule.is_majority() && rule.equal_weights() && rule.weights()[0] == 1)) {
    ojson weights;
    for (std::size_t i = 0; i < child_ids.size(); ++i)
      weights[child_ids[i]] = rule.weights()[i];
    j["weights"] = std::move(weights);
  }
  if (!rule.is_majority()) {
    std::uint64_t tq = rule.twice_quota();
    if (tq % 2 == 0)
      j["quota"] = tq / 2;
    else
      j["quota"] = std::to_string(tq / 2) + ".5";
  } else if (rule.tie_breaker() >= 0) {
    j["tie_breaker"] = child_ids[rule.tie_breaker()];
  }
  return j;
}

ojson node_json(const GameTree& tree, int index) {
  const TreeNode& nd = tree.node(index);
  ojson j;
  j["id"] = nd.id;
  if (nd.children.empty()) return j;
  std::vector<NodeId> child_ids;
  for (int c : nd.children) child_ids.push_back(tree.node(c).id);
  if (nd.rule) j["rule"] = rule_json(*nd.rule, child_ids);
  ojson kids = ojson::array();
  for (int c : nd.children) kids.push_back(node_json(tree, c));
  j["children"] = std::move(kids);
  return j;
}

}  // namespace

std::string serialize_game(const GameTree& tree) {
  ojson doc;
  doc["format-version"] = kFormatVersion;
  doc["tree"] = node_json(tree, tree.root());
  return doc.dump() + "\n";
}

void save_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed on '" + path + "'");
}

void save_game(const GameTree& tree, const std::string& path) {
  save_text(serialize_game(tree), path);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::string render_report(const PowerReport& report, OutputFormat format, int sig_figs,
                          double timing_ms) {
  if (format == OutputFormat::kJson) {
    ojson doc;
    doc["tool"] = kToolVersion;
    doc["method"] = method_name(report.method);
    doc["timing_ms"] = timing_ms;
    bool any_approx = false;
    for (const auto& [id, v] : report.values) any_approx = any_approx || !v.is_exact;
    if (any_approx) doc["approximate"] = true;
    if (report.sampling) {
      doc["samples"] = report.sampling->samples;
      doc["seed"] = report.sampling->seed;
      doc["halfwidth95"] = report.sampling->halfwidth95;
    }
    ojson values;
    for (const auto& [id, v] : report.values) {
      ojson cell;
      if (v.is_exact) cell["exact"] = v.fraction();
      cell["approx"] = v.decimal(sig_figs);
      values[id] = std::move(cell);
    }
    doc["values"] = std::move(values);
    return doc.dump() + "\n";
  }
  std::string out;
  if (format == OutputFormat::kCsv) {
    out = "voter,exact,approx\n";
    for (const auto& [id, v] : report.values)
      out += csv_escape(id) + "," + (v.is_exact ? v.fraction() : "") + "," +
             v.decimal(sig_figs) + "\n";
    return out;
  }
  out = "voter value\n";
  for (const auto& [id, v] : report.values) out += id + " " + v.decimal(sig_figs) + "\n";
  return out;
}

namespace {

// Shared shape for exact and log-space count rendering.
std::string render_count_rows(const std::vector<std::pair<NodeId, std::pair<std::string, std::string>>>& rows,
                              OutputFormat format, double timing_ms, bool approximate) {
  if (format == OutputFormat::kJson) {
    ojson doc;
    doc["tool"] = kToolVersion;
    doc["method"] = "count";
    doc["timing_ms"] = timing_ms;
    if (approximate) doc["approximate"] = true;
    ojson counts;
    for (const auto& [id, wl] : rows) {
      ojson cell;
      cell["wins"] = wl.first;
      cell["losses"] = wl.second;
      counts[id] = std::move(cell);
    }
    doc["counts"] = std::move(counts);
    return doc.dump() + "\n";
  }
  std::string out;
  if (format == OutputFormat::kCsv) {
    out = "node,wins,losses\n";
    for (const auto& [id, wl] : rows)
      out += csv_escape(id) + "," + wl.first + "," + wl.second + "\n";
    return out;
  }
  out = "node wins losses\n";
  for (const auto& [id, wl] : rows) out += id + " " + wl.first + " " + wl.second + "\n";
  return out;
}

}  // namespace

std::string render_counts(const GameTree& tree, const CountTable& counts, OutputFormat format,
                          double timing_ms, const std::optional<NodeId>& only) {
  std::map<NodeId, std::pair<std::string, std::string>> sorted;
  for (int i = 0; i < tree.node_count(); ++i) {
    if (only && tree.node(i).id != *only) continue;
    sorted[tree.node(i).id] = {counts.at(i).wins.get_str(), counts.at(i).losses.get_str()};
  }
  if (only && sorted.empty()) throw DomainError("no node with id '" + *only + "'");
  std::vector<std::pair<NodeId, std::pair<std::string, std::string>>> rows(sorted.begin(),
                                                                           sorted.end());
  return render_count_rows(rows, format, timing_ms, false);
}

std::string render_counts_log2(const GameTree& tree, const Log2CountTable& counts,
                               OutputFormat format, int sig_figs, double timing_ms,
                               const std::optional<NodeId>& only) {
  std::map<NodeId, std::pair<std::string, std::string>> sorted;
  for (int i = 0; i < tree.node_count(); ++i) {
    if (only && tree.node(i).id != *only) continue;
    sorted[tree.node(i).id] = {log2_to_decimal(counts.at(i).wins, sig_figs),
                               log2_to_decimal(counts.at(i).losses, sig_figs)};
  }
  if (only && sorted.empty()) throw DomainError("no node with id '" + *only + "'");
  std::vector<std::pair<NodeId, std::pair<std::string, std::string>>> rows(sorted.begin(),
                                                                           sorted.end());
  return render_count_rows(rows, format, timing_ms, true);
}

}  // namespace hvg
