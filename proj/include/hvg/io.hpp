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

#include <optional>
#include <string>

#include "hvg/counting.hpp"
#include "hvg/game.hpp"
#include "hvg/indices.hpp"

namespace hvg {

inline constexpr const char* kToolVersion = "hvg 0.1.0";
inline constexpr int kFormatVersion = 1;

enum class OutputFormat { kJson, kTableText, kCsv };
OutputFormat format_from_name(const std::string& name);

// Game documents are JSON: {"format-version":1,"tree":<node>} where a leaf is
// {"id":...} and an internal node {"id":...,"rule":...,"children":[...]}.
// Rules: {"type":"quota","weights":{id:int,...},"quota":int-or-"16.5"-string}
//      | {"type":"majority","weights":{...}[,"tie_breaker":id]}
//      | {"type":"table","minimal_winning":[[id,...],...]}.
// Serialization is canonical: compact dump, key order id/type/weights/quota/
// tie_breaker/minimal_winning/children, weights in child order, winning sets
// sorted by child-position mask. Canonical documents round-trip byte-for-byte.
GameTree parse_game(const std::string& json_text);
GameTree load_game(const std::string& path);
std::string serialize_game(const GameTree& tree);
void save_game(const GameTree& tree, const std::string& path);

// Result documents. timing_ms is measured by the caller; sig_figs controls
// the decimal renderings. Voters/nodes are always emitted sorted by id.
std::string render_report(const PowerReport& report, OutputFormat format, int sig_figs,
                          double timing_ms);
std::string render_counts(const GameTree& tree, const CountTable& counts, OutputFormat format,
                          double timing_ms, const std::optional<NodeId>& only = std::nullopt);
std::string render_counts_log2(const GameTree& tree, const Log2CountTable& counts,
                               OutputFormat format, int sig_figs, double timing_ms,
                               const std::optional<NodeId>& only = std::nullopt);

void save_text(const std::string& text, const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace hvg
