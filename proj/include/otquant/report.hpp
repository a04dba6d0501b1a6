#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "otquant/risk.hpp"
#include "otquant/scenario.hpp"
#include "otquant/validation.hpp"

namespace otquant::rep {

inline constexpr const char* kToolVersion = "0.1.0";

/// Embedded in every emitted report. The timestamp field is excluded from the
/// byte-identical reproduction contract; everything else must reproduce.
struct RunManifest {
    std::string command_line;
    std::map<std::string, std::string> config_digests;  // input path -> content hash
    std::vector<std::uint64_t> seeds;
    int partitions = 1;
    std::string tool_version = kToolVersion;
    std::string timestamp;  // ISO-8601 UTC
};

/// FNV-1a 64-bit content digest, hex. Reproducibility aid, not a security hash.
std::string fnv1a64_hex(std::string_view bytes);
std::string file_digest(const std::string& path);

RunManifest make_manifest(const std::vector<std::string>& argv,
                          const std::vector<std::string>& input_files,
                          std::vector<std::uint64_t> seeds = {}, int partitions = 1);

nlohmann::json to_json(const RunManifest& m);
nlohmann::json to_json(const risk::ProbInterval& p);
nlohmann::json to_json(const risk::MonteCarloResult& r);
nlohmann::json to_json(const risk::PhasePartials& p);
nlohmann::json to_json(const scn::AttackEvent& e);
nlohmann::json to_json(const scn::RunTrace& t);
nlohmann::json to_json(const scn::BatchSummary& b);
nlohmann::json to_json(const val::TestResult& t);
nlohmann::json to_json(const val::ValidationReport& r);
nlohmann::json to_json(const topo::Topology& t);

/// Merges the JSON outputs found in a results directory into one consolidated
/// document (risk table, validation grid, simulation summaries, traces).
/// Throws DomainError for an empty or unreadable directory.
nlohmann::json consolidate(const std::string& results_dir);

/// Plain-text rendering of a consolidated report.
std::string consolidated_table(const nlohmann::json& doc);

/// Serializes with sorted keys and a trailing newline; reports are diffable.
std::string dump_report(const nlohmann::json& doc);

/// Removes the manifest timestamp, the only field outside the determinism
/// contract; used by reproduction checks.
nlohmann::json strip_timestamp(nlohmann::json doc);

}  // namespace otquant::rep
