#include "otquant/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace otquant::rep {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read input file for digest: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64_hex(ss.str());
}

namespace {

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunManifest make_manifest(const std::vector<std::string>& argv,
                          const std::vector<std::string>& input_files,
                          std::vector<std::uint64_t> seeds, int partitions) {
    RunManifest m;
    std::ostringstream cmd;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (i) cmd << ' ';
        cmd << argv[i];
    }
    m.command_line = cmd.str();
    for (const auto& f : input_files) m.config_digests[f] = file_digest(f);
    m.seeds = std::move(seeds);
    m.partitions = partitions;
    m.timestamp = utc_now();
    return m;
}

json to_json(const RunManifest& m) {
    json j;
    j["command_line"] = m.command_line;
    j["config_digests"] = m.config_digests;
    j["seeds"] = m.seeds;
    j["partitions"] = m.partitions;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    return j;
}

json to_json(const risk::ProbInterval& p) {
    return json::array({p.lo, p.hi});
}

json to_json(const risk::MonteCarloResult& r) {
    json j;
    j["estimate"] = r.estimate;
    j["half_width_95"] = r.half_width_95;
    j["runs"] = r.runs;
    j["successes"] = r.successes;
    j["stage_failures"] = r.stage_failures;
    j["seed"] = r.seed;
    j["partitions"] = r.partitions;
    return j;
}

json to_json(const risk::PhasePartials& p) {
    json j;
    j["point"] = p.point;
    j["values"] = p.partials;
    j["order"] = p.order;
    j["ordering"] = p.ordering;
    j["tie"] = p.tie;
    return j;
}

json to_json(const scn::AttackEvent& e) {
    json j;
    j["offset_ms"] = e.offset_ms;
    j["time"] = e.time_label;
    j["phase"] = std::string(scn::to_string(e.phase));
    if (!e.phase_label.empty()) j["phase_label"] = e.phase_label;
    j["action"] = e.action;
    j["level"] = std::string(topo::to_string(e.level));
    j["techniques"] = e.techniques;
    j["detection_opportunity"] = e.detection_opportunity;
    if (e.table_row) j["table_row"] = true;
    if (e.impact) j["impact"] = true;
    if (!e.annotations.empty()) j["annotations"] = e.annotations;
    return j;
}

json to_json(const scn::RunTrace& t) {
    json j;
    j["kind"] = "run-trace";
    j["scenario"] = t.scenario;
    j["posture"] = t.posture;
    j["seed"] = t.seed;
    j["phase_success"] = t.phase_success;
    j["failing_stage"] = t.failing_stage;
    if (!t.failure_reason.empty()) j["failure_reason"] = t.failure_reason;
    j["events"] = json::array();
    for (const auto& e : t.events) j["events"].push_back(to_json(e));
    j["forensic_ledger"] = json::array();
    for (const auto& f : t.forensic) {
        j["forensic_ledger"].push_back(
            {{"evidence", f.evidence}, {"status", f.status}, {"impact", f.impact}});
    }
    j["technique_coverage"] = t.technique_coverage;
    json table = json::array();
    for (const auto& row : scn::timeline_table(t)) {
        table.push_back({{"time", row.time}, {"phase", row.phase}, {"action", row.action}});
    }
    j["timeline_table"] = table;
    return j;
}

json to_json(const scn::BatchSummary& b) {
    json j;
    j["runs"] = b.runs;
    j["seed"] = b.seed;
    j["partitions"] = b.partitions;
    j["successes"] = b.successes;
    j["stage_failures"] = b.stage_failures;
    j["success_rate"] = b.success_rate;
    return j;
}

json to_json(const val::TestResult& t) {
    json j;
    j["evaluated"] = t.evaluated;
    j["pass"] = t.pass;
    j["metrics"] = t.metrics;
    j["violations"] = t.violations;
    j["annotations"] = t.annotations;
    return j;
}

json to_json(const val::ValidationReport& r) {
    json j;
    j["kind"] = "validation-report";
    json tests;
    for (const auto& [name, t] : r.tests) tests[name] = to_json(t);
    j["tests"] = tests;
    j["overall_pass"] = r.overall_pass;
    return j;
}

json to_json(const topo::Topology& t) {
    json j;
    j["name"] = t.name;
    json anchors = json::array();
    for (const auto& a : t.anchors) {
        json d = json::array();
        for (auto dom : a.domains_covered) d.push_back(std::string(topo::to_string(dom)));
        anchors.push_back({{"id", a.id}, {"algorithm", a.algorithm}, {"domains", d}});
    }
    j["anchors"] = anchors;
    json assets = json::array();
    for (const auto& a : t.assets) {
        json ja;
        ja["id"] = a.id;
        ja["level"] = std::string(topo::to_string(a.level));
        ja["kind"] = std::string(topo::to_string(a.kind));
        ja["domain"] = std::string(topo::to_string(a.domain));
        ja["trust_anchor"] = a.trust_anchor;
        ja["crypto_profile"] = a.crypto_profile;
        if (!a.annotations.empty()) ja["annotations"] = a.annotations;
        assets.push_back(ja);
    }
    j["assets"] = assets;
    json conduits = json::array();
    for (const auto& c : t.conduits) {
        conduits.push_back({{"src", c.src},
                            {"dst", c.dst},
                            {"protocol", std::string(topo::to_string(c.protocol))},
                            {"mtu_bytes", c.mtu_bytes},
                            {"rtt_ms", c.rtt_ms},
                            {"policy", std::string(topo::to_string(c.policy))}});
    }
    j["conduits"] = conduits;
    return j;
}

json consolidate(const std::string& results_dir) {
    if (!fs::is_directory(results_dir)) {
        throw DomainError("not a results directory: " + results_dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(results_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) throw DomainError("no JSON results in directory: " + results_dir);
    std::sort(files.begin(), files.end());

    json risk_rows = json::array();
    json validation = json::array();
    json simulations = json::array();
    json traces = json::array();
    int sections = 0;

    for (const auto& f : files) {
        std::ifstream in(f);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw DomainError(f.string() + ": " + e.what());
        }
        const std::string kind = doc.value("kind", "");
        if (kind == "risk-report") {
            json row;
            row["file"] = f.filename().string();
            row["scenario"] = doc.value("scenario", "");
            row["posture"] = doc.value("posture", "");
            row["interval"] = doc["chain"]["interval"];
            row["rounded_range"] = doc["chain"]["rounded_range"];
            risk_rows.push_back(row);
            ++sections;
        } else if (kind == "validation-report") {
            json grid = json::array();
            for (auto it = doc["tests"].begin(); it != doc["tests"].end(); ++it) {
                grid.push_back({{"test", it.key()},
                                {"pass", (*it)["pass"]},
                                {"evaluated", (*it)["evaluated"]},
                                {"metrics", (*it)["metrics"]}});
            }
            validation.push_back({{"file", f.filename().string()},
                                  {"grid", grid},
                                  {"overall_pass", doc["overall_pass"]}});
            ++sections;
        } else if (kind == "simulation-summary") {
            json row;
            row["file"] = f.filename().string();
            row["scenario"] = doc.value("scenario", "");
            row["posture"] = doc.value("posture", "");
            row["summary"] = doc.value("summary", json::object());
            if (doc.contains("technique_coverage_full")) {
                row["technique_coverage"] = doc["technique_coverage_full"];
            }
            simulations.push_back(row);
            ++sections;
        } else if (kind == "run-trace") {
            traces.push_back({{"file", f.filename().string()},
                              {"scenario", doc.value("scenario", "")},
                              {"posture", doc.value("posture", "")},
                              {"technique_coverage", doc.value("technique_coverage", json::object())},
                              {"timeline_table", doc.value("timeline_table", json::array())}});
            ++sections;
        }
        // Unknown kinds are skipped; the directory may hold unrelated JSON.
    }
    if (sections == 0) {
        throw DomainError("directory holds no recognizable report documents: " + results_dir);
    }

    json out;
    out["kind"] = "consolidated-report";
    out["risk_table"] = risk_rows;
    out["validation"] = validation;
    out["simulations"] = simulations;
    out["traces"] = traces;
    out["sections"] = sections;
    return out;
}

std::string consolidated_table(const json& doc) {
    std::ostringstream os;
    if (!doc["risk_table"].empty()) {
        os << "== Risk ranges ==\n";
        os << "scenario  posture                   interval              range\n";
        for (const auto& r : doc["risk_table"]) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%-9s %-25s [%.6f, %.6f]  %s\n",
                          r["scenario"].get<std::string>().c_str(),
                          r["posture"].get<std::string>().c_str(),
                          r["interval"][0].get<double>(), r["interval"][1].get<double>(),
                          r["rounded_range"].get<std::string>().c_str());
            os << buf;
        }
    }
    if (!doc["validation"].empty()) {
        os << "== Validation ==\n";
        for (const auto& v : doc["validation"]) {
            os << v["file"].get<std::string>() << " (overall "
               << (v["overall_pass"].get<bool>() ? "PASS" : "FAIL") << ")\n";
            for (const auto& g : v["grid"]) {
                os << "  " << g["test"].get<std::string>() << ": "
                   << (!g["evaluated"].get<bool>() ? "not evaluated"
                                                   : (g["pass"].get<bool>() ? "PASS" : "FAIL"))
                   << '\n';
            }
        }
    }
    if (!doc["simulations"].empty()) {
        os << "== Simulations ==\n";
        for (const auto& s : doc["simulations"]) {
            os << s["scenario"].get<std::string>() << "/" << s["posture"].get<std::string>();
            if (s["summary"].contains("success_rate")) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), ": success_rate=%.4f",
                              s["summary"]["success_rate"].get<double>());
                os << buf;
            }
            os << '\n';
            if (s.contains("technique_coverage")) {
                for (auto it = s["technique_coverage"].begin();
                     it != s["technique_coverage"].end(); ++it) {
                    os << "  " << it.key() << ":";
                    for (const auto& id : it.value()) os << ' ' << id.get<std::string>();
                    os << '\n';
                }
            }
        }
    }
    if (!doc["traces"].empty()) {
        os << "== Traces ==\n";
        for (const auto& t : doc["traces"]) {
            os << t["file"].get<std::string>() << " (" << t["scenario"].get<std::string>() << "/"
               << t["posture"].get<std::string>() << ")\n";
            for (const auto& row : t["timeline_table"]) {
                char buf[200];
                std::snprintf(buf, sizeof(buf), "  %-14s %-15s %s\n",
                              row["time"].get<std::string>().c_str(),
                              row["phase"].get<std::string>().c_str(),
                              row["action"].get<std::string>().c_str());
                os << buf;
            }
        }
    }
    return os.str();
}

std::string dump_report(const json& doc) {
    return doc.dump(2) + "\n";
}

json strip_timestamp(json doc) {
    if (doc.contains("manifest") && doc["manifest"].contains("timestamp")) {
        doc["manifest"].erase("timestamp");
    }
    return doc;
}

}  // namespace otquant::rep
