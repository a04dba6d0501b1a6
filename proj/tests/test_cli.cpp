#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "otquant/cli.hpp"
#include "otquant/report.hpp"

using namespace otquant;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kBundleDir = std::string(OTQUANT_TEST_DIR) + "/fixtures/clean_bundle";

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("risk subcommand emits the analytic interval and rounded range") {
    auto r = run({"risk", "--scenario", "scar", "--posture", "current-infrastructure"});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["kind"] == "risk-report");
    CHECK(doc["chain"]["interval"][0].get<double>() == doctest::Approx(0.350625));
    CHECK(doc["chain"]["interval"][1].get<double>() == doctest::Approx(0.6762));
    CHECK(doc["chain"]["rounded_range"] == "35-68%");
    CHECK(doc["partials"]["ordering"] == "dP/dp3 > dP/dp2 > dP/dp1");
    CHECK(doc["manifest"]["tool_version"] == rep::kToolVersion);
}

TEST_CASE("risk --hardened reports per-phase leverage deltas") {
    auto r = run({"risk", "--scenario", "scar", "--posture", "current-infrastructure",
                  "--hardened", "sl4"});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    REQUIRE(doc.contains("leverage"));
    CHECK(doc["leverage"]["deltas"][0].get<double>() == doctest::Approx(0.27951625));
    CHECK(doc["leverage"]["deltas"][2].get<double>() == doctest::Approx(0.34381125));
    CHECK(doc["leverage"]["ratios_to_smallest"][1].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("unknown subcommand prints usage and exits 2") {
    auto r = run({"frobnicate"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("missing required flags exit 2; unknown posture exits 1") {
    CHECK(run({"risk", "--scenario", "scar"}).exit_code == 2);
    CHECK(run({"risk", "--scenario", "scar", "--posture", "nope"}).exit_code == 1);
}

TEST_CASE("validate v2 exits 1 on fragmentation failure") {
    auto r = run({"validate", "v2", "--size", "14485", "--mtu", "1500", "--overhead", "150"});
    CHECK(r.exit_code == 1);
    json doc = json::parse(r.out);
    CHECK(doc["result"]["metrics"]["n_fragments"].get<double>() == 10.0);

    r = run({"validate", "v2", "--size", "1088", "--mtu", "1500", "--overhead", "auto",
             "--stack", "eth,ip4,tcp,tls"});
    CHECK(r.exit_code == 0);
    doc = json::parse(r.out);
    CHECK(doc["result"]["metrics"]["n_fragments"].get<double>() == 1.0);
    CHECK(doc["result"]["metrics"]["overhead_bytes"].get<double>() == 79.0);
}

TEST_CASE("validate bundle passes the clean fixtures and exits 0") {
    auto r = run({"validate", "--bundle", kBundleDir});
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["overall_pass"] == true);
    CHECK(doc["tests"].size() == 7);
    // Bundle inputs are digested into the manifest.
    CHECK(doc["manifest"]["config_digests"].size() >= 8);
}

TEST_CASE("per-test subcommands run from files") {
    auto r = run({"validate", "v5", "--input", kBundleDir + "/v5_timesync.jsonl"});
    CHECK(r.exit_code == 0);
    r = run({"validate", "v1", "--input", kBundleDir + "/v1_handshakes.jsonl", "--policy",
             kBundleDir + "/policy.json"});
    CHECK(r.exit_code == 0);
    r = run({"validate", "v3", "--input", kBundleDir + "/v3_latency_server.jsonl"});
    CHECK(r.exit_code == 0);
    r = run({"validate", "v3", "--input", kBundleDir + "/v3_latency_server.jsonl", "--context",
             "control-loop"});
    CHECK(r.exit_code == 1);  // on-path samples in a control loop
}

TEST_CASE("byte-identical reproduction once the timestamp is stripped") {
    auto d = temp_dir("otquant_cli_repro");
    auto f = (d / "a.json").string();

    // Identical command, run twice; only the manifest timestamp may differ.
    std::vector<std::string> cmd = {"risk", "--scenario", "dawn", "--posture", "targeted",
                                    "--mc", "20000", "--seed", "9", "--attempts", "3",
                                    "--output", f};
    auto slurp = [&] {
        std::ifstream in(f);
        json j;
        in >> j;
        return j;
    };
    REQUIRE(run(cmd).exit_code == 0);
    json ja = slurp();
    REQUIRE(run(cmd).exit_code == 0);
    json jb = slurp();

    auto sa = rep::dump_report(rep::strip_timestamp(ja));
    auto sb = rep::dump_report(rep::strip_timestamp(jb));
    CHECK(sa == sb);
    CHECK(rep::fnv1a64_hex(sa) == rep::fnv1a64_hex(sb));
    fs::remove_all(d);
}

TEST_CASE("report consolidates prior outputs") {
    auto d = temp_dir("otquant_cli_report");
    const char* postures_scar[] = {"current-infrastructure", "targeted", "sl4",
                                   "figure-baseline"};
    const char* postures_dawn[] = {"baseline", "targeted", "sl4", "pqc-hybrid"};
    int n = 0;
    for (const char* p : postures_scar) {
        auto f = (d / ("scar-" + std::to_string(n++) + ".json")).string();
        REQUIRE(run({"risk", "--scenario", "scar", "--posture", p, "--output", f}).exit_code == 0);
    }
    for (const char* p : postures_dawn) {
        auto f = (d / ("dawn-" + std::to_string(n++) + ".json")).string();
        REQUIRE(run({"risk", "--scenario", "dawn", "--posture", p, "--output", f}).exit_code == 0);
    }

    auto vf = (d / "validation.json").string();
    REQUIRE(run({"validate", "--bundle", kBundleDir, "--output", vf}).exit_code == 0);
    auto sf = (d / "simulation.json").string();
    REQUIRE(run({"simulate", "--scenario", "dawn", "--posture", "sl4", "--runs", "200",
                 "--seed", "2", "--output", sf}).exit_code == 0);
    auto tf = (d / "trace.json").string();
    REQUIRE(run({"simulate", "--scenario", "scar", "--posture", "targeted", "--trace-one",
                 "--seed", "6", "--output", tf}).exit_code == 0);

    auto r = run({"report", d.string()});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["kind"] == "consolidated-report");
    CHECK(doc["validation"].size() == 1);
    CHECK(doc["validation"][0]["grid"].size() == 7);
    CHECK(doc["simulations"].size() == 1);
    CHECK(doc["traces"].size() == 1);
    REQUIRE(doc["risk_table"].size() == 8);
    std::set<std::string> ranges;
    for (const auto& row : doc["risk_table"]) {
        ranges.insert(row["rounded_range"].get<std::string>());
    }
    CHECK(ranges.count("35-68%"));
    CHECK(ranges.count("51-78%"));
    CHECK(ranges.count("2-8%"));
    CHECK(ranges.count("8-34%"));
    CHECK(ranges.count("17-50%"));
    CHECK(ranges.count("1-5%"));
    fs::remove_all(d);
}

TEST_CASE("report on an empty directory is a domain failure") {
    auto d = temp_dir("otquant_cli_empty");
    auto r = run({"report", d.string()});
    CHECK(r.exit_code == 1);
    fs::remove_all(d);
}

TEST_CASE("report with a single document produces a single-section report") {
    auto d = temp_dir("otquant_cli_single");
    auto f = (d / "one.json").string();
    REQUIRE(run({"risk", "--scenario", "scar", "--posture", "sl4", "--output", f}).exit_code == 0);
    auto r = run({"report", d.string()});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["sections"] == 1);
    CHECK(doc["risk_table"].size() == 1);
    fs::remove_all(d);
}

TEST_CASE("catalog subcommand prints CSV, table and single records") {
    auto r = run({"catalog"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("name,family,", 0) == 0);

    r = run({"catalog", "--format", "table"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("ML-KEM-768") != std::string::npos);

    r = run({"catalog", "--name", "ML-KEM-768"});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["pubkey_bytes"] == 1184);
    CHECK(doc["artifact_bytes"] == 1088);

    CHECK(run({"catalog", "--name", "NoSuchAlg"}).exit_code == 1);
}

TEST_CASE("topology subcommands validate and show") {
    auto r = run({"topology", "show", "scar-reference"});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["name"] == "scar-reference");

    auto d = temp_dir("otquant_cli_topo");
    auto cfg = (d / "t.json").string();
    {
        std::ofstream f(cfg);
        f << doc.dump();  // round-trip the built-in through the config schema
    }
    r = run({"topology", "validate", cfg});
    CHECK(r.exit_code == 0);

    {
        std::ofstream f(cfg);
        f << R"({"name": "bad", "assets": []})";
    }
    r = run({"topology", "validate", cfg});
    CHECK(r.exit_code == 1);
    fs::remove_all(d);
}

TEST_CASE("simulate trace-one and batch summaries") {
    auto r = run({"simulate", "--scenario", "scar", "--posture", "current-infrastructure",
                  "--runs", "2000", "--seed", "11"});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["kind"] == "simulation-summary");
    CHECK(doc["summary"]["runs"] == 2000);
    double rate = doc["summary"]["success_rate"].get<double>();
    CHECK(rate > 0.3);
    CHECK(rate < 0.7);
    CHECK(doc["technique_coverage_full"]["Collection"].size() == 2);

    r = run({"simulate", "--scenario", "dawn", "--posture", "baseline", "--trace-one",
             "--seed", "4"});
    REQUIRE(r.exit_code == 0);
    doc = json::parse(r.out);
    CHECK(doc["kind"] == "run-trace");
    CHECK(doc["scenario"] == "dawn");
    CHECK(doc["topology"] == "dawn-reference");

    // Mismatched posture/scenario pair is a domain failure.
    CHECK(run({"simulate", "--scenario", "scar", "--posture", "pqc-hybrid"}).exit_code == 1);
}

TEST_CASE("simulate accepts a topology config file and digests it") {
    auto d = temp_dir("otquant_cli_simtopo");
    auto cfg = (d / "topo.json").string();
    {
        auto shown = run({"topology", "show", "dawn-reference"});
        REQUIRE(shown.exit_code == 0);
        std::ofstream f(cfg);
        f << shown.out;
    }
    auto r = run({"simulate", "--scenario", "dawn", "--posture", "baseline", "--runs", "100",
                  "--seed", "5", "--topology", cfg});
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["topology"] == "dawn-reference");
    CHECK(doc["manifest"]["config_digests"].contains(cfg));
    fs::remove_all(d);
}

TEST_CASE("traces file holds one JSON line per run") {
    auto d = temp_dir("otquant_cli_traces");
    auto traces = (d / "runs.jsonl").string();
    auto r = run({"simulate", "--scenario", "dawn", "--posture", "sl4", "--runs", "50",
                  "--seed", "8", "--traces", traces});
    REQUIRE(r.exit_code == 0);
    std::ifstream f(traces);
    std::string line;
    int lines = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        json t = json::parse(line);
        CHECK(t["kind"] == "run-trace");
        ++lines;
    }
    CHECK(lines == 50);
    fs::remove_all(d);
}
