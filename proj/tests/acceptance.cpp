// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "otquant/catalog.hpp"
#include "otquant/cli.hpp"
#include "otquant/report.hpp"
#include "otquant/risk.hpp"
#include "otquant/scenario.hpp"
#include "otquant/telemetry.hpp"
#include "otquant/topology.hpp"
#include "otquant/validation.hpp"

using namespace otquant;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int number, const char* label, bool pass, const std::string& detail = "") {
    std::printf("%s  criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", number, label,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) ++failures;
}

std::string range_of(const char* posture_name) {
    return risk::rounded_percent_range(
               risk::chain_success(risk::posture(posture_name).phases))
        .str();
}

// 1. The eight built-in postures reproduce the published headline ranges.
void criterion_1() {
    struct Expect {
        const char* posture;
        const char* range;
    };
    const Expect table[] = {
        {"scar/current-infrastructure", "35-68%"}, {"scar/targeted", "51-78%"},
        {"scar/sl4", "2-8%"},                      {"dawn/baseline", "8-34%"},
        {"dawn/targeted", "17-50%"},               {"dawn/sl4", "1-5%"},
    };
    bool ok = true;
    std::ostringstream detail;
    for (const auto& e : table) {
        std::string got = range_of(e.posture);
        if (got != e.range) {
            ok = false;
            detail << e.posture << " got " << got << " want " << e.range << "; ";
        }
    }
    const double pqc_hi = risk::chain_success(risk::posture("dawn/pqc-hybrid").phases).hi;
    if (!(pqc_hi < 0.01)) {
        ok = false;
        detail << "dawn/pqc-hybrid hi " << pqc_hi << " not < 0.01";
    }
    report(1, "risk ranges reproduce the six headline ranges and pqc-hybrid < 1%", ok,
           detail.str());
}

// 2. k=3 repeated attempts on the targeted chains reproduce 88-99% / 41-88%.
void criterion_2() {
    auto scar = risk::chain_success(risk::posture("scar/targeted").phases);
    auto dawn = risk::chain_success(risk::posture("dawn/targeted").phases);
    std::string scar_range = risk::attempts_headline_range(scar, 3).str();
    std::string dawn_range = risk::attempts_headline_range(dawn, 3).str();
    bool ok = scar_range == "88-99%" && dawn_range == "41-88%";
    report(2, "repeated attempts k=3 reproduce 88-99% and 41-88%", ok,
           "scar " + scar_range + ", dawn " + dawn_range);
}

// 3. Monte Carlo at n=1e6 lands within +/-0.005 of the midpoint product in <10s.
void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    auto mc = risk::monte_carlo(risk::posture("scar/current-infrastructure").phases, 1000000,
                                20250810);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double err = std::fabs(mc.estimate - 0.4967);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "estimate %.6f, |err| %.6f, %.2f s", mc.estimate, err,
                  secs);
    report(3, "monte carlo n=1e6 within +/-0.005 of 0.4967 in under 10 s",
           err <= 0.005 && secs < 10.0, detail);
}

// 4. Analytic partials match central finite differences on 100 random models.
void criterion_4() {
    std::mt19937_64 rng(404);
    auto u = [&] { return 0.05 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        risk::PhaseModel m;
        for (auto* iv : {&m.p1, &m.p2, &m.p3}) {
            double a = u(), b = u();
            iv->lo = std::min(a, b);
            iv->hi = std::max(a, b);
        }
        auto p = risk::phase_partials(m, risk::EvalPoint::Mid);
        const double h = 1e-6;
        for (int i = 0; i < 3; ++i) {
            auto hi = p.point, lo = p.point;
            hi[i] += h;
            lo[i] -= h;
            const double fd =
                (hi[0] * hi[1] * hi[2] - lo[0] * lo[1] * lo[2]) / (2 * h);
            const double rel = std::fabs(p.partials[i] - fd) / std::fabs(fd);
            worst = std::max(worst, rel);
            if (!(rel < 1e-6)) ok = false;
        }
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "worst relative error %.3g", worst);
    report(4, "partials match central differences (step 1e-6, rel err < 1e-6)", ok, detail);
}

// 5. Fragmentation: ML-KEM-768 fits a standard frame; HQC-256 does not.
void criterion_5() {
    const auto& cat = catalog::builtin_catalog();
    const std::int64_t overhead = val::default_overhead_bytes();
    auto mlkem =
        val::v2_fragmentation(*cat.lookup("ML-KEM-768").artifact_bytes, 1500, overhead);
    auto hqc = val::v2_fragmentation(*cat.lookup("HQC-256").artifact_bytes, 1500, overhead);
    bool ok = mlkem.n_fragments == 1 && mlkem.pass && hqc.n_fragments >= 10 && !hqc.pass;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "ML-KEM-768 N=%lld, HQC-256 N=%lld (overhead %lld B)",
                  static_cast<long long>(mlkem.n_fragments),
                  static_cast<long long>(hqc.n_fragments), static_cast<long long>(overhead));
    report(5, "ML-KEM-768 yields N=1; HQC-256 yields N>=10 and fails", ok, detail);
}

// 6. Latency: the component sum equals 5.279 ms and passes; 60 ms fails.
void criterion_6() {
    val::LatencySample s{0.046, 0.041, 0.136, 0.056, 5.0};
    std::vector<val::LatencySample> one{s};
    auto ok_result = val::v3_latency(one, val::LatencyContext::ServerClass);
    const double t_hs = s.t_hs();
    bool ok = std::fabs(t_hs - 5.279) <= 0.001 && ok_result.pass;

    std::vector<val::LatencySample> slow(100, val::LatencySample{10, 10, 10, 10, 20});
    auto slow_result = val::v3_latency(slow, val::LatencyContext::ServerClass);
    ok = ok && !slow_result.pass;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "t_hs %.6f ms, uniform-60ms p95 %.1f", t_hs,
                  slow_result.metrics.at("p95_ms"));
    report(6, "latency sum 5.279 ms passes the 50 ms gate; 60 ms fixture fails", ok, detail);
}

// 7. Threshold boundary fixtures behave exactly as specified.
void criterion_7() {
    bool ok = true;
    std::ostringstream detail;

    val::HandshakePolicy policy{{"X25519Kyber768"}};
    std::vector<val::TlsHandshakeRecord> records;
    for (int i = 0; i < 995; ++i) {
        val::TlsHandshakeRecord r;
        r.session_id = "s" + std::to_string(i);
        r.hybrid_group = "X25519Kyber768";
        r.policy_decision = val::PolicyDecision::Accept;
        records.push_back(r);
    }
    for (int i = 0; i < 5; ++i) {
        val::TlsHandshakeRecord r;
        r.session_id = "m" + std::to_string(i);
        r.hybrid_group = "X448Kyber1024";
        r.policy_decision = val::PolicyDecision::Reject;
        r.reject_reason = "no_common_group";
        records.push_back(r);
    }
    if (!val::v1_handshake_conformity(records, policy).pass) {
        ok = false;
        detail << "conformance=0.995 should pass; ";
    }

    std::vector<val::TlsHandshakeRecord> dg;
    for (int i = 0; i < 9999; ++i) {
        val::TlsHandshakeRecord r;
        r.session_id = "s" + std::to_string(i);
        r.hybrid_group = "X25519Kyber768";
        r.policy_decision = val::PolicyDecision::Accept;
        dg.push_back(r);
    }
    val::TlsHandshakeRecord classical;
    classical.session_id = "c0";
    classical.policy_decision = val::PolicyDecision::Reject;
    classical.reject_reason = "handshake_failure";
    dg.push_back(classical);
    if (!val::v1_handshake_conformity(dg, policy).pass) {
        ok = false;
        detail << "downgrade=1e-4 should pass; ";
    }

    std::vector<val::SideChannelAttestation> att(3);
    for (int i = 0; i < 3; ++i) {
        att[i].build_id = "b" + std::to_string(i);
        att[i].flags = {"CT_VERIFY", "NTT_MASKED"};
        att[i].tvla_t = 1.0;
        att[i].attested = true;
    }
    att[2].tvla_t = 4.5;
    if (val::v6_side_channel(att).pass) {
        ok = false;
        detail << "tvla=4.5 should fail; ";
    }

    std::vector<val::TimeSyncSample> tsv(3);
    for (auto& s : tsv) {
        s.source_id = "clk";
        s.protocol = val::TimeProtocol::NtsNtp;
        s.authenticated = true;
        s.hash_algorithm = "SHA-384";
        s.soe_delta_ms = 1.0;
    }
    tsv[2].soe_delta_ms = 100.0;
    if (!val::v5_forensic_time(tsv).pass) {
        ok = false;
        detail << "SOE delta=100 ms should pass; ";
    }

    report(7, "boundary fixtures: 0.995 passes, 4.5 fails, 100 ms passes, 1e-4 passes", ok,
           detail.str());
}

// 8. Forced-success traces carry exactly the published timeline rows and
//    technique sets.
void criterion_8() {
    using risk::PhaseModel;
    using risk::PostureProfile;
    using risk::ScenarioKind;
    const PhaseModel certain{{1, 1}, {1, 1}, {1, 1}};
    bool ok = true;
    std::ostringstream detail;

    struct Row {
        const char* time;
        const char* phase;
        const char* action;
    };
    const std::vector<Row> scar_rows = {
        {"Day -7", "Reconnaissance", "OPC UA namespace enumeration"},
        {"Day 0, 02:00", "Deployment", "Firmware upload (maintenance window)"},
        {"Day 14, 14:30", "Trigger", "False turbine trip during power reduction"},
        {"T+2.3s", "Physical", "Core temp exceeds 302°C (limit: 285°C)"},
        {"T+8.7s", "Safety Failure", "RCIC disabled by malicious logic"},
        {"T+47s", "Critical", "Core damage threshold approached"},
    };
    const std::vector<Row> dawn_rows = {
        {"Day -10", "Reconnaissance", "OPC UA namespace mapping"},
        {"Day 0, 03:00", "Activation", "Trigger signal during maintenance"},
        {"Day 21, 11:15", "Sabotage", "False pressure reading during transient"},
        {"T+1.8s", "Physical", "SCRAM signal blocked by SIS override"},
        {"T+14.5s", "Safety Failure", "Core temperature exceeds 310°C"},
        {"T+52s", "Critical", "Core damage initiation"},
    };
    const std::map<std::string, std::set<std::string>> scar_cov = {
        {"Initial Access", {"T0863", "T0882", "T1001"}},
        {"Execution", {"T0857"}},
        {"Persistence", {"T0867", "T0888", "T1005"}},
        {"Defense Evasion", {"T0848", "T0852", "T0833", "T0855", "T1003"}},
        {"Discovery", {"T0842"}},
        {"Collection", {"T0802", "T1002"}},
        {"Command & Control", {"T0889"}},
        {"Inhibit Response", {"T0817", "T0835"}},
        {"Impair Process Control", {"T0806"}},
        {"Impact", {"T0815", "T0834", "T1004"}},
        {"Credential Access", {"T1006"}},
    };
    const std::map<std::string, std::set<std::string>> dawn_cov = {
        {"Initial Access", {"T0863", "T1001"}},
        {"Persistence", {"T0867", "T1005"}},
        {"Defense Evasion", {"T0848", "T0852", "T0855", "T1003"}},
        {"Discovery", {"T0842"}},
        {"Collection", {"T0802", "T1002"}},
        {"Command & Control", {"T0889"}},
        {"Inhibit Response", {"T0817", "T0835"}},
        {"Impair Process Control", {"T0806"}},
        {"Impact", {"T0815", "T0834", "T1004"}},
        {"Credential Access", {"T1006"}},
    };

    auto check = [&](const char* name, ScenarioKind kind, const char* topo_name,
                     const std::vector<Row>& want_rows,
                     const std::map<std::string, std::set<std::string>>& want_cov) {
        scn::Scenario s = scn::load_scenario(kind);
        PostureProfile forced{"acceptance/forced", kind, certain,
                              risk::PostureSource::SectionText};
        scn::RunTrace trace =
            scn::simulate_run(s, topo::builtin_topology(topo_name), forced, 1);
        auto rows = scn::timeline_table(trace);
        if (rows.size() != want_rows.size()) {
            ok = false;
            detail << name << " row count " << rows.size() << "; ";
            return;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].time != want_rows[i].time || rows[i].phase != want_rows[i].phase ||
                rows[i].action != want_rows[i].action) {
                ok = false;
                detail << name << " row " << i << " mismatch; ";
            }
        }
        if (scn::technique_coverage(trace) != want_cov) {
            ok = false;
            detail << name << " technique sets differ; ";
        }
    };
    check("scar", ScenarioKind::Scar, "scar-reference", scar_rows, scar_cov);
    check("dawn", ScenarioKind::Dawn, "dawn-reference", dawn_rows, dawn_cov);
    report(8, "forced-success traces equal the six timeline rows and technique sets", ok,
           detail.str());
}

// 9. Simulator and risk-engine samplers agree within 3 standard errors for
//    every built-in posture at n=1e5; the whole comparison stays under 60 s.
void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;
    const std::uint64_t n = 100000;
    for (const auto& posture : risk::builtin_postures()) {
        const char* topo_name = posture.scenario == risk::ScenarioKind::Scar
                                    ? "scar-reference"
                                    : "dawn-reference";
        scn::Scenario s = scn::load_scenario(posture.scenario);
        auto batch =
            scn::simulate_batch(s, topo::builtin_topology(topo_name), posture, n, 777);
        auto mc = risk::monte_carlo(posture.phases, n, 777);
        const double se =
            std::sqrt(std::max(mc.estimate * (1.0 - mc.estimate), 1e-12) / double(n));
        const double diff = std::fabs(batch.success_rate - mc.estimate);
        if (diff > 3.0 * se) {
            ok = false;
            detail << posture.name << " diff " << diff << " > 3*SE " << 3.0 * se << "; ";
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60.0) {
        ok = false;
        detail << "runtime " << secs << " s";
    }
    char timing[48];
    std::snprintf(timing, sizeof(timing), "8 postures x 1e5 runs in %.2f s", secs);
    report(9, "sampler equivalence within 3 standard errors for all eight postures", ok,
           detail.str().empty() ? timing : detail.str());
}

// 10. Re-running a command reproduces byte-identical JSON after stripping the
//     timestamp, verified by digest comparison.
void criterion_10() {
    bool ok = true;
    std::ostringstream detail;
    fs::path dir = fs::temp_directory_path() / "otquant_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::vector<std::vector<std::string>> commands = {
        {"risk", "--scenario", "scar", "--posture", "current-infrastructure", "--mc", "50000",
         "--seed", "123", "--attempts", "3", "--partitions", "4"},
        {"simulate", "--scenario", "dawn", "--posture", "baseline", "--runs", "5000", "--seed",
         "55"},
        {"simulate", "--scenario", "scar", "--posture", "targeted", "--trace-one", "--seed",
         "3"},
    };
    int idx = 0;
    for (const auto& cmd : commands) {
        const std::string file = (dir / ("r" + std::to_string(idx) + ".json")).string();
        ++idx;
        auto full = cmd;
        full.insert(full.end(), {"--output", file});
        auto run_once = [&]() -> json {
            std::ostringstream out, err;
            if (cli::dispatch(full, out, err) != 0) {
                ok = false;
                detail << "command failed: " << err.str() << "; ";
                return {};
            }
            std::ifstream in(file);
            json j;
            in >> j;
            return j;
        };
        const json ja = run_once();  // identical command both times
        const json jb = run_once();
        const std::string da = rep::fnv1a64_hex(rep::dump_report(rep::strip_timestamp(ja)));
        const std::string db = rep::fnv1a64_hex(rep::dump_report(rep::strip_timestamp(jb)));
        if (da != db) {
            ok = false;
            detail << "digest mismatch on rerun of command " << idx << "; ";
        }
    }
    fs::remove_all(dir);
    report(10, "identical manifests reproduce byte-identical JSON (timestamp excluded)", ok,
           detail.str());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    }
    return failures;
}
