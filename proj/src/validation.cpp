#include "otquant/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace otquant::val {

namespace {
constexpr double kSkewAdvisoryMs = 10.0;
constexpr double kSkewBoundMs = 100.0;
constexpr double kTvlaBound = 4.5;
constexpr double kP95BudgetMs = 50.0;
}  // namespace

std::int64_t stack_layer_bytes(const std::string& layer) {
    if (layer == "eth") return 18;
    if (layer == "vlan") return 4;
    if (layer == "ip4") return 20;
    if (layer == "tcp") return 20;
    if (layer == "tls") return 21;  // 5 record header + 16 AEAD tag
    throw DomainError("unknown stack layer: " + layer);
}

std::int64_t stack_overhead_bytes(const std::vector<std::string>& stack) {
    std::int64_t total = 0;
    for (const auto& l : stack) total += stack_layer_bytes(l);
    return total;
}

std::int64_t default_overhead_bytes() {
    return stack_overhead_bytes({"eth", "ip4", "tcp", "tls"});
}

// ---- V1 ----------------------------------------------------------------

void V1Counts::add(const TlsHandshakeRecord& r, const HandshakePolicy& policy) {
    ++total;
    if (r.classical_only()) ++downgrade_attempts;
    if (r.policy_decision == PolicyDecision::Accept) {
        const std::string* group =
            r.hybrid_group ? &*r.hybrid_group : (r.kem_group ? &*r.kem_group : nullptr);
        if (group && policy.pinned_hybrid_groups.count(*group)) ++conforming_accepts;
    } else {
        ++rejects;
        if (!r.reject_reason || r.reject_reason->empty()) ++rejects_without_reason;
    }
}

void V1Counts::merge(const V1Counts& o) {
    total += o.total;
    conforming_accepts += o.conforming_accepts;
    downgrade_attempts += o.downgrade_attempts;
    rejects += o.rejects;
    rejects_without_reason += o.rejects_without_reason;
}

TestResult v1_handshake_conformity(std::span<const TlsHandshakeRecord> records,
                                   const HandshakePolicy& policy) {
    if (records.empty()) throw UndefinedMetricError("V1 undefined over an empty stream");
    V1Counts c;
    for (const auto& r : records) c.add(r, policy);

    TestResult t;
    t.evaluated = true;
    t.metrics["conformance_rate"] = static_cast<double>(c.conforming_accepts) / c.total;
    t.metrics["downgrade_rate"] = static_cast<double>(c.downgrade_attempts) / c.total;
    t.metrics["records"] = static_cast<double>(c.total);

    // conformance >= 0.995  <=>  200*conforming >= 199*total
    const bool conformance_ok = 200 * c.conforming_accepts >= 199 * c.total;
    // downgrade <= 1e-4  <=>  10000*attempts <= total
    const bool downgrade_ok = 10000 * c.downgrade_attempts <= c.total;
    const bool reasons_ok = c.rejects_without_reason == 0;
    if (!conformance_ok) t.violations.push_back("conformance rate below 0.995");
    if (!downgrade_ok) t.violations.push_back("downgrade attempts above 1e-4");
    if (!reasons_ok) t.violations.push_back("reject without logged reason");
    t.pass = conformance_ok && downgrade_ok && reasons_ok;
    return t;
}

// ---- V2 ----------------------------------------------------------------

FragmentationResult v2_fragmentation(std::int64_t artifact_bytes, std::int64_t mtu_bytes,
                                     std::int64_t overhead_bytes) {
    if (mtu_bytes <= 0) throw DomainError("mtu must be positive");
    if (artifact_bytes < 0 || overhead_bytes < 0) {
        throw DomainError("artifact and overhead sizes must be non-negative");
    }
    FragmentationResult r;
    const std::int64_t payload = overhead_bytes + artifact_bytes;
    r.n_fragments = (payload + mtu_bytes - 1) / mtu_bytes;
    if (payload == 0) {
        r.degenerate = true;
        r.n_fragments = 1;
    }
    r.pass = r.n_fragments == 1;
    return r;
}

TestResult v2_artifacts(std::span<const ArtifactRecord> artifacts) {
    if (artifacts.empty()) throw UndefinedMetricError("V2 undefined over an empty stream");
    TestResult t;
    t.evaluated = true;
    t.pass = true;
    std::int64_t worst = 0;
    for (const auto& a : artifacts) {
        std::int64_t overhead = a.overhead_bytes
                                    ? *a.overhead_bytes
                                    : (a.stack.empty() ? default_overhead_bytes()
                                                       : stack_overhead_bytes(a.stack));
        FragmentationResult r = v2_fragmentation(a.size_bytes, a.mtu_bytes, overhead);
        worst = std::max(worst, r.n_fragments);
        if (r.degenerate) t.annotations.push_back(a.artifact + ": empty artifact, N clamped to 1");
        if (!r.pass) {
            t.pass = false;
            t.violations.push_back(a.artifact + ": N_fragments=" + std::to_string(r.n_fragments));
        }
    }
    t.metrics["max_fragments"] = static_cast<double>(worst);
    t.metrics["artifacts"] = static_cast<double>(artifacts.size());
    return t;
}

// ---- V3 ----------------------------------------------------------------

double nearest_rank_percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw UndefinedMetricError("percentile of an empty set");
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * values.size()));
    if (rank == 0) rank = 1;
    return values[rank - 1];
}

TestResult v3_latency(std::span<const LatencySample> samples, LatencyContext context) {
    TestResult t;
    t.evaluated = true;
    if (context == LatencyContext::ControlLoop) {
        t.metrics["samples"] = static_cast<double>(samples.size());
        t.pass = samples.empty();
        if (!t.pass) {
            for (std::size_t i = 0; i < samples.size(); ++i) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "on-path handshake observed: t_hs=%.3f ms",
                              samples[i].t_hs());
                t.violations.push_back(buf);
            }
        }
        return t;
    }
    if (samples.empty()) throw UndefinedMetricError("V3 server-class requires >= 1 sample");
    std::vector<double> hs;
    hs.reserve(samples.size());
    for (const auto& s : samples) hs.push_back(s.t_hs());
    const double p95 = nearest_rank_percentile(hs, 95.0);
    t.metrics["p95_ms"] = p95;
    t.metrics["samples"] = static_cast<double>(samples.size());
    t.pass = p95 <= kP95BudgetMs;
    if (!t.pass) t.violations.push_back("p95 handshake latency above 50 ms");
    return t;
}

// ---- V4 ----------------------------------------------------------------

void V4Counts::add(const FirmwareSignEvent& e) {
    ++total;
    if (e.algorithm == "ML-DSA-65") {
        ++mldsa65;
    } else if (e.algorithm == "SLH-DSA-128s") {
        ++slhdsa128s;
    } else {
        ++other_algorithms;
    }
    max_chain = std::max(max_chain, static_cast<std::int64_t>(e.chain_length));
    if (e.chain_length > 2) chain_violations.push_back(e.artifact_id);
    if (e.anti_rollback_enforced) {
        ++rollback_enforced;
    } else {
        rollback_violations.push_back(e.artifact_id);
    }
}

void V4Counts::merge(const V4Counts& o) {
    total += o.total;
    mldsa65 += o.mldsa65;
    slhdsa128s += o.slhdsa128s;
    other_algorithms += o.other_algorithms;
    max_chain = std::max(max_chain, o.max_chain);
    rollback_enforced += o.rollback_enforced;
    chain_violations.insert(chain_violations.end(), o.chain_violations.begin(),
                            o.chain_violations.end());
    rollback_violations.insert(rollback_violations.end(), o.rollback_violations.begin(),
                               o.rollback_violations.end());
}

TestResult v4_code_signing(std::span<const FirmwareSignEvent> events) {
    if (events.empty()) throw UndefinedMetricError("V4 undefined over an empty stream");
    V4Counts c;
    for (const auto& e : events) c.add(e);

    TestResult t;
    t.evaluated = true;
    t.metrics["mldsa_share"] = static_cast<double>(c.mldsa65) / c.total;
    t.metrics["slhdsa_share"] = static_cast<double>(c.slhdsa128s) / c.total;
    t.metrics["max_chain"] = static_cast<double>(c.max_chain);
    t.metrics["rollback_rate"] = static_cast<double>(c.rollback_enforced) / c.total;

    const bool mldsa_ok = 100 * c.mldsa65 >= 99 * c.total;     // >= 0.99
    const bool slhdsa_ok = 100 * c.slhdsa128s <= c.total;      // <= 0.01
    const bool chain_ok = c.max_chain <= 2;
    const bool rollback_ok = c.rollback_enforced == c.total;   // == 1.0
    if (!mldsa_ok) t.violations.push_back("ML-DSA-65 share below 0.99");
    if (!slhdsa_ok) t.violations.push_back("SLH-DSA-128s share above 0.01");
    for (const auto& id : c.chain_violations) t.violations.push_back("chain length > 2: " + id);
    for (const auto& id : c.rollback_violations) {
        t.violations.push_back("anti-rollback not enforced: " + id);
    }
    t.pass = mldsa_ok && slhdsa_ok && chain_ok && rollback_ok;
    return t;
}

// ---- V5 ----------------------------------------------------------------

namespace {
bool is_strong_hash(const std::string& h) {
    return h == "SHA-384" || h == "SHA-512" || h == "SHA3-384" || h == "SHA3-512";
}
}  // namespace

void V5Counts::add(const TimeSyncSample& s) {
    ++total;
    if (is_strong_hash(s.hash_algorithm)) ++strong_hash;
    if (s.authenticated) ++authenticated;
    const double a = std::fabs(s.soe_delta_ms);
    max_abs_delta_ms = std::max(max_abs_delta_ms, a);
    if (a > kSkewBoundMs) {
        skew_violations.push_back(s.source_id);
    } else if (a > kSkewAdvisoryMs) {
        ++advisory_skew_samples;
    }
}

void V5Counts::merge(const V5Counts& o) {
    total += o.total;
    strong_hash += o.strong_hash;
    authenticated += o.authenticated;
    max_abs_delta_ms = std::max(max_abs_delta_ms, o.max_abs_delta_ms);
    advisory_skew_samples += o.advisory_skew_samples;
    skew_violations.insert(skew_violations.end(), o.skew_violations.begin(),
                           o.skew_violations.end());
}

TestResult v5_forensic_time(std::span<const TimeSyncSample> samples) {
    if (samples.empty()) throw UndefinedMetricError("V5 undefined over an empty stream");
    V5Counts c;
    for (const auto& s : samples) c.add(s);

    TestResult t;
    t.evaluated = true;
    t.metrics["strong_hash_share"] = static_cast<double>(c.strong_hash) / c.total;
    t.metrics["auth_time_share"] = static_cast<double>(c.authenticated) / c.total;
    t.metrics["max_abs_soe_delta_ms"] = c.max_abs_delta_ms;

    const bool hash_ok = 1000 * c.strong_hash >= 999 * c.total;   // >= 0.999
    const bool auth_ok = 1000 * c.authenticated >= 999 * c.total; // >= 0.999
    const bool skew_ok = c.skew_violations.empty();               // max |delta| <= 100 ms
    if (!hash_ok) t.violations.push_back("strong-hash share below 0.999");
    if (!auth_ok) t.violations.push_back("authenticated-time share below 0.999");
    for (const auto& id : c.skew_violations) t.violations.push_back("SOE skew above 100 ms: " + id);
    if (c.advisory_skew_samples > 0) {
        t.annotations.push_back("sub-threshold skew anomaly: " +
                                std::to_string(c.advisory_skew_samples) +
                                " sample(s) above 10 ms advisory level");
    }
    t.pass = hash_ok && auth_ok && skew_ok;
    return t;
}

// ---- V6 ----------------------------------------------------------------

TestResult v6_side_channel(std::span<const SideChannelAttestation> attestations) {
    if (attestations.empty()) throw UndefinedMetricError("V6 undefined over an empty stream");
    TestResult t;
    t.evaluated = true;
    t.pass = true;
    double max_t = 0.0;
    for (const auto& a : attestations) {
        max_t = std::max(max_t, a.tvla_t);
        if (!a.attested) {
            t.pass = false;
            t.violations.push_back("unattested build: " + a.build_id);
        }
        if (!(a.tvla_t < kTvlaBound)) {  // strict inequality
            t.pass = false;
            t.violations.push_back("TVLA |t| not below 4.5: " + a.build_id);
        }
        if (!a.flags.count("CT_VERIFY") || !a.flags.count("NTT_MASKED")) {
            t.pass = false;
            t.violations.push_back("missing hardening flags: " + a.build_id);
        }
    }
    t.metrics["max_tvla_t"] = max_t;
    t.metrics["builds"] = static_cast<double>(attestations.size());
    return t;
}

// ---- V7 ----------------------------------------------------------------

TestResult v7_negative_tests(const HandshakePolicy& policy, std::span<const HelloProbe> probes) {
    if (probes.empty()) throw UndefinedMetricError("V7 undefined over an empty probe list");
    (void)policy;
    TestResult t;
    t.evaluated = true;
    t.pass = true;
    std::int64_t rejected = 0, steered = 0;
    for (const auto& p : probes) {
        if (p.fallback_classical) {
            t.pass = false;
            t.violations.push_back("silent classical fallback: " + p.probe_id);
            continue;
        }
        switch (p.response) {
            case ProbeResponse::Reject:
                if (!p.reject_reason || p.reject_reason->empty()) {
                    t.pass = false;
                    t.violations.push_back("reject without logged reason: " + p.probe_id);
                } else {
                    ++rejected;
                }
                break;
            case ProbeResponse::RetrySteer:
                ++steered;  // HelloRetryRequest steering to an allowed group is permitted
                break;
            case ProbeResponse::Accept:
                t.pass = false;
                t.violations.push_back("non-conforming probe accepted: " + p.probe_id);
                break;
        }
    }
    t.metrics["probes"] = static_cast<double>(probes.size());
    t.metrics["rejected"] = static_cast<double>(rejected);
    t.metrics["steered"] = static_cast<double>(steered);
    return t;
}

// ---- run_all ------------------------------------------------------------

ValidationReport run_all(const TelemetryBundle& bundle) {
    ValidationReport rep;
    auto not_evaluated = [](const char* why) {
        TestResult t;
        t.evaluated = false;
        t.pass = false;
        t.annotations.push_back(why);
        return t;
    };

    if (bundle.handshakes && bundle.policy) {
        rep.tests["V1"] = v1_handshake_conformity(*bundle.handshakes, *bundle.policy);
    } else {
        rep.tests["V1"] = not_evaluated("not evaluated: missing handshake stream or policy");
    }

    if (bundle.artifacts) {
        rep.tests["V2"] = v2_artifacts(*bundle.artifacts);
    } else {
        rep.tests["V2"] = not_evaluated("not evaluated: missing artifact stream");
    }

    if (bundle.latency_server && bundle.latency_control_loop) {
        TestResult server = v3_latency(*bundle.latency_server, LatencyContext::ServerClass);
        TestResult loop = v3_latency(*bundle.latency_control_loop, LatencyContext::ControlLoop);
        TestResult merged = server;
        merged.pass = server.pass && loop.pass;
        merged.metrics["control_loop_samples"] = loop.metrics["samples"];
        merged.violations.insert(merged.violations.end(), loop.violations.begin(),
                                 loop.violations.end());
        rep.tests["V3"] = merged;
    } else {
        rep.tests["V3"] = not_evaluated("not evaluated: missing latency streams");
    }

    if (bundle.firmware) {
        rep.tests["V4"] = v4_code_signing(*bundle.firmware);
    } else {
        rep.tests["V4"] = not_evaluated("not evaluated: missing firmware stream");
    }

    if (bundle.time_sync) {
        rep.tests["V5"] = v5_forensic_time(*bundle.time_sync);
    } else {
        rep.tests["V5"] = not_evaluated("not evaluated: missing time-sync stream");
    }

    if (bundle.attestations) {
        rep.tests["V6"] = v6_side_channel(*bundle.attestations);
    } else {
        rep.tests["V6"] = not_evaluated("not evaluated: missing attestation stream");
    }

    if (bundle.probes && bundle.policy) {
        rep.tests["V7"] = v7_negative_tests(*bundle.policy, *bundle.probes);
    } else {
        rep.tests["V7"] = not_evaluated("not evaluated: missing probe stream or policy");
    }

    rep.overall_pass = true;
    for (const auto& [name, t] : rep.tests) {
        if (!t.evaluated || !t.pass) rep.overall_pass = false;
    }
    return rep;
}

std::string report_table(const ValidationReport& report) {
    std::ostringstream os;
    os << "test  result          key metrics\n";
    for (const auto& [name, t] : report.tests) {
        std::string result = !t.evaluated ? "not evaluated" : (t.pass ? "PASS" : "FAIL");
        os << name << "    ";
        os.width(15);
        os << std::left << result;
        bool first = true;
        for (const auto& [k, v] : t.metrics) {
            if (!first) os << ", ";
            first = false;
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%s=%g", k.c_str(), v);
            os << buf;
        }
        os << '\n';
        for (const auto& v : t.violations) os << "      violation: " << v << '\n';
        for (const auto& a : t.annotations) os << "      note: " << a << '\n';
    }
    os << "overall: " << (report.overall_pass ? "PASS" : "FAIL") << '\n';
    return os.str();
}

}  // namespace otquant::val
