#include "otquant/telemetry.hpp"

#include <filesystem>
#include <fstream>
#include <functional>

#include <json.hpp>

namespace otquant::val {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
std::vector<T> load_jsonl(const std::string& path, const char* expected_type,
                          const std::function<T(const json&)>& parse) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open telemetry file: " + path);
    std::vector<T> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
            const std::string rt = j.at("record_type").get<std::string>();
            if (rt != expected_type) {
                throw ConfigError(std::string("unexpected record_type '") + rt + "', expected '" +
                                  expected_type + "'");
            }
            out.push_back(parse(j));
        } catch (const json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::optional<std::string> opt_string(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

TimeProtocol parse_time_protocol(const std::string& s) {
    if (s == "nts-ntp") return TimeProtocol::NtsNtp;
    if (s == "plain-ntp") return TimeProtocol::PlainNtp;
    if (s == "ptp-auth") return TimeProtocol::PtpAuth;
    if (s == "ptp-plain") return TimeProtocol::PtpPlain;
    throw ConfigError("unknown time protocol: " + s);
}

}  // namespace

std::vector<TlsHandshakeRecord> load_tls_handshakes(const std::string& path) {
    return load_jsonl<TlsHandshakeRecord>(path, "tls_handshake", [](const json& j) {
        TlsHandshakeRecord r;
        r.session_id = j.at("session_id").get<std::string>();
        r.negotiated_suite = j.value("negotiated_suite", "");
        r.hybrid_group = opt_string(j, "hybrid_group");
        r.kem_group = opt_string(j, "kem_group");
        for (const auto& a : j.value("signature_algorithms", json::array())) {
            r.signature_algorithms.push_back(a.get<std::string>());
        }
        r.hello_retry = j.value("hello_retry", false);
        const std::string d = j.at("policy_decision").get<std::string>();
        if (d == "accept") {
            r.policy_decision = PolicyDecision::Accept;
        } else if (d == "reject") {
            r.policy_decision = PolicyDecision::Reject;
        } else {
            throw ConfigError("unknown policy_decision: " + d);
        }
        r.reject_reason = opt_string(j, "reject_reason");
        if (r.policy_decision == PolicyDecision::Reject && !r.reject_reason) {
            throw ConfigError("reject record without reject_reason: " + r.session_id);
        }
        r.timestamp = j.value("timestamp", std::int64_t{0});
        return r;
    });
}

std::vector<FirmwareSignEvent> load_firmware_events(const std::string& path) {
    return load_jsonl<FirmwareSignEvent>(path, "firmware_sign", [](const json& j) {
        FirmwareSignEvent e;
        e.artifact_id = j.at("artifact_id").get<std::string>();
        e.algorithm = j.at("algorithm").get<std::string>();
        e.chain_length = j.at("chain_length").get<int>();
        if (e.chain_length < 1) throw ConfigError("chain_length must be >= 1: " + e.artifact_id);
        e.version_counter = j.value("version_counter", std::int64_t{0});
        e.anti_rollback_enforced = j.value("anti_rollback_enforced", false);
        e.attestation_present = j.value("attestation_present", false);
        return e;
    });
}

std::vector<TimeSyncSample> load_time_sync(const std::string& path) {
    return load_jsonl<TimeSyncSample>(path, "time_sync", [](const json& j) {
        TimeSyncSample s;
        s.source_id = j.at("source_id").get<std::string>();
        s.protocol = parse_time_protocol(j.at("protocol").get<std::string>());
        s.authenticated = j.value("authenticated", false);
        if ((s.protocol == TimeProtocol::NtsNtp || s.protocol == TimeProtocol::PtpAuth) &&
            !s.authenticated) {
            throw ConfigError("authenticated protocol sample marked unauthenticated: " +
                              s.source_id);
        }
        s.soe_delta_ms = j.at("soe_delta_ms").get<double>();
        s.hash_algorithm = j.value("hash_algorithm", "");
        return s;
    });
}

std::vector<SideChannelAttestation> load_attestations(const std::string& path) {
    return load_jsonl<SideChannelAttestation>(path, "side_channel", [](const json& j) {
        SideChannelAttestation a;
        a.build_id = j.at("build_id").get<std::string>();
        for (const auto& f : j.value("flags", json::array())) {
            a.flags.insert(f.get<std::string>());
        }
        a.tvla_t = j.at("tvla_t").get<double>();
        if (a.tvla_t < 0) throw ConfigError("tvla_t must be >= 0: " + a.build_id);
        a.attested = j.value("attested", false);
        return a;
    });
}

std::vector<LatencySample> load_latency_samples(const std::string& path) {
    return load_jsonl<LatencySample>(path, "latency_sample", [](const json& j) {
        LatencySample s;
        s.kem_enc_ms = j.at("kem_enc_ms").get<double>();
        s.kem_dec_ms = j.at("kem_dec_ms").get<double>();
        s.sig_sign_ms = j.at("sig_sign_ms").get<double>();
        s.sig_verify_ms = j.at("sig_verify_ms").get<double>();
        s.rtt_ms = j.at("rtt_ms").get<double>();
        return s;
    });
}

std::vector<ArtifactRecord> load_artifacts(const std::string& path) {
    return load_jsonl<ArtifactRecord>(path, "pqc_artifact", [](const json& j) {
        ArtifactRecord a;
        a.artifact = j.at("artifact").get<std::string>();
        a.size_bytes = j.at("size_bytes").get<std::int64_t>();
        a.mtu_bytes = j.value("mtu_bytes", std::int64_t{1500});
        if (j.contains("overhead_bytes") && !j.at("overhead_bytes").is_null()) {
            a.overhead_bytes = j.at("overhead_bytes").get<std::int64_t>();
        }
        for (const auto& l : j.value("stack", json::array())) {
            a.stack.push_back(l.get<std::string>());
        }
        return a;
    });
}

std::vector<HelloProbe> load_probes(const std::string& path) {
    return load_jsonl<HelloProbe>(path, "client_hello_probe", [](const json& j) {
        HelloProbe p;
        p.probe_id = j.at("probe_id").get<std::string>();
        p.offer = j.at("offer").get<std::string>();
        const std::string r = j.at("response").get<std::string>();
        if (r == "reject") {
            p.response = ProbeResponse::Reject;
        } else if (r == "accept") {
            p.response = ProbeResponse::Accept;
        } else if (r == "retry-steer") {
            p.response = ProbeResponse::RetrySteer;
        } else {
            throw ConfigError("unknown probe response: " + r);
        }
        p.reject_reason = opt_string(j, "reject_reason");
        p.resulting_suite = opt_string(j, "resulting_suite");
        p.fallback_classical = j.value("fallback_classical", false);
        return p;
    });
}

HandshakePolicy load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open policy file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    HandshakePolicy p;
    for (const auto& g : j.value("pinned_hybrid_groups", json::array())) {
        p.pinned_hybrid_groups.insert(g.get<std::string>());
    }
    if (p.pinned_hybrid_groups.empty()) {
        throw ConfigError(path + ": pinned_hybrid_groups must not be empty");
    }
    return p;
}

TelemetryBundle TelemetryBundle::load(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("not a bundle directory: " + dir);
    TelemetryBundle b;
    auto have = [&](const char* name) { return fs::exists(fs::path(dir) / name); };
    auto at = [&](const char* name) { return (fs::path(dir) / name).string(); };

    if (have("policy.json")) b.policy = load_policy(at("policy.json"));
    if (have("v1_handshakes.jsonl")) b.handshakes = load_tls_handshakes(at("v1_handshakes.jsonl"));
    if (have("v2_artifacts.jsonl")) b.artifacts = load_artifacts(at("v2_artifacts.jsonl"));
    if (have("v3_latency_server.jsonl")) {
        b.latency_server = load_latency_samples(at("v3_latency_server.jsonl"));
    }
    if (have("v3_latency_control_loop.jsonl")) {
        b.latency_control_loop = load_latency_samples(at("v3_latency_control_loop.jsonl"));
    }
    if (have("v4_firmware.jsonl")) b.firmware = load_firmware_events(at("v4_firmware.jsonl"));
    if (have("v5_timesync.jsonl")) b.time_sync = load_time_sync(at("v5_timesync.jsonl"));
    if (have("v6_attestations.jsonl")) {
        b.attestations = load_attestations(at("v6_attestations.jsonl"));
    }
    if (have("v7_probes.jsonl")) b.probes = load_probes(at("v7_probes.jsonl"));
    return b;
}

}  // namespace otquant::val
