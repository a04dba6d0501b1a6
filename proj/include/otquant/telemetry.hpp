#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "otquant/errors.hpp"

namespace otquant::val {

enum class PolicyDecision { Accept, Reject };

struct TlsHandshakeRecord {
    std::string session_id;
    std::string negotiated_suite;
    std::optional<std::string> hybrid_group;
    std::optional<std::string> kem_group;
    std::vector<std::string> signature_algorithms;
    bool hello_retry = false;
    PolicyDecision policy_decision = PolicyDecision::Accept;
    std::optional<std::string> reject_reason;
    std::int64_t timestamp = 0;

    bool classical_only() const { return !hybrid_group && !kem_group; }
};

struct FirmwareSignEvent {
    std::string artifact_id;
    std::string algorithm;
    int chain_length = 1;
    std::int64_t version_counter = 0;
    bool anti_rollback_enforced = false;
    bool attestation_present = false;
};

enum class TimeProtocol { NtsNtp, PlainNtp, PtpAuth, PtpPlain };

struct TimeSyncSample {
    std::string source_id;
    TimeProtocol protocol = TimeProtocol::PlainNtp;
    bool authenticated = false;
    double soe_delta_ms = 0.0;
    std::string hash_algorithm;
};

struct SideChannelAttestation {
    std::string build_id;
    std::set<std::string> flags;  // over {CT_VERIFY, NTT_MASKED}
    double tvla_t = 0.0;
    bool attested = false;
};

struct LatencySample {
    double kem_enc_ms = 0.0;
    double kem_dec_ms = 0.0;
    double sig_sign_ms = 0.0;
    double sig_verify_ms = 0.0;
    double rtt_ms = 0.0;

    double t_hs() const { return kem_enc_ms + kem_dec_ms + sig_sign_ms + sig_verify_ms + rtt_ms; }
};

struct ArtifactRecord {
    std::string artifact;
    std::int64_t size_bytes = 0;
    std::int64_t mtu_bytes = 1500;
    std::optional<std::int64_t> overhead_bytes;  // absent -> default stack
    std::vector<std::string> stack;              // layer names; empty -> default
};

enum class ProbeResponse { Reject, Accept, RetrySteer };

struct HelloProbe {
    std::string probe_id;
    std::string offer;  // e.g. "classical-only", "mismatched-group"
    ProbeResponse response = ProbeResponse::Reject;
    std::optional<std::string> reject_reason;
    std::optional<std::string> resulting_suite;
    bool fallback_classical = false;
};

struct HandshakePolicy {
    std::set<std::string> pinned_hybrid_groups;
};

/// JSON-lines loaders. One record per line with a `record_type` discriminator;
/// malformed lines raise ConfigError naming the file and line number.
std::vector<TlsHandshakeRecord> load_tls_handshakes(const std::string& path);
std::vector<FirmwareSignEvent> load_firmware_events(const std::string& path);
std::vector<TimeSyncSample> load_time_sync(const std::string& path);
std::vector<SideChannelAttestation> load_attestations(const std::string& path);
std::vector<LatencySample> load_latency_samples(const std::string& path);
std::vector<ArtifactRecord> load_artifacts(const std::string& path);
std::vector<HelloProbe> load_probes(const std::string& path);
HandshakePolicy load_policy(const std::string& path);

/// Telemetry bundle directory layout; a stream is absent when its file is
/// missing (distinct from present-but-empty).
struct TelemetryBundle {
    std::optional<HandshakePolicy> policy;
    std::optional<std::vector<TlsHandshakeRecord>> handshakes;
    std::optional<std::vector<ArtifactRecord>> artifacts;
    std::optional<std::vector<LatencySample>> latency_server;
    std::optional<std::vector<LatencySample>> latency_control_loop;
    std::optional<std::vector<FirmwareSignEvent>> firmware;
    std::optional<std::vector<TimeSyncSample>> time_sync;
    std::optional<std::vector<SideChannelAttestation>> attestations;
    std::optional<std::vector<HelloProbe>> probes;

    static TelemetryBundle load(const std::string& dir);
};

}  // namespace otquant::val
