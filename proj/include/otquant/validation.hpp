#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "otquant/telemetry.hpp"

namespace otquant::val {

struct TestResult {
    bool evaluated = false;
    bool pass = false;
    std::map<std::string, double> metrics;
    std::vector<std::string> violations;
    std::vector<std::string> annotations;
};

struct ValidationReport {
    std::map<std::string, TestResult> tests;  // "V1".."V7"
    bool overall_pass = false;
};

/// Protocol stack overhead per layer, bytes. Default stack eth,ip4,tcp,tls.
/// tls covers the record header (5) plus the AEAD tag (16).
std::int64_t stack_layer_bytes(const std::string& layer);
std::int64_t stack_overhead_bytes(const std::vector<std::string>& stack);
std::int64_t default_overhead_bytes();  // 79

// --- V1: handshake conformity ------------------------------------------------
// Counts merge associatively across stream partitions; rate thresholds are
// evaluated in integer arithmetic so the >=0.995 / <=1e-4 boundaries are exact.
struct V1Counts {
    std::int64_t total = 0;
    std::int64_t conforming_accepts = 0;
    std::int64_t downgrade_attempts = 0;  // classical-only records
    std::int64_t rejects = 0;
    std::int64_t rejects_without_reason = 0;

    void add(const TlsHandshakeRecord& r, const HandshakePolicy& policy);
    void merge(const V1Counts& other);
};
TestResult v1_handshake_conformity(std::span<const TlsHandshakeRecord> records,
                                   const HandshakePolicy& policy);

// --- V2: MTU / fragmentation --------------------------------------------------
struct FragmentationResult {
    std::int64_t n_fragments = 0;
    bool pass = false;
    bool degenerate = false;  // S == 0: formula value reported, N clamped to 1
};
/// N = ceil((H+S)/M); pass iff N == 1. M must be positive.
FragmentationResult v2_fragmentation(std::int64_t artifact_bytes, std::int64_t mtu_bytes,
                                     std::int64_t overhead_bytes);
TestResult v2_artifacts(std::span<const ArtifactRecord> artifacts);

// --- V3: latency budget --------------------------------------------------------
enum class LatencyContext { ServerClass, ControlLoop };
/// Server-class: nearest-rank p95 of t_hs must be <= 50 ms (needs >= 1 sample).
/// Control-loop: passes only on the empty set (no on-path handshakes).
TestResult v3_latency(std::span<const LatencySample> samples, LatencyContext context);
double nearest_rank_percentile(std::vector<double> values, double pct);

// --- V4: code signing -----------------------------------------------------------
struct V4Counts {
    std::int64_t total = 0;
    std::int64_t mldsa65 = 0;
    std::int64_t slhdsa128s = 0;
    std::int64_t other_algorithms = 0;
    std::int64_t max_chain = 0;
    std::int64_t rollback_enforced = 0;
    std::vector<std::string> chain_violations;
    std::vector<std::string> rollback_violations;

    void add(const FirmwareSignEvent& e);
    void merge(const V4Counts& other);
};
TestResult v4_code_signing(std::span<const FirmwareSignEvent> events);

// --- V5: forensic hashing & time integrity ---------------------------------------
/// Strong hashes: SHA-384/512 and SHA3-384/512. Samples with |delta| above
/// the advisory level (10 ms) but within the 100 ms bound annotate the result
/// as a sub-threshold skew anomaly without failing it.
struct V5Counts {
    std::int64_t total = 0;
    std::int64_t strong_hash = 0;
    std::int64_t authenticated = 0;
    double max_abs_delta_ms = 0.0;
    std::int64_t advisory_skew_samples = 0;
    std::vector<std::string> skew_violations;

    void add(const TimeSyncSample& s);
    void merge(const V5Counts& other);
};
TestResult v5_forensic_time(std::span<const TimeSyncSample> samples);

// --- V6: side-channel attestation --------------------------------------------------
TestResult v6_side_channel(std::span<const SideChannelAttestation> attestations);

// --- V7: negative testing -----------------------------------------------------------
/// Every probe must reject with a logged reason or be steered via retry to an
/// allowed group; any accept or silent classical fallback fails.
TestResult v7_negative_tests(const HandshakePolicy& policy, std::span<const HelloProbe> probes);

/// Runs every test the bundle supplies streams for; missing streams yield a
/// "not evaluated" entry and an overall fail.
ValidationReport run_all(const TelemetryBundle& bundle);

/// Plain-text grid of a report, one row per test.
std::string report_table(const ValidationReport& report);

}  // namespace otquant::val
