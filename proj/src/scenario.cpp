#include "otquant/scenario.hpp"

#include <algorithm>

namespace otquant::scn {

using risk::ScenarioKind;
using topo::PurdueLevel;

void validate(const TimelineParams& t) {
    if (t.scheme == ScenarioKind::Scar) {
        if (t.hndl_window_months < 18 || t.hndl_window_months > 20) {
            throw DomainError("scar HNDL window must lie in [18, 20] months");
        }
    } else {
        if (t.hndl_window_months != 20) {
            throw DomainError("dawn HNDL window must be 20 months");
        }
    }
}

const TechniqueTag& technique(std::string_view id) {
    static const std::map<std::string, TechniqueTag, std::less<>> registry = {
        {"T0802", {"T0802", "Collection", false}},
        {"T0806", {"T0806", "Impair Process Control", false}},
        {"T0815", {"T0815", "Impact", false}},
        {"T0817", {"T0817", "Inhibit Response", false}},
        {"T0833", {"T0833", "Defense Evasion", false}},
        {"T0834", {"T0834", "Impact", false}},
        {"T0835", {"T0835", "Inhibit Response", false}},
        {"T0842", {"T0842", "Discovery", false}},
        {"T0848", {"T0848", "Defense Evasion", false}},
        {"T0852", {"T0852", "Defense Evasion", false}},
        {"T0855", {"T0855", "Defense Evasion", false}},
        {"T0857", {"T0857", "Execution", false}},
        {"T0863", {"T0863", "Initial Access", false}},
        {"T0867", {"T0867", "Persistence", false}},
        {"T0882", {"T0882", "Initial Access", false}},
        {"T0888", {"T0888", "Persistence", false}},
        {"T0889", {"T0889", "Command & Control", false}},
        {"T1001", {"T1001", "Initial Access", true}},
        {"T1002", {"T1002", "Collection", true}},
        {"T1003", {"T1003", "Defense Evasion", true}},
        {"T1004", {"T1004", "Impact", true}},
        {"T1005", {"T1005", "Persistence", true}},
        {"T1006", {"T1006", "Credential Access", true}},
    };
    auto it = registry.find(id);
    if (it == registry.end()) throw DomainError("unknown technique id: " + std::string(id));
    return it->second;
}

namespace {

struct EventSpec {
    std::int64_t offset_ms;
    const char* time_label;
    Phase phase;
    const char* phase_label;
    const char* action;
    PurdueLevel level;
    std::set<std::string> techniques;
    bool detection;
    bool table_row;
    bool impact;
    std::map<std::string, std::string> annotations;
};

AttackEvent make_event(const EventSpec& e) {
    AttackEvent ev;
    ev.offset_ms = e.offset_ms;
    ev.time_label = e.time_label;
    ev.phase = e.phase;
    ev.phase_label = e.phase_label;
    ev.action = e.action;
    ev.level = e.level;
    ev.techniques = e.techniques;
    ev.detection_opportunity = e.detection;
    ev.table_row = e.table_row;
    ev.impact = e.impact;
    ev.annotations = e.annotations;
    return ev;
}

void push_events(std::vector<AttackEvent>& out, const std::vector<EventSpec>& specs) {
    for (const auto& e : specs) out.push_back(make_event(e));
    std::stable_sort(out.begin(), out.end(),
                     [](const AttackEvent& a, const AttackEvent& b) {
                         return a.offset_ms < b.offset_ms;
                     });
}

Scenario build_scar() {
    Scenario s;
    s.name = ScenarioKind::Scar;
    s.timeline.scheme = ScenarioKind::Scar;
    s.timeline.crqc_onset_ms = 12 * kMsPerYear;
    s.timeline.weaponization_lag_ms = 2 * kMsPerYear;           // alpha, mid of 1-3 years
    s.timeline.execution_lag_ms = 3 * kMsPerYear / 4;           // epsilon, mid of 0.5-1 year
    s.timeline.tau_cert_months = 20;                            // credential expiry
    s.timeline.tau_rotation_months = 22;                        // certificate rotation
    s.timeline.hndl_window_months = 18;
    validate(s.timeline);

    s.hndl_volume_tb = 4.2;
    s.ptp_skew_ms = 15.3;
    s.ptp_skew_tol_ms = 0.2;

    const std::int64_t d = kMsPerDay, mo = kMsPerMonth;
    using L = PurdueLevel;
    push_events(s.hndl_events, {
        {0, "Month 0", Phase::Hndl, "", "Supply-chain infiltration of HistorianXpert vendor",
         L::L5, {"T0863"}, true, false, false,
         {{"vendor", "VendorX"}, {"product", "HistorianXpert v3.7"}}},
        {15 * d, "Month 0", Phase::Hndl, "",
         "Trojanized update staged: HistorianXpert_Patch_B283.signed", L::L4, {}, true, false,
         false, {}},
        {1 * mo, "Month 1", Phase::Hndl, "", "Collector installed on DMZ historian mirror",
         L::L3_5, {"T0882"}, true, false, false, {{"ip", "172.16.3.45"}}},
        {1 * mo + 1 * d, "Month 1", Phase::Hndl, "", "Port mirroring enabled on DMZ conduit",
         L::L3_5, {"T0842"}, false, false, false, {{"switch", "Cisco Catalyst 9500"}}},
        {1 * mo + 2 * d, "Month 1", Phase::Hndl, "",
         "Traffic harvesting begins: firmware, OPC UA sessions, VPN, PTP", L::L3_5,
         {"T0802", "T1002"}, false, false, false,
         {{"firmware", "SIS_Controller_FW_v4.2.1.signed"}}},
        {2 * mo, "Month 2", Phase::Hndl, "",
         "Covert exfiltration scheduled: NTP masquerade with SNMP steganography", L::L3_5,
         {"T0857", "T0889"}, true, false, false,
         {{"destination", "198.51.100.73"}, {"cadence", "weekly"}}},
        {18 * mo, "Month 18", Phase::Hndl, "", "Encrypted repository reaches 4.2 TB", L::L3_5,
         {}, false, false, false, {}},
    });

    const std::int64_t T = s.timeline.crqc_onset_ms;
    push_events(s.weaponization_events, {
        {T, "CRQC+0d", Phase::Weaponization, "",
         "Quantum factorization of vendor signing certificate (RSA-2048)", L::L5, {"T1001"},
         false, false, false, {{"target", "VendorX code-signing certificate"}}},
        {T + 30 * d, "CRQC+30d", Phase::Weaponization, "",
         "Quantum factorization of plant root CA (RSA-2048)", L::L5, {}, false, false, false,
         {{"target", "NPP-CA-Root-2016"}}},
        {T + 60 * d, "CRQC+60d", Phase::Weaponization, "",
         "Malicious RCIC logic synthesized and firmware signed", L::L5, {"T0848"}, false, false,
         false,
         {{"artifact", "SIS_Firmware_v4.2.2.signed"},
          {"logic", "IF TurbineTrip AND CoreTemp>285.0 THEN RCIC_Enable:=FALSE"}}},
        {T + 75 * d, "CRQC+75d", Phase::Weaponization, "",
         "OPC UA client certificates forged from factored CA", L::L5, {"T1006"}, false, false,
         false, {}},
    });

    // Execution Day 0 anchors at T + alpha + epsilon; impact offsets hang off
    // the trigger instant within Day 14, 14:30.
    const std::int64_t day0 =
        T + s.timeline.weaponization_lag_ms + s.timeline.execution_lag_ms;
    const std::int64_t trigger = day0 + 14 * d + 14 * 3'600'000 + 30 * 60'000;
    push_events(s.execution_events, {
        {day0 - 7 * d, "Day -7", Phase::Execution, "Reconnaissance",
         "OPC UA namespace enumeration", L::L3, {"T0888"}, true, true, false, {}},
        {day0 + 2 * 3'600'000, "Day 0, 02:00", Phase::Execution, "Deployment",
         "Firmware upload (maintenance window)", L::L1, {"T0867", "T1005"}, true, true, false,
         {{"window", "SM-2023-047"}, {"rootkit", "drv_hal.sys"}}},
        {trigger, "Day 14, 14:30", Phase::Execution, "Trigger",
         "False turbine trip during power reduction", L::L2, {"T0852"}, true, true, false,
         {{"write", "OPC_Write(//DCS/Turbine/Trip_Status, TRUE)"}}},
        {trigger, "Day 14, 14:30", Phase::Execution, "",
         "Rootkit manipulates HMI display", L::L2, {"T0833"}, false, false, false, {}},
        {trigger, "Day 14, 14:30", Phase::Execution, "",
         "PTP grandmaster skew injected (+15.3 ± 0.2 ms)", L::L2, {"T1004", "T0835"},
         false, false, false, {{"skew_ms", "+15.3"}}},
        {trigger, "Day 14, 14:30", Phase::Execution, "",
         "SOE records altered with quantum-forged signatures", L::L1, {"T1003"}, false, false,
         false, {}},
        {trigger, "Day 14, 14:30", Phase::Execution, "",
         "Malware self-destructs, valid false evidence left in place", L::L2, {"T0855"}, false,
         false, false, {}},
    });

    push_events(s.impact_events, {
        {trigger + 2300, "T+2.3s", Phase::Execution, "Physical",
         "Core temp exceeds 302°C (limit: 285°C)", L::L0, {}, false, true, true, {}},
        {trigger + 8700, "T+8.7s", Phase::Execution, "Safety Failure",
         "RCIC disabled by malicious logic", L::L1, {"T0817", "T0806", "T0834"}, false, true,
         true, {}},
        {trigger + 47000, "T+47s", Phase::Execution, "Critical",
         "Core damage threshold approached", L::L0, {"T0815"}, false, true, true, {}},
    });

    s.evidence_classes = {"Digital Signatures", "System Logs",      "Network Traffic",
                          "Time Sync",          "Operator Actions", "Malware Artifacts"};
    s.compromised_ledger = {
        {"Digital Signatures", "Valid (quantum-forged)", "No cryptographic tampering detected"},
        {"System Logs", "Cryptographically consistent",
         "Timeline supports false accident narrative"},
        {"Network Traffic", "Encrypted (RSA-2048)",
         "Asymmetric forensics: Adversary decrypts with quantum; investigators cannot decrypt "
         "without CRQC"},
        {"Time Sync", "PTP skew (+15.3 ± 0.2 ms)",
         "Event sequencing correlation impossible"},
        {"Operator Actions", "Legitimate credentials", "False attribution to human error"},
        {"Malware Artifacts", "Self-destructed", "No physical evidence remains"},
    };

    s.stride = {
        {StrideThreat::Spoofing, {2, 3}},
        {StrideThreat::Tampering, {3}},
        {StrideThreat::Repudiation, {3}},
        {StrideThreat::InformationDisclosure, {1}},
        {StrideThreat::DenialOfService, {3}},
        {StrideThreat::ElevationOfPrivilege, {2, 3}},
    };
    return s;
}

Scenario build_dawn() {
    Scenario s;
    s.name = ScenarioKind::Dawn;
    s.timeline.scheme = ScenarioKind::Dawn;
    s.timeline.crqc_onset_ms = 12 * kMsPerYear;  // T_CRQC
    s.timeline.weaponization_lag_ms = 0;         // activation begins at T_CRQC
    s.timeline.execution_lag_ms = 3 * kMsPerYear / 4;
    s.timeline.tau_cert_months = 22;
    s.timeline.tau_rotation_months = 24;
    s.timeline.hndl_window_months = 20;  // delta
    validate(s.timeline);

    s.hndl_volume_tb = 3.8;
    s.ptp_skew_ms = -12.4;
    s.ptp_skew_tol_ms = 0.3;

    const std::int64_t d = kMsPerDay, mo = kMsPerMonth;
    using L = PurdueLevel;
    push_events(s.hndl_events, {
        {0, "Month 0", Phase::Hndl, "",
         "Spear-phishing lure delivered: Engineering_Schedule_Q4.pdf", L::L4, {"T0863"}, true,
         false, false, {{"exploit", "CVE-2023-12345"}}},
        {2 * d, "Month 0", Phase::Hndl, "", "Foothold on engineering workstation EWS-102",
         L::L3, {}, true, false, false, {}},
        {1 * mo, "Month 1", Phase::Hndl, "",
         "Dormant implantation: qdown.sys rootkit on DCS historian", L::L2, {"T0867"}, false,
         false, false, {{"ip", "172.16.5.21"}}},
        {1 * mo + 2 * d, "Month 1", Phase::Hndl, "",
         "Malicious logic blob injected into SIS controller SIS-PLC-04", L::L1, {"T0867"},
         false, false, false, {{"logic", "IF CorePress > 15.5 MPa THEN Trip_Override = TRUE"}}},
        {1 * mo + 3 * d, "Month 1", Phase::Hndl, "", "Stealth C2 configured over NTP channel",
         L::L2, {"T0889"}, true, false, false, {}},
        {2 * mo, "Month 2", Phase::Hndl, "", "Traffic mirroring at DMZ switch begins", L::L3_5,
         {"T0842"}, false, false, false, {{"switch", "Cisco IE-4000"}}},
        {2 * mo + 1 * d, "Month 2", Phase::Hndl, "",
         "Harvest of VPN sessions, firmware updates, OPC UA certificates", L::L3_5,
         {"T0802", "T1002"}, false, false, false, {}},
        {3 * mo, "Month 3", Phase::Hndl, "", "DNS tunneling exfiltration to 198.51.100.55",
         L::L3_5, {}, true, false, false, {}},
        {20 * mo, "Month 20", Phase::Hndl, "", "Encrypted repository reaches 3.8 TB", L::L3_5,
         {}, false, false, false, {}},
    });

    const std::int64_t T = s.timeline.crqc_onset_ms;
    push_events(s.weaponization_events, {
        {T, "CRQC+0d", Phase::Weaponization, "",
         "Quantum factorization of plant root CA (RSA-2048)", L::L5, {"T1001"}, false, false,
         false, {{"target", "NPP-SA-ROOT-2018"}}},
        {T + 30 * d, "CRQC+30d", Phase::Weaponization, "",
         "Quantum factorization of vendor signing key (RSA-2048)", L::L5, {}, false, false,
         false, {{"target", "Emerson_Sign-2022"}}},
        {T + 45 * d, "CRQC+45d", Phase::Weaponization, "",
         "Activation trigger forged and vendor-signed: qdown_trigger.signed", L::L5, {"T0848"},
         false, false, false, {{"command", "ACTIVATE: QDAWN_PAYLOAD_A"}}},
        {T + 50 * d, "CRQC+50d", Phase::Weaponization, "",
         "OPC UA administrator certificate forged from root CA", L::L5, {"T1006"}, false, false,
         false, {}},
    });

    const std::int64_t day0 = T + s.timeline.execution_lag_ms;
    const std::int64_t trigger = day0 + 21 * d + 11 * 3'600'000 + 15 * 60'000;
    push_events(s.execution_events, {
        {day0 - 10 * d, "Day -10", Phase::Execution, "Reconnaissance",
         "OPC UA namespace mapping", L::L3, {}, true, true, false, {}},
        {day0 + 3 * 3'600'000, "Day 0, 03:00", Phase::Execution, "Activation",
         "Trigger signal during maintenance", L::L2, {"T1005"}, true, true, false,
         {{"work_order", "WO-2025-8832"}}},
        {trigger, "Day 21, 11:15", Phase::Execution, "Sabotage",
         "False pressure reading during transient", L::L2, {"T0852"}, true, true, false,
         {{"spoof", "core pressure 16.2 MPa"}}},
        {trigger, "Day 21, 11:15", Phase::Execution, "",
         "HMI rootkit displays normal parameters", L::L2, {}, false, false, false, {}},
        {trigger, "Day 21, 11:15", Phase::Execution, "",
         "Post-incident log entries signed with factored root CA", L::L2, {"T1003"}, false,
         false, false, {}},
        {trigger, "Day 21, 11:15", Phase::Execution, "",
         "PTP timing manipulated (-12.4 ± 0.3 ms)", L::L2, {"T1004", "T0835"}, false,
         false, false, {{"skew_ms", "-12.4"}}},
        {trigger, "Day 21, 11:15", Phase::Execution, "",
         "Primary malware components self-destruct", L::L2, {"T0855"}, false, false, false, {}},
    });

    push_events(s.impact_events, {
        {trigger + 1800, "T+1.8s", Phase::Execution, "Physical",
         "SCRAM signal blocked by SIS override", L::L1, {"T0817", "T0806", "T0834"}, false,
         true, true, {}},
        {trigger + 14500, "T+14.5s", Phase::Execution, "Safety Failure",
         "Core temperature exceeds 310°C", L::L0, {}, false, true, true, {}},
        {trigger + 52000, "T+52s", Phase::Execution, "Critical", "Core damage initiation",
         L::L0, {"T0815"}, false, true, true, {}},
    });

    s.evidence_classes = {"Activation Trigger", "System Logs", "SIS Logic",
                          "Network Traffic",    "Time Sync",   "Malware"};
    s.compromised_ledger = {
        {"Activation Trigger", "Valid vendor signature", "Points to supply chain compromise"},
        {"System Logs", "Cryptographically consistent", "Supports false accident narrative"},
        {"SIS Logic", "Validated checksum", "No tampering detected"},
        {"Network Traffic", "Retroactively decryptable by adversary",
         "HNDL provides full session replay"},
        {"Time Sync", "PTP skew (-12.4 ± 0.3 ms)", "Event correlation impossible"},
        {"Malware", "Self-destructed", "No binary analysis possible"},
    };

    s.stride = {
        {StrideThreat::Spoofing, {2, 3}},
        {StrideThreat::Tampering, {1, 3}},
        {StrideThreat::Repudiation, {3}},
        {StrideThreat::InformationDisclosure, {1}},
        {StrideThreat::DenialOfService, {3}},
        {StrideThreat::ElevationOfPrivilege, {2, 3}},
    };
    return s;
}

}  // namespace

Scenario load_scenario(ScenarioKind name) {
    return name == ScenarioKind::Scar ? build_scar() : build_dawn();
}

Scenario load_scenario(std::string_view name) {
    if (name == "scar") return build_scar();
    if (name == "dawn") return build_dawn();
    throw DomainError("unknown scenario: " + std::string(name));
}

RunTrace simulate_run(const Scenario& s, const topo::Topology& t,
                      const risk::PostureProfile& posture, std::uint64_t seed) {
    if (posture.scenario != s.name) {
        throw DomainError("posture '" + posture.name + "' does not match scenario '" +
                          std::string(risk::to_string(s.name)) + "'");
    }
    if (t.assets.empty()) throw ConfigError("no assets");

    RunTrace trace;
    trace.scenario = risk::to_string(s.name);
    trace.posture = posture.name;
    trace.seed = seed;

    risk::StageDraw draw{};
    if (!s.timeline.hndl_viable()) {
        draw = {false, 1};
        trace.failure_reason = "rotation window closed";
    } else {
        draw = risk::sample_stages(posture.phases, seed);
        if (!draw.success) {
            trace.failure_reason = "stage " + std::to_string(draw.failing_stage) + " failed";
        }
    }
    trace.failing_stage = draw.failing_stage;
    trace.phase_success = {draw.failing_stage == 0 || draw.failing_stage > 1,
                           draw.failing_stage == 0 || draw.failing_stage > 2,
                           draw.failing_stage == 0};

    // Each reached phase emits its whole script; the impact schedule appears
    // only when all three stages succeeded.
    trace.events = s.hndl_events;
    if (trace.phase_success[0]) {
        trace.events.insert(trace.events.end(), s.weaponization_events.begin(),
                            s.weaponization_events.end());
    }
    if (trace.phase_success[0] && trace.phase_success[1]) {
        trace.events.insert(trace.events.end(), s.execution_events.begin(),
                            s.execution_events.end());
    }
    if (draw.success) {
        trace.events.insert(trace.events.end(), s.impact_events.begin(), s.impact_events.end());
    }
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const AttackEvent& a, const AttackEvent& b) {
                         return a.offset_ms < b.offset_ms;
                     });

    if (draw.success) {
        trace.forensic = s.compromised_ledger;
    } else {
        for (const auto& ev : s.evidence_classes) {
            trace.forensic.push_back({ev, "intact", "no tampering occurred"});
        }
    }
    trace.technique_coverage = technique_coverage(trace);
    return trace;
}

BatchSummary simulate_batch(const Scenario& s, const topo::Topology& t,
                            const risk::PostureProfile& posture, std::uint64_t runs,
                            std::uint64_t seed, int partitions) {
    if (posture.scenario != s.name) {
        throw DomainError("posture '" + posture.name + "' does not match scenario '" +
                          std::string(risk::to_string(s.name)) + "'");
    }
    if (t.assets.empty()) throw ConfigError("no assets");
    if (runs < 1) throw DomainError("simulate_batch requires runs >= 1");
    if (partitions < 1) throw DomainError("simulate_batch requires partitions >= 1");

    BatchSummary b;
    b.runs = runs;
    b.seed = seed;
    b.partitions = partitions;

    if (!s.timeline.hndl_viable()) {
        b.stage_failures[0] = runs;  // rotation window closed
        b.success_rate = 0.0;
        return b;
    }
    // Same per-run draw schedule as risk::monte_carlo over the same phases.
    risk::MonteCarloResult mc = risk::monte_carlo(posture.phases, runs, seed, partitions);
    b.successes = mc.successes;
    b.stage_failures = mc.stage_failures;
    b.success_rate = mc.estimate;
    return b;
}

std::vector<AttackEvent> physical_impact_timeline(const RunTrace& trace) {
    std::vector<AttackEvent> out;
    for (const auto& e : trace.events) {
        if (e.impact) out.push_back(e);
    }
    return out;
}

std::map<std::string, std::set<std::string>> technique_coverage(const RunTrace& trace) {
    std::map<std::string, std::set<std::string>> out;
    for (const auto& e : trace.events) {
        for (const auto& id : e.techniques) {
            out[technique(id).tactic].insert(id);
        }
    }
    return out;
}

std::map<std::string, std::set<std::string>> technique_coverage(const Scenario& s) {
    std::map<std::string, std::set<std::string>> out;
    for (const auto* script :
         {&s.hndl_events, &s.weaponization_events, &s.execution_events, &s.impact_events}) {
        for (const auto& e : *script) {
            for (const auto& id : e.techniques) out[technique(id).tactic].insert(id);
        }
    }
    return out;
}

std::vector<ForensicEntry> forensic_state(const RunTrace& trace) {
    return trace.forensic;
}

const std::map<StrideThreat, std::set<int>>& stride_matrix(const Scenario& s) {
    return s.stride;
}

std::vector<TimelineRow> timeline_table(const RunTrace& trace) {
    std::vector<TimelineRow> rows;
    for (const auto& e : trace.events) {
        if (e.table_row) rows.push_back({e.time_label, e.phase_label, e.action});
    }
    return rows;
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Hndl: return "hndl";
        case Phase::Weaponization: return "weaponization";
        case Phase::Execution: return "execution";
    }
    return "?";
}

std::string_view to_string(StrideThreat t) {
    switch (t) {
        case StrideThreat::Spoofing: return "Spoofing";
        case StrideThreat::Tampering: return "Tampering";
        case StrideThreat::Repudiation: return "Repudiation";
        case StrideThreat::InformationDisclosure: return "Information Disclosure";
        case StrideThreat::DenialOfService: return "Denial of Service";
        case StrideThreat::ElevationOfPrivilege: return "Elevation of Privilege";
    }
    return "?";
}

}  // namespace otquant::scn
