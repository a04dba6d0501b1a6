#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "otquant/risk.hpp"
#include "otquant/topology.hpp"

namespace otquant::scn {

enum class Phase { Hndl, Weaponization, Execution };

enum class StrideThreat {
    Spoofing, Tampering, Repudiation, InformationDisclosure, DenialOfService,
    ElevationOfPrivilege
};

/// Scenario clock: milliseconds from run origin. Months are 30 days, years
/// 365 days; CRQC onset defaults to 12 years after run start.
inline constexpr std::int64_t kMsPerDay = 86'400'000;
inline constexpr std::int64_t kMsPerMonth = 30 * kMsPerDay;
inline constexpr std::int64_t kMsPerYear = 365 * kMsPerDay;

struct TimelineParams {
    risk::ScenarioKind scheme = risk::ScenarioKind::Scar;
    std::int64_t crqc_onset_ms = 12 * kMsPerYear;  // T (scar) / T_CRQC (dawn)
    std::int64_t weaponization_lag_ms = 0;         // alpha (scar); 0 for dawn
    std::int64_t execution_lag_ms = 0;             // epsilon
    int tau_cert_months = 0;                       // credential/cert expiry
    int tau_rotation_months = 0;                   // rotation schedule
    int hndl_window_months = 0;

    bool hndl_viable() const { return tau_cert_months < tau_rotation_months; }
};

void validate(const TimelineParams& t);

struct AttackEvent {
    std::int64_t offset_ms = 0;  // scenario-relative, from run origin
    std::string time_label;
    Phase phase = Phase::Hndl;
    std::string phase_label;  // timeline-table phase column; empty otherwise
    std::string action;
    topo::PurdueLevel level = topo::PurdueLevel::L0;
    std::set<std::string> techniques;
    bool detection_opportunity = false;
    bool table_row = false;  // belongs to the scenario's timeline table
    bool impact = false;     // physical-impact schedule entry
    std::map<std::string, std::string> annotations;
};

struct TechniqueTag {
    std::string id;
    std::string tactic;
    bool extension = false;  // true for the T1001-T1006 quantum-era extensions
};

/// Registry over both scenarios' technique ids; throws for unknown ids.
const TechniqueTag& technique(std::string_view id);

struct ForensicEntry {
    std::string evidence;
    std::string status;
    std::string impact;
};

struct Scenario {
    risk::ScenarioKind name = risk::ScenarioKind::Scar;
    TimelineParams timeline;
    std::vector<AttackEvent> hndl_events;
    std::vector<AttackEvent> weaponization_events;
    std::vector<AttackEvent> execution_events;
    std::vector<AttackEvent> impact_events;  // appended only on full success
    double hndl_volume_tb = 0.0;
    double ptp_skew_ms = 0.0;
    double ptp_skew_tol_ms = 0.0;
    std::vector<std::string> evidence_classes;        // ledger rows, table order
    std::vector<ForensicEntry> compromised_ledger;    // statuses after success
    std::map<StrideThreat, std::set<int>> stride;     // threat -> phase ids
};

/// Fully populated scenario scripts; throws DomainError for unknown names.
Scenario load_scenario(risk::ScenarioKind name);
Scenario load_scenario(std::string_view name);

struct RunTrace {
    std::string scenario;
    std::string posture;
    std::uint64_t seed = 0;
    std::array<bool, 3> phase_success{false, false, false};
    int failing_stage = 0;  // 1..3; 0 when fully successful
    std::string failure_reason;
    std::vector<AttackEvent> events;  // emitted events, offset-ordered
    std::vector<ForensicEntry> forensic;
    std::map<std::string, std::set<std::string>> technique_coverage;  // tactic -> ids

    bool full_success() const { return failing_stage == 0 && phase_success[0]; }
};

/// One simulated run. Stage outcomes come from the risk engine's conditional
/// sampler, so batch success rates coincide with risk::monte_carlo under the
/// same seed schedule. Deterministic per seed.
RunTrace simulate_run(const Scenario& s, const topo::Topology& t,
                      const risk::PostureProfile& posture, std::uint64_t seed);

struct BatchSummary {
    std::uint64_t runs = 0;
    std::uint64_t seed = 0;
    int partitions = 1;
    std::uint64_t successes = 0;
    std::array<std::uint64_t, 3> stage_failures{0, 0, 0};
    double success_rate = 0.0;
};

/// Aggregate over `runs` seeds derived as risk::derive_subseed(seed, i).
/// Outcome counts are identical to materializing every trace.
BatchSummary simulate_batch(const Scenario& s, const topo::Topology& t,
                            const risk::PostureProfile& posture, std::uint64_t runs,
                            std::uint64_t seed, int partitions = 1);

/// Ordered physical-impact events of a trace; empty unless fully successful.
std::vector<AttackEvent> physical_impact_timeline(const RunTrace& trace);

/// Union of technique tags on emitted events, grouped by tactic.
std::map<std::string, std::set<std::string>> technique_coverage(const RunTrace& trace);

/// Coverage of the whole scenario script (all phases plus the impact
/// schedule): the technique matrix a fully successful run exercises.
std::map<std::string, std::set<std::string>> technique_coverage(const Scenario& s);

/// Evidence ledger for the run: tabulated statuses after a successful attack,
/// "intact" rows otherwise.
std::vector<ForensicEntry> forensic_state(const RunTrace& trace);

/// STRIDE threat -> phase-id table for a loaded scenario.
const std::map<StrideThreat, std::set<int>>& stride_matrix(const Scenario& s);

struct TimelineRow {
    std::string time;
    std::string phase;
    std::string action;
};

/// The trace's timeline-table rows (six for a fully successful run).
std::vector<TimelineRow> timeline_table(const RunTrace& trace);

std::string_view to_string(Phase p);
std::string_view to_string(StrideThreat t);

}  // namespace otquant::scn
