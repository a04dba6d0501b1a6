#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otquant/errors.hpp"

namespace otquant::risk {

/// Closed probability interval, 0 <= lo <= hi <= 1.
struct ProbInterval {
    double lo = 0.0;
    double hi = 0.0;

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

/// Throws DomainError on an invalid interval.
void validate(const ProbInterval& p);

/// Three-phase conditional chain: p1 = P(S1), p2 = P(S2|S1), p3 = P(S3|S1^S2).
struct PhaseModel {
    ProbInterval p1;
    ProbInterval p2;
    ProbInterval p3;

    std::array<double, 3> midpoints() const { return {p1.mid(), p2.mid(), p3.mid()}; }
    const ProbInterval& phase(int i) const;
};

void validate(const PhaseModel& m);

enum class ScenarioKind { Scar, Dawn };

enum class PostureSource { SectionText, FigureTimeline };

struct PostureProfile {
    std::string name;  // e.g. "scar/current-infrastructure"
    ScenarioKind scenario = ScenarioKind::Scar;
    PhaseModel phases;
    PostureSource source = PostureSource::SectionText;
};

/// The eight built-in posture profiles.
const std::vector<PostureProfile>& builtin_postures();

/// Lookup by full name ("scar/sl4") or by (scenario, short name).
const PostureProfile& posture(std::string_view full_name);
const PostureProfile& posture(ScenarioKind scenario, std::string_view short_name);

/// Overall success interval: [prod of lows, prod of highs].
ProbInterval chain_success(const PhaseModel& m);

/// Success over k independent attempts: [1-(1-lo)^k, 1-(1-hi)^k]. k >= 1.
ProbInterval repeated_attempts(const ProbInterval& p, int k);

/// Whole-percent range of an interval, rounded half-up.
struct PercentRange {
    int lo = 0;
    int hi = 0;
    std::string str() const;  // "35-68%"
};
PercentRange rounded_percent_range(const ProbInterval& p);

/// Headline range for repeated attempts: truncates the chain endpoints to
/// whole percents before compounding, then rounds half-up. This is the
/// summary convention the reports use; the raw interval from
/// repeated_attempts() is carried alongside it.
PercentRange attempts_headline_range(const ProbInterval& chain, int k);

enum class EvalPoint { Lo, Mid, Hi };

/// Partial derivatives of the chain product at the chosen interval points:
/// dP/dp_i = product of the other two phase values.
struct PhasePartials {
    std::array<double, 3> point;     // evaluation point per phase
    std::array<double, 3> partials;  // dP/dp1, dP/dp2, dP/dp3
    std::array<int, 3> order;        // phase indices (1..3), largest partial first
    bool tie = false;
    std::string ordering;  // e.g. "dP/dp3 > dP/dp2 > dP/dp1"
};
PhasePartials phase_partials(const PhaseModel& m, EvalPoint at);

/// Per-phase midpoint risk reduction: delta_i = base chain midpoint product
/// minus the product with only phase i replaced by the hardened phase i.
/// Ratios normalize each delta by the smallest nonzero |delta|; absent when
/// all deltas vanish.
struct PostureLeverage {
    std::array<double, 3> deltas;
    std::optional<std::array<double, 3>> ratios;
};
PostureLeverage posture_leverage(const PhaseModel& base, const PhaseModel& hardened);

/// Deterministic sub-seed for run `index` under batch seed `seed` (splitmix64
/// finalizer). Shared by Monte Carlo and the scenario simulator so their draw
/// schedules coincide; results are independent of partitioning.
std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t index);

/// One conditional-chain draw: phase probabilities uniform in their intervals,
/// then Bernoulli stage outcomes drawn in order until a failure.
struct StageDraw {
    bool success = false;
    int failing_stage = 0;  // 1..3; 0 when all stages succeeded
};
StageDraw sample_stages(const PhaseModel& m, std::uint64_t run_seed);

struct MonteCarloResult {
    double estimate = 0.0;
    double half_width_95 = 0.0;  // normal-approximation 95% CI half-width
    std::uint64_t runs = 0;
    std::uint64_t successes = 0;
    std::array<std::uint64_t, 3> stage_failures{0, 0, 0};
    std::uint64_t seed = 0;
    int partitions = 1;
};

/// n >= 1. Deterministic for a fixed seed; partitions split the run range and
/// merge counts by summation.
MonteCarloResult monte_carlo(const PhaseModel& m, std::uint64_t n, std::uint64_t seed,
                             int partitions = 1);

std::string_view to_string(ScenarioKind s);
std::string_view to_string(PostureSource s);
ScenarioKind parse_scenario(std::string_view s);

}  // namespace otquant::risk
