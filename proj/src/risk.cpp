#include "otquant/risk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

namespace otquant::risk {

void validate(const ProbInterval& p) {
    if (!(0.0 <= p.lo && p.lo <= p.hi && p.hi <= 1.0)) {
        throw DomainError("invalid probability interval [" + std::to_string(p.lo) + ", " +
                          std::to_string(p.hi) + "]");
    }
}

const ProbInterval& PhaseModel::phase(int i) const {
    switch (i) {
        case 0: return p1;
        case 1: return p2;
        case 2: return p3;
    }
    throw DomainError("phase index out of range");
}

void validate(const PhaseModel& m) {
    validate(m.p1);
    validate(m.p2);
    validate(m.p3);
}

namespace {

PostureProfile mk(const char* name, ScenarioKind sc, PhaseModel ph, PostureSource src) {
    return PostureProfile{name, sc, ph, src};
}

}  // namespace

const std::vector<PostureProfile>& builtin_postures() {
    using S = ScenarioKind;
    using Src = PostureSource;
    static const std::vector<PostureProfile> profiles = {
        mk("scar/current-infrastructure", S::Scar,
           {{0.85, 0.98}, {0.75, 0.92}, {0.55, 0.75}}, Src::SectionText),
        mk("scar/targeted", S::Scar, {{0.92, 0.99}, {0.85, 0.96}, {0.65, 0.82}}, Src::SectionText),
        mk("scar/sl4", S::Scar, {{0.3, 0.5}, {0.4, 0.6}, {0.15, 0.25}}, Src::SectionText),
        mk("scar/figure-baseline", S::Scar, {{0.4, 0.7}, {0.4, 0.6}, {0.3, 0.5}},
           Src::FigureTimeline),
        mk("dawn/baseline", S::Dawn, {{0.5, 0.8}, {0.5, 0.7}, {0.3, 0.6}}, Src::SectionText),
        mk("dawn/targeted", S::Dawn, {{0.7, 0.9}, {0.6, 0.8}, {0.4, 0.7}}, Src::SectionText),
        mk("dawn/sl4", S::Dawn, {{0.3, 0.5}, {0.3, 0.5}, {0.1, 0.2}}, Src::SectionText),
        mk("dawn/pqc-hybrid", S::Dawn, {{0.2, 0.4}, {0.1, 0.2}, {0.05, 0.1}}, Src::SectionText),
    };
    return profiles;
}

const PostureProfile& posture(std::string_view full_name) {
    for (const auto& p : builtin_postures()) {
        if (p.name == full_name) return p;
    }
    throw DomainError("unknown posture: " + std::string(full_name));
}

const PostureProfile& posture(ScenarioKind scenario, std::string_view short_name) {
    return posture(std::string(to_string(scenario)) + "/" + std::string(short_name));
}

ProbInterval chain_success(const PhaseModel& m) {
    validate(m);
    return {m.p1.lo * m.p2.lo * m.p3.lo, m.p1.hi * m.p2.hi * m.p3.hi};
}

ProbInterval repeated_attempts(const ProbInterval& p, int k) {
    validate(p);
    if (k < 1) throw DomainError("repeated_attempts requires k >= 1");
    return {1.0 - std::pow(1.0 - p.lo, k), 1.0 - std::pow(1.0 - p.hi, k)};
}

namespace {

// Round half-up; the headline ranges need 7.5 -> 8 and 87.5 -> 88.
int percent_round(double p) {
    return static_cast<int>(std::floor(p * 100.0 + 0.5));
}

}  // namespace

std::string PercentRange::str() const {
    return std::to_string(lo) + "-" + std::to_string(hi) + "%";
}

PercentRange rounded_percent_range(const ProbInterval& p) {
    return {percent_round(p.lo), percent_round(p.hi)};
}

PercentRange attempts_headline_range(const ProbInterval& chain, int k) {
    validate(chain);
    ProbInterval truncated{std::floor(chain.lo * 100.0) / 100.0,
                           std::floor(chain.hi * 100.0) / 100.0};
    return rounded_percent_range(repeated_attempts(truncated, k));
}

PhasePartials phase_partials(const PhaseModel& m, EvalPoint at) {
    validate(m);
    PhasePartials r;
    for (int i = 0; i < 3; ++i) {
        const ProbInterval& p = m.phase(i);
        r.point[i] = at == EvalPoint::Lo ? p.lo : at == EvalPoint::Hi ? p.hi : p.mid();
    }
    r.partials[0] = r.point[1] * r.point[2];
    r.partials[1] = r.point[0] * r.point[2];
    r.partials[2] = r.point[0] * r.point[1];

    std::array<int, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return r.partials[a] > r.partials[b]; });
    for (int i = 0; i < 3; ++i) r.order[i] = idx[i] + 1;
    r.tie = r.partials[idx[0]] == r.partials[idx[1]] || r.partials[idx[1]] == r.partials[idx[2]];

    std::string s;
    for (int i = 0; i < 3; ++i) {
        if (i) {
            s += r.partials[idx[i - 1]] == r.partials[idx[i]] ? " = " : " > ";
        }
        s += "dP/dp" + std::to_string(idx[i] + 1);
    }
    r.ordering = s;
    return r;
}

PostureLeverage posture_leverage(const PhaseModel& base, const PhaseModel& hardened) {
    validate(base);
    validate(hardened);
    const auto b = base.midpoints();
    const auto h = hardened.midpoints();
    const double p0 = b[0] * b[1] * b[2];

    PostureLeverage out{};
    for (int i = 0; i < 3; ++i) {
        std::array<double, 3> repl = b;
        repl[i] = h[i];
        out.deltas[i] = p0 - repl[0] * repl[1] * repl[2];
    }

    double min_abs = 0.0;
    for (double d : out.deltas) {
        double a = std::fabs(d);
        if (a > 0.0 && (min_abs == 0.0 || a < min_abs)) min_abs = a;
    }
    if (min_abs > 0.0) {
        std::array<double, 3> r{};
        for (int i = 0; i < 3; ++i) r[i] = out.deltas[i] / min_abs;
        out.ratios = r;
    }
    return out;
}

std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

// Canonical double in [0,1) from the top 53 bits; avoids the
// implementation-defined behavior of uniform_real_distribution.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

StageDraw sample_stages(const PhaseModel& m, std::uint64_t run_seed) {
    std::mt19937_64 rng(run_seed);
    std::array<double, 3> p{};
    for (int i = 0; i < 3; ++i) {
        const ProbInterval& iv = m.phase(i);
        p[i] = iv.lo + next_uniform(rng) * (iv.hi - iv.lo);
    }
    for (int i = 0; i < 3; ++i) {
        if (next_uniform(rng) >= p[i]) return {false, i + 1};
    }
    return {true, 0};
}

namespace {

struct StageCounts {
    std::uint64_t successes = 0;
    std::array<std::uint64_t, 3> stage_failures{0, 0, 0};
};

StageCounts count_range(const PhaseModel& m, std::uint64_t seed, std::uint64_t begin,
                        std::uint64_t end) {
    StageCounts c;
    for (std::uint64_t i = begin; i < end; ++i) {
        StageDraw d = sample_stages(m, derive_subseed(seed, i));
        if (d.success) {
            ++c.successes;
        } else {
            ++c.stage_failures[d.failing_stage - 1];
        }
    }
    return c;
}

}  // namespace

MonteCarloResult monte_carlo(const PhaseModel& m, std::uint64_t n, std::uint64_t seed,
                             int partitions) {
    validate(m);
    if (n < 1) throw DomainError("monte_carlo requires n >= 1");
    if (partitions < 1) throw DomainError("monte_carlo requires partitions >= 1");

    MonteCarloResult res;
    res.runs = n;
    res.seed = seed;
    res.partitions = partitions;

    // Per-run sub-seeds make partition boundaries and thread scheduling
    // irrelevant to the result; counts merge by summation.
    std::vector<StageCounts> parts(partitions);
    if (partitions == 1) {
        parts[0] = count_range(m, seed, 0, n);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(partitions);
        for (int p = 0; p < partitions; ++p) {
            std::uint64_t begin = n * static_cast<std::uint64_t>(p) / partitions;
            std::uint64_t end = n * (static_cast<std::uint64_t>(p) + 1) / partitions;
            workers.emplace_back(
                [&, p, begin, end] { parts[p] = count_range(m, seed, begin, end); });
        }
        for (auto& w : workers) w.join();
    }
    for (const auto& c : parts) {
        res.successes += c.successes;
        for (int s = 0; s < 3; ++s) res.stage_failures[s] += c.stage_failures[s];
    }

    res.estimate = static_cast<double>(res.successes) / static_cast<double>(n);
    res.half_width_95 =
        1.96 * std::sqrt(res.estimate * (1.0 - res.estimate) / static_cast<double>(n));
    return res;
}

std::string_view to_string(ScenarioKind s) {
    return s == ScenarioKind::Scar ? "scar" : "dawn";
}

std::string_view to_string(PostureSource s) {
    return s == PostureSource::SectionText ? "section-text" : "figure-timeline";
}

ScenarioKind parse_scenario(std::string_view s) {
    if (s == "scar") return ScenarioKind::Scar;
    if (s == "dawn") return ScenarioKind::Dawn;
    throw DomainError("unknown scenario: " + std::string(s));
}

}  // namespace otquant::risk
