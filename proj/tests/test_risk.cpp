#include <doctest.h>

#include <cmath>
#include <random>

#include "otquant/risk.hpp"

using namespace otquant;
using namespace otquant::risk;

namespace {

// Independent finite-difference oracle for the chain sensitivity checks.
double chain_at(const std::array<double, 3>& p) { return p[0] * p[1] * p[2]; }

std::array<double, 3> central_difference_partials(const std::array<double, 3>& p, double h) {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        auto hi = p, lo = p;
        hi[i] += h;
        lo[i] -= h;
        out[i] = (chain_at(hi) - chain_at(lo)) / (2 * h);
    }
    return out;
}

}  // namespace

TEST_CASE("chain success multiplies the interval endpoints") {
    auto chain = chain_success(posture("scar/current-infrastructure").phases);
    CHECK(chain.lo == doctest::Approx(0.350625).epsilon(1e-12));
    CHECK(chain.hi == doctest::Approx(0.6762).epsilon(1e-12));
    CHECK(rounded_percent_range(chain).str() == "35-68%");

    chain = chain_success(posture("dawn/sl4").phases);
    CHECK(chain.lo == doctest::Approx(0.009).epsilon(1e-12));
    CHECK(chain.hi == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(rounded_percent_range(chain).str() == "1-5%");

    PhaseModel ones{{1, 1}, {1, 1}, {1, 1}};
    chain = chain_success(ones);
    CHECK(chain.lo == 1.0);
    CHECK(chain.hi == 1.0);
}

TEST_CASE("all built-in postures reproduce their headline ranges") {
    CHECK(rounded_percent_range(chain_success(posture("scar/current-infrastructure").phases)).str() ==
          "35-68%");
    CHECK(rounded_percent_range(chain_success(posture("scar/targeted").phases)).str() == "51-78%");
    CHECK(rounded_percent_range(chain_success(posture("scar/sl4").phases)).str() == "2-8%");
    CHECK(rounded_percent_range(chain_success(posture("dawn/baseline").phases)).str() == "8-34%");
    CHECK(rounded_percent_range(chain_success(posture("dawn/targeted").phases)).str() == "17-50%");
    CHECK(rounded_percent_range(chain_success(posture("dawn/sl4").phases)).str() == "1-5%");
    CHECK(chain_success(posture("dawn/pqc-hybrid").phases).hi < 0.01);
    // The figure-annotated baseline computes wider than its printed range.
    CHECK(rounded_percent_range(chain_success(posture("scar/figure-baseline").phases)).str() ==
          "5-21%");
}

TEST_CASE("repeated attempts compound the interval") {
    auto r = repeated_attempts({0.51, 0.78}, 3);
    CHECK(r.lo == doctest::Approx(0.882351).epsilon(1e-9));
    CHECK(r.hi == doctest::Approx(0.989352).epsilon(1e-9));

    r = repeated_attempts({0.17, 0.50}, 3);
    CHECK(r.lo == doctest::Approx(0.428213).epsilon(1e-6));
    CHECK(r.hi == doctest::Approx(0.875).epsilon(1e-12));

    CHECK_THROWS_AS(repeated_attempts({0.1, 0.2}, 0), DomainError);
}

TEST_CASE("repeated attempts: identity at k=1 and monotone in k") {
    std::mt19937_64 rng(11);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 200; ++i) {
        double a = u(), b = u();
        ProbInterval p{std::min(a, b), std::max(a, b)};
        auto r1 = repeated_attempts(p, 1);
        CHECK(r1.lo == doctest::Approx(p.lo).epsilon(1e-12));
        CHECK(r1.hi == doctest::Approx(p.hi).epsilon(1e-12));
        double prev_lo = 0.0;
        for (int k = 1; k <= 5; ++k) {
            auto rk = repeated_attempts(p, k);
            CHECK(rk.lo >= prev_lo - 1e-15);
            CHECK(rk.lo <= rk.hi);
            prev_lo = rk.lo;
        }
    }
}

TEST_CASE("headline attempts ranges reproduce the published figures") {
    auto scar = chain_success(posture("scar/targeted").phases);
    CHECK(attempts_headline_range(scar, 3).str() == "88-99%");
    auto dawn = chain_success(posture("dawn/targeted").phases);
    CHECK(attempts_headline_range(dawn, 3).str() == "41-88%");
}

TEST_CASE("phase partials are the products of the other phases") {
    PhaseModel sym{{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
    auto p = phase_partials(sym, EvalPoint::Mid);
    CHECK(p.partials[0] == doctest::Approx(0.25));
    CHECK(p.partials[1] == doctest::Approx(0.25));
    CHECK(p.partials[2] == doctest::Approx(0.25));
    CHECK(p.tie);

    auto scar = phase_partials(posture("scar/current-infrastructure").phases, EvalPoint::Mid);
    CHECK(scar.point[0] == doctest::Approx(0.915));
    CHECK(scar.point[1] == doctest::Approx(0.835));
    CHECK(scar.point[2] == doctest::Approx(0.65));
    CHECK(scar.partials[0] == doctest::Approx(0.5428).epsilon(1e-3));
    CHECK(scar.partials[1] == doctest::Approx(0.5948).epsilon(1e-3));
    CHECK(scar.partials[2] == doctest::Approx(0.7640).epsilon(1e-3));
    CHECK(scar.ordering == "dP/dp3 > dP/dp2 > dP/dp1");

    PhaseModel skew{{0.2, 0.2}, {0.5, 0.5}, {0.9, 0.9}};
    auto s = phase_partials(skew, EvalPoint::Mid);
    CHECK(s.partials[0] == doctest::Approx(0.45));
    CHECK(s.partials[1] == doctest::Approx(0.18));
    CHECK(s.partials[2] == doctest::Approx(0.10));
    CHECK(s.order[0] == 1);
    CHECK(s.order[1] == 2);
    CHECK(s.order[2] == 3);
}

TEST_CASE("partials honor the chosen evaluation point") {
    const auto& m = posture("scar/current-infrastructure").phases;
    auto lo = phase_partials(m, EvalPoint::Lo);
    CHECK(lo.point[0] == doctest::Approx(0.85));
    CHECK(lo.point[2] == doctest::Approx(0.55));
    CHECK(lo.partials[0] == doctest::Approx(0.75 * 0.55));
    auto hi = phase_partials(m, EvalPoint::Hi);
    CHECK(hi.point[1] == doctest::Approx(0.92));
    CHECK(hi.partials[1] == doctest::Approx(0.98 * 0.75));
}

TEST_CASE("partials match central finite differences") {
    std::mt19937_64 rng(7);
    auto u = [&] { return 0.05 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    for (int trial = 0; trial < 100; ++trial) {
        PhaseModel m;
        for (auto* iv : {&m.p1, &m.p2, &m.p3}) {
            double a = u(), b = u();
            iv->lo = std::min(a, b);
            iv->hi = std::max(a, b);
        }
        auto p = phase_partials(m, EvalPoint::Mid);
        auto fd = central_difference_partials(p.point, 1e-6);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::fabs(p.partials[i] - fd[i]) / std::fabs(fd[i]) < 1e-6);
        }
    }
}

TEST_CASE("chain is monotone under interval widening") {
    std::mt19937_64 rng(13);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 200; ++trial) {
        PhaseModel m;
        for (auto* iv : {&m.p1, &m.p2, &m.p3}) {
            double a = u(), b = u();
            iv->lo = std::min(a, b);
            iv->hi = std::max(a, b);
        }
        auto base = chain_success(m);
        for (int phase = 0; phase < 3; ++phase) {
            PhaseModel wide = m;
            ProbInterval& iv = phase == 0 ? wide.p1 : phase == 1 ? wide.p2 : wide.p3;
            iv.lo *= 0.5;
            iv.hi = iv.hi + (1.0 - iv.hi) * 0.5;
            auto widened = chain_success(wide);
            CHECK(widened.lo <= base.lo + 1e-15);
            CHECK(widened.hi >= base.hi - 1e-15);
        }
    }
}

TEST_CASE("posture leverage deltas from midpoint replacement") {
    const auto& base = posture("scar/current-infrastructure").phases;
    const auto& hard = posture("scar/sl4").phases;

    auto same = posture_leverage(base, base);
    CHECK(same.deltas[0] == 0.0);
    CHECK(same.deltas[1] == 0.0);
    CHECK(same.deltas[2] == 0.0);
    CHECK(!same.ratios.has_value());

    auto lev = posture_leverage(base, hard);
    // Midpoint oracle: (0.915 - 0.4) * 0.835 * 0.65 etc.
    CHECK(lev.deltas[0] == doctest::Approx(0.27951625).epsilon(1e-12));
    CHECK(lev.deltas[2] == doctest::Approx(0.34381125).epsilon(1e-12));
    CHECK(lev.deltas[0] == doctest::Approx(0.2796).epsilon(1e-3));
    CHECK(lev.deltas[2] == doctest::Approx(0.3439).epsilon(1e-3));
    CHECK(lev.ratios.has_value());
}

TEST_CASE("monte carlo: determinism, degenerate certainty, convergence") {
    PhaseModel certain{{1, 1}, {1, 1}, {1, 1}};
    auto r = monte_carlo(certain, 1000, 1);
    CHECK(r.estimate == 1.0);
    CHECK(r.half_width_95 == 0.0);

    const auto& m = posture("scar/current-infrastructure").phases;
    auto a = monte_carlo(m, 50000, 42);
    auto b = monte_carlo(m, 50000, 42);
    CHECK(a.estimate == b.estimate);
    auto c = monte_carlo(m, 50000, 43);
    CHECK(a.estimate != c.estimate);

    // Partitioning must not change the outcome (sub-seeded runs).
    auto p4 = monte_carlo(m, 50000, 42, 4);
    CHECK(p4.estimate == a.estimate);

    CHECK(a.successes + a.stage_failures[0] + a.stage_failures[1] + a.stage_failures[2] ==
          a.runs);

    // Convergence toward the midpoint product.
    auto big = monte_carlo(m, 200000, 7);
    CHECK(std::fabs(big.estimate - 0.4967) < 0.01);

    auto pqc = monte_carlo(posture("dawn/pqc-hybrid").phases, 200000, 7);
    CHECK(pqc.estimate < 0.01);
}

TEST_CASE("posture catalog") {
    CHECK(builtin_postures().size() == 8);
    CHECK(posture(ScenarioKind::Scar, "sl4").name == "scar/sl4");
    CHECK(posture("dawn/pqc-hybrid").scenario == ScenarioKind::Dawn);
    CHECK(posture("scar/figure-baseline").source == PostureSource::FigureTimeline);
    CHECK_THROWS_AS(posture("scar/nope"), DomainError);
}

TEST_CASE("interval validation") {
    CHECK_THROWS_AS(validate(ProbInterval{0.5, 0.2}), DomainError);
    CHECK_THROWS_AS(validate(ProbInterval{-0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(validate(ProbInterval{0.5, 1.2}), DomainError);
    CHECK_NOTHROW(validate(ProbInterval{0.0, 1.0}));
}
