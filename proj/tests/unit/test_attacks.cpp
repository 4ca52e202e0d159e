#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fedshield/attacks.hpp"

using namespace fedshield;
using namespace fedshield::attacks;

TEST_CASE("gaussian attack") {
    SECTION("zero mu and sigma return the honest update") {
        AttackParams p;
        p.gaussian_mu = 0.0;
        p.gaussian_sigma = 0.0;
        Rng rng(1);
        ParamVector honest{1.0, -2.0, 3.0};
        CHECK(gaussian_attack(honest, p, rng) == honest);
    }
    SECTION("empirical mean and std match (2, 2) over 1e5 coordinates") {
        AttackParams p;
        Rng rng(777);
        ParamVector honest(100000, 0.25);
        auto out = gaussian_attack(honest, p, rng);
        double mean = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) mean += out[i] - honest[i];
        mean /= static_cast<double>(out.size());
        double var = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double d = out[i] - honest[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(out.size());
        CHECK(mean == Catch::Approx(2.0).margin(0.05));
        CHECK(std::sqrt(var) == Catch::Approx(2.0).margin(0.05));
    }
    SECTION("fixed seed reproduces the vector") {
        AttackParams p;
        Rng a(5), b(5);
        ParamVector honest{0.0, 0.5, 1.0};
        CHECK(gaussian_attack(honest, p, a) == gaussian_attack(honest, p, b));
    }
    SECTION("replace mode ignores the honest update") {
        AttackParams p;
        p.gaussian_mode = AttackParams::GaussianMode::replace;
        Rng a(5), b(5);
        ParamVector h1{100.0, 100.0}, h2{-3.0, 8.0};
        CHECK(gaussian_attack(h1, p, a) == gaussian_attack(h2, p, b));
    }
}

TEST_CASE("alie attack") {
    SECTION("closed-form on the worked cohort") {
        agg::UpdateSet cohort;
        cohort.entries = {{"m0", {1.0}}, {"m1", {2.0}}, {"m2", {3.0}}};
        auto v = alie_attack(cohort, 0.9);
        // mu = 2, population sigma = sqrt(2/3)
        const double expect = 2.0 - 0.9 * std::sqrt(2.0 / 3.0);
        CHECK(v[0] == Catch::Approx(expect).epsilon(1e-15));
        CHECK(v[0] == Catch::Approx(1.26515).margin(5e-6));
    }
    SECTION("identical cohort collapses to the common update") {
        agg::UpdateSet cohort;
        cohort.entries = {{"m0", {4.0, -1.0}}, {"m1", {4.0, -1.0}}};
        CHECK(alie_attack(cohort, 0.9) == ParamVector{4.0, -1.0});
    }
    SECTION("z = 0 is the cohort mean") {
        agg::UpdateSet cohort;
        cohort.entries = {{"m0", {1.0}}, {"m1", {3.0}}};
        CHECK(alie_attack(cohort, 0.0) == ParamVector{2.0});
    }
    SECTION("empty cohort is an error") {
        agg::UpdateSet cohort;
        CHECK_THROWS_AS(alie_attack(cohort, 0.9), std::invalid_argument);
    }
    SECTION("deterministic function of the cohort") {
        agg::UpdateSet cohort;
        cohort.entries = {{"m0", {1.0, 2.0}}, {"m1", {0.5, 2.5}}, {"m2", {1.5, 1.5}}};
        CHECK(alie_attack(cohort, 0.9) == alie_attack(cohort, 0.9));
    }
}

TEST_CASE("rmc strategy machine") {
    RmcState s;
    CHECK(s.phase == RmcPhase::gaussian);
    CHECK(s.disconnect_count == 0);

    SECTION("gaussian + force_disconnected switches to alie") {
        auto next = rmc_transition(s, RmcEvent::force_disconnected);
        CHECK(next.phase == RmcPhase::alie);
        CHECK(next.disconnect_count == 1);
    }
    SECTION("alie + force_disconnected retries alie") {
        auto next = rmc_transition({RmcPhase::alie, 1}, RmcEvent::force_disconnected);
        CHECK(next.phase == RmcPhase::alie);
        CHECK(next.disconnect_count == 2);
    }
    SECTION("reconnect_denied is terminal") {
        auto next = rmc_transition({RmcPhase::alie, 1}, RmcEvent::reconnect_denied);
        CHECK(next.phase == RmcPhase::banned);
        CHECK_THROWS_AS(rmc_transition(next, RmcEvent::connected), std::logic_error);
    }
    SECTION("connected and flagged are no-ops") {
        CHECK(rmc_transition(s, RmcEvent::connected).phase == RmcPhase::gaussian);
        CHECK(rmc_transition(s, RmcEvent::flagged).phase == RmcPhase::gaussian);
    }
    SECTION("never returns to gaussian, count is monotone") {
        // random walk over legal events
        Rng rng(99);
        RmcState state;
        bool seen_alie = false;
        int last_count = 0;
        for (int step = 0; step < 200 && state.phase != RmcPhase::banned; ++step) {
            RmcEvent ev = static_cast<RmcEvent>(rng.uniform_below(4));
            if (ev == RmcEvent::reconnect_denied && rng.uniform01() < 0.9)
                ev = RmcEvent::connected; // keep the walk alive a while
            state = rmc_transition(state, ev);
            if (state.phase == RmcPhase::alie) seen_alie = true;
            if (seen_alie) CHECK(state.phase != RmcPhase::gaussian);
            CHECK(state.disconnect_count >= last_count);
            last_count = state.disconnect_count;
        }
    }
}
