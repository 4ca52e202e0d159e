#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "fedshield/aggregation.hpp"
#include "fedshield/rng.hpp"

using namespace fedshield;
using namespace fedshield::agg;

namespace {

UpdateSet make_updates(const std::vector<std::vector<double>>& vecs) {
    UpdateSet u;
    for (std::size_t i = 0; i < vecs.size(); ++i)
        u.entries.push_back({"client-" + std::to_string(i), vecs[i]});
    return u;
}

UpdateSet random_updates(Rng& rng, std::size_t m, std::size_t d, double scale = 1.0) {
    UpdateSet u;
    for (std::size_t i = 0; i < m; ++i) {
        ParamVector v(d);
        for (auto& x : v) x = rng.normal(0.0, scale);
        u.entries.push_back({"client-" + std::to_string(i), std::move(v)});
    }
    return u;
}

// Independent sort-and-trim oracle: positional trim on a sorted copy,
// ascending-order summation.
ParamVector trimmed_mean_oracle(const UpdateSet& u, double beta) {
    const std::size_t m = u.size();
    const std::size_t d = u.entries.front().params.size();
    const std::size_t k = static_cast<std::size_t>(beta * static_cast<double>(m));
    ParamVector out(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<double> col;
        for (const auto& e : u.entries) col.push_back(e.params[c]);
        std::stable_sort(col.begin(), col.end());
        double sum = 0.0;
        for (std::size_t i = k; i + k < m; ++i) sum += col[i];
        out[c] = sum / static_cast<double>(m - 2 * k);
    }
    return out;
}

// Brute-force krum oracle over the full pairwise distance table.
std::pair<std::size_t, std::vector<double>> krum_oracle(const UpdateSet& u, int f) {
    const std::size_t n = u.size();
    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> ds;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double acc = 0.0;
            for (std::size_t k = 0; k < u.entries[i].params.size(); ++k) {
                double diff = u.entries[i].params[k] - u.entries[j].params[k];
                acc += diff * diff;
            }
            ds.push_back(acc);
        }
        std::stable_sort(ds.begin(), ds.end());
        for (std::size_t j = 0; j < n - static_cast<std::size_t>(f) - 2; ++j) scores[i] += ds[j];
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (scores[i] < scores[best]) best = i;
    return {best, scores};
}

} // namespace

TEST_CASE("aggregate_mean") {
    CHECK(aggregate_mean(make_updates({{1.0}, {3.0}})) == ParamVector{2.0});
    CHECK(aggregate_mean(make_updates({{4.0, -2.0}})) == ParamVector{4.0, -2.0});
    auto copies = make_updates({{0.5, 1.5}, {0.5, 1.5}, {0.5, 1.5}});
    CHECK(aggregate_mean(copies) == ParamVector{0.5, 1.5});
    auto bad = make_updates({{1.0}, {1.0, 2.0}});
    CHECK_THROWS_AS(aggregate_mean(bad), std::invalid_argument);
}

TEST_CASE("trimmed_mean on the worked example") {
    // m=5, beta=0.2 trims one from each side: {10, -7} go, mean(1,2,3) = 2
    auto u = make_updates({{10.0}, {1.0}, {2.0}, {3.0}, {-7.0}});
    auto [vec, report] = trimmed_mean(u, {0.2});
    CHECK(vec == ParamVector{2.0});
    CHECK(report.clients[0].trimmed_fraction == 1.0);
    CHECK(report.clients[4].trimmed_fraction == 1.0);
    for (std::size_t i = 1; i <= 3; ++i) CHECK(report.clients[i].trimmed_fraction == 0.0);
}

TEST_CASE("trimmed_mean degenerate cases") {
    Rng rng(5);
    auto u = random_updates(rng, 7, 13);
    SECTION("beta = 0 equals the plain mean") {
        auto [vec, report] = trimmed_mean(u, {0.0});
        auto mean = aggregate_mean(u);
        for (std::size_t k = 0; k < vec.size(); ++k)
            CHECK(vec[k] == Catch::Approx(mean[k]).epsilon(1e-14));
        for (auto& c : report.clients) CHECK(c.trimmed_fraction == 0.0);
    }
    SECTION("identical updates pass through untouched and unflagged") {
        auto same = make_updates({{3.0, 4.0}, {3.0, 4.0}, {3.0, 4.0}, {3.0, 4.0}, {3.0, 4.0}});
        auto [vec, report] = trimmed_mean(same, {0.2});
        CHECK(vec == ParamVector{3.0, 4.0});
        for (auto& c : report.clients) CHECK(c.trimmed_fraction == 0.0);
    }
    SECTION("invalid beta is an error") {
        auto two = make_updates({{1.0}, {2.0}});
        CHECK_THROWS_AS(trimmed_mean(two, {0.5}), std::invalid_argument);
        CHECK_THROWS_AS(trimmed_mean(two, {-0.1}), std::invalid_argument);
    }
    SECTION("valid beta always leaves at least one survivor") {
        // floor(beta*m) < m/2 whenever beta < 0.5
        for (std::size_t m = 1; m <= 25; ++m) {
            Rng local(m);
            auto any = random_updates(local, m, 2);
            for (double beta : {0.0, 0.2, 0.25, 0.4, 0.49})
                CHECK_NOTHROW(trimmed_mean(any, {beta}));
        }
    }
}

TEST_CASE("trimmed_mean matches the sort-and-trim oracle exactly") {
    Rng rng(606);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 3 + rng.uniform_below(23);    // [3, 25]
        const std::size_t d = 1 + rng.uniform_below(50);    // [1, 50]
        const double beta = 0.49 * rng.uniform01();
        auto u = random_updates(rng, m, d);
        if (m <= 2 * static_cast<std::size_t>(beta * static_cast<double>(m))) continue;
        auto [vec, report] = trimmed_mean(u, {beta});
        auto expect = trimmed_mean_oracle(u, beta);
        REQUIRE(vec == expect); // bit-exact: same survivors, same ascending sum
    }
}

TEST_CASE("trimmed_mean output stays inside the surviving band") {
    Rng rng(607);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 5 + rng.uniform_below(15);
        auto u = random_updates(rng, m, 8);
        auto [vec, report] = trimmed_mean(u, {0.25});
        const std::size_t k = static_cast<std::size_t>(0.25 * static_cast<double>(m));
        for (std::size_t c = 0; c < 8; ++c) {
            std::vector<double> col;
            for (auto& e : u.entries) col.push_back(e.params[c]);
            std::sort(col.begin(), col.end());
            REQUIRE(vec[c] >= col[k]);
            REQUIRE(vec[c] <= col[m - 1 - k]);
        }
    }
}

TEST_CASE("krum scores on the worked examples") {
    // n=4, f=1: one neighbor each
    auto u = make_updates({{0.0}, {1.0}, {1.1}, {5.0}});
    auto scores = krum_scores(u, {1});
    CHECK(scores[0] == Catch::Approx(1.0));
    CHECK(scores[1] == Catch::Approx(0.01));
    CHECK(scores[2] == Catch::Approx(0.01));
    CHECK(scores[3] == Catch::Approx(15.21));

    auto u2 = make_updates({{0.0}, {0.1}, {0.2}, {10.0}});
    auto scores2 = krum_scores(u2, {1});
    CHECK(scores2[0] == Catch::Approx(0.01));
    CHECK(scores2[1] == Catch::Approx(0.01));
    CHECK(scores2[2] == Catch::Approx(0.01));
    CHECK(scores2[3] == Catch::Approx(96.04));

    SECTION("selection ties break to the lowest index") {
        auto [id, vec, report] = krum_select(u, {1});
        CHECK(id == "client-1");
        CHECK(vec == ParamVector{1.0});
        CHECK(report.clients[1].selected);
    }
    SECTION("identical vectors select index 0") {
        auto same = make_updates({{2.0}, {2.0}, {2.0}, {2.0}});
        auto [id, vec, report] = krum_select(same, {1});
        CHECK(id == "client-0");
        for (auto& c : same.entries) CHECK(krum_scores(same, {1})[0] == 0.0);
    }
    SECTION("constraint violations throw") {
        CHECK_THROWS_AS(krum_scores(u, {2}), std::invalid_argument);
    }
}

TEST_CASE("krum_select matches brute-force enumeration exactly") {
    Rng rng(909);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 4 + rng.uniform_below(5); // [4, 8]
        const int f = static_cast<int>(rng.uniform_below(n - 3));
        const std::size_t d = 1 + rng.uniform_below(6);
        auto u = random_updates(rng, n, d);
        auto [id, vec, report] = krum_select(u, {f});
        auto [best, scores] = krum_oracle(u, f);
        REQUIRE(id == u.entries[best].client_id);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(report.clients[i].krum_score == scores[i]);
    }
}

TEST_CASE("krum never selects an isolated outlier") {
    Rng rng(910);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 6;
        auto u = random_updates(rng, n - 1, 10, 0.2); // tight cluster
        ParamVector out(10);
        for (auto& x : out) x = 10.0 + rng.normal(0.0, 0.2);
        u.entries.push_back({"outlier", std::move(out)});
        auto [id, vec, report] = krum_select(u, {1});
        REQUIRE(id != "outlier");
    }
}

TEST_CASE("permutation equivariance on tie-free instances") {
    Rng rng(911);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 6 + rng.uniform_below(8);
        auto u = random_updates(rng, m, 12);
        auto [tm_before, r1] = trimmed_mean(u, {0.25});
        auto [id_before, v1, kr1] = krum_select(u, {1});

        std::vector<std::size_t> perm(m);
        std::iota(perm.begin(), perm.end(), 0u);
        for (std::size_t i = m; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
        UpdateSet shuffled;
        for (auto p : perm) shuffled.entries.push_back(u.entries[p]);

        auto [tm_after, r2] = trimmed_mean(shuffled, {0.25});
        for (std::size_t k = 0; k < tm_after.size(); ++k)
            REQUIRE(tm_after[k] == Catch::Approx(tm_before[k]).epsilon(1e-12));

        auto [id_after, v2, kr2] = krum_select(shuffled, {1});
        REQUIRE(id_after == id_before); // same client wins under any ordering
    }
}
