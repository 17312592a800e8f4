#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "cursedknight/equilibria.hpp"
#include "cursedknight/oracle.hpp"
#include "cursedknight/welfare.hpp"

using namespace cursedknight;

namespace {
const DistributionBand kContamination = make_contamination_band(0.75);
const CdfCurve kIdentity = CdfCurve::identity();
}  // namespace

TEST_CASE("generator streams are reproducible and distinct") {
    Rng a(42), b(42), c(43), d(42, 1);
    bool all_equal = true, differs_seed = false, differs_stream = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        all_equal = all_equal && x == b.next_u64();
        differs_seed = differs_seed || x != c.next_u64();
        differs_stream = differs_stream || x != d.next_u64();
    }
    CHECK(all_equal);
    CHECK(differs_seed);
    CHECK(differs_stream);
}

TEST_CASE("simulated play matches the closed forms") {
    SECTION("median cut-offs split the game evenly") {
        const auto r = simulate_game(GeneralStrategy::cutoff(0.5), GeneralStrategy::cutoff(0.5),
                                     kIdentity, 1000000, 11);
        CHECK(std::abs(r.mean_payoff1 - 0.5) < 3.0 * r.std_error);
    }
    SECTION("the partially cursed equilibrium thresholds") {
        const auto r = simulate_game(GeneralStrategy::cutoff(1.0 / 3.0),
                                     GeneralStrategy::cutoff(4.0 / 9.0), kIdentity, 1000000, 12);
        CHECK(std::abs(r.mean_payoff1 - actual_utility_1(0.6, 0.9)) < 3.0 * r.std_error);
    }
    SECTION("no trade still decides a winner at random") {
        const auto r = simulate_game(GeneralStrategy::cutoff(0.0), GeneralStrategy::cutoff(0.0),
                                     kIdentity, 400000, 13);
        CHECK(std::abs(r.mean_payoff1 - 0.5) < 3.0 * r.std_error);
    }
    SECTION("arbitrary cut-off pairs match min(t1,t2)(t2-t1)+1/2") {
        // the ex-ante payoff formula holds for any pair of cut-offs under the
        // uniform center, equilibrium or not
        const double pairs[][2] = {{0.2, 0.9}, {0.85, 0.3}, {0.5, 0.5}, {1.0, 0.45}};
        std::uint64_t seed = 100;
        for (const auto& p : pairs) {
            const double expected = std::min(p[0], p[1]) * (p[1] - p[0]) + 0.5;
            const auto r = simulate_game(GeneralStrategy::cutoff(p[0]), GeneralStrategy::cutoff(p[1]),
                                         kIdentity, 400000, seed++);
            REQUIRE(std::abs(r.mean_payoff1 - expected) < 4.0 * r.std_error);
        }
    }
}

TEST_CASE("simulation is deterministic given the seed and halves its error with 4x games") {
    const auto s1 = GeneralStrategy::cutoff(0.4);
    const auto s2 = GeneralStrategy::cutoff(0.7);
    const auto a = simulate_game(s1, s2, kIdentity, 250000, 77);
    const auto b = simulate_game(s1, s2, kIdentity, 250000, 77);
    CHECK(a.mean_payoff1 == b.mean_payoff1);  // bit-for-bit
    const auto big = simulate_game(s1, s2, kIdentity, 1000000, 77);
    CHECK(big.std_error == Catch::Approx(a.std_error / 2.0).epsilon(0.05));

    // the batch layout, not the thread count, fixes the stream
    setenv("CURSED_KNIGHT_THREADS", "1", 1);
    const auto serial = simulate_game(s1, s2, kIdentity, 250000, 77);
    unsetenv("CURSED_KNIGHT_THREADS");
    CHECK(serial.mean_payoff1 == a.mean_payoff1);
}

TEST_CASE("tabulated strategies") {
    // trade probability rising linearly in the type
    const auto s = GeneralStrategy::tabulated({0.0, 1.0});
    CHECK(s.trade_probability(0.25) == Catch::Approx(0.25));
    CHECK_FALSE(s.deterministic());
    CHECK(s.average_trade_probability(kIdentity) == Catch::Approx(0.5).margin(1e-9));
    CHECK_THROWS_AS(s.trade_intervals(), std::logic_error);
    // randomized strategies simulate but cannot be certified
    const auto sim = simulate_game(s, s, kIdentity, 100000, 3);
    CHECK(sim.games == 100000);
    CHECK_THROWS_AS(verify_equilibrium(s, s, Concept{ConceptKind::rational, 0.0},
                                       Concept{ConceptKind::rational, 0.0}, kContamination, 2000),
                    std::invalid_argument);

    CHECK_THROWS_AS(GeneralStrategy::intervals({{0.4, 0.2}}), std::invalid_argument);
    CHECK_THROWS_AS(GeneralStrategy::intervals({{0.1, 0.3}, {0.2, 0.5}}), std::invalid_argument);
}

TEST_CASE("random band members stay inside the envelopes") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto member = sample_band_member(kContamination, 33, seed);
        double prev = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double t = i / 256.0;
            const double y = member.curve(t);
            REQUIRE(y >= kContamination.lower(t) - 1e-12);
            REQUIRE(y <= kContamination.upper(t) + 1e-12);
            REQUIRE(y >= prev - 1e-15);
            prev = y;
        }
        const auto again = sample_band_member(kContamination, 33, seed);
        CHECK(again.curve(0.37) == member.curve(0.37));
    }
}

TEST_CASE("brute-force minimum brackets the closed form") {
    const Concept c{ConceptKind::maxmin_rational, 1.0};
    ValueQuery q{0.3, Action::trade, CutoffStrategy{0.8}, kContamination, 1.0};
    const double closed = value_maxmin_rational(q);
    const double m500 = bruteforce_min_value(c, q, 500, 33, 5);
    const double m5000 = bruteforce_min_value(c, q, 5000, 33, 5);
    CHECK(m500 >= closed - 1e-9);
    CHECK(m500 <= closed + 1e-3);
    CHECK(m5000 <= m500 + 1e-12);  // min over a superset of samples

    SECTION("the hedge case is flat across the whole band") {
        ValueQuery hedge{0.3, Action::trade, CutoffStrategy{0.5}, kContamination, 1.0};
        CHECK(bruteforce_min_value(Concept{ConceptKind::maxmin_cursed_under_center, 1.0}, hedge,
                                   100, 17, 9) == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("zero uncertainty collapses to a single distribution") {
        ValueQuery zq{0.3, Action::trade, CutoffStrategy{0.8}, make_uniform_band(), 1.0};
        CHECK(bruteforce_min_value(c, zq, 50, 9, 4) ==
              Catch::Approx(value_rational(zq)).margin(1e-12));
    }
}

TEST_CASE("grid best responses") {
    const int grid_n = 2000;
    SECTION("cursed play against a median cut-off") {
        const auto reply = grid_best_response(Concept{ConceptKind::cursed, 1.0},
                                              GeneralStrategy::cutoff(0.5), make_uniform_band(), grid_n);
        double t = 0.0;
        REQUIRE(single_cutoff_of(reply, grid_n, &t));
        CHECK(std::abs(t - 0.5) <= 1.01 / grid_n);
    }
    SECTION("pinned-average cursed reply to a low cut-off") {
        const auto reply =
            grid_best_response(Concept{ConceptKind::maxmin_cursed_under_center, 1.0},
                               GeneralStrategy::cutoff(0.4), kContamination, grid_n);
        double t = 0.0;
        REQUIRE(single_cutoff_of(reply, grid_n, &t));
        CHECK(std::abs(t - 5.0 / 7.0) <= 1.01 / grid_n);
    }
    SECTION("maxmin rational reply to an interval strategy trades only at its lower edge") {
        // interval chosen so the band can flatten it to zero mass
        const double a_hi = 0.6;
        const double a_lo = kContamination.upper.inverse(kContamination.lower(a_hi));
        const auto reply =
            grid_best_response(Concept{ConceptKind::maxmin_rational, 1.0},
                               GeneralStrategy::intervals({{a_lo, a_hi}}), kContamination, grid_n);
        for (const auto& run : reply.trade_intervals()) {
            CHECK(run.lo >= a_lo - 1.01 / grid_n);
            CHECK(run.hi <= a_lo + 1.01 / grid_n);
        }
    }
}

TEST_CASE("equilibrium certification") {
    const Concept cursed_c{ConceptKind::maxmin_cursed_under_center, 1.0};
    const Concept rational_c{ConceptKind::rational, 0.0};
    const Concept maxmin_c{ConceptKind::maxmin_rational, 1.0};

    SECTION("the symmetric threshold profile is certified") {
        const double star = symmetric_ckne_threshold(kContamination);
        const auto check = verify_equilibrium(GeneralStrategy::cutoff(star),
                                              GeneralStrategy::cutoff(star), cursed_c, cursed_c,
                                              kContamination, 4000);
        CHECK(check.certified);
    }
    SECTION("the cursed median profile is certified") {
        const auto check = verify_equilibrium(GeneralStrategy::cutoff(0.5),
                                              GeneralStrategy::cutoff(0.5),
                                              Concept{ConceptKind::cursed, 1.0},
                                              Concept{ConceptKind::cursed, 1.0},
                                              make_uniform_band(), 4000);
        CHECK(check.certified);
    }
    SECTION("a perturbed profile is rejected with a localized improvement") {
        const auto check = verify_equilibrium(GeneralStrategy::cutoff(0.5),
                                              GeneralStrategy::cutoff(0.6),
                                              Concept{ConceptKind::cursed, 1.0},
                                              Concept{ConceptKind::cursed, 1.0},
                                              make_uniform_band(), 4000);
        CHECK_FALSE(check.certified);
        CHECK(check.max_improvement > 1e-3);
        CHECK(check.worst_type > 0.5 - 1e-9);
        CHECK(check.worst_type < 0.6 + 1e-9);
    }
    SECTION("no-trade is certified for rational and maxmin-rational play") {
        const auto zero = GeneralStrategy::cutoff(0.0);
        CHECK(verify_equilibrium(zero, zero, rational_c, rational_c, kContamination, 2000).certified);
        CHECK(verify_equilibrium(zero, zero, maxmin_c, maxmin_c, kContamination, 2000).certified);
    }
    SECTION("the non-cut-off profile against an interval strategy is certified") {
        const double a_hi = 0.6;
        const double a_lo = kContamination.upper.inverse(kContamination.lower(a_hi));
        const auto s1 = GeneralStrategy::intervals({{a_lo, a_hi}});
        const auto s2 = GeneralStrategy::intervals({{a_lo, a_lo}});  // trade only at one type
        const auto check = verify_equilibrium(s1, s2, maxmin_c, maxmin_c, kContamination, 4000);
        CHECK(check.certified);
    }
}
