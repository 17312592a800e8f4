#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cursedknight/best_response.hpp"
#include "cursedknight/equilibria.hpp"
#include "cursedknight/oracle.hpp"
#include "cursedknight/rng.hpp"

using namespace cursedknight;

namespace {
const DistributionBand kUniform = make_uniform_band();
const DistributionBand kContamination = make_contamination_band(0.75);
}  // namespace

TEST_CASE("chi-cursed best responses under the uniform center") {
    CHECK(br_partial(0.0, 0.6, kUniform).threshold == Catch::Approx(0.3));
    // fully cursed players clamp at the median whatever the opponent does
    CHECK(br_partial(1.0, 0.2, kUniform).threshold == Catch::Approx(0.5));
    CHECK(br_partial(0.4, 0.5, kUniform).threshold == Catch::Approx(0.3125));
    CHECK(br_partial(0.8, 0.2, kUniform).threshold == Catch::Approx(0.375));  // clamp branch
}

TEST_CASE("opponents who never trade make every reply degenerate") {
    for (const Concept& c :
         {Concept{ConceptKind::rational, 1.0}, Concept{ConceptKind::cursed, 1.0},
          Concept{ConceptKind::partial, 0.7}, Concept{ConceptKind::maxmin_rational, 1.0},
          Concept{ConceptKind::maxmin_cursed_under_center, 1.0},
          Concept{ConceptKind::ambiguous_cursed, 1.0}}) {
        const auto br = best_response(c, 0.0, kContamination);
        CHECK(br.degenerate);
        CHECK(br.threshold == 0.0);
    }
}

TEST_CASE("maxmin rational replies undercut the opponent") {
    CHECK(br_maxmin_rational(0.6, kUniform).threshold == Catch::Approx(0.3));
    CHECK(br_maxmin_rational(0.6, kContamination).threshold == Catch::Approx(0.15));
    // always-trading opponent on the epsilon family: left limit of the lower
    // envelope at 1 feeds the envelope-sum inversion
    CHECK(br_maxmin_rational(1.0, make_epsilon_band(0.2)).threshold == Catch::Approx(0.4).margin(1e-12));

    for (const auto& band : {kContamination, make_triangle_band(2.0), make_epsilon_band(0.2)})
        for (int i = 1; i <= 20; ++i) {
            const double that = i / 20.0;
            REQUIRE(br_maxmin_rational(that, band).threshold < that);
        }
}

TEST_CASE("maxmin cursed replies with the average pinned by the center") {
    CHECK(br_maxmin_cursed_under_center(0.4, kContamination).threshold == Catch::Approx(5.0 / 7.0));
    CHECK(br_maxmin_cursed_under_center(0.7, kUniform).threshold == Catch::Approx(0.5).margin(1e-12));
    // the symmetric equilibrium threshold is the map's fixed point
    const double star = symmetric_ckne_threshold(kContamination);
    CHECK(br_maxmin_cursed_under_center(star, kContamination).threshold ==
          Catch::Approx(star).margin(1e-9));
}

TEST_CASE("ambiguous cursed replies") {
    for (double that : {0.1, 0.4, 0.6, 0.9})
        CHECK(br_ambiguous_cursed(that, kUniform).threshold == Catch::Approx(0.5).margin(1e-12));

    const double star = ambiguous_ckne_threshold(kContamination);
    CHECK(br_ambiguous_cursed(star, kContamination).threshold == Catch::Approx(star).margin(1e-9));

    // at the dominated median the reply sits exactly at the mirror point
    const double x2_lo = kContamination.lower_median();
    CHECK(br_ambiguous_cursed(x2_lo, kContamination).threshold >=
          1.0 - x2_lo - 1e-12);

    // decreasing on the median interval, with the range the theory prescribes
    const double x2_hi = kContamination.upper_median();
    double prev = 2.0;
    for (int i = 0; i <= 40; ++i) {
        const double that = x2_lo + (x2_hi - x2_lo) * i / 40.0;
        const double b = br_ambiguous_cursed(that, kContamination).threshold;
        REQUIRE(b <= prev + 1e-10);
        REQUIRE(b >= 1.0 - that - 1e-10);
        REQUIRE(b <= x2_hi + 1e-10);
        prev = b;
    }

    // replies to thresholds outside the median interval land inside it
    for (double that : {0.05, 0.2, 0.8, 0.95, 1.0}) {
        const double b = br_ambiguous_cursed(that, kContamination).threshold;
        REQUIRE(b >= x2_lo - 1e-10);
        REQUIRE(b <= x2_hi + 1e-10);
    }
}

TEST_CASE("partial replies are monotone in the opponent threshold and in chi") {
    for (double chi : {0.0, 0.3, 0.5, 0.7, 1.0}) {
        double prev = -1.0;
        for (int i = 1; i <= 50; ++i) {
            const double that = i / 50.0;
            const double b = br_partial(chi, that, kUniform).threshold;
            REQUIRE(b >= prev - 1e-12);
            prev = b;
        }
    }
    for (double that : {0.2, 0.5, 0.8}) {
        double prev = -1.0;
        for (int i = 0; i <= 50; ++i) {
            const double chi = i / 50.0;
            const double b = br_partial(chi, that, kUniform).threshold;
            REQUIRE(b > prev);
            prev = b;
        }
    }
}

TEST_CASE("closed-form replies agree with the grid argmax oracle") {
    Rng rng(7);
    const int grid_n = 2000;
    for (int i = 0; i < 40; ++i) {
        DistributionBand band;
        double eps_param = 0.0;
        switch (rng.next_u64() % 3) {
            case 0: band = make_contamination_band(rng.uniform(0.1, 0.9)); break;
            case 1: band = make_triangle_band(rng.uniform(1.1, 6.0)); break;
            default:
                eps_param = rng.uniform(0.05, 0.4);
                band = make_epsilon_band(eps_param);
                break;
        }
        Concept c;
        switch (rng.next_u64() % 6) {
            case 0: c = {ConceptKind::rational, 0.0}; break;
            case 1: c = {ConceptKind::cursed, 1.0}; break;
            case 2: c = {ConceptKind::partial, rng.uniform01()}; break;
            case 3: c = {ConceptKind::maxmin_rational, 1.0}; break;
            case 4: c = {ConceptKind::maxmin_cursed_under_center, 1.0}; break;
            default: c = {ConceptKind::ambiguous_cursed, 1.0}; break;
        }
        // the ambiguous reply is a unique threshold only where F_l(that) > 0
        // (on the epsilon family the flat foot makes every low type
        // indifferent); keep the comparison inside the uniqueness domain
        const double lo = c.kind == ConceptKind::ambiguous_cursed && eps_param > 0.0
                              ? eps_param + 0.05
                              : 0.05;
        const double that = rng.uniform(lo, 0.95);
        const double closed = best_response(c, that, band).threshold;
        const auto reply = grid_best_response(c, GeneralStrategy::cutoff(that), band, grid_n);
        double grid_threshold = 0.0;
        REQUIRE(single_cutoff_of(reply, grid_n, &grid_threshold));
        REQUIRE(std::abs(grid_threshold - closed) <= 1.01 / grid_n);
    }
}
