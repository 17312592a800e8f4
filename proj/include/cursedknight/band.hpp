#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cursedknight/cdf.hpp"
#include "cursedknight/root_finding.hpp"

namespace cursedknight {

// A distribution band: every continuous weakly increasing CDF between the
// lower and upper envelopes, with a designated center distribution. After
// quantile normalization the center is the identity and the envelopes
// satisfy the mirror identity F_l(1-t) = 1 - F_h(t).
struct DistributionBand {
    CdfCurve lower;   // dominating distribution (smallest CDF values)
    CdfCurve center;  // the distribution that actually generates types
    CdfCurve upper;   // dominated distribution (largest CDF values)
    bool normalized = false;          // center is the identity
    bool relaxed_strictness = false;  // envelopes may be flat away from the middle (epsilon family)
    std::string description;

    // median of the dominated distribution, F_h^{-1}(1/2); left end of the
    // interval where equilibrium cut-offs can live
    double lower_median() const { return upper.inverse(0.5); }
    // median of the dominating distribution, F_l^{-1}(1/2); right end
    double upper_median() const { return lower.inverse(0.5); }
    bool certain_median() const { return upper_median() - lower_median() < 1e-12; }
};

// Structural checks: envelope ordering on a dense grid, the mirror symmetry
// (normalized bands, interior points only -- the epsilon family violates it
// exactly at the endpoints by its jump), and strict monotonicity unless the
// band opted into the relaxed regime.
inline void validate_band(const DistributionBand& band, int grid_points = 2049,
                          bool check_symmetry = true) {
    if (grid_points < 1024) grid_points = 1024;
    for (int i = 0; i <= grid_points; ++i) {
        const double t = static_cast<double>(i) / grid_points;
        const double lo = band.lower(t), mid = band.center(t), hi = band.upper(t);
        if (lo > mid + 1e-10 || mid > hi + 1e-10)
            throw std::invalid_argument("band violates envelope ordering at theta=" + std::to_string(t));
        if (check_symmetry && band.normalized && i > 0 && i < grid_points) {
            const double gap = std::abs(band.lower(1.0 - t) - (1.0 - band.upper(t)));
            if (gap > 1e-9)
                throw std::invalid_argument("band violates mirror symmetry at theta=" + std::to_string(t));
        }
    }
    if (!band.relaxed_strictness &&
        (!band.lower.strictly_increasing() || !band.upper.strictly_increasing()))
        throw std::invalid_argument("band envelopes must be strictly increasing");
}

// ---------------------------------------------------------------------------
// Parametric families around the uniform center
// ---------------------------------------------------------------------------

// density between 1-kappa and 1+kappa; kinks at 1/2
inline DistributionBand make_contamination_band(double kappa) {
    if (!(kappa >= 0.0 && kappa < 1.0))
        throw std::invalid_argument("contamination: kappa must lie in [0,1)");
    DistributionBand band;
    band.center = CdfCurve::identity();
    band.normalized = true;
    band.description = "contamination(kappa=" + std::to_string(kappa) + ")";
    if (kappa == 0.0) {
        band.lower = band.upper = CdfCurve::identity();
        return band;
    }
    band.lower = CdfCurve::piecewise_linear(
        {{0.0, 0.0}, {0.5, (1.0 - kappa) / 2.0}, {1.0, 1.0}}, "contamination-lower");
    band.upper = CdfCurve::piecewise_linear(
        {{0.0, 0.0}, {0.5, (1.0 + kappa) / 2.0}, {1.0, 1.0}}, "contamination-upper");
    validate_band(band);
    return band;
}

// triangle envelopes with slopes 1/a and a; kinks at a/(a+1) and 1/(a+1)
inline DistributionBand make_triangle_band(double a) {
    if (!(a >= 1.0))
        throw std::invalid_argument("triangle: a must lie in [1,inf)");
    DistributionBand band;
    band.center = CdfCurve::identity();
    band.normalized = true;
    band.description = "triangle(a=" + std::to_string(a) + ")";
    if (a == 1.0) {
        band.lower = band.upper = CdfCurve::identity();
        return band;
    }
    band.lower = CdfCurve::piecewise_linear(
        {{0.0, 0.0}, {a / (a + 1.0), 1.0 / (a + 1.0)}, {1.0, 1.0}}, "triangle-lower");
    band.upper = CdfCurve::piecewise_linear(
        {{0.0, 0.0}, {1.0 / (a + 1.0), a / (a + 1.0)}, {1.0, 1.0}}, "triangle-upper");
    validate_band(band);
    return band;
}

// sup-norm ball of radius eps around the uniform. The lower envelope is flat
// at 0 on [0,eps] and jumps to 1 at theta=1; the upper starts at eps and is
// flat at 1 on [1-eps,1]. Strictness holds only on the middle interval, which
// is where every equilibrium object lives.
inline DistributionBand make_epsilon_band(double eps) {
    if (!(eps >= 0.0 && eps < 0.5))
        throw std::invalid_argument("epsilon: eps must lie in [0,1/2)");
    DistributionBand band;
    band.center = CdfCurve::identity();
    band.normalized = true;
    band.description = "epsilon(eps=" + std::to_string(eps) + ")";
    if (eps == 0.0) {
        band.lower = band.upper = CdfCurve::identity();
        return band;
    }
    band.relaxed_strictness = true;
    band.lower = CdfCurve::piecewise_linear(
        {{0.0, 0.0}, {eps, 0.0}, {1.0, 1.0 - eps}}, "epsilon-lower",
        /*jump_to_one=*/true);
    band.upper = CdfCurve::piecewise_linear(
        {{0.0, eps}, {1.0 - eps, 1.0}, {1.0, 1.0}}, "epsilon-upper");
    validate_band(band);  // mirror symmetry holds at interior grid points
    return band;
}

inline DistributionBand make_uniform_band() { return make_contamination_band(0.0); }

enum class BandFamily { contamination, triangle, epsilon };

inline DistributionBand make_parametrized_band(BandFamily family, double param) {
    switch (family) {
        case BandFamily::contamination: return make_contamination_band(param);
        case BandFamily::triangle: return make_triangle_band(param);
        case BandFamily::epsilon: return make_epsilon_band(param);
    }
    throw std::invalid_argument("unknown band family");
}

inline DistributionBand make_custom_band(CdfCurve lower, CdfCurve center, CdfCurve upper,
                                         std::string description = "custom",
                                         bool relaxed_strictness = false) {
    DistributionBand band;
    band.lower = std::move(lower);
    band.center = std::move(center);
    band.upper = std::move(upper);
    band.normalized = band.center.is_identity();
    band.relaxed_strictness = relaxed_strictness;
    band.description = std::move(description);
    validate_band(band, 2049, /*check_symmetry=*/false);
    return band;
}

// ---------------------------------------------------------------------------
// Quantile normalization
// ---------------------------------------------------------------------------

// Identify types with center quantiles: the center becomes the identity and
// the envelopes become F_l o Fc^{-1} and F_h o Fc^{-1}, sampled on a dense
// grid (monotone piecewise-linear is the universal fallback for compositions
// without a closed form). Idempotent. Rejects bands that violate ordering.
inline DistributionBand normalize_band(const DistributionBand& band, int knots = 2049) {
    validate_band(band, 2049, /*check_symmetry=*/false);
    if (band.normalized) return band;
    if (knots < 1025) knots = 1025;
    auto compose = [&](const CdfCurve& outer, const std::string& name) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(static_cast<std::size_t>(knots));
        for (int i = 0; i < knots; ++i) {
            const double p = static_cast<double>(i) / (knots - 1);
            pts.emplace_back(p, outer(band.center.inverse(p)));
        }
        pts.back().second = 1.0;
        return CdfCurve::piecewise_linear(std::move(pts), name);
    };
    DistributionBand out;
    out.lower = compose(band.lower, "normalized-lower");
    out.center = CdfCurve::identity();
    out.upper = compose(band.upper, "normalized-upper");
    out.normalized = true;
    out.relaxed_strictness = true;  // sampled compositions are only weakly increasing
    out.description = band.description + " (quantile-normalized)";
    validate_band(out, 2049, /*check_symmetry=*/false);
    return out;
}

// ---------------------------------------------------------------------------
// Named built-in constructions
// ---------------------------------------------------------------------------

// Band whose symmetric-equilibrium condition has three solutions: one
// symmetric profile and one swapped pair. The lower envelope is built from a
// quadratic upper envelope and the wobble g so that the equilibrium
// best-response map on the upper half equals g itself.
inline DistributionBand multi_equilibrium_band() {
    constexpr double pi = std::numbers::pi;
    auto wobble = [=](double t) {
        const double s = std::sin(4.0 * pi * t) / 16.0 + t - 0.5;
        return 1.0 - 4.0 * s * s;
    };
    auto fh_up = [](double t) { return 0.8 * (t - 0.5) * (t - 0.5) + 0.8; };
    auto fl_up = [=](double t) { return (1.0 - 2.0 * fh_up(t)) * wobble(t) + fh_up(t); };
    auto fl = [=](double t) { return t >= 0.5 ? fl_up(t) : 1.0 - fh_up(1.0 - t); };
    auto fh = [=](double t) { return t >= 0.5 ? fh_up(t) : 1.0 - fl_up(1.0 - t); };

    DistributionBand band;
    band.lower = CdfCurve::formula(fl, "multi-equilibrium-lower");
    band.center = CdfCurve::identity();
    band.upper = CdfCurve::formula(fh, "multi-equilibrium-upper");
    band.normalized = true;
    band.description = "multi-equilibrium (sine construction)";
    validate_band(band);
    return band;
}

// Pair of bands around the uniform where the wide band strictly encloses the
// narrow one yet the symmetric equilibrium threshold is *smaller* under the
// wide band. first = narrow, second = wide.
inline std::pair<DistributionBand, DistributionBand> nonmonotonicity_band_pair() {
    DistributionBand narrow;
    narrow.lower = CdfCurve::piecewise_linear({{0.0, 0.0}, {0.5, 0.45}, {1.0, 1.0}},
                                              "nonmono-narrow-lower");
    narrow.center = CdfCurve::identity();
    narrow.upper = CdfCurve::piecewise_linear({{0.0, 0.0}, {0.5, 0.55}, {1.0, 1.0}},
                                              "nonmono-narrow-upper");
    narrow.normalized = true;
    narrow.description = "nonmonotonicity-narrow";
    validate_band(narrow);

    auto gh_up = [](double t) { return 0.425 * std::pow(2.0 * t - 1.0, 0.1) + 0.575; };
    auto gl_up = [](double t) { return 1.15 * t - 0.15; };
    auto gl = [=](double t) { return t >= 0.5 ? gl_up(t) : 1.0 - gh_up(1.0 - t); };
    auto gh = [=](double t) { return t >= 0.5 ? gh_up(t) : 1.0 - gl_up(1.0 - t); };

    DistributionBand wide;
    wide.lower = CdfCurve::formula(gl, "nonmono-wide-lower");
    wide.center = CdfCurve::identity();
    wide.upper = CdfCurve::formula(gh, "nonmono-wide-upper");
    wide.normalized = true;
    wide.description = "nonmonotonicity-wide";
    validate_band(wide);
    return {narrow, wide};
}

// generalized inverse of the envelope sum, inf{t : F_l(t) + F_h(t) >= p}
inline double envelope_sum_inverse(const DistributionBand& band, double p) {
    if (!(p >= 0.0 && p <= 2.0)) throw std::domain_error("envelope sum target out of range");
    auto sum = [&](double t) { return band.lower(t) + band.upper(t); };
    if (sum(0.0) >= p) return 0.0;
    double lo = 0.0, hi = 1.0;  // sum(1) = 2 >= p
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sum(mid) >= p ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace cursedknight
