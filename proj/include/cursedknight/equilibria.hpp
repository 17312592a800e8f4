#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cursedknight/band.hpp"
#include "cursedknight/best_response.hpp"
#include "cursedknight/root_finding.hpp"
#include "cursedknight/valuation.hpp"

namespace cursedknight {

enum class SolveMethod { closed_form, bisection, fixed_point, grid_polish };

inline const char* method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::closed_form: return "closed-form";
        case SolveMethod::bisection: return "bisection";
        case SolveMethod::fixed_point: return "fixed-point";
        case SolveMethod::grid_polish: return "2d-grid+polish";
    }
    return "unknown";
}

// Solver output. profiles[0] is the trivial no-trade representative (0,0)
// whenever trivial_included is set; it stands for the whole measure-zero
// equivalence class of profiles that almost surely never trade. Non-trivial
// profiles follow, sorted by the first threshold. residuals[i] is the larger
// of the two players' indifference-equation residuals at profiles[i].
struct EquilibriumResult {
    std::string concept_tag;
    std::string band;
    std::vector<std::array<double, 2>> profiles;
    std::vector<double> residuals;
    SolveMethod method = SolveMethod::closed_form;
    bool trivial_included = true;
    bool grid_warning = false;
    std::string notes;

    std::vector<std::array<double, 2>> non_trivial_profiles() const {
        std::vector<std::array<double, 2>> out;
        for (const auto& p : profiles)
            if (p[0] > 0.0 || p[1] > 0.0) out.push_back(p);
        return out;
    }
};

// residual of the paired indifference equations, evaluated through the value
// functionals; exactly 0 at (0,0) since no action changes the outcome there
inline double profile_residual(const Concept& c1, const Concept& c2,
                               const DistributionBand& band, double t1, double t2) {
    ValueQuery q1{t1, Action::trade, CutoffStrategy{t2}, band, c1.chi};
    ValueQuery q2{t2, Action::trade, CutoffStrategy{t1}, band, c2.chi};
    auto gap = [&](const Concept& c, ValueQuery q) {
        q.action = Action::trade;
        const double tr = value(c, q);
        q.action = Action::no_trade;
        return std::abs(tr - value(c, q));
    };
    return std::max(gap(c1, q1), gap(c2, q2));
}

namespace detail {
inline void push_profile(EquilibriumResult& r, const Concept& c1, const Concept& c2,
                         const DistributionBand& band, double t1, double t2) {
    r.profiles.push_back({t1, t2});
    r.residuals.push_back(profile_residual(c1, c2, band, t1, t2));
}
inline void push_trivial(EquilibriumResult& r) {
    r.profiles.push_back({0.0, 0.0});
    r.residuals.push_back(0.0);
    r.trivial_included = true;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// No-trade benchmarks
// ---------------------------------------------------------------------------

// Rational play: trade never happens, under any type distribution.
inline EquilibriumResult solve_bne() {
    EquilibriumResult r;
    r.concept_tag = "bne";
    r.band = "any";
    r.method = SolveMethod::closed_form;
    detail::push_trivial(r);
    r.notes = "no-trade profile; representative of the class of strategies that almost surely never trade";
    return r;
}

// Rational play with maxmin preferences, restricted to cut-off strategies:
// still only the no-trade profile.
inline EquilibriumResult solve_knight_nash_cutoff(const DistributionBand& band) {
    detail::require_normalized(band);
    EquilibriumResult r;
    r.concept_tag = "knight-nash";
    r.band = band.description;
    r.method = SolveMethod::closed_form;
    detail::push_trivial(r);
    r.notes = "only no-trade survives mutual undercutting in cut-off strategies";
    return r;
}

// ---------------------------------------------------------------------------
// Cursed play without uncertainty: both players cut off at the median.
// ---------------------------------------------------------------------------
inline EquilibriumResult solve_cursed_no_uncertainty(const CdfCurve& center) {
    if (!center.strictly_increasing())
        throw std::invalid_argument("cursed equilibrium needs a strictly increasing center");
    EquilibriumResult r;
    r.concept_tag = "cursed";
    r.band = center.name();
    r.method = SolveMethod::closed_form;
    detail::push_trivial(r);
    DistributionBand b;
    b.lower = b.upper = b.center = center;
    b.normalized = center.is_identity();
    b.description = center.name();
    const double m = center.inverse(0.5);
    Concept cursed{ConceptKind::cursed, 1.0};
    detail::push_profile(r, cursed, cursed, b, m, m);
    return r;
}

// ---------------------------------------------------------------------------
// Symmetric cursed Knight-Nash equilibrium under the center
// ---------------------------------------------------------------------------

// Solves F_l(t) = (1-2t) F_h(t) + t on [1/2, F_l^{-1}(1/2)]. The gap equals
// (2 F_h(t)-1)(t - g(t)) with g = (F_h-F_l)/(2F_h-1) decreasing, so it has a
// single sign change. Bands with a certain median collapse to threshold 1/2.
inline double symmetric_ckne_threshold(const DistributionBand& band) {
    detail::require_normalized(band);
    if (band.certain_median()) return 0.5;
    auto gap = [&](double t) {
        return band.lower(t) - ((1.0 - 2.0 * t) * band.upper(t) + t);
    };
    return bisect(gap, 0.5, band.upper_median(), 1e-13);
}

inline EquilibriumResult solve_symmetric_ckne(const DistributionBand& band) {
    validate_band(band);
    EquilibriumResult r;
    r.concept_tag = "symmetric-ckne";
    r.band = band.description;
    detail::push_trivial(r);
    Concept c{ConceptKind::maxmin_cursed_under_center, 1.0};
    if (band.certain_median()) {
        r.method = SolveMethod::closed_form;
        detail::push_profile(r, c, c, band, 0.5, 0.5);
        r.notes = "certain median: both players cut off at the unambiguous median";
        return r;
    }
    r.method = SolveMethod::bisection;
    const double t = symmetric_ckne_threshold(band);
    detail::push_profile(r, c, c, band, t, t);
    return r;
}

// the best-reply map on the upper half in threshold space; an equilibrium
// profile satisfies t2 = g(t1) and t1 = g(t2)
inline double ckne_reply_map(const DistributionBand& band, double t) {
    const double fh = band.upper(t);
    const double denom = 2.0 * fh - 1.0;
    if (denom <= 1e-14) return 1.0;
    return (band.upper(t) - band.lower(t)) / denom;
}

// Finds every cut-off profile solving the paired indifference equations, by a
// sign scan of both residual surfaces over the admissible square followed by
// a one-dimensional polish of the reply-map composition inside each candidate
// cell. Complete only up to the grid resolution.
inline EquilibriumResult solve_all_ckne(const DistributionBand& band, int grid_n = 256) {
    validate_band(band);
    if (grid_n < 64) throw std::invalid_argument("solve_all_ckne: grid_n must be >= 64");
    EquilibriumResult r;
    r.concept_tag = "all-ckne";
    r.band = band.description;
    r.method = SolveMethod::grid_polish;
    detail::push_trivial(r);
    Concept c{ConceptKind::maxmin_cursed_under_center, 1.0};

    if (band.certain_median()) {
        detail::push_profile(r, c, c, band, 0.5, 0.5);
        r.notes = "certain median: unique non-trivial profile at (1/2, 1/2)";
        return r;
    }

    const double lo = 0.5, hi = band.upper_median();
    auto residual1 = [&](double t1, double t2) {
        return (1.0 - 2.0 * t2) * band.upper(t1) + t2 - band.lower(t1);
    };
    const int n = grid_n;
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) ts[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;

    std::vector<double> r1(ts.size() * ts.size()), r2(ts.size() * ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j) {
            r1[i * ts.size() + j] = residual1(ts[i], ts[j]);
            r2[i * ts.size() + j] = residual1(ts[j], ts[i]);
        }
    auto sign_change = [](double a, double b, double cc, double d) {
        const double mn = std::min(std::min(a, b), std::min(cc, d));
        const double mx = std::max(std::max(a, b), std::max(cc, d));
        return mn <= 0.0 && mx >= 0.0;
    };

    auto compose = [&](double t) { return ckne_reply_map(band, ckne_reply_map(band, t)) - t; };
    std::vector<std::array<double, 2>> found;
    const double cell = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * ts.size() + static_cast<std::size_t>(j);
            const bool c1 = sign_change(r1[k], r1[k + 1], r1[k + ts.size()], r1[k + ts.size() + 1]);
            const bool c2 = sign_change(r2[k], r2[k + 1], r2[k + ts.size()], r2[k + ts.size() + 1]);
            if (!c1 || !c2) continue;
            double a = std::max(lo, ts[static_cast<std::size_t>(i)] - cell);
            double b = std::min(hi, ts[static_cast<std::size_t>(i) + 1] + cell);
            const double fa = compose(a), fb = compose(b);
            if ((fa < 0.0) == (fb < 0.0) && fa != 0.0 && fb != 0.0) continue;
            const double t1 = bisect(compose, a, b, 1e-13);
            const double t2 = ckne_reply_map(band, t1);
            if (t2 < lo - 1e-9 || t2 > hi + 1e-9) continue;
            if (profile_residual(c, c, band, t1, t2) > 1e-9) continue;
            bool dup = false;
            for (const auto& p : found)
                dup = dup || (std::abs(p[0] - t1) < 1e-6 && std::abs(p[1] - t2) < 1e-6);
            if (!dup) found.push_back({t1, std::clamp(t2, lo, hi)});
        }
    }
    // close the list under player swap
    const std::size_t base = found.size();
    for (std::size_t i = 0; i < base; ++i) {
        const std::array<double, 2> sw{found[i][1], found[i][0]};
        bool dup = false;
        for (const auto& p : found)
            dup = dup || (std::abs(p[0] - sw[0]) < 1e-6 && std::abs(p[1] - sw[1]) < 1e-6);
        if (!dup && profile_residual(c, c, band, sw[0], sw[1]) <= 1e-9) found.push_back(sw);
    }
    // the symmetric profile must be among the roots
    const double sym = symmetric_ckne_threshold(band);
    bool have_sym = false;
    for (const auto& p : found)
        have_sym = have_sym || (std::abs(p[0] - sym) < 1e-6 && std::abs(p[1] - sym) < 1e-6);
    if (!have_sym) found.push_back({sym, sym});

    std::sort(found.begin(), found.end());
    for (std::size_t i = 0; i + 1 < found.size(); ++i)
        if (found[i + 1][0] - found[i][0] < 2.0 * cell && std::abs(found[i + 1][1] - found[i][1]) < 2.0 * cell)
            r.grid_warning = true;
    for (const auto& p : found) detail::push_profile(r, c, c, band, p[0], p[1]);
    r.notes = "asymmetric search complete up to grid resolution (" + std::to_string(grid_n) + " cells per axis)";
    if (r.grid_warning)
        r.notes += "; clustered roots found -- where an envelope is flat inside the "
                   "search region the indifference equations can hold along a whole "
                   "curve, which the grid reports as root samples";
    return r;
}

// ---------------------------------------------------------------------------
// One cursed and one uncursed player
// ---------------------------------------------------------------------------
inline EquilibriumResult solve_cursed_uncursed(const DistributionBand& band) {
    validate_band(band);
    EquilibriumResult r;
    r.concept_tag = "cursed-uncursed";
    r.band = band.description;
    r.method = SolveMethod::closed_form;
    detail::push_trivial(r);
    const double t1 = band.upper_median();                 // cursed player
    const double t2 = envelope_sum_inverse(band, 0.5);     // uncursed player
    detail::push_profile(r, Concept{ConceptKind::maxmin_cursed_under_center, 1.0},
                         Concept{ConceptKind::maxmin_rational, 1.0}, band, t1, t2);
    return r;
}

// ---------------------------------------------------------------------------
// Ambiguous cursed Knight-Nash equilibrium (average strategy also worst-case)
// ---------------------------------------------------------------------------

// Solves 2 (F_h(t) - F_h(t)^2) = F_l(t) on [1/2, F_l^{-1}(1/2)]; the left
// side is decreasing there and the right side increasing, so the root is the
// unique fixed point of the (decreasing) best-reply map.
inline double ambiguous_ckne_threshold(const DistributionBand& band) {
    detail::require_normalized(band);
    if (band.certain_median()) return 0.5;
    auto gap = [&](double t) {
        const double fh = band.upper(t);
        return 2.0 * (fh - fh * fh) - band.lower(t);
    };
    return bisect(gap, 0.5, band.upper_median(), 1e-13);
}

inline EquilibriumResult solve_ambiguous_ckne(const DistributionBand& band) {
    validate_band(band);
    EquilibriumResult r;
    r.concept_tag = "ambiguous-ckne";
    r.band = band.description;
    detail::push_trivial(r);
    Concept c{ConceptKind::ambiguous_cursed, 1.0};
    if (band.certain_median()) {
        r.method = SolveMethod::closed_form;
        detail::push_profile(r, c, c, band, 0.5, 0.5);
        r.notes = "certain median: both players cut off at the unambiguous median";
        return r;
    }
    r.method = SolveMethod::bisection;
    const double t = ambiguous_ckne_threshold(band);
    detail::push_profile(r, c, c, band, t, t);
    r.notes = "unique non-trivial equilibrium within cut-off strategies";
    return r;
}

inline EquilibriumResult solve_ambiguous_cursed_uncursed(const DistributionBand& band) {
    validate_band(band);
    EquilibriumResult r;
    r.concept_tag = "ambiguous-cursed-uncursed";
    r.band = band.description;
    r.method = SolveMethod::closed_form;
    detail::push_trivial(r);
    const double t1 = band.upper_median();
    const double t2 = envelope_sum_inverse(band, 0.5);
    detail::push_profile(r, Concept{ConceptKind::ambiguous_cursed, 1.0},
                         Concept{ConceptKind::maxmin_rational, 1.0}, band, t1, t2);
    return r;
}

// ---------------------------------------------------------------------------
// Partially cursed players, no uncertainty
// ---------------------------------------------------------------------------

// Equilibrium quantiles q_k = F(threshold_k). The more cursed player cuts off
// at (2 m - 1)/(2 m) with m = max(chi1, chi2); the less cursed one at
// (2 m - 1)/(2 (2 m - min)). No trade at all when m <= 1/2.
inline std::array<double, 2> partial_equilibrium_quantiles(double chi1, double chi2) {
    check_unit_interval(chi1, "chi1");
    check_unit_interval(chi2, "chi2");
    const double m = std::max(chi1, chi2);
    if (m <= 0.5) return {0.0, 0.0};
    const double hi = (2.0 * m - 1.0) / (2.0 * m);
    const double lo = (2.0 * m - 1.0) / (2.0 * (2.0 * m - std::min(chi1, chi2)));
    if (chi1 >= chi2) return {hi, lo};
    return {lo, hi};
}

inline EquilibriumResult solve_partial(double chi1, double chi2, const CdfCurve& center) {
    if (!center.strictly_increasing())
        throw std::invalid_argument("partial equilibrium needs a strictly increasing center");
    EquilibriumResult r;
    r.concept_tag = "partial";
    r.band = center.name();
    r.method = SolveMethod::closed_form;
    detail::push_trivial(r);
    const auto q = partial_equilibrium_quantiles(chi1, chi2);
    if (q[0] <= 0.0 && q[1] <= 0.0) {
        r.notes = "max cursedness <= 1/2: only the trivial equilibrium exists";
        return r;
    }
    DistributionBand b;
    b.lower = b.upper = b.center = center;
    b.normalized = center.is_identity();
    b.description = center.name();
    detail::push_profile(r, Concept{ConceptKind::partial, chi1},
                         Concept{ConceptKind::partial, chi2}, b,
                         center.inverse(q[0]), center.inverse(q[1]));
    return r;
}

// ---------------------------------------------------------------------------
// Comparative statics of the band extremes at equilibrium
// ---------------------------------------------------------------------------

struct ComparativeStaticsEntry {
    double threshold_narrow = 0.0, threshold_wide = 0.0;
    double lower_at_narrow = 0.0, lower_at_wide = 0.0;
    double upper_at_narrow = 0.0, upper_at_wide = 0.0;
    bool lower_ordering_holds = false;  // wide envelope value below narrow one
    bool upper_ordering_holds = false;  // wide envelope value above narrow one
};

struct ComparativeStaticsReport {
    ComparativeStaticsEntry symmetric;  // symmetric cursed Knight-Nash thresholds
    ComparativeStaticsEntry ambiguous;  // ambiguous cursed Knight-Nash thresholds
};

// Checks that enlarging the band spreads the equilibrium trade probability:
// the wide band's lower envelope at its threshold falls below the narrow
// band's, and its upper envelope rises above. Requires strict enclosure of
// the narrow band by the wide one on the interior.
inline ComparativeStaticsReport comparative_statics_check(const DistributionBand& narrow,
                                                          const DistributionBand& wide) {
    validate_band(narrow);
    validate_band(wide);
    const int grid = 2048;
    for (int i = 1; i < grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        if (!(wide.lower(t) < narrow.lower(t)) || !(wide.upper(t) > narrow.upper(t)))
            throw std::invalid_argument("comparative statics: wide band must strictly enclose the narrow one on (0,1)");
    }
    ComparativeStaticsReport rep;
    auto fill = [&](double tn, double tw) {
        ComparativeStaticsEntry e;
        e.threshold_narrow = tn;
        e.threshold_wide = tw;
        e.lower_at_narrow = narrow.lower(tn);
        e.lower_at_wide = wide.lower(tw);
        e.upper_at_narrow = narrow.upper(tn);
        e.upper_at_wide = wide.upper(tw);
        e.lower_ordering_holds = e.lower_at_wide < e.lower_at_narrow;
        e.upper_ordering_holds = e.upper_at_wide > e.upper_at_narrow;
        return e;
    };
    rep.symmetric = fill(symmetric_ckne_threshold(narrow), symmetric_ckne_threshold(wide));
    rep.ambiguous = fill(ambiguous_ckne_threshold(narrow), ambiguous_ckne_threshold(wide));
    return rep;
}

// ---------------------------------------------------------------------------
// Printed closed forms for the parametric families (used as solver oracles
// and by the parameter sweeps)
// ---------------------------------------------------------------------------

inline double symmetric_threshold_contamination(double k) {
    return (4.0 * k - 1.0 - std::sqrt(8.0 * k + 1.0)) / (4.0 * (k - 1.0));
}
inline double symmetric_threshold_triangle(double a) {
    return (-a * a - a + 3.0 + std::sqrt(a * a * a * a + 2.0 * a * a * a + 3.0 * a * a - 6.0 * a + 1.0)) / 4.0;
}
inline double symmetric_threshold_epsilon(double e) {
    if (e < 1.0 / 3.0) return (-2.0 * e + 1.0 + std::sqrt(4.0 * e * e + 12.0 * e + 1.0)) / 4.0;
    return (e + 1.0) / 2.0;
}
inline double ambiguous_threshold_contamination(double k) {
    if (k == 0.0) return 0.5;
    return (4.0 * k * k - 7.0 * k + 1.0 + std::sqrt(-7.0 * k * k + 10.0 * k + 1.0)) /
           (4.0 * (k * k - 2.0 * k + 1.0));
}
inline double ambiguous_threshold_triangle(double a) {
    if (a <= std::sqrt(2.0))
        return (-a * a * a - 2.0 * a + 4.0 + a * std::sqrt(a * a * a * a + 4.0 * a * a - 4.0)) / 4.0;
    return (-3.0 * a + 4.0 + std::sqrt(9.0 * a * a - 8.0 * a)) / 4.0;
}
inline double ambiguous_threshold_epsilon(double e) {
    return (-4.0 * e + 1.0 + std::sqrt(16.0 * e + 1.0)) / 4.0;
}

inline double symmetric_threshold_closed_form(BandFamily family, double p) {
    switch (family) {
        case BandFamily::contamination: return symmetric_threshold_contamination(p);
        case BandFamily::triangle: return symmetric_threshold_triangle(p);
        case BandFamily::epsilon: return symmetric_threshold_epsilon(p);
    }
    throw std::invalid_argument("unknown band family");
}
inline double ambiguous_threshold_closed_form(BandFamily family, double p) {
    switch (family) {
        case BandFamily::contamination: return ambiguous_threshold_contamination(p);
        case BandFamily::triangle: return ambiguous_threshold_triangle(p);
        case BandFamily::epsilon: return ambiguous_threshold_epsilon(p);
    }
    throw std::invalid_argument("unknown band family");
}

}  // namespace cursedknight
