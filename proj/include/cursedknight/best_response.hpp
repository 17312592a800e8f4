#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cursedknight/band.hpp"
#include "cursedknight/root_finding.hpp"
#include "cursedknight/valuation.hpp"

namespace cursedknight {

// A best reply is always a cut-off strategy here. When the opponent almost
// surely never trades, every strategy is a best reply; we report threshold 0
// with the degenerate flag set instead of "anything".
struct BestResponse {
    double threshold = 0.0;
    bool degenerate = false;
};

// chi-cursed best response against a cut-off opponent, under the band's
// center distribution F. In quantile terms the reply to q = F(opp) is
// q / (2 (1-chi+chi q)); players with chi > 1/2 additionally never go below
// (2 chi - 1)/(2 chi), which makes their reply constant against low cut-offs.
inline BestResponse br_partial(double chi, double opp_threshold, const DistributionBand& band) {
    check_unit_interval(chi, "chi");
    check_unit_interval(opp_threshold, "opponent threshold");
    if (opp_threshold <= 0.0) return {0.0, true};
    const CdfCurve& F = band.center;
    const double q = F(opp_threshold);
    double target = q / (2.0 * (1.0 - chi + chi * q));
    if (chi > 0.5) target = std::max(target, (2.0 * chi - 1.0) / (2.0 * chi));
    return {F.inverse(target), false};
}

// Maxmin best response of an uncursed player: undercut to the point where
// F_l(t) = F_l(opp) - F_h(t), i.e. t = (F_l+F_h)^{-1}(F_l(opp)). Uses the
// left limit of F_l at the opponent threshold so that an always-trading
// opponent (threshold 1) is handled on the epsilon family.
inline BestResponse br_maxmin_rational(double opp_threshold, const DistributionBand& band) {
    check_unit_interval(opp_threshold, "opponent threshold");
    detail::require_normalized(band);
    if (opp_threshold <= 0.0) return {0.0, true};
    const double target = band.lower.left_limit(opp_threshold);
    return {envelope_sum_inverse(band, target), false};
}

// Maxmin cursed best response when the average strategy sbar = F*(opp) is
// pinned by the center. For sbar <= 1/2 the reply is F_l^{-1}(1/2); for
// sbar > 1/2 it solves F_l(t) = (1-2*sbar) F_h(t) + sbar, which has one sign
// change on [F_h^{-1}(1/2), 1].
inline BestResponse br_maxmin_cursed_under_center(double opp_threshold,
                                                  const DistributionBand& band) {
    check_unit_interval(opp_threshold, "opponent threshold");
    detail::require_normalized(band);
    if (opp_threshold <= 0.0) return {0.0, true};
    const double sbar = band.center(opp_threshold);
    if (sbar <= 0.5) return {band.upper_median(), false};
    auto gap = [&](double t) {
        return band.lower(t) - ((1.0 - 2.0 * sbar) * band.upper(t) + sbar);
    };
    const double lo = band.lower_median();
    return {bisect(gap, lo, 1.0, 1e-13), false};
}

// Ambiguous maxmin cursed best response. Against low cut-offs (below the
// dominated median) the reply is F_l^{-1}(1/2). Against cut-offs in the
// median interval it is the root of
//   W(t) = F_h(t) + F_h(opp) - 2 F_h(t) F_h(opp) - F_l(t),
// which is strictly decreasing in t. Against high cut-offs the reply lies in
// the median interval and is bracketed by the sign of the trade/no-trade gap
// of the four-combination minimum, without assuming which envelope case is
// active.
inline BestResponse br_ambiguous_cursed(double opp_threshold, const DistributionBand& band) {
    check_unit_interval(opp_threshold, "opponent threshold");
    detail::require_normalized(band);
    if (opp_threshold <= 0.0) return {0.0, true};
    const double x2_lo = band.lower_median();
    const double x2_hi = band.upper_median();
    if (opp_threshold < x2_lo) return {x2_hi, false};
    if (x2_hi - x2_lo < 1e-13) return {x2_hi, false};
    if (opp_threshold <= x2_hi) {
        const double fh_opp = band.upper(opp_threshold);
        auto W = [&](double t) {
            const double fh = band.upper(t);
            return fh + fh_opp - 2.0 * fh * fh_opp - band.lower(t);
        };
        const double lo = std::max(1.0 - opp_threshold, x2_lo);
        return {bisect(W, lo, x2_hi, 1e-13), false};
    }
    auto gap = [&](double t) {
        ValueQuery q{t, Action::trade, CutoffStrategy{opp_threshold}, band, 1.0};
        return value_ambiguous_cursed(q) - band.lower(t);
    };
    return {bisect(gap, x2_lo, x2_hi, 1e-13), false};
}

inline BestResponse best_response(const Concept& c, double opp_threshold,
                                  const DistributionBand& band) {
    switch (c.kind) {
        case ConceptKind::rational: return br_partial(0.0, opp_threshold, band);
        case ConceptKind::cursed: return br_partial(1.0, opp_threshold, band);
        case ConceptKind::partial: return br_partial(c.chi, opp_threshold, band);
        case ConceptKind::maxmin_rational: return br_maxmin_rational(opp_threshold, band);
        case ConceptKind::maxmin_cursed_under_center:
            return br_maxmin_cursed_under_center(opp_threshold, band);
        case ConceptKind::ambiguous_cursed: return br_ambiguous_cursed(opp_threshold, band);
    }
    throw std::invalid_argument("unknown concept");
}

}  // namespace cursedknight
