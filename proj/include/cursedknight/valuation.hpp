#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cursedknight/band.hpp"

namespace cursedknight {

enum class Action { no_trade, trade };

// trade iff own type <= threshold (the action exactly at the threshold is a
// nullset and never affects payoffs)
struct CutoffStrategy {
    double threshold = 0.0;
};

struct ValueQuery {
    double own_type = 0.0;
    Action action = Action::no_trade;
    CutoffStrategy opponent;
    DistributionBand band;
    double chi = 1.0;  // cursedness weight, used by the partial functional
};

enum class ConceptKind {
    rational,                    // expected win probability under the center
    maxmin_rational,             // worst case over the band
    cursed,                      // respond to the opponent's average strategy
    maxmin_cursed_under_center,  // average strategy pinned by the center, types worst-case
    ambiguous_cursed,            // average strategy itself also worst-case
    partial                      // chi-blend of cursed and rational
};

struct Concept {
    ConceptKind kind = ConceptKind::rational;
    double chi = 1.0;  // meaningful for ConceptKind::partial only
};

namespace detail {
inline void check_query(const ValueQuery& q) {
    check_unit_interval(q.own_type, "own type");
    check_unit_interval(q.opponent.threshold, "opponent threshold");
    check_unit_interval(q.chi, "chi");
}
inline void require_normalized(const DistributionBand& band) {
    if (!band.normalized)
        throw std::invalid_argument("this functional expects a quantile-normalized band");
}
}  // namespace detail

// Win probability of the action under the center distribution, against a
// cut-off opponent. Trading wins when the opponent trades and has the higher
// type, or refuses and has the lower type; not trading wins on lower types.
inline double value_rational(const ValueQuery& q) {
    detail::check_query(q);
    const CdfCurve& F = q.band.center;
    const double own = F(q.own_type);
    if (q.action == Action::no_trade) return own;
    return std::abs(own - F(q.opponent.threshold));
}

// Perceived win probability of a player who treats the opponent's trade
// frequency sbar = F(cutoff) as a type-independent mixture.
inline double value_cursed(const ValueQuery& q) {
    detail::check_query(q);
    const CdfCurve& F = q.band.center;
    const double own = F(q.own_type);
    if (q.action == Action::no_trade) return own;
    const double sbar = F(q.opponent.threshold);
    return sbar * (1.0 - own) + (1.0 - sbar) * own;
}

// Infimum of the rational value over the band. |F(t)-F(that)| over members is
// minimized over the feasible rectangle of (F(t), F(that)) pairs, giving the
// usual distance between intervals: max(Fl(that)-Fh(t), Fl(t)-Fh(that), 0).
inline double value_maxmin_rational(const ValueQuery& q) {
    detail::check_query(q);
    detail::require_normalized(q.band);
    const double t = q.own_type;
    if (q.action == Action::no_trade) return q.band.lower(t);
    const double that = q.opponent.threshold;
    const double a = q.band.lower(that) - q.band.upper(t);
    const double b = q.band.lower(t) - q.band.upper(that);
    return std::max({a, b, 0.0});
}

// Infimum of the cursed value when the average strategy sbar is fixed by the
// center: (1-2*sbar)F(t)+sbar is affine in F(t), so the minimizing member is
// the envelope selected by the sign of 1-2*sbar. At sbar = 1/2 the value is
// 1/2 for every member of the band (the trade acts as a hedge).
inline double value_maxmin_cursed_under_center(const ValueQuery& q) {
    detail::check_query(q);
    detail::require_normalized(q.band);
    const double t = q.own_type;
    if (q.action == Action::no_trade) return q.band.lower(t);
    const double sbar = q.band.center(q.opponent.threshold);
    const double ft = sbar <= 0.5 ? q.band.lower(t) : q.band.upper(t);
    return (1.0 - 2.0 * sbar) * ft + sbar;
}

// Infimum of the cursed value when the minimization also runs over the
// average strategy: inf over members of F(t)+F(that)-2 F(t) F(that). The
// objective is multilinear in (F(t), F(that)), so the infimum is attained at
// one of the four envelope combinations, and the minimizing combination is
// always realizable by a monotone member.
inline double value_ambiguous_cursed(const ValueQuery& q) {
    detail::check_query(q);
    detail::require_normalized(q.band);
    const double t = q.own_type;
    if (q.action == Action::no_trade) return q.band.lower(t);
    const double that = q.opponent.threshold;
    const double us[2] = {q.band.lower(t), q.band.upper(t)};
    const double vs[2] = {q.band.lower(that), q.band.upper(that)};
    double best = 1.0;
    for (double u : us)
        for (double v : vs) best = std::min(best, u + v - 2.0 * u * v);
    return best;
}

// chi-blend of the cursed and rational values under the center
inline double value_partial_cursed(const ValueQuery& q) {
    detail::check_query(q);
    return q.chi * value_cursed(q) + (1.0 - q.chi) * value_rational(q);
}

inline double value(const Concept& c, const ValueQuery& query) {
    switch (c.kind) {
        case ConceptKind::rational: return value_rational(query);
        case ConceptKind::maxmin_rational: return value_maxmin_rational(query);
        case ConceptKind::cursed: return value_cursed(query);
        case ConceptKind::maxmin_cursed_under_center: return value_maxmin_cursed_under_center(query);
        case ConceptKind::ambiguous_cursed: return value_ambiguous_cursed(query);
        case ConceptKind::partial: {
            ValueQuery q = query;
            q.chi = c.chi;
            return value_partial_cursed(q);
        }
    }
    throw std::invalid_argument("unknown concept");
}

inline const char* concept_name(ConceptKind kind) {
    switch (kind) {
        case ConceptKind::rational: return "rational";
        case ConceptKind::maxmin_rational: return "maxmin-rational";
        case ConceptKind::cursed: return "cursed";
        case ConceptKind::maxmin_cursed_under_center: return "maxmin-cursed-under-center";
        case ConceptKind::ambiguous_cursed: return "ambiguous-cursed";
        case ConceptKind::partial: return "partial";
    }
    return "unknown";
}

}  // namespace cursedknight
