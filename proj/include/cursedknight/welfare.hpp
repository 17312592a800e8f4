#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cursedknight/equilibria.hpp"
#include "cursedknight/valuation.hpp"

namespace cursedknight {

// Ex-ante utilities in the partially cursed equilibrium, stated for the
// uniform-normalized center. Non-uniform centers reduce to this case because
// both U and V depend on the thresholds only through their center quantiles.

// Actual (objective) ex-ante expected utility of player 1. With equilibrium
// quantiles q1, q2 this is min(q1,q2) (q2-q1) + 1/2, so the pair sums to 1
// exactly and the less cursed player (higher opposing quantile) is above 1/2.
inline double actual_utility_1(double chi1, double chi2) {
    const auto q = partial_equilibrium_quantiles(chi1, chi2);
    if (q[0] <= 0.0 && q[1] <= 0.0) return 0.5;
    return std::min(q[0], q[1]) * (q[1] - q[0]) + 0.5;
}

inline std::pair<double, double> actual_utility(double chi1, double chi2) {
    return {actual_utility_1(chi1, chi2), actual_utility_1(chi2, chi1)};
}

// Perceived ex-ante expected utility of player 1: the average of the
// chi1-blended interim value of the equilibrium action. Closed form in the
// cursedness degrees; the two branches agree on the diagonal. For chi1 = 0
// it coincides with the actual utility (an uncursed player perceives the
// game correctly).
inline double perceived_utility_1(double chi1, double chi2) {
    check_unit_interval(chi1, "chi1");
    check_unit_interval(chi2, "chi2");
    if (std::max(chi1, chi2) <= 0.5) return 0.5;
    if (chi1 <= chi2) {
        return (1.0 - 4.0 * (1.0 + chi1 - 3.0 * chi2) * chi2) /
               (8.0 * (2.0 * chi2 - chi1) * chi2);
    }
    const double num =
        chi2 + 2.0 * chi1 *
                   (chi1 * (1.0 + 2.0 * chi1) * (1.0 + 2.0 * chi1) -
                    (3.0 + 2.0 * chi1 + 4.0 * chi1 * chi1) * chi2 + 2.0 * chi2 * chi2);
    const double den = 8.0 * chi1 * (2.0 * chi1 - chi2) * (2.0 * chi1 - chi2);
    return num / den;
}

inline std::pair<double, double> perceived_utility(double chi1, double chi2) {
    return {perceived_utility_1(chi1, chi2), perceived_utility_1(chi2, chi1)};
}

struct WelfareReport {
    double chi1 = 0.0, chi2 = 0.0;
    double U1 = 0.5, U2 = 0.5;  // actual ex-ante utilities (sum to 1)
    double V1 = 0.5, V2 = 0.5;  // perceived ex-ante utilities (may sum above 1)
    double threshold1 = 0.0, threshold2 = 0.0;
    bool trivial_only = false;
};

inline WelfareReport welfare_report(double chi1, double chi2) {
    WelfareReport w;
    w.chi1 = chi1;
    w.chi2 = chi2;
    const auto q = partial_equilibrium_quantiles(chi1, chi2);
    w.threshold1 = q[0];
    w.threshold2 = q[1];
    w.trivial_only = q[0] <= 0.0 && q[1] <= 0.0;
    std::tie(w.U1, w.U2) = actual_utility(chi1, chi2);
    std::tie(w.V1, w.V2) = perceived_utility(chi1, chi2);
    return w;
}

// positivity witness in the perceived-utility monotonicity argument for the
// chi1 > max(1/2, chi2) region
inline double h0(double chi1, double chi2) {
    return 4.0 * chi1 * chi1 * chi1 * (1.0 + 2.0 * chi1) -
           2.0 * chi1 * (-3.0 + chi1 * (5.0 + 6.0 * chi1)) * chi2 +
           (2.0 * chi1 - 1.0) * (1.0 + 4.0 * chi1) * chi2 * chi2;
}

struct WelfareScanReport {
    long long cells_checked = 0;
    long long trivial_cells = 0;
    std::vector<std::string> violations;  // empty on success
    bool passed() const { return violations.empty(); }
};

namespace detail {
inline std::string cell_label(const char* what, double c1, double c2) {
    return std::string(what) + " at (" + std::to_string(c1) + ", " + std::to_string(c2) + ")";
}
}  // namespace detail

// Property scan over a cursedness lattice. Checks, cell by cell:
//   - U1 + U2 = 1 (tolerance 1e-12);
//   - where a non-trivial equilibrium exists, the less cursed player's U
//     exceeds 1/2 and each V_k >= max(U_k, 1/2), strictly whenever chi_k > 0
//     (V_k equals U_k identically for an uncursed player);
//   - U decreasing in own chi and increasing in the opponent's, V increasing
//     in own chi (central differences, step 1e-4, clamped at lattice edges;
//     U and V are continuous so differences across the chi1 = chi2 ridge are
//     valid monotonicity witnesses);
//   - h0 > 0 on chi1 > 1/2, chi1 > chi2;
//   - the more cursed player never perceives more than the less cursed one.
inline WelfareScanReport welfare_property_scan(const std::vector<double>& chi1s,
                                               const std::vector<double>& chi2s,
                                               double step = 1e-4) {
    WelfareScanReport rep;
    const double tol = 1e-9;
    auto diff = [&](auto&& f, double x) {
        const double a = std::max(0.0, x - step);
        const double b = std::min(1.0, x + step);
        return f(b) - f(a);
    };
    for (double c1 : chi1s) {
        for (double c2 : chi2s) {
            ++rep.cells_checked;
            const bool trivial = std::max(c1, c2) <= 0.5;
            if (trivial) ++rep.trivial_cells;

            const auto [u1, u2] = actual_utility(c1, c2);
            const auto [v1, v2] = perceived_utility(c1, c2);
            if (std::abs(u1 + u2 - 1.0) > 1e-12)
                rep.violations.push_back(detail::cell_label("U1+U2 != 1", c1, c2));

            if (!trivial) {
                if (c1 != c2) {
                    const double less = std::min(c1, c2) == c1 ? u1 : u2;
                    if (!(less > 0.5))
                        rep.violations.push_back(detail::cell_label("less-cursed U <= 1/2", c1, c2));
                }
                auto check_v = [&](double v, double u, double chi, const char* who) {
                    if (v < std::max(u, 0.5) - 1e-12)
                        rep.violations.push_back(detail::cell_label(who, c1, c2));
                    if (chi > 0.0 && !(v > std::max(u, 0.5)))
                        rep.violations.push_back(detail::cell_label(who, c1, c2));
                };
                check_v(v1, u1, c1, "V1 below max(U1,1/2)");
                check_v(v2, u2, c2, "V2 below max(U2,1/2)");
                if (c1 > c2 && v1 > v2 + 1e-12)
                    rep.violations.push_back(detail::cell_label("more cursed perceives more", c1, c2));
                if (c2 > c1 && v2 > v1 + 1e-12)
                    rep.violations.push_back(detail::cell_label("more cursed perceives more", c1, c2));
            }

            const double dU_own = diff([&](double x) { return actual_utility_1(x, c2); }, c1);
            if (dU_own > tol)
                rep.violations.push_back(detail::cell_label("U not decreasing in own chi", c1, c2));
            const double dU_opp = diff([&](double x) { return actual_utility_1(c1, x); }, c2);
            if (dU_opp < -tol)
                rep.violations.push_back(detail::cell_label("U not increasing in opponent chi", c1, c2));
            const double dV_own = diff([&](double x) { return perceived_utility_1(x, c2); }, c1);
            if (dV_own < -tol)
                rep.violations.push_back(detail::cell_label("V not increasing in own chi", c1, c2));

            if (c1 > 0.5 && c1 > c2 && !(h0(c1, c2) > 0.0))
                rep.violations.push_back(detail::cell_label("h0 not positive", c1, c2));
        }
    }
    return rep;
}

inline WelfareScanReport welfare_property_scan(int lattice_points_per_axis = 101,
                                               double step = 1e-4) {
    std::vector<double> chis(static_cast<std::size_t>(lattice_points_per_axis));
    for (int i = 0; i < lattice_points_per_axis; ++i)
        chis[static_cast<std::size_t>(i)] =
            static_cast<double>(i) / (lattice_points_per_axis - 1);
    return welfare_property_scan(chis, chis, step);
}

}  // namespace cursedknight
