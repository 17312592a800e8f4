#pragma once

#include <cmath>
#include <stdexcept>

namespace cursedknight {

// Bisection for a continuous function with a sign change on [lo, hi].
// Every root searched for in this library comes with a bracket whose
// endpoint signs are known analytically, so no derivative method is needed.
// Tolerance is on the argument; 200 halvings of a unit interval reach ~6e-61,
// far below any tolerance used here.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-13, int max_iter = 200) {
    if (!(lo <= hi)) throw std::invalid_argument("bisect: empty bracket");
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if (hi - lo <= xtol) return 0.5 * (lo + hi);
    if ((flo < 0.0) == (fhi < 0.0))
        throw std::runtime_error("bisect: no sign change in bracket");
    const bool lo_negative = flo < 0.0;
    for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace cursedknight
