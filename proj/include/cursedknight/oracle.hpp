#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cursedknight/band.hpp"
#include "cursedknight/rng.hpp"
#include "cursedknight/strategy.hpp"
#include "cursedknight/valuation.hpp"

namespace cursedknight {

// ---------------------------------------------------------------------------
// Monte Carlo play
// ---------------------------------------------------------------------------

inline int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CURSED_KNIGHT_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

struct SimResult {
    double mean_payoff1 = 0.0;
    double std_error = 0.0;
    long long games = 0;
};

// Simulates the trading game: i.i.d. types drawn by inverse-CDF sampling,
// types swapped iff both players offer to trade, the higher final type wins.
// Per-game payoffs are 0/1, so batch results merge by exact integer sums.
// The game count is split over 64 fixed batches with independent RNG
// substreams; the result is bit-identical for a given (seed, n) no matter
// how many threads run. Ties are broken toward player 2 (a nullset under any
// continuous sampling distribution).
inline SimResult simulate_game(const GeneralStrategy& strategy1, const GeneralStrategy& strategy2,
                               const CdfCurve& sampling_cdf, long long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate_game: n must be >= 1");
    constexpr int kBatches = 64;
    auto run_batch = [&](int batch) -> long long {
        long long games = n / kBatches + (batch < n % kBatches ? 1 : 0);
        Rng rng(seed, static_cast<std::uint64_t>(batch) + 1);
        long long wins = 0;
        for (long long g = 0; g < games; ++g) {
            const double u1 = rng.uniform01();
            const double u2 = rng.uniform01();
            const double a1 = rng.uniform01();
            const double a2 = rng.uniform01();
            const double t1 = sampling_cdf.inverse(u1);
            const double t2 = sampling_cdf.inverse(u2);
            const bool trade1 = a1 < strategy1.trade_probability(t1);
            const bool trade2 = a2 < strategy2.trade_probability(t2);
            const bool swapped = trade1 && trade2;
            const bool win1 = swapped ? (t1 < t2) : (t1 > t2);
            wins += win1 ? 1 : 0;
        }
        return wins;
    };

    const int threads = std::min(thread_budget(), kBatches);
    std::vector<long long> batch_wins(kBatches, 0);
    if (threads <= 1) {
        for (int b = 0; b < kBatches; ++b) batch_wins[static_cast<std::size_t>(b)] = run_batch(b);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w)
            workers.emplace_back([&, w] {
                for (int b = w; b < kBatches; b += threads)
                    batch_wins[static_cast<std::size_t>(b)] = run_batch(b);
            });
        for (auto& worker : workers) worker.join();
    }
    long long wins = 0;
    for (long long b : batch_wins) wins += b;

    SimResult out;
    out.games = n;
    out.mean_payoff1 = static_cast<double>(wins) / static_cast<double>(n);
    out.std_error = std::sqrt(std::max(out.mean_payoff1 * (1.0 - out.mean_payoff1), 1e-12) /
                              static_cast<double>(n));
    return out;
}

// ---------------------------------------------------------------------------
// Band members for brute-force minimization
// ---------------------------------------------------------------------------

struct BandSample {
    CdfCurve curve;
    std::uint64_t seed = 0;
    int knots = 0;
};

// Random monotone piecewise-linear member: sorted uniform abscissae, ordinate
// drawn inside the envelope gap and pushed up by a running maximum. The
// running maximum produces genuinely flat stretches, which is what attains
// the worst cases the closed forms predict.
inline BandSample sample_band_member(const DistributionBand& band, int knots,
                                     std::uint64_t seed, std::uint64_t stream = 0) {
    if (knots < 2) throw std::invalid_argument("sample_band_member: need at least 2 knots");
    Rng rng(seed, stream);
    std::vector<double> xs(static_cast<std::size_t>(knots));
    xs.front() = 0.0;
    xs.back() = 1.0;
    for (int i = 1; i + 1 < knots; ++i) xs[static_cast<std::size_t>(i)] = rng.uniform01();
    std::sort(xs.begin(), xs.end());

    std::vector<std::pair<double, double>> pts;
    pts.reserve(xs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        double y = i + 1 == xs.size() ? 1.0 : rng.uniform(band.lower(x), band.upper(x));
        y = std::max(y, running);
        running = y;
        pts.emplace_back(x, y);
    }
    pts.back().second = 1.0;
    return BandSample{CdfCurve::piecewise_linear(std::move(pts), "band-sample"), seed, knots};
}

// ---------------------------------------------------------------------------
// Exact minimization over the band at finitely many points
// ---------------------------------------------------------------------------

namespace oracle_detail {

// Minimum of objective(y) over the feasible set
//   lower(x_i) <= y_i <= upper(x_i),  y_1 <= ... <= y_m,
// which is the set of value vectors band members can take at the sorted
// points xs. Vertices of this polytope are consecutive blocks of equal
// coordinates pinned at a block bound; every value functional used here is
// multilinear in y, so scanning the vertices yields the exact minimum.
inline double min_over_monotone_box(const std::vector<double>& lower_bounds,
                                    const std::vector<double>& upper_bounds,
                                    const std::function<double(const std::vector<double>&)>& objective) {
    const std::size_t m = lower_bounds.size();
    if (m == 0 || m > 16) throw std::invalid_argument("min_over_monotone_box: bad point count");
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> y(m);
    const unsigned partitions = 1u << (m - 1);  // bitmask of gaps kept open
    std::vector<std::pair<double, double>> blocks;  // feasible [lo,hi] per block
    for (unsigned mask = 0; mask < partitions; ++mask) {
        blocks.clear();
        double blo = lower_bounds[0], bhi = upper_bounds[0];
        bool feasible = true;
        for (std::size_t i = 1; i <= m; ++i) {
            const bool close_block = i == m || !(mask & (1u << (i - 1)));
            if (!close_block) {  // i joins the current block
                blo = std::max(blo, lower_bounds[i]);
                bhi = std::min(bhi, upper_bounds[i]);
                continue;
            }
            if (blo > bhi + 1e-15) {
                feasible = false;
                break;
            }
            blocks.emplace_back(blo, std::max(blo, bhi));
            if (i < m) {
                blo = lower_bounds[i];
                bhi = upper_bounds[i];
            }
        }
        if (!feasible) continue;
        const std::size_t nblocks = blocks.size();
        for (unsigned pick = 0; pick < (1u << nblocks); ++pick) {
            double prev = -1.0;
            bool ok = true;
            std::size_t idx = 0, block_index = 0;
            for (std::size_t i = 1; i <= m && ok; ++i) {
                const bool close_block = i == m || !(mask & (1u << (i - 1)));
                if (!close_block) continue;
                const auto [lo, hi] = blocks[block_index];
                const double v = (pick & (1u << block_index)) ? hi : lo;
                if (v < prev - 1e-15) ok = false;
                prev = std::max(prev, v);
                while (idx < i) y[idx++] = prev;
                ++block_index;
            }
            if (!ok) continue;
            best = std::min(best, objective(y));
        }
    }
    return best;
}

// affine form c0 + sum coef_i * F(x_i)
struct AffineForm {
    double c0 = 0.0;
    std::vector<double> coef;
    double eval(const std::vector<double>& y) const {
        double v = c0;
        for (std::size_t i = 0; i < coef.size(); ++i) v += coef[i] * y[i];
        return v;
    }
};

struct PointSet {
    std::vector<double> xs;
    void add(double x) { xs.push_back(x); }
    void finish() {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    std::size_t index_of(double x) const {
        const auto it = std::lower_bound(xs.begin(), xs.end(), x);
        return static_cast<std::size_t>(it - xs.begin());
    }
};

// P(trade set strictly above theta) + P(below theta and outside the trade
// set): the win probability of trading, as an affine form in the member's
// values at the point set. Intervals contain their endpoints; masses use
// P([a,b]) = F(b) - F(a) with F(0-) = 0, which is exact for continuous
// members and for the boundary conventions of the envelopes.
inline AffineForm trade_win_form(const PointSet& pts, const std::vector<Interval>& trade_set,
                                 double theta) {
    AffineForm f;
    f.coef.assign(pts.xs.size(), 0.0);
    auto add = [&](double x, double w) {
        if (x <= 0.0) return;  // F(0-) = 0
        f.coef[pts.index_of(x)] += w;
    };
    add(theta, 1.0);  // P(type2 < theta)
    for (const auto& [lo, hi] : trade_set) {
        // above own type: + P((max(lo,theta), max(hi,theta)])
        add(std::max(hi, theta), 1.0);
        add(std::max(lo, theta), -1.0);
        // below own type, inside the trade set: - P([min(lo,theta), min(hi,theta)])
        add(std::min(hi, theta), -1.0);
        add(std::min(lo, theta), 1.0);
    }
    return f;
}

// unconditional trade mass of the trade set, as an affine form
inline AffineForm trade_mass_form(const PointSet& pts, const std::vector<Interval>& trade_set) {
    AffineForm f;
    f.coef.assign(pts.xs.size(), 0.0);
    auto add = [&](double x, double w) {
        if (x <= 0.0) return;
        f.coef[pts.index_of(x)] += w;
    };
    for (const auto& [lo, hi] : trade_set) {
        add(hi, 1.0);
        add(lo, -1.0);
    }
    return f;
}

}  // namespace oracle_detail

// Value of an action for a player of the given type against a general
// opponent strategy, computed from the game's payoff integral rather than the
// closed-form module. Center concepts evaluate under the center distribution;
// maxmin concepts minimize exactly over the band at the finitely many points
// the value depends on.
inline double oracle_action_value(const Concept& c, Action action, double theta,
                                  const GeneralStrategy& opponent, const DistributionBand& band) {
    check_unit_interval(theta, "type");
    if (!opponent.deterministic())
        throw std::invalid_argument("oracle values need a deterministic opponent strategy");
    const std::vector<Interval> trade_set = opponent.trade_intervals();

    oracle_detail::PointSet pts;
    pts.add(theta);
    for (const auto& [lo, hi] : trade_set) {
        pts.add(lo);
        pts.add(hi);
        pts.add(std::max(lo, theta));
        pts.add(std::min(hi, theta));
    }
    pts.finish();
    const std::size_t m = pts.xs.size();
    const std::size_t theta_idx = pts.index_of(theta);

    std::vector<double> center_vals(m);
    for (std::size_t i = 0; i < m; ++i) center_vals[i] = band.center(pts.xs[i]);

    const bool maxmin = c.kind == ConceptKind::maxmin_rational ||
                        c.kind == ConceptKind::maxmin_cursed_under_center ||
                        c.kind == ConceptKind::ambiguous_cursed;

    if (action == Action::no_trade) {
        if (maxmin) return band.lower(theta);
        return band.center(theta);
    }

    const auto win = oracle_detail::trade_win_form(pts, trade_set, theta);
    const double sbar_center = opponent.average_trade_probability(band.center);

    auto cursed_value = [&](double own, double sbar) {
        return sbar * (1.0 - own) + (1.0 - sbar) * own;
    };

    switch (c.kind) {
        case ConceptKind::rational: return win.eval(center_vals);
        case ConceptKind::cursed: return cursed_value(center_vals[theta_idx], sbar_center);
        case ConceptKind::partial:
            return c.chi * cursed_value(center_vals[theta_idx], sbar_center) +
                   (1.0 - c.chi) * win.eval(center_vals);
        default: break;
    }

    detail::require_normalized(band);
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = band.lower(pts.xs[i]);
        hi[i] = band.upper(pts.xs[i]);
    }
    switch (c.kind) {
        case ConceptKind::maxmin_rational:
            return oracle_detail::min_over_monotone_box(
                lo, hi, [&](const std::vector<double>& y) { return win.eval(y); });
        case ConceptKind::maxmin_cursed_under_center: {
            const double coef = 1.0 - 2.0 * sbar_center;
            return oracle_detail::min_over_monotone_box(
                lo, hi,
                [&](const std::vector<double>& y) { return coef * y[theta_idx] + sbar_center; });
        }
        case ConceptKind::ambiguous_cursed: {
            const auto mass = oracle_detail::trade_mass_form(pts, trade_set);
            return oracle_detail::min_over_monotone_box(
                lo, hi, [&](const std::vector<double>& y) {
                    return cursed_value(y[theta_idx], mass.eval(y));
                });
        }
        default: break;
    }
    throw std::invalid_argument("unknown concept");
}

// ---------------------------------------------------------------------------
// Brute-force minimum of a maxmin functional
// ---------------------------------------------------------------------------

// Minimum of the requested functional's inner expectation over `samples`
// random band members, both envelopes, and the flattened variants (monotone
// box vertices) at the query points. Samples extend deterministically with
// the sample index, so the result is non-increasing in `samples` for a fixed
// seed. Exact for the supported functionals because the inner expectation is
// multilinear in the member's values at the two query abscissae.
inline double bruteforce_min_value(const Concept& c, const ValueQuery& q, int samples,
                                   int knots, std::uint64_t seed) {
    detail::check_query(q);
    detail::require_normalized(q.band);
    if (samples < 0 || knots < 2) throw std::invalid_argument("bruteforce_min_value: bad sampling parameters");
    const double theta = q.own_type;
    const double that = q.opponent.threshold;
    const double sbar_center = q.band.center(that);

    auto inner = [&](double own, double opp) {
        if (q.action == Action::no_trade) return own;
        switch (c.kind) {
            case ConceptKind::maxmin_rational: return std::abs(own - opp);
            case ConceptKind::maxmin_cursed_under_center:
                return (1.0 - 2.0 * sbar_center) * own + sbar_center;
            case ConceptKind::ambiguous_cursed: return own + opp - 2.0 * own * opp;
            default:
                throw std::invalid_argument("bruteforce_min_value supports the maxmin functionals only");
        }
    };

    oracle_detail::PointSet pts;
    pts.add(theta);
    pts.add(that);
    pts.finish();
    const std::size_t ti = pts.index_of(theta), oi = pts.index_of(that);

    std::vector<double> lo(pts.xs.size()), hi(pts.xs.size());
    for (std::size_t i = 0; i < pts.xs.size(); ++i) {
        lo[i] = q.band.lower(pts.xs[i]);
        hi[i] = q.band.upper(pts.xs[i]);
    }
    double best = oracle_detail::min_over_monotone_box(
        lo, hi, [&](const std::vector<double>& y) { return inner(y[ti], y[oi]); });

    for (int s = 0; s < samples; ++s) {
        const auto member = sample_band_member(q.band, knots, seed, static_cast<std::uint64_t>(s) + 1);
        best = std::min(best, inner(member.curve(theta), member.curve(that)));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Grid best response and equilibrium certification
// ---------------------------------------------------------------------------

// Per-type argmax over {trade, no-trade} on a uniform type grid; exact ties
// resolve to no-trade so certificates are deterministic. Returns the induced
// interval-set strategy.
inline GeneralStrategy grid_best_response(const Concept& c, const GeneralStrategy& opponent,
                                          const DistributionBand& band, int grid_n) {
    if (grid_n < 1000) throw std::invalid_argument("grid_best_response: grid_n must be >= 1000");
    std::vector<Interval> trade_runs;
    bool in_run = false;
    double run_start = 0.0, prev = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        const double t = static_cast<double>(i) / grid_n;
        const double tr = oracle_action_value(c, Action::trade, t, opponent, band);
        const double nt = oracle_action_value(c, Action::no_trade, t, opponent, band);
        // ties resolve to no-trade; the margin covers rounding in the affine
        // evaluation, ties always sit on value plateaus
        const bool trade = tr > nt + 1e-12;
        if (trade && !in_run) {
            in_run = true;
            run_start = t;
        } else if (!trade && in_run) {
            in_run = false;
            trade_runs.push_back({run_start, prev});
        }
        prev = t;
    }
    if (in_run) trade_runs.push_back({run_start, 1.0});
    return GeneralStrategy::intervals(std::move(trade_runs));
}

// threshold of a single [0,t] run (within one grid cell of 0), if any
inline bool single_cutoff_of(const GeneralStrategy& s, int grid_n, double* threshold) {
    const auto runs = s.trade_intervals();
    if (runs.empty()) {
        *threshold = 0.0;
        return true;
    }
    if (runs.size() != 1 || runs.front().lo > 1.5 / grid_n) return false;
    *threshold = runs.front().hi;
    return true;
}

struct EquilibriumCheck {
    double max_improvement = 0.0;
    double worst_type = 0.0;
    int worst_player = 0;
    double tolerance = 1e-6;
    bool certified = false;
};

// Maximum per-type gain either player can get by switching actions, over the
// type grid plus both strategies' breakpoints. A profile is certified as an
// equilibrium when no type improves by more than the tolerance.
inline EquilibriumCheck verify_equilibrium(const GeneralStrategy& strategy1,
                                           const GeneralStrategy& strategy2, const Concept& c1,
                                           const Concept& c2, const DistributionBand& band,
                                           int grid_n, double tolerance = 1e-6) {
    if (grid_n < 2) throw std::invalid_argument("verify_equilibrium: grid_n must be >= 2");
    EquilibriumCheck check;
    check.tolerance = tolerance;
    for (int player = 1; player <= 2; ++player) {
        const GeneralStrategy& own = player == 1 ? strategy1 : strategy2;
        const GeneralStrategy& opp = player == 1 ? strategy2 : strategy1;
        const Concept& c = player == 1 ? c1 : c2;
        if (!own.deterministic())
            throw std::invalid_argument("verify_equilibrium needs deterministic strategies");
        std::vector<double> types;
        types.reserve(static_cast<std::size_t>(grid_n) + 8);
        for (int i = 0; i <= grid_n; ++i) types.push_back(static_cast<double>(i) / grid_n);
        for (double b : own.breakpoints()) types.push_back(b);
        for (double b : opp.breakpoints()) types.push_back(b);
        for (double t : types) {
            const double tr = oracle_action_value(c, Action::trade, t, opp, band);
            const double nt = oracle_action_value(c, Action::no_trade, t, opp, band);
            const bool trades = own.trade_probability(t) > 0.5;
            const double improvement = trades ? nt - tr : tr - nt;
            if (improvement > check.max_improvement) {
                check.max_improvement = improvement;
                check.worst_type = t;
                check.worst_player = player;
            }
        }
    }
    check.certified = check.max_improvement <= tolerance;
    return check;
}

}  // namespace cursedknight
