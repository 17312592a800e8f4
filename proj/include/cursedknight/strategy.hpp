#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cursedknight/cdf.hpp"

namespace cursedknight {

struct Interval {
    double lo = 0.0, hi = 0.0;  // closed interval inside [0,1]
};

// A (possibly non-cut-off) strategy: trade with probability trade_probability
// given the own type. Three representations:
//   cutoff    -- trade iff type <= threshold
//   intervals -- trade iff type lies in a union of ordered disjoint closed
//                intervals (degenerate single-point intervals allowed)
//   tabulated -- trade probabilities given at uniform grid points, linearly
//                interpolated in between (the only randomized representation)
class GeneralStrategy {
public:
    enum class Kind { cutoff, intervals, tabulated };

    static GeneralStrategy cutoff(double threshold) {
        check_unit_interval(threshold, "cutoff threshold");
        GeneralStrategy s;
        s.kind_ = Kind::cutoff;
        s.cutoff_ = threshold;
        return s;
    }

    static GeneralStrategy intervals(std::vector<Interval> iv) {
        GeneralStrategy s;
        s.kind_ = Kind::intervals;
        double last = -1.0;
        for (const auto& [lo, hi] : iv) {
            check_unit_interval(lo, "interval lo");
            check_unit_interval(hi, "interval hi");
            if (hi < lo || lo < last)
                throw std::invalid_argument("intervals must be ordered and disjoint");
            last = hi;
        }
        s.intervals_ = std::move(iv);
        return s;
    }

    static GeneralStrategy tabulated(std::vector<double> trade_prob) {
        if (trade_prob.size() < 2)
            throw std::invalid_argument("tabulated strategy needs at least 2 grid values");
        for (double p : trade_prob) check_unit_interval(p, "trade probability");
        GeneralStrategy s;
        s.kind_ = Kind::tabulated;
        s.table_ = std::move(trade_prob);
        return s;
    }

    Kind kind() const { return kind_; }
    double cutoff_threshold() const {
        if (kind_ != Kind::cutoff) throw std::logic_error("not a cutoff strategy");
        return cutoff_;
    }

    double trade_probability(double type) const {
        check_unit_interval(type, "type");
        switch (kind_) {
            case Kind::cutoff: return type <= cutoff_ ? 1.0 : 0.0;
            case Kind::intervals: {
                for (const auto& [lo, hi] : intervals_)
                    if (type >= lo && type <= hi) return 1.0;
                return 0.0;
            }
            case Kind::tabulated: {
                const double pos = type * static_cast<double>(table_.size() - 1);
                const auto i = std::min(table_.size() - 2, static_cast<std::size_t>(pos));
                const double frac = pos - static_cast<double>(i);
                return table_[i] + frac * (table_[i + 1] - table_[i]);
            }
        }
        return 0.0;
    }

    bool deterministic() const {
        if (kind_ != Kind::tabulated) return true;
        // interpolation makes any 0/1 transition fractional, so only constant
        // all-or-nothing tables are action-deterministic
        const double p0 = table_.front();
        return (p0 == 0.0 || p0 == 1.0) &&
               std::all_of(table_.begin(), table_.end(), [&](double p) { return p == p0; });
    }

    // trade set as intervals; only for deterministic representations
    std::vector<Interval> trade_intervals() const {
        switch (kind_) {
            case Kind::cutoff:
                return cutoff_ > 0.0 ? std::vector<Interval>{{0.0, cutoff_}}
                                     : std::vector<Interval>{};
            case Kind::intervals: return intervals_;
            case Kind::tabulated: break;
        }
        throw std::logic_error("tabulated strategies have no exact trade set");
    }

    // unconditional trade probability under F (the opponent-visible average)
    double average_trade_probability(const CdfCurve& F) const {
        if (kind_ != Kind::tabulated) {
            double total = 0.0;
            for (const auto& [lo, hi] : trade_intervals())
                total += F(hi) - (lo == 0.0 ? 0.0 : F(lo));
            return total;
        }
        // midpoint rule over a refinement of the table grid
        const int cells = 4096;
        double total = 0.0;
        for (int i = 0; i < cells; ++i) {
            const double a = static_cast<double>(i) / cells;
            const double b = static_cast<double>(i + 1) / cells;
            total += trade_probability(0.5 * (a + b)) * (F(b) - F(a));
        }
        return total;
    }

    std::vector<double> breakpoints() const {
        std::vector<double> pts;
        switch (kind_) {
            case Kind::cutoff:
                if (cutoff_ > 0.0) pts.push_back(cutoff_);
                break;
            case Kind::intervals:
                for (const auto& [lo, hi] : intervals_) {
                    pts.push_back(lo);
                    pts.push_back(hi);
                }
                break;
            case Kind::tabulated:
                for (std::size_t i = 0; i < table_.size(); ++i)
                    pts.push_back(static_cast<double>(i) / static_cast<double>(table_.size() - 1));
                break;
        }
        return pts;
    }

private:
    Kind kind_ = Kind::cutoff;
    double cutoff_ = 0.0;
    std::vector<Interval> intervals_;
    std::vector<double> table_;
};

}  // namespace cursedknight
