#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cursedknight {

inline void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

// A weakly increasing distribution function on [0,1]. Immutable and cheap to
// copy (shared representation), so curves can be passed around by value and
// shared across threads.
//
// inverse() is the generalized inverse inf{theta : F(theta) >= p}; on
// strictly increasing curves it is the exact inverse. Flat segments map to
// their left edge, values below F(0) map to 0.
//
// left_limit() differs from value() only at a jump: the epsilon-band lower
// envelope is max(theta - eps, 0) with F(1) = 1, so left_limit(1) = 1 - eps.
class CdfCurve {
public:
    CdfCurve() : CdfCurve(identity()) {}

    double value(double theta) const {
        check_unit_interval(theta, "theta");
        return impl_->value(theta);
    }
    double operator()(double theta) const { return value(theta); }

    double inverse(double p) const {
        check_unit_interval(p, "p");
        return impl_->inverse(p);
    }

    double left_limit(double theta) const {
        check_unit_interval(theta, "theta");
        return impl_->left_limit(theta);
    }

    bool strictly_increasing() const { return impl_->strict; }
    const std::string& name() const { return impl_->name; }
    bool is_identity() const { return impl_->kind == Impl::Kind::identity; }

    static CdfCurve identity() {
        auto impl = std::make_shared<Impl>();
        impl->kind = Impl::Kind::identity;
        impl->strict = true;
        impl->name = "identity";
        return CdfCurve(std::move(impl));
    }

    // Knots must start at x=0, end at x=1, and be weakly increasing in both
    // coordinates. jump_to_one makes value(1) = 1 while the last knot keeps
    // the left limit.
    static CdfCurve piecewise_linear(std::vector<std::pair<double, double>> knots,
                                     std::string name = "piecewise-linear",
                                     bool jump_to_one = false) {
        if (knots.size() < 2) throw std::invalid_argument("piecewise_linear: need at least 2 knots");
        auto impl = std::make_shared<Impl>();
        impl->kind = Impl::Kind::piecewise;
        impl->name = std::move(name);
        impl->jump_to_one = jump_to_one;
        impl->strict = true;
        for (const auto& [x, y] : knots) {
            check_unit_interval(x, "knot x");
            check_unit_interval(y, "knot y");
            double yy = y;
            if (!impl->xs.empty()) {
                if (x < impl->xs.back()) throw std::invalid_argument("piecewise_linear: x not increasing");
                if (yy < impl->ys.back() - 1e-12) throw std::invalid_argument("piecewise_linear: y not increasing");
                if (x == impl->xs.back()) continue;  // drop duplicate abscissae
                if (yy <= impl->ys.back()) {
                    yy = impl->ys.back();  // absorb rounding from sampled compositions
                    impl->strict = false;
                }
            }
            impl->xs.push_back(x);
            impl->ys.push_back(yy);
        }
        if (impl->xs.front() != 0.0 || impl->xs.back() != 1.0)
            throw std::invalid_argument("piecewise_linear: knots must span [0,1]");
        if (!jump_to_one && std::abs(impl->ys.back() - 1.0) > 1e-12)
            throw std::invalid_argument("piecewise_linear: F(1) must be 1");
        impl->ys.back() = jump_to_one ? impl->ys.back() : 1.0;
        return CdfCurve(std::move(impl));
    }

    // Closed-form curve. The inverse is the supplied closed form when given,
    // otherwise a 100-step generalized-inverse bisection (resolution 2^-100).
    static CdfCurve formula(std::function<double(double)> f, std::string name,
                            bool strict = true,
                            std::function<double(double)> inverse_fn = nullptr) {
        auto impl = std::make_shared<Impl>();
        impl->kind = Impl::Kind::formula;
        impl->fn = std::move(f);
        impl->inverse_fn = std::move(inverse_fn);
        impl->strict = strict;
        impl->name = std::move(name);
        return CdfCurve(std::move(impl));
    }

private:
    struct Impl {
        enum class Kind { identity, piecewise, formula };
        Kind kind = Kind::identity;
        std::vector<double> xs, ys;
        bool jump_to_one = false;
        std::function<double(double)> fn;
        std::function<double(double)> inverse_fn;
        bool strict = true;
        std::string name;

        double value(double theta) const {
            switch (kind) {
                case Kind::identity: return theta;
                case Kind::formula: return std::clamp(fn(theta), 0.0, 1.0);
                case Kind::piecewise: break;
            }
            if (jump_to_one && theta >= 1.0) return 1.0;
            return piecewise_value(theta);
        }

        double left_limit(double theta) const {
            if (kind == Kind::piecewise && jump_to_one && theta >= 1.0) return ys.back();
            return value(theta);
        }

        double inverse(double p) const {
            switch (kind) {
                case Kind::identity: return p;
                case Kind::formula: {
                    if (inverse_fn) return std::clamp(inverse_fn(p), 0.0, 1.0);
                    if (value(0.0) >= p) return 0.0;
                    double lo = 0.0, hi = 1.0;  // value(1) = 1 >= p
                    for (int i = 0; i < 100; ++i) {
                        const double mid = 0.5 * (lo + hi);
                        (value(mid) >= p ? hi : lo) = mid;
                    }
                    return hi;
                }
                case Kind::piecewise: break;
            }
            const auto it = std::lower_bound(ys.begin(), ys.end(), p);
            if (it == ys.begin()) return xs.front();
            if (it == ys.end()) return 1.0;  // only reachable through the jump
            const std::size_t i = static_cast<std::size_t>(it - ys.begin());
            const double y0 = ys[i - 1], y1 = ys[i];
            const double x0 = xs[i - 1], x1 = xs[i];
            return x0 + (p - y0) / (y1 - y0) * (x1 - x0);
        }

        double piecewise_value(double theta) const {
            auto it = std::upper_bound(xs.begin(), xs.end(), theta);
            std::size_t i = static_cast<std::size_t>(it - xs.begin());
            if (i == 0) return ys.front();
            if (i >= xs.size()) return ys.back();
            const double x0 = xs[i - 1], x1 = xs[i];
            const double y0 = ys[i - 1], y1 = ys[i];
            if (theta == x0) return y0;
            return y0 + (theta - x0) / (x1 - x0) * (y1 - y0);
        }
    };

    explicit CdfCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

}  // namespace cursedknight
