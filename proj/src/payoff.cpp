#include "ilhedge/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ilhedge {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

SelfCheckResult self_check(const SmoothPayoff& payoff, std::span<const double> probe_prices) {
    if (probe_prices.empty()) {
        throw std::invalid_argument("self_check: empty probe list");
    }
    if (!payoff.value_at || !payoff.slope_at || !payoff.curvature_at) {
        throw std::invalid_argument("self_check: payoff callbacks must all be set");
    }

    double scale = 0.0;
    for (double p : probe_prices) {
        if (!std::isfinite(p) || p <= 0.0) {
            throw std::domain_error("self_check: probe prices must be positive and finite");
        }
        scale = std::max(scale, std::abs(payoff.value_at(p)));
    }

    constexpr double kTol = 1e-4;
    SelfCheckResult result;
    result.worst_probe = probe_prices.front();
    for (double p : probe_prices) {
        const double h = 1e-4 * p;
        const double f_lo = payoff.value_at(p - h);
        const double f_mid = payoff.value_at(p);
        const double f_hi = payoff.value_at(p + h);
        const double fd_slope = (f_hi - f_lo) / (2.0 * h);
        const double fd_curv = (f_hi - 2.0 * f_mid + f_lo) / (h * h);
        const double slope = payoff.slope_at(p);
        const double curv = payoff.curvature_at(p);

        const double slope_scale = std::max({std::abs(slope), std::abs(fd_slope), scale / p});
        const double curv_scale = std::max({std::abs(curv), std::abs(fd_curv), scale / (p * p)});
        const double slope_err = slope_scale > 0.0 ? std::abs(fd_slope - slope) / slope_scale : 0.0;
        const double curv_err = curv_scale > 0.0 ? std::abs(fd_curv - curv) / curv_scale : 0.0;

        if (std::max(slope_err, curv_err) >
            std::max(result.worst_slope_error, result.worst_curvature_error)) {
            result.worst_probe = p;
        }
        result.worst_slope_error = std::max(result.worst_slope_error, slope_err);
        result.worst_curvature_error = std::max(result.worst_curvature_error, curv_err);
    }
    result.ok = result.worst_slope_error <= kTol && result.worst_curvature_error <= kTol;
    return result;
}

SmoothPayoff impermanent_loss_payoff(const PoolPosition& pool) {
    return SmoothPayoff{
        [pool](double p) { return il(pool, Price(p)); },
        [pool](double p) { return il_slope(pool, Price(p)); },
        [pool](double p) { return il_curvature(pool, Price(p)); },
        "impermanent loss (capital=" + fmt(pool.capital()) + ", entry=" + fmt(pool.entry_price()) +
            ")",
    };
}

SmoothPayoff negated(const SmoothPayoff& payoff) {
    return SmoothPayoff{
        [f = payoff.value_at](double p) { return -f(p); },
        [f = payoff.slope_at](double p) { return -f(p); },
        [f = payoff.curvature_at](double p) { return -f(p); },
        "-(" + payoff.description + ")",
    };
}

SmoothPayoff quadratic_payoff(double center) {
    if (!std::isfinite(center)) {
        throw std::domain_error("quadratic_payoff: center must be finite");
    }
    return SmoothPayoff{
        [center](double p) { return (p - center) * (p - center); },
        [center](double p) { return 2.0 * (p - center); },
        [](double) { return 2.0; },
        "quadratic (p - " + fmt(center) + ")^2",
    };
}

}  // namespace ilhedge
