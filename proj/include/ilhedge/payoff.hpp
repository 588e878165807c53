#pragma once

#include <functional>
#include <span>
#include <string>

#include "ilhedge/amm.hpp"

namespace ilhedge {

// Twice-differentiable payoff of the expiry price, with caller-supplied
// derivatives. The derivatives must agree with finite differences of
// value_at; see self_check.
struct SmoothPayoff {
    std::function<double(double)> value_at;
    std::function<double(double)> slope_at;
    std::function<double(double)> curvature_at;
    std::string description;
};

struct SelfCheckResult {
    bool ok = true;
    double worst_slope_error = 0.0;      // scaled |central difference - slope_at|
    double worst_curvature_error = 0.0;  // scaled |central difference - curvature_at|
    double worst_probe = 0.0;
};

// Compares slope_at and curvature_at against central differences of value_at
// at every probe price. Errors are measured relative to the larger of the
// analytic value, the finite difference, and the payoff's own scale at that
// price, and must stay below 1e-4.
SelfCheckResult self_check(const SmoothPayoff& payoff, std::span<const double> probe_prices);

SmoothPayoff impermanent_loss_payoff(const PoolPosition& pool);
SmoothPayoff negated(const SmoothPayoff& payoff);

// (p - center)^2, a convex calibration payoff with constant curvature 2.
SmoothPayoff quadratic_payoff(double center);

}  // namespace ilhedge
