#include "ilhedge/amm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ilhedge {

namespace {

void require_positive_finite(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::domain_error(std::string(what) + " must be positive and finite, got " +
                                std::to_string(v));
    }
}

}  // namespace

Price::Price(double value) : value_(value) { require_positive_finite(value, "price"); }

PoolPosition::PoolPosition(double risky, double numeraire, double entry)
    : risky_amount_(risky),
      numeraire_amount_(numeraire),
      entry_price_(entry),
      invariant_(risky * numeraire),
      capital_(2.0 * numeraire) {}

PoolPosition PoolPosition::from_amounts(double risky_amount, double numeraire_amount) {
    require_positive_finite(risky_amount, "risky amount");
    require_positive_finite(numeraire_amount, "numeraire amount");
    return PoolPosition(risky_amount, numeraire_amount, numeraire_amount / risky_amount);
}

PoolPosition PoolPosition::from_capital(double capital, double entry_price) {
    require_positive_finite(capital, "capital");
    require_positive_finite(entry_price, "entry price");
    const double numeraire = 0.5 * capital;
    return PoolPosition(numeraire / entry_price, numeraire, entry_price);
}

PoolPosition PoolPosition::from_amounts_at_price(double risky_amount, double numeraire_amount,
                                                 double entry_price) {
    require_positive_finite(risky_amount, "risky amount");
    require_positive_finite(numeraire_amount, "numeraire amount");
    require_positive_finite(entry_price, "entry price");
    const double implied = numeraire_amount / risky_amount;
    if (std::abs(implied - entry_price) > 1e-9 * entry_price) {
        throw std::invalid_argument("entry price " + std::to_string(entry_price) +
                                    " inconsistent with reserve ratio " + std::to_string(implied));
    }
    return PoolPosition(risky_amount, numeraire_amount, entry_price);
}

Reserves reserves_at_price(const PoolPosition& pool, Price p) {
    const double k = pool.invariant();
    return {std::sqrt(k / p.value()), std::sqrt(k * p.value())};
}

double value_pool(const PoolPosition& pool, Price p) {
    return pool.capital() * std::sqrt(p.value() / pool.entry_price());
}

double value_hold(const PoolPosition& pool, Price p) {
    const double ratio = p.value() / pool.entry_price();
    return 0.5 * pool.capital() * (ratio + 1.0);
}

double il(const PoolPosition& pool, Price p) {
    const double ratio = p.value() / pool.entry_price();
    const double raw = pool.capital() * (std::sqrt(ratio) - 0.5 * (ratio + 1.0));
    // sqrt(r) <= (r+1)/2 holds exactly; clamp the 1-ulp rounding excursions near P0.
    return std::min(0.0, raw);
}

double il_slope(const PoolPosition& pool, Price p) {
    const double half_c_over_p0 = 0.5 * pool.capital() / pool.entry_price();
    return half_c_over_p0 * (std::sqrt(pool.entry_price() / p.value()) - 1.0);
}

double il_curvature(const PoolPosition& pool, Price p) {
    const double v = p.value();
    return -pool.capital() / (4.0 * std::sqrt(pool.entry_price()) * v * std::sqrt(v));
}

}  // namespace ilhedge
