#pragma once

#include <cstddef>
#include <functional>

#include <json.hpp>

#include "ilhedge/amm.hpp"

namespace ilhedge {

// Price interval [lower, upper] on which the hedged position must not lose
// money. A degenerate interval (lower == upper) is allowed.
class HedgeBand {
public:
    HedgeBand(double lower, double upper);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    bool contains(double price) const noexcept { return lower_ <= price && price <= upper_; }

private:
    double lower_;
    double upper_;
};

// Long put at put_strike and long call at call_strike (put_strike <= call_strike),
// with nonnegative quantities and per-unit premiums.
class Strangle {
public:
    Strangle(double put_strike, double call_strike, double put_qty, double call_qty,
             double put_premium, double call_premium);

    double put_strike() const noexcept { return put_strike_; }
    double call_strike() const noexcept { return call_strike_; }
    double put_qty() const noexcept { return put_qty_; }
    double call_qty() const noexcept { return call_qty_; }
    double put_premium() const noexcept { return put_premium_; }
    double call_premium() const noexcept { return call_premium_; }

    // Total cost D = call_qty * call_premium + put_qty * put_premium,
    // netted against the payoff at expiry without discounting.
    double cost() const noexcept { return call_qty_ * call_premium_ + put_qty_ * put_premium_; }

private:
    double put_strike_;
    double call_strike_;
    double put_qty_;
    double call_qty_;
    double put_premium_;
    double call_premium_;
};

// Pool deposit plus its option hedge. pool_return_rate is the per-period fee
// return the pool pays on the initial capital.
class HedgedPosition {
public:
    HedgedPosition(PoolPosition pool, Strangle strangle, double pool_return_rate);

    const PoolPosition& pool() const noexcept { return pool_; }
    const Strangle& strangle() const noexcept { return strangle_; }
    double pool_return_rate() const noexcept { return pool_return_rate_; }

private:
    PoolPosition pool_;
    Strangle strangle_;
    double pool_return_rate_;
};

struct QuantityBounds {
    double put_qty_min;
    double call_qty_min;
};

struct GridMinimum {
    double min_pnl;
    double argmin_price;
};

// Verdicts for the three sufficiency inequalities plus the brute-force grid
// check. `covered` comes from the grid scan, never from the inequalities.
struct CoverageReport {
    double put_qty_bound = 0.0;
    double call_qty_bound = 0.0;
    double budget_gap = 0.0;  // r_p*c - (D - min{il(K_c), il(K_p)})
    bool put_qty_ok = false;
    bool budget_ok = false;
    bool call_qty_ok = false;
    double grid_min_pnl = 0.0;
    double grid_argmin = 0.0;
    bool covered = false;
};

// Option payoff at expiry, before cost: q_c*(p-K_c)^+ + q_p*(K_p-p)^+.
double strangle_payoff(const Strangle& s, Price expiry_price);

// r_p*c + strangle payoff - D + il(p).
double total_pnl(const HedgedPosition& hp, Price expiry_price);

// Minimal option quantities protecting the band:
//   q_p >= (c/2)(1/sqrt(P_i*P0) - 1/P0),  q_c >= -(c/2)(1/sqrt(P_s*P0) - 1/P0).
// These equal +-il_slope at the band edges; the identity is checked internally.
QuantityBounds proposition_quantity_bounds(const PoolPosition& pool, const HedgeBand& band);

// Minimal pool return rate satisfying the budget inequality:
//   (D - min{il(K_c), il(K_p)}) / c.
double required_pool_return(const PoolPosition& pool, const Strangle& s);

// Evaluates total_pnl on n_points uniformly spaced prices over the band plus
// every kink price (strikes, entry price, band edges) that falls inside it.
// Returns the minimum and the lowest price attaining it. max_threads caps the
// internal parallelism (0 = one thread per hardware core); results are
// identical to the sequential scan either way.
GridMinimum verify_coverage_grid(const HedgedPosition& hp, const HedgeBand& band,
                                 std::size_t n_points, unsigned max_threads = 0);

// Evaluates the three sufficiency inequalities and runs the grid scan.
// Requires the band to contain the entry price and the strikes to satisfy
// P_i <= K_p <= P0 <= K_c <= P_s; violations are rejected with a diagnostic.
CoverageReport check_proposition(const HedgedPosition& hp, const HedgeBand& band,
                                 std::size_t n_points = 10001, unsigned max_threads = 0);

struct MinStrangleResult {
    Strangle strangle;
    double required_return;  // minimal r_p making the budget inequality hold
    bool feasible;           // required_return <= the given pool return rate
};

// Cheapest protecting strangle for the band: strikes at the band edges,
// quantities at the proposition bounds, premiums from the quote functions.
MinStrangleResult solve_min_strangle(const PoolPosition& pool, const HedgeBand& band,
                                     const std::function<double(double)>& put_quote,
                                     const std::function<double(double)>& call_quote,
                                     double pool_return_rate);

nlohmann::ordered_json to_json(const Strangle& s);
nlohmann::ordered_json to_json(const CoverageReport& report);

}  // namespace ilhedge
