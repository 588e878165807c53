#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "ilhedge/amm.hpp"
#include "ilhedge/payoff.hpp"

namespace ilhedge {

// One quadrature cell: an option bought at the cell midpoint `strike`
// standing in for the cell of width `width`.
struct StrikeCell {
    double strike;
    double width;
};

// Strike set for discretizing the curvature integrals of the replication
// identity: puts on cells partitioning (k_min, center), calls on cells
// partitioning (center, truncation_k_max).
class StrikeGrid {
public:
    StrikeGrid(double center, std::vector<StrikeCell> lower, std::vector<StrikeCell> upper,
               double truncation_k_max);

    // Uniform cells per side with midpoint strikes.
    static StrikeGrid uniform(double center, double k_min, double k_max,
                              std::size_t cells_per_side);

    double center() const noexcept { return center_; }
    double truncation_k_max() const noexcept { return truncation_k_max_; }
    const std::vector<StrikeCell>& lower_cells() const noexcept { return lower_; }
    const std::vector<StrikeCell>& upper_cells() const noexcept { return upper_; }

private:
    double center_;
    std::vector<StrikeCell> lower_;
    std::vector<StrikeCell> upper_;
    double truncation_k_max_;
};

struct OptionLeg {
    double strike;
    double quantity;
};

// Static replication of a smooth payoff f around expansion point m:
//   f(m) bonds, f'(m) calls minus f'(m) puts at m, and option legs with
//   quantity f''(K) * dK below/above m.
class ReplicationPortfolio {
public:
    ReplicationPortfolio(double bond_notional, double atm_strike, double atm_call_qty,
                         double atm_put_qty, std::vector<OptionLeg> put_legs,
                         std::vector<OptionLeg> call_legs);

    double bond_notional() const noexcept { return bond_notional_; }
    double atm_strike() const noexcept { return atm_strike_; }
    double atm_call_qty() const noexcept { return atm_call_qty_; }
    double atm_put_qty() const noexcept { return atm_put_qty_; }
    const std::vector<OptionLeg>& put_legs() const noexcept { return put_legs_; }
    const std::vector<OptionLeg>& call_legs() const noexcept { return call_legs_; }

private:
    double bond_notional_;
    double atm_strike_;
    double atm_call_qty_;
    double atm_put_qty_;
    std::vector<OptionLeg> put_legs_;
    std::vector<OptionLeg> call_legs_;
};

// Midpoint-rule discretization of the replication identity. Runs the payoff
// self-check on probes drawn from the grid and throws if it fails. Empty grid
// sides are accepted; the truncation error then shows up in
// replication_error instead.
ReplicationPortfolio build_portfolio(const SmoothPayoff& payoff, const StrikeGrid& grid);

// Portfolio value at expiry price p: bond + atm legs + sum of option payoffs.
double portfolio_payoff(const ReplicationPortfolio& port, Price expiry_price);

// Present value from a bond price and per-strike option pricers. Pricers must
// return finite, nonnegative premiums. Legs with zero quantity are skipped,
// so quotes are only needed where the portfolio actually holds options.
double portfolio_present_value(const ReplicationPortfolio& port, double bond_price,
                               const std::function<double(double)>& call_price0,
                               const std::function<double(double)>& put_price0);

struct ReplicationErrorReport {
    double max_abs_error;
    double argmax_price;
};

// Max |portfolio_payoff - payoff.value_at| over the probe prices; ties keep
// the lowest probe.
ReplicationErrorReport replication_error(const ReplicationPortfolio& port,
                                         const SmoothPayoff& payoff,
                                         std::span<const double> probe_prices);

nlohmann::ordered_json to_json(const ReplicationPortfolio& port);

}  // namespace ilhedge
