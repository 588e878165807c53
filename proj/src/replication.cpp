#include "ilhedge/replication.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ilhedge {

namespace {

void require_positive_finite(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

void validate_cells(const std::vector<StrikeCell>& cells, const char* side) {
    double prev = 0.0;
    for (const StrikeCell& cell : cells) {
        if (!std::isfinite(cell.strike) || cell.strike <= 0.0) {
            throw std::invalid_argument(std::string(side) + " strikes must be positive and finite");
        }
        if (!std::isfinite(cell.width) || cell.width <= 0.0) {
            throw std::invalid_argument(std::string(side) + " cell widths must be positive");
        }
        if (cell.strike <= prev) {
            throw std::invalid_argument(std::string(side) + " strikes must be strictly ascending");
        }
        prev = cell.strike;
    }
}

}  // namespace

StrikeGrid::StrikeGrid(double center, std::vector<StrikeCell> lower, std::vector<StrikeCell> upper,
                       double truncation_k_max)
    : center_(center),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      truncation_k_max_(truncation_k_max) {
    require_positive_finite(center_, "grid center");
    require_positive_finite(truncation_k_max_, "truncation k_max");
    validate_cells(lower_, "lower");
    validate_cells(upper_, "upper");
    if (!lower_.empty() && lower_.back().strike >= center_) {
        throw std::invalid_argument("lower strikes must lie below the grid center");
    }
    if (!upper_.empty() && upper_.front().strike <= center_) {
        throw std::invalid_argument("upper strikes must lie above the grid center");
    }
    if (truncation_k_max_ < (upper_.empty() ? center_ : upper_.back().strike)) {
        throw std::invalid_argument("truncation k_max must cover the largest upper strike");
    }
}

StrikeGrid StrikeGrid::uniform(double center, double k_min, double k_max,
                               std::size_t cells_per_side) {
    require_positive_finite(center, "grid center");
    require_positive_finite(k_min, "k_min");
    require_positive_finite(k_max, "k_max");
    if (!(k_min < center && center < k_max)) {
        throw std::invalid_argument("uniform grid requires k_min < center < k_max");
    }
    std::vector<StrikeCell> lower;
    std::vector<StrikeCell> upper;
    if (cells_per_side > 0) {
        lower.reserve(cells_per_side);
        upper.reserve(cells_per_side);
        const double n = static_cast<double>(cells_per_side);
        const double w_lo = (center - k_min) / n;
        const double w_hi = (k_max - center) / n;
        for (std::size_t j = 0; j < cells_per_side; ++j) {
            lower.push_back({k_min + (static_cast<double>(j) + 0.5) * w_lo, w_lo});
            upper.push_back({center + (static_cast<double>(j) + 0.5) * w_hi, w_hi});
        }
    }
    return StrikeGrid(center, std::move(lower), std::move(upper), k_max);
}

ReplicationPortfolio::ReplicationPortfolio(double bond_notional, double atm_strike,
                                           double atm_call_qty, double atm_put_qty,
                                           std::vector<OptionLeg> put_legs,
                                           std::vector<OptionLeg> call_legs)
    : bond_notional_(bond_notional),
      atm_strike_(atm_strike),
      atm_call_qty_(atm_call_qty),
      atm_put_qty_(atm_put_qty),
      put_legs_(std::move(put_legs)),
      call_legs_(std::move(call_legs)) {
    require_positive_finite(atm_strike_, "atm strike");
    if (!std::isfinite(bond_notional_) || !std::isfinite(atm_call_qty_) ||
        !std::isfinite(atm_put_qty_)) {
        throw std::invalid_argument("portfolio quantities must be finite");
    }
    for (const OptionLeg& leg : put_legs_) {
        if (!std::isfinite(leg.quantity)) {
            throw std::invalid_argument("put leg quantities must be finite");
        }
        if (!(leg.strike > 0.0) || leg.strike >= atm_strike_) {
            throw std::invalid_argument("put leg strikes must lie in (0, atm_strike)");
        }
    }
    for (const OptionLeg& leg : call_legs_) {
        if (!std::isfinite(leg.quantity)) {
            throw std::invalid_argument("call leg quantities must be finite");
        }
        if (!(leg.strike > atm_strike_) || !std::isfinite(leg.strike)) {
            throw std::invalid_argument("call leg strikes must lie above atm_strike");
        }
    }
}

ReplicationPortfolio build_portfolio(const SmoothPayoff& payoff, const StrikeGrid& grid) {
    // Probe a spread of grid strikes plus a bracket around the center for the
    // derivative check. The bracket keeps the check meaningful when a side is
    // empty or the payoff vanishes at the center.
    std::vector<double> probes;
    auto sample_side = [&probes](const std::vector<StrikeCell>& cells) {
        if (cells.empty()) {
            return;
        }
        const std::size_t stride = std::max<std::size_t>(1, cells.size() / 8);
        for (std::size_t i = 0; i < cells.size(); i += stride) {
            probes.push_back(cells[i].strike);
        }
        probes.push_back(cells.back().strike);
    };
    sample_side(grid.lower_cells());
    probes.push_back(0.75 * grid.center());
    probes.push_back(grid.center());
    probes.push_back(1.25 * grid.center());
    sample_side(grid.upper_cells());

    const SelfCheckResult check = self_check(payoff, probes);
    if (!check.ok) {
        std::ostringstream os;
        os << "build_portfolio: payoff '" << payoff.description
           << "' failed the derivative self-check near price " << check.worst_probe
           << " (slope error " << check.worst_slope_error << ", curvature error "
           << check.worst_curvature_error << ")";
        throw std::invalid_argument(os.str());
    }

    const double m = grid.center();
    const double slope = payoff.slope_at(m);

    std::vector<OptionLeg> put_legs;
    put_legs.reserve(grid.lower_cells().size());
    for (const StrikeCell& cell : grid.lower_cells()) {
        put_legs.push_back({cell.strike, payoff.curvature_at(cell.strike) * cell.width});
    }
    std::vector<OptionLeg> call_legs;
    call_legs.reserve(grid.upper_cells().size());
    for (const StrikeCell& cell : grid.upper_cells()) {
        call_legs.push_back({cell.strike, payoff.curvature_at(cell.strike) * cell.width});
    }

    // 0.0 - slope keeps a zero slope from turning into -0.0 in the output.
    return ReplicationPortfolio(payoff.value_at(m), m, slope, 0.0 - slope, std::move(put_legs),
                                std::move(call_legs));
}

double portfolio_payoff(const ReplicationPortfolio& port, Price expiry_price) {
    const double p = expiry_price.value();
    double v = port.bond_notional();
    v += port.atm_call_qty() * std::max(p - port.atm_strike(), 0.0);
    v += port.atm_put_qty() * std::max(port.atm_strike() - p, 0.0);
    for (const OptionLeg& leg : port.put_legs()) {
        v += leg.quantity * std::max(leg.strike - p, 0.0);
    }
    for (const OptionLeg& leg : port.call_legs()) {
        v += leg.quantity * std::max(p - leg.strike, 0.0);
    }
    return v;
}

namespace {

double checked_quote(const std::function<double(double)>& pricer, double strike,
                     const char* kind) {
    const double v = pricer(strike);
    if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << kind << " pricer returned invalid premium " << v << " at strike " << strike;
        throw std::runtime_error(os.str());
    }
    return v;
}

}  // namespace

double portfolio_present_value(const ReplicationPortfolio& port, double bond_price,
                               const std::function<double(double)>& call_price0,
                               const std::function<double(double)>& put_price0) {
    if (!std::isfinite(bond_price) || bond_price < 0.0) {
        throw std::runtime_error("bond price must be finite and nonnegative");
    }
    if (!call_price0 || !put_price0) {
        throw std::invalid_argument("portfolio_present_value: pricers must be set");
    }
    double v = port.bond_notional() * bond_price;
    if (port.atm_call_qty() != 0.0) {
        v += port.atm_call_qty() * checked_quote(call_price0, port.atm_strike(), "call");
    }
    if (port.atm_put_qty() != 0.0) {
        v += port.atm_put_qty() * checked_quote(put_price0, port.atm_strike(), "put");
    }
    for (const OptionLeg& leg : port.put_legs()) {
        if (leg.quantity != 0.0) {
            v += leg.quantity * checked_quote(put_price0, leg.strike, "put");
        }
    }
    for (const OptionLeg& leg : port.call_legs()) {
        if (leg.quantity != 0.0) {
            v += leg.quantity * checked_quote(call_price0, leg.strike, "call");
        }
    }
    return v;
}

ReplicationErrorReport replication_error(const ReplicationPortfolio& port,
                                         const SmoothPayoff& payoff,
                                         std::span<const double> probe_prices) {
    if (probe_prices.empty()) {
        throw std::invalid_argument("replication_error: empty probe list");
    }
    ReplicationErrorReport report{-1.0, probe_prices.front()};
    for (double p : probe_prices) {
        const double err = std::abs(portfolio_payoff(port, Price(p)) - payoff.value_at(p));
        if (err > report.max_abs_error) {
            report.max_abs_error = err;
            report.argmax_price = p;
        }
    }
    return report;
}

nlohmann::ordered_json to_json(const ReplicationPortfolio& port) {
    nlohmann::ordered_json j;
    j["bond_notional"] = port.bond_notional();
    j["atm_strike"] = port.atm_strike();
    j["atm_call_qty"] = port.atm_call_qty();
    j["atm_put_qty"] = port.atm_put_qty();
    auto legs = [](const std::vector<OptionLeg>& side) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const OptionLeg& leg : side) {
            arr.push_back({leg.strike, leg.quantity});
        }
        return arr;
    };
    j["put_legs"] = legs(port.put_legs());
    j["call_legs"] = legs(port.call_legs());
    return j;
}

}  // namespace ilhedge
