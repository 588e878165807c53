#include "ilhedge/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ilhedge {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

void require_nonnegative(double v, const char* what) {
    require_finite(v, what);
    if (v < 0.0) {
        throw std::invalid_argument(std::string(what) + " must be nonnegative");
    }
}

}  // namespace

HedgeBand::HedgeBand(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper) || lower <= 0.0 || upper < lower) {
        std::ostringstream os;
        os << "band [" << lower << ", " << upper << "] must satisfy 0 < lower <= upper";
        throw std::invalid_argument(os.str());
    }
}

Strangle::Strangle(double put_strike, double call_strike, double put_qty, double call_qty,
                   double put_premium, double call_premium)
    : put_strike_(put_strike),
      call_strike_(call_strike),
      put_qty_(put_qty),
      call_qty_(call_qty),
      put_premium_(put_premium),
      call_premium_(call_premium) {
    if (!std::isfinite(put_strike) || put_strike <= 0.0 || !std::isfinite(call_strike) ||
        call_strike <= 0.0) {
        throw std::invalid_argument("strangle strikes must be positive and finite");
    }
    if (put_strike > call_strike) {
        throw std::invalid_argument("put strike must not exceed call strike");
    }
    require_nonnegative(put_qty, "put quantity");
    require_nonnegative(call_qty, "call quantity");
    require_nonnegative(put_premium, "put premium");
    require_nonnegative(call_premium, "call premium");
}

HedgedPosition::HedgedPosition(PoolPosition pool, Strangle strangle, double pool_return_rate)
    : pool_(pool), strangle_(strangle), pool_return_rate_(pool_return_rate) {
    require_nonnegative(pool_return_rate, "pool return rate");
}

double strangle_payoff(const Strangle& s, Price expiry_price) {
    const double p = expiry_price.value();
    return s.call_qty() * std::max(p - s.call_strike(), 0.0) +
           s.put_qty() * std::max(s.put_strike() - p, 0.0);
}

double total_pnl(const HedgedPosition& hp, Price expiry_price) {
    return hp.pool_return_rate() * hp.pool().capital() + strangle_payoff(hp.strangle(), expiry_price) -
           hp.strangle().cost() + il(hp.pool(), expiry_price);
}

QuantityBounds proposition_quantity_bounds(const PoolPosition& pool, const HedgeBand& band) {
    const double p0 = pool.entry_price();
    if (!band.contains(p0)) {
        std::ostringstream os;
        os << "band [" << band.lower() << ", " << band.upper() << "] does not contain entry price "
           << p0;
        throw std::invalid_argument(os.str());
    }
    // The bounds are the il slope at the band edges. That form subtracts
    // numbers near 1 exactly, so equality cases like quantities sized right
    // at the bound survive the comparison in check_proposition.
    const double put_min = il_slope(pool, Price(band.lower()));
    const double call_min = -il_slope(pool, Price(band.upper()));

    // Same quantities through the reciprocal form; guard the algebra.
    const double half_c = 0.5 * pool.capital();
    const double put_alt = half_c * (1.0 / std::sqrt(band.lower() * p0) - 1.0 / p0);
    const double call_alt = -half_c * (1.0 / std::sqrt(band.upper() * p0) - 1.0 / p0);
    const double scale = std::max({std::abs(put_min), std::abs(call_min), pool.capital() / p0});
    if (std::abs(put_min - put_alt) > 1e-12 * scale ||
        std::abs(call_min - call_alt) > 1e-12 * scale) {
        throw std::logic_error("quantity bounds disagree with the il slope at the band edges");
    }
    return {put_min, call_min};
}

double required_pool_return(const PoolPosition& pool, const Strangle& s) {
    const double worst_strike_il =
        std::min(il(pool, Price(s.call_strike())), il(pool, Price(s.put_strike())));
    return (s.cost() - worst_strike_il) / pool.capital();
}

GridMinimum verify_coverage_grid(const HedgedPosition& hp, const HedgeBand& band,
                                 std::size_t n_points, unsigned max_threads) {
    if (n_points < 2) {
        throw std::invalid_argument("verify_coverage_grid: n_points must be >= 2");
    }

    const double lo = band.lower();
    const double hi = band.upper();
    std::vector<double> prices;
    prices.reserve(n_points + 5);
    const double span = hi - lo;
    for (std::size_t i = 0; i < n_points; ++i) {
        if (i + 1 == n_points) {
            prices.push_back(hi);
        } else {
            prices.push_back(lo + span * (static_cast<double>(i) / static_cast<double>(n_points - 1)));
        }
    }
    // Kink prices so the scan cannot straddle a piecewise minimum.
    const double kinks[] = {hp.strangle().put_strike(), hp.strangle().call_strike(),
                            hp.pool().entry_price(), lo, hi};
    for (double k : kinks) {
        if (k >= lo && k <= hi) {
            prices.push_back(k);
        }
    }
    std::sort(prices.begin(), prices.end());
    prices.erase(std::unique(prices.begin(), prices.end()), prices.end());

    struct Local {
        double min = std::numeric_limits<double>::infinity();
        std::size_t idx = 0;
    };
    auto scan = [&](std::size_t begin, std::size_t end) {
        Local best;
        best.idx = begin;
        for (std::size_t i = begin; i < end; ++i) {
            const double v = total_pnl(hp, Price(prices[i]));
            if (v < best.min) {
                best.min = v;
                best.idx = i;
            }
        }
        return best;
    };

    unsigned workers = max_threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                        : max_threads;
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(1, prices.size() / 2048)));

    Local best;
    if (workers <= 1) {
        best = scan(0, prices.size());
    } else {
        std::vector<Local> partial(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (prices.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min<std::size_t>(prices.size(), w * chunk);
            const std::size_t end = std::min<std::size_t>(prices.size(), begin + chunk);
            pool.emplace_back([&partial, &scan, w, begin, end] { partial[w] = scan(begin, end); });
        }
        for (std::thread& t : pool) {
            t.join();
        }
        // Merge in index order; strict < keeps the lowest price on ties.
        best = partial.front();
        for (unsigned w = 1; w < workers; ++w) {
            if (partial[w].min < best.min) {
                best = partial[w];
            }
        }
    }
    return {best.min, prices[best.idx]};
}

CoverageReport check_proposition(const HedgedPosition& hp, const HedgeBand& band,
                                 std::size_t n_points, unsigned max_threads) {
    const PoolPosition& pool = hp.pool();
    const Strangle& s = hp.strangle();
    const double p0 = pool.entry_price();
    if (!band.contains(p0)) {
        std::ostringstream os;
        os << "band [" << band.lower() << ", " << band.upper() << "] does not contain entry price "
           << p0;
        throw std::invalid_argument(os.str());
    }
    auto reject = [&](const char* what, double strike, const char* relation, double bound) {
        std::ostringstream os;
        os << "strike ordering violated: " << what << " " << strike << " must be " << relation
           << " " << bound << " (require band lower <= put strike <= entry price <= call strike "
           << "<= band upper)";
        throw std::invalid_argument(os.str());
    };
    if (s.put_strike() < band.lower()) {
        reject("put strike", s.put_strike(), ">=", band.lower());
    }
    if (s.put_strike() > p0) {
        reject("put strike", s.put_strike(), "<=", p0);
    }
    if (s.call_strike() < p0) {
        reject("call strike", s.call_strike(), ">=", p0);
    }
    if (s.call_strike() > band.upper()) {
        reject("call strike", s.call_strike(), "<=", band.upper());
    }

    const QuantityBounds bounds = proposition_quantity_bounds(pool, band);
    const double worst_strike_il =
        std::min(il(pool, Price(s.call_strike())), il(pool, Price(s.put_strike())));
    const double budget_needed = s.cost() - worst_strike_il;
    const double budget_available = hp.pool_return_rate() * pool.capital();
    const GridMinimum grid = verify_coverage_grid(hp, band, n_points, max_threads);

    CoverageReport report;
    report.put_qty_bound = bounds.put_qty_min;
    report.call_qty_bound = bounds.call_qty_min;
    report.budget_gap = budget_available - budget_needed;
    report.put_qty_ok = s.put_qty() >= bounds.put_qty_min;
    report.budget_ok = budget_needed <= budget_available;
    report.call_qty_ok = s.call_qty() >= bounds.call_qty_min;
    report.grid_min_pnl = grid.min_pnl;
    report.grid_argmin = grid.argmin_price;
    report.covered = grid.min_pnl >= -1e-9 * pool.capital();
    return report;
}

MinStrangleResult solve_min_strangle(const PoolPosition& pool, const HedgeBand& band,
                                     const std::function<double(double)>& put_quote,
                                     const std::function<double(double)>& call_quote,
                                     double pool_return_rate) {
    if (!put_quote || !call_quote) {
        throw std::invalid_argument("solve_min_strangle: quote functions must be set");
    }
    require_finite(pool_return_rate, "pool return rate");
    const QuantityBounds bounds = proposition_quantity_bounds(pool, band);

    auto premium = [](const std::function<double(double)>& quote, double strike, const char* kind) {
        const double v = quote(strike);
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream os;
            os << kind << " quote at strike " << strike << " returned invalid premium " << v;
            throw std::runtime_error(os.str());
        }
        return v;
    };
    const double put_prem = premium(put_quote, band.lower(), "put");
    const double call_prem = premium(call_quote, band.upper(), "call");

    const Strangle s(band.lower(), band.upper(), bounds.put_qty_min, bounds.call_qty_min, put_prem,
                     call_prem);
    const double required = required_pool_return(pool, s);
    return {s, required, required <= pool_return_rate};
}

nlohmann::ordered_json to_json(const Strangle& s) {
    nlohmann::ordered_json j;
    j["put_strike"] = s.put_strike();
    j["call_strike"] = s.call_strike();
    j["put_qty"] = s.put_qty();
    j["call_qty"] = s.call_qty();
    j["put_premium"] = s.put_premium();
    j["call_premium"] = s.call_premium();
    j["cost"] = s.cost();
    return j;
}

nlohmann::ordered_json to_json(const CoverageReport& report) {
    nlohmann::ordered_json j;
    j["put_qty_bound"] = report.put_qty_bound;
    j["call_qty_bound"] = report.call_qty_bound;
    j["budget_gap"] = report.budget_gap;
    j["inequalities_hold"] = {report.put_qty_ok, report.budget_ok, report.call_qty_ok};
    j["grid_min_pnl"] = report.grid_min_pnl;
    j["grid_argmin"] = report.grid_argmin;
    j["covered"] = report.covered;
    return j;
}

}  // namespace ilhedge
