#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ilhedge/amm.hpp"
#include "ilhedge/hedging.hpp"
#include "ilhedge/payoff.hpp"
#include "ilhedge/pricing.hpp"
#include "ilhedge/replication.hpp"
#include "ilhedge/scenario.hpp"

namespace {

using namespace ilhedge;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

// 17 significant digits round-trip a double exactly.
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

unsigned thread_cap_from_env() {
    const char* env = std::getenv("ILHEDGE_THREADS");
    if (!env || !*env) {
        return 0;  // auto
    }
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') {
        std::cerr << "ilhedge: ignoring invalid ILHEDGE_THREADS value '" << env << "'\n";
        return 0;
    }
    return static_cast<unsigned>(std::min<unsigned long>(v, 4096));
}

int emit(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return std::cout ? 0 : kExitData;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "ilhedge: cannot open output file " << path << "\n";
        return kExitData;
    }
    out << body;
    out.flush();
    if (!out) {
        std::cerr << "ilhedge: failed writing " << path << "\n";
        return kExitData;
    }
    return 0;
}

// Geometric price ladder: `steps` multiplicative intervals, steps+1 rows,
// endpoints exact.
std::vector<double> geometric_prices(double from, double to, std::size_t steps) {
    std::vector<double> prices;
    prices.reserve(steps + 1);
    const double ratio = to / from;
    for (std::size_t i = 0; i <= steps; ++i) {
        if (i == 0) {
            prices.push_back(from);
        } else if (i == steps) {
            prices.push_back(to);
        } else {
            prices.push_back(from *
                             std::pow(ratio, static_cast<double>(i) / static_cast<double>(steps)));
        }
    }
    return prices;
}

std::vector<double> uniform_prices(double from, double to, std::size_t steps) {
    std::vector<double> prices;
    prices.reserve(steps + 1);
    const double span = to - from;
    for (std::size_t i = 0; i <= steps; ++i) {
        if (i == steps) {
            prices.push_back(to);
        } else {
            prices.push_back(from + span * (static_cast<double>(i) / static_cast<double>(steps)));
        }
    }
    return prices;
}

struct CurveOptions {
    std::optional<double> from;
    std::optional<double> to;
    std::optional<std::size_t> steps;
};

int run_il_curve(const std::string& config, const std::string& out, const CurveOptions& opts) {
    const Scenario sc = load_scenario(config);
    const double p0 = sc.pool.entry_price();
    const double from = opts.from ? *opts.from : sc.output.price_from.value_or(p0 / 4.0);
    const double to = opts.to ? *opts.to : sc.output.price_to.value_or(4.0 * p0);
    const std::size_t steps = opts.steps ? *opts.steps : sc.output.steps.value_or(100);

    if (!std::isfinite(from) || !std::isfinite(to) || from <= 0.0 || from >= to) {
        std::cerr << "ilhedge: il-curve requires 0 < from < to (got from=" << from
                  << ", to=" << to << ")\n";
        return kExitUsage;
    }
    if (steps < 2) {
        std::cerr << "ilhedge: il-curve requires steps >= 2 (got " << steps << ")\n";
        return kExitUsage;
    }

    std::string body = "price,v_pool,v_hold,il,il_slope\n";
    for (double p : geometric_prices(from, to, steps)) {
        const Price price(p);
        body += fmt17(p);
        body += ',';
        body += fmt17(value_pool(sc.pool, price));
        body += ',';
        body += fmt17(value_hold(sc.pool, price));
        body += ',';
        body += fmt17(il(sc.pool, price));
        body += ',';
        body += fmt17(il_slope(sc.pool, price));
        body += '\n';
    }
    return emit(out, body);
}

struct ReplicateOptions {
    std::optional<std::size_t> grid_cells;
    std::optional<double> k_min;
    std::optional<double> k_max;
    std::string payoff_kind = "il";
};

int run_replicate(const std::string& config, const std::string& out,
                  const ReplicateOptions& opts) {
    const Scenario sc = load_scenario(config);
    if (!sc.band) {
        std::cerr << "ilhedge: scenario field 'band': required by replicate\n";
        return kExitData;
    }
    if (!sc.market && !sc.quote_table) {
        std::cerr << "ilhedge: scenario field 'market': replicate needs market or quote_table\n";
        return kExitData;
    }

    const double m = sc.pool.entry_price();
    const double k_min = opts.k_min.value_or(m / 100.0);
    const double k_max = opts.k_max.value_or(10.0 * m);
    const std::size_t cells = opts.grid_cells.value_or(2000);
    if (!std::isfinite(k_min) || !std::isfinite(k_max) || !(k_min > 0.0) || !(k_min < m) ||
        !(k_max > m)) {
        std::cerr << "ilhedge: replicate requires 0 < kmin < entry price < kmax (got kmin=" << k_min
                  << ", kmax=" << k_max << ")\n";
        return kExitUsage;
    }
    if (cells < 1) {
        std::cerr << "ilhedge: replicate requires at least one grid cell per side\n";
        return kExitUsage;
    }

    SmoothPayoff payoff;
    if (opts.payoff_kind == "il") {
        payoff = impermanent_loss_payoff(sc.pool);
    } else if (opts.payoff_kind == "neg-il") {
        payoff = negated(impermanent_loss_payoff(sc.pool));
    } else {
        payoff = quadratic_payoff(m);
    }

    const StrikeGrid grid = StrikeGrid::uniform(m, k_min, k_max, cells);
    const ReplicationPortfolio port = build_portfolio(payoff, grid);

    double bond_price = 1.0;
    QuoteFn call_quotes;
    QuoteFn put_quotes;
    if (sc.market) {
        bond_price = discount_bond(*sc.market);
        call_quotes = model_call_quotes(*sc.market);
        put_quotes = model_put_quotes(*sc.market);
    } else {
        const QuoteTable table = QuoteTable::load_csv(*sc.quote_table);
        std::vector<double> missing_calls;
        std::vector<double> missing_puts;
        if (port.atm_call_qty() != 0.0 && !table.has_call(port.atm_strike())) {
            missing_calls.push_back(port.atm_strike());
        }
        if (port.atm_put_qty() != 0.0 && !table.has_put(port.atm_strike())) {
            missing_puts.push_back(port.atm_strike());
        }
        for (const OptionLeg& leg : port.put_legs()) {
            if (leg.quantity != 0.0 && !table.has_put(leg.strike)) {
                missing_puts.push_back(leg.strike);
            }
        }
        for (const OptionLeg& leg : port.call_legs()) {
            if (leg.quantity != 0.0 && !table.has_call(leg.strike)) {
                missing_calls.push_back(leg.strike);
            }
        }
        if (!missing_calls.empty() || !missing_puts.empty()) {
            std::cerr << "ilhedge: quote table " << sc.quote_table->string()
                      << " is missing strikes required by the portfolio\n";
            for (double k : missing_puts) {
                std::cerr << "  missing put strike " << fmt17(k) << "\n";
            }
            for (double k : missing_calls) {
                std::cerr << "  missing call strike " << fmt17(k) << "\n";
            }
            return kExitData;
        }
        call_quotes = table.call_quotes();
        put_quotes = table.put_quotes();
    }

    const double present_value = portfolio_present_value(port, bond_price, call_quotes, put_quotes);
    const std::vector<double> probes = uniform_prices(sc.band->lower(), sc.band->upper(), 400);
    const ReplicationErrorReport err = replication_error(port, payoff, probes);

    nlohmann::ordered_json doc;
    doc["payoff"] = opts.payoff_kind;
    doc["grid"] = {{"center", m}, {"k_min", k_min}, {"k_max", k_max}, {"cells_per_side", cells}};
    doc["portfolio"] = to_json(port);
    doc["present_value"] = present_value;
    doc["replication_error"] = {{"max_abs_error", err.max_abs_error},
                                {"argmax_price", err.argmax_price}};
    return emit(out, doc.dump(2) + "\n");
}

struct HedgeOptions {
    std::string curve_out;
    std::optional<std::size_t> steps;
};

int run_hedge(const std::string& config, const std::string& out, const HedgeOptions& opts) {
    const Scenario sc = load_scenario(config);
    if (!sc.band) {
        std::cerr << "ilhedge: scenario field 'band': required by hedge\n";
        return kExitData;
    }
    const HedgeBand& band = *sc.band;
    const std::size_t steps = opts.steps ? *opts.steps : sc.output.steps.value_or(200);
    if (steps < 2) {
        std::cerr << "ilhedge: hedge requires steps >= 2 (got " << steps << ")\n";
        return kExitUsage;
    }

    std::optional<Strangle> strangle = sc.strangle;
    std::string source = "scenario";
    double required = 0.0;
    bool feasible = false;
    if (strangle) {
        required = required_pool_return(sc.pool, *strangle);
        feasible = required <= sc.pool_return_rate;
    } else {
        QuoteFn call_quotes;
        QuoteFn put_quotes;
        if (sc.market) {
            call_quotes = model_call_quotes(*sc.market);
            put_quotes = model_put_quotes(*sc.market);
        } else if (sc.quote_table) {
            const QuoteTable table = QuoteTable::load_csv(*sc.quote_table);
            call_quotes = table.call_quotes();
            put_quotes = table.put_quotes();
        } else {
            std::cerr << "ilhedge: scenario field 'market': hedge needs a strangle, market, or "
                         "quote_table\n";
            return kExitData;
        }
        const MinStrangleResult solved =
            solve_min_strangle(sc.pool, band, put_quotes, call_quotes, sc.pool_return_rate);
        strangle = solved.strangle;
        required = solved.required_return;
        feasible = solved.feasible;
        source = "solved";
    }

    const HedgedPosition hp(sc.pool, *strangle, sc.pool_return_rate);
    const CoverageReport report = check_proposition(hp, band, 10001, thread_cap_from_env());

    nlohmann::ordered_json doc;
    doc["strangle"] = to_json(*strangle);
    doc["strangle_source"] = source;
    doc["pool_return_rate"] = sc.pool_return_rate;
    doc["required_pool_return"] = required;
    doc["feasible"] = feasible;
    doc["report"] = to_json(report);
    if (const int rc = emit(out, doc.dump(2) + "\n"); rc != 0) {
        return rc;
    }

    // PnL curve over the band widened by 20% of its width per side.
    const double width = band.upper() - band.lower();
    const double lo = std::max(band.lower() - 0.2 * width, 0.01 * band.lower());
    const double hi = band.upper() + 0.2 * width;
    std::vector<double> prices = uniform_prices(lo, hi, steps);
    for (double kink : {strangle->put_strike(), strangle->call_strike(), sc.pool.entry_price()}) {
        if (kink >= lo && kink <= hi) {
            prices.push_back(kink);
        }
    }
    std::sort(prices.begin(), prices.end());
    prices.erase(std::unique(prices.begin(), prices.end()), prices.end());

    const double fee_return = sc.pool_return_rate * sc.pool.capital();
    const double cost = strangle->cost();
    std::string body = "price,pnl_pool_hold,pnl_strangle,pnl_total\n";
    for (double p : prices) {
        const Price price(p);
        body += fmt17(p);
        body += ',';
        body += fmt17(fee_return + il(sc.pool, price));
        body += ',';
        body += fmt17(strangle_payoff(*strangle, price) - cost);
        body += ',';
        body += fmt17(total_pnl(hp, price));
        body += '\n';
    }
    if (const int rc = emit(opts.curve_out, body); rc != 0) {
        return rc;
    }
    return report.covered ? 0 : kExitInfeasible;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ScenarioError& e) {
        std::cerr << "ilhedge: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "ilhedge: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant-product pool analytics: impermanent-loss curves, static option "
                 "replication, strangle hedge sizing and coverage checks"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    double from = 0.0;
    double to = 0.0;
    std::size_t steps = 0;
    std::size_t grid_cells = 0;
    double k_min = 0.0;
    double k_max = 0.0;
    std::string payoff_kind = "il";
    std::string curve_out;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "scenario JSON file")->required();
        cmd->add_option("--out", out, "output file (default: standard output)");
    };

    CLI::App* curve_cmd =
        app.add_subcommand("il-curve", "emit a price,v_pool,v_hold,il,il_slope CSV curve");
    add_common(curve_cmd);
    CLI::Option* opt_from = curve_cmd->add_option("--from", from, "lowest price in the ladder");
    CLI::Option* opt_to = curve_cmd->add_option("--to", to, "highest price in the ladder");
    CLI::Option* opt_steps =
        curve_cmd->add_option("--steps", steps, "number of multiplicative price steps (>= 2)");

    CLI::App* replicate_cmd = app.add_subcommand(
        "replicate", "build a bond+option replication of a payoff and report its quality");
    add_common(replicate_cmd);
    CLI::Option* opt_cells =
        replicate_cmd->add_option("--grid-cells", grid_cells, "quadrature cells per side");
    CLI::Option* opt_kmin = replicate_cmd->add_option("--kmin", k_min, "lowest strike");
    CLI::Option* opt_kmax = replicate_cmd->add_option("--kmax", k_max, "highest strike");
    replicate_cmd->add_option("--payoff", payoff_kind, "payoff to replicate")
        ->check(CLI::IsMember({"il", "neg-il", "quadratic"}));

    CLI::App* hedge_cmd = app.add_subcommand(
        "hedge", "solve/check a strangle hedge and emit the coverage report plus a PnL curve");
    add_common(hedge_cmd);
    hedge_cmd->add_option("--curve", curve_out, "PnL CSV file (default: standard output)");
    CLI::Option* opt_hedge_steps =
        hedge_cmd->add_option("--steps", steps, "uniform price steps in the PnL curve (>= 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (*curve_cmd) {
        CurveOptions opts;
        if (opt_from->count() > 0) {
            opts.from = from;
        }
        if (opt_to->count() > 0) {
            opts.to = to;
        }
        if (opt_steps->count() > 0) {
            opts.steps = steps;
        }
        return guarded([&] { return run_il_curve(config, out, opts); });
    }
    if (*replicate_cmd) {
        ReplicateOptions opts;
        if (opt_cells->count() > 0) {
            opts.grid_cells = grid_cells;
        }
        if (opt_kmin->count() > 0) {
            opts.k_min = k_min;
        }
        if (opt_kmax->count() > 0) {
            opts.k_max = k_max;
        }
        opts.payoff_kind = payoff_kind;
        return guarded([&] { return run_replicate(config, out, opts); });
    }
    HedgeOptions opts;
    opts.curve_out = curve_out;
    if (opt_hedge_steps->count() > 0) {
        opts.steps = steps;
    }
    return guarded([&] { return run_hedge(config, out, opts); });
}
