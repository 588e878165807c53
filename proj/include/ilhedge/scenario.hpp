#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ilhedge/amm.hpp"
#include "ilhedge/hedging.hpp"
#include "ilhedge/pricing.hpp"

namespace ilhedge {

// Scenario validation failure; field() names the offending JSON field.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, const std::string& message)
        : std::runtime_error("scenario field '" + field + "': " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct OutputControls {
    std::optional<double> price_from;
    std::optional<double> price_to;
    std::optional<std::size_t> steps;
};

// A full problem instance read from a JSON file:
//   pool             {capital, entry_price} or {risky_amount, numeraire_amount[, entry_price]}
//   band             {lower, upper}, must contain the entry price (optional)
//   pool_return_rate nonnegative, defaults to 0
//   market           {spot, rate, volatility, expiry}  -- or --
//   quote_table      path to a kind,strike,premium CSV (relative to the file)
//   strangle         {put_strike, call_strike, put_qty, call_qty, put_premium, call_premium}
//   output           {price_from, price_to, steps}
struct Scenario {
    PoolPosition pool;
    std::optional<HedgeBand> band;
    double pool_return_rate = 0.0;
    std::optional<MarketParams> market;
    std::optional<std::filesystem::path> quote_table;
    std::optional<Strangle> strangle;
    OutputControls output;
};

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& config_path);

}  // namespace ilhedge
