#include "ilhedge/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace ilhedge {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ScenarioError(field, message);
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

const json& object_at(const json& doc, const char* key) {
    const json* v = find(doc, key);
    if (!v) {
        fail(key, "missing required object");
    }
    if (!v->is_object()) {
        fail(key, "must be an object");
    }
    return *v;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
        }
    }
}

double number_at(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) {
        fail(join(path, key), "missing required number");
    }
    if (!v->is_number()) {
        fail(join(path, key), "must be a number");
    }
    return v->get<double>();
}

std::optional<double> optional_number(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) {
        return std::nullopt;
    }
    if (!v->is_number()) {
        fail(join(path, key), "must be a number");
    }
    return v->get<double>();
}

PoolPosition parse_pool(const json& doc) {
    const json& pool = object_at(doc, "pool");
    reject_unknown(pool, "pool", {"capital", "entry_price", "risky_amount", "numeraire_amount"});
    const auto capital = optional_number(pool, "pool", "capital");
    const auto entry = optional_number(pool, "pool", "entry_price");
    const auto risky = optional_number(pool, "pool", "risky_amount");
    const auto numeraire = optional_number(pool, "pool", "numeraire_amount");
    try {
        if (risky && numeraire && !capital) {
            return entry ? PoolPosition::from_amounts_at_price(*risky, *numeraire, *entry)
                         : PoolPosition::from_amounts(*risky, *numeraire);
        }
        if (capital && entry && !risky && !numeraire) {
            return PoolPosition::from_capital(*capital, *entry);
        }
    } catch (const std::exception& e) {
        fail("pool", e.what());
    }
    fail("pool",
         "provide either {risky_amount, numeraire_amount[, entry_price]} or {capital, entry_price}");
}

std::optional<HedgeBand> parse_band(const json& doc, const PoolPosition& pool) {
    const json* band = find(doc, "band");
    if (!band) {
        return std::nullopt;
    }
    if (!band->is_object()) {
        fail("band", "must be an object");
    }
    reject_unknown(*band, "band", {"lower", "upper"});
    const double lower = number_at(*band, "band", "lower");
    const double upper = number_at(*band, "band", "upper");
    try {
        HedgeBand parsed(lower, upper);
        if (!parsed.contains(pool.entry_price())) {
            std::ostringstream os;
            os << "band [" << lower << ", " << upper << "] must contain the pool entry price "
               << pool.entry_price();
            fail("band", os.str());
        }
        return parsed;
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        fail("band", e.what());
    }
}

std::optional<MarketParams> parse_market(const json& doc) {
    const json* market = find(doc, "market");
    if (!market) {
        return std::nullopt;
    }
    if (!market->is_object()) {
        fail("market", "must be an object");
    }
    reject_unknown(*market, "market", {"spot", "rate", "volatility", "expiry"});
    try {
        return MarketParams(number_at(*market, "market", "spot"),
                            number_at(*market, "market", "rate"),
                            number_at(*market, "market", "volatility"),
                            number_at(*market, "market", "expiry"));
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        fail("market", e.what());
    }
}

std::optional<Strangle> parse_strangle(const json& doc) {
    const json* strangle = find(doc, "strangle");
    if (!strangle) {
        return std::nullopt;
    }
    if (!strangle->is_object()) {
        fail("strangle", "must be an object");
    }
    reject_unknown(*strangle, "strangle",
                   {"put_strike", "call_strike", "put_qty", "call_qty", "put_premium",
                    "call_premium"});
    try {
        return Strangle(number_at(*strangle, "strangle", "put_strike"),
                        number_at(*strangle, "strangle", "call_strike"),
                        number_at(*strangle, "strangle", "put_qty"),
                        number_at(*strangle, "strangle", "call_qty"),
                        number_at(*strangle, "strangle", "put_premium"),
                        number_at(*strangle, "strangle", "call_premium"));
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        fail("strangle", e.what());
    }
}

OutputControls parse_output(const json& doc) {
    OutputControls out;
    const json* output = find(doc, "output");
    if (!output) {
        return out;
    }
    if (!output->is_object()) {
        fail("output", "must be an object");
    }
    reject_unknown(*output, "output", {"price_from", "price_to", "steps"});
    out.price_from = optional_number(*output, "output", "price_from");
    out.price_to = optional_number(*output, "output", "price_to");
    if (const json* steps = find(*output, "steps")) {
        if (!steps->is_number_integer() || steps->get<long long>() < 2) {
            fail("output.steps", "must be an integer >= 2");
        }
        out.steps = static_cast<std::size_t>(steps->get<long long>());
    }
    if (out.price_from && (!std::isfinite(*out.price_from) || *out.price_from <= 0.0)) {
        fail("output.price_from", "must be positive and finite");
    }
    if (out.price_to && (!std::isfinite(*out.price_to) || *out.price_to <= 0.0)) {
        fail("output.price_to", "must be positive and finite");
    }
    if (out.price_from && out.price_to && !(*out.price_from < *out.price_to)) {
        fail("output.price_to", "must exceed output.price_from");
    }
    return out;
}

}  // namespace

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) {
        fail("config", "top-level JSON value must be an object");
    }
    reject_unknown(doc, "",
                   {"pool", "band", "pool_return_rate", "market", "quote_table", "strangle",
                    "output"});

    PoolPosition pool = parse_pool(doc);

    double pool_return_rate = 0.0;
    if (const auto rate = optional_number(doc, "", "pool_return_rate")) {
        if (!std::isfinite(*rate) || *rate < 0.0) {
            fail("pool_return_rate", "must be nonnegative and finite");
        }
        pool_return_rate = *rate;
    }

    std::optional<MarketParams> market = parse_market(doc);

    std::optional<std::filesystem::path> quote_table;
    if (const json* qt = find(doc, "quote_table")) {
        if (market) {
            fail("market", "provide either market or quote_table, not both");
        }
        if (!qt->is_string()) {
            fail("quote_table", "must be a file path string");
        }
        std::filesystem::path path = qt->get<std::string>();
        if (path.is_relative()) {
            path = base_dir / path;
        }
        if (!std::filesystem::exists(path)) {
            fail("quote_table", "file not found: " + path.string());
        }
        quote_table = path;
    }

    return Scenario{
        .pool = pool,
        .band = parse_band(doc, pool),
        .pool_return_rate = pool_return_rate,
        .market = market,
        .quote_table = quote_table,
        .strangle = parse_strangle(doc),
        .output = parse_output(doc),
    };
}

Scenario load_scenario(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) {
        fail("config", "cannot open " + config_path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(doc, config_path.parent_path());
}

}  // namespace ilhedge
