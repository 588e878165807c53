#include "ilhedge/pricing.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ilhedge {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be finite");
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

MarketParams::MarketParams(double spot, double rate, double volatility, double expiry)
    : spot_(spot), rate_(rate), volatility_(volatility), expiry_(expiry) {
    if (!std::isfinite(spot) || spot <= 0.0) {
        throw std::domain_error("spot must be positive and finite");
    }
    require_finite(rate, "rate");
    if (!std::isfinite(volatility) || volatility < 0.0) {
        throw std::domain_error("volatility must be nonnegative and finite");
    }
    if (!std::isfinite(expiry) || expiry <= 0.0) {
        throw std::domain_error("expiry must be positive and finite");
    }
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double discount_bond(const MarketParams& mp) { return std::exp(-mp.rate() * mp.expiry()); }

double call_price(const MarketParams& mp, Price strike) {
    const double k = strike.value();
    const double df = discount_bond(mp);
    const double stddev = mp.volatility() * std::sqrt(mp.expiry());
    if (stddev == 0.0) {
        const double forward = mp.spot() / df;
        return df * std::max(forward - k, 0.0);
    }
    const double d1 =
        (std::log(mp.spot() / k) + (mp.rate() + 0.5 * mp.volatility() * mp.volatility()) * mp.expiry()) /
        stddev;
    const double d2 = d1 - stddev;
    return mp.spot() * norm_cdf(d1) - k * df * norm_cdf(d2);
}

double put_price(const MarketParams& mp, Price strike) {
    const double k = strike.value();
    const double df = discount_bond(mp);
    const double stddev = mp.volatility() * std::sqrt(mp.expiry());
    if (stddev == 0.0) {
        const double forward = mp.spot() / df;
        return df * std::max(k - forward, 0.0);
    }
    const double d1 =
        (std::log(mp.spot() / k) + (mp.rate() + 0.5 * mp.volatility() * mp.volatility()) * mp.expiry()) /
        stddev;
    const double d2 = d1 - stddev;
    return k * df * norm_cdf(-d2) - mp.spot() * norm_cdf(-d1);
}

QuoteFn model_call_quotes(const MarketParams& mp) {
    return [mp](double strike) { return call_price(mp, Price(strike)); };
}

QuoteFn model_put_quotes(const MarketParams& mp) {
    return [mp](double strike) { return put_price(mp, Price(strike)); };
}

QuoteTable QuoteTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open quote table " + path.string());
    }
    return parse_csv(in, path.string());
}

QuoteTable QuoteTable::parse_csv(std::istream& in, const std::string& source_name) {
    auto trim = [](std::string s) {
        const auto begin = s.find_first_not_of(" \t\r");
        const auto end = s.find_last_not_of(" \t\r");
        return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
    };

    QuoteTable table;
    table.source_ = source_name;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        std::string cells[3];
        std::size_t cell = 0;
        std::string current;
        for (char c : line + ",") {
            if (c == ',') {
                if (cell >= 3) {
                    throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                             ": expected 3 columns");
                }
                cells[cell++] = trim(current);
                current.clear();
            } else {
                current.push_back(c);
            }
        }
        if (cell != 3) {
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                     ": expected 3 columns");
        }
        if (!saw_header) {
            if (cells[0] != "kind" || cells[1] != "strike" || cells[2] != "premium") {
                throw std::runtime_error(source_name + ": header must be kind,strike,premium");
            }
            saw_header = true;
            continue;
        }

        auto parse_number = [&](const std::string& text, const char* what) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != text.size() || !std::isfinite(v)) {
                throw std::runtime_error(source_name + ":" + std::to_string(line_no) + ": bad " +
                                         what + " '" + text + "'");
            }
            return v;
        };

        const double strike = parse_number(cells[1], "strike");
        const double premium = parse_number(cells[2], "premium");
        if (strike <= 0.0) {
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                     ": strike must be positive");
        }
        if (premium < 0.0) {
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                     ": premium must be nonnegative");
        }
        std::map<double, double>* side = nullptr;
        if (cells[0] == "call") {
            side = &table.calls_;
        } else if (cells[0] == "put") {
            side = &table.puts_;
        } else {
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                     ": kind must be call or put, got '" + cells[0] + "'");
        }
        if (!side->emplace(strike, premium).second) {
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                     ": duplicate " + cells[0] + " strike " + cells[1]);
        }
    }
    if (!saw_header) {
        throw std::runtime_error(source_name + ": missing kind,strike,premium header");
    }
    return table;
}

double QuoteTable::call(double strike) const {
    const auto it = calls_.find(strike);
    if (it == calls_.end()) {
        throw std::runtime_error(source_ + ": no call quote at strike " + fmt(strike));
    }
    return it->second;
}

double QuoteTable::put(double strike) const {
    const auto it = puts_.find(strike);
    if (it == puts_.end()) {
        throw std::runtime_error(source_ + ": no put quote at strike " + fmt(strike));
    }
    return it->second;
}

bool QuoteTable::has_call(double strike) const noexcept { return calls_.count(strike) > 0; }

bool QuoteTable::has_put(double strike) const noexcept { return puts_.count(strike) > 0; }

QuoteFn QuoteTable::call_quotes() const {
    return [table = *this](double strike) { return table.call(strike); };
}

QuoteFn QuoteTable::put_quotes() const {
    return [table = *this](double strike) { return table.put(strike); };
}

}  // namespace ilhedge
