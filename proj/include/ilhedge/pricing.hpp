#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>

#include "ilhedge/amm.hpp"

namespace ilhedge {

// European option market inputs: spot price, continuously compounded rate,
// annualized lognormal volatility (>= 0), expiry as a year fraction (> 0).
class MarketParams {
public:
    MarketParams(double spot, double rate, double volatility, double expiry);

    double spot() const noexcept { return spot_; }
    double rate() const noexcept { return rate_; }
    double volatility() const noexcept { return volatility_; }
    double expiry() const noexcept { return expiry_; }

private:
    double spot_;
    double rate_;
    double volatility_;
    double expiry_;
};

// Standard normal CDF via erfc; absolute error below 1e-12.
double norm_cdf(double x);

// exp(-rate * expiry).
double discount_bond(const MarketParams& mp);

// Black-Scholes prices. volatility == 0 degenerates to the discounted
// intrinsic value on the forward rather than an error.
double call_price(const MarketParams& mp, Price strike);
double put_price(const MarketParams& mp, Price strike);

// Abstract premium source: strike -> premium. Either the model pricer bound
// to fixed market params or a quote table can sit behind it.
using QuoteFn = std::function<double(double)>;

QuoteFn model_call_quotes(const MarketParams& mp);
QuoteFn model_put_quotes(const MarketParams& mp);

// CSV quote table with header `kind,strike,premium`, kind in {call, put}.
// Lookup is exact-strike; a missing strike throws.
class QuoteTable {
public:
    static QuoteTable load_csv(const std::filesystem::path& path);
    static QuoteTable parse_csv(std::istream& in, const std::string& source_name);

    double call(double strike) const;
    double put(double strike) const;
    bool has_call(double strike) const noexcept;
    bool has_put(double strike) const noexcept;
    std::size_t size() const noexcept { return calls_.size() + puts_.size(); }

    QuoteFn call_quotes() const;
    QuoteFn put_quotes() const;

private:
    std::map<double, double> calls_;
    std::map<double, double> puts_;
    std::string source_;
};

}  // namespace ilhedge
