#pragma once

namespace ilhedge {

// Strictly positive, finite price of one risky-token unit in numeraire units.
class Price {
public:
    explicit Price(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

// Snapshot of a constant-product liquidity deposit. The pool holds a risky
// token (amount x) and a numeraire token (amount y) with x*y = k and marginal
// price P = y/x. Capital is the entry value in numeraire units, c = 2*y.
class PoolPosition {
public:
    static PoolPosition from_amounts(double risky_amount, double numeraire_amount);
    static PoolPosition from_capital(double capital, double entry_price);
    // Cross-validates the quoted entry price against the reserve ratio
    // (relative tolerance 1e-9).
    static PoolPosition from_amounts_at_price(double risky_amount, double numeraire_amount,
                                              double entry_price);

    double risky_amount() const noexcept { return risky_amount_; }
    double numeraire_amount() const noexcept { return numeraire_amount_; }
    double entry_price() const noexcept { return entry_price_; }
    double invariant() const noexcept { return invariant_; }
    double capital() const noexcept { return capital_; }

private:
    PoolPosition(double risky, double numeraire, double entry);

    double risky_amount_;
    double numeraire_amount_;
    double entry_price_;
    double invariant_;
    double capital_;
};

struct Reserves {
    double risky;
    double numeraire;
};

// Reserves after arbitrageurs move the pool to price p: x = sqrt(k/p), y = sqrt(k*p).
Reserves reserves_at_price(const PoolPosition& pool, Price p);

// Value of the pooled position at price p: c * sqrt(p / P0).
double value_pool(const PoolPosition& pool, Price p);

// Value of statically holding the entry amounts at price p: (c/2) * (p/P0 + 1).
double value_hold(const PoolPosition& pool, Price p);

// Impermanent loss value_pool - value_hold, always <= 0 with equality at P0:
// c * (sqrt(p/P0) - (p/P0 + 1)/2).
double il(const PoolPosition& pool, Price p);

// d(il)/dp = (c / 2P0) * (sqrt(P0/p) - 1).
double il_slope(const PoolPosition& pool, Price p);

// d2(il)/dp2 = -c / (4 * sqrt(P0) * p^(3/2)), strictly negative.
double il_curvature(const PoolPosition& pool, Price p);

}  // namespace ilhedge
