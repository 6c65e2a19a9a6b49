#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "rational.hpp"

namespace grassdyn {

/// Polynomial with exact rational coefficients, stored ascending by degree.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static RationalPolynomial constant(Rational v) { return RationalPolynomial({std::move(v)}); }

    const std::vector<Rational>& coefficients() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }

    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational evaluate(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    friend RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
        return RationalPolynomial(std::move(c));
    }

    friend RationalPolynomial operator-(const RationalPolynomial& a, const RationalPolynomial& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] - b.c_[i];
        return RationalPolynomial(std::move(c));
    }

    friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return RationalPolynomial();
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        return RationalPolynomial(std::move(c));
    }

    RationalPolynomial scaled(const Rational& s) const {
        std::vector<Rational> c = c_;
        for (auto& v : c) v = v * s;
        return RationalPolynomial(std::move(c));
    }

    /// Coefficients rendered as "p/q" strings, ascending, at least one entry.
    std::vector<std::string> coefficient_strings() const {
        if (c_.empty()) return {"0"};
        std::vector<std::string> out;
        out.reserve(c_.size());
        for (const auto& v : c_) out.push_back(v.to_string());
        return out;
    }

private:
    std::vector<Rational> c_;

    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
};

/// binom(i, n) as a polynomial in i: i(i-1)...(i-n+1) / n!, degree n,
/// leading coefficient 1/n!.
inline RationalPolynomial binomial_poly(int n) {
    if (n < 0) throw invalid_input("binomial_poly: negative order");
    RationalPolynomial p = RationalPolynomial::constant(Rational(1));
    for (int j = 0; j < n; ++j)
        p = p * RationalPolynomial({Rational(-j), Rational(1)}); // times (i - j)
    return p.scaled(Rational(BigInt(1), factorial_bigint(n)));
}

namespace detail {

struct DeltaCache {
    std::mutex mu;
    std::vector<RationalPolynomial> table; // table[n-1] = Delta_n
};

inline DeltaCache& delta_cache() {
    static DeltaCache cache;
    return cache;
}

} // namespace detail

/**
 * The combinatorial polynomial
 *
 *   Delta_n(i) = binom(i,n) - sum_{k=1}^{n-1} Delta_k(i) * binom(i, n-k),
 *
 * computed exactly. Delta_1(i) = i; Delta_n has degree n and leading
 * coefficient (-1)^(n+1)/n!. The recursion is triangular, so results are
 * memoised behind a lock; callers observe a pure function.
 */
inline RationalPolynomial delta_poly(int n) {
    if (n < 1) throw invalid_input("delta_poly: order must be >= 1");
    auto& cache = detail::delta_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    while (static_cast<int>(cache.table.size()) < n) {
        const int m = static_cast<int>(cache.table.size()) + 1;
        RationalPolynomial d = binomial_poly(m);
        for (int k = 1; k < m; ++k) d = d - cache.table[k - 1] * binomial_poly(m - k);
        cache.table.push_back(std::move(d));
    }
    return cache.table[n - 1];
}

struct TelescopingReport {
    bool hypothesis_met = true; // the identity is stated for i >= n
    bool exact_equal = true;
    std::vector<Rational> differences; // per k, L_k - (u_k + sum Delta_j(i) L_{k+j})
};

/**
 * Checks the telescoping identity: with L_k = sum_{j=0}^{n-k} binom(i,j) u_{k+j},
 * verify L_k = u_k + sum_{j=1}^{n-k} Delta_j(i) L_{k+j} for every k in 1..n,
 * entirely over exact rationals. i < n falls outside the identity's stated
 * hypothesis; it is still evaluated and the report flags the violation.
 */
inline TelescopingReport check_L_identity(const std::vector<Rational>& u, long long i) {
    const int n = static_cast<int>(u.size());
    if (n == 0) throw invalid_input("check_L_identity: empty sequence");
    TelescopingReport rep;
    rep.hypothesis_met = i >= n;
    std::vector<Rational> L(n + 1, Rational(0)); // 1-based
    for (int k = 1; k <= n; ++k) {
        Rational acc(0);
        for (int j = 0; j <= n - k; ++j)
            acc = acc + Rational(binomial_bigint(i, j), BigInt(1)) * u[k + j - 1];
        L[k] = acc;
    }
    const Rational ri(i);
    rep.differences.resize(n);
    for (int k = 1; k <= n; ++k) {
        Rational rhs = u[k - 1];
        for (int j = 1; j <= n - k; ++j) rhs = rhs + delta_poly(j).evaluate(ri) * L[k + j];
        rep.differences[k - 1] = L[k] - rhs;
        if (!rep.differences[k - 1].is_zero()) rep.exact_equal = false;
    }
    return rep;
}

/// sum_{k=1}^{n-1} binom(n,k) (-1)^(k+1): 0 for odd n, 2 for even n.
inline BigInt alternating_binomial_sum(int n) {
    BigInt acc = 0;
    for (int k = 1; k <= n - 1; ++k) {
        const BigInt term = binomial_bigint(n, k);
        acc = (k % 2 == 1) ? acc + term : acc - term;
    }
    return acc;
}

} // namespace grassdyn
