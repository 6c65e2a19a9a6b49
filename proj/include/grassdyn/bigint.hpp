#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "errors.hpp"

namespace grassdyn {

/**
 * Arbitrary-precision signed integer, sign-magnitude over 32-bit limbs.
 *
 * Only what the exact combinatorics needs: ring arithmetic, division with
 * remainder, gcd, decimal conversion. Operands stay a few hundred bits at
 * desk scale, so schoolbook algorithms everywhere.
 */
class BigInt {
public:
    BigInt() = default;

    BigInt(long long v) { // NOLINT: implicit by design, mirrors integer literals
        if (v < 0) {
            negative_ = true;
            // careful with LLONG_MIN
            unsigned long long m = static_cast<unsigned long long>(-(v + 1)) + 1ull;
            push_u64(m);
        } else {
            push_u64(static_cast<unsigned long long>(v));
        }
        trim();
    }

    static BigInt from_string(const std::string& s) {
        BigInt r;
        std::size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = (s[i] == '-');
            ++i;
        }
        if (i >= s.size()) throw parse_error("BigInt: empty numeral");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw parse_error("BigInt: bad digit in numeral");
            r = r.mul_small(10);
            r = r.add_small(static_cast<std::uint32_t>(s[i] - '0'));
        }
        r.negative_ = neg && !r.is_zero();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool negative() const { return negative_; }
    int signum() const { return is_zero() ? 0 : (negative_ ? -1 : 1); }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.negative_ = !r.negative_;
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.negative_ = false;
        return r;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }

    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.negative_ != b.negative_) return a.negative_;
        const int c = cmp_mag(a.limbs_, b.limbs_);
        return a.negative_ ? c > 0 : c < 0;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.negative_ == b.negative_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_;
            r.trim();
            return r;
        }
        const int c = cmp_mag(a.limbs_, b.limbs_);
        BigInt r;
        if (c == 0) return r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.negative_ = b.negative_;
        }
        r.trim();
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.is_zero() || b.is_zero()) return r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                    r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.limbs_.size();
            while (carry) {
                std::uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.negative_ = a.negative_ != b.negative_;
        r.trim();
        return r;
    }

    /// Truncated quotient and remainder (remainder keeps the dividend sign).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw invalid_input("BigInt: division by zero");
        q = BigInt();
        r = BigInt();
        if (cmp_mag(a.limbs_, b.limbs_) < 0) {
            r = a;
            return;
        }
        if (b.limbs_.size() == 1) {
            // Single-limb divisor: one linear pass.
            const std::uint64_t d = b.limbs_[0];
            BigInt quo;
            quo.limbs_.assign(a.limbs_.size(), 0);
            std::uint64_t rem = 0;
            for (std::size_t i = a.limbs_.size(); i-- > 0;) {
                const std::uint64_t v = (rem << 32) | a.limbs_[i];
                quo.limbs_[i] = static_cast<std::uint32_t>(v / d);
                rem = v % d;
            }
            quo.trim();
            quo.negative_ = (a.negative_ != b.negative_) && !quo.is_zero();
            q = quo;
            r = BigInt(static_cast<long long>(rem));
            r.negative_ = a.negative_ && !r.is_zero();
            return;
        }
        // Knuth algorithm D on 32-bit limbs.
        const int s = [&] {
            int c = 0;
            std::uint32_t top = b.limbs_.back();
            while (!(top & 0x80000000u)) {
                top <<= 1;
                ++c;
            }
            return c;
        }();
        const auto shl = [&](const std::vector<std::uint32_t>& x, bool extend) {
            std::vector<std::uint32_t> y(x.size() + (extend ? 1 : 0), 0);
            for (std::size_t i = 0; i < x.size(); ++i) {
                y[i] |= s ? (x[i] << s) : x[i];
                if (s && i + 1 < y.size()) y[i + 1] = x[i] >> (32 - s);
            }
            return y;
        };
        std::vector<std::uint32_t> u = shl(a.limbs_, true);
        const std::vector<std::uint32_t> v = shl(b.limbs_, false);
        const std::size_t n = v.size(), m = u.size() - n - 1;
        std::vector<std::uint32_t> quo(m + 1, 0);
        const std::uint64_t base = 0x100000000ull;
        for (std::size_t j = m + 1; j-- > 0;) {
            const std::uint64_t num =
                (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
            std::uint64_t qhat = num / v[n - 1];
            std::uint64_t rhat = num % v[n - 1];
            while (qhat >= base ||
                   qhat * v[n - 2] > base * rhat + u[j + n - 2]) {
                --qhat;
                rhat += v[n - 1];
                if (rhat >= base) break;
            }
            // multiply-subtract qhat * v from u[j .. j+n]
            std::int64_t borrow = 0;
            std::uint64_t carry = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t p = qhat * v[i] + carry;
                carry = p >> 32;
                const std::int64_t t =
                    static_cast<std::int64_t>(u[i + j]) - static_cast<std::int64_t>(p & 0xffffffffull) - borrow;
                u[i + j] = static_cast<std::uint32_t>(t);
                borrow = t < 0 ? 1 : 0;
            }
            const std::int64_t t =
                static_cast<std::int64_t>(u[j + n]) - static_cast<std::int64_t>(carry) - borrow;
            u[j + n] = static_cast<std::uint32_t>(t);
            if (t < 0) {
                // qhat was one too large: add v back
                --qhat;
                std::uint64_t c2 = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const std::uint64_t sum = static_cast<std::uint64_t>(u[i + j]) + v[i] + c2;
                    u[i + j] = static_cast<std::uint32_t>(sum);
                    c2 = sum >> 32;
                }
                u[j + n] = static_cast<std::uint32_t>(u[j + n] + c2);
            }
            quo[j] = static_cast<std::uint32_t>(qhat);
        }
        BigInt qq, rr;
        qq.limbs_ = std::move(quo);
        qq.trim();
        rr.limbs_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            rr.limbs_[i] = s ? ((u[i] >> s) | (i + 1 < n + 1 ? (static_cast<std::uint64_t>(u[i + 1]) << (32 - s)) & 0xffffffffull : 0))
                             : u[i];
        rr.trim();
        qq.negative_ = (a.negative_ != b.negative_) && !qq.is_zero();
        rr.negative_ = a.negative_ && !rr.is_zero();
        q = std::move(qq);
        r = std::move(rr);
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }

    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.negative_ = false;
        b.negative_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<std::uint32_t> chunks; // base 10^9, little endian
        std::vector<std::uint32_t> cur = limbs_;
        while (!cur.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = cur.size(); i-- > 0;) {
                std::uint64_t v = (rem << 32) | cur[i];
                cur[i] = static_cast<std::uint32_t>(v / 1000000000ull);
                rem = v % 1000000000ull;
            }
            chunks.push_back(static_cast<std::uint32_t>(rem));
            while (!cur.empty() && cur.back() == 0) cur.pop_back();
        }
        std::string s = negative_ ? "-" : "";
        s += std::to_string(chunks.back());
        for (std::size_t i = chunks.size() - 1; i-- > 0;) {
            std::string part = std::to_string(chunks[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }

    double to_double() const {
        double v = 0.0;
        for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
        return negative_ ? -v : v;
    }

    /// Exact value when it fits a long long, else throws.
    long long to_ll() const {
        if (limbs_.size() > 2) throw invalid_input("BigInt: value exceeds long long");
        unsigned long long m = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) m = (m << 32) | limbs_[i];
        if (m > 0x7fffffffffffffffull) throw invalid_input("BigInt: value exceeds long long");
        long long v = static_cast<long long>(m);
        return negative_ ? -v : v;
    }

private:
    bool negative_ = false;
    std::vector<std::uint32_t> limbs_; // little endian, empty means zero

    void push_u64(unsigned long long m) {
        limbs_.clear();
        while (m) {
            limbs_.push_back(static_cast<std::uint32_t>(m));
            m >>= 32;
        }
    }

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) negative_ = false;
    }

    bool bit(std::size_t i) const {
        const std::size_t w = i / 32;
        if (w >= limbs_.size()) return false;
        return (limbs_[w] >> (i % 32)) & 1u;
    }

    BigInt shl1() const {
        BigInt r;
        r.limbs_.assign(limbs_.size() + 1, 0);
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            r.limbs_[i] |= limbs_[i] << 1;
            r.limbs_[i + 1] = limbs_[i] >> 31;
        }
        r.negative_ = negative_;
        r.trim();
        return r;
    }

    BigInt mul_small(std::uint32_t f) const {
        BigInt r;
        std::uint64_t carry = 0;
        r.limbs_.reserve(limbs_.size() + 1);
        for (std::uint32_t limb : limbs_) {
            std::uint64_t cur = static_cast<std::uint64_t>(limb) * f + carry;
            r.limbs_.push_back(static_cast<std::uint32_t>(cur));
            carry = cur >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
        r.negative_ = negative_;
        r.trim();
        return r;
    }

    BigInt add_small(std::uint32_t v) const {
        BigInt r = *this;
        std::uint64_t carry = v;
        for (std::size_t i = 0; carry && i < r.limbs_.size(); ++i) {
            std::uint64_t cur = r.limbs_[i] + carry;
            r.limbs_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r;
        r.reserve(std::max(a.size(), b.size()) + 1);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
            std::uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r.push_back(static_cast<std::uint32_t>(cur));
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r = a;
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            borrow = 0;
            if (cur < 0) {
                cur += 0x100000000ll;
                borrow = 1;
            }
            r[i] = static_cast<std::uint32_t>(cur);
        }
        return r;
    }
};

inline BigInt factorial_bigint(long long n) {
    BigInt r = 1;
    for (long long i = 2; i <= n; ++i) r = r * BigInt(i);
    return r;
}

/// Exact binomial coefficient; zero outside 0 <= k <= n.
inline BigInt binomial_bigint(long long n, long long k) {
    if (k < 0 || k > n) return BigInt(0);
    k = std::min(k, n - k);
    BigInt num = 1;
    for (long long j = 1; j <= k; ++j) {
        num = num * BigInt(n - k + j);
        num = num / BigInt(j); // exact at every step by the hockey-stick property
    }
    return num;
}

} // namespace grassdyn
