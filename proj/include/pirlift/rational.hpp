#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pirlift/errors.hpp"

namespace pirlift {

/// Exact rational arithmetic on 64-bit numerator/denominator.
/// Intermediates use __int128; anything that would not fit back into
/// 64 bits after reduction throws. Rates here never exceed ~10^12/10^12.
class Rational {
public:
    Rational() : n_(0), d_(1) {}
    Rational(long long n, long long d = 1) : n_(n), d_(d) {
        if (d_ == 0) throw ParamError("rational: zero denominator");
        normalize();
    }

    long long num() const { return n_; }
    long long den() const { return d_; }

    Rational operator+(const Rational& o) const {
        return from128((__int128)n_ * o.d_ + (__int128)o.n_ * d_, (__int128)d_ * o.d_);
    }
    Rational operator-(const Rational& o) const {
        return from128((__int128)n_ * o.d_ - (__int128)o.n_ * d_, (__int128)d_ * o.d_);
    }
    Rational operator*(const Rational& o) const {
        return from128((__int128)n_ * o.n_, (__int128)d_ * o.d_);
    }
    Rational operator/(const Rational& o) const {
        if (o.n_ == 0) throw ParamError("rational: division by zero");
        return from128((__int128)n_ * o.d_, (__int128)d_ * o.n_);
    }
    Rational operator-() const { return Rational(-n_, d_); }

    bool operator==(const Rational& o) const { return n_ == o.n_ && d_ == o.d_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return (__int128)n_ * o.d_ < (__int128)o.n_ * d_; }
    bool operator<=(const Rational& o) const { return (__int128)n_ * o.d_ <= (__int128)o.n_ * d_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    double to_double() const { return (double)n_ / (double)d_; }

    std::string to_string() const {
        return std::to_string(n_) + "/" + std::to_string(d_);
    }

    /// Fixed-point decimal string with round-half-even at `places` digits.
    std::string to_decimal(int places = 6) const {
        __int128 n = n_ < 0 ? -(__int128)n_ : (__int128)n_;
        __int128 d = d_;
        __int128 scale = 1;
        for (int i = 0; i < places; ++i) scale *= 10;
        __int128 scaled = n * scale;
        __int128 quot = scaled / d;
        __int128 rem = scaled % d;
        // round half to even on the exact remainder
        __int128 twice = rem * 2;
        if (twice > d || (twice == d && (quot & 1))) quot += 1;
        __int128 ip = quot / scale;
        __int128 fp = quot % scale;
        std::string frac;
        for (int i = 0; i < places; ++i) {
            frac.insert(frac.begin(), char('0' + (int)(fp % 10)));
            fp /= 10;
        }
        std::string out = (n_ < 0 && quot != 0) ? "-" : "";
        out += to_str128(ip);
        if (places > 0) out += "." + frac;
        return out;
    }

private:
    long long n_, d_;

    void normalize() {
        if (d_ < 0) { n_ = -n_; d_ = -d_; }
        long long g = std::gcd(n_ < 0 ? -n_ : n_, d_);
        if (g > 1) { n_ /= g; d_ /= g; }
        if (n_ == 0) d_ = 1;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }

    static Rational from128(__int128 n, __int128 d) {
        if (d == 0) throw ParamError("rational: zero denominator");
        __int128 g = gcd128(n, d);
        if (g > 1) { n /= g; d /= g; }
        if (d < 0) { n = -n; d = -d; }
        constexpr __int128 lim = (__int128)INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("rational: value exceeds 64-bit range");
        return Rational((long long)n, (long long)d);
    }

    static std::string to_str128(__int128 v) {
        if (v == 0) return "0";
        std::string s;
        bool neg = v < 0;
        if (neg) v = -v;
        while (v > 0) { s.insert(s.begin(), char('0' + (int)(v % 10))); v /= 10; }
        return neg ? "-" + s : s;
    }
};

/// b^e with overflow check, for closed-form rate formulas.
inline long long checked_pow_ll(long long b, int e) {
    __int128 acc = 1;
    for (int i = 0; i < e; ++i) {
        acc *= b;
        if (acc > INT64_MAX || acc < INT64_MIN)
            throw std::overflow_error("checked_pow_ll: overflow");
    }
    return (long long)acc;
}

} // namespace pirlift
