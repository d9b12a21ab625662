#pragma once

#include <cstdint>
#include <vector>

#include "pirlift/errors.hpp"

namespace pirlift {

/// Trial-division primality for desk-scale moduli.
inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; (std::uint64_t)d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// A validated prime modulus q, q < 2^16.
class FieldModulus {
public:
    explicit FieldModulus(std::uint32_t q) : q_(q) {
        if (q >= (1u << 16)) throw ParamError("modulus too large (need q < 2^16)");
        if (!is_prime_u32(q)) throw ParamError("modulus " + std::to_string(q) + " is not prime");
    }
    std::uint32_t value() const { return q_; }
    bool operator==(const FieldModulus& o) const { return q_ == o.q_; }

private:
    std::uint32_t q_;
};

// Raw canonical-residue helpers, used by the dense linear algebra.
inline std::uint32_t fp_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    std::uint32_t s = a + b;
    return s >= q ? s - q : s;
}
inline std::uint32_t fp_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    return a >= b ? a - b : a + q - b;
}
inline std::uint32_t fp_neg(std::uint32_t a, std::uint32_t q) {
    return a == 0 ? 0 : q - a;
}
inline std::uint32_t fp_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    return (std::uint32_t)(((std::uint64_t)a * b) % q);
}
inline std::uint32_t fp_reduce(long long v, std::uint32_t q) {
    long long r = v % (long long)q;
    if (r < 0) r += q;
    return (std::uint32_t)r;
}
inline std::uint32_t fp_pow(std::uint32_t a, std::uint64_t e, std::uint32_t q) {
    std::uint32_t acc = 1 % q;
    while (e) {
        if (e & 1) acc = fp_mul(acc, a, q);
        a = fp_mul(a, a, q);
        e >>= 1;
    }
    return acc;
}
inline std::uint32_t fp_inv(std::uint32_t a, std::uint32_t q) {
    if (a % q == 0) throw ParamError("division by zero in F_" + std::to_string(q));
    return fp_pow(a % q, q - 2, q); // Fermat; q is prime
}

/// Element of F_q, stored fully reduced. Immutable value type.
class Fp {
public:
    Fp() : v_(0), q_(0) {}
    Fp(long long v, std::uint32_t q) : q_(q) {
        if (q < 2) throw ParamError("element needs a modulus >= 2");
        v_ = fp_reduce(v, q);
    }

    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return q_; }

    Fp operator+(const Fp& o) const { check(o); return raw(fp_add(v_, o.v_, q_)); }
    Fp operator-(const Fp& o) const { check(o); return raw(fp_sub(v_, o.v_, q_)); }
    Fp operator*(const Fp& o) const { check(o); return raw(fp_mul(v_, o.v_, q_)); }
    Fp operator-() const { requireSet(); return raw(fp_neg(v_, q_)); }

    Fp inv() const {
        requireSet();
        return raw(fp_inv(v_, q_));
    }

    bool operator==(const Fp& o) const { return v_ == o.v_ && q_ == o.q_; }
    bool operator!=(const Fp& o) const { return !(*this == o); }

private:
    std::uint32_t v_, q_;

    Fp raw(std::uint32_t v) const {
        Fp e;
        e.v_ = v;
        e.q_ = q_;
        return e;
    }
    void requireSet() const {
        if (q_ == 0) throw ParamError("operation on default-constructed element");
    }
    void check(const Fp& o) const {
        requireSet();
        if (q_ != o.q_) throw ParamError("modulus mismatch");
    }
};

using FpVec = std::vector<Fp>;

inline FpVec make_vec(const std::vector<long long>& vals, std::uint32_t q) {
    FpVec v;
    v.reserve(vals.size());
    for (long long x : vals) v.emplace_back(x, q);
    return v;
}

/// <d, qv> in F_q.
inline Fp inner_product(const FpVec& d, const FpVec& qv) {
    if (d.size() != qv.size()) throw ParamError("inner_product: length mismatch");
    if (d.empty()) throw ParamError("inner_product: empty vectors");
    std::uint32_t q = d[0].modulus();
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].modulus() != q || qv[i].modulus() != q)
            throw ParamError("inner_product: modulus mismatch");
        acc = (acc + (std::uint64_t)d[i].value() * qv[i].value()) % q;
    }
    return Fp((long long)acc, q);
}

} // namespace pirlift
