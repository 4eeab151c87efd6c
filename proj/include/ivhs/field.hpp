#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ivhs/errors.hpp"
#include "ivhs/rng.hpp"

namespace ivhs {

// ---------------------------------------------------------------------------
// Prime field F_p, p an odd prime below 2^15. Elements carry their modulus;
// mixed-modulus arithmetic is a programming error and asserts via Error.
// ---------------------------------------------------------------------------

class Fp {
  public:
    Fp() : v_(0), p_(0) {}
    Fp(std::uint64_t v, std::uint64_t p) : v_(v % p), p_(p) {}

    static Fp from_int(std::int64_t n, std::uint64_t p) {
        std::int64_t r = n % static_cast<std::int64_t>(p);
        if (r < 0) r += static_cast<std::int64_t>(p);
        return Fp(static_cast<std::uint64_t>(r), p);
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }

    Fp operator+(const Fp& o) const {
        match(o);
        std::uint64_t s = v_ + o.v_;
        if (s >= p_) s -= p_;
        return Fp::raw(s, p_);
    }
    Fp operator-(const Fp& o) const {
        match(o);
        return Fp::raw(v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_, p_);
    }
    Fp operator-() const { return Fp::raw(v_ == 0 ? 0 : p_ - v_, p_); }
    Fp operator*(const Fp& o) const {
        match(o);
        return Fp::raw((v_ * o.v_) % p_, p_);  // p < 2^15 so no overflow
    }
    Fp inv() const {
        if (v_ == 0) throw Error("Fp: inverse of zero");
        // extended Euclid
        std::int64_t a = static_cast<std::int64_t>(v_), m = static_cast<std::int64_t>(p_);
        std::int64_t x0 = 0, x1 = 1;
        while (a > 1) {
            std::int64_t q = a / m;
            std::int64_t t = m;
            m = a % m;
            a = t;
            t = x0;
            x0 = x1 - q * x0;
            x1 = t;
        }
        if (x1 < 0) x1 += static_cast<std::int64_t>(p_);
        return Fp::raw(static_cast<std::uint64_t>(x1), p_);
    }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    bool operator==(const Fp& o) const { return v_ == o.v_ && p_ == o.p_; }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(v_); }

  private:
    static Fp raw(std::uint64_t v, std::uint64_t p) {
        Fp e;
        e.v_ = v;
        e.p_ = p;
        return e;
    }
    void match(const Fp& o) const {
        if (p_ != o.p_) throw Error("Fp: mixed moduli " + std::to_string(p_) + "/" + std::to_string(o.p_));
    }
    std::uint64_t v_, p_;
};

// ---------------------------------------------------------------------------
// Exact rationals on top of GMP.
// ---------------------------------------------------------------------------

class Rat {
  public:
    Rat() : q_(0) {}
    explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    Rat(std::int64_t num, std::int64_t den) : q_(static_cast<long>(num), static_cast<long>(den)) {
        q_.canonicalize();
    }

    static Rat from_int(std::int64_t n) { return Rat(n, 1); }

    bool is_zero() const { return q_ == 0; }

    Rat operator+(const Rat& o) const { return Rat(mpq_class(q_ + o.q_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(q_ - o.q_)); }
    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(q_ * o.q_)); }
    Rat inv() const {
        if (is_zero()) throw Error("Rat: inverse of zero");
        return Rat(mpq_class(1 / q_));
    }
    Rat operator/(const Rat& o) const { return *this * o.inv(); }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    bool operator==(const Rat& o) const { return q_ == o.q_; }
    bool operator!=(const Rat& o) const { return q_ != o.q_; }

    std::string str() const { return q_.get_str(); }

  private:
    mpq_class q_;
};

// ---------------------------------------------------------------------------
// Field descriptors. These are what gets threaded through the construction
// code; elements themselves stay plain values.
// ---------------------------------------------------------------------------

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct FpField {
    using Elem = Fp;
    std::uint64_t p;

    explicit FpField(std::uint64_t p_) : p(p_) {
        if (p < 3 || p > 32749 || !is_prime_u64(p) || p % 2 == 0)
            throw Error("FpField: modulus must be an odd prime in [3, 32749], got " + std::to_string(p));
    }

    Fp zero() const { return Fp(0, p); }
    Fp one() const { return Fp(1, p); }
    Fp from_int(std::int64_t n) const { return Fp::from_int(n, p); }
    Fp random(Rng& rng) const { return Fp(rng.below(p), p); }
    Fp random_nonzero(Rng& rng) const { return Fp(1 + rng.below(p - 1), p); }

    bool finite() const { return true; }
    std::uint64_t size() const { return p; }
    Fp element(std::uint64_t i) const { return Fp(i, p); }

    std::string describe() const { return "Fp:" + std::to_string(p); }
};

struct QQField {
    using Elem = Rat;

    Rat zero() const { return Rat(); }
    Rat one() const { return Rat::from_int(1); }
    Rat from_int(std::int64_t n) const { return Rat::from_int(n); }
    // small-height random rationals keep intermediate sizes sane
    Rat random(Rng& rng) const {
        return Rat(static_cast<std::int64_t>(rng.below(2001)) - 1000, 1 + static_cast<std::int64_t>(rng.below(7)));
    }
    Rat random_nonzero(Rng& rng) const {
        Rat r = random(rng);
        while (r.is_zero()) r = random(rng);
        return r;
    }

    bool finite() const { return false; }
    std::uint64_t size() const { return 0; }
    Rat element(std::uint64_t) const { throw Error("QQField: not enumerable"); }

    std::string describe() const { return "QQ"; }
};

}  // namespace ivhs
