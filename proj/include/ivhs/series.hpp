#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ivhs/errors.hpp"

namespace ivhs {

// ---------------------------------------------------------------------------
// Truncated Laurent series in one variable t over an exact field.
//
// Coefficients are tracked for exponents in (-inf, prec): everything below
// `lowest` is exactly zero, the stored window is [lowest, prec), and nothing
// is known from `prec` on. Arithmetic propagates `prec` conservatively.
// ---------------------------------------------------------------------------

template <class K>
class LaurentSeries {
  public:
    LaurentSeries() : lowest_(0), prec_(0) {}

    static LaurentSeries zero_to(int prec) {
        LaurentSeries s;
        s.lowest_ = prec;
        s.prec_ = prec;
        return s;
    }

    static LaurentSeries from_coeffs(int lowest, std::vector<K> coeffs, int prec) {
        LaurentSeries s;
        s.lowest_ = lowest;
        s.coeffs_ = std::move(coeffs);
        s.prec_ = prec;
        s.normalize();
        return s;
    }

    static LaurentSeries constant(const K& c, int prec) { return from_coeffs(0, {c}, prec); }

    // t^k
    static LaurentSeries power(const K& one, int k, int prec) { return from_coeffs(k, {one}, prec); }

    int precision() const { return prec_; }
    bool is_zero() const { return coeffs_.empty(); }

    // order of the first known nonzero coefficient; for the zero series this
    // is prec (nothing nonzero is known below prec)
    int order() const { return coeffs_.empty() ? prec_ : lowest_; }

    K coefficient(int e, const K& zero) const {
        if (e >= prec_)
            throw PrecisionExhausted("coefficient of t^" + std::to_string(e) + " beyond tracked precision " +
                                     std::to_string(prec_));
        if (e < lowest_ || e >= lowest_ + static_cast<int>(coeffs_.size())) return zero;
        return coeffs_[static_cast<std::size_t>(e - lowest_)];
    }

    // coefficient of t^{-1}; the repartition contract requires the pole window
    // to actually reach -1
    K residue(const K& zero) const {
        if (!(order() <= -1 && -1 <= prec_ - 1))
            throw Error("residue: window does not cover t^-1 (order " + std::to_string(order()) + ", precision " +
                        std::to_string(prec_) + ")");
        return coefficient(-1, zero);
    }

    LaurentSeries truncated(int new_prec) const {
        LaurentSeries s = *this;
        s.prec_ = std::min(prec_, new_prec);
        s.normalize();
        return s;
    }

    LaurentSeries shifted(int k) const {
        LaurentSeries s = *this;
        s.lowest_ += k;
        s.prec_ += k;
        return s;
    }

    LaurentSeries operator+(const LaurentSeries& o) const {
        int prec = std::min(prec_, o.prec_);
        int lo = std::min(order(), o.order());
        if (lo >= prec) return zero_to(prec);
        std::vector<K> c;
        c.reserve(static_cast<std::size_t>(prec - lo));
        const K zero = any_zero(o);
        for (int e = lo; e < prec; ++e) c.push_back(get_or_zero(e, zero) + o.get_or_zero(e, zero));
        return from_coeffs(lo, std::move(c), prec);
    }

    LaurentSeries operator-(const LaurentSeries& o) const { return *this + o.negated(); }

    LaurentSeries negated() const {
        LaurentSeries s = *this;
        for (auto& c : s.coeffs_) c = -c;
        return s;
    }

    LaurentSeries scaled(const K& k) const {
        LaurentSeries s = *this;
        for (auto& c : s.coeffs_) c = c * k;
        s.normalize();
        return s;
    }

    LaurentSeries operator*(const LaurentSeries& o) const {
        // known exponents: e < min(ord(a) + prec(b), ord(b) + prec(a))
        long prec_l = std::min(static_cast<long>(order()) + o.prec_, static_cast<long>(o.order()) + prec_);
        int prec = clamp_prec(prec_l);
        if (coeffs_.empty() || o.coeffs_.empty()) return zero_to(prec);
        int lo = lowest_ + o.lowest_;
        if (lo >= prec) return zero_to(prec);
        const K zero = any_zero(o);
        std::vector<K> c(static_cast<std::size_t>(prec - lo), zero);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
                long e = static_cast<long>(lowest_) + static_cast<long>(i) + o.lowest_ + static_cast<long>(j);
                if (e >= prec) break;
                c[static_cast<std::size_t>(e - lo)] += coeffs_[i] * o.coeffs_[j];
            }
        }
        return from_coeffs(lo, std::move(c), prec);
    }

    // multiplicative inverse; requires a known nonzero leading coefficient
    LaurentSeries inverted() const {
        if (coeffs_.empty()) throw Error("LaurentSeries: inverse of (truncated) zero");
        const int m = lowest_;
        const int rel = prec_ - m;  // relative precision carried through
        const K lead = coeffs_[0];
        const K lead_inv = lead.inv();
        const K zero = lead - lead;
        // b solves a*b = 1 with a = sum a_i t^{m+i}: recurrence on relative indices
        std::vector<K> b(static_cast<std::size_t>(rel), zero);
        b[0] = lead_inv;
        for (int k = 1; k < rel; ++k) {
            K acc = zero;
            for (int i = 1; i <= k; ++i) {
                K ai = (i < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(i)] : zero;
                if (!ai.is_zero()) acc += ai * b[static_cast<std::size_t>(k - i)];
            }
            b[static_cast<std::size_t>(k)] = -(acc * lead_inv);
        }
        return from_coeffs(-m, std::move(b), -m + rel);
    }

    LaurentSeries operator/(const LaurentSeries& o) const { return *this * o.inverted(); }

    // composition a(b(t)); requires ord(b) >= 1
    LaurentSeries compose(const LaurentSeries& b, const K& one) const {
        if (b.order() < 1) throw Error("LaurentSeries: compose requires ord >= 1");
        const K zero = one - one;
        const int bo = b.order();
        long prec_l = std::min(static_cast<long>(prec_) * bo,
                               static_cast<long>(order()) * bo + (b.prec_ - bo));
        int prec = clamp_prec(prec_l);
        if (coeffs_.empty()) return zero_to(prec);
        if (lowest_ < 0) {
            // negative part via the inverse of b
            LaurentSeries binv = b.inverted();
            LaurentSeries acc = zero_to(prec);
            LaurentSeries bp = constant(one, prec);  // b^e running power
            // negative exponents
            LaurentSeries bn = constant(one, prec);
            for (int e = -1; e >= lowest_; --e) {
                bn = (bn * binv).truncated(prec);
                K a = get_or_zero(e, zero);
                if (!a.is_zero()) acc = acc + bn.scaled(a);
            }
            for (int e = 0; e < prec_; ++e) {
                if (e > 0) bp = (bp * b).truncated(prec);
                K a = get_or_zero(e, zero);
                if (!a.is_zero()) acc = acc + bp.scaled(a);
            }
            return acc.truncated(prec);
        }
        // Horner from the top stored coefficient down to exponent lowest_
        LaurentSeries acc = zero_to(prec);
        for (int e = prec_ - 1; e >= lowest_; --e) {
            acc = (acc * b).truncated(prec);
            K a = get_or_zero(e, zero);
            if (!a.is_zero()) acc = acc + constant(a, prec);
        }
        // multiply by b^lowest_
        for (int i = 0; i < lowest_; ++i) acc = (acc * b).truncated(prec);
        return acc.truncated(prec);
    }

    bool operator==(const LaurentSeries& o) const {
        return lowest_ == o.lowest_ && prec_ == o.prec_ && coeffs_ == o.coeffs_;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += coeffs_[i].str() + "*t^" + std::to_string(lowest_ + static_cast<int>(i));
        }
        if (s.empty()) s = "0";
        return s + " + O(t^" + std::to_string(prec_) + ")";
    }

  private:
    K any_zero(const LaurentSeries& o) const {
        if (!coeffs_.empty()) return coeffs_[0] - coeffs_[0];
        if (!o.coeffs_.empty()) return o.coeffs_[0] - o.coeffs_[0];
        return K{};
    }
    K get_or_zero(int e, const K& zero) const {
        if (e < lowest_ || e >= lowest_ + static_cast<int>(coeffs_.size())) return zero;
        return coeffs_[static_cast<std::size_t>(e - lowest_)];
    }
    static int clamp_prec(long p) {
        if (p > 1 << 20) return 1 << 20;
        if (p < -(1 << 20)) return -(1 << 20);
        return static_cast<int>(p);
    }
    void normalize() {
        // drop anything at or beyond prec
        if (!coeffs_.empty()) {
            long stored_end = static_cast<long>(lowest_) + static_cast<long>(coeffs_.size());
            if (stored_end > prec_) {
                long keep = static_cast<long>(prec_) - lowest_;
                if (keep <= 0)
                    coeffs_.clear();
                else
                    coeffs_.resize(static_cast<std::size_t>(keep));
            }
        }
        // advance lowest past leading zeros
        std::size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
            lowest_ += static_cast<int>(lead);
        }
        // drop trailing zeros (they are implied)
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
        if (coeffs_.empty()) lowest_ = prec_;
    }

    int lowest_;
    std::vector<K> coeffs_;
    int prec_;
};

// d/dt; coefficient of t^{e-1} becomes e*c_e, precision drops by one
template <class F, class K = typename F::Elem>
LaurentSeries<K> series_derivative(const F& field, const LaurentSeries<K>& s) {
    int prec = s.precision() - 1;
    int lo = s.order();
    std::vector<K> out;
    for (int e = lo; e < s.precision(); ++e) out.push_back(s.coefficient(e, field.zero()) * field.from_int(e));
    return LaurentSeries<K>::from_coeffs(lo - 1, std::move(out), prec);
}

}  // namespace ivhs
