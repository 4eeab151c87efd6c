#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ivhs/errors.hpp"
#include "ivhs/field.hpp"

namespace ivhs {

// ---------------------------------------------------------------------------
// Monomials in x, y, z. Canonical term order is graded lex with x > y > z,
// listed descending; every basis enumeration in the lab uses this order.
// ---------------------------------------------------------------------------

struct Mono {
    std::array<int, 3> e{0, 0, 0};

    int degree() const { return e[0] + e[1] + e[2]; }

    bool operator==(const Mono& o) const { return e == o.e; }

    // graded lex, *descending*: larger degree first, then larger e0, then e1
    bool operator<(const Mono& o) const {
        int da = degree(), db = o.degree();
        if (da != db) return da > db;
        if (e[0] != o.e[0]) return e[0] > o.e[0];
        return e[1] > o.e[1];
    }

    std::uint32_t key() const {
        return (static_cast<std::uint32_t>(e[0]) << 16) | (static_cast<std::uint32_t>(e[1]) << 8) |
               static_cast<std::uint32_t>(e[2]);
    }

    std::string str() const {
        static const char* names[3] = {"x", "y", "z"};
        std::string s;
        for (int i = 0; i < 3; ++i) {
            if (e[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += names[i];
            if (e[i] > 1) s += "^" + std::to_string(e[i]);
        }
        return s.empty() ? "1" : s;
    }
};

inline std::vector<Mono> monomials_of_degree(int n) {
    std::vector<Mono> out;
    for (int a = n; a >= 0; --a)
        for (int b = n - a; b >= 0; --b) out.push_back(Mono{{a, b, n - a - b}});
    return out;
}

inline int monomial_space_dim(int n) { return n < 0 ? 0 : (n + 1) * (n + 2) / 2; }

// index of a degree-n monomial within monomials_of_degree(n)
inline int monomial_index(int n, const Mono& m) {
    int a = m.e[0], b = m.e[1];
    // monomials with first exponent > a come first
    int before = 0;
    for (int aa = n; aa > a; --aa) before += n - aa + 1;
    return before + (n - a - b);
}

// ---------------------------------------------------------------------------
// Sparse trivariate polynomials.
// ---------------------------------------------------------------------------

template <class K>
class Poly3 {
  public:
    using Terms = std::map<Mono, K>;

    Poly3() = default;

    static Poly3 zero() { return Poly3(); }
    static Poly3 monomial(const Mono& m, const K& c) {
        Poly3 p;
        if (!c.is_zero()) p.terms_[m] = c;
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    int degree() const {
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    bool is_homogeneous() const {
        int d = -1;
        for (auto& [m, c] : terms_) {
            if (d < 0) d = m.degree();
            if (m.degree() != d) return false;
        }
        return true;
    }

    void add_term(const Mono& m, const K& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly3 operator+(const Poly3& o) const {
        Poly3 r = *this;
        for (auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Poly3 operator-(const Poly3& o) const {
        Poly3 r = *this;
        for (auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }
    Poly3 operator-() const {
        Poly3 r;
        for (auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    Poly3 operator*(const Poly3& o) const {
        Poly3 r;
        for (auto& [m1, c1] : terms_)
            for (auto& [m2, c2] : o.terms_)
                r.add_term(Mono{{m1.e[0] + m2.e[0], m1.e[1] + m2.e[1], m1.e[2] + m2.e[2]}}, c1 * c2);
        return r;
    }
    Poly3 scaled(const K& c) const {
        Poly3 r;
        if (c.is_zero()) return r;
        for (auto& [m, cc] : terms_) r.terms_[m] = cc * c;
        return r;
    }

    bool operator==(const Poly3& o) const { return terms_ == o.terms_; }

    K eval(const K& x, const K& y, const K& z, const K& one) const {
        // small powers, cached per call
        int d = std::max(0, degree());
        std::vector<K> px(d + 1, one), py(d + 1, one), pz(d + 1, one);
        for (int i = 1; i <= d; ++i) {
            px[i] = px[i - 1] * x;
            py[i] = py[i - 1] * y;
            pz[i] = pz[i - 1] * z;
        }
        K acc = one - one;
        for (auto& [m, c] : terms_) acc += c * px[m.e[0]] * py[m.e[1]] * pz[m.e[2]];
        return acc;
    }

    template <class F>
    Poly3 derivative(const F& field, int var) const {
        Poly3 r;
        for (auto& [m, c] : terms_) {
            if (m.e[var] == 0) continue;
            Mono mm = m;
            mm.e[var] -= 1;
            r.add_term(mm, c * field.from_int(m.e[var]));
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            std::string cs = c.str();
            if (cs == "1" && m.degree() > 0)
                s += m.str();
            else if (m.degree() == 0)
                s += cs;
            else
                s += cs + "*" + m.str();
        }
        return s;
    }

  private:
    Terms terms_;
};

// ---------------------------------------------------------------------------
// Dense univariate polynomials (restrictions to lines, residual factors).
// ---------------------------------------------------------------------------

template <class K>
class Poly1 {
  public:
    Poly1() = default;
    explicit Poly1(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly1 constant(const K& c) { return Poly1(std::vector<K>{c}); }

    const std::vector<K>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    K coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) throw Error("Poly1: coeff out of range");
        return c_[static_cast<std::size_t>(i)];
    }
    K coeff_or_zero(int i, const K& zero) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
        return c_[static_cast<std::size_t>(i)];
    }

    Poly1 operator+(const Poly1& o) const {
        std::vector<K> r(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < c_.size() && i < o.c_.size())
                r[i] = c_[i] + o.c_[i];
            else if (i < c_.size())
                r[i] = c_[i];
            else
                r[i] = o.c_[i];
        }
        return Poly1(std::move(r));
    }
    Poly1 operator-(const Poly1& o) const { return *this + o.scaled_neg(); }
    Poly1 scaled_neg() const {
        std::vector<K> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
        return Poly1(std::move(r));
    }
    Poly1 operator*(const Poly1& o) const {
        if (is_zero() || o.is_zero()) return Poly1();
        std::vector<K> r(c_.size() + o.c_.size() - 1, c_[0] - c_[0]);
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Poly1(std::move(r));
    }
    Poly1 scaled(const K& k) const {
        std::vector<K> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] * k;
        return Poly1(std::move(r));
    }

    K eval(const K& u, const K& zero) const {
        K acc = zero;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + *it;
        return acc;
    }

    // this = q*d + r with deg r < deg d
    std::pair<Poly1, Poly1> divmod(const Poly1& d) const {
        if (d.is_zero()) throw Error("Poly1: division by zero");
        std::vector<K> rem = c_;
        const int dd = d.degree();
        const K lead_inv = d.c_.back().inv();
        std::vector<K> q;
        if (static_cast<int>(rem.size()) - 1 >= dd) q.assign(rem.size() - d.c_.size() + 1, d.c_.back() - d.c_.back());
        for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
            if (rem[static_cast<std::size_t>(i)].is_zero()) continue;
            K f = rem[static_cast<std::size_t>(i)] * lead_inv;
            q[static_cast<std::size_t>(i - dd)] = f;
            for (int j = 0; j <= dd; ++j)
                rem[static_cast<std::size_t>(i - dd + j)] -= f * d.c_[static_cast<std::size_t>(j)];
        }
        return {Poly1(std::move(q)), Poly1(std::move(rem))};
    }

    template <class F>
    Poly1 derivative(const F& field) const {
        if (c_.size() <= 1) return Poly1();
        std::vector<K> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * field.from_int(static_cast<std::int64_t>(i));
        return Poly1(std::move(r));
    }

    static Poly1 gcd(Poly1 a, Poly1 b) {
        while (!b.is_zero()) {
            Poly1 r = a.divmod(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.is_zero()) a = a.scaled(a.c_.back().inv());  // monic
        return a;
    }

    template <class F>
    bool is_squarefree(const F& field) const {
        if (is_zero()) return false;
        if (degree() == 0) return true;
        return gcd(*this, derivative(field)).degree() == 0;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<K> c_;
};

// restriction of a trivariate form to the parametrized line u -> P + u*Q
template <class K>
Poly1<K> restrict_line(const Poly3<K>& f, const std::array<K, 3>& P, const std::array<K, 3>& Q, const K& zero,
                       const K& one) {
    int d = std::max(0, f.degree());
    // power tables for the three linear polynomials P_i + u Q_i
    std::array<std::vector<Poly1<K>>, 3> pw;
    for (int i = 0; i < 3; ++i) {
        pw[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(d + 1));
        pw[static_cast<std::size_t>(i)].push_back(Poly1<K>::constant(one));
        Poly1<K> lin(std::vector<K>{P[static_cast<std::size_t>(i)], Q[static_cast<std::size_t>(i)]});
        for (int e = 1; e <= d; ++e)
            pw[static_cast<std::size_t>(i)].push_back(pw[static_cast<std::size_t>(i)].back() * lin);
    }
    Poly1<K> acc;
    for (auto& [m, c] : f.terms()) {
        Poly1<K> term = pw[0][static_cast<std::size_t>(m.e[0])] * pw[1][static_cast<std::size_t>(m.e[1])] *
                        pw[2][static_cast<std::size_t>(m.e[2])];
        acc = acc + term.scaled(c);
    }
    (void)zero;
    return acc;
}

// ---------------------------------------------------------------------------
// Coordinates of homogeneous forms in the full monomial basis of one degree.
// ---------------------------------------------------------------------------

template <class K>
struct DegreeSpace {
    int n = 0;
    std::vector<Mono> monos;
    std::unordered_map<std::uint32_t, int> index;

    DegreeSpace() = default;
    explicit DegreeSpace(int degree) : n(degree), monos(monomials_of_degree(degree)) {
        for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i].key()] = static_cast<int>(i);
    }

    int dim() const { return static_cast<int>(monos.size()); }

    template <class F>
    std::vector<K> to_vec(const F& field, const Poly3<K>& p) const {
        std::vector<K> v(monos.size(), field.zero());
        for (auto& [m, c] : p.terms()) {
            auto it = index.find(m.key());
            if (it == index.end()) throw Error("DegreeSpace: polynomial is not homogeneous of degree " + std::to_string(n));
            v[static_cast<std::size_t>(it->second)] = c;
        }
        return v;
    }

    Poly3<K> from_vec(const std::vector<K>& v) const {
        Poly3<K> p;
        for (std::size_t i = 0; i < monos.size(); ++i)
            if (!v[i].is_zero()) p.add_term(monos[i], v[i]);
        return p;
    }
};

// ---------------------------------------------------------------------------
// Parsing: integer-coefficient monomial syntax like "x^6 + y^6 + 3*x*y*z^4".
// ---------------------------------------------------------------------------

template <class F>
Poly3<typename F::Elem> parse_poly(const F& field, const std::string& input) {
    using K = typename F::Elem;
    Poly3<K> out;
    std::size_t i = 0;
    const std::size_t n = input.size();
    auto skip_ws = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(input[i]))) ++i;
    };
    auto fail = [&](const std::string& why) {
        throw ParseError(why + " at position " + std::to_string(i) + " in polynomial '" + input + "'");
    };

    skip_ws();
    if (i >= n) fail("empty polynomial");
    bool first = true;
    while (true) {
        skip_ws();
        if (i >= n) break;
        int sign = 1;
        if (input[i] == '+' || input[i] == '-') {
            sign = input[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        skip_ws();

        std::int64_t coeff = 1;
        bool saw_number = false, saw_var = false;
        Mono m;
        while (true) {
            skip_ws();
            if (i < n && std::isdigit(static_cast<unsigned char>(input[i]))) {
                if (saw_number || saw_var) fail("unexpected number");
                std::int64_t v = 0;
                while (i < n && std::isdigit(static_cast<unsigned char>(input[i]))) {
                    v = v * 10 + (input[i] - '0');
                    if (v > (1LL << 40)) fail("coefficient too large");
                    ++i;
                }
                coeff = v;
                saw_number = true;
            } else if (i < n && (input[i] == 'x' || input[i] == 'y' || input[i] == 'z')) {
                int var = input[i] == 'x' ? 0 : (input[i] == 'y' ? 1 : 2);
                ++i;
                int exp = 1;
                skip_ws();
                if (i < n && input[i] == '^') {
                    ++i;
                    skip_ws();
                    if (i >= n || !std::isdigit(static_cast<unsigned char>(input[i]))) fail("expected exponent");
                    exp = 0;
                    while (i < n && std::isdigit(static_cast<unsigned char>(input[i]))) {
                        exp = exp * 10 + (input[i] - '0');
                        if (exp > 200) fail("exponent too large");
                        ++i;
                    }
                }
                m.e[static_cast<std::size_t>(var)] += exp;
                saw_var = true;
            } else {
                fail("expected coefficient or variable");
            }
            skip_ws();
            if (i < n && input[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        out.add_term(m, field.from_int(sign * coeff));
    }
    return out;
}

}  // namespace ivhs
