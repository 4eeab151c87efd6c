#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivhs/errors.hpp"
#include "ivhs/linalg.hpp"
#include "ivhs/poly.hpp"
#include "ivhs/rng.hpp"
#include "ivhs/series.hpp"

namespace ivhs {

enum class Smoothness { Exhaustive, Sampled, Trusted };

inline std::string smoothness_name(Smoothness s) {
    switch (s) {
        case Smoothness::Exhaustive: return "exhaustive";
        case Smoothness::Sampled: return "sampled";
        default: return "trusted";
    }
}

// Affine charts: chart c sets coordinate c to 1; the remaining coordinates in
// cyclic order are (a, b). In every chart the adjoint m-form attached to A is
//   A (da)^m / G_b^m  =  (-1)^m A (db)^m / G_a^m
// where G is the affinized curve equation.
inline std::pair<int, int> chart_affine_vars(int chart) {
    switch (chart) {
        case 2: return {0, 1};  // z = 1: (x, y)
        case 0: return {1, 2};  // x = 1: (y, z)
        default: return {2, 0};  // y = 1: (z, x)
    }
}

template <class K>
std::array<K, 3> chart_to_xyz(int chart, const K& a, const K& b, const K& one) {
    std::array<K, 3> p{one, one, one};
    auto [ia, ib] = chart_affine_vars(chart);
    p[static_cast<std::size_t>(ia)] = a;
    p[static_cast<std::size_t>(ib)] = b;
    p[static_cast<std::size_t>(chart)] = one;
    return p;
}

template <class K>
struct CurvePoint {
    std::array<K, 3> coords;  // normalized: last nonzero coordinate is 1
    int chart = 2;            // which coordinate equals 1
    int uniformizer = 0;      // 0: t = a - a0, 1: t = b - b0

    K affine_a() const { return coords[static_cast<std::size_t>(chart_affine_vars(chart).first)]; }
    K affine_b() const { return coords[static_cast<std::size_t>(chart_affine_vars(chart).second)]; }

    std::string str() const {
        return "(" + coords[0].str() + ":" + coords[1].str() + ":" + coords[2].str() + ")";
    }
    bool operator==(const CurvePoint& o) const { return coords == o.coords; }
};

// ---------------------------------------------------------------------------
// Basis of H^0(mK) realized by adjoint forms of degree m(d-3): the full
// monomial space modulo F * (forms of degree m(d-3) - d), with a deterministic
// graded-lex pivot complement.
// ---------------------------------------------------------------------------

template <class K>
struct MFormBasis {
    int m = 1;
    int degree = 0;            // m(d-3)
    DegreeSpace<K> space;      // ambient monomial coordinates
    Mat<K> fmult_rref;         // RREF basis of the F-multiple subspace
    std::vector<int> fmult_pivots;
    std::vector<int> complement;  // monomial indices forming the H^0(mK) basis

    int dim() const { return static_cast<int>(complement.size()); }

    const Mono& monomial(int i) const { return space.monos[static_cast<std::size_t>(complement[static_cast<std::size_t>(i)])]; }

    template <class F>
    Vec<K> reduce_vec(const F& field, Vec<K> v) const {
        for (int i = 0; i < fmult_rref.rows(); ++i) {
            K c = v[static_cast<std::size_t>(fmult_pivots[static_cast<std::size_t>(i)])];
            if (c.is_zero()) continue;
            for (int j = 0; j < fmult_rref.cols(); ++j) v[static_cast<std::size_t>(j)] -= c * fmult_rref.at(i, j);
        }
        Vec<K> out;
        out.reserve(complement.size());
        for (int idx : complement) out.push_back(v[static_cast<std::size_t>(idx)]);
        (void)field;
        return out;
    }

    template <class F>
    Vec<K> reduce(const F& field, const Poly3<K>& p) const {
        if (p.is_zero()) return Vec<K>(complement.size(), field.zero());
        return reduce_vec(field, space.to_vec(field, p));
    }

    Poly3<K> form(const Vec<K>& coords) const {
        if (coords.size() != complement.size()) throw Error("MFormBasis::form: coordinate size mismatch");
        Poly3<K> p;
        for (std::size_t i = 0; i < complement.size(); ++i)
            if (!coords[i].is_zero())
                p.add_term(space.monos[static_cast<std::size_t>(complement[i])], coords[i]);
        return p;
    }
};

// ---------------------------------------------------------------------------
// PlaneCurve: a smooth plane model together with its pluricanonical bases.
// ---------------------------------------------------------------------------

template <class F>
class PlaneCurve {
  public:
    using K = typename F::Elem;

    const F field;
    const Poly3<K> poly;
    const int d;
    const int g;
    const Smoothness smoothness;

    const Poly3<K>& partial(int var) const { return partials_[static_cast<std::size_t>(var)]; }

    // affinized equation in chart c, expressed in the (a, b) variables of that
    // chart but stored as a Poly3 with the chart variable's exponent zeroed
    const Poly3<K>& affine_eq(int chart) const { return affine_[static_cast<std::size_t>(chart)]; }
    const Poly3<K>& affine_da(int chart) const { return affine_da_[static_cast<std::size_t>(chart)]; }
    const Poly3<K>& affine_db(int chart) const { return affine_db_[static_cast<std::size_t>(chart)]; }

    const MFormBasis<K>& mform(int m) const {
        auto it = mforms_.find(m);
        if (it == mforms_.end()) throw Error("mform basis not built for m=" + std::to_string(m));
        return it->second;
    }

    int h0K() const { return mform(1).dim(); }
    int h0(int m) const { return mform(m).dim(); }

    K eval(const std::array<K, 3>& p) const { return poly.eval(p[0], p[1], p[2], field.one()); }
    K eval_partial(int var, const std::array<K, 3>& p) const {
        return partials_[static_cast<std::size_t>(var)].eval(p[0], p[1], p[2], field.one());
    }

    bool on_curve(const std::array<K, 3>& p) const { return eval(p).is_zero(); }

    std::string canonical_id() const { return field.describe() + "|" + poly.str(); }
    std::uint64_t hash() const { return fnv1a(canonical_id()); }

    // internal: constructed via build_curve
    PlaneCurve(F f, Poly3<K> F_, int d_, int g_, Smoothness s, std::array<Poly3<K>, 3> partials,
               std::array<Poly3<K>, 3> affine, std::array<Poly3<K>, 3> affine_da, std::array<Poly3<K>, 3> affine_db,
               std::map<int, MFormBasis<K>> mforms)
        : field(f),
          poly(std::move(F_)),
          d(d_),
          g(g_),
          smoothness(s),
          partials_(std::move(partials)),
          affine_(std::move(affine)),
          affine_da_(std::move(affine_da)),
          affine_db_(std::move(affine_db)),
          mforms_(std::move(mforms)) {}

  private:
    std::array<Poly3<K>, 3> partials_;
    std::array<Poly3<K>, 3> affine_;
    std::array<Poly3<K>, 3> affine_da_;
    std::array<Poly3<K>, 3> affine_db_;
    std::map<int, MFormBasis<K>> mforms_;
};

namespace detail {

template <class F, class K = typename F::Elem>
Poly3<K> affinize(const F& field, const Poly3<K>& f, int chart) {
    Poly3<K> out;
    for (auto& [m, c] : f.terms()) {
        Mono mm = m;
        mm.e[static_cast<std::size_t>(chart)] = 0;
        out.add_term(mm, c);
    }
    (void)field;
    return out;
}

// complement basis of F * (degree n - d forms) inside degree-n forms; the
// generic engine behind both H^0(mK) bases and Mittag-Leffler numerators
template <class F, class K = typename F::Elem>
MFormBasis<K> build_fquotient(const F& field, const Poly3<K>& curve_poly, int d, int n) {
    MFormBasis<K> b;
    b.m = 0;
    b.degree = n;
    b.space = DegreeSpace<K>(b.degree);
    const int lower = b.degree - d;
    if (lower < 0) {
        b.fmult_rref = Mat<K>(0, b.space.dim(), field.zero());
        for (int i = 0; i < b.space.dim(); ++i) b.complement.push_back(i);
        return b;
    }
    std::vector<Vec<K>> rows;
    for (const Mono& mu : monomials_of_degree(lower)) {
        Poly3<K> prod = curve_poly * Poly3<K>::monomial(mu, field.one());
        rows.push_back(b.space.to_vec(field, prod));
    }
    auto rr = rref(Mat<K>::from_rows(rows, b.space.dim(), field.zero()));
    b.fmult_pivots = rr.pivots;
    b.fmult_rref = Mat<K>(rr.rank, b.space.dim(), field.zero());
    for (int i = 0; i < rr.rank; ++i)
        for (int j = 0; j < b.space.dim(); ++j) b.fmult_rref.at(i, j) = rr.reduced.at(i, j);
    std::vector<bool> is_pivot(static_cast<std::size_t>(b.space.dim()), false);
    for (int p : rr.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    for (int i = 0; i < b.space.dim(); ++i)
        if (!is_pivot[static_cast<std::size_t>(i)]) b.complement.push_back(i);
    return b;
}

template <class F, class K = typename F::Elem>
MFormBasis<K> build_mform(const F& field, const Poly3<K>& curve_poly, int d, int m) {
    MFormBasis<K> b = build_fquotient(field, curve_poly, d, m * (d - 3));
    b.m = m;
    return b;
}

}  // namespace detail

// normalize projective coordinates: last nonzero coordinate scaled to 1
template <class K>
std::array<K, 3> normalize_point(std::array<K, 3> p) {
    for (int i = 2; i >= 0; --i) {
        if (!p[static_cast<std::size_t>(i)].is_zero()) {
            K inv = p[static_cast<std::size_t>(i)].inv();
            for (auto& c : p) c = c * inv;
            return p;
        }
    }
    throw Error("normalize_point: zero vector");
}

// chart and uniformizer selection; prefers t = a when G_b(p) != 0
template <class F, class K = typename F::Elem>
CurvePoint<K> make_curve_point(const PlaneCurve<F>& C, std::array<K, 3> coords) {
    coords = normalize_point(coords);
    if (!C.on_curve(coords)) throw Error("make_curve_point: not on the curve");
    CurvePoint<K> pt;
    pt.coords = coords;
    for (int i = 2; i >= 0; --i)
        if (!coords[static_cast<std::size_t>(i)].is_zero()) {
            pt.chart = i;
            break;
        }
    auto [ia, ib] = chart_affine_vars(pt.chart);
    K gb = C.eval_partial(ib, coords);
    K ga = C.eval_partial(ia, coords);
    if (!gb.is_zero())
        pt.uniformizer = 0;
    else if (!ga.is_zero())
        pt.uniformizer = 1;
    else
        throw ChartFailure("both affine partials vanish at " + pt.str());
    return pt;
}

// ---------------------------------------------------------------------------
// build_curve
// ---------------------------------------------------------------------------

template <class F, class K = typename F::Elem>
PlaneCurve<F> build_curve(const F& field, const Poly3<K>& input, Smoothness requested = Smoothness::Exhaustive) {
    if (input.is_zero() || !input.is_homogeneous()) throw NotHomogeneous("curve polynomial must be homogeneous and nonzero");
    const int d = input.degree();
    if (d < 4) throw DegreeTooSmall("curve degree must be >= 4, got " + std::to_string(d));
    const int g = (d - 1) * (d - 2) / 2;

    std::array<Poly3<K>, 3> partials{input.derivative(field, 0), input.derivative(field, 1),
                                     input.derivative(field, 2)};

    // irreducibility screen on random lines: any identically-zero restriction
    // certifies a linear factor; all-restrictions-non-squarefree flags a
    // repeated factor
    {
        Rng rng = Rng(fnv1a("irreducibility|" + input.str())).derive("lines");
        int squarefree_hits = 0;
        const int trials = 8;
        for (int t = 0; t < trials; ++t) {
            std::array<K, 3> P, Q;
            for (int i = 0; i < 3; ++i) {
                P[static_cast<std::size_t>(i)] = field.random(rng);
                Q[static_cast<std::size_t>(i)] = field.random(rng);
            }
            Poly1<K> r = restrict_line(input, P, Q, field.zero(), field.one());
            if (r.is_zero()) throw SingularCurve("line " + P[0].str() + ",.. lies on the curve (reducible)");
            if (r.degree() == d && r.is_squarefree(field)) ++squarefree_hits;
        }
        if (squarefree_hits == 0)
            throw SingularCurve("no squarefree line section found (repeated factor suspected)");
    }

    // smoothness
    Smoothness effective = requested;
    if (requested == Smoothness::Exhaustive) {
        if (!field.finite() || field.size() > 1009) effective = Smoothness::Sampled;
    }
    if (effective == Smoothness::Exhaustive) {
        const std::uint64_t p = field.size();
        auto singular_at = [&](const std::array<K, 3>& pt) {
            return partials[0].eval(pt[0], pt[1], pt[2], field.one()).is_zero() &&
                   partials[1].eval(pt[0], pt[1], pt[2], field.one()).is_zero() &&
                   partials[2].eval(pt[0], pt[1], pt[2], field.one()).is_zero();
        };
        for (std::uint64_t xi = 0; xi < p; ++xi) {
            K x = field.element(xi);
            // F(x, y, 1) as univariate in y
            Poly1<K> fy = restrict_line(input, std::array<K, 3>{x, field.zero(), field.one()},
                                        std::array<K, 3>{field.zero(), field.one(), field.zero()}, field.zero(),
                                        field.one());
            for (std::uint64_t yi = 0; yi < p; ++yi) {
                K y = field.element(yi);
                if (!fy.eval(y, field.zero()).is_zero()) continue;
                std::array<K, 3> pt{x, y, field.one()};
                if (singular_at(pt)) throw SingularCurve(pt[0].str() + ":" + pt[1].str() + ":1");
            }
        }
        for (std::uint64_t xi = 0; xi < p; ++xi) {
            K x = field.element(xi);
            std::array<K, 3> pt{x, field.one(), field.zero()};
            if (input.eval(pt[0], pt[1], pt[2], field.one()).is_zero() && singular_at(pt))
                throw SingularCurve(pt[0].str() + ":1:0");
        }
        std::array<K, 3> pt{field.one(), field.zero(), field.zero()};
        if (input.eval(pt[0], pt[1], pt[2], field.one()).is_zero() && singular_at(pt))
            throw SingularCurve("1:0:0");
    } else if (effective == Smoothness::Sampled) {
        // rational points cut by random lines must be smooth
        Rng rng = Rng(fnv1a("smoothness|" + input.str())).derive("sections");
        auto singular_at = [&](const std::array<K, 3>& pt) {
            return partials[0].eval(pt[0], pt[1], pt[2], field.one()).is_zero() &&
                   partials[1].eval(pt[0], pt[1], pt[2], field.one()).is_zero() &&
                   partials[2].eval(pt[0], pt[1], pt[2], field.one()).is_zero();
        };
        if (field.finite()) {
            const std::uint64_t p = field.size();
            for (int t = 0; t < 1000; ++t) {
                std::array<K, 3> P, Q;
                for (int i = 0; i < 3; ++i) {
                    P[static_cast<std::size_t>(i)] = field.random(rng);
                    Q[static_cast<std::size_t>(i)] = field.random(rng);
                }
                Poly1<K> r = restrict_line(input, P, Q, field.zero(), field.one());
                if (r.is_zero()) throw SingularCurve("line section identically zero");
                for (std::uint64_t ui = 0; ui < p; ++ui) {
                    K u = field.element(ui);
                    if (!r.eval(u, field.zero()).is_zero()) continue;
                    std::array<K, 3> pt{P[0] + u * Q[0], P[1] + u * Q[1], P[2] + u * Q[2]};
                    if (singular_at(pt))
                        throw SingularCurve(pt[0].str() + ":" + pt[1].str() + ":" + pt[2].str());
                }
            }
        }
    }

    std::array<Poly3<K>, 3> affine, affine_da, affine_db;
    for (int c = 0; c < 3; ++c) {
        affine[static_cast<std::size_t>(c)] = detail::affinize(field, input, c);
        auto [ia, ib] = chart_affine_vars(c);
        affine_da[static_cast<std::size_t>(c)] = affine[static_cast<std::size_t>(c)].derivative(field, ia);
        affine_db[static_cast<std::size_t>(c)] = affine[static_cast<std::size_t>(c)].derivative(field, ib);
    }

    std::map<int, MFormBasis<K>> mforms;
    for (int m = 1; m <= 3; ++m) mforms.emplace(m, detail::build_mform(field, input, d, m));

    check_invariant(mforms.at(1).dim() == g, "dim-h0-K-equals-genus");
    for (int m = 2; m <= 3; ++m)
        check_invariant(mforms.at(m).dim() == (2 * m - 1) * (g - 1), "dim-h0-mK-riemann-roch");

    return PlaneCurve<F>(field, input, d, g, effective, std::move(partials), std::move(affine), std::move(affine_da),
                         std::move(affine_db), std::move(mforms));
}

// ---------------------------------------------------------------------------
// Rational point search: deterministic under seed, exhaustive when the scan
// runs out of field elements.
// ---------------------------------------------------------------------------

// best-effort scan; returns what it found (possibly fewer than n)
template <class F, class K = typename F::Elem>
std::vector<CurvePoint<K>> find_points_upto(const PlaneCurve<F>& C, std::size_t n, std::uint64_t seed) {
    std::vector<CurvePoint<K>> out;
    if (n == 0) return out;
    if (!C.field.finite())
        throw NotEnoughPoints(0);  // over QQ points must be supplied explicitly
    const std::uint64_t p = C.field.size();
    Rng rng = Rng(seed).derive("find_points");
    const std::uint64_t x0 = rng.below(p);
    const std::uint64_t step = 1 + rng.below(p - 1);

    auto push = [&](std::array<K, 3> coords) {
        CurvePoint<K> pt = make_curve_point(C, coords);
        for (auto& q : out)
            if (q == pt) return;
        out.push_back(pt);
    };

    for (std::uint64_t k = 0; k < p && out.size() < n; ++k) {
        K x = C.field.element((x0 + k * step) % p);
        Poly1<K> fy = restrict_line(C.poly, std::array<K, 3>{x, C.field.zero(), C.field.one()},
                                    std::array<K, 3>{C.field.zero(), C.field.one(), C.field.zero()}, C.field.zero(),
                                    C.field.one());
        if (fy.is_zero()) continue;
        for (std::uint64_t yi = 0; yi < p && out.size() < n; ++yi) {
            K y = C.field.element(yi);
            if (fy.eval(y, C.field.zero()).is_zero()) push({x, y, C.field.one()});
        }
    }
    // the line at infinity
    for (std::uint64_t xi = 0; xi < p && out.size() < n; ++xi) {
        K x = C.field.element(xi);
        std::array<K, 3> pt{x, C.field.one(), C.field.zero()};
        if (C.on_curve(pt)) push(pt);
    }
    if (out.size() < n) {
        std::array<K, 3> pt{C.field.one(), C.field.zero(), C.field.zero()};
        if (C.on_curve(pt)) push(pt);
    }
    return out;
}

template <class F, class K = typename F::Elem>
std::vector<CurvePoint<K>> find_points(const PlaneCurve<F>& C, std::size_t n, std::uint64_t seed) {
    auto out = find_points_upto(C, n, seed);
    if (out.size() < n) throw NotEnoughPoints(static_cast<long>(out.size()));
    return out;
}

// ---------------------------------------------------------------------------
// Local expansion of the curve branch at a smooth point.
// ---------------------------------------------------------------------------

template <class K>
struct LocalExpansion {
    CurvePoint<K> point;
    int precision = 0;
    // both affine coordinates as series in t (one of them is b0 + t or the
    // dependent series, depending on the uniformizer)
    LaurentSeries<K> a_series;
    LaurentSeries<K> b_series;
};

namespace detail {

// evaluate an affinized polynomial on a pair of regular series
template <class F, class K = typename F::Elem>
LaurentSeries<K> eval_on_branch(const F& field, const Poly3<K>& affine_poly, int chart,
                                const LaurentSeries<K>& a, const LaurentSeries<K>& b, int prec) {
    auto [ia, ib] = chart_affine_vars(chart);
    int da = 0, db = 0;
    for (auto& [m, c] : affine_poly.terms()) {
        da = std::max(da, m.e[static_cast<std::size_t>(ia)]);
        db = std::max(db, m.e[static_cast<std::size_t>(ib)]);
    }
    std::vector<LaurentSeries<K>> pa, pb;
    pa.reserve(static_cast<std::size_t>(da + 1));
    pb.reserve(static_cast<std::size_t>(db + 1));
    pa.push_back(LaurentSeries<K>::constant(field.one(), prec));
    pb.push_back(LaurentSeries<K>::constant(field.one(), prec));
    for (int i = 1; i <= da; ++i) pa.push_back((pa.back() * a).truncated(prec));
    for (int i = 1; i <= db; ++i) pb.push_back((pb.back() * b).truncated(prec));
    LaurentSeries<K> acc = LaurentSeries<K>::zero_to(prec);
    for (auto& [m, c] : affine_poly.terms()) {
        auto term = (pa[static_cast<std::size_t>(m.e[static_cast<std::size_t>(ia)])] *
                     pb[static_cast<std::size_t>(m.e[static_cast<std::size_t>(ib)])])
                        .truncated(prec)
                        .scaled(c);
        acc = acc + term;
    }
    return acc;
}

}  // namespace detail

// raw coefficient list of a regular series on [0, prec), padding with zeros
template <class K, class F>
std::vector<K> coeff_list(const LaurentSeries<K>& s, const F& field, int prec) {
    std::vector<K> out;
    out.reserve(static_cast<std::size_t>(prec));
    for (int e = 0; e < prec; ++e) out.push_back(e < s.precision() ? s.coefficient(e, field.zero()) : field.zero());
    return out;
}

template <class F, class K = typename F::Elem>
LocalExpansion<K> local_expansion(const PlaneCurve<F>& C, const CurvePoint<K>& pt, int prec) {
    if (prec < 1) prec = 1;
    const F& field = C.field;
    const Poly3<K>& G = C.affine_eq(pt.chart);
    const K a0 = pt.affine_a();
    const K b0 = pt.affine_b();

    // independent coordinate: constant + t; dependent coordinate solved by Newton
    const bool t_is_a = pt.uniformizer == 0;
    const Poly3<K>& G_dep = t_is_a ? C.affine_db(pt.chart) : C.affine_da(pt.chart);

    LaurentSeries<K> indep =
        LaurentSeries<K>::from_coeffs(0, {t_is_a ? a0 : b0, field.one()}, prec);
    LaurentSeries<K> dep = LaurentSeries<K>::constant(t_is_a ? b0 : a0, 1);

    int cur = 1;
    while (cur < prec) {
        cur = std::min(prec, 2 * cur);
        // refresh to current precision and run one Newton step
        LaurentSeries<K> dep_c = LaurentSeries<K>::from_coeffs(0, coeff_list(dep, field, cur), cur);
        LaurentSeries<K> ind_c = indep.truncated(cur);
        LaurentSeries<K> a_ser = t_is_a ? ind_c : dep_c;
        LaurentSeries<K> b_ser = t_is_a ? dep_c : ind_c;
        LaurentSeries<K> val = detail::eval_on_branch(field, G, pt.chart, a_ser, b_ser, cur);
        LaurentSeries<K> der = detail::eval_on_branch(field, G_dep, pt.chart, a_ser, b_ser, cur);
        dep = dep_c - (val * der.inverted()).truncated(cur);
    }

    LocalExpansion<K> le;
    le.point = pt;
    le.precision = prec;
    le.a_series = t_is_a ? indep : dep.truncated(prec);
    le.b_series = t_is_a ? dep.truncated(prec) : indep;
    return le;
}

// ---------------------------------------------------------------------------
// expand_form: the series q(t) with  omega_A = q(t) (dt)^m  at pt. Kept in a
// variant taking a prebuilt LocalExpansion so tail pairing can reuse one
// branch for many forms.
// ---------------------------------------------------------------------------

template <class F, class K = typename F::Elem>
LaurentSeries<K> expand_form_at(const PlaneCurve<F>& C, const LocalExpansion<K>& le, const Poly3<K>& A, int m,
                                int prec) {
    const F& field = C.field;
    if (!A.is_zero() && (!A.is_homogeneous() || A.degree() != m * (C.d - 3)))
        throw Error("expand_form: form must be homogeneous of degree m(d-3)");
    const CurvePoint<K>& pt = le.point;
    Poly3<K> A_aff = detail::affinize(field, A, pt.chart);
    LaurentSeries<K> num = detail::eval_on_branch(field, A_aff, pt.chart, le.a_series, le.b_series, prec);
    const bool t_is_a = pt.uniformizer == 0;
    const Poly3<K>& den_poly = t_is_a ? C.affine_db(pt.chart) : C.affine_da(pt.chart);
    LaurentSeries<K> den = detail::eval_on_branch(field, den_poly, pt.chart, le.a_series, le.b_series, prec);
    LaurentSeries<K> inv = den.inverted();
    LaurentSeries<K> q = num;
    for (int i = 0; i < m; ++i) q = (q * inv).truncated(prec);
    // db = -(G_a/G_b) da on the branch: in the t = b chart the m-form picks up (-1)^m
    if (!t_is_a && (m % 2 == 1)) q = q.negated();
    return q.truncated(prec);
}

template <class F, class K = typename F::Elem>
LaurentSeries<K> expand_form(const PlaneCurve<F>& C, const CurvePoint<K>& pt, const Poly3<K>& A, int m, int prec) {
    LocalExpansion<K> le = local_expansion(C, pt, prec + 2);
    return expand_form_at(C, le, A, m, prec);
}

}  // namespace ivhs
