#pragma once

#include <string>
#include <vector>

#include "ivhs/cohomology.hpp"

namespace ivhs {

// ---------------------------------------------------------------------------
// Sampling recipes for Kodaira-Spencer classes. These feed the survey and
// search commands and give the test suites nontrivial fixtures.
// ---------------------------------------------------------------------------

// k-point secant class: simple tails with random nonzero coefficients
template <class F, class K = typename F::Elem>
KSClass<K> secant_class(const PlaneCurve<F>& C, int k, std::uint64_t seed) {
    Rng rng = Rng(seed).derive("secant");
    auto pool = find_points(C, static_cast<std::size_t>(k + 8), rng.next());
    // random k-subset
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    TailRep<K> tails;
    for (int i = 0; i < k; ++i)
        tails.push_back(TailEntry<K>{pool[idx[static_cast<std::size_t>(i)]], {C.field.random_nonzero(rng)}});
    return ks_from_tails(C, tails, "secant-k" + std::to_string(k));
}

// single higher-order tail at one point (osculating class of order m)
template <class F, class K = typename F::Elem>
KSClass<K> higher_tail_class(const PlaneCurve<F>& C, int order, std::uint64_t seed) {
    Rng rng = Rng(seed).derive("higher-tail");
    auto p = find_points(C, 1 + rng.below(6) + 1, rng.next()).back();
    std::vector<K> coeffs;
    for (int m = 1; m < order; ++m) coeffs.push_back(C.field.random(rng));
    coeffs.push_back(C.field.random_nonzero(rng));
    return ks_from_tails(C, TailRep<K>{TailEntry<K>{p, coeffs}}, "tail-order" + std::to_string(order));
}

// random class annihilating a random u-dimensional subspace of H^0(K),
// re-expressed through simple tails
template <class F, class K = typename F::Elem>
KSClass<K> annihilator_class(const PlaneCurve<F>& C, int u, std::uint64_t seed) {
    Rng rng = Rng(seed).derive("annihilator");
    const auto& b1 = C.mform(1);
    std::vector<Vec<K>> U;
    for (int i = 0; i < u; ++i) {
        Vec<K> v(static_cast<std::size_t>(b1.dim()), C.field.zero());
        for (auto& c : v) c = C.field.random(rng);
        U.push_back(v);
    }
    auto ann = ks_annihilating(C, U);
    if (ann.dim() == 0) throw GenericityFailure("annihilator is zero for u = " + std::to_string(u));
    Vec<K> func(static_cast<std::size_t>(C.mform(2).dim()), C.field.zero());
    for (int i = 0; i < ann.dim(); ++i) func = vec_add(func, vec_scale(ann.basis_vector(i), C.field.random(rng)));
    if (vec_is_zero(func)) func = ann.basis_vector(0);
    return ks_with_tails_for_functional(C, func, rng.next(), "annihilator-u" + std::to_string(u));
}

// ---------------------------------------------------------------------------
// A sextic with six marked rational points on the line z = 0:
//   F = prod_{i=1..6} (x - a_i y) + z * G5,   a_i = 1..6.
// Random G5 under the seed, retried until the smoothness scan accepts.
// ---------------------------------------------------------------------------

template <class F, class K = typename F::Elem>
PlaneCurve<F> lined_sextic(const F& field, std::uint64_t seed) {
    Rng rng = Rng(seed).derive("lined-sextic");
    Poly3<K> base = Poly3<K>::monomial(Mono{{0, 0, 0}}, field.one());
    for (int a = 1; a <= 6; ++a) {
        Poly3<K> lin;
        lin.add_term(Mono{{1, 0, 0}}, field.one());
        lin.add_term(Mono{{0, 1, 0}}, field.zero() - field.from_int(a));
        base = base * lin;
    }
    for (int attempt = 0; attempt < 50; ++attempt) {
        Poly3<K> g5;
        for (const Mono& m : monomials_of_degree(5)) g5.add_term(m, field.random(rng));
        Poly3<K> f = base + Poly3<K>::monomial(Mono{{0, 0, 1}}, field.one()) * g5;
        try {
            return build_curve(field, f);
        } catch (const SingularCurve&) {
            continue;
        }
    }
    throw GenericityFailure("no smooth lined sextic found within the retry budget");
}

template <class F, class K = typename F::Elem>
std::vector<CurvePoint<K>> lined_sextic_points(const PlaneCurve<F>& C) {
    std::vector<CurvePoint<K>> pts;
    for (int a = 1; a <= 6; ++a)
        pts.push_back(make_curve_point(C, {C.field.from_int(a), C.field.one(), C.field.zero()}));
    return pts;
}

// ---------------------------------------------------------------------------
// Rank-dropping tuned coefficients on collinear points. With V the matrix of
// canonical coordinates of the points and Lambda its left kernel, the cup
// matrix of  sum c_i schiffer(p_i)  is  V^T diag(c) V, and its kernel grows
// beyond the vanishing forms exactly when B(x) = Lambda diag(x) Lambda^T
// degenerates at x = 1/c. Forcing B = 0 maximizes the drop.
// ---------------------------------------------------------------------------

template <class F, class K = typename F::Elem>
KSClass<K> collinear_tuned_class(const PlaneCurve<F>& C, const std::vector<CurvePoint<K>>& pts,
                                 std::uint64_t seed) {
    const F& field = C.field;
    const auto& b1 = C.mform(1);
    const int n = static_cast<int>(pts.size());
    Mat<K> V(n, b1.dim(), field.zero());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < b1.dim(); ++j)
            V.at(i, j) = Poly3<K>::monomial(b1.monomial(j), field.one())
                             .eval(pts[static_cast<std::size_t>(i)].coords[0], pts[static_cast<std::size_t>(i)].coords[1],
                                   pts[static_cast<std::size_t>(i)].coords[2], field.one());
    Subspace<K> lambda = kernel(V.transposed(field.zero()), field.zero(), field.one());
    const int D = lambda.dim();
    if (D == 0) throw GenericityFailure("points impose independent conditions; no rank drop available");

    // conditions B_{ab}(x) = sum_i Lambda_a[i] Lambda_b[i] x_i = 0 for a <= b
    std::vector<Vec<K>> rows;
    for (int a = 0; a < D; ++a)
        for (int b = a; b < D; ++b) {
            Vec<K> row(static_cast<std::size_t>(n), field.zero());
            for (int i = 0; i < n; ++i)
                row[static_cast<std::size_t>(i)] =
                    lambda.basis().at(a, i) * lambda.basis().at(b, i);
            rows.push_back(std::move(row));
        }
    Mat<K> cond = Mat<K>::from_rows(rows, n, field.zero());
    Subspace<K> sols = kernel(cond, field.zero(), field.one());
    if (sols.dim() == 0) throw GenericityFailure("no tuned coefficient vector exists");

    // the residue pairing weights each point by 1/den(p)^2, so the tail
    // coefficient realizing the effective weight 1/x_i is den^2/x_i
    std::vector<K> den2;
    for (auto& p : pts) {
        auto [ia, ib] = chart_affine_vars(p.chart);
        K den = p.uniformizer == 0 ? C.eval_partial(ib, p.coords) : C.eval_partial(ia, p.coords);
        den2.push_back(den * den);
    }

    Rng rng = Rng(seed).derive("tuned");
    for (int attempt = 0; attempt < 200; ++attempt) {
        Vec<K> x(static_cast<std::size_t>(n), field.zero());
        for (int i = 0; i < sols.dim(); ++i) x = vec_add(x, vec_scale(sols.basis_vector(i), field.random(rng)));
        bool ok = true;
        for (auto& c : x)
            if (c.is_zero()) ok = false;
        if (!ok) continue;
        TailRep<K> tails;
        for (int i = 0; i < n; ++i)
            tails.push_back(TailEntry<K>{pts[static_cast<std::size_t>(i)],
                                         {den2[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)].inv()}});
        return ks_from_tails(C, tails, "collinear-tuned-" + std::to_string(n));
    }
    throw GenericityFailure("no tuned coefficient vector with all entries nonzero");
}

}  // namespace ivhs
