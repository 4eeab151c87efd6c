#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ivhs/cohomology.hpp"

namespace ivhs {

// ---------------------------------------------------------------------------
// Rank strata of the cup product and the rank-1 geometry.
// ---------------------------------------------------------------------------

struct StratumReport {
    int rank = 0;
    int dim_W = 0;
    std::optional<int> queried_r;
    bool in_open_stratum = false;  // rank == queried_r
};

template <class F, class K = typename F::Elem>
StratumReport stratum(const PlaneCurve<F>& C, const KSClass<K>& xi, std::optional<int> queried_r = std::nullopt) {
    auto cm = cup_matrix(C, xi);
    StratumReport r;
    r.rank = cm.rank;
    r.dim_W = cm.W.dim();
    check_invariant(r.rank + r.dim_W == C.g, "stratum-rank-plus-kernel-is-g");
    r.queried_r = queried_r;
    r.in_open_stratum = queried_r.has_value() && cm.rank == *queried_r;
    return r;
}

// evaluation functional of the bicanonical basis at p, projectively
// normalized on the first nonzero coordinate
template <class F, class K = typename F::Elem>
Vec<K> bicanonical_coords(const PlaneCurve<F>& C, const CurvePoint<K>& p) {
    Vec<K> v = bicanonical_eval(C, p);
    for (auto& c : v)
        if (!c.is_zero()) {
            K inv = c.inv();
            for (auto& x : v) x = x * inv;
            break;
        }
    return v;
}

// ---------------------------------------------------------------------------
// Secant membership: is xi in the span of the tail functionals of the divisor
// sum_i orders[i] * points[i]?
// ---------------------------------------------------------------------------

template <class K>
struct SecantMembership {
    bool member = false;
    Vec<K> coefficients;  // per (point, order) functional, orders ascending per point
};

template <class F, class K = typename F::Elem>
SecantMembership<K> secant_membership(const PlaneCurve<F>& C, const KSClass<K>& xi,
                                      const std::vector<CurvePoint<K>>& points, const std::vector<int>& orders) {
    const F& field = C.field;
    const auto& b2 = C.mform(2);
    if (points.size() != orders.size()) throw Error("secant_membership: points/orders size mismatch");
    int total = 0;
    for (int o : orders) total += o;
    if (total > 3 * C.g - 3) throw Error("secant_membership: divisor degree exceeds 3g-3");

    // columns: osculating tail functionals e_{p,m} for m = 1..order_p
    std::vector<Vec<K>> cols;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int M = orders[static_cast<std::size_t>(i)];
        LocalExpansion<K> le = local_expansion(C, points[i], M + 6);
        for (int m = 1; m <= M; ++m) {
            Vec<K> col;
            col.reserve(static_cast<std::size_t>(b2.dim()));
            for (int b = 0; b < b2.dim(); ++b) {
                Poly3<K> Qb = Poly3<K>::monomial(b2.monomial(b), field.one());
                col.push_back(expand_form_at(C, le, Qb, 2, M + 2).coefficient(m - 1, field.zero()));
            }
            cols.push_back(std::move(col));
        }
    }
    Mat<K> E(b2.dim(), static_cast<int>(cols.size()), field.zero());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int r = 0; r < b2.dim(); ++r) E.at(r, static_cast<int>(c)) = cols[c][static_cast<std::size_t>(r)];
    LinearSolver<K> solver(E, field.zero(), field.one());
    auto sol = solver.solve(xi.functional);
    SecantMembership<K> out;
    out.member = sol.has_value();
    if (sol) out.coefficients = *sol;
    return out;
}

// ---------------------------------------------------------------------------
// Rank-1 classes: base point of |W_xi| and the splitting criterion
// W_xi = delta . H^0(K - p).
// ---------------------------------------------------------------------------

template <class K>
struct Rank1Geometry {
    CurvePoint<K> base_point;
    bool W_equals_delta_H0 = false;
};

template <class F, class K = typename F::Elem>
Subspace<K> forms_vanishing_at(const PlaneCurve<F>& C, const CurvePoint<K>& p) {
    const auto& b1 = C.mform(1);
    Mat<K> row(1, b1.dim(), C.field.zero());
    for (int i = 0; i < b1.dim(); ++i)
        row.at(0, i) =
            Poly3<K>::monomial(b1.monomial(i), C.field.one()).eval(p.coords[0], p.coords[1], p.coords[2], C.field.one());
    return kernel(row, C.field.zero(), C.field.one());
}

template <class F, class K = typename F::Elem>
Rank1Geometry<K> rank1_geometry(const PlaneCurve<F>& C, const KSClass<K>& xi,
                                const std::vector<CurvePoint<K>>& candidates) {
    const F& field = C.field;
    auto cm = cup_matrix(C, xi);
    if (cm.rank != 1) throw Error("rank1_geometry: class has rank " + std::to_string(cm.rank) + ", expected 1");
    for (const auto& p : candidates) {
        bool common_zero = true;
        for (int i = 0; i < cm.W.dim() && common_zero; ++i) {
            Poly3<K> w = C.mform(1).form(cm.W.basis_vector(i));
            if (!w.eval(p.coords[0], p.coords[1], p.coords[2], field.one()).is_zero()) common_zero = false;
        }
        if (!common_zero) continue;
        Rank1Geometry<K> out;
        out.base_point = p;
        out.W_equals_delta_H0 = (cm.W == forms_vanishing_at(C, p));
        return out;
    }
    // over F_p the common zero may be irrational; report the residual data
    throw BasePointNotFound("no rational base point among " + std::to_string(candidates.size()) +
                            " candidates (dim W = " + std::to_string(cm.W.dim()) + ")");
}

}  // namespace ivhs
