#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ivhs/curve.hpp"

namespace ivhs {

// ---------------------------------------------------------------------------
// Kodaira-Spencer classes. The functional lives in H^0(2K)^*, expressed in
// the bicanonical basis; a repartition (Laurent tail) representative, when
// present, is the cocycle-level data every splitting computation needs.
// ---------------------------------------------------------------------------

template <class K>
struct TailEntry {
    CurvePoint<K> point;
    std::vector<K> coeffs;  // c_1..c_M: the tail (sum_m c_m t^{-m}) (dt)^{-1}

    int order() const { return static_cast<int>(coeffs.size()); }
};

template <class K>
using TailRep = std::vector<TailEntry<K>>;

template <class K>
struct KSClass {
    Vec<K> functional;  // over the H^0(2K) basis
    std::optional<TailRep<K>> tails;
    std::string label;

    bool is_zero() const { return vec_is_zero(functional); }
};

namespace detail {

template <class K>
void validate_tails(const TailRep<K>& tails) {
    for (std::size_t i = 0; i < tails.size(); ++i) {
        if (tails[i].coeffs.empty() || tails[i].coeffs.back().is_zero())
            throw Error("TailRep: top coefficient of each entry must be nonzero");
        for (std::size_t j = i + 1; j < tails.size(); ++j)
            if (tails[i].point == tails[j].point) throw Error("TailRep: support points must be distinct");
    }
}

}  // namespace detail

// residue pairing: functional[b] = sum_p sum_m c_{p,m} [t^{m-1}] q_b at p.
// Working precision is (max pole order) + 4, re-raised once on exhaustion.
template <class F, class K = typename F::Elem>
KSClass<K> ks_from_tails(const PlaneCurve<F>& C, const TailRep<K>& tails, const std::string& label = "") {
    detail::validate_tails(tails);
    const F& field = C.field;
    const auto& b2 = C.mform(2);
    KSClass<K> xi;
    xi.label = label;
    xi.tails = tails;
    xi.functional.assign(static_cast<std::size_t>(b2.dim()), field.zero());
    for (const auto& entry : tails) {
        const int M = entry.order();
        for (int attempt = 0; attempt < 2; ++attempt) {
            const int prec = (M + 4) << attempt;
            try {
                Vec<K> contrib(static_cast<std::size_t>(b2.dim()), field.zero());
                LocalExpansion<K> le = local_expansion(C, entry.point, prec + 2);
                for (int b = 0; b < b2.dim(); ++b) {
                    Poly3<K> Qb = Poly3<K>::monomial(b2.monomial(b), field.one());
                    LaurentSeries<K> q = expand_form_at(C, le, Qb, 2, prec);
                    for (int m = 1; m <= M; ++m)
                        contrib[static_cast<std::size_t>(b)] +=
                            entry.coeffs[static_cast<std::size_t>(m - 1)] * q.coefficient(m - 1, field.zero());
                }
                xi.functional = vec_add(xi.functional, contrib);
                break;
            } catch (const PrecisionExhausted&) {
                if (attempt == 1) throw;
            }
        }
    }
    return xi;
}

// the rank-1 class supported at p (order-1 tail with coefficient 1)
template <class F, class K = typename F::Elem>
KSClass<K> schiffer_class(const PlaneCurve<F>& C, const CurvePoint<K>& p, const std::string& label = "") {
    TailRep<K> t{TailEntry<K>{p, {C.field.one()}}};
    return ks_from_tails(C, t, label.empty() ? "schiffer" : label);
}

// ---------------------------------------------------------------------------
// Multiplication maps between pluricanonical spaces.
// ---------------------------------------------------------------------------

// reduce of the product of two basis forms, (m1, m2) -> m1 + m2
template <class F, class K = typename F::Elem>
Vec<K> product_reduce(const PlaneCurve<F>& C, int m1, int i, int m2, int j) {
    const auto& a = C.mform(m1);
    const auto& b = C.mform(m2);
    const auto& target = C.mform(m1 + m2);
    Poly3<K> prod = Poly3<K>::monomial(a.monomial(i), C.field.one()) * Poly3<K>::monomial(b.monomial(j), C.field.one());
    return target.reduce(C.field, prod);
}

// matrix of (A, B) -> reduce(A*B) on the tensor basis: columns indexed by
// (i, j) with j fastest
template <class F, class K = typename F::Elem>
Mat<K> mult_map(const PlaneCurve<F>& C, int m1, int m2) {
    const int da = C.mform(m1).dim(), db = C.mform(m2).dim(), dt = C.mform(m1 + m2).dim();
    Mat<K> m(dt, da * db, C.field.zero());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) {
            Vec<K> col = product_reduce(C, m1, i, m2, j);
            for (int r = 0; r < dt; ++r) m.at(r, i * db + j) = col[static_cast<std::size_t>(r)];
        }
    return m;
}

// matrix of S^m H^0(K) -> H^0(mK) on the monomial basis of the symmetric power
template <class F, class K = typename F::Elem>
Mat<K> sym_mult_matrix(const PlaneCurve<F>& C, int m) {
    const auto& b1 = C.mform(1);
    const auto& target = C.mform(m);
    const int gdim = b1.dim();
    std::vector<std::vector<int>> multisets;
    std::vector<int> cur;
    // multisets i1 <= i2 <= ... <= im
    std::function<void(int, int)> gen = [&](int start, int left) {
        if (left == 0) {
            multisets.push_back(cur);
            return;
        }
        for (int i = start; i < gdim; ++i) {
            cur.push_back(i);
            gen(i, left - 1);
            cur.pop_back();
        }
    };
    gen(0, m);
    Mat<K> out(target.dim(), static_cast<int>(multisets.size()), C.field.zero());
    for (std::size_t cidx = 0; cidx < multisets.size(); ++cidx) {
        Poly3<K> prod = Poly3<K>::monomial(b1.monomial(multisets[cidx][0]), C.field.one());
        for (std::size_t k = 1; k < multisets[cidx].size(); ++k)
            prod = prod * Poly3<K>::monomial(b1.monomial(multisets[cidx][k]), C.field.one());
        Vec<K> col = target.reduce(C.field, prod);
        for (int r = 0; r < target.dim(); ++r) out.at(r, static_cast<int>(cidx)) = col[static_cast<std::size_t>(r)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// The cup-product matrix of a class and its kernel W_xi.
// ---------------------------------------------------------------------------

template <class K>
struct CupMatrix {
    Mat<K> m;
    int rank = 0;
    Subspace<K> W;
};

template <class F, class K = typename F::Elem>
CupMatrix<K> cup_matrix(const PlaneCurve<F>& C, const KSClass<K>& xi) {
    const F& field = C.field;
    const auto& b1 = C.mform(1);
    const int gdim = b1.dim();
    CupMatrix<K> out;
    out.m = Mat<K>(gdim, gdim, field.zero());
    for (int i = 0; i < gdim; ++i)
        for (int j = i; j < gdim; ++j) {
            K v = dot(xi.functional, product_reduce(C, 1, i, 1, j), field.zero());
            out.m.at(i, j) = v;
            out.m.at(j, i) = v;
        }
    // symmetry is built in; the invariant is still asserted on every build
    for (int i = 0; i < gdim; ++i)
        for (int j = 0; j < gdim; ++j) check_invariant(out.m.at(i, j) == out.m.at(j, i), "cup-matrix-symmetric");
    out.rank = rref(out.m).rank;
    out.W = kernel(out.m, field.zero(), field.one());
    check_invariant(out.W.dim() == gdim - out.rank, "cup-kernel-rank-nullity");
    return out;
}

// ---------------------------------------------------------------------------
// Classes with W_xi containing a prescribed subspace U: the annihilator of
// U * H^0(K) inside H^0(2K)^*.
// ---------------------------------------------------------------------------

template <class F, class K = typename F::Elem>
Subspace<K> ks_annihilating(const PlaneCurve<F>& C, const std::vector<Vec<K>>& U) {
    const F& field = C.field;
    const auto& b1 = C.mform(1);
    const auto& b2 = C.mform(2);
    std::vector<Vec<K>> products;
    for (const auto& u : U) {
        Poly3<K> uf = b1.form(u);
        for (int j = 0; j < b1.dim(); ++j) {
            Poly3<K> prod = uf * Poly3<K>::monomial(b1.monomial(j), field.one());
            products.push_back(b2.reduce(field, prod));
        }
    }
    auto span = Subspace<K>::span(products, b2.dim(), field.zero());
    return kernel(span.basis(), field.zero(), field.one());
}

// ---------------------------------------------------------------------------
// Mittag-Leffler solver. One context per (curve, tails): the random lines,
// the common denominator H, the numerator quotient basis, and the factored
// linear system are all chosen once, so every f^phi shares the denominator.
// ---------------------------------------------------------------------------

template <class K>
struct RationalFn {
    Poly3<K> numerator;                 // degree N form A
    std::vector<Poly3<K>> lines;        // the linear forms whose product is H
    Poly3<K> denominator;               // H
    CurvePoint<K> normalization_point;  // f(aux) = 0
};

template <class F, class K = typename F::Elem>
class MLContext {
  public:
    // over QQ the normalization point cannot be scanned for; callers supply a
    // pool of known rational points instead
    MLContext(const PlaneCurve<F>& C, const TailRep<K>& tails, std::uint64_t seed,
              const std::vector<CurvePoint<K>>& aux_pool = {})
        : C_(C), tails_(tails), field_(C.field) {
        detail::validate_tails(tails);
        build_lines(seed);
        build_numerator_space();
        build_system();
        choose_aux(seed, aux_pool);
    }

    const Poly3<K>& denominator() const { return H_; }
    int numerator_degree() const { return N_; }
    const CurvePoint<K>& aux_point() const { return aux_; }
    int kernel_dim() const { return solver_->kernel_space().dim(); }

    // expansion of phi (H^0(K) coords) at the support points gives the
    // prescribed principal parts; the solver finds a matching numerator
    RationalFn<K> solve(const Vec<K>& phi_coords) const {
        Vec<K> rhs = assemble_rhs(phi_coords);
        auto x = solver_->solve(rhs);
        if (!x.has_value()) throw NotInKernel("no global solution: phi is not in W_xi");
        Poly3<K> A = numerator_from_coords(*x);
        // normalize the additive constant at the aux point
        K val = A.eval(aux_.coords[0], aux_.coords[1], aux_.coords[2], field_.one()) * h_aux_inv_;
        A = A - H_.scaled(val);
        RationalFn<K> f{A, line_forms_, H_, aux_};
        post_check(f, rhs);
        return f;
    }

    // Laurent window of A/H at support point s, exponents -m_s..-1
    Vec<K> pole_window(const Poly3<K>& A, std::size_t s) const {
        const auto& pd = point_data_[s];
        LaurentSeries<K> num =
            detail::eval_on_branch(field_, detail::affinize(field_, A, pd.le.point.chart), pd.le.point.chart,
                                   pd.le.a_series, pd.le.b_series, pd.prec);
        LaurentSeries<K> f = num * pd.invH;
        Vec<K> w;
        const int m = static_cast<int>(tails_[s].coeffs.size());
        for (int e = -m; e <= -1; ++e) w.push_back(f.coefficient(e, field_.zero()));
        return w;
    }

  private:
    struct LineData {
        Poly3<K> form;           // linear form vanishing on the line
        std::array<K, 3> lcoef;  // its coefficient vector
        std::array<K, 3> P, Q;   // parametrization u -> P + uQ
        Poly1<K> E;              // residual factor of F|_line, degree d-1
        std::size_t support;     // which tail entry the line passes through
    };

    struct PointData {
        LocalExpansion<K> le;
        LaurentSeries<K> invH;
        int prec = 0;
    };

    static std::array<K, 3> cross(const std::array<K, 3>& a, const std::array<K, 3>& b) {
        return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    }

    void build_lines(std::uint64_t seed) {
        Rng rng = Rng(seed).derive("ml-lines");
        const int d = C_.d;
        for (std::size_t s = 0; s < tails_.size(); ++s) {
            const auto& P = tails_[s].point.coords;
            for (int k = 0; k < tails_[s].order(); ++k) {
                bool placed = false;
                for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
                    std::array<K, 3> Q{field_.random(rng), field_.random(rng), field_.random(rng)};
                    if (vec_is_zero(std::vector<K>{Q[0], Q[1], Q[2]})) continue;
                    if (C_.eval(Q).is_zero()) continue;  // Q must avoid the curve
                    Poly1<K> R = restrict_line(C_.poly, P, Q, field_.zero(), field_.one());
                    if (R.degree() != d) continue;
                    if (!R.coeff_or_zero(0, field_.zero()).is_zero()) continue;  // should vanish at u=0
                    // peel the u factor: R = u * E
                    std::vector<K> ec(R.coeffs().begin() + 1, R.coeffs().end());
                    Poly1<K> E(std::move(ec));
                    if (E.eval(field_.zero(), field_.zero()).is_zero()) continue;  // tangent at P
                    if (!E.is_squarefree(field_)) continue;
                    Poly3<K> lf;
                    auto l = cross(P, Q);
                    lf.add_term(Mono{{1, 0, 0}}, l[0]);
                    lf.add_term(Mono{{0, 1, 0}}, l[1]);
                    lf.add_term(Mono{{0, 0, 1}}, l[2]);
                    if (lf.is_zero()) continue;
                    // must avoid the other support points
                    bool bad = false;
                    for (std::size_t s2 = 0; s2 < tails_.size() && !bad; ++s2) {
                        if (s2 == s) continue;
                        if (lf.eval(tails_[s2].point.coords[0], tails_[s2].point.coords[1],
                                    tails_[s2].point.coords[2], field_.one())
                                .is_zero())
                            bad = true;
                    }
                    if (bad) continue;
                    // pairwise checks against already chosen lines
                    for (const auto& prev : lines_) {
                        auto meet = cross(l, prev.lcoef);
                        if (vec_is_zero(std::vector<K>{meet[0], meet[1], meet[2]})) {
                            bad = true;  // same line twice
                            break;
                        }
                        if (prev.support == s) continue;  // distinct lines through the same point meet only there
                        if (C_.eval(meet).is_zero()) {
                            bad = true;  // shared residual point on the curve
                            break;
                        }
                    }
                    if (bad) continue;
                    lines_.push_back(LineData{lf, l, P, Q, E, s});
                    placed = true;
                }
                if (!placed) throw GenericityFailure("line retry budget exhausted at support point " +
                                                     tails_[s].point.str());
            }
        }
        N_ = static_cast<int>(lines_.size());
        H_ = Poly3<K>::monomial(Mono{{0, 0, 0}}, field_.one());
        line_forms_.clear();
        for (auto& ld : lines_) {
            H_ = H_ * ld.form;
            line_forms_.push_back(ld.form);
        }
    }

    void build_numerator_space() { quotient_ = detail::build_fquotient(field_, C_.poly, C_.d, N_); }

    void build_system() {
        const int nq = quotient_.dim();
        // branch data and inverse denominators per support point; the window
        // down to t^{-m} after inverting an order-m denominator needs 2m+4
        for (std::size_t s = 0; s < tails_.size(); ++s) {
            PointData pd;
            const int m = tails_[s].order();
            pd.prec = 2 * m + 4;
            pd.le = local_expansion(C_, tails_[s].point, pd.prec + 2);
            LaurentSeries<K> h = detail::eval_on_branch(
                field_, detail::affinize(field_, H_, pd.le.point.chart), pd.le.point.chart, pd.le.a_series,
                pd.le.b_series, pd.prec);
            check_invariant(h.order() == m, "ml-denominator-valuation");
            pd.invH = h.inverted();
            point_data_.push_back(std::move(pd));
        }

        int rows = 0;
        for (auto& ld : lines_) rows += ld.E.degree();
        for (auto& t : tails_) rows += t.order();
        Mat<K> sys(rows, nq, field_.zero());

        int r0 = 0;
        for (auto& ld : lines_) {
            const int er = ld.E.degree();
            for (int k = 0; k < nq; ++k) {
                Poly3<K> mu = Poly3<K>::monomial(quotient_.monomial(k), field_.one());
                Poly1<K> rest = restrict_line(mu, ld.P, ld.Q, field_.zero(), field_.one());
                Poly1<K> rem = rest.divmod(ld.E).second;
                for (int j = 0; j < er; ++j) sys.at(r0 + j, k) = rem.coeff_or_zero(j, field_.zero());
            }
            r0 += er;
        }
        pole_rows_start_ = r0;
        for (std::size_t s = 0; s < tails_.size(); ++s) {
            const auto& pd = point_data_[s];
            const int m = tails_[s].order();
            for (int k = 0; k < nq; ++k) {
                Poly3<K> mu = Poly3<K>::monomial(quotient_.monomial(k), field_.one());
                LaurentSeries<K> num = detail::eval_on_branch(
                    field_, detail::affinize(field_, mu, pd.le.point.chart), pd.le.point.chart, pd.le.a_series,
                    pd.le.b_series, pd.prec);
                LaurentSeries<K> f = num * pd.invH;
                for (int e = -m; e <= -1; ++e) sys.at(r0 + (e + m), k) = f.coefficient(e, field_.zero());
            }
            r0 += m;
        }
        solver_.emplace(sys, field_.zero(), field_.one());
        check_invariant(solver_->kernel_space().dim() == 1, "ml-solution-space-affine-dim-1");
        Vec<K> hred = quotient_.reduce(field_, H_);
        check_invariant(solver_->kernel_space().contains(hred), "ml-kernel-is-constants");
    }

    void choose_aux(std::uint64_t seed, const std::vector<CurvePoint<K>>& aux_pool) {
        std::vector<CurvePoint<K>> pts = aux_pool;
        if (field_.finite())
            for (auto& p : find_points_upto(C_, 40, Rng(seed).derive("ml-aux").next())) pts.push_back(p);
        for (auto& p : pts) {
            bool is_support = false;
            for (auto& t : tails_)
                if (t.point == p) is_support = true;
            if (is_support) continue;
            K h = H_.eval(p.coords[0], p.coords[1], p.coords[2], field_.one());
            if (h.is_zero()) continue;
            aux_ = p;
            h_aux_inv_ = h.inv();
            return;
        }
        throw AuxPointIsPole("no usable normalization point among scanned rational points");
    }

    Vec<K> assemble_rhs(const Vec<K>& phi_coords) const {
        const auto& b1 = C_.mform(1);
        if (static_cast<int>(phi_coords.size()) != b1.dim()) throw Error("ml_solve: phi coordinate size mismatch");
        Poly3<K> phi = b1.form(phi_coords);
        int rows = pole_rows_start_;
        for (auto& t : tails_) rows += t.order();
        Vec<K> rhs(static_cast<std::size_t>(rows), field_.zero());
        int r0 = pole_rows_start_;
        for (std::size_t s = 0; s < tails_.size(); ++s) {
            const auto& pd = point_data_[s];
            const int m = tails_[s].order();
            LaurentSeries<K> sphi = expand_form_at(C_, pd.le, phi, 1, pd.prec);
            // principal part of (sum_m c_m t^{-m}) * s_phi(t): coefficient of
            // t^{-k} is sum_{j >= k} c_j s_{j-k}
            for (int k = 1; k <= m; ++k) {
                K acc = field_.zero();
                for (int j = k; j <= m; ++j)
                    acc += tails_[s].coeffs[static_cast<std::size_t>(j - 1)] * sphi.coefficient(j - k, field_.zero());
                rhs[static_cast<std::size_t>(r0 + (m - k))] = acc;
            }
            r0 += m;
        }
        return rhs;
    }

    Poly3<K> numerator_from_coords(const Vec<K>& x) const {
        Poly3<K> A;
        for (int k = 0; k < quotient_.dim(); ++k)
            if (!x[static_cast<std::size_t>(k)].is_zero()) A.add_term(quotient_.monomial(k), x[static_cast<std::size_t>(k)]);
        return A;
    }

    // mandatory oracle: re-expand A/H at every support point and compare the
    // principal part against the prescription
    void post_check(const RationalFn<K>& f, const Vec<K>& rhs) const {
        int r0 = pole_rows_start_;
        for (std::size_t s = 0; s < tails_.size(); ++s) {
            const int m = tails_[s].order();
            Vec<K> window = pole_window(f.numerator, s);
            for (int e = -m; e <= -1; ++e)
                check_invariant(window[static_cast<std::size_t>(e + m)] == rhs[static_cast<std::size_t>(r0 + (e + m))],
                                "ml-principal-part-recheck");
            r0 += m;
        }
    }

    const PlaneCurve<F>& C_;
    TailRep<K> tails_;
    F field_;
    std::vector<LineData> lines_;
    std::vector<Poly3<K>> line_forms_;
    Poly3<K> H_;
    int N_ = 0;
    MFormBasis<K> quotient_;
    std::vector<PointData> point_data_;
    int pole_rows_start_ = 0;
    std::optional<LinearSolver<K>> solver_;
    CurvePoint<K> aux_;
    K h_aux_inv_;
};

// standalone operation; table construction reuses one context instead
template <class F, class K = typename F::Elem>
RationalFn<K> ml_solve(const PlaneCurve<F>& C, const TailRep<K>& tails, const Vec<K>& phi_coords,
                       std::uint64_t seed) {
    MLContext<F> ctx(C, tails, seed);
    return ctx.solve(phi_coords);
}

// ---------------------------------------------------------------------------
// Re-expressing a functional as simple tails at scanned rational points, so
// annihilator-built classes gain the cocycle representative the splitting
// machinery needs.
// ---------------------------------------------------------------------------

// evaluation vector of the bicanonical basis at p ("t^0 tail")
template <class F, class K = typename F::Elem>
Vec<K> bicanonical_eval(const PlaneCurve<F>& C, const CurvePoint<K>& p) {
    const F& field = C.field;
    const auto& b2 = C.mform(2);
    LocalExpansion<K> le = local_expansion(C, p, 4);
    Vec<K> v;
    v.reserve(static_cast<std::size_t>(b2.dim()));
    for (int b = 0; b < b2.dim(); ++b) {
        Poly3<K> Qb = Poly3<K>::monomial(b2.monomial(b), field.one());
        v.push_back(expand_form_at(C, le, Qb, 2, 2).coefficient(0, field.zero()));
    }
    return v;
}

template <class F, class K = typename F::Elem>
KSClass<K> ks_with_tails_for_functional(const PlaneCurve<F>& C, const Vec<K>& functional, std::uint64_t seed,
                                        const std::string& label = "") {
    const F& field = C.field;
    const auto& b2 = C.mform(2);
    const int n = b2.dim();
    Rng rng = Rng(seed).derive("tailrep");
    auto pool = find_points_upto(C, static_cast<std::size_t>(n + 40), rng.next());
    if (static_cast<int>(pool.size()) < n) throw NotEnoughPoints(static_cast<long>(pool.size()));
    // evaluation columns once per pool point
    std::vector<Vec<K>> cols;
    cols.reserve(pool.size());
    for (auto& p : pool) cols.push_back(bicanonical_eval(C, p));

    for (int attempt = 0; attempt < 40; ++attempt) {
        // random n-subset of the pool
        std::vector<std::size_t> idx(pool.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
        idx.resize(static_cast<std::size_t>(n));

        Mat<K> E(n, n, field.zero());
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < n; ++b) E.at(b, i) = cols[idx[static_cast<std::size_t>(i)]][static_cast<std::size_t>(b)];
        LinearSolver<K> solver(E, field.zero(), field.one());
        if (solver.rank() != n) continue;
        auto c = solver.solve(functional);
        if (!c.has_value()) continue;
        TailRep<K> tails;
        for (int i = 0; i < n; ++i)
            if (!(*c)[static_cast<std::size_t>(i)].is_zero())
                tails.push_back(TailEntry<K>{pool[idx[static_cast<std::size_t>(i)]], {(*c)[static_cast<std::size_t>(i)]}});
        KSClass<K> xi = ks_from_tails(C, tails, label);
        check_invariant(xi.functional == functional, "tail-representation-matches-functional");
        return xi;
    }
    throw GenericityFailure("could not invert the bicanonical evaluation matrix on the scanned point pool");
}

}  // namespace ivhs
