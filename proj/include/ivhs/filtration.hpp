#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ivhs/cohomology.hpp"

namespace ivhs {

// ---------------------------------------------------------------------------
// The table data the filtration machinery actually consumes: the subspace W
// inside an ambient coordinate space and the antisymmetric array of pairing
// values G_ij. Curve-backed tables carry this plus their splittings; synthetic
// analyzer inputs construct it directly.
// ---------------------------------------------------------------------------

template <class K>
struct A2Core {
    int ambient = 0;
    K zero, one;
    Subspace<K> W;
    // G[i][j]: ambient-coordinate value of the pairing on basis vectors i, j
    std::vector<std::vector<Vec<K>>> G;

    int w() const { return W.dim(); }

    // the map psi -> pairing(phi, psi) as an (ambient x w) matrix over the W basis
    Mat<K> lphi_matrix(const Vec<K>& phi_ambient) const {
        Vec<K> pc = W.coords(phi_ambient);
        Mat<K> m(ambient, w(), zero);
        for (int j = 0; j < w(); ++j)
            for (int i = 0; i < w(); ++i) {
                if (pc[static_cast<std::size_t>(i)].is_zero()) continue;
                for (int r = 0; r < ambient; ++r)
                    m.at(r, j) += pc[static_cast<std::size_t>(i)] * G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
            }
        return m;
    }

    Vec<K> pairing(const Vec<K>& a_ambient, const Vec<K>& b_ambient) const {
        Vec<K> ac = W.coords(a_ambient), bc = W.coords(b_ambient);
        Vec<K> out(static_cast<std::size_t>(ambient), zero);
        for (int i = 0; i < w(); ++i) {
            if (ac[static_cast<std::size_t>(i)].is_zero()) continue;
            for (int j = 0; j < w(); ++j) {
                K c = ac[static_cast<std::size_t>(i)] * bc[static_cast<std::size_t>(j)];
                if (c.is_zero()) continue;
                for (int r = 0; r < ambient; ++r)
                    out[static_cast<std::size_t>(r)] += c * G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
            }
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Curve-backed tables.
// ---------------------------------------------------------------------------

template <class F>
struct Alpha2Table {
    using K = typename F::Elem;

    A2Core<K> core;
    const PlaneCurve<F>* curve = nullptr;
    std::shared_ptr<MLContext<F>> ml;
    std::vector<RationalFn<K>> splittings;  // f^{phi_i} per W basis vector
    std::string normalization;              // record of the aux-point convention

    bool synthetic() const { return curve == nullptr; }
};

namespace detail {

// factor-once solver for  G*H + Kf*F = P  in a fixed degree; existence is the
// statement that the pairing lands in H^0(K), uniqueness is F irreducible
template <class F, class K = typename F::Elem>
class GDivision {
  public:
    GDivision(const PlaneCurve<F>& C, const Poly3<K>& H, int target_degree)
        : field_(C.field), space_(target_degree), adjoint_(C.d - 3) {
        const int lower = target_degree - C.d;
        std::vector<Vec<K>> cols;
        for (const Mono& mu : adjoint_.monos) cols.push_back(space_.to_vec(field_, H * Poly3<K>::monomial(mu, field_.one())));
        g_cols_ = static_cast<int>(cols.size());
        if (lower >= 0)
            for (const Mono& nu : monomials_of_degree(lower))
                cols.push_back(space_.to_vec(field_, C.poly * Poly3<K>::monomial(nu, field_.one())));
        Mat<K> sys(space_.dim(), static_cast<int>(cols.size()), field_.zero());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (int r = 0; r < space_.dim(); ++r) sys.at(r, static_cast<int>(c)) = cols[c][static_cast<std::size_t>(r)];
        solver_.emplace(sys, field_.zero(), field_.one());
        check_invariant(solver_->kernel_space().dim() == 0, "alpha2-division-unique");
    }

    // returns the coefficients of G on the degree-(d-3) monomials
    Vec<K> divide(const Poly3<K>& P) const {
        Vec<K> rhs = P.is_zero() ? Vec<K>(static_cast<std::size_t>(space_.dim()), field_.zero())
                                 : space_.to_vec(field_, P);
        auto x = solver_->solve(rhs);
        if (!x.has_value())
            throw DivisionObstruction("pairing value is not a multiple of H modulo F (table corruption)");
        Vec<K> g(x->begin(), x->begin() + g_cols_);
        return g;
    }

  private:
    F field_;
    DegreeSpace<K> space_;
    DegreeSpace<K> adjoint_;
    int g_cols_ = 0;
    std::optional<LinearSolver<K>> solver_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// alpha2_table: Mittag-Leffler splittings with one common denominator, then
// every pairing value G_ij solved from  A_i B_j - A_j B_i = G_ij H (mod F).
// ---------------------------------------------------------------------------

template <class F, class K = typename F::Elem>
Alpha2Table<F> alpha2_table(const PlaneCurve<F>& C, const KSClass<K>& xi, const Subspace<K>& W, std::uint64_t seed,
                            const std::vector<CurvePoint<K>>& aux_pool = {}) {
    if (!xi.tails.has_value())
        throw NeedsTailRepresentative("alpha2_table requires a Laurent-tail representative of the class");
    const F& field = C.field;
    const auto& b1 = C.mform(1);

    Alpha2Table<F> table;
    table.curve = &C;
    table.core.ambient = b1.dim();
    table.core.zero = field.zero();
    table.core.one = field.one();
    table.core.W = W;
    const int w = W.dim();

    table.ml = std::make_shared<MLContext<F>>(C, *xi.tails, seed, aux_pool);
    table.normalization = "f(aux)=0 at " + table.ml->aux_point().str();

    for (int i = 0; i < w; ++i) table.splittings.push_back(table.ml->solve(W.basis_vector(i)));

    detail::GDivision<F> divider(C, table.ml->denominator(), table.ml->numerator_degree() + (C.d - 3));

    table.core.G.assign(static_cast<std::size_t>(w), std::vector<Vec<K>>(static_cast<std::size_t>(w)));
    for (int i = 0; i < w; ++i)
        table.core.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
            Vec<K>(static_cast<std::size_t>(b1.dim()), field.zero());
    for (int i = 0; i < w; ++i) {
        Poly3<K> Bi = b1.form(W.basis_vector(i));
        for (int j = i + 1; j < w; ++j) {
            Poly3<K> Bj = b1.form(W.basis_vector(j));
            Poly3<K> P = table.splittings[static_cast<std::size_t>(i)].numerator * Bj -
                         table.splittings[static_cast<std::size_t>(j)].numerator * Bi;
            Vec<K> g = divider.divide(P);
            table.core.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g;
            Vec<K> neg(g.size());
            for (std::size_t r = 0; r < g.size(); ++r) neg[r] = -g[r];
            table.core.G[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = std::move(neg);
        }
    }
    return table;
}

// Koszul cocycle residual phi_k G_ij - phi_j G_ik + phi_i G_jk in H^0(2K)
// coordinates; identically zero on every valid table
template <class F, class K = typename F::Elem>
Vec<K> cocycle_residual(const PlaneCurve<F>& C, const Alpha2Table<F>& table, int i, int j, int k) {
    const auto& b1 = C.mform(1);
    const auto& b2 = C.mform(2);
    auto phi = [&](int a) { return b1.form(table.core.W.basis_vector(a)); };
    auto gform = [&](int a, int b) { return b1.form(table.core.G[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]); };
    Poly3<K> P = phi(k) * gform(i, j) - phi(j) * gform(i, k) + phi(i) * gform(j, k);
    return b2.reduce(C.field, P);
}

// ---------------------------------------------------------------------------
// Change of splitting: f^{phi_i} += lambda_i. In the common-denominator model
// this shifts numerators by lambda_i H and the pairing values by
// lambda_i phi_j - lambda_j phi_i.
// ---------------------------------------------------------------------------

template <class F, class K = typename F::Elem>
Alpha2Table<F> splitting_shift(const Alpha2Table<F>& table, const Vec<K>& lambda) {
    if (table.synthetic()) throw Error("splitting_shift: synthetic tables have no splittings");
    const int w = table.core.w();
    if (static_cast<int>(lambda.size()) != w) throw Error("splitting_shift: lambda size mismatch");
    Alpha2Table<F> out = table;
    const Poly3<K>& H = table.ml->denominator();
    for (int i = 0; i < w; ++i)
        out.splittings[static_cast<std::size_t>(i)].numerator =
            table.splittings[static_cast<std::size_t>(i)].numerator + H.scaled(lambda[static_cast<std::size_t>(i)]);
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) {
            Vec<K> phi_j = table.core.W.basis_vector(j);
            Vec<K> phi_i = table.core.W.basis_vector(i);
            out.core.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                vec_add(table.core.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                        vec_sub(vec_scale(phi_j, lambda[static_cast<std::size_t>(i)]),
                                vec_scale(phi_i, lambda[static_cast<std::size_t>(j)])));
        }
    out.normalization = table.normalization + " + shift";
    return out;
}

// ---------------------------------------------------------------------------
// The ([xi],[phi])-filtration: iterated preimages of the current step under
// pairing(phi, .), with the stabilization index and graded data.
// ---------------------------------------------------------------------------

template <class K>
struct XiPhiFiltration {
    Vec<K> phi;
    std::vector<Subspace<K>> chain;  // W^0 .. W^l
    int l = 0;
    std::vector<int> partition;      // h^0 .. h^l
    std::vector<int> chain_dims;
    // c^(i) for i = 1..l-1 in the recorded bases, with their graded ranks
    std::vector<Mat<K>> cmaps;
    std::vector<int> cmap_ranks;
};

template <class K>
XiPhiFiltration<K> xi_phi_filtration(const A2Core<K>& core, const Vec<K>& phi) {
    XiPhiFiltration<K> out;
    out.phi = phi;
    if (core.w() == 0) {
        // degenerate W: empty filtration
        out.chain.push_back(core.W);
        out.chain_dims.push_back(0);
        out.partition.push_back(0);
        out.l = 0;
        return out;
    }
    if (vec_is_zero(phi)) throw PhiNotInW("phi must be nonzero");
    if (!core.W.contains(phi)) throw PhiNotInW("phi is not in W");
    Mat<K> L = core.lphi_matrix(phi);  // ambient x w, on the W basis
    // pairing(phi, phi) = 0, so phi survives into every step
    check_invariant(vec_is_zero(L.apply(core.W.coords(phi))), "alpha2-antisymmetry-on-phi");

    out.chain.push_back(core.W);
    while (true) {
        const Subspace<K>& cur = out.chain.back();
        // condition: psi in cur with L(psi) in cur
        Mat<K> cond(core.ambient, cur.dim(), core.zero);
        for (int j = 0; j < cur.dim(); ++j) {
            Vec<K> img = L.apply(core.W.coords(cur.basis_vector(j)));
            Vec<K> res = cur.reduce(img);
            for (int r = 0; r < core.ambient; ++r) cond.at(r, j) = res[static_cast<std::size_t>(r)];
        }
        Subspace<K> ker = kernel(cond, core.zero, core.one);
        std::vector<Vec<K>> gens;
        for (int i = 0; i < ker.dim(); ++i) gens.push_back(cur.from_coords(ker.basis_vector(i), core.zero));
        Subspace<K> next = Subspace<K>::span(gens, core.ambient, core.zero);
        check_invariant(cur.contains_subspace(next), "filtration-decreasing");
        check_invariant(next.contains(phi), "filtration-contains-phi");
        if (next == cur) break;
        check_invariant(next.dim() < cur.dim(), "filtration-strictly-decreasing-before-l");
        out.chain.push_back(next);
    }
    out.l = static_cast<int>(out.chain.size()) - 1;
    for (auto& s : out.chain) out.chain_dims.push_back(s.dim());
    for (int i = 0; i < out.l; ++i)
        out.partition.push_back(out.chain[static_cast<std::size_t>(i)].dim() -
                                out.chain[static_cast<std::size_t>(i + 1)].dim());
    out.partition.push_back(out.chain.back().dim());
    int total = 0;
    for (int h : out.partition) total += h;
    check_invariant(total == core.w(), "partition-sums-to-dim-W");
    for (std::size_t i = 0; i + 2 < out.partition.size(); ++i)
        check_invariant(out.partition[i] >= out.partition[i + 1], "partition-weakly-decreasing");

    // record c^(i): W^i -> W^{i-1}/W^i for i = 1..l-1, with graded ranks
    for (int i = 1; i < out.l; ++i) {
        const Subspace<K>& Wi = out.chain[static_cast<std::size_t>(i)];
        const Subspace<K>& Wprev = out.chain[static_cast<std::size_t>(i - 1)];
        auto comp = complement_in(Wprev, Wi, core.zero);  // quotient representatives
        // W^{i-1} = W^i (+) span(comp): split images in that decomposition
        std::vector<Vec<K>> cols;
        for (int j = 0; j < Wi.dim(); ++j) cols.push_back(Wi.basis_vector(j));
        for (auto& v : comp) cols.push_back(v);
        Mat<K> colmat(core.ambient, static_cast<int>(cols.size()), core.zero);
        for (std::size_t cidx = 0; cidx < cols.size(); ++cidx)
            for (int r = 0; r < core.ambient; ++r) colmat.at(r, static_cast<int>(cidx)) = cols[cidx][static_cast<std::size_t>(r)];
        LinearSolver<K> split(colmat, core.zero, core.one);
        Mat<K> c(static_cast<int>(comp.size()), Wi.dim(), core.zero);
        for (int j = 0; j < Wi.dim(); ++j) {
            Vec<K> img = L.apply(core.W.coords(Wi.basis_vector(j)));
            check_invariant(Wprev.contains(img), "cmap-lands-in-previous-step");
            auto coords = split.solve(img);
            check_invariant(coords.has_value(), "cmap-quotient-split");
            for (std::size_t r = 0; r < comp.size(); ++r)
                c.at(static_cast<int>(r), j) = (*coords)[static_cast<std::size_t>(Wi.dim()) + r];
        }
        out.cmaps.push_back(c);
        int rank = rref(c).rank;
        out.cmap_ranks.push_back(rank);
        check_invariant(rank == Wi.dim() - out.chain[static_cast<std::size_t>(i + 1)].dim(),
                        "graded-cmap-injective");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nilpotent / sl(2) analyzer on the quotient W / W^l.
// ---------------------------------------------------------------------------

template <class K>
struct Sl2Report {
    int quotient_dim = 0;
    int nilpotency_index = 0;
    std::vector<int> jordan_blocks;           // descending sizes
    std::map<int, int> weight_dims;           // weight -> dimension
    std::map<std::pair<int, int>, int> bigraded;  // (-k, n+k) -> dimension
    bool lefschetz_ok = true;
    bool nilpotency_checked = false;
    // two candidate readings of the block-multiplicity statement
    bool blocks_match_h = false;
    bool blocks_match_h_difference = false;
};

template <class K>
Sl2Report<K> nilpotent_and_sl2(const A2Core<K>& core, const XiPhiFiltration<K>& filt) {
    Sl2Report<K> rep;
    if (filt.l == 0) return rep;  // stationary from the start: empty report
    const K zero = core.zero, one = core.one;
    const int l = filt.l;

    // graded levels: complements of W^{i+1} in W^i, i = 0..l-1
    std::vector<std::vector<Vec<K>>> levels;
    std::vector<Vec<K>> qbasis;
    for (int i = 0; i < l; ++i) {
        auto comp = complement_in(filt.chain[static_cast<std::size_t>(i)], filt.chain[static_cast<std::size_t>(i + 1)], zero);
        levels.push_back(comp);
        for (auto& v : comp) qbasis.push_back(v);
    }
    const int q = static_cast<int>(qbasis.size());
    rep.quotient_dim = q;

    // adapted coordinates on the quotient: qbasis followed by a basis of W^l
    std::vector<Vec<K>> adapted = qbasis;
    const Subspace<K>& Wl = filt.chain.back();
    for (int i = 0; i < Wl.dim(); ++i) adapted.push_back(Wl.basis_vector(i));
    Mat<K> adapted_cols(core.ambient, static_cast<int>(adapted.size()), zero);
    for (std::size_t c = 0; c < adapted.size(); ++c)
        for (int r = 0; r < core.ambient; ++r) adapted_cols.at(r, static_cast<int>(c)) = adapted[c][static_cast<std::size_t>(r)];
    LinearSolver<K> express(adapted_cols, zero, one);
    check_invariant(express.rank() == static_cast<int>(adapted.size()), "sl2-adapted-basis-independent");

    Mat<K> L = core.lphi_matrix(filt.phi);
    // graded nilpotent: the level-(i-1) component of the pairing image
    Mat<K> N(q, q, zero);
    std::vector<int> level_of;
    std::vector<int> offset_of_level(static_cast<std::size_t>(l + 1), 0);
    for (int i = 0; i < l; ++i) {
        offset_of_level[static_cast<std::size_t>(i + 1)] =
            offset_of_level[static_cast<std::size_t>(i)] + static_cast<int>(levels[static_cast<std::size_t>(i)].size());
        for (std::size_t k = 0; k < levels[static_cast<std::size_t>(i)].size(); ++k) level_of.push_back(i);
    }
    for (int col = 0; col < q; ++col) {
        int lev = level_of[static_cast<std::size_t>(col)];
        if (lev == 0) continue;  // graded component of c^(0)-level vectors is outside W
        Vec<K> img = L.apply(core.W.coords(qbasis[static_cast<std::size_t>(col)]));
        auto coords = express.solve(img);
        check_invariant(coords.has_value(), "sl2-image-in-previous-step");
        // keep only the level (lev-1) block: that is gr(c^(lev))
        for (int r = offset_of_level[static_cast<std::size_t>(lev - 1)]; r < offset_of_level[static_cast<std::size_t>(lev)]; ++r)
            N.at(r, col) = (*coords)[static_cast<std::size_t>(r)];
    }

    // nilpotency: N^l = 0 and N^{l-1} != 0
    auto matpow = [&](const Mat<K>& m, int e) {
        Mat<K> acc = Mat<K>::identity(q, zero, one);
        for (int i = 0; i < e; ++i) acc = acc.multiply(m, zero);
        return acc;
    };
    auto is_zero_mat = [&](const Mat<K>& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (!m.at(i, j).is_zero()) return false;
        return true;
    };
    check_invariant(is_zero_mat(matpow(N, l)), "nilpotent-Nl-zero");
    check_invariant(l == 0 || !is_zero_mat(matpow(N, l - 1)), "nilpotent-Nl-1-nonzero");
    rep.nilpotency_checked = true;
    rep.nilpotency_index = l;

    // Jordan block sizes from ranks of powers
    std::vector<int> ranks(static_cast<std::size_t>(l + 2), 0);
    ranks[0] = q;
    for (int e = 1; e <= l + 1; ++e) ranks[static_cast<std::size_t>(e)] = rref(matpow(N, e)).rank;
    std::vector<int> blocks;
    for (int s = 1; s <= l; ++s) {
        int count = ranks[static_cast<std::size_t>(s - 1)] - 2 * ranks[static_cast<std::size_t>(s)] +
                    ranks[static_cast<std::size_t>(s + 1)];
        for (int c = 0; c < count; ++c) blocks.push_back(s);
    }
    std::sort(blocks.rbegin(), blocks.rend());
    rep.jordan_blocks = blocks;
    int bsum = 0;
    for (int b : blocks) bsum += b;
    check_invariant(bsum == q, "jordan-blocks-sum-to-quotient-dim");

    // explicit Jordan chains (verified), for the weight spaces and Lefschetz
    std::vector<Subspace<K>> kers;  // ker(N^i), i = 0..l
    kers.push_back(Subspace<K>::zero(q, zero));
    for (int e = 1; e <= l; ++e) kers.push_back(kernel(matpow(N, e), zero, one));
    std::vector<std::vector<Vec<K>>> chains;
    std::vector<Vec<K>> used;
    for (int s = l; s >= 1; --s) {
        while (true) {
            std::vector<Vec<K>> blockers = used;
            for (int i = 0; i < kers[static_cast<std::size_t>(s - 1)].dim(); ++i)
                blockers.push_back(kers[static_cast<std::size_t>(s - 1)].basis_vector(i));
            Subspace<K> blocked = Subspace<K>::span(blockers, q, zero);
            Vec<K> top;
            bool found = false;
            for (int i = 0; i < kers[static_cast<std::size_t>(s)].dim() && !found; ++i) {
                Vec<K> cand = kers[static_cast<std::size_t>(s)].basis_vector(i);
                if (!blocked.contains(cand)) {
                    top = cand;
                    found = true;
                }
            }
            if (!found) break;
            std::vector<Vec<K>> chain{top};
            for (int e = 1; e < s; ++e) chain.push_back(N.apply(chain.back()));
            for (auto& v : chain) used.push_back(v);
            chains.push_back(std::move(chain));
        }
    }
    check_invariant(static_cast<int>(used.size()) == q, "jordan-chains-span-count");
    check_invariant(Subspace<K>::span(used, q, zero).dim() == q, "jordan-chains-independent");
    {
        std::vector<int> chain_sizes;
        for (auto& c : chains) chain_sizes.push_back(static_cast<int>(c.size()));
        std::sort(chain_sizes.rbegin(), chain_sizes.rend());
        check_invariant(chain_sizes == blocks, "jordan-chains-match-rank-blocks");
    }

    // weights: vector N^k t in a chain of length s has weight -(s-1)+2k
    std::map<int, std::vector<Vec<K>>> weight_vectors;
    for (auto& chain : chains) {
        int s = static_cast<int>(chain.size());
        for (int k = 0; k < s; ++k) weight_vectors[-(s - 1) + 2 * k].push_back(chain[static_cast<std::size_t>(k)]);
    }
    for (auto& [n, vs] : weight_vectors) rep.weight_dims[n] = static_cast<int>(vs.size());

    // Lefschetz: N^n : H^{-n} -> H^n has full rank
    for (int n = 0; n <= l - 1; ++n) {
        auto itm = weight_vectors.find(-n);
        auto itp = weight_vectors.find(n);
        int dm = itm == weight_vectors.end() ? 0 : static_cast<int>(itm->second.size());
        int dp = itp == weight_vectors.end() ? 0 : static_cast<int>(itp->second.size());
        if (dm != dp) {
            rep.lefschetz_ok = false;
            continue;
        }
        if (dm == 0) continue;
        Mat<K> Nn = matpow(N, n);
        std::vector<Vec<K>> images;
        Subspace<K> target = Subspace<K>::span(itp->second, q, zero);
        bool ok = true;
        for (auto& v : itm->second) {
            Vec<K> img = Nn.apply(v);
            if (!target.contains(img)) ok = false;
            images.push_back(img);
        }
        if (!ok || Subspace<K>::span(images, q, zero).dim() != dm) rep.lefschetz_ok = false;
    }

    // bigraded pieces (F^k cap H^n) / (F^{k+1} cap H^n)
    std::vector<Subspace<K>> fsteps;  // F^k = span of levels >= k, k = 0..l
    for (int k = 0; k <= l; ++k) {
        std::vector<Vec<K>> gens;
        for (int i = k; i < l; ++i) {
            for (int r = offset_of_level[static_cast<std::size_t>(i)];
                 r < offset_of_level[static_cast<std::size_t>(i)] + static_cast<int>(levels[static_cast<std::size_t>(i)].size()); ++r) {
                Vec<K> e(static_cast<std::size_t>(q), zero);
                e[static_cast<std::size_t>(r)] = one;
                gens.push_back(e);
            }
        }
        fsteps.push_back(Subspace<K>::span(gens, q, zero));
    }
    for (auto& [n, vs] : weight_vectors) {
        Subspace<K> Hn = Subspace<K>::span(vs, q, zero);
        for (int k = 0; k < l; ++k) {
            int dk = fsteps[static_cast<std::size_t>(k)].intersect(Hn, zero, one).dim();
            int dk1 = fsteps[static_cast<std::size_t>(k + 1)].intersect(Hn, zero, one).dim();
            if (dk - dk1 > 0) rep.bigraded[{-k, n + k}] = dk - dk1;
        }
    }

    // which reading of the multiplicity statement holds
    auto count_blocks = [&](int size) {
        int c = 0;
        for (int b : blocks)
            if (b == size) ++c;
        return c;
    };
    bool match_h = true, match_diff = true;
    for (int i = 0; i < l; ++i) {
        int hi = filt.partition[static_cast<std::size_t>(i)];
        int hnext = (i + 1 < l) ? filt.partition[static_cast<std::size_t>(i + 1)] : 0;
        if (count_blocks(i + 1) != hi) match_h = false;
        if (count_blocks(i + 1) != hi - hnext) match_diff = false;
    }
    rep.blocks_match_h = match_h;
    rep.blocks_match_h_difference = match_diff;
    return rep;
}

// ---------------------------------------------------------------------------
// Synthetic tables with prescribed Jordan type, for exercising the analyzer
// independently of any curve.
// ---------------------------------------------------------------------------

template <class FD, class K = typename FD::Elem>
A2Core<K> synthetic_chain_table(const FD& field, const std::vector<int>& blocks, int tail_dim) {
    int q = 0;
    for (int b : blocks) q += b;
    const int nblocks = static_cast<int>(blocks.size());
    const int ambient = 1 + q + tail_dim + nblocks;
    A2Core<K> core;
    core.ambient = ambient;
    core.zero = field.zero();
    core.one = field.one();

    auto unit = [&](int i) {
        Vec<K> v(static_cast<std::size_t>(ambient), field.zero());
        v[static_cast<std::size_t>(i)] = field.one();
        return v;
    };

    // ambient layout: [phi | chain vectors by block, deepest first | tails | u_j]
    std::vector<Vec<K>> wgens{unit(0)};
    std::vector<std::vector<int>> chain_index(static_cast<std::size_t>(nblocks));
    int pos = 1;
    for (int b = 0; b < nblocks; ++b)
        for (int k = 0; k < blocks[static_cast<std::size_t>(b)]; ++k) {
            chain_index[static_cast<std::size_t>(b)].push_back(pos);
            wgens.push_back(unit(pos));
            ++pos;
        }
    for (int t = 0; t < tail_dim; ++t) wgens.push_back(unit(pos + t));
    const int u0 = pos + tail_dim;
    core.W = Subspace<K>::span(wgens, ambient, field.zero());

    const int w = core.W.dim();
    core.G.assign(static_cast<std::size_t>(w), std::vector<Vec<K>>(static_cast<std::size_t>(w),
                                                                   Vec<K>(static_cast<std::size_t>(ambient), field.zero())));
    // L(phi) = 0; L(v_{b,k}) = v_{b,k-1} for k >= 1; L(v_{b,0}) = u_b; L(tail) = 0.
    // With unit-vector generators the RREF basis is the generators themselves,
    // in ambient index order: phi at 0, chain vectors next, tails after.
    for (int b = 0; b < nblocks; ++b) {
        const auto& idx = chain_index[static_cast<std::size_t>(b)];
        for (std::size_t k = 0; k < idx.size(); ++k) {
            // W-basis position of v_{b,k} is its ambient index (layout is unit vectors)
            int wi = idx[k];
            Vec<K> img = (k == 0) ? unit(u0 + b) : unit(idx[k - 1]);
            core.G[0][static_cast<std::size_t>(wi)] = img;
            core.G[static_cast<std::size_t>(wi)][0] = vec_scale(img, field.zero() - field.one());
        }
    }
    return core;
}

// ---------------------------------------------------------------------------
// General position of the zero divisor of a canonical form, verified on the
// rational points the scan can see.
// ---------------------------------------------------------------------------

enum class GppVerdict { VerifiedOnSample, Indeterminate, Failed };

struct GppReport {
    GppVerdict verdict = GppVerdict::Indeterminate;
    int zeros_found = 0;
    bool double_zero = false;
    bool independence_ok = true;
};

template <class F, class K = typename F::Elem>
GppReport gpp_check(const PlaneCurve<F>& C, const Vec<K>& phi_coords, std::uint64_t seed) {
    if (vec_is_zero(phi_coords)) throw Error("gpp_check: phi must be nonzero");
    const F& field = C.field;
    const auto& b1 = C.mform(1);
    Poly3<K> phi = b1.form(phi_coords);
    GppReport rep;

    auto pts = find_points_upto(C, 4096, Rng(seed).derive("gpp").next());
    std::vector<CurvePoint<K>> zeros;
    for (auto& p : pts)
        if (phi.eval(p.coords[0], p.coords[1], p.coords[2], field.one()).is_zero()) zeros.push_back(p);
    rep.zeros_found = static_cast<int>(zeros.size());

    for (auto& z : zeros) {
        auto s = expand_form(C, z, phi, 1, 4);
        if (s.order() >= 2) {
            rep.double_zero = true;
            rep.verdict = GppVerdict::Failed;
            return rep;
        }
    }

    // canonical coordinates of the zeros; every subset of size min(g-1, Z)
    // must be independent
    std::vector<Vec<K>> coords;
    for (auto& z : zeros) {
        Vec<K> v;
        for (int i = 0; i < b1.dim(); ++i)
            v.push_back(Poly3<K>::monomial(b1.monomial(i), field.one())
                            .eval(z.coords[0], z.coords[1], z.coords[2], field.one()));
        coords.push_back(v);
    }
    const int Z = static_cast<int>(zeros.size());
    const int k = std::min(C.g - 1, Z);
    std::vector<int> subset(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
    bool done = k == 0;
    while (!done) {
        std::vector<Vec<K>> rows;
        for (int i : subset) rows.push_back(coords[static_cast<std::size_t>(i)]);
        if (Subspace<K>::span(rows, b1.dim(), field.zero()).dim() != k) {
            rep.independence_ok = false;
            break;
        }
        // next combination
        int i = k - 1;
        while (i >= 0 && subset[static_cast<std::size_t>(i)] == Z - k + i) --i;
        if (i < 0) break;
        ++subset[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    if (!rep.independence_ok) {
        rep.verdict = GppVerdict::Failed;
    } else if (Z >= C.g) {
        rep.verdict = GppVerdict::VerifiedOnSample;
    } else {
        rep.verdict = GppVerdict::Indeterminate;
    }
    return rep;
}

}  // namespace ivhs
