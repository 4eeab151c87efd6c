#pragma once

#include <optional>
#include <vector>

#include "ivhs/errors.hpp"

namespace ivhs {

template <class K>
using Vec = std::vector<K>;

template <class K>
K dot(const Vec<K>& a, const Vec<K>& b, const K& zero) {
    if (a.size() != b.size()) throw Error("dot: size mismatch");
    K acc = zero;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

template <class K>
bool vec_is_zero(const Vec<K>& a) {
    for (auto& c : a)
        if (!c.is_zero()) return false;
    return true;
}

template <class K>
Vec<K> vec_add(const Vec<K>& a, const Vec<K>& b) {
    if (a.size() != b.size()) throw Error("vec_add: size mismatch");
    Vec<K> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

template <class K>
Vec<K> vec_sub(const Vec<K>& a, const Vec<K>& b) {
    if (a.size() != b.size()) throw Error("vec_sub: size mismatch");
    Vec<K> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

template <class K>
Vec<K> vec_scale(const Vec<K>& a, const K& c) {
    Vec<K> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

// ---------------------------------------------------------------------------
// Dense matrices.
// ---------------------------------------------------------------------------

template <class K>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols, const K& zero)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), zero) {}

    static Mat from_rows(const std::vector<Vec<K>>& rows, int cols, const K& zero) {
        Mat m(static_cast<int>(rows.size()), cols, zero);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(rows[i].size()) != cols) throw Error("Mat::from_rows: ragged input");
            for (int j = 0; j < cols; ++j) m.at(static_cast<int>(i), j) = rows[i][static_cast<std::size_t>(j)];
        }
        return m;
    }

    static Mat identity(int n, const K& zero, const K& one) {
        Mat m(n, n, zero);
        for (int i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    K& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)]; }
    const K& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)]; }

    Vec<K> row(int i) const {
        Vec<K> r(static_cast<std::size_t>(cols_));
        for (int j = 0; j < cols_; ++j) r[static_cast<std::size_t>(j)] = at(i, j);
        return r;
    }

    Vec<K> apply(const Vec<K>& x) const {
        if (static_cast<int>(x.size()) != cols_) throw Error("Mat::apply: size mismatch");
        Vec<K> y;
        y.reserve(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) {
            K acc = data_.empty() ? K{} : data_[0] - data_[0];
            for (int j = 0; j < cols_; ++j) acc += at(i, j) * x[static_cast<std::size_t>(j)];
            y.push_back(acc);
        }
        return y;
    }

    Mat multiply(const Mat& o, const K& zero) const {
        if (cols_ != o.rows_) throw Error("Mat::multiply: size mismatch");
        Mat r(rows_, o.cols_, zero);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const K& a = at(i, k);
                if (a.is_zero()) continue;
                for (int j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
            }
        return r;
    }

    Mat transposed(const K& zero) const {
        Mat r(cols_, rows_, zero);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  private:
    int rows_, cols_;
    std::vector<K> data_;
};

// ---------------------------------------------------------------------------
// Reduced row echelon form; pivot selection is first-nonzero, deterministic.
// ---------------------------------------------------------------------------

template <class K>
struct RrefResult {
    Mat<K> reduced;
    std::vector<int> pivots;
    int rank = 0;
};

template <class K>
RrefResult<K> rref(Mat<K> m) {
    RrefResult<K> out;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int sel = -1;
        for (int i = r; i < m.rows(); ++i)
            if (!m.at(i, c).is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(r, j));
        K inv = m.at(r, c).inv();
        for (int j = c; j < m.cols(); ++j) m.at(r, j) = m.at(r, j) * inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            K f = m.at(i, c);
            for (int j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    out.reduced = std::move(m);
    return out;
}

// ---------------------------------------------------------------------------
// Subspaces, stored as canonical RREF bases. Equality of subspaces is literal
// equality of the stored data.
// ---------------------------------------------------------------------------

template <class K>
class Subspace {
  public:
    Subspace() : ambient_(0) {}

    static Subspace zero(int ambient, const K& zero) {
        Subspace s;
        s.ambient_ = ambient;
        s.basis_ = Mat<K>(0, ambient, zero);
        return s;
    }

    static Subspace full(int ambient, const K& zero, const K& one) {
        Subspace s;
        s.ambient_ = ambient;
        s.basis_ = Mat<K>::identity(ambient, zero, one);
        for (int i = 0; i < ambient; ++i) s.pivots_.push_back(i);
        return s;
    }

    static Subspace span(const std::vector<Vec<K>>& vectors, int ambient, const K& zero) {
        auto rr = rref(Mat<K>::from_rows(vectors, ambient, zero));
        Subspace s;
        s.ambient_ = ambient;
        s.pivots_ = rr.pivots;
        s.basis_ = Mat<K>(rr.rank, ambient, zero);
        for (int i = 0; i < rr.rank; ++i)
            for (int j = 0; j < ambient; ++j) s.basis_.at(i, j) = rr.reduced.at(i, j);
        return s;
    }

    int ambient() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const Mat<K>& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }
    Vec<K> basis_vector(int i) const { return basis_.row(i); }

    // residual of v after eliminating pivot coordinates; zero iff v is a member
    Vec<K> reduce(Vec<K> v) const {
        if (static_cast<int>(v.size()) != ambient_) throw Error("Subspace::reduce: size mismatch");
        for (int i = 0; i < dim(); ++i) {
            K c = v[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(i)])];
            if (c.is_zero()) continue;
            for (int j = 0; j < ambient_; ++j) v[static_cast<std::size_t>(j)] -= c * basis_.at(i, j);
        }
        return v;
    }

    bool contains(const Vec<K>& v) const { return vec_is_zero(reduce(v)); }

    // coordinates in the RREF basis (throws unless v is a member)
    Vec<K> coords(const Vec<K>& v) const {
        if (!contains(v)) throw Error("Subspace::coords: vector not in subspace");
        Vec<K> c;
        c.reserve(static_cast<std::size_t>(dim()));
        for (int i = 0; i < dim(); ++i) c.push_back(v[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(i)])]);
        return c;
    }

    Vec<K> from_coords(const Vec<K>& c, const K& zero) const {
        if (static_cast<int>(c.size()) != dim()) throw Error("Subspace::from_coords: size mismatch");
        Vec<K> v(static_cast<std::size_t>(ambient_), zero);
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < ambient_; ++j)
                v[static_cast<std::size_t>(j)] += c[static_cast<std::size_t>(i)] * basis_.at(i, j);
        return v;
    }

    bool contains_subspace(const Subspace& t) const {
        for (int i = 0; i < t.dim(); ++i)
            if (!contains(t.basis_vector(i))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && pivots_ == o.pivots_ && basis_ == o.basis_;
    }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    Subspace sum(const Subspace& o, const K& zero) const {
        std::vector<Vec<K>> rows;
        for (int i = 0; i < dim(); ++i) rows.push_back(basis_vector(i));
        for (int i = 0; i < o.dim(); ++i) rows.push_back(o.basis_vector(i));
        return span(rows, ambient_, zero);
    }

    Subspace intersect(const Subspace& o, const K& zero, const K& one) const {
        // x = B^T a = C^T b; kernel of [B^T | -C^T]
        if (ambient_ != o.ambient_) throw Error("Subspace::intersect: ambient mismatch");
        int da = dim(), db = o.dim();
        if (da == 0 || db == 0) return Subspace::zero(ambient_, zero);
        Mat<K> m(ambient_, da + db, zero);
        for (int i = 0; i < da; ++i)
            for (int r = 0; r < ambient_; ++r) m.at(r, i) = basis_.at(i, r);
        for (int i = 0; i < db; ++i)
            for (int r = 0; r < ambient_; ++r) m.at(r, da + i) = zero - o.basis_.at(i, r);
        auto rr = rref(std::move(m));
        // free columns give kernel vectors (a, b); collect B^T a
        std::vector<Vec<K>> gens;
        std::vector<bool> is_pivot(static_cast<std::size_t>(da + db), false);
        for (int p : rr.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
        for (int fc = 0; fc < da + db; ++fc) {
            if (is_pivot[static_cast<std::size_t>(fc)]) continue;
            Vec<K> a(static_cast<std::size_t>(da), zero);
            auto assign = [&](int col, const K& val) {
                if (col < da) a[static_cast<std::size_t>(col)] = val;
            };
            assign(fc, one);
            for (int i = 0; i < rr.rank; ++i) assign(rr.pivots[static_cast<std::size_t>(i)], zero - rr.reduced.at(i, fc));
            Vec<K> x(static_cast<std::size_t>(ambient_), zero);
            for (int i = 0; i < da; ++i)
                for (int r = 0; r < ambient_; ++r) x[static_cast<std::size_t>(r)] += a[static_cast<std::size_t>(i)] * basis_.at(i, r);
            gens.push_back(std::move(x));
        }
        return span(gens, ambient_, zero);
    }

  private:
    int ambient_;
    Mat<K> basis_;
    std::vector<int> pivots_;
};

template <class K>
Subspace<K> kernel(const Mat<K>& m, const K& zero, const K& one) {
    auto rr = rref(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (int p : rr.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Vec<K>> gens;
    for (int fc = 0; fc < m.cols(); ++fc) {
        if (is_pivot[static_cast<std::size_t>(fc)]) continue;
        Vec<K> v(static_cast<std::size_t>(m.cols()), zero);
        v[static_cast<std::size_t>(fc)] = one;
        for (int i = 0; i < rr.rank; ++i)
            v[static_cast<std::size_t>(rr.pivots[static_cast<std::size_t>(i)])] = zero - rr.reduced.at(i, fc);
        gens.push_back(std::move(v));
    }
    return Subspace<K>::span(gens, m.cols(), zero);
}

// {x : Mx in S}; contains kernel(M)
template <class K>
Subspace<K> preimage(const Mat<K>& m, const Subspace<K>& s, const K& zero, const K& one) {
    if (s.ambient() != m.rows()) throw Error("preimage: S must live in the codomain of M");
    // residual-after-reduction operator as a matrix: column p_i is e_{p_i} - b_i
    Mat<K> resid = Mat<K>::identity(m.rows(), zero, one);
    for (int i = 0; i < s.dim(); ++i) {
        int p = s.pivots()[static_cast<std::size_t>(i)];
        for (int r = 0; r < m.rows(); ++r) resid.at(r, p) -= s.basis().at(i, r);
    }
    return kernel(resid.multiply(m, zero), zero, one);
}

// extend T (contained in S) to a basis of S; returns complement representatives
template <class K>
std::vector<Vec<K>> complement_in(const Subspace<K>& s, const Subspace<K>& t, const K& zero) {
    std::vector<Vec<K>> picked;
    Subspace<K> acc = t;
    for (int i = 0; i < s.dim(); ++i) {
        Vec<K> v = s.basis_vector(i);
        if (acc.contains(v)) continue;
        picked.push_back(v);
        std::vector<Vec<K>> rows;
        for (int j = 0; j < acc.dim(); ++j) rows.push_back(acc.basis_vector(j));
        rows.push_back(v);
        acc = Subspace<K>::span(rows, s.ambient(), zero);
    }
    return picked;
}

// ---------------------------------------------------------------------------
// Factor-once / solve-many Gaussian elimination: [A | I] -> [R | E] with R in
// RREF and E recording the row operations, so solving Ax=b costs one E*b.
// ---------------------------------------------------------------------------

template <class K>
class LinearSolver {
  public:
    LinearSolver(const Mat<K>& a, const K& zero, const K& one) : zero_(zero), one_(one), n_(a.cols()), m_(a.rows()) {
        Mat<K> aug(a.rows(), a.cols() + a.rows(), zero);
        for (int i = 0; i < a.rows(); ++i) {
            for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
            aug.at(i, a.cols() + i) = one;
        }
        // RREF restricted to the A-columns for pivoting
        int r = 0;
        for (int c = 0; c < n_ && r < m_; ++c) {
            int sel = -1;
            for (int i = r; i < m_; ++i)
                if (!aug.at(i, c).is_zero()) {
                    sel = i;
                    break;
                }
            if (sel < 0) continue;
            if (sel != r)
                for (int j = 0; j < aug.cols(); ++j) std::swap(aug.at(sel, j), aug.at(r, j));
            K inv = aug.at(r, c).inv();
            for (int j = 0; j < aug.cols(); ++j) aug.at(r, j) = aug.at(r, j) * inv;
            for (int i = 0; i < m_; ++i) {
                if (i == r || aug.at(i, c).is_zero()) continue;
                K f = aug.at(i, c);
                for (int j = 0; j < aug.cols(); ++j) aug.at(i, j) -= f * aug.at(r, j);
            }
            pivots_.push_back(c);
            ++r;
        }
        rank_ = r;
        rref_ = Mat<K>(m_, n_, zero);
        e_ = Mat<K>(m_, m_, zero);
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) rref_.at(i, j) = aug.at(i, j);
            for (int j = 0; j < m_; ++j) e_.at(i, j) = aug.at(i, n_ + j);
        }
    }

    int rank() const { return rank_; }
    const std::vector<int>& pivots() const { return pivots_; }

    // particular solution of Ax = b, or nullopt when inconsistent
    std::optional<Vec<K>> solve(const Vec<K>& b) const {
        Vec<K> eb = e_.apply(b);
        for (int i = rank_; i < m_; ++i)
            if (!eb[static_cast<std::size_t>(i)].is_zero()) return std::nullopt;
        Vec<K> x(static_cast<std::size_t>(n_), zero_);
        for (int i = 0; i < rank_; ++i) x[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(i)])] = eb[static_cast<std::size_t>(i)];
        return x;
    }

    Subspace<K> kernel_space() const {
        std::vector<bool> is_pivot(static_cast<std::size_t>(n_), false);
        for (int p : pivots_) is_pivot[static_cast<std::size_t>(p)] = true;
        std::vector<Vec<K>> gens;
        for (int fc = 0; fc < n_; ++fc) {
            if (is_pivot[static_cast<std::size_t>(fc)]) continue;
            Vec<K> v(static_cast<std::size_t>(n_), zero_);
            v[static_cast<std::size_t>(fc)] = one_;
            for (int i = 0; i < rank_; ++i)
                v[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(i)])] = zero_ - rref_.at(i, fc);
            gens.push_back(std::move(v));
        }
        return Subspace<K>::span(gens, n_, zero_);
    }

  private:
    K zero_, one_;
    int n_, m_, rank_ = 0;
    Mat<K> rref_, e_;
    std::vector<int> pivots_;
};

}  // namespace ivhs
