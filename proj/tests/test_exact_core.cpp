#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ivhs/field.hpp"
#include "ivhs/linalg.hpp"
#include "ivhs/poly.hpp"
#include "ivhs/rng.hpp"
#include "ivhs/series.hpp"

using namespace ivhs;

namespace {

const FpField F101(101);
const FpField F5(5);

Mat<Fp> random_matrix(const FpField& F, int rows, int cols, Rng& rng) {
    Mat<Fp> m(rows, cols, F.zero());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = F.random(rng);
    return m;
}

// every vector of F_5^n, for brute-force oracles
std::vector<Vec<Fp>> all_vectors(const FpField& F, int n) {
    std::vector<Vec<Fp>> out;
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        Vec<Fp> v;
        for (int i = 0; i < n; ++i) v.push_back(F.element(idx[static_cast<std::size_t>(i)]));
        out.push_back(v);
        int k = 0;
        while (k < n) {
            if (++idx[static_cast<std::size_t>(k)] < F.size()) break;
            idx[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == n) break;
    }
    return out;
}

}  // namespace

TEST_CASE("Fp field axioms on random samples") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        Fp a = F101.random(rng), b = F101.random(rng), c = F101.random(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == F101.zero());
        if (!a.is_zero()) CHECK(a * a.inv() == F101.one());
    }
    CHECK_THROWS_AS(F101.zero().inv(), Error);
}

TEST_CASE("Rational field exactness") {
    Rat a(1, 3), b(2, 5);
    CHECK((a + b).str() == "11/15");
    CHECK((a * b).str() == "2/15");
    CHECK(a * a.inv() == Rat::from_int(1));
    Rng rng(7);
    QQField Q;
    for (int t = 0; t < 50; ++t) {
        Rat x = Q.random(rng), y = Q.random(rng);
        CHECK(x + y - y == x);
        if (!y.is_zero()) CHECK((x / y) * y == x);
    }
}

TEST_CASE("rref examples") {
    auto id3 = Mat<Fp>::identity(3, F101.zero(), F101.one());
    auto r = rref(id3);
    CHECK(r.rank == 3);
    CHECK(r.pivots == std::vector<int>{0, 1, 2});

    Mat<Fp> z(2, 4, F101.zero());
    CHECK(rref(z).rank == 0);

    Mat<Fp> m(2, 2, F101.zero());
    m.at(0, 0) = F101.from_int(1);
    m.at(0, 1) = F101.from_int(2);
    m.at(1, 0) = F101.from_int(2);
    m.at(1, 1) = F101.from_int(4);
    CHECK(rref(m).rank == 1);
}

TEST_CASE("rref is idempotent") {
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        auto m = random_matrix(F101, 5, 7, rng);
        auto r1 = rref(m);
        auto r2 = rref(r1.reduced);
        CHECK(r1.reduced == r2.reduced);
        CHECK(r1.rank == r2.rank);
    }
}

TEST_CASE("kernel: trivial cases and rank-nullity") {
    auto id4 = Mat<Fp>::identity(4, F101.zero(), F101.one());
    CHECK(kernel(id4, F101.zero(), F101.one()).dim() == 0);

    Mat<Fp> z(3, 6, F101.zero());
    CHECK(kernel(z, F101.zero(), F101.one()).dim() == 6);

    // a random 5x8 of full rank 5 has kernel of dimension 3
    Rng rng(5);
    Mat<Fp> m(0, 0, F101.zero());
    int rank = 0;
    do {
        m = random_matrix(F101, 5, 8, rng);
        rank = rref(m).rank;
    } while (rank != 5);
    auto ker = kernel(m, F101.zero(), F101.one());
    CHECK(ker.dim() == 3);
    for (int i = 0; i < ker.dim(); ++i) CHECK(vec_is_zero(m.apply(ker.basis_vector(i))));
}

TEST_CASE("preimage: trivial cases") {
    Rng rng(17);
    auto m = random_matrix(F101, 6, 6, rng);
    auto full = Subspace<Fp>::full(6, F101.zero(), F101.one());
    CHECK(preimage(m, full, F101.zero(), F101.one()).dim() == 6);

    auto zero_sub = Subspace<Fp>::zero(6, F101.zero());
    auto pre0 = preimage(m, zero_sub, F101.zero(), F101.one());
    CHECK(pre0 == kernel(m, F101.zero(), F101.one()));
}

TEST_CASE("preimage agrees with exhaustive enumeration over F_5") {
    Rng rng(29);
    auto vectors = all_vectors(F5, 4);
    for (int trial = 0; trial < 8; ++trial) {
        auto m = random_matrix(F5, 4, 4, rng);
        std::vector<Vec<Fp>> gens;
        for (int i = 0; i < 2; ++i) {
            Vec<Fp> g;
            for (int j = 0; j < 4; ++j) g.push_back(F5.random(rng));
            gens.push_back(g);
        }
        auto s = Subspace<Fp>::span(gens, 4, F5.zero());
        auto pre = preimage(m, s, F5.zero(), F5.one());

        std::size_t count = 0;
        for (auto& v : vectors) {
            bool in_pre = s.contains(m.apply(v));
            if (in_pre) {
                ++count;
                CHECK(pre.contains(v));
            } else {
                CHECK(!pre.contains(v));
            }
        }
        std::size_t expected = 1;
        for (int i = 0; i < pre.dim(); ++i) expected *= 5;
        CHECK(count == expected);

        // kernel is always contained in a preimage
        auto ker = kernel(m, F5.zero(), F5.one());
        CHECK(pre.contains_subspace(ker));
    }
}

TEST_CASE("preimage is monotone in the target subspace") {
    Rng rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        auto m = random_matrix(F101, 5, 5, rng);
        std::vector<Vec<Fp>> gens;
        for (int i = 0; i < 3; ++i) {
            Vec<Fp> g;
            for (int j = 0; j < 5; ++j) g.push_back(F101.random(rng));
            gens.push_back(g);
        }
        auto big = Subspace<Fp>::span(gens, 5, F101.zero());
        gens.pop_back();
        auto small = Subspace<Fp>::span(gens, 5, F101.zero());
        if (!big.contains_subspace(small)) continue;
        auto pre_small = preimage(m, small, F101.zero(), F101.one());
        auto pre_big = preimage(m, big, F101.zero(), F101.one());
        CHECK(pre_big.contains_subspace(pre_small));
    }
}

TEST_CASE("subspace sum/intersection dimension formula") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vec<Fp>> ga, gb;
        for (int i = 0; i < 3; ++i) {
            Vec<Fp> v;
            for (int j = 0; j < 6; ++j) v.push_back(F101.random(rng));
            ga.push_back(v);
        }
        for (int i = 0; i < 2; ++i) {
            Vec<Fp> v;
            for (int j = 0; j < 6; ++j) v.push_back(F101.random(rng));
            gb.push_back(v);
        }
        gb.push_back(ga[0]);  // force nontrivial intersection
        auto a = Subspace<Fp>::span(ga, 6, F101.zero());
        auto b = Subspace<Fp>::span(gb, 6, F101.zero());
        auto s = a.sum(b, F101.zero());
        auto i = a.intersect(b, F101.zero(), F101.one());
        CHECK(s.dim() + i.dim() == a.dim() + b.dim());
        for (int k = 0; k < i.dim(); ++k) {
            CHECK(a.contains(i.basis_vector(k)));
            CHECK(b.contains(i.basis_vector(k)));
        }
    }
}

TEST_CASE("LinearSolver factor-once solve-many") {
    Rng rng(41);
    auto m = random_matrix(F101, 7, 5, rng);
    LinearSolver<Fp> solver(m, F101.zero(), F101.one());
    for (int t = 0; t < 10; ++t) {
        Vec<Fp> x0;
        for (int j = 0; j < 5; ++j) x0.push_back(F101.random(rng));
        Vec<Fp> b = m.apply(x0);
        auto x = solver.solve(b);
        REQUIRE(x.has_value());
        CHECK(m.apply(*x) == b);
    }
    // an inconsistent rhs must be rejected (rank < rows here)
    if (solver.rank() < 7) {
        Vec<Fp> b(7, F101.zero());
        bool found_inconsistent = false;
        for (int t = 0; t < 50 && !found_inconsistent; ++t) {
            for (auto& c : b) c = F101.random(rng);
            if (!solver.solve(b).has_value()) found_inconsistent = true;
        }
        CHECK(found_inconsistent);
    }
}

TEST_CASE("Laurent series examples") {
    auto one = F101.one();
    auto t = LaurentSeries<Fp>::power(one, 1, 8);
    auto c1 = LaurentSeries<Fp>::constant(one, 8);
    auto a = c1 + t;        // 1 + t
    auto b = c1 - t;        // 1 - t
    auto prod = a * b;      // 1 - t^2
    CHECK(prod.coefficient(0, F101.zero()) == one);
    CHECK(prod.coefficient(1, F101.zero()).is_zero());
    CHECK(prod.coefficient(2, F101.zero()) == -one);

    auto inv = a.truncated(3).inverted();  // 1 - t + t^2
    CHECK(inv.coefficient(0, F101.zero()) == one);
    CHECK(inv.coefficient(1, F101.zero()) == -one);
    CHECK(inv.coefficient(2, F101.zero()) == one);
    CHECK((a.truncated(3) * inv).coefficient(0, F101.zero()) == one);

    // t^{-2} * (3t + 5t^2) = 3 t^{-1} + 5; residue 3
    auto tail = LaurentSeries<Fp>::from_coeffs(1, {F101.from_int(3), F101.from_int(5)}, 8);
    auto shifted = tail.shifted(-2);
    CHECK(shifted.residue(F101.zero()) == F101.from_int(3));
    CHECK(shifted.coefficient(0, F101.zero()) == F101.from_int(5));
}

TEST_CASE("Laurent series precision propagation and errors") {
    auto one = F101.one();
    auto a = LaurentSeries<Fp>::from_coeffs(0, {one, one}, 4);
    CHECK_THROWS_AS(a.coefficient(4, F101.zero()), PrecisionExhausted);
    auto b = LaurentSeries<Fp>::from_coeffs(2, {one}, 5);  // t^2 known to t^4
    auto p = a * b;
    CHECK(p.precision() == std::min(0 + 5, 2 + 4));  // min(ord(a)+prec(b), ord(b)+prec(a))

    // residue needs the window to reach t^{-1}
    CHECK_THROWS_AS(a.residue(F101.zero()), Error);
}

TEST_CASE("series multiplication associative and commutative within precision") {
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        auto mk = [&](int lo) {
            std::vector<Fp> cs;
            for (int i = 0; i < 5; ++i) cs.push_back(F101.random(rng));
            return LaurentSeries<Fp>::from_coeffs(lo, cs, lo + 5);
        };
        auto a = mk(static_cast<int>(rng.below(5)) - 2);
        auto b = mk(static_cast<int>(rng.below(5)) - 2);
        auto c = mk(static_cast<int>(rng.below(5)) - 2);
        auto ab_c = (a * b) * c;
        auto a_bc = a * (b * c);
        int prec = std::min(ab_c.precision(), a_bc.precision());
        for (int e = std::min(ab_c.order(), a_bc.order()); e < prec; ++e)
            CHECK(ab_c.coefficient(e, F101.zero()) == a_bc.coefficient(e, F101.zero()));
        auto ab = a * b;
        auto ba = b * a;
        CHECK(ab == ba);
    }
}

TEST_CASE("series composition") {
    auto one = F101.one();
    // a(u) = 1 + u + u^2, b(t) = t + t^2 -> a(b) = 1 + t + 2t^2 + ...
    auto a = LaurentSeries<Fp>::from_coeffs(0, {one, one, one}, 6);
    auto b = LaurentSeries<Fp>::from_coeffs(1, {one, one}, 6);
    auto comp = a.compose(b, one);
    CHECK(comp.coefficient(0, F101.zero()) == one);
    CHECK(comp.coefficient(1, F101.zero()) == one);
    CHECK(comp.coefficient(2, F101.zero()) == F101.from_int(2));
}

TEST_CASE("Poly3 parsing, printing, arithmetic") {
    auto f = parse_poly(F101, "x^6 + y^6 + z^6");
    CHECK(f.is_homogeneous());
    CHECK(f.degree() == 6);
    CHECK(f.term_count() == 3);

    auto g = parse_poly(F101, "3*x*y - 2*z^2 + x^2");
    CHECK(g.is_homogeneous());
    CHECK(g.eval(F101.one(), F101.one(), F101.one(), F101.one()) == F101.from_int(2));

    auto h = parse_poly(F101, "x - y");
    auto prod = h * h;
    CHECK(prod == parse_poly(F101, "x^2 - 2*x*y + y^2"));

    auto dz = f.derivative(F101, 2);
    CHECK(dz == parse_poly(F101, "6*z^5"));

    CHECK_THROWS_AS(parse_poly(F101, "x^6 + + y"), ParseError);
    CHECK_THROWS_AS(parse_poly(F101, "w^2"), ParseError);

    // round trip through canonical printing
    auto f2 = parse_poly(F101, f.str());
    CHECK(f2 == f);
}

TEST_CASE("monomial enumeration and indexing") {
    auto m3 = monomials_of_degree(3);
    CHECK(static_cast<int>(m3.size()) == monomial_space_dim(3));
    for (std::size_t i = 0; i < m3.size(); ++i) CHECK(monomial_index(3, m3[i]) == static_cast<int>(i));
    for (std::size_t i = 0; i + 1 < m3.size(); ++i) CHECK(m3[i] < m3[i + 1]);
}

TEST_CASE("Poly1 divmod and gcd") {
    // (u^2 - 1) = (u - 1)(u + 1)
    Poly1<Fp> p({F101.from_int(-1), F101.zero(), F101.one()});
    Poly1<Fp> d({F101.from_int(-1), F101.one()});
    auto [q, r] = p.divmod(d);
    CHECK(r.is_zero());
    CHECK(q.degree() == 1);
    CHECK(Poly1<Fp>::gcd(p, d).degree() == 1);

    // squarefree detection
    auto sq = d * d;
    CHECK(!sq.is_squarefree(F101));
    CHECK(p.is_squarefree(F101));
}
