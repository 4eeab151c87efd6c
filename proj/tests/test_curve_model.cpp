#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ivhs/curve.hpp"

using namespace ivhs;

namespace {
const FpField F101(101);

template <class F>
PlaneCurve<F> fermat(const F& field, int d) {
    Poly3<typename F::Elem> f;
    f.add_term(Mono{{d, 0, 0}}, field.one());
    f.add_term(Mono{{0, d, 0}}, field.one());
    f.add_term(Mono{{0, 0, d}}, field.one());
    return build_curve(field, f);
}
}  // namespace

TEST_CASE("build_curve: genus and rejection") {
    auto C6 = fermat(F101, 6);
    CHECK(C6.d == 6);
    CHECK(C6.g == 10);
    CHECK(C6.smoothness == Smoothness::Exhaustive);

    auto C4 = fermat(F101, 4);
    CHECK(C4.g == 3);

    CHECK_THROWS_AS(build_curve(F101, parse_poly(F101, "x^6 + y^6")), SingularCurve);
    CHECK_THROWS_AS(build_curve(F101, parse_poly(F101, "x^6 + y^2")), NotHomogeneous);
    CHECK_THROWS_AS(build_curve(F101, parse_poly(F101, "x^3 + y^3 + z^3")), DegreeTooSmall);
}

TEST_CASE("singular witness is found by the exhaustive scan") {
    // x^6 + y^6 is singular exactly at (0:0:1)
    try {
        build_curve(F101, parse_poly(F101, "x^6 + y^6"));
        FAIL("expected SingularCurve");
    } catch (const SingularCurve& e) {
        CHECK(std::string(e.witness).find("0:0:1") != std::string::npos);
    }
}

TEST_CASE("pluricanonical dimensions") {
    auto C6 = fermat(F101, 6);
    CHECK(C6.mform(1).dim() == 10);
    CHECK(C6.mform(2).dim() == 27);
    CHECK(C6.mform(3).dim() == 45);

    auto C4 = fermat(F101, 4);
    CHECK(C4.mform(2).dim() == 6);

    // dim H^0(mK) = (2m-1)(g-1) across degrees and primes
    for (std::uint64_t p : {101ULL, 419ULL, 1013ULL}) {
        FpField F(p);
        for (int d : {4, 5, 6}) {
            auto C = fermat(F, d);
            int g = (d - 1) * (d - 2) / 2;
            CHECK(C.mform(1).dim() == g);
            for (int m : {2, 3}) CHECK(C.mform(m).dim() == (2 * m - 1) * (g - 1));
        }
    }
}

TEST_CASE("reduce kills F-multiples") {
    auto C = fermat(F101, 6);
    Rng rng(3);
    const auto& b2 = C.mform(2);
    // F * (anything of degree 0): the only lower degree for m=2, d=6
    auto v = b2.reduce(F101, C.poly.scaled(F101.from_int(17)));
    CHECK(vec_is_zero(v));
    // m=3: F * random cubic
    const auto& b3 = C.mform(3);
    Poly3<Fp> cubic;
    for (const Mono& m : monomials_of_degree(3)) cubic.add_term(m, F101.random(rng));
    CHECK(vec_is_zero(b3.reduce(F101, C.poly * cubic)));
}

TEST_CASE("find_points: scan, determinism, exhaustion") {
    auto C = fermat(F101, 6);
    auto pts = find_points(C, 20, 42);
    CHECK(pts.size() == 20);
    for (auto& p : pts) CHECK(C.on_curve(p.coords));
    auto pts2 = find_points(C, 20, 42);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i] == pts2[i]);

    CHECK(find_points(C, 0, 1).empty());

    // x^4+y^4+z^4 has no rational points over F_5 (fourth powers are {0,1})
    FpField F5(5);
    auto C5 = fermat(F5, 4);
    CHECK_THROWS_AS(find_points(C5, 1, 7), NotEnoughPoints);
}

TEST_CASE("local expansion satisfies the curve equation and implicit derivative") {
    auto C = fermat(F101, 6);
    auto pts = find_points(C, 12, 9);
    for (auto& pt : pts) {
        const int prec = 8;
        auto le = local_expansion(C, pt, prec);
        auto val = detail::eval_on_branch(F101, C.affine_eq(pt.chart), pt.chart, le.a_series, le.b_series, prec);
        CHECK(val.is_zero());

        // d(dependent)/dt = -G_indep / G_dep on the branch
        bool t_is_a = pt.uniformizer == 0;
        const auto& dep = t_is_a ? le.b_series : le.a_series;
        auto ddep = series_derivative(F101, dep);
        auto ga = detail::eval_on_branch(F101, C.affine_da(pt.chart), pt.chart, le.a_series, le.b_series, prec);
        auto gb = detail::eval_on_branch(F101, C.affine_db(pt.chart), pt.chart, le.a_series, le.b_series, prec);
        auto expect = t_is_a ? (ga * gb.inverted()).negated() : (gb * ga.inverted()).negated();
        auto diff = ddep - expect.truncated(ddep.precision());
        CHECK(diff.is_zero());
    }
}

TEST_CASE("expand_form: constant term, valuation, multiplicativity") {
    auto C = fermat(F101, 6);
    auto pts = find_points(C, 10, 13);
    const auto& b1 = C.mform(1);

    // constant term is A(p)/den(p)^m
    for (auto& pt : pts) {
        Poly3<Fp> A = b1.form([&] {
            Vec<Fp> c(static_cast<std::size_t>(b1.dim()), F101.zero());
            c[0] = F101.one();
            return c;
        }());
        auto q = expand_form(C, pt, A, 1, 6);
        auto [ia, ib] = chart_affine_vars(pt.chart);
        Fp denom = pt.uniformizer == 0 ? C.eval_partial(ib, pt.coords) : C.eval_partial(ia, pt.coords);
        Fp expect = A.eval(pt.coords[0], pt.coords[1], pt.coords[2], F101.one()) / denom;
        if (pt.uniformizer == 1) expect = -expect;
        CHECK(q.coefficient(0, F101.zero()) == expect);
    }

    // divisibility by the uniformizer coordinate forces valuation
    {
        auto pt = pts[0];
        REQUIRE(pt.chart == 2);
        REQUIRE(pt.uniformizer == 0);
        // (x - x0 z)^2 * z: degree 3 adjoint with valuation >= 2 at pt
        Poly3<Fp> lin = parse_poly(F101, "x") - Poly3<Fp>::monomial(Mono{{0, 0, 1}}, pt.coords[0]);
        Poly3<Fp> A = lin * lin * parse_poly(F101, "z");
        auto q = expand_form(C, pt, A, 1, 6);
        CHECK(q.order() >= 2);
    }

    // multiplicativity across tensor degrees on random pairs
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        Vec<Fp> ca(static_cast<std::size_t>(b1.dim()), F101.zero());
        Vec<Fp> cb(static_cast<std::size_t>(b1.dim()), F101.zero());
        for (auto& c : ca) c = F101.random(rng);
        for (auto& c : cb) c = F101.random(rng);
        Poly3<Fp> A = b1.form(ca), B = b1.form(cb);
        auto& pt = pts[t % pts.size()];
        auto le = local_expansion(C, pt, 9);
        auto qa = expand_form_at(C, le, A, 1, 6);
        auto qb = expand_form_at(C, le, B, 1, 6);
        auto qab = expand_form_at(C, le, A * B, 2, 6);
        auto diff = qab - (qa * qb).truncated(6);
        CHECK(diff.is_zero());
    }
}

TEST_CASE("charts at infinity behave like affine charts") {
    auto C = fermat(F101, 6);
    // solve x^6 = -1 on the line z = 0
    std::vector<CurvePoint<Fp>> inf_pts;
    for (std::uint64_t xi = 0; xi < 101; ++xi) {
        Fp x = F101.element(xi);
        std::array<Fp, 3> pt{x, F101.one(), F101.zero()};
        if (C.on_curve(pt)) inf_pts.push_back(make_curve_point(C, pt));
    }
    REQUIRE(!inf_pts.empty());
    for (auto& pt : inf_pts) {
        CHECK(pt.chart != 2);
        const int prec = 7;
        auto le = local_expansion(C, pt, prec);
        auto val = detail::eval_on_branch(F101, C.affine_eq(pt.chart), pt.chart, le.a_series, le.b_series, prec);
        CHECK(val.is_zero());
        // multiplicativity still holds in these charts
        const auto& b1 = C.mform(1);
        Rng rng(29);
        Vec<Fp> ca(static_cast<std::size_t>(b1.dim()), F101.zero());
        for (auto& c : ca) c = F101.random(rng);
        Poly3<Fp> A = b1.form(ca);
        auto q1 = expand_form_at(C, le, A, 1, 5);
        auto q2 = expand_form_at(C, le, A * A, 2, 5);
        auto diff = q2 - (q1 * q1).truncated(5);
        CHECK(diff.is_zero());
    }
}

TEST_CASE("expand_form is linear") {
    auto C = fermat(F101, 5);
    auto pts = find_points(C, 4, 21);
    const auto& b1 = C.mform(1);
    Rng rng(23);
    for (auto& pt : pts) {
        auto le = local_expansion(C, pt, 8);
        Vec<Fp> ca(static_cast<std::size_t>(b1.dim()), F101.zero());
        Vec<Fp> cb(static_cast<std::size_t>(b1.dim()), F101.zero());
        for (auto& c : ca) c = F101.random(rng);
        for (auto& c : cb) c = F101.random(rng);
        Fp lam = F101.random(rng);
        auto qa = expand_form_at(C, le, b1.form(ca), 1, 6);
        auto qb = expand_form_at(C, le, b1.form(cb), 1, 6);
        auto qsum = expand_form_at(C, le, b1.form(vec_add(vec_scale(ca, lam), cb)), 1, 6);
        auto diff = qsum - (qa.scaled(lam) + qb);
        CHECK(diff.is_zero());
    }
}
