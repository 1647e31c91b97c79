#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mlambda/exact_rational.hpp"

using namespace mlambda;

namespace {

AffineForm s(std::size_t slots, std::size_t i) { return AffineForm::slot(slots, i); }
AffineForm cst(std::size_t slots, Rational c) { return AffineForm::constant_form(slots, c); }

Complex eval(const RationalCombination& rc, std::vector<Complex> x) {
    auto v = rc_eval(rc, x);
    REQUIRE(!v.pole);
    return v.value;
}

// Nested tanh-sinh over 0 <= t_1 <= ... <= t_k <= 1 of prod t_i^(b_i - 1).
double simplex_quadrature(const std::vector<double>& b) {
    boost::math::quadrature::tanh_sinh<double> ts;
    std::function<double(std::size_t, double)> inner = [&](std::size_t i, double upper) -> double {
        if (i == 0) return 1.0;
        return ts.integrate([&](double t) { return std::pow(t, b[i - 1] - 1) * inner(i - 1, t); }, 0.0, upper);
    };
    return inner(b.size(), 1.0);
}

std::vector<std::vector<int>> shuffles(int nu, int nv) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int i, int j) {
        if (i == nu && j == nv) {
            out.push_back(cur);
            return;
        }
        if (i < nu) {
            cur.push_back(i);
            rec(i + 1, j);
            cur.pop_back();
        }
        if (j < nv) {
            cur.push_back(nu + j);
            rec(i, j + 1);
            cur.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

}  // namespace

TEST_CASE("affine forms: arithmetic, normalization, printing") {
    AffineForm h = s(2, 0) + s(2, 1) + Rational(-2);
    CHECK(h.str() == "s1+s2-2");
    CHECK(h.hyperplane_str() == "s1+s2 = 2");
    CHECK((-h).normalized() == h);
    CHECK(h.scaled(3).normalized() == h.scaled(3));
    CHECK(h.ratio_of(h.scaled(-2)) == Rational(-2));
    CHECK(!h.ratio_of(s(2, 0)));
    CHECK(h.eval({Complex(1, 1), Complex(1, -1)}) == Complex(0, 0));
    CHECK(std::abs(h.slot_norm() - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("simplex monomial closed forms") {
    auto rc = simplex_monomial({s(2, 1), s(2, 0)});
    CHECK(rc.terms().size() == 1);
    CHECK(*rc_eval_exact(rc, {3, 2}) == Rational(1, 10));
    CHECK(*rc_eval_exact(rc, {1, 1}) == Rational(1, 2));
    CHECK(*rc_eval_exact(simplex_monomial({s(1, 0)}), {Rational(1, 4)}) == 4);
    CHECK(*rc_eval_exact(simplex_monomial({}), {}) == 1);
    CHECK(*rc_eval_exact(simplex_monomial({cst(0, 2), cst(0, 3)}), {}) == Rational(1, 10));
    CHECK(std::abs(simplex_quadrature({2, 3}) - 0.1) < 1e-12);
}

TEST_CASE("simplex monomial agrees with nested quadrature") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(1, 12);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t k = 1 + trial % 3;
        std::vector<AffineForm> b;
        std::vector<double> bd;
        for (std::size_t i = 0; i < k; ++i) {
            Rational q(num(rng), 4);
            b.push_back(cst(0, q));
            bd.push_back(to_double(q));
        }
        double exact = to_double(*rc_eval_exact(simplex_monomial(b), {}));
        CHECK(std::abs(exact - simplex_quadrature(bd)) < 1e-6);
    }
}

TEST_CASE("tangent word integrals") {
    PolyLetter one{{{1, 0}}, s(2, 1)};
    PolyLetter two{{{1, 0}}, s(2, 0)};
    auto rc = tangent_word_integral({one, two});
    CHECK(*rc_eval_exact(rc, {3, 2}) == Rational(1, 10));

    PolyLetter e4{{{Rational(1, 240), 0}}, s(1, 0)};
    CHECK(*rc_eval_exact(tangent_word_integral({e4}), {2}) == Rational(1, 480));

    // linearity in a constant per letter
    PolyLetter c3{{{3, 0}}, s(2, 1)};
    PolyLetter c5{{{5, 0}}, s(2, 0)};
    CHECK(*rc_eval_exact(tangent_word_integral({c3, c5}), {3, 2}) == Rational(15, 10));

    // degenerate: exponent form identically zero
    PolyLetter zero{{{1, 0}}, AffineForm(1, 0)};
    CHECK_THROWS_AS(tangent_word_integral({zero}), StructuralError);
}

TEST_CASE("tangent integrals satisfy the shuffle product") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> u(0.3, 2.5);
    const std::size_t r = 4;
    for (int trial = 0; trial < 5; ++trial) {
        int nu = 1 + trial % 2, nv = 1 + (trial / 2) % 2;
        std::vector<PolyLetter> letters;
        for (int i = 0; i < nu + nv; ++i) {
            PolyLetter l;
            l.monomials = {{Rational(1 + pick(rng)), 0}, {Rational(pick(rng), 2), Rational(1 + pick(rng))}};
            l.exponent = s(r, i) + Rational(pick(rng));
            letters.push_back(l);
        }
        std::vector<PolyLetter> a(letters.begin(), letters.begin() + nu), b(letters.begin() + nu, letters.end());
        std::vector<Complex> x;
        for (std::size_t i = 0; i < r; ++i) x.emplace_back(u(rng), u(rng) - 1.2);
        Complex lhs = eval(tangent_word_integral(a), x) * eval(tangent_word_integral(b), x);
        Complex rhs = 0;
        for (const auto& perm : shuffles(nu, nv)) {
            std::vector<PolyLetter> w;
            for (int k : perm) w.push_back(letters[k]);
            rhs += eval(tangent_word_integral(w), x);
        }
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("rc_eval reports vanishing forms") {
    auto rc = simplex_monomial({s(2, 1), s(2, 0)});
    auto v = rc_eval(rc, {1.0, -1.0});
    REQUIRE(v.pole);
    CHECK(v.pole->normalized() == (s(2, 0) + s(2, 1)).normalized());
    CHECK(!rc_eval_exact(rc, {1, -1}));
}

TEST_CASE("residues in the written normalization") {
    auto rc = simplex_monomial({s(2, 1), s(2, 0)});
    AffineForm h = s(2, 0) + s(2, 1);
    CHECK(std::abs(rc_residue(rc, h, {3.0, -3.0}) - Complex(-1.0 / 3)) < 1e-15);
    CHECK(std::abs(rc_residue(rc, s(2, 1), {5.0, 0.0}) - Complex(1.0 / 5)) < 1e-15);
    CHECK(std::abs(rc_residue(simplex_monomial({s(1, 0)}), s(1, 0), {0.0}) - 1.0) < 1e-15);
    // rescaling the written form rescales the residue
    CHECK(std::abs(rc_residue(rc, h.scaled(2), {3.0, -3.0}) - Complex(-2.0 / 3)) < 1e-15);
    CHECK_THROWS_AS(rc_residue(rc, h, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(rc_residue(rc, h, {0.0, 0.0}), IntersectionError);
}

TEST_CASE("residue equals the extrapolated numeric limit") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    RationalCombination rc = simplex_monomial({s(3, 2), s(3, 1), s(3, 0) + Rational(-1)});
    rc = rc + simplex_monomial({s(3, 1) + s(3, 2), s(3, 0)}).scaled(Rational(3, 2));
    AffineForm h = s(3, 1) + s(3, 2);
    for (int trial = 0; trial < 5; ++trial) {
        Complex a{u(rng), u(rng)}, b{u(rng), u(rng)};
        std::vector<Complex> x{a, b, -b};
        Complex res = rc_residue(rc, h, x);
        // h(x + e n) = 2 e along n = (0, 1, 1); symmetric difference then Richardson
        auto g = [&](double e) {
            auto xp = x, xm = x;
            xp[1] += e, xp[2] += e, xm[1] -= e, xm[2] -= e;
            return 0.5 * (2 * e * rc_eval(rc, xp).value - 2 * e * rc_eval(rc, xm).value);
        };
        double e = 1e-3;
        Complex lim = (4.0 * g(e / 2) - g(e)) / 3.0;
        CHECK(std::abs(res - lim) < 1e-8 * std::max(1.0, std::abs(res)));
    }
}

TEST_CASE("double poles raise a multiplicity error listing the terms") {
    RationalCombination rc;
    rc.add_term(2, {s(2, 0), s(2, 0).scaled(2)});
    try {
        rc_residue(rc, s(2, 0), {0.0, 1.0});
        FAIL("expected MultiplicityError");
    } catch (const MultiplicityError& e) {
        REQUIRE(e.terms.size() == 1);
        CHECK(e.terms[0].find("s1") != std::string::npos);
    }
}
