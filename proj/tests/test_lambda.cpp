#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "mlambda/lambda.hpp"

using namespace mlambda;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

ThetaPtr th(const std::string& name, std::vector<int> params = {}) { return make_builtin_theta(name, params); }

std::vector<ThetaPtr> riemann(std::size_t r) { return std::vector<ThetaPtr>(r, th("riemann")); }

Complex lam(const std::vector<ThetaPtr>& t, const std::vector<Complex>& s, const EvalParams& p = {}) {
    return lambda_eval(build_expression(t), s, p).value;
}

double defect(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

// pi^(-s/2) Gamma(s/2) zeta(s) for real s != 0, 1
double xi_oracle(double s) { return std::pow(kPi, -s / 2) * boost::math::tgamma(s / 2) * boost::math::zeta(s); }

std::vector<std::string> plane_strings(const LambdaExpression& e) {
    std::vector<std::string> out;
    for (const auto& h : poles(e)) out.push_back(h.normalized().hyperplane_str());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> sorted(std::vector<AffineForm> forms) {
    std::vector<std::string> out;
    for (auto& h : forms) out.push_back(h.normalized().hyperplane_str());
    std::sort(out.begin(), out.end());
    return out;
}

AffineForm sum_of(std::size_t r, std::size_t lo, std::size_t hi, Rational b) {
    AffineForm h(r, -b);
    for (std::size_t i = lo; i < hi; ++i) h = h + AffineForm::slot(r, i);
    return h;
}

}  // namespace

TEST_CASE("riemann xi values") {
    CHECK(defect(lam(riemann(1), {2.0}), kPi / 6) < 1e-12);
    CHECK(defect(lam(riemann(1), {0.5}), -3.97696622550651) < 1e-12);
    CHECK(defect(lam(riemann(1), {0.5}), xi_oracle(0.5)) < 1e-12);
    for (double s : {-4.5, -1.5, 0.3, 3.0, 7.25, 14.0}) CHECK(defect(lam(riemann(1), {s}), xi_oracle(s)) < 1e-10);
    CHECK(defect(lam(riemann(2), {2.0, 2.0}), kPi * kPi / 72) < 1e-10);
}

TEST_CASE("theta plus at one") {
    CHECK(defect(kPi * lam({th("theta_plus")}, {1.0}), -8 * std::log(2.0)) < 1e-10);
}

TEST_CASE("expression structure for r = 1") {
    auto e = build_expression(riemann(1));
    CHECK(plane_strings(e) == sorted({AffineForm::slot(1, 0), sum_of(1, 0, 1, 1)}));
    // numeric part: the two tail integrals of t^s and t^(1-s)
    std::size_t numeric = 0;
    for (const auto& t : e.terms) numeric += (t.left >= 0) + (t.right >= 0);
    CHECK(numeric == 2);
    CHECK(e.words.size() == 2);

    auto d = build_expression({th("delta")});
    CHECK(poles(d).empty());
    CHECK(poles(build_expression({th("delta"), th("delta"), th("delta")})).empty());

    auto g = build_expression({th("eisenstein", {4})});
    CHECK(plane_strings(g) == sorted({AffineForm::slot(1, 0), sum_of(1, 0, 1, 4)}));
}

TEST_CASE("riemann pole sets") {
    for (std::size_t r = 1; r <= 4; ++r) {
        std::vector<AffineForm> expect;
        for (std::size_t k = 1; k <= r; ++k) {
            expect.push_back(sum_of(r, 0, k, Rational(static_cast<long long>(k))));
            expect.push_back(sum_of(r, k - 1, r, 0));
        }
        CHECK(plane_strings(build_expression(riemann(r))) == sorted(expect));
    }
    CHECK(plane_strings(build_expression(riemann(3))).size() == 6);
}

TEST_CASE("eisenstein poles are simple") {
    auto g = build_expression({th("eisenstein", {4})});
    // Lambda(G4; s) s (s - 4) stays bounded near 0 and 4
    for (double c : {0.0, 4.0})
        for (double e : {1e-3, 1e-4, 1e-5}) {
            double s = c + e;
            Complex v = lambda_eval(g, {s}).value * s * (s - 4);
            CHECK(std::abs(v) < 1.0);
        }
}

TEST_CASE("pole guard") {
    auto e = build_expression(riemann(2));
    try {
        lambda_eval(e, {Complex(3.0), Complex(-3.0)});
        FAIL("expected PoleError");
    } catch (const PoleError& err) {
        CHECK(err.hyperplane.normalized() == sum_of(2, 0, 2, 0).normalized());
        CHECK(err.distance < kPoleGuard);
    }
    auto near = nearest_pole(e, {Complex(1.5), Complex(0.25)});
    REQUIRE(near);
    // s1 + s2 = 2 is closer than s2 = 0
    CHECK(std::abs(near->second - 0.25 / std::sqrt(2.0)) < 1e-15);
    CHECK(!nearest_pole(build_expression({th("delta")}), {Complex(6.0)}));
    CHECK(std::abs(hyperplane_distance(sum_of(2, 0, 2, 2), {Complex(2.0), Complex(2.0)}) - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("direct definition agrees with the expression") {
    CHECK(defect(lambda_direct(riemann(2), {3.0, 4.0}).value, lam(riemann(2), {3.0, 4.0})) < 1e-8);
    CHECK(defect(lambda_direct({th("delta")}, {11.0}).value, lam({th("delta")}, {11.0})) < 1e-9);
    // r = 1 at s = 6 against a direct Gauss-Kronrod integral of (theta - 1) t^5
    auto integrand = [](double t) {
        double sum = 0;
        for (int n = 1; n < 60; ++n) sum += 2 * std::exp(-kPi * n * n * t * t);
        return sum * std::pow(t, 5);
    };
    double gk = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 8.0, 15, 1e-14);
    CHECK(defect(lambda_direct(riemann(1), {6.0}).value, gk) < 1e-10);
    CHECK_THROWS_AS(lambda_direct(riemann(1), {0.5}), ConvergenceError);
}

TEST_CASE("residues") {
    auto e2 = build_expression(riemann(2));
    Complex r1 = residue(e2, AffineForm::slot(2, 1), {3.0, 0.0}).value;
    CHECK(defect(r1, -lam(riemann(1), {3.0})) < 1e-10);
    Complex r2 = residue(e2, sum_of(2, 0, 2, 0), {3.0, -3.0}).value;
    CHECK(defect(r2, -1.0 / 3) < 1e-10);

    auto e3 = build_expression(riemann(3));
    Complex r3 = residue(e3, sum_of(3, 1, 3, 0), {2.5, 1.5, -1.5}).value;
    Complex expect = -lam(riemann(1), {2.5}) / 1.5;
    CHECK(defect(r3, expect) < 1e-10);
    // symmetric difference along the normal (0, 1, 1), Richardson extrapolated
    auto g = [&](double eps) {
        Complex up = lam(riemann(3), {2.5, 1.5 + eps, -1.5 + eps});
        Complex dn = lam(riemann(3), {2.5, 1.5 - eps, -1.5 - eps});
        return 0.5 * (2 * eps * up - 2 * eps * dn);
    };
    Complex lim = (4.0 * g(0.002) - g(0.004)) / 3.0;
    CHECK(defect(r3, lim) < 1e-6);

    CHECK_THROWS_AS(residue(e2, AffineForm::slot(2, 1), {3.0, 1.0}), std::invalid_argument);
    // s1 = 1 meets s2 = 0 here
    CHECK_THROWS_AS(residue(e2, AffineForm::slot(2, 1), {1.0, 0.0}), IntersectionError);
}

TEST_CASE("L* rescaling") {
    auto d = build_expression({th("delta")});
    CHECK(lstar_eval(d, {5.0}).value == lambda_eval(d, {5.0}).value);
    ThetaFunction f = *th("delta");
    f.name = "delta_n4";
    f.conductor = 4;
    auto e = build_expression({make_self_dual(f)});
    CHECK(defect(lstar_eval(e, {2.0}).value, 4.0 * lambda_eval(d, {2.0}).value) < 1e-14);
}

TEST_CASE("cached expressions and batch evaluation") {
    auto t = riemann(2);
    CHECK(cached_expression(t) == cached_expression(t));
    std::vector<std::vector<Complex>> pts;
    for (double a : {0.25, 0.5, 1.0, 1.5})
        for (double b : {-0.5, 0.0, 0.75}) pts.push_back({Complex(a, 0.1), Complex(b)});
    auto one = lambda_eval_many(*cached_expression(t), pts, {}, 1);
    auto many = lambda_eval_many(*cached_expression(t), pts, {}, 4);
    REQUIRE(one.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(one[i].result.value == many[i].result.value);
        CHECK(bool(one[i].pole) == bool(many[i].pole));
    }
    // s2 = 0 column is flagged
    CHECK(one[1].pole);
    CHECK(!one[0].pole);
}

TEST_CASE("functional equation for a mixed tuple") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 3.0);
    std::vector<ThetaPtr> t{th("jacobi2"), th("theta_minus")};
    std::vector<ThetaPtr> d{th("theta_minus"), th("jacobi4")};  // reversed duals
    for (int trial = 0; trial < 5; ++trial) {
        Complex s1{u(rng), u(rng)}, s2{u(rng), u(rng)};
        Complex lhs = lam(t, {s1, s2});
        // signs +1 for jacobi2 and -1 for theta_minus; weights 1/2 and 2
        Complex rhs = -lam(d, {2.0 - s2, 0.5 - s1});
        CHECK(defect(lhs, rhs) < 1e-8);
    }
}

TEST_CASE("conjugation symmetry") {
    Complex a = lam(riemann(2), {Complex(0.3, 1.2), Complex(1.7, -0.4)});
    Complex b = lam(riemann(2), {Complex(0.3, -1.2), Complex(1.7, 0.4)});
    CHECK(std::abs(a - std::conj(b)) < 1e-10);
}
