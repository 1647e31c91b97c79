#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "mlambda/oracles.hpp"

namespace mlambda {

namespace {

constexpr double kPi = std::numbers::pi;

Complex cpow(double x, Complex e) { return std::exp(e * std::log(x)); }

// sum_{i >= 0} (u^2 + b^2)^(-s) at u = a + i, expanded in b^2 / u^2.
Complex row_tail(double a, double b, Complex s) {
    Complex out = 0, binom = 1.0;
    for (int j = 0; j < 60; ++j) {
        Complex term = binom * std::pow(b * b, j) * power_tail(2.0 * s + double(2 * j), a);
        out += term;
        if (j > 2 && std::abs(term) < 1e-19 * std::abs(out)) break;
        binom *= (-s - double(j)) / double(j + 1);
    }
    return out;
}

// sum_{m in Z} |m + c + i b|^(-2s)
Complex lattice_row(double c, double b, Complex s) {
    int M = std::max(64, static_cast<int>(std::ceil(8.0 * b + 8.0 + std::abs(c))));
    Complex sum = 0;
    for (int m = -(M - 1); m <= M - 1; ++m) {
        double u = m + c;
        sum += cpow(u * u + b * b, -s);
    }
    return sum + row_tail(M + c, b, s) + row_tail(M - c, b, s);
}

Complex zeta_direct(Complex a) {
    Complex sum = 0;
    for (int m = 63; m >= 1; --m) sum += cpow(m, -a);
    return sum + power_tail(a, 64);
}

const ThetaPtr& eisenstein_theta(int weight) {
    static const ThetaPtr g4 = make_builtin_theta("eisenstein", {4});
    static const ThetaPtr g6 = make_builtin_theta("eisenstein", {6});
    static const ThetaPtr g8 = make_builtin_theta("eisenstein", {8});
    switch (weight) {
        case 4: return g4;
        case 6: return g6;
        case 8: return g8;
        default: throw std::invalid_argument("no Eisenstein series of weight " + std::to_string(weight));
    }
}

double constant_term(const ThetaFunction& f) {
    double c = 0;
    for (const auto& m : f.poly)
        if (m.e == 0) c += to_double(m.c);
    return c;
}

Complex lambda1(const ThetaPtr& f, Complex s, const EvalParams& p) {
    return lambda_eval(*cached_expression({f}), {s}, p).value;
}

}  // namespace

Complex riemann_xi(Complex s, const EvalParams& p) {
    static const ThetaPtr r = make_builtin_theta("riemann");
    return lambda1(r, s, p);
}

Complex eisenstein_lattice(Complex z, Complex s, double* err) {
    double y = z.imag();
    if (!(y > 0)) throw std::invalid_argument("z must lie in the upper half plane");
    if (!(s.real() > 1.0)) throw std::invalid_argument("lattice sum needs Re s > 1");
    double x = z.real() - std::round(z.real());
    int N0 = std::max(2, static_cast<int>(std::ceil(36.0 / (2.0 * kPi * y))));
    Complex total = zeta_direct(2.0 * s);
    for (int n = 1; n <= N0; ++n) total += lattice_row(n * x, n * y, s);
    // rows beyond N0 equal their integral up to exp(-2 pi n y)
    Complex c = std::sqrt(kPi) * gamma_complex(s - 0.5) / gamma_complex(s) * cpow(y, 1.0 - 2.0 * s);
    Complex far = 0;
    int n = N0 + 1;
    for (; n < 64; ++n) far += cpow(n, 1.0 - 2.0 * s);
    far += power_tail(2.0 * s - 1.0, n);
    total += c * far;
    Complex E = cpow(y, s) * total;
    if (err) *err = 1e-14 * std::abs(E) + std::abs(c) * std::exp(-2.0 * kPi * (N0 + 1) * y);
    return E;
}

Complex eisenstein_infinity(double y, Complex s, const EvalParams& p) {
    return riemann_xi(2.0 * s, p) * cpow(y, s) + riemann_xi(2.0 * s - 1.0, p) * cpow(y, 1.0 - s);
}

EisensteinValues eisenstein_real(Complex z, Complex s, const EvalParams& p) {
    EisensteinValues out;
    double err = 0;
    Complex E = eisenstein_lattice(z, s, &err);
    Complex completion = std::exp(-s * std::log(kPi)) * gamma_complex(s);
    out.E = completion * E;
    out.Einf = eisenstein_infinity(z.imag(), s, p);
    out.E0 = out.E - out.Einf;
    out.err = std::abs(completion) * err;
    return out;
}

double eisenstein_fourier_e0(Complex z, double s, double tol) {
    double x = z.real(), y = z.imag();
    if (!(y > 0)) throw std::invalid_argument("z must lie in the upper half plane");
    double nu = std::abs(s - 0.5);
    double sum = 0;
    for (int N = 1; N < 100000; ++N) {
        double arg = 2.0 * kPi * N * y;
        double sigma = 0;
        for (int d = 1; d * d <= N; ++d)
            if (N % d == 0) {
                sigma += std::pow(double(d), 1.0 - 2.0 * s);
                if (d * d != N) sigma += std::pow(double(N / d), 1.0 - 2.0 * s);
            }
        double term = std::pow(double(N), s - 0.5) * sigma * boost::math::cyl_bessel_k(nu, arg);
        sum += term * std::cos(2.0 * kPi * N * x);
        if (arg > 20.0 && std::abs(term) < tol * std::max(1e-300, std::abs(sum))) break;
        if (arg > 700.0) break;
    }
    return 4.0 * std::sqrt(y) * sum;
}

LambdaResult xi_via_eisenstein(Complex s1, Complex s2, const EvalParams& p) {
    Complex S = s1 + s2;
    bool lattice = S.real() > 1.0;
    if (!lattice && std::abs(S.imag()) > 0)
        throw std::invalid_argument("xi_via_eisenstein needs Re(s1+s2) > 1 or real s1+s2");
    Complex xa = riemann_xi(2.0 * S, p), xb = riemann_xi(2.0 * S - 1.0, p);
    Complex completion = std::exp(-S * std::log(kPi)) * gamma_complex(S);
    double lat_err = 0;
    auto e0 = [&](double y) -> Complex {
        if (!lattice) return eisenstein_fourier_e0(Complex(0, y), S.real());
        double e = 0;
        Complex E = completion * eisenstein_lattice(Complex(0, y), S, &e);
        lat_err = std::max(lat_err, std::abs(completion) * e);
        return E - xa * cpow(y, S) - xb * cpow(y, 1.0 - S);
    };
    Complex ex = s2 - s1 - 1.0;
    auto h = [&](double y) { return e0(y) * cpow(y, ex); };
    LambdaResult out;
    const double Y = 1.0 + 48.0 / (2.0 * kPi);
    const int panels = 8;
    for (int i = 0; i < panels; ++i) {
        double a = 1.0 + (Y - 1.0) * i / panels, b = 1.0 + (Y - 1.0) * (i + 1) / panels;
        double e = 0;
        out.value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, a, b, 0, 0.0, &e);
        out.err += e;
    }
    out.err += lat_err * (Y - 1.0);
    out.value -= xa / (2.0 * s2) + xb / (1.0 - 2.0 * s1);
    return out;
}

LambdaResult eichler_xi(int a, int b, const EvalParams& p) {
    struct Spec {
        int weight;
        double coef;
        std::vector<std::pair<int, double>> poly;  // (j, c_j) of y^j
    };
    Spec spec;
    if (a == 2 && b == 2)
        spec = {4, -8.0 * kPi * kPi, {{1, 1.0}}};
    else if (a == 2 && b == 4)
        spec = {6, 4.0 * std::pow(kPi, 3) / 3.0, {{0, 1.0}, {2, 3.0}, {3, -4.0}}};
    else if (a == 4 && b == 2)
        spec = {6, -4.0 * std::pow(kPi, 3) / 3.0, {{0, 1.0}, {1, -4.0}, {2, 3.0}}};
    else if (a == 6 && b == 2)
        spec = {8, 8.0 * std::pow(kPi, 4) / 15.0, {{0, 1.0}, {1, -4.0}, {2, 5.0}}};
    else
        throw std::invalid_argument("eichler_xi covers (2,2), (2,4), (4,2), (6,2)");
    const ThetaFunction& g = *eisenstein_theta(spec.weight);
    double a0 = constant_term(g);
    LambdaResult out;
    for (const auto& [j, c] : spec.poly) {
        auto f = [&](double y) { return std::pow(y, j) * theta_eval(g, y, Part::Tail, p.abs_tol * 1e-3, p.max_terms); };
        // exp(-2 pi y) makes [1, 9] enough
        double I = 0, e = 0;
        for (int i = 1; i < 9; ++i) {
            double pe = 0;
            I += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, double(i), double(i + 1), 0, 0.0, &pe);
            e += pe;
        }
        e += 1e3 * std::exp(-2.0 * kPi * 9.0);
        out.value += c * (I - a0 / (j + 1));
        out.err += std::abs(c) * e;
    }
    out.value *= spec.coef;
    out.err *= std::abs(spec.coef);
    return out;
}

std::vector<CheckResult> mzv_reconstruction_check(int max_length, const EvalParams& p) {
    static const ThetaPtr plus = make_builtin_theta("theta_plus");
    static const ThetaPtr minus = make_builtin_theta("theta_minus");
    const double l16 = std::log(16.0);
    std::vector<CheckResult> out;
    auto add = [&](std::string name, Complex lhs, Complex rhs) {
        out.push_back({std::move(name), lhs, rhs, std::abs(lhs - rhs)});
    };
    if (max_length >= 1) {
        add("pi*L(theta+;1) = -8 log 2", kPi * lambda1(plus, 1.0, p), -8.0 * std::log(2.0));
        add("L(theta-;1) = 0", lambda1(minus, 1.0, p), 0.0);
    }
    const double z2 = mzv_sum({2}), z3 = mzv_sum({3});
    if (max_length >= 2) {
        Complex v = lambda_eval(*cached_expression({minus, plus}), {1.0, 1.0}, p).value;
        add("pi^2*L(theta-,theta+;1,1)", kPi * kPi * v, 2.0 * z2 - l16 * l16);
    }
    if (max_length >= 3) {
        Complex v = lambda_eval(*cached_expression({minus, minus, plus}), {1.0, 1.0, 1.0}, p).value;
        add("pi^3*L(theta-,theta-,theta+;1,1,1)", std::pow(kPi, 3) * v,
            4.0 * z3 + 2.0 * l16 * z2 - 2.0 / 6.0 * l16 * l16 * l16);
    }
    return out;
}

CheckResult lambda_bridge_check(const ThetaPtr& f, const ThetaPtr& g, int p, double s, const EvalParams& params) {
    if (p < 1) throw std::invalid_argument("bridge needs p >= 1");
    if (f->tail.size() != 1 || g->tail.size() != 1)
        throw std::invalid_argument("bridge needs thetas with a single coefficient stream");
    double a0 = constant_term(*f), b0 = constant_term(*g);
    Complex lhs = lambda_eval(*cached_expression({f, g}), {double(p), s}, params).value;
    Complex rhs = lambda1(f, double(p), params) * lambda1(g, s, params) + a0 / p * lambda1(g, s + p, params) -
                  b0 / s * lambda1(f, s + p, params);
    for (int r = 0; r < p; ++r) {
        auto d = dirichlet_double(*f->tail[0].stream, *g->tail[0].stream, p - r, s + r);
        rhs -= boost::math::binomial_coefficient<double>(p - 1, r) * d.DD;
    }
    return {"Lambda(f,g;" + std::to_string(p) + ",s) bridge", lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace mlambda
