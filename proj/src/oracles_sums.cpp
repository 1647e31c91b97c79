#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include "mlambda/oracles.hpp"

namespace mlambda {

namespace {

constexpr double kPi = std::numbers::pi;

// B_2 .. B_12
constexpr std::array<double, 6> kBernoulli{1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};

double factorial(int n) { return boost::math::factorial<double>(static_cast<unsigned>(n)); }

// Tail sum_{n >= M} f(n) = int_M^inf f + f(M)/2 - f'(M)/12 + f'''(M)/720, derivatives by differences.
template <class F, class I>
double em_tail(F&& f, I&& integral, double M) {
    double fm2 = f(M - 2), fm1 = f(M - 1), f0 = f(M), fp1 = f(M + 1), fp2 = f(M + 2);
    double d1 = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / 12.0;
    double d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / 2.0;
    return integral() + 0.5 * f0 - d1 / 12.0 + d3 / 720.0;
}

// int_M^inf f(u) du through u = M / v.
template <class F>
double tail_integral(F&& f, double M) {
    auto g = [&](double v) { return f(M / v) * M / (v * v); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 0, 0.0);
}

class QSum {
public:
    QSum(std::vector<int> k, int M) : k_(std::move(k)), M_(M) {}

    double G(int level, double X) const {
        auto f = [&](double u) {
            double Y = u * u + X;
            double v = std::pow(Y, -k_[level]);
            return level > 0 ? v * G(level - 1, Y) : v;
        };
        double sum = 0;
        for (int n = M_ - 1; n >= 1; --n) sum += f(n);
        return sum + em_tail(f, [&] { return tail_integral(f, M_); }, M_);
    }

private:
    std::vector<int> k_;
    int M_;
};

}  // namespace

Complex gamma_complex(Complex z) {
    static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_complex(1.0 - z));
    z -= 1.0;
    Complex x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    Complex t = z + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

Complex power_tail(Complex alpha, double a) {
    if (!(alpha.real() > 1.0)) throw std::invalid_argument("power_tail needs Re alpha > 1");
    Complex out = std::exp((1.0 - alpha) * std::log(a)) / (alpha - 1.0) + 0.5 * std::exp(-alpha * std::log(a));
    // B_2j / (2j)! * alpha (alpha+1) ... (alpha+2j-2) a^(-alpha-2j+1)
    Complex rising = alpha;
    for (int j = 1; j <= 6; ++j) {
        out += kBernoulli[j - 1] / factorial(2 * j) * rising * std::exp((-alpha - double(2 * j - 1)) * std::log(a));
        rising *= (alpha + double(2 * j - 1)) * (alpha + double(2 * j));
    }
    return out;
}

double q_sum(const std::vector<int>& k, double tol) {
    if (k.empty() || k.size() > 3) throw std::invalid_argument("q_sum supports depth 1..3");
    int total = 0;
    for (int x : k) {
        if (x < 1) throw std::invalid_argument("Q exponents must be positive");
        total += x;
    }
    int M = tol < 1e-10 ? 128 : 64;
    if (k.size() == 3) M = std::min(M, 96);
    QSum q(k, M);
    double value = q.G(static_cast<int>(k.size()) - 1, 0.0);
    // size of the first neglected Euler-Maclaurin term
    double alpha = 2.0 * total - double(k.size()) + 1.0;
    double rising = alpha * (alpha + 1) * (alpha + 2) * (alpha + 3) * (alpha + 4);
    double est = std::abs(value) * rising * std::pow(double(M), -alpha - 4.0) / 30240.0;
    if (est > tol) throw OracleError("q_sum tolerance unreachable within the summation budget");
    return value;
}

std::vector<QTerm> reduce_d_to_q(const std::vector<int>& l) {
    if (l.empty() || l.size() > 3) throw std::invalid_argument("reduce_d_to_q supports depth 1..3");
    for (int x : l)
        if (x < 1) throw std::invalid_argument("exponents must be positive");
    const int r = static_cast<int>(l.size());
    std::map<std::vector<int>, long long> acc;
    std::vector<int> k(r);
    // level i integrates u_i from u_(i-1) to infinity with carried power a = l_i + j_(i+1)
    std::function<void(int, int, long long)> rec = [&](int i, int carry, long long coef) {
        int a = l[i] + carry;
        long long fa = 1;
        for (int t = 2; t < a; ++t) fa *= t;  // (a-1)!
        if (i == 0) {
            k[0] = a;
            acc[k] += coef * fa;
            return;
        }
        long long fj = 1;
        for (int j = 0; j < a; ++j) {
            if (j > 0) fj *= j;
            k[i] = a - j;
            rec(i - 1, j, coef * (fa / fj));
        }
    };
    rec(r - 1, 0, 1);
    std::vector<QTerm> out;
    for (const auto& [kk, c] : acc)
        if (c != 0) out.push_back({c, kk});
    return out;
}

double mzv_sum(const std::vector<int>& n, double tol) {
    if (n.empty()) throw std::invalid_argument("empty MZV index");
    for (int x : n)
        if (x < 1) throw std::invalid_argument("MZV exponents must be positive");
    if (n.back() < 2) throw std::invalid_argument("divergent MZV: last exponent must be at least 2");
    (void)tol;
    const std::size_t r = n.size();
    if (r == 1) {
        const int N = 64;
        double s = 0;
        for (int k = N - 1; k >= 1; --k) s += std::pow(double(k), -n[0]);
        return s + power_tail(Complex(n[0]), N).real();
    }
    if (r == 2) {
        const int N = 1000;
        double s1 = 0, sum = 0;
        for (int k = 1; k < N; ++k) {
            sum += std::pow(double(k), -n[1]) * s1;
            s1 += std::pow(double(k), -n[0]);
        }
        // smooth interpolation of sum_{m < x} m^(-n_1)
        double zeta1 = n[0] >= 2 ? mzv_sum({n[0]}) : 0.0;
        auto inner = [&](double x) {
            if (n[0] == 1) return boost::math::digamma(x) + std::numbers::egamma;
            double sign = n[0] % 2 == 0 ? 1.0 : -1.0;
            return zeta1 - sign * boost::math::polygamma(n[0] - 1, x) / factorial(n[0] - 1);
        };
        auto f = [&](double x) { return std::pow(x, -n[1]) * inner(x); };
        auto integral = [&] {
            boost::math::quadrature::tanh_sinh<double> ts;
            return ts.integrate(
                [&](double v) {
                    if (v < 1e-100) return 0.0;
                    double r = f(N / v) * N / (v * v);
                    return std::isfinite(r) ? r : 0.0;
                },
                0.0, 1.0);
        };
        return sum + em_tail(f, integral, N);
    }
    // depth >= 3: split every index at N; heads summed exactly, tails by midpoint integrals
    const long N = 1'000'000;
    std::vector<double> S(r + 1, 0.0);
    S[0] = 1.0;
    for (long k = 1; k < N; ++k) {
        double kd = double(k);
        for (std::size_t j = r; j >= 1; --j) S[j] += std::pow(kd, -n[j - 1]) * S[j - 1];
    }
    const double A = N - 0.5;
    double total = 0;
    for (std::size_t j = 0; j <= r; ++j) {
        // int_{A <= x_(j+1) <= ... <= x_r} prod x_i^(-n_i) dx
        double tail = 1.0, weight = 0;
        for (std::size_t i = r; i > j; --i) {
            weight += n[i - 1] - 1;
            tail /= weight;
        }
        tail *= std::pow(A, -weight);
        total += S[j] * tail;
    }
    return total;
}

DirichletResult dirichlet_double(const CoefficientStream& a, const CoefficientStream& b, int k, Complex s, double tol) {
    const auto& ga = a.growth();
    const auto& gb = b.growth();
    double gamma = std::max(ga.kappa - k, 0.0) + gb.kappa + 1.0;
    double sigma = s.real();
    if (!(sigma > gamma + 1.0))
        throw std::invalid_argument("double Dirichlet series not absolutely convergent for these growth bounds");
    double MM = ga.M * gb.M;
    auto bound = [&](double N) { return MM * std::pow(N, gamma - sigma + 1.0) / (sigma - gamma - 1.0); };
    long N = 64;
    const long budget = 6000;
    while (N < budget && bound(double(N)) > tol) N = std::min(budget, N * 2);
    auto fetch = [&](const CoefficientStream& c) {
        long n = c.finite_size() ? std::min<long>(N, long(*c.finite_size())) : N;
        return n > 0 ? c.table(n) : std::make_shared<const CoefficientStream::Table>();
    };
    auto ta = fetch(a), tb = fetch(b);
    std::vector<double> am(N + 1, 0.0), bn(N + 1, 0.0);
    for (long i = 1; i <= N; ++i) {
        am[i] = i <= long(ta->a.size()) ? ta->a[i - 1] : 0.0;
        bn[i] = i <= long(tb->a.size()) ? tb->a[i - 1] : 0.0;
        am[i] *= std::pow(double(i), -k);
    }
    DirichletResult out;
    for (long L = N; L >= 2; --L) {
        double inner = 0;
        for (long m = 1; m < L; ++m) inner += am[m] * bn[L - m];
        out.D += inner * std::exp(-s * std::log(double(L)));
    }
    out.err = bound(double(N));
    Complex scale = std::exp((-double(k) - s) * std::log(2.0 * kPi)) * factorial(k - 1) * gamma_complex(s);
    out.DD = scale * out.D;
    return out;
}

double binding_lemma_check(int p, int m, int n, Complex s) {
    if (p < 1 || m < 1 || n < 1) throw std::invalid_argument("binding lemma needs positive integers");
    if (!(s.real() > 0)) throw std::invalid_argument("binding lemma needs Re s > 0");
    auto f = [&](double x) {
        return std::pow(x, p - 1) * std::exp(-(double(p) + s) * std::log(m * x + n));
    };
    Complex integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-15);
    Complex lhs = gamma_complex(s + double(p)) / factorial(p - 1) * integral;
    Complex rhs = gamma_complex(s) / (std::pow(double(m), p) * std::exp(s * std::log(double(n))));
    for (int r = 0; r < p; ++r)
        rhs -= gamma_complex(s + double(r)) / factorial(r) /
               (std::pow(double(m), p - r) * std::exp((s + double(r)) * std::log(double(m + n))));
    return std::abs(lhs - rhs);
}

}  // namespace mlambda
