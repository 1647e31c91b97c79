#include "mlambda/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

namespace mlambda {

using boost::multiprecision::cpp_int;

CoefficientStream::CoefficientStream(Filler filler, GrowthBound growth, std::optional<double> lattice_step,
                                     std::optional<std::size_t> finite_size)
    : filler_(std::move(filler)),
      growth_(growth),
      lattice_step_(lattice_step),
      finite_size_(finite_size),
      table_(std::make_shared<Table>()) {}

std::shared_ptr<const CoefficientStream::Table> CoefficientStream::table(std::size_t n) const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (table_->mu.size() < n) {
        auto grown = std::make_shared<Table>(*table_);
        std::size_t target = std::max<std::size_t>(n, std::max<std::size_t>(64, 2 * table_->mu.size()));
        filler_(target, *grown);
        table_ = grown;
    }
    return table_;
}

long CoefficientStream::lattice_index(std::size_t n) const {
    if (!lattice_step_) throw std::logic_error("stream has no frequency lattice");
    return std::lround(mu(n) / *lattice_step_);
}

namespace {

struct ThetaGroup {
    ThetaFunction a;
    ThetaFunction b;
};

double pow_rational(double t, const Rational& e) {
    if (e == 0) return 1.0;
    return std::pow(t, to_double(e));
}

}  // namespace

ThetaPtr ThetaFunction::dual_ptr() const {
    auto p = dual_weak_.lock();
    if (!p) throw std::logic_error("theta '" + name + "' was not created through a dual group");
    return p;
}

ThetaPtr make_self_dual(ThetaFunction f) {
    auto group = std::make_shared<ThetaGroup>();
    group->a = std::move(f);
    ThetaPtr p(group, &group->a);
    group->a.dual_raw_ = nullptr;
    group->a.dual_weak_ = p;
    return p;
}

std::pair<ThetaPtr, ThetaPtr> make_dual_pair(ThetaFunction a, ThetaFunction b) {
    if (a.weight != b.weight || a.sign != b.sign)
        throw std::invalid_argument("dual partners must share weight and sign");
    auto group = std::make_shared<ThetaGroup>();
    group->a = std::move(a);
    group->b = std::move(b);
    ThetaPtr pa(group, &group->a);
    ThetaPtr pb(group, &group->b);
    group->a.dual_raw_ = &group->b;
    group->b.dual_raw_ = &group->a;
    group->a.dual_weak_ = pb;
    group->b.dual_weak_ = pa;
    return {pa, pb};
}

Rational ThetaFunction::poly_max_exponent() const {
    Rational m = 0;
    for (const auto& mono : poly) m = std::max(m, mono.e);
    return m;
}

Rational ThetaFunction::poly_min_exponent() const {
    if (poly.empty()) return 0;
    Rational m = poly.front().e;
    for (const auto& mono : poly) m = std::min(m, mono.e);
    return m;
}

double ThetaFunction::poly_value(double t) const {
    double v = 0;
    for (const auto& mono : poly) v += to_double(mono.c) * pow_rational(t, mono.e);
    return v;
}

namespace {

// Factor bounding sum_j |c_j| t^e_j mu^m_j exp(-lam mu t^p / 2) when some m_j > 0.
double component_factor(const std::vector<TailComponent>& comps, double t, double lam_tp, bool& halved) {
    double f = 0;
    halved = false;
    for (const auto& c : comps) {
        double v = std::abs(c.c) * pow_rational(t, c.e);
        if (c.m > 0) {
            halved = true;
            v *= std::pow(2.0 * c.m / (std::numbers::e * lam_tp), c.m);
        }
        f += v;
    }
    return f;
}

double term_remainder_bound(const ThetaFunction& f, const TailTerm& term, std::size_t n, double t) {
    if (term.stream->finite_size() && n >= *term.stream->finite_size()) return 0.0;
    const auto& g = term.stream->growth();
    double lam_tp = f.kernel_scale * std::pow(t, f.kernel_p);
    bool halved = false;
    double cf = component_factor(term.comps, t, lam_tp, halved);
    double rate = g.c * lam_tp * (halved ? 0.5 : 1.0);
    double k = static_cast<double>(n + 1);
    double q = std::pow((k + 1) / k, g.kappa) * std::exp(-rate);
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    double lead = g.M * std::exp(g.kappa * std::log(k) - rate * k);
    return cf * lead / (1.0 - q);
}

}  // namespace

double ThetaFunction::truncation_bound(std::size_t n, double t) const {
    double b = 0;
    for (const auto& term : tail) b += term_remainder_bound(*this, term, n, t);
    return b;
}

double ThetaFunction::tail_direct(double t, double tol, std::size_t max_terms) const {
    if (!(t > 0)) throw std::invalid_argument("theta evaluation needs t > 0");
    tol = std::max(tol, 1e-300);
    double total = 0;
    double per_term_tol = tol / std::max<std::size_t>(1, tail.size());
    double tp = std::pow(t, kernel_p);
    for (const auto& term : tail) {
        std::vector<double> te;
        for (const auto& c : term.comps) te.push_back(c.c * pow_rational(t, c.e));
        std::size_t limit = max_terms;
        if (term.stream->finite_size()) limit = std::min(limit, *term.stream->finite_size());
        std::size_t fetched = std::min<std::size_t>(limit, 64);
        auto tab = term.stream->table(std::max<std::size_t>(fetched, 1));
        double sum = 0;
        bool done = false;
        for (std::size_t n = 1; n <= limit; ++n) {
            if (n > tab->mu.size()) tab = term.stream->table(std::min(limit, 2 * n));
            double mu = tab->mu[n - 1];
            double an = tab->a[n - 1];
            if (an != 0.0) {
                double kern = std::exp(-kernel_scale * mu * tp);
                double cs = 0;
                for (std::size_t j = 0; j < te.size(); ++j)
                    cs += te[j] * (term.comps[j].m == 0 ? 1.0 : std::pow(mu, term.comps[j].m));
                sum += an * kern * cs;
            }
            if (term_remainder_bound(*this, term, n, t) <= per_term_tol) {
                done = true;
                break;
            }
        }
        if (!done && !(term.stream->finite_size() && limit == *term.stream->finite_size()))
            throw TruncationError("theta '" + name + "': truncation bound cannot reach tolerance at t=" +
                                  std::to_string(t) + " within " + std::to_string(max_terms) + " terms");
        total += sum;
    }
    return total;
}

ThetaFunction::Envelope ThetaFunction::tail_envelope() const {
    Envelope env;
    env.rate = std::numeric_limits<double>::infinity();
    for (const auto& term : tail) {
        double mu1 = term.stream->mu(1);
        env.rate = std::min(env.rate, kernel_scale * mu1);
    }
    if (tail.empty()) {
        env.rate = 1.0;
        return env;
    }
    for (const auto& term : tail) {
        std::size_t limit = term.stream->finite_size().value_or(4000);
        auto tab = term.stream->table(std::min<std::size_t>(limit, 64));
        double sum = 0;
        for (std::size_t n = 1; n <= limit; ++n) {
            if (n > tab->mu.size()) tab = term.stream->table(std::min(limit, 2 * n));
            double mu = tab->mu[n - 1];
            double x = kernel_scale * mu - env.rate;
            double cs = 0;
            for (const auto& c : term.comps) cs += std::abs(c.c) * std::pow(mu, c.m);
            double v = std::abs(tab->a[n - 1]) * cs * std::exp(-x);
            sum += v;
            if (x > 40 && term_remainder_bound(*this, term, n, 1.0) < 1e-18 * std::max(sum, 1e-300)) break;
        }
        env.C += sum;
        for (const auto& c : term.comps) env.growth = std::max(env.growth, to_double(c.e));
    }
    return env;
}

double ThetaFunction::coefficient_at(double frequency) const {
    double total = 0;
    for (const auto& term : tail) {
        double plain = 0;
        for (const auto& c : term.comps)
            if (c.e == 0 && c.m == 0) plain += c.c;
        if (plain == 0) continue;
        std::size_t limit = term.stream->finite_size().value_or(4000);
        for (std::size_t n = 1; n <= limit; ++n) {
            double mu = kernel_scale * term.stream->mu(n);
            if (std::abs(mu - frequency) < 1e-9 * std::max(1.0, frequency)) {
                total += plain * term.stream->a(n);
                break;
            }
            if (mu > frequency) break;
        }
    }
    return total;
}

double theta_eval_direct(const ThetaFunction& f, double t, Part part, double tol, std::size_t max_terms) {
    if (!(t > 0)) throw std::invalid_argument("theta evaluation needs t > 0");
    double poly = f.poly_value(t);
    if (part == Part::Poly) return poly;
    double tail = f.tail_direct(t, tol, max_terms);
    return part == Part::Tail ? tail : poly + tail;
}

double theta_eval(const ThetaFunction& f, double t, Part part, double tol, std::size_t max_terms) {
    if (!(t > 0)) throw std::invalid_argument("theta evaluation needs t > 0");
    if (part == Part::Poly || t >= 0.5 || f.inversion_broken) return theta_eval_direct(f, t, part, tol, max_terms);
    // theta(t) = eps t^-w dual(1/t)
    double w = to_double(f.weight);
    double scale = f.sign * std::pow(t, -w);
    double dual_full = theta_eval_direct(f.dual(), 1.0 / t, Part::Full, std::max(tol * std::pow(t, w), 1e-300),
                                         max_terms);
    double poly = f.poly_value(t);
    double tail = scale * dual_full - poly;
    return part == Part::Tail ? tail : poly + tail;
}

double inversion_defect(const ThetaFunction& f, double t, double tol) {
    double lhs = theta_eval_direct(f, 1.0 / t, Part::Full, tol / 4);
    double rhs = f.sign * std::pow(t, to_double(f.weight)) * theta_eval_direct(f.dual(), t, Part::Full, tol / 4);
    return std::abs(lhs - rhs);
}

void validate_theta(const ThetaFunction& f, double tol) {
    if (f.inversion_broken) return;
    for (double t : {0.7, 1.0, 1.6}) {
        double d = inversion_defect(f, t, tol * 1e-3);
        if (!(d <= tol))
            throw ValidationError("theta '" + f.name + "' fails inversion: defect " + std::to_string(d) +
                                      " at t=" + std::to_string(t),
                                  t);
    }
}

std::vector<int> critical_values(const ThetaFunction& f) {
    std::vector<int> out;
    if (!f.modular || denominator(f.weight) != 1) return out;
    int w = static_cast<int>(numerator(f.weight));
    for (int n = 1; n <= w - 1; ++n) out.push_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// builtins

namespace {

constexpr double kPi = std::numbers::pi;

Rational bernoulli(int n) {
    std::vector<Rational> b(n + 1);
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational acc = 0;
        cpp_int binom = 1;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            acc += Rational(binom) * b[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[m] = -acc / (m + 1);
    }
    return b[n];
}

cpp_int sigma(std::uint64_t n, unsigned k) {
    cpp_int s = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += boost::multiprecision::pow(cpp_int(d), k);
        std::uint64_t e = n / d;
        if (e != d) s += boost::multiprecision::pow(cpp_int(e), k);
    }
    return s;
}

std::int64_t sigma1(std::uint64_t n) { return n == 0 ? 0 : sigma(n, 1).convert_to<std::int64_t>(); }

TailTerm plain_term(StreamPtr s) { return TailTerm{std::move(s), {TailComponent{1.0, 0, 0}}}; }

StreamPtr formula_stream(std::function<double(std::size_t)> mu, std::function<double(std::size_t)> a,
                         GrowthBound g, std::optional<double> step) {
    auto filler = [mu, a](std::size_t n, CoefficientStream::Table& t) {
        for (std::size_t k = t.mu.size() + 1; k <= n; ++k) {
            t.mu.push_back(mu(k));
            t.a.push_back(a(k));
        }
    };
    return std::make_shared<CoefficientStream>(filler, g, step);
}

// tau(n) from q prod (1 - q^n)^24, exact in 128-bit integers.
std::vector<__int128> ramanujan_tau(std::size_t N) {
    std::vector<__int128> p(N + 1, 0);  // prod (1-q^n) via pentagonal numbers
    for (long k = 0;; ++k) {
        bool any = false;
        for (long sgn : {1L, -1L}) {
            long kk = sgn * k;
            long e = kk * (3 * kk - 1) / 2;
            if (k == 0 && sgn == -1) continue;
            if (e <= static_cast<long>(N)) {
                p[e] += (k % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any) break;
    }
    auto mul = [N](const std::vector<__int128>& x, const std::vector<__int128>& y) {
        std::vector<__int128> z(N + 1, 0);
        for (std::size_t i = 0; i <= N; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; i + j <= N; ++j) z[i + j] += x[i] * y[j];
        }
        return z;
    };
    auto p2 = mul(p, p);
    auto p4 = mul(p2, p2);
    auto p8 = mul(p4, p4);
    auto p16 = mul(p8, p8);
    auto p24 = mul(p16, p8);
    std::vector<__int128> tau(N + 1, 0);
    for (std::size_t n = 1; n <= N; ++n) tau[n] = p24[n - 1];
    return tau;
}

ThetaFunction base_theta(const std::string& name, Rational w, int sign, int p) {
    ThetaFunction f;
    f.name = name;
    f.weight = std::move(w);
    f.sign = sign;
    f.kernel_p = p;
    f.kernel_scale = 1.0;
    return f;
}

ThetaPtr build_riemann() {
    auto f = base_theta("riemann", 1, 1, 2);
    f.poly = {{1, 0}};
    f.tail.push_back(plain_term(formula_stream([](std::size_t n) { return kPi * double(n) * double(n); },
                                               [](std::size_t) { return 2.0; }, {2.0, 0.0, kPi}, kPi)));
    return make_self_dual(std::move(f));
}

ThetaPtr build_eisenstein(int weight) {
    if (weight < 4 || weight % 2) throw std::invalid_argument("eisenstein weight must be even and >= 4");
    int k = weight / 2;
    auto f = base_theta("eisenstein:" + std::to_string(weight), weight, (k % 2) ? -1 : 1, 1);
    f.modular = true;
    f.poly = {{-bernoulli(weight) / (2 * weight), 0}};
    double zeta_bound = 1.0 + 1.0 / (weight - 2);  // zeta(2k-1) <= 1 + 1/(2k-2)
    unsigned e = static_cast<unsigned>(weight - 1);
    f.tail.push_back(plain_term(
        formula_stream([](std::size_t n) { return 2 * kPi * double(n); },
                       [e](std::size_t n) { return sigma(n, e).convert_to<double>(); },
                       {zeta_bound, double(weight - 1), 2 * kPi}, 2 * kPi)));
    return make_self_dual(std::move(f));
}

ThetaPtr build_delta() {
    auto f = base_theta("delta", 12, 1, 1);
    f.modular = true;
    auto filler = [](std::size_t n, CoefficientStream::Table& t) {
        auto tau = ramanujan_tau(n);
        t.mu.clear();
        t.a.clear();
        for (std::size_t k = 1; k <= n; ++k) {
            t.mu.push_back(2 * kPi * double(k));
            t.a.push_back(static_cast<double>(tau[k]));
        }
    };
    f.tail.push_back(plain_term(std::make_shared<CoefficientStream>(filler, GrowthBound{2.0, 6.0, 2 * kPi}, 2 * kPi)));
    return make_self_dual(std::move(f));
}

ThetaPtr build_theta_pm(bool plus) {
    auto f = base_theta(plus ? "theta_plus" : "theta_minus", 2, plus ? 1 : -1, 1);
    f.modular = true;
    f.poly = {{1, 0}};
    auto coeff = [plus](std::size_t n) -> double {
        std::int64_t s1 = sigma1(n);
        std::int64_t s2 = (n % 2 == 0) ? sigma1(n / 2) : 0;
        std::int64_t s4 = (n % 4 == 0) ? sigma1(n / 4) : 0;
        return plus ? double(8 * s1 - 32 * s4) : double(-24 * s1 + 96 * s2 - 96 * s4);
    };
    GrowthBound g{plus ? 16.0 : 60.0, 2.0, kPi};
    f.tail.push_back(plain_term(formula_stream([](std::size_t n) { return kPi * double(n); }, coeff, g, kPi)));
    return make_self_dual(std::move(f));
}

std::pair<ThetaPtr, ThetaPtr> build_jacobi24() {
    auto j2 = base_theta("jacobi2", Rational(1, 2), 1, 1);
    j2.tail.push_back(plain_term(formula_stream(
        [](std::size_t n) { return kPi * (double(n) - 0.5) * (double(n) - 0.5); }, [](std::size_t) { return 2.0; },
        {2.0, 0.0, kPi / 4}, kPi / 4)));
    auto j4 = base_theta("jacobi4", Rational(1, 2), 1, 1);
    j4.poly = {{1, 0}};
    j4.tail.push_back(plain_term(formula_stream([](std::size_t n) { return kPi * double(n) * double(n); },
                                                [](std::size_t n) { return (n % 2) ? -2.0 : 2.0; },
                                                {2.0, 0.0, kPi}, kPi)));
    return make_dual_pair(std::move(j2), std::move(j4));
}

ThetaPtr build_jacobi3() {
    auto f = base_theta("jacobi3", Rational(1, 2), 1, 1);
    f.poly = {{1, 0}};
    f.tail.push_back(plain_term(formula_stream([](std::size_t n) { return kPi * double(n) * double(n); },
                                               [](std::size_t) { return 2.0; }, {2.0, 0.0, kPi}, kPi)));
    return make_self_dual(std::move(f));
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"riemann", "eisenstein", "delta", "theta_plus", "theta_minus", "jacobi2", "jacobi3", "jacobi4"};
}

ThetaPtr make_builtin_theta(const std::string& name, const std::vector<int>& params) {
    static std::mutex mutex;
    static std::map<std::string, ThetaPtr> cache;
    std::string key = name;
    if (name == "eisenstein") {
        if (params.size() != 1) throw std::invalid_argument("eisenstein needs one weight parameter");
        key += ":" + std::to_string(params[0]);
    }
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    ThetaPtr out;
    if (name == "riemann") {
        out = build_riemann();
    } else if (name == "eisenstein") {
        out = build_eisenstein(params[0]);
    } else if (name == "delta") {
        out = build_delta();
    } else if (name == "theta_plus") {
        out = build_theta_pm(true);
    } else if (name == "theta_minus") {
        out = build_theta_pm(false);
    } else if (name == "jacobi3") {
        out = build_jacobi3();
    } else if (name == "jacobi2" || name == "jacobi4") {
        auto [j2, j4] = build_jacobi24();
        validate_theta(*j2);
        validate_theta(*j4);
        cache["jacobi2"] = j2;
        cache["jacobi4"] = j4;
        return name == "jacobi2" ? j2 : j4;
    } else {
        throw std::invalid_argument("unknown theta '" + name + "'");
    }
    validate_theta(*out);
    cache[key] = out;
    return out;
}

}  // namespace mlambda
