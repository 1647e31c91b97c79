#include "mlambda/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>

#include <boost/math/special_functions/binomial.hpp>

namespace mlambda {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
    return seed ^ h;
}

ThetaPtr th(const std::string& name, std::vector<int> params = {}) { return make_builtin_theta(name, params); }

std::shared_ptr<const LambdaExpression> expr(const std::vector<ThetaPtr>& t) { return cached_expression(t); }

Complex lam(const std::vector<ThetaPtr>& t, const std::vector<Complex>& s, const EvalParams& p) {
    return lambda_eval(*expr(t), s, p).value;
}

std::vector<ThetaPtr> reversed_duals(const std::vector<ThetaPtr>& t) {
    std::vector<ThetaPtr> out;
    for (auto it = t.rbegin(); it != t.rend(); ++it) out.push_back((*it)->dual_ptr());
    return out;
}

std::vector<Complex> reflected(const std::vector<ThetaPtr>& t, const std::vector<Complex>& s) {
    std::vector<Complex> out;
    for (std::size_t i = t.size(); i-- > 0;) out.push_back(to_double(t[i]->weight) - s[i]);
    return out;
}

double min_distance(const std::vector<AffineForm>& planes, const std::vector<Complex>& s) {
    double d = 1e300;
    for (const auto& h : planes) d = std::min(d, hyperplane_distance(h, s));
    return d;
}

class Runner {
public:
    Runner(std::string suite, const VerifyOptions& opt)
        : suite_(std::move(suite)), opt_(opt), rng_(mix(opt.seed, suite_)) {}

    void check(const std::string& name, double d, double tol) {
        out_.push_back({suite_, name, d, tol, d <= tol});
    }
    void compare(const std::string& name, Complex a, Complex b, double tol) { check(name, defect(a, b), tol); }

    // Runs body; a thrown exception records a failing case instead of aborting the suite.
    void guarded(const std::string& name, double tol, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            out_.push_back({suite_, name + " [" + e.what() + "]", INFINITY, tol, false});
        }
    }

    Complex point(double re = 3.0, double im = 3.0) { return {rng_.range(-re, re), rng_.range(-im, im)}; }

    // Random point at distance >= margin from every listed hyperplane.
    std::vector<Complex> point_away(std::size_t r, const std::vector<AffineForm>& planes, double margin = 0.1) {
        for (;;) {
            std::vector<Complex> s(r);
            for (auto& x : s) x = point();
            if (min_distance(planes, s) >= margin) return s;
        }
    }

    const EvalParams& params() const { return opt_.params; }
    int trials() const { return opt_.trials; }
    UniformStream& rng() { return rng_; }
    std::vector<VerifyCase>& results() { return out_; }

private:
    std::string suite_;
    VerifyOptions opt_;
    UniformStream rng_;
    std::vector<VerifyCase> out_;
};

std::string pt_str(const std::vector<Complex>& s) {
    std::string out = "(";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3g%+.3gi", i ? ", " : "", s[i].real(), s[i].imag());
        out += buf;
    }
    return out + ")";
}

std::string tuple_str(const std::vector<ThetaPtr>& t) {
    std::string out;
    for (const auto& x : t) out += (out.empty() ? "" : ",") + x->name;
    return out;
}

void functional_equation(Runner& R, const std::vector<ThetaPtr>& t, const std::vector<Complex>& s, double tol) {
    std::string name = "FE " + tuple_str(t) + " at " + pt_str(s);
    R.guarded(name, tol, [&] {
        auto rt = reversed_duals(t);
        double eps = 1;
        for (const auto& x : t) eps *= x->sign;
        R.compare(name, lam(t, s, R.params()), eps * lam(rt, reflected(t, s), R.params()), tol);
    });
}

void suite_functional(Runner& R) {
    const auto& p = R.params();
    auto riemann = th("riemann");
    for (std::size_t r = 1; r <= 3; ++r) {
        std::vector<ThetaPtr> t(r, riemann);
        auto planes = expr(t)->hyperplanes;
        for (const auto& h : expr(reversed_duals(t))->hyperplanes) planes.push_back(h);
        for (int i = 0; i < R.trials(); ++i) functional_equation(R, t, R.point_away(r, planes), 1e-8);
    }
    std::vector<ThetaPtr> mixed{th("eisenstein", {4}), th("delta")};
    for (int i = 0; i < R.trials(); ++i) {
        auto planes = expr(mixed)->hyperplanes;
        for (const auto& h : expr(reversed_duals(mixed))->hyperplanes) planes.push_back(h);
        functional_equation(R, mixed, R.point_away(2, planes), 1e-8);
    }
    // random tuples from the builtin pool
    std::vector<ThetaPtr> pool{riemann,         th("eisenstein", {4}), th("delta"),   th("theta_plus"),
                               th("theta_minus"), th("jacobi2"),         th("jacobi3"), th("jacobi4")};
    for (int i = 0; i < R.trials(); ++i) {
        std::size_t r = static_cast<std::size_t>(R.rng().integer(1, 3));
        std::vector<ThetaPtr> t;
        for (std::size_t j = 0; j < r; ++j) t.push_back(pool[R.rng().integer(0, int(pool.size()) - 1)]);
        auto planes = expr(t)->hyperplanes;
        for (const auto& h : expr(reversed_duals(t))->hyperplanes) planes.push_back(h);
        functional_equation(R, t, R.point_away(r, planes), 1e-8);
    }
    // half-integral weight
    auto j2 = th("jacobi2"), j3 = th("jacobi3"), j4 = th("jacobi4");
    for (int i = 0; i < 5; ++i) {
        auto s = R.point_away(1, {AffineForm::slot(1, 0), AffineForm::slot(1, 0) + Rational(-1, 2)}, 0.1);
        R.guarded("jacobi3 = 2 xi(2s) at " + pt_str(s), 1e-9, [&] {
            R.compare("jacobi3 = 2 xi(2s) at " + pt_str(s), lam({j3}, s, p), 2.0 * riemann_xi(2.0 * s[0], p), 1e-9);
        });
        R.guarded("jacobi2(s) = jacobi4(1/2-s) at " + pt_str(s), 1e-8, [&] {
            R.compare("jacobi2(s) = jacobi4(1/2-s) at " + pt_str(s), lam({j2}, s, p), lam({j4}, {0.5 - s[0]}, p), 1e-8);
        });
    }
    // cusp form
    auto delta = th("delta");
    R.check("delta pole set empty", double(expr({delta})->hyperplanes.size()), 0.0);
    for (int i = 0; i < 10; ++i) {
        Complex s = R.point(6.0, 3.0) + 6.0;
        R.guarded("delta(s) = delta(12-s) at " + pt_str({s}), 1e-9, [&] {
            R.compare("delta(s) = delta(12-s) at " + pt_str({s}), lam({delta}, {s}, p), lam({delta}, {12.0 - s}, p), 1e-9);
        });
    }
    // conjugation symmetry
    for (int i = 0; i < 5; ++i) {
        std::vector<ThetaPtr> t{riemann, riemann};
        auto s = R.point_away(2, expr(t)->hyperplanes);
        std::vector<Complex> sc{std::conj(s[0]), std::conj(s[1])};
        R.guarded("conjugation at " + pt_str(s), 1e-9, [&] {
            R.compare("conjugation at " + pt_str(s), std::conj(lam(t, s, p)), lam(t, sc, p), 1e-9);
        });
    }
    // direct definition
    R.guarded("direct xi(3,4)", 1e-8, [&] {
        R.compare("direct xi(3,4)", lam({riemann, riemann}, {3.0, 4.0}, p), lambda_direct({riemann, riemann}, {3.0, 4.0}, p).value,
                  1e-8);
    });
    R.guarded("direct delta(11)", 1e-9, [&] {
        Complex a = lam({delta}, {11.0}, p), b = lambda_direct({delta}, {11.0}, p).value;
        R.check("direct delta(11)", std::abs(a - b) / std::abs(a), 1e-9);
    });
    R.guarded("direct xi(6)", 1e-9, [&] {
        R.compare("direct xi(6)", lam({riemann}, {6.0}, p), lambda_direct({riemann}, {6.0}, p).value, 1e-9);
    });
}

void shuffles(std::size_t i, std::size_t j, std::size_t nu, std::size_t nv, std::vector<std::size_t>& cur,
              std::vector<std::vector<std::size_t>>& out) {
    if (i == nu && j == nv) {
        out.push_back(cur);
        return;
    }
    if (i < nu) {
        cur.push_back(i);
        shuffles(i + 1, j, nu, nv, cur, out);
        cur.pop_back();
    }
    if (j < nv) {
        cur.push_back(nu + j);
        shuffles(i, j + 1, nu, nv, cur, out);
        cur.pop_back();
    }
}

void suite_shuffle(Runner& R) {
    const auto& p = R.params();
    std::vector<ThetaPtr> pool{th("riemann"), th("eisenstein", {4}), th("delta"), th("theta_plus"), th("theta_minus")};
    for (int trial = 0; trial < R.trials(); ++trial) {
        std::size_t nu = static_cast<std::size_t>(R.rng().integer(1, 2));
        std::size_t nv = static_cast<std::size_t>(R.rng().integer(1, int(3 - nu)));
        std::vector<ThetaPtr> all;
        for (std::size_t k = 0; k < nu + nv; ++k) all.push_back(pool[R.rng().integer(0, int(pool.size()) - 1)]);
        std::vector<std::vector<std::size_t>> perms;
        std::vector<std::size_t> cur;
        shuffles(0, 0, nu, nv, cur, perms);
        std::vector<ThetaPtr> u(all.begin(), all.begin() + nu), v(all.begin() + nu, all.end());
        // avoid every hyperplane of every participating expression
        std::vector<Complex> s;
        for (;;) {
            s.assign(nu + nv, 0.0);
            for (auto& x : s) x = R.point();
            bool ok = min_distance(expr(u)->hyperplanes, {s.begin(), s.begin() + nu}) >= 0.1 &&
                      min_distance(expr(v)->hyperplanes, {s.begin() + nu, s.end()}) >= 0.1;
            for (const auto& perm : perms) {
                std::vector<ThetaPtr> t;
                std::vector<Complex> sp;
                for (auto k : perm) {
                    t.push_back(all[k]);
                    sp.push_back(s[k]);
                }
                ok = ok && min_distance(expr(t)->hyperplanes, sp) >= 0.1;
            }
            if (ok) break;
        }
        std::string name = "shuffle (" + tuple_str(u) + ") x (" + tuple_str(v) + ") at " + pt_str(s);
        R.guarded(name, 1e-8, [&] {
            Complex lhs = lam(u, {s.begin(), s.begin() + nu}, p) * lam(v, {s.begin() + nu, s.end()}, p);
            Complex rhs = 0;
            for (const auto& perm : perms) {
                std::vector<ThetaPtr> t;
                std::vector<Complex> sp;
                for (auto k : perm) {
                    t.push_back(all[k]);
                    sp.push_back(s[k]);
                }
                rhs += lam(t, sp, p);
            }
            R.compare(name, lhs, rhs, 1e-8);
        });
    }
}

// Symmetric Richardson limit of h(s + e n) Lambda(s + e n) as e -> 0, n the normal of h.
Complex numeric_residue(const LambdaExpression& e, const AffineForm& h, const std::vector<Complex>& s,
                        const EvalParams& p) {
    std::vector<double> n;
    double nn = 0;
    for (std::size_t i = 0; i < h.slots(); ++i) {
        n.push_back(to_double(Rational(h.coeff(i))));
        nn += n.back() * n.back();
    }
    auto g = [&](double eps) {
        Complex acc = 0;
        for (double sgn : {1.0, -1.0}) {
            std::vector<Complex> x = s;
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += sgn * eps * n[i];
            acc += sgn * eps * nn * lambda_eval(e, x, p).value;
        }
        return 0.5 * acc;
    };
    const double eps = 0.04;
    Complex g1 = g(eps), g2 = g(eps / 2), g3 = g(eps / 4);
    Complex r1 = (4.0 * g2 - g1) / 3.0, r2 = (4.0 * g3 - g2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

// Generic point on h: at least 0.5 from every other pole hyperplane, so the numeric limit is well conditioned.
template <class Sample>
std::vector<Complex> on_hyperplane(const std::vector<AffineForm>& planes, const AffineForm& h, Sample sample) {
    auto others = planes;
    std::erase_if(others, [&](const AffineForm& f) { return f == h.normalized(); });
    for (;;) {
        auto s = sample();
        if (min_distance(others, s) >= 0.5) return s;
    }
}

void suite_residues(Runner& R) {
    const auto& p = R.params();
    auto riemann = th("riemann");
    auto e2 = expr({riemann, riemann});
    auto e3 = expr({riemann, riemann, riemann});
    const int n = std::max(3, R.trials() / 4);
    for (int i = 0; i < n; ++i) {
        Complex s1 = R.point() ;
        while (std::abs(s1) < 0.2 || std::abs(s1 - 1.0) < 0.2 || std::abs(s1 - 2.0) < 0.2) s1 = R.point();
        std::string name = "Res_{s2=0} xi(s1,s2) = -xi(s1) at s1=" + pt_str({s1});
        R.guarded(name, 1e-8, [&] {
            R.compare(name, residue(*e2, AffineForm::slot(2, 1), {s1, 0.0}, p).value, -riemann_xi(s1, p), 1e-8);
        });
        name = "Res_{s1+s2=0} xi(s1,s2) = 1/s2 at s1=" + pt_str({s1});
        R.guarded(name, 1e-8, [&] {
            AffineForm h = AffineForm::slot(2, 0) + AffineForm::slot(2, 1);
            R.compare(name, residue(*e2, h, {s1, -s1}, p).value, 1.0 / (-s1), 1e-8);
        });
    }
    for (int i = 0; i < n; ++i) {
        // k = 2: h = s2 + s3, value xi(s1) / s3
        AffineForm h = AffineForm::slot(3, 1) + AffineForm::slot(3, 2);
        auto s = on_hyperplane(e3->hyperplanes, h, [&] {
            Complex a = R.point(), b = R.point();
            return std::vector<Complex>{a, b, -b};
        });
        std::string name = "r=3 k=2 residue at " + pt_str(s);
        R.guarded(name, 1e-7, [&] {
            Complex res = residue(*e3, h, s, p).value;
            R.compare(name + " vs formula", res, riemann_xi(s[0], p) / s[2], 1e-7);
            R.compare(name + " vs numeric limit", res, numeric_residue(*e3, h, s, p), 1e-7);
        });
        // k = 3: h = s3, value -xi(s1, s2)
        AffineForm h3 = AffineForm::slot(3, 2);
        auto t = on_hyperplane(e3->hyperplanes, h3, [&] {
            Complex a = R.point(), b = R.point();
            return std::vector<Complex>{a, b, 0.0};
        });
        name = "r=3 k=3 residue at " + pt_str(t);
        R.guarded(name, 1e-7, [&] {
            Complex res = residue(*e3, h3, t, p).value;
            R.compare(name + " vs formula", res, -lam({riemann, riemann}, {t[0], t[1]}, p), 1e-7);
            R.compare(name + " vs numeric limit", res, numeric_residue(*e3, h3, t, p), 1e-7);
        });
    }
}

void suite_eisenstein(Runner& R) {
    const auto& p = R.params();
    for (int k : {2, 3}) {
        auto g = th("eisenstein", {2 * k});
        for (int i = 0; i < std::max(5, R.trials() / 2); ++i) {
            Complex s = R.point(4.0, 3.0) + double(k);
            bool near = false;
            for (double q : {0.0, 1.0, 2.0 * k - 1.0, 2.0 * k}) near = near || std::abs(s - q) < 0.1;
            if (near) {
                --i;
                continue;
            }
            std::string name = "G" + std::to_string(2 * k) + " identity at " + pt_str({s});
            R.guarded(name, 1e-8, [&] {
                Complex pre = 1.0;
                for (int j = 1; j <= 2 * k - 1; j += 2) pre *= s - double(j);
                pre /= 2.0 * std::pow(2.0 * kPi, k);
                R.compare(name, lam({g}, {s}, p), pre * riemann_xi(s, p) * riemann_xi(s - double(2 * k - 1), p), 1e-8);
            });
        }
    }
    R.guarded("Lambda(G4;2) = -1/288", 1e-10, [&] {
        R.compare("Lambda(G4;2) = -1/288", lam({th("eisenstein", {4})}, {2.0}, p), -1.0 / 288.0, 1e-10);
    });
    R.guarded("E(i,1.3) = E(i,-0.3)", 1e-7, [&] {
        Complex a = eisenstein_real({0, 1}, 1.3, p).E;
        Complex b = eisenstein_fourier_e0({0, 1}, -0.3) + eisenstein_infinity(1.0, -0.3, p);
        R.compare("E(i,1.3) = E(i,-0.3)", a, b, 1e-7);
    });
    R.guarded("E(-1/z,s) = E(z,s) at z=2i, s=1.5", 1e-8, [&] {
        R.compare("E(-1/z,s) = E(z,s) at z=2i, s=1.5", eisenstein_lattice({0, 2}, 1.5), eisenstein_lattice({0, 0.5}, 1.5),
                  1e-8);
    });
    R.guarded("Fourier E0 = lattice E0 at z=0.2+1.1i, s=1.7", 1e-9, [&] {
        Complex z{0.2, 1.1};
        R.compare("Fourier E0 = lattice E0 at z=0.2+1.1i, s=1.7", eisenstein_real(z, 1.7, p).E0,
                  eisenstein_fourier_e0(z, 1.7), 1e-9);
    });
    R.guarded("Einf(2i,1.5) assembly", 1e-12, [&] {
        R.compare("Einf(2i,1.5) assembly", eisenstein_infinity(2.0, 1.5, p),
                  riemann_xi(3.0, p) * std::pow(2.0, 1.5) + riemann_xi(2.0, p) * std::pow(2.0, -0.5), 1e-12);
    });
    auto riemann = th("riemann");
    R.guarded("xi via Eisenstein (1,1) = pi^2/72", 1e-7, [&] {
        R.compare("xi via Eisenstein (1,1) = pi^2/72", xi_via_eisenstein(1.0, 1.0, p).value, kPi * kPi / 72.0, 1e-7);
    });
    R.guarded("xi via Eisenstein (1.3,0.9)", 1e-6, [&] {
        R.compare("xi via Eisenstein (1.3,0.9)", xi_via_eisenstein(1.3, 0.9, p).value, lam({riemann, riemann}, {2.6, 1.8}, p),
                  1e-6);
    });
    R.guarded("xi via Eisenstein (1.1,1.2) reflected", 1e-6, [&] {
        R.compare("xi via Eisenstein (1.1,1.2) reflected", xi_via_eisenstein(1.1, 1.2, p).value,
                  lam({riemann, riemann}, {1.0 - 2.4, 1.0 - 2.2}, p), 1e-6);
    });
}

void suite_mzv(Runner& R) {
    const auto& p = R.params();
    R.guarded("mzv reconstruction", 1e-7, [&] {
        const double tol[] = {1e-10, 1e-10, 1e-8, 1e-7};
        auto res = mzv_reconstruction_check(3, p);
        for (std::size_t i = 0; i < res.size(); ++i) R.check(res[i].name, res[i].defect, tol[i]);
    });
    R.compare("zeta(2) = pi^2/6", mzv_sum({2}), kPi * kPi / 6.0, 1e-12);
    R.compare("zeta(1,2) = zeta(3)", mzv_sum({1, 2}), mzv_sum({3}), 1e-10);
    R.compare("zeta(1,1,2) = zeta(4)", mzv_sum({1, 1, 2}), mzv_sum({4}), 1e-9);
}

Complex q_combination(const std::vector<QTerm>& terms) {
    double v = 0;
    for (const auto& t : terms) v += double(t.coef) * q_sum(t.k);
    return v;
}

void suite_qsums(Runner& R) {
    const auto& p = R.params();
    auto riemann = th("riemann");
    R.compare("Q(1,1) = pi^4/72", q_sum({1, 1}), std::pow(kPi, 4) / 72.0, 1e-10);
    R.compare("Q(2) = pi^4/90", q_sum({2}), std::pow(kPi, 4) / 90.0, 1e-12);
    const std::vector<std::vector<int>> ells{{1, 1}, {1, 2}, {2, 1}, {1, 1, 1}};
    for (const auto& l : ells) {
        std::string name = "pi^w D(";
        std::vector<Complex> s;
        int w = 0;
        for (std::size_t i = 0; i < l.size(); ++i) {
            name += (i ? "," : "") + std::to_string(2 * l[i]);
            s.push_back(2.0 * l[i]);
            w += l[i];
        }
        name += ") = Q combination";
        R.guarded(name, 1e-8, [&] {
            std::vector<ThetaPtr> t(l.size(), riemann);
            R.compare(name, std::pow(kPi, w) * d_value(t, s, p).value, q_combination(reduce_d_to_q(l)), 1e-8);
        });
    }
    R.check("reduce (1,2) = Q(1,2) + Q(2,1)",
            reduce_d_to_q({1, 2}) == std::vector<QTerm>{{1, {1, 2}}, {1, {2, 1}}} ? 0.0 : 1.0, 0.0);
    R.check("reduce (2,1) = Q(2,1)", reduce_d_to_q({2, 1}) == std::vector<QTerm>{{1, {2, 1}}} ? 0.0 : 1.0, 0.0);
    for (int l1 = 1; l1 <= 4; ++l1)
        for (int l2 = 1; l2 <= 4; ++l2) {
            std::vector<QTerm> expect;
            long long f = 1;
            for (int i = 2; i < l1; ++i) f *= i;
            for (int i = 2; i < l2; ++i) f *= i;
            for (int k = l2 - 1; k >= 0; --k) {
                long long b = std::llround(boost::math::binomial_coefficient<double>(l1 + k - 1, k));
                expect.push_back({f * b, {l1 + k, l2 - k}});
            }
            std::sort(expect.begin(), expect.end(), [](const QTerm& a, const QTerm& b) { return a.k < b.k; });
            R.check("reduce binomial formula (" + std::to_string(l1) + "," + std::to_string(l2) + ")",
                    reduce_d_to_q({l1, l2}) == expect ? 0.0 : 1.0, 0.0);
        }
    for (int l = 1; l <= 3; ++l) {
        std::string name = "xi(" + std::to_string(2 * l) + ",2) identity";
        R.guarded(name, 1e-7, [&] {
            double fact = std::tgamma(double(l));
            Complex lhs = std::pow(kPi, l + 1) / fact * lam({riemann, riemann}, {2.0 * l, 2.0}, p);
            R.compare(name, lhs, q_sum({l, 1}) + (1.0 - l) / 2.0 * mzv_sum({2 * l + 2}), 1e-7);
        });
    }
    R.guarded("xi(3,4) = D(3,4) + (1/3-1/4) xi(7)", 1e-8, [&] {
        R.compare("xi(3,4) = D(3,4) + (1/3-1/4) xi(7)", lam({riemann, riemann}, {3.0, 4.0}, p),
                  d_value({riemann, riemann}, {3.0, 4.0}, p).value + (1.0 / 3 - 1.0 / 4) * riemann_xi(7.0, p), 1e-8);
    });
}

void suite_eichler(Runner& R) {
    const auto& p = R.params();
    auto riemann = th("riemann");
    R.guarded("eichler (2,2) = pi^2/72", 1e-9, [&] {
        R.compare("eichler (2,2) = pi^2/72", eichler_xi(2, 2, p).value, kPi * kPi / 72.0, 1e-9);
    });
    for (auto [a, b] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {4, 2}, {6, 2}}) {
        std::string name = "eichler (" + std::to_string(a) + "," + std::to_string(b) + ") = engine";
        R.guarded(name, 1e-7, [&] {
            R.compare(name, eichler_xi(a, b, p).value, lam({riemann, riemann}, {double(a), double(b)}, p), 1e-7);
        });
    }
}

void suite_binding(Runner& R) {
    const auto& p = R.params();
    R.check("binding (1,1,1,2)", binding_lemma_check(1, 1, 1, 2.0), 1e-10);
    R.check("binding (2,3,5,1.5)", binding_lemma_check(2, 3, 5, 1.5), 1e-10);
    for (int i = 0; i < std::max(10, R.trials() / 2); ++i) {
        int pp = R.rng().integer(1, 4), m = R.rng().integer(1, 9), n = R.rng().integer(1, 9);
        Complex s{R.rng().range(0.3, 4.0), R.rng().range(-3.0, 3.0)};
        R.check("binding (" + std::to_string(pp) + "," + std::to_string(m) + "," + std::to_string(n) + ") at " +
                    pt_str({s}),
                binding_lemma_check(pp, m, n, s), 1e-9);
    }
    auto g4 = th("eisenstein", {4});
    for (int pp : {1, 2}) {
        std::string name = "Lambda(G4,G4;" + std::to_string(pp) + ",9) bridge";
        R.guarded(name, 1e-6, [&] {
            auto c = lambda_bridge_check(g4, g4, pp, 9.0, p);
            R.check(name, c.defect / std::max(1.0, std::abs(c.lhs)), 1e-6);
        });
    }
}

}  // namespace

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next() { return double(engine_() >> 11) * 0x1.0p-53; }

int UniformStream::integer(int lo, int hi) {
    return lo + static_cast<int>(next() * double(hi - lo + 1));
}

double defect(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"functional", "shuffle", "residues", "eisenstein-id",
                                                "mzv",        "qsums",   "eichler",  "binding"};
    return names;
}

std::vector<VerifyCase> run_verify_suite(const std::string& suite, const VerifyOptions& opt) {
    if (suite == "all") {
        std::vector<VerifyCase> out;
        for (const auto& s : verify_suite_names()) {
            auto part = run_verify_suite(s, opt);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    static const std::map<std::string, void (*)(Runner&)> table{
        {"functional", suite_functional}, {"shuffle", suite_shuffle}, {"residues", suite_residues},
        {"eisenstein-id", suite_eisenstein}, {"mzv", suite_mzv},       {"qsums", suite_qsums},
        {"eichler", suite_eichler},       {"binding", suite_binding}};
    auto it = table.find(suite);
    if (it == table.end()) throw std::invalid_argument("unknown suite '" + suite + "'");
    Runner R(suite, opt);
    it->second(R);
    return std::move(R.results());
}

}  // namespace mlambda
