#include "mlambda/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace mlambda {

namespace {

void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

std::vector<double> legendre_all(int n, double x) {
    std::vector<double> P(n + 1);
    P[0] = 1.0;
    if (n >= 1) P[1] = x;
    for (int k = 2; k <= n; ++k) P[k] = ((2.0 * k - 1.0) * x * P[k - 1] - (k - 1.0) * P[k - 2]) / k;
    return P;
}

std::unique_ptr<GaussRule> build_rule(int n) {
    auto r = std::make_unique<GaussRule>();
    r->x.resize(n);
    r->w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0, dp = 0;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(n, x, p, dp);
        r->x[n - 1 - i] = x;
        r->w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    std::vector<std::vector<double>> Pk(n), Ii(n);
    for (int k = 0; k < n; ++k) Pk[k] = legendre_all(n, r->x[k]);
    for (int i = 0; i < n; ++i) {
        auto P = Pk[i];
        Ii[i].resize(n);
        Ii[i][0] = r->x[i] + 1.0;
        for (int j = 1; j < n; ++j) Ii[i][j] = (P[j + 1] - P[j - 1]) / (2.0 * j + 1.0);
    }
    r->S.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += (2.0 * j + 1.0) / 2.0 * Pk[k][j] * Ii[i][j];
            r->S[i][k] = r->w[k] * s;
        }
    return r;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
    if (order < 4) throw std::invalid_argument("quadrature order must be at least 4");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> rules;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = rules[order];
    if (!slot) slot = build_rule(order);
    return *slot;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double letter_growth(const Letter& l) {
    if (l.part == Part::Tail) return l.theta->tail_envelope().growth;
    double g = to_double(l.theta->poly_max_exponent());
    if (l.part == Part::Full) g = std::max(g, l.theta->tail_envelope().growth);
    return g;
}

double letter_scale(const Letter& l) {
    double c = 0;
    if (l.part != Part::Tail)
        for (const auto& m : l.theta->poly) c += std::abs(to_double(m.c));
    if (l.part != Part::Poly) c += l.theta->tail_envelope().C;
    return c;
}

// Order of the letter's function at t -> 0.
double order_at_zero(const Letter& l) {
    const ThetaFunction& f = *l.theta;
    if (l.part == Part::Poly) return to_double(f.poly_min_exponent());
    double full = f.dual().has_poly() ? -to_double(f.weight) - to_double(f.dual().poly_max_exponent()) : 50.0;
    if (f.inversion_broken) full = 0.0;
    if (l.part == Part::Full) return full;
    return f.has_poly() ? std::min(full, to_double(f.poly_min_exponent())) : full;
}

// Cutoff below which a letter decaying like exp(-c / t^p) at 0 is negligible; infinity if it does not.
double exp_decay_cutoff(const Letter& l, const std::vector<Complex>& s, double target) {
    const ThetaFunction& f = *l.theta;
    if (l.part == Part::Poly || f.inversion_broken || f.dual().has_poly()) return kInf;
    if (l.part == Part::Tail && f.has_poly()) return kInf;
    auto env = f.dual().tail_envelope();
    int kp = f.dual().kernel_p;
    double a = to_double(f.weight) + env.growth + 3.0 - l.exponent.eval(s).real();
    for (double u = 1.0; u < 1e8; u *= 1.05)
        if (std::log(env.C + 1e-300) + a * std::log(u) - env.rate * std::pow(u, kp) < std::log(target)) return 1.0 / u;
    return 0.0;
}

struct Mesh {
    std::vector<std::pair<double, double>> panels;
};

// Doubling panels from a to b, split where the kernel decays steeply, then 2^level refinement.
Mesh build_mesh(double a, double b, double rate, int p, double max_decay, int level) {
    Mesh m;
    std::vector<double> cuts{a};
    double x = a;
    while (x < b) {
        double y = std::min(2.0 * x, b);
        if (b - y < 1e-12 * b) y = b;
        double decay = x >= 1.0 ? rate * (std::pow(y, p) - std::pow(x, p)) : 0.0;
        int pieces = std::max(1, static_cast<int>(std::ceil(decay / max_decay)));
        for (int i = 1; i <= pieces; ++i) cuts.push_back(x + (y - x) * i / pieces);
        x = y;
    }
    int split = 1 << level;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        for (int j = 0; j < split; ++j) m.panels.emplace_back(lo + (hi - lo) * j / split, lo + (hi - lo) * (j + 1) / split);
    }
    return m;
}

class MeshEvaluator {
public:
    // Theta values at x are needed to theta_tol / x^growth, the growth bounding the weights they meet.
    MeshEvaluator(const Mesh& mesh, const GaussRule& rule, double theta_tol, double growth, std::size_t max_terms)
        : mesh_(mesh), rule_(rule), theta_tol_(theta_tol), growth_(growth), max_terms_(max_terms) {
        int n = static_cast<int>(rule.x.size());
        for (const auto& [lo, hi] : mesh.panels) {
            double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            halves_.push_back(half);
            for (int i = 0; i < n; ++i) {
                double x = mid + half * rule.x[i];
                x_.push_back(x);
                lnx_.push_back(std::log(x));
            }
        }
    }

    const std::vector<double>& theta_values(const ThetaFunction* f, Part part) {
        auto key = std::make_pair(f, part);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<double> v(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) {
            double tol = x_[i] > 1.0 ? theta_tol_ * std::exp(-growth_ * lnx_[i]) : theta_tol_;
            v[i] = theta_eval(*f, x_[i], part, std::max(tol, 1e-300), max_terms_);
        }
        return cache_[key] = std::move(v);
    }

    Complex integrate(const Word& w, const std::vector<Complex>& s) {
        const std::size_t N = x_.size();
        const int n = static_cast<int>(rule_.x.size());
        std::vector<Complex> A(N, Complex(1.0, 0.0)), g(N), An(N);
        Complex total = 1.0;
        for (const auto& l : w) {
            const auto& th = theta_values(l.theta.get(), l.part);
            Complex e1 = l.exponent.eval(s) - 1.0;
            for (std::size_t i = 0; i < N; ++i) g[i] = th[i] * std::exp(e1 * lnx_[i]) * A[i];
            Complex run = 0;
            for (std::size_t pnl = 0; pnl < halves_.size(); ++pnl) {
                std::size_t base = pnl * n;
                double h = halves_[pnl];
                Complex full = 0;
                for (int i = 0; i < n; ++i) {
                    Complex acc = 0;
                    const auto& Si = rule_.S[i];
                    for (int k = 0; k < n; ++k) acc += Si[k] * g[base + k];
                    An[base + i] = run + h * acc;
                    full += rule_.w[i] * g[base + i];
                }
                run += h * full;
            }
            A.swap(An);
            total = run;
        }
        return total;
    }

    std::size_t nodes() const { return x_.size(); }

private:
    const Mesh& mesh_;
    const GaussRule& rule_;
    double theta_tol_;
    double growth_;
    std::size_t max_terms_;
    std::vector<double> x_, lnx_, halves_;
    std::map<std::pair<const ThetaFunction*, Part>, std::vector<double>> cache_;
};

void check_tail_last(const Word& w) {
    if (w.empty() || w.back().part != Part::Tail)
        throw std::invalid_argument("numeric word must end in a tail letter");
}

double decay_rate(const std::vector<Word>& words) {
    double r = kInf;
    for (const auto& w : words)
        if (!w.empty() && w.back().part == Part::Tail) r = std::min(r, w.back().theta->tail_envelope().rate);
    return std::isfinite(r) ? r : 1.0;
}

int kernel_power(const std::vector<Word>& words) {
    int p = 1;
    for (const auto& w : words)
        if (!w.empty()) p = std::max(p, w.back().theta->kernel_p);
    return p;
}

// Power of t bounding the weight multiplying any letter of the words on [1, inf).
double weight_growth(const std::vector<Word>& words, const std::vector<Complex>& s) {
    double G = 0;
    for (const auto& w : words) {
        double g = 0;
        for (const auto& l : w) g += std::max(l.exponent.eval(s).real() + letter_growth(l), 0.0);
        G = std::max(G, g);
    }
    return G;
}

// Runs the refinement loop for a family of words over meshes from make_mesh(level).
template <class MakeMesh>
std::vector<QuadResult> refine_loop(const std::vector<Word>& words, const std::vector<Complex>& s,
                                    const EvalParams& p, MakeMesh make_mesh, double extra_err) {
    const GaussRule& rule = gauss_rule(p.quad_order);
    std::vector<QuadResult> out(words.size());
    std::vector<Complex> prev(words.size());
    const double growth = weight_growth(words, s);
    for (int level = 0; level <= p.max_refine + 1; ++level) {
        Mesh mesh = make_mesh(level);
        std::size_t nodes = mesh.panels.size() * rule.x.size();
        MeshEvaluator ev(mesh, rule, p.abs_tol / (100.0 * double(nodes)), growth, p.max_terms);
        std::vector<Complex> cur(words.size());
        for (std::size_t i = 0; i < words.size(); ++i) cur[i] = words[i].empty() ? Complex(1.0) : ev.integrate(words[i], s);
        if (level > 0) {
            bool ok = true;
            for (std::size_t i = 0; i < words.size(); ++i) {
                out[i].value = cur[i];
                out[i].err = std::abs(cur[i] - prev[i]) + extra_err;
                if (!(out[i].err <= p.abs_tol)) ok = false;
            }
            if (ok) return out;
        }
        prev = cur;
    }
    double worst = 0;
    for (const auto& r : out) worst = std::max(worst, r.err);
    throw QuadratureError("quadrature tolerance not met after refinement (estimate " + std::to_string(worst) + ")");
}

}  // namespace

double truncation_horizon(const Word& w, const std::vector<Complex>& s, const EvalParams& p) {
    check_tail_last(w);
    double target = p.abs_tol / p.horizon_margin;
    double G = 0, C = 1;
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
        double g = std::max(w[j].exponent.eval(s).real() + letter_growth(w[j]), 0.0) + 0.5;
        G += g;
        C *= 2.0 * (letter_scale(w[j]) + 1e-300) / std::min(g, 1.0);
    }
    const Letter& last = w.back();
    auto env = last.theta->tail_envelope();
    C *= env.C;
    int kp = last.theta->kernel_p;
    double alpha = G + last.exponent.eval(s).real() - 1.0 + env.growth;
    auto bound = [&](double T) {
        double slope = kp * env.rate * std::pow(T, kp - 1) - alpha / T;
        if (slope <= 0) return kInf;
        return C * std::exp(alpha * std::log(T) - env.rate * std::pow(T, kp)) / slope;
    };
    double T = 1.0;
    while (!(bound(T) <= target)) {
        T += 0.25;
        if (T > 1e6) throw QuadratureError("no truncation horizon found");
    }
    return T;
}

std::vector<QuadResult> tail_word_integrals(const std::vector<Word>& words, const std::vector<Complex>& s,
                                            const EvalParams& p) {
    double T = 1.0;
    for (const auto& w : words)
        if (!w.empty()) T = std::max(T, truncation_horizon(w, s, p));
    double b = std::exp2(std::ceil(std::log2(T)));
    double rate = decay_rate(words);
    int kp = kernel_power(words);
    return refine_loop(
        words, s, p, [&](int level) { return build_mesh(1.0, b, rate, kp, p.panel_decay, level); },
        p.abs_tol / p.horizon_margin);
}

QuadResult tail_word_integral(const Word& w, const std::vector<Complex>& s, const EvalParams& p) {
    if (w.empty()) return {Complex(1.0), 0.0};
    return tail_word_integrals({w}, s, p).front();
}

QuadResult word_integral(const Word& w, const std::vector<Complex>& s, double a, double b, const EvalParams& p) {
    if (w.empty()) return {Complex(1.0), 0.0};
    if (!(a > 0) || !(b > a)) throw std::invalid_argument("word_integral needs 0 < a < b");
    double extra = 0;
    if (std::isinf(b)) {
        double T = std::max(truncation_horizon(w, s, p), 2.0 * a);
        b = a * std::exp2(std::ceil(std::log2(T / a)));
        extra = p.abs_tol / p.horizon_margin;
    }
    std::vector<Word> words{w};
    double rate = decay_rate(words);
    int kp = kernel_power(words);
    return refine_loop(
               words, s, p, [&](int level) { return build_mesh(a, b, rate, kp, p.panel_decay, level); }, extra)
        .front();
}

QuadResult zero_word_integral(const Word& w, const std::vector<Complex>& s, const EvalParams& p) {
    check_tail_last(w);
    double sigma = 0, sigma_min = kInf;
    for (const auto& l : w) {
        sigma += l.exponent.eval(s).real() + order_at_zero(l);
        sigma_min = std::min(sigma_min, sigma);
    }
    if (!(sigma_min > 0))
        throw ConvergenceError("integral from 0 does not converge: partial exponent sum " + std::to_string(sigma_min));
    double delta = std::pow(p.abs_tol * 1e-3, 1.0 / sigma_min);
    for (const auto& l : w) delta = std::min(delta, exp_decay_cutoff(l, s, p.abs_tol * 1e-3));
    delta = std::clamp(delta, 1e-200, 0.5);
    delta = std::exp2(std::floor(std::log2(delta)));
    double T = truncation_horizon(w, s, p);
    double b = std::exp2(std::ceil(std::log2(T)));
    std::vector<Word> words{w};
    double rate = decay_rate(words);
    int kp = kernel_power(words);
    return refine_loop(
               words, s, p, [&](int level) { return build_mesh(delta, b, rate, kp, p.panel_decay, level); },
               p.abs_tol / p.horizon_margin)
        .front();
}

}  // namespace mlambda
