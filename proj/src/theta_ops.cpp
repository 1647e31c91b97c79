#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mlambda/theta.hpp"

namespace mlambda {

namespace {

void check_exponent(const Rational& e, const std::string& what) {
    auto d = denominator(e);
    if (d != 1 && d != 2) throw std::invalid_argument(what + ": only integer or half-integer exponents are supported");
}

void merge_poly(std::vector<Monomial>& poly) {
    std::map<Rational, Rational> m;
    for (auto& mono : poly) m[mono.e] += mono.c;
    poly.clear();
    for (auto& [e, c] : m)
        if (c != 0) poly.push_back({c, e});
}

void merge_comps(std::vector<TailComponent>& comps) {
    std::map<std::pair<Rational, int>, double> m;
    for (auto& c : comps) m[{c.e, c.m}] += c.c;
    comps.clear();
    for (auto& [k, c] : m)
        if (c != 0.0) comps.push_back({c, k.first, k.second});
}

// Euler operator t d/dt on c t^e mu^m exp(-lam mu t^p).
std::vector<TailComponent> euler(const std::vector<TailComponent>& comps, int p, double lam) {
    std::vector<TailComponent> out;
    for (const auto& c : comps) {
        if (c.e != 0) out.push_back({c.c * to_double(c.e), c.e, c.m});
        out.push_back({-c.c * p * lam, c.e + p, c.m + 1});
    }
    merge_comps(out);
    return out;
}

std::vector<Monomial> euler(const std::vector<Monomial>& poly) {
    std::vector<Monomial> out;
    for (const auto& m : poly)
        if (m.e != 0) out.push_back({m.c * m.e, m.e});
    return out;
}

StreamPtr lattice_product(const StreamPtr& A, const StreamPtr& B) {
    double step = *A->lattice_step();
    long kmin = A->lattice_index(1) + B->lattice_index(1);
    auto filler = [A, B, step, kmin](std::size_t n, CoefficientStream::Table& t) {
        long kmax = kmin + static_cast<long>(n) - 1;
        std::size_t need = static_cast<std::size_t>(kmax);
        std::size_t na = A->finite_size() ? std::min(need, *A->finite_size()) : need;
        std::size_t nb = B->finite_size() ? std::min(need, *B->finite_size()) : need;
        auto ta = A->table(na);
        auto tb = B->table(nb);
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 1; i <= na; ++i) {
            long ki = std::lround(ta->mu[i - 1] / step);
            if (ki + B->lattice_index(1) > kmax) break;
            for (std::size_t j = 1; j <= nb; ++j) {
                long k = ki + std::lround(tb->mu[j - 1] / step);
                if (k > kmax) break;
                c[k - kmin] += ta->a[i - 1] * tb->a[j - 1];
            }
        }
        t.mu.clear();
        t.a = c;
        for (std::size_t i = 0; i < n; ++i) t.mu.push_back(step * double(kmin + long(i)));
    };
    const auto& ga = A->growth();
    const auto& gb = B->growth();
    double kappa = ga.kappa + gb.kappa + 1;
    GrowthBound g{ga.M * gb.M * std::pow(double(kmin), kappa), kappa, step};
    return std::make_shared<CoefficientStream>(filler, g, step);
}

ThetaFunction transform(const ThetaFunction& f, const TopOp& op, const ThetaFunction* other) {
    ThetaFunction r;
    r.name = f.name;
    r.weight = f.weight;
    r.sign = f.sign;
    r.kernel_p = f.kernel_p;
    r.kernel_scale = f.kernel_scale;
    r.conductor = f.conductor;
    r.inversion_broken = f.inversion_broken;
    r.poly = f.poly;
    r.tail = f.tail;
    switch (op.kind) {
    case TopOp::MulMonomial: {
        check_exponent(op.exponent, "mul_monomial");
        for (auto& m : r.poly) {
            m.e += op.exponent;
            if (m.e < 0) throw std::invalid_argument("mul_monomial would create a negative power in the polynomial part");
        }
        for (auto& term : r.tail)
            for (auto& c : term.comps) c.e += op.exponent;
        r.weight = f.weight - 2 * op.exponent;
        r.name = f.name + "*t^" + rational_str(op.exponent);
        break;
    }
    case TopOp::Rescale: {
        if (op.n < 1) throw std::invalid_argument("rescale factor must be a positive integer");
        double n = op.n;
        for (auto& m : r.poly) {
            if (denominator(m.e) != 1) throw std::invalid_argument("rescale of half-integer polynomial powers");
            m.c *= boost::multiprecision::pow(boost::multiprecision::cpp_int(op.n),
                                              static_cast<unsigned>(numerator(m.e)));
        }
        for (auto& term : r.tail)
            for (auto& c : term.comps) c.c *= std::pow(n, to_double(c.e));
        r.kernel_scale = f.kernel_scale * std::pow(n, f.kernel_p);
        r.inversion_broken = f.inversion_broken || op.n != 1;
        r.name = f.name + "@" + std::to_string(op.n);
        break;
    }
    case TopOp::Differentiate: {
        r.poly.clear();
        for (const auto& m : f.poly)
            if (m.e != 0) r.poly.push_back({m.c * m.e, m.e - 1});
        for (auto& term : r.tail) {
            term.comps = euler(term.comps, f.kernel_p, f.kernel_scale);
            for (auto& c : term.comps) c.e -= 1;
        }
        r.inversion_broken = true;
        r.name = f.name + "'";
        break;
    }
    case TopOp::Dw: {
        // D_w = -(E^2 + w E) with E = t d/dt
        Rational w = f.weight;
        auto e1 = euler(f.poly);
        auto e2 = euler(e1);
        r.poly.clear();
        for (const auto& m : e2) r.poly.push_back({-m.c, m.e});
        for (const auto& m : e1) r.poly.push_back({-w * m.c, m.e});
        merge_poly(r.poly);
        for (auto& term : r.tail) {
            auto c1 = euler(term.comps, f.kernel_p, f.kernel_scale);
            auto c2 = euler(c1, f.kernel_p, f.kernel_scale);
            std::vector<TailComponent> out;
            for (const auto& c : c2) out.push_back({-c.c, c.e, c.m});
            for (const auto& c : c1) out.push_back({-to_double(w) * c.c, c.e, c.m});
            merge_comps(out);
            term.comps = out;
        }
        r.name = "D(" + f.name + ")";
        break;
    }
    case TopOp::PointwiseProduct: {
        const ThetaFunction& g = *other;
        if (g.kernel_p != f.kernel_p || std::abs(g.kernel_scale - f.kernel_scale) > 1e-15 * f.kernel_scale)
            throw std::invalid_argument("pointwise product needs identical kernels");
        r.weight = f.weight + g.weight;
        r.sign = f.sign * g.sign;
        r.inversion_broken = f.inversion_broken || g.inversion_broken;
        r.poly.clear();
        for (const auto& a : f.poly)
            for (const auto& b : g.poly) r.poly.push_back({a.c * b.c, a.e + b.e});
        merge_poly(r.poly);
        r.tail.clear();
        auto poly_times = [&](const std::vector<Monomial>& poly, const TailTerm& term) {
            for (const auto& m : poly) {
                TailTerm t{term.stream, {}};
                for (const auto& c : term.comps) t.comps.push_back({c.c * to_double(m.c), c.e + m.e, c.m});
                r.tail.push_back(t);
            }
        };
        for (const auto& term : g.tail) poly_times(f.poly, term);
        for (const auto& term : f.tail) poly_times(g.poly, term);
        for (const auto& ta : f.tail)
            for (const auto& tb : g.tail) {
                if (!ta.stream->lattice_step() || !tb.stream->lattice_step() ||
                    std::abs(*ta.stream->lattice_step() - *tb.stream->lattice_step()) > 1e-12)
                    throw std::invalid_argument("pointwise product needs frequencies on a common lattice");
                TailTerm t{lattice_product(ta.stream, tb.stream), {}};
                for (const auto& ca : ta.comps)
                    for (const auto& cb : tb.comps) {
                        if (ca.m != 0 || cb.m != 0)
                            throw std::invalid_argument("pointwise product of differentiated tails is unsupported");
                        t.comps.push_back({ca.c * cb.c, ca.e + cb.e, 0});
                    }
                merge_comps(t.comps);
                r.tail.push_back(t);
            }
        r.name = f.name + "*" + g.name;
        r.modular = false;
        break;
    }
    }
    return r;
}

}  // namespace

ThetaPtr apply_top(const TopOp& op, const ThetaPtr& f) {
    if (op.kind == TopOp::PointwiseProduct && !op.other) throw std::invalid_argument("product needs a second theta");
    const ThetaFunction* g = op.other.get();
    bool self = f->self_dual() && (!g || g->self_dual());
    bool broken_op = op.kind == TopOp::Differentiate || (op.kind == TopOp::Rescale && op.n != 1);
    if (self || broken_op) return make_self_dual(transform(*f, op, g));
    auto a = transform(*f, op, g);
    auto b = transform(f->dual(), op, g ? &g->dual() : nullptr);
    return make_dual_pair(std::move(a), std::move(b)).first;
}

Convolution::Convolution(ThetaPtr f, ThetaPtr g, double tol) : f_(std::move(f)), g_(std::move(g)), tol_(tol) {}

double Convolution::operator()(double t) const {
    auto upper = [](const ThetaFunction& h) {
        auto env = h.tail_envelope();
        return std::pow(60.0 / env.rate, 1.0 / h.kernel_p);
    };
    if (f_->tail.empty() || g_->tail.empty()) return 0.0;
    double xf = upper(*f_);
    double xg = upper(*g_);
    double ua = std::log(t / xf);
    double ub = std::log(xg);
    if (ua >= ub) return 0.0;
    double node_tol = tol_ * 1e-3;
    auto integrand = [&](double u) {
        double x = std::exp(u);
        return theta_eval(*f_, t / x, Part::Tail, node_tol) * theta_eval(*g_, x, Part::Tail, node_tol);
    };
    double err = 0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, ua, ub, 15, tol_ * 1e-2, &err);
}

Convolution convolve(ThetaPtr f, ThetaPtr g, double tol) { return Convolution(std::move(f), std::move(g), tol); }

// ---------------------------------------------------------------------------
// file format

namespace {

struct Block {
    std::string name;
    Rational weight = 1;
    int sign = 1;
    std::string dual = "self";
    int p = 1;
    double scale = 1.0;
    std::vector<Monomial> poly;
    bool default_freq = true;
    std::vector<double> freq;
    std::vector<double> coeffs;
    std::optional<std::pair<double, double>> growth;
    double conductor = 1.0;
    int line = 0;
};

double parse_decimal(const std::string& tok, int line) {
    try {
        if (tok.find('/') != std::string::npos) return to_double(parse_rational(tok));
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
    }
}

ThetaFunction block_to_theta(const Block& b) {
    ThetaFunction f;
    f.name = b.name;
    f.weight = b.weight;
    f.sign = b.sign;
    f.kernel_p = b.p;
    f.kernel_scale = b.scale;
    f.poly = b.poly;
    merge_poly(f.poly);
    for (const auto& m : f.poly) {
        check_exponent(m.e, "poly");
        if (m.e < 0) throw ParseError("theta '" + b.name + "': negative polynomial exponent");
    }
    f.conductor = b.conductor;
    if (!b.coeffs.empty()) {
        std::size_t n = b.coeffs.size();
        std::vector<double> mu(n);
        for (std::size_t i = 0; i < n; ++i) mu[i] = b.default_freq ? double(i + 1) : b.freq.at(i);
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mu[i] > 0) || (i > 0 && !(mu[i] > mu[i - 1])))
                throw ParseError("theta '" + b.name + "': frequencies must be positive and strictly increasing");
        }
        double kappa = b.growth ? b.growth->second : 0.0;
        double M = 0, c = mu[0];
        for (std::size_t i = 0; i < n; ++i) {
            M = std::max(M, std::abs(b.coeffs[i]) / std::pow(double(i + 1), kappa));
            c = std::min(c, mu[i] / double(i + 1));
        }
        if (b.growth) M = std::max(M, b.growth->first);
        bool integral = true;
        for (double m : mu) integral = integral && std::abs(m - std::round(m)) < 1e-12;
        auto coeffs = b.coeffs;
        double last_gap = n > 1 ? mu[n - 1] - mu[n - 2] : 1.0;
        auto filler = [mu, coeffs, last_gap](std::size_t k, CoefficientStream::Table& t) {
            for (std::size_t i = t.mu.size(); i < k; ++i) {
                bool in = i < mu.size();
                t.mu.push_back(in ? mu[i] : mu.back() + last_gap * double(i + 1 - mu.size()));
                t.a.push_back(in ? coeffs[i] : 0.0);
            }
        };
        auto stream = std::make_shared<CoefficientStream>(filler, GrowthBound{M, kappa, c},
                                                          integral ? std::optional<double>(1.0) : std::nullopt, n);
        f.tail.push_back(TailTerm{stream, {TailComponent{1.0, 0, 0}}});
    }
    return f;
}

}  // namespace

ThetaPtr parse_theta_text(const std::string& text, double validation_tol) {
    std::vector<Block> blocks;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw = raw.substr(0, hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string w; ls >> w;) tok.push_back(w);
        if (tok.empty()) continue;
        const std::string& key = tok[0];
        auto need = [&](std::size_t n) {
            if (tok.size() < n) throw ParseError("line " + std::to_string(line) + ": '" + key + "' needs more fields");
        };
        if (key == "name") {
            need(2);
            blocks.push_back(Block{});
            blocks.back().name = tok[1];
            blocks.back().line = line;
            continue;
        }
        if (blocks.empty()) throw ParseError("line " + std::to_string(line) + ": expected 'name' first");
        Block& b = blocks.back();
        try {
            if (key == "weight") {
                need(2);
                b.weight = parse_rational(tok[1]);
            } else if (key == "sign") {
                need(2);
                if (tok[1] == "+1" || tok[1] == "1")
                    b.sign = 1;
                else if (tok[1] == "-1")
                    b.sign = -1;
                else
                    throw ParseError("line " + std::to_string(line) + ": sign must be +1 or -1");
            } else if (key == "dual") {
                need(2);
                b.dual = tok[1];
            } else if (key == "kernel") {
                need(4);
                if (tok[1] == "exp")
                    b.p = 1;
                else if (tok[1] == "gauss")
                    b.p = 2;
                else
                    throw ParseError("line " + std::to_string(line) + ": kernel must be exp or gauss");
                if (tok[2] != "scale") throw ParseError("line " + std::to_string(line) + ": expected 'scale'");
                b.scale = parse_decimal(tok[3], line);
                if (!(b.scale > 0)) throw ParseError("line " + std::to_string(line) + ": scale must be positive");
            } else if (key == "poly") {
                if (tok.size() < 3 || tok.size() % 2 == 0)
                    throw ParseError("line " + std::to_string(line) + ": poly takes coefficient/exponent pairs");
                for (std::size_t i = 1; i + 1 < tok.size(); i += 2)
                    b.poly.push_back({parse_rational(tok[i]), parse_rational(tok[i + 1])});
            } else if (key == "freq") {
                need(2);
                if (tok[1] == "default") {
                    b.default_freq = true;
                } else {
                    b.default_freq = false;
                    for (std::size_t i = 1; i < tok.size(); ++i) b.freq.push_back(parse_decimal(tok[i], line));
                }
            } else if (key == "coeffs") {
                for (std::size_t i = 1; i < tok.size(); ++i) b.coeffs.push_back(parse_decimal(tok[i], line));
            } else if (key == "growth") {
                need(3);
                b.growth = std::make_pair(parse_decimal(tok[1], line), parse_decimal(tok[2], line));
            } else if (key == "conductor") {
                need(2);
                b.conductor = parse_decimal(tok[1], line);
            } else {
                throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(line) + ": " + e.what());
        }
    }
    if (blocks.empty()) throw ParseError("no theta definition found");
    for (const auto& b : blocks)
        if (!b.default_freq && b.freq.size() < b.coeffs.size())
            throw ParseError("theta '" + b.name + "': fewer frequencies than coefficients");

    std::map<std::string, ThetaPtr> built;
    for (const auto& b : blocks) {
        if (built.count(b.name)) continue;
        if (b.dual == "self" || b.dual == b.name) {
            built[b.name] = make_self_dual(block_to_theta(b));
            continue;
        }
        auto it = std::find_if(blocks.begin(), blocks.end(), [&](const Block& o) { return o.name == b.dual; });
        if (it == blocks.end()) throw ParseError("theta '" + b.name + "': dual '" + b.dual + "' is not defined in the file");
        if (it->dual != b.name) throw ParseError("theta '" + b.name + "': dual of dual must be itself");
        auto [pa, pb] = make_dual_pair(block_to_theta(b), block_to_theta(*it));
        built[b.name] = pa;
        built[it->name] = pb;
    }
    for (const auto& [name, f] : built) validate_theta(*f, validation_tol);
    return built.at(blocks.front().name);
}

ThetaPtr load_theta_from_file(const std::string& path, double validation_tol) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open theta file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_theta_text(ss.str(), validation_tol);
}

}  // namespace mlambda
