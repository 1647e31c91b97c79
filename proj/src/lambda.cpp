#include "mlambda/lambda.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace mlambda {

namespace {

struct RPiece {
    Word numeric;
    RationalCombination rc;
};

bool has_empty_poly(const Word& w) {
    for (const auto& l : w)
        if (l.part == Part::Poly && !l.theta->has_poly()) return true;
    return false;
}

PolyLetter poly_letter(const Letter& l) {
    PolyLetter pl;
    pl.exponent = l.exponent;
    for (const auto& m : l.theta->poly) pl.monomials.emplace_back(m.c, m.e);
    return pl;
}

// R(L_1..L_m) = sum_i (-1)^(m-i) int_1^inf R(L_1..L_i) * int_0^1 L_m^inf..L_(i+1)^inf.
std::vector<RPiece> expand_r(const Word& letters) {
    std::vector<RPiece> out;
    const std::size_t m = letters.size();
    for (std::size_t i = 0; i <= m; ++i) {
        std::vector<PolyLetter> tangent;
        bool zero = false;
        for (std::size_t j = m; j > i; --j) {
            if (!letters[j - 1].theta->has_poly()) zero = true;
            tangent.push_back(poly_letter(letters[j - 1]));
        }
        if (zero) continue;
        RationalCombination rc = tangent.empty() ? RationalCombination::unit() : tangent_word_integral(tangent);
        if ((m - i) % 2 == 1) rc = rc.scaled(-1);
        if (rc.empty()) continue;
        if (i == 0) {
            out.push_back({Word{}, rc});
            continue;
        }
        Word head(letters.begin(), letters.begin() + i);
        WordSum reg = regularize(head);
        for (const auto& [w, c] : reg.terms()) {
            if (has_empty_poly(w)) continue;
            out.push_back({w, rc.scaled(Rational(c))});
        }
    }
    return out;
}

Complex word_value(const std::vector<QuadResult>& r, int idx) { return idx < 0 ? Complex(1.0) : r[idx].value; }
double word_err(const std::vector<QuadResult>& r, int idx) { return idx < 0 ? 0.0 : r[idx].err; }

void check_point(const LambdaExpression& e, const std::vector<Complex>& s) {
    if (s.size() != e.arity())
        throw std::invalid_argument("expected " + std::to_string(e.arity()) + " coordinates, got " +
                                    std::to_string(s.size()));
}

Word full_word(const std::vector<ThetaPtr>& thetas) {
    Word w;
    for (std::size_t j = 0; j < thetas.size(); ++j)
        w.push_back(Letter{thetas[j], Part::Full, AffineForm::slot(thetas.size(), j)});
    return w;
}

}  // namespace

LambdaExpression build_expression(const std::vector<ThetaPtr>& thetas) {
    if (thetas.empty()) throw std::invalid_argument("empty theta tuple");
    for (const auto& t : thetas) {
        if (!t) throw std::invalid_argument("null theta");
        if (t->inversion_broken)
            throw StructuralError("theta '" + t->name + "' has no inversion law; register it with an explicit dual");
    }
    const std::size_t r = thetas.size();
    LambdaExpression e;
    e.thetas = thetas;
    std::map<Word, int> index;
    auto word_index = [&](const Word& w) -> int {
        if (w.empty()) return -1;
        auto [it, fresh] = index.emplace(w, static_cast<int>(e.words.size()));
        if (fresh) e.words.push_back(w);
        return it->second;
    };
    std::map<std::pair<int, int>, RationalCombination> merged;
    int eps = 1;
    for (std::size_t k = 0; k <= r; ++k) {
        if (k > 0) eps *= thetas[k - 1]->sign;
        Word left, right;
        for (std::size_t j = k; j > 0; --j) {
            const auto& th = thetas[j - 1];
            AffineForm ex = AffineForm::constant_form(r, th->weight) - AffineForm::slot(r, j - 1);
            left.push_back(Letter{th->dual_ptr(), Part::Full, ex});
        }
        for (std::size_t j = k; j < r; ++j) right.push_back(Letter{thetas[j], Part::Full, AffineForm::slot(r, j)});
        auto lp = expand_r(left);
        auto rp = expand_r(right);
        for (const auto& a : lp)
            for (const auto& b : rp) {
                auto key = std::make_pair(word_index(a.numeric), word_index(b.numeric));
                merged[key] = merged[key] + (a.rc * b.rc).scaled(Rational(eps));
            }
    }
    std::set<AffineForm> planes;
    for (auto& [key, rc] : merged) {
        if (rc.empty()) continue;
        for (const auto& h : rc.poles()) planes.insert(h.normalized());
        e.terms.push_back({key.first, key.second, std::move(rc)});
    }
    e.hyperplanes.assign(planes.begin(), planes.end());
    return e;
}

std::shared_ptr<const LambdaExpression> cached_expression(const std::vector<ThetaPtr>& thetas) {
    static std::mutex mutex;
    static std::map<std::vector<const ThetaFunction*>, std::pair<std::vector<ThetaPtr>, std::shared_ptr<const LambdaExpression>>>
        cache;
    std::vector<const ThetaFunction*> key;
    for (const auto& t : thetas) key.push_back(t.get());
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second.second;
    }
    auto e = std::make_shared<const LambdaExpression>(build_expression(thetas));
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, std::make_pair(thetas, e));
    return e;
}

double hyperplane_distance(const AffineForm& h, const std::vector<Complex>& s) {
    return std::abs(h.eval(s)) / h.slot_norm();
}

std::optional<std::pair<AffineForm, double>> nearest_pole(const LambdaExpression& e, const std::vector<Complex>& s) {
    std::optional<std::pair<AffineForm, double>> best;
    for (const auto& h : e.hyperplanes) {
        double d = hyperplane_distance(h, s);
        if (!best || d < best->second) best = std::make_pair(h, d);
    }
    return best;
}

LambdaResult lambda_eval(const LambdaExpression& e, const std::vector<Complex>& s, const EvalParams& p) {
    check_point(e, s);
    LambdaResult out;
    if (auto near = nearest_pole(e, s)) {
        if (near->second < kPoleGuard) throw PoleError(near->first, near->second);
        if (near->second < 1e-4)
            out.warnings.push_back("close to pole " + near->first.hyperplane_str() + " (distance " +
                                   std::to_string(near->second) + ")");
    }
    auto vals = tail_word_integrals(e.words, s, p);
    for (const auto& t : e.terms) {
        RcValue rv = rc_eval(t.rc, s);
        if (rv.pole) throw PoleError(*rv.pole, 0.0);
        Complex L = word_value(vals, t.left), R = word_value(vals, t.right);
        double eL = word_err(vals, t.left), eR = word_err(vals, t.right);
        out.value += L * R * rv.value;
        out.err += std::abs(rv.value) * (eL * std::abs(R) + eR * std::abs(L) + eL * eR);
    }
    return out;
}

std::vector<PointResult> lambda_eval_many(const LambdaExpression& e, const std::vector<std::vector<Complex>>& points,
                                          const EvalParams& p, unsigned threads) {
    std::vector<PointResult> out(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                out[i].result = lambda_eval(e, points[i], p);
            } catch (const PoleError& pe) {
                out[i].pole = pe.hyperplane;
                out[i].error = pe.what();
            } catch (const std::exception& ex) {
                out[i].error = ex.what();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return out;
}

LambdaResult lambda_direct(const std::vector<ThetaPtr>& thetas, const std::vector<Complex>& s, const EvalParams& p) {
    if (s.size() != thetas.size()) throw std::invalid_argument("point dimension mismatch");
    LambdaResult out;
    WordSum reg = regularize(full_word(thetas));
    for (const auto& [w, c] : reg.terms()) {
        if (has_empty_poly(w)) continue;
        auto q = zero_word_integral(w, s, p);
        out.value += double(c) * q.value;
        out.err += std::abs(double(c)) * q.err;
    }
    return out;
}

LambdaResult d_value(const std::vector<ThetaPtr>& thetas, const std::vector<Complex>& s, const EvalParams& p) {
    if (s.size() != thetas.size()) throw std::invalid_argument("point dimension mismatch");
    Word w = full_word(thetas);
    for (auto& l : w) l.part = Part::Tail;
    auto q = zero_word_integral(w, s, p);
    return {q.value, q.err, {}};
}

const std::vector<AffineForm>& poles(const LambdaExpression& e) { return e.hyperplanes; }

LambdaResult residue(const LambdaExpression& e, const AffineForm& h, const std::vector<Complex>& s,
                     const EvalParams& p) {
    check_point(e, s);
    if (h.slots() != e.arity()) throw std::invalid_argument("hyperplane dimension mismatch");
    if (h.is_constant()) throw std::invalid_argument("hyperplane has no variable part");
    AffineForm hn = h.normalized();
    std::vector<const LambdaTerm*> hit;
    std::vector<Word> words;
    std::map<int, int> remap;
    for (const auto& t : e.terms) {
        bool has = false;
        for (const auto& f : t.rc.poles())
            if (f.normalized() == hn) has = true;
        if (!has) continue;
        hit.push_back(&t);
        for (int idx : {t.left, t.right})
            if (idx >= 0 && !remap.count(idx)) {
                remap[idx] = static_cast<int>(words.size());
                words.push_back(e.words[idx]);
            }
    }
    LambdaResult out;
    if (hit.empty()) return out;
    auto vals = tail_word_integrals(words, s, p);
    for (const auto* t : hit) {
        Complex c = rc_residue(t->rc, h, s);
        int li = t->left < 0 ? -1 : remap[t->left], ri = t->right < 0 ? -1 : remap[t->right];
        Complex L = word_value(vals, li), R = word_value(vals, ri);
        double eL = word_err(vals, li), eR = word_err(vals, ri);
        out.value += L * R * c;
        out.err += std::abs(c) * (eL * std::abs(R) + eR * std::abs(L) + eL * eR);
    }
    return out;
}

LambdaResult lstar_eval(const LambdaExpression& e, const std::vector<Complex>& s, const EvalParams& p) {
    LambdaResult r = lambda_eval(e, s, p);
    Complex logf = 0;
    for (std::size_t i = 0; i < e.arity(); ++i) logf += 0.5 * s[i] * std::log(e.thetas[i]->conductor);
    Complex f = std::exp(logf);
    r.value *= f;
    r.err *= std::abs(f);
    return r;
}

}  // namespace mlambda
