#include "mlambda/exact_rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace mlambda {

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational parse_rational(const std::string& text) {
    auto trim = [](std::string v) {
        auto b = v.find_first_not_of(" \t");
        auto e = v.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty rational");
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) {
            if (t.find_first_of(".eE") != std::string::npos) {
                // decimal literal: exact value of the binary double
                std::size_t used = 0;
                double d = std::stod(t, &used);
                if (used != t.size()) throw std::invalid_argument(t);
                return Rational(d);
            }
            return Rational(boost::multiprecision::cpp_int(t));
        }
        boost::multiprecision::cpp_int p(trim(t.substr(0, slash)));
        boost::multiprecision::cpp_int q(trim(t.substr(slash + 1)));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational '" + text + "'");
    }
}

std::string rational_str(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

AffineForm::AffineForm(std::size_t slots, Rational constant)
    : constant_(std::move(constant)), coeffs_(slots, 0) {}

AffineForm AffineForm::slot(std::size_t slots, std::size_t index) {
    AffineForm f(slots);
    f.coeffs_.at(index) = 1;
    return f;
}

AffineForm AffineForm::constant_form(std::size_t slots, Rational c) { return AffineForm(slots, std::move(c)); }

bool AffineForm::is_constant() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::int64_t a) { return a == 0; });
}

bool AffineForm::is_zero() const { return is_constant() && constant_ == 0; }

AffineForm AffineForm::operator+(const AffineForm& o) const {
    if (o.slots() != slots()) throw std::invalid_argument("slot count mismatch");
    AffineForm r = *this;
    r.constant_ += o.constant_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] += o.coeffs_[i];
    return r;
}

AffineForm AffineForm::operator-(const AffineForm& o) const { return *this + (-o); }

AffineForm AffineForm::operator-() const {
    AffineForm r = *this;
    r.constant_ = -r.constant_;
    for (auto& a : r.coeffs_) a = -a;
    return r;
}

AffineForm AffineForm::operator+(const Rational& c) const {
    AffineForm r = *this;
    r.constant_ += c;
    return r;
}

AffineForm AffineForm::scaled(std::int64_t k) const {
    AffineForm r = *this;
    r.constant_ *= k;
    for (auto& a : r.coeffs_) a *= k;
    return r;
}

Complex AffineForm::eval(const std::vector<Complex>& s) const {
    if (s.size() != coeffs_.size()) throw std::invalid_argument("point dimension mismatch");
    Complex v = to_double(constant_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) v += static_cast<double>(coeffs_[i]) * s[i];
    return v;
}

Rational AffineForm::eval_exact(const std::vector<Rational>& s) const {
    if (s.size() != coeffs_.size()) throw std::invalid_argument("point dimension mismatch");
    Rational v = constant_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) v += coeffs_[i] * s[i];
    return v;
}

std::optional<Rational> AffineForm::ratio_of(const AffineForm& o) const {
    if (o.slots() != slots() || is_zero()) return std::nullopt;
    std::optional<Rational> lambda;
    auto check = [&](const Rational& mine, const Rational& theirs) {
        if (mine == 0) return theirs == 0;
        Rational l = theirs / mine;
        if (!lambda) lambda = l;
        return *lambda == l;
    };
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (!check(Rational(coeffs_[i]), Rational(o.coeffs_[i]))) return std::nullopt;
    if (!check(constant_, o.constant_)) return std::nullopt;
    if (!lambda || *lambda == 0) return std::nullopt;
    return lambda;
}

AffineForm AffineForm::normalized() const {
    for (auto a : coeffs_) {
        if (a > 0) return *this;
        if (a < 0) return -*this;
    }
    return constant_ < 0 ? -*this : *this;
}

double AffineForm::slot_norm() const {
    double n = 0;
    for (auto a : coeffs_) n += static_cast<double>(a) * static_cast<double>(a);
    return std::sqrt(n);
}

bool AffineForm::operator==(const AffineForm& o) const {
    return coeffs_ == o.coeffs_ && constant_ == o.constant_;
}

bool AffineForm::operator<(const AffineForm& o) const {
    if (coeffs_ != o.coeffs_) return coeffs_ < o.coeffs_;
    return constant_ < o.constant_;
}

namespace {

std::string slot_part(const std::vector<std::int64_t>& coeffs) {
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        auto a = coeffs[i];
        if (a == 0) continue;
        if (a < 0)
            out += "-";
        else if (!out.empty())
            out += "+";
        if (std::llabs(a) != 1) out += std::to_string(std::llabs(a));
        out += "s" + std::to_string(i + 1);
    }
    return out;
}

}  // namespace

std::string AffineForm::str() const {
    std::string out = slot_part(coeffs_);
    if (constant_ != 0 || out.empty()) {
        if (constant_ >= 0 && !out.empty()) out += "+";
        out += rational_str(constant_);
    }
    return out;
}

std::string AffineForm::hyperplane_str() const {
    AffineForm f = normalized();
    std::string lhs = slot_part(f.coeffs_);
    if (lhs.empty()) lhs = "0";
    return lhs + " = " + rational_str(-f.constant_);
}

RationalCombination RationalCombination::unit() { return constant(1); }

RationalCombination RationalCombination::constant(const Rational& c) {
    RationalCombination rc;
    if (c != 0) rc.terms_.push_back({c, {}});
    return rc;
}

void RationalCombination::add_term(Rational coef, std::vector<AffineForm> den) {
    if (coef == 0) return;
    std::vector<AffineForm> kept;
    for (auto& d : den) {
        if (d.is_constant()) {
            if (d.constant() == 0) throw StructuralError("identically vanishing denominator form");
            coef /= d.constant();
            continue;
        }
        // orientation-normalize so equal poles share one representative
        AffineForm n = d.normalized();
        if (n != d) coef = -coef;
        kept.push_back(std::move(n));
    }
    std::sort(kept.begin(), kept.end());
    terms_.push_back({std::move(coef), std::move(kept)});
    canonicalize();
}

void RationalCombination::canonicalize() {
    std::map<std::vector<AffineForm>, Rational> merged;
    for (auto& t : terms_) merged[t.den] += t.coef;
    terms_.clear();
    for (auto& [den, coef] : merged)
        if (coef != 0) terms_.push_back({coef, den});
}

RationalCombination RationalCombination::operator+(const RationalCombination& o) const {
    RationalCombination r = *this;
    r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
    r.canonicalize();
    return r;
}

RationalCombination RationalCombination::operator*(const RationalCombination& o) const {
    RationalCombination r;
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) {
            std::vector<AffineForm> den = a.den;
            den.insert(den.end(), b.den.begin(), b.den.end());
            std::sort(den.begin(), den.end());
            r.terms_.push_back({a.coef * b.coef, std::move(den)});
        }
    r.canonicalize();
    return r;
}

RationalCombination RationalCombination::scaled(const Rational& c) const {
    RationalCombination r;
    if (c == 0) return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
}

std::vector<AffineForm> RationalCombination::poles() const {
    std::vector<AffineForm> out;
    for (const auto& t : terms_)
        for (const auto& d : t.den) {
            AffineForm n = d.normalized();
            if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::string RationalCombination::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += (t.coef < 0 ? " - " : " + ");
        else if (t.coef < 0) out += "-";
        out += rational_str(abs(t.coef));
        for (const auto& d : t.den) out += "/(" + d.str() + ")";
    }
    return out;
}

RationalCombination simplex_monomial(const std::vector<AffineForm>& b) {
    RationalCombination rc;
    if (b.empty()) return RationalCombination::unit();
    std::vector<AffineForm> den;
    AffineForm partial = b.front();
    den.push_back(partial);
    for (std::size_t i = 1; i < b.size(); ++i) {
        partial = partial + b[i];
        den.push_back(partial);
    }
    rc.add_term(1, std::move(den));
    return rc;
}

RationalCombination tangent_word_integral(const std::vector<PolyLetter>& word) {
    RationalCombination total;
    if (word.empty()) return RationalCombination::unit();
    std::vector<std::size_t> idx(word.size(), 0);
    for (const auto& l : word)
        if (l.monomials.empty()) return total;
    while (true) {
        Rational coef = 1;
        std::vector<AffineForm> b;
        for (std::size_t j = 0; j < word.size(); ++j) {
            const auto& [c, e] = word[j].monomials[idx[j]];
            coef *= c;
            b.push_back(word[j].exponent + e);
        }
        total = total + simplex_monomial(b).scaled(coef);
        std::size_t j = 0;
        while (j < word.size() && ++idx[j] == word[j].monomials.size()) idx[j++] = 0;
        if (j == word.size()) break;
    }
    return total;
}

RcValue rc_eval(const RationalCombination& rc, const std::vector<Complex>& s) {
    RcValue out;
    for (const auto& t : rc.terms()) {
        Complex v = to_double(t.coef);
        for (const auto& d : t.den) {
            Complex dv = d.eval(s);
            if (std::abs(dv) < kVanishingTol) {
                out.pole = d;
                return out;
            }
            v /= dv;
        }
        out.value += v;
    }
    return out;
}

std::optional<Rational> rc_eval_exact(const RationalCombination& rc, const std::vector<Rational>& s) {
    Rational sum = 0;
    for (const auto& t : rc.terms()) {
        Rational v = t.coef;
        for (const auto& d : t.den) {
            Rational dv = d.eval_exact(s);
            if (dv == 0) return std::nullopt;
            v /= dv;
        }
        sum += v;
    }
    return sum;
}

Complex rc_residue(const RationalCombination& rc, const AffineForm& h, const std::vector<Complex>& s) {
    if (h.is_constant()) throw std::invalid_argument("hyperplane form has no slot variables");
    if (std::abs(h.eval(s)) > 1e-9) throw std::invalid_argument("point is not on the hyperplane " + h.hyperplane_str());
    Complex total = 0;
    std::vector<std::string> repeated;
    for (const auto& t : rc.terms()) {
        int hits = 0;
        Rational lambda = 1;
        Complex rest = to_double(t.coef);
        for (const auto& d : t.den) {
            if (auto l = h.ratio_of(d)) {
                ++hits;
                lambda = *l;
                continue;
            }
            Complex dv = d.eval(s);
            if (std::abs(dv) < kVanishingTol)
                throw IntersectionError("point lies on the intersection with " + d.hyperplane_str());
            rest /= dv;
        }
        if (hits >= 2) {
            std::string term = rational_str(t.coef) + "/";
            for (const auto& d : t.den) term += "(" + d.str() + ")";
            repeated.push_back(term);
        }
        if (hits == 1) total += rest / to_double(lambda);
    }
    if (!repeated.empty())
        throw MultiplicityError("pole along " + h.hyperplane_str() + " is not simple in " +
                                    std::to_string(repeated.size()) + " term(s)",
                                std::move(repeated));
    return total;
}

}  // namespace mlambda
