#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mlambda {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

double to_double(const Rational& q);
Rational parse_rational(const std::string& text);  // "p", "p/q", "-p/q"
std::string rational_str(const Rational& q);

// A form c + sum_i a_i s_i in the slot variables, with integer a_i.
class AffineForm {
public:
    AffineForm() = default;
    explicit AffineForm(std::size_t slots, Rational constant = 0);

    static AffineForm slot(std::size_t slots, std::size_t index);  // s_index (0-based)
    static AffineForm constant_form(std::size_t slots, Rational c);

    std::size_t slots() const { return coeffs_.size(); }
    const Rational& constant() const { return constant_; }
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
    std::int64_t coeff(std::size_t i) const { return coeffs_[i]; }

    bool is_constant() const;
    bool is_zero() const;

    AffineForm operator+(const AffineForm& o) const;
    AffineForm operator-(const AffineForm& o) const;
    AffineForm operator-() const;
    AffineForm operator+(const Rational& c) const;
    AffineForm scaled(std::int64_t k) const;

    Complex eval(const std::vector<Complex>& s) const;
    Rational eval_exact(const std::vector<Rational>& s) const;

    // If o == lambda * (*this) for some rational lambda, returns lambda.
    std::optional<Rational> ratio_of(const AffineForm& o) const;

    // Orientation-free representative: first nonzero slot coefficient positive.
    AffineForm normalized() const;

    // Euclidean norm of the slot coefficient vector.
    double slot_norm() const;

    bool operator==(const AffineForm& o) const;
    bool operator!=(const AffineForm& o) const { return !(*this == o); }
    bool operator<(const AffineForm& o) const;

    std::string str() const;             // e.g. "s1+s2-2"
    std::string hyperplane_str() const;  // e.g. "s1+s2 = 2"

private:
    Rational constant_{0};
    std::vector<std::int64_t> coeffs_;
};

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MultiplicityError : std::runtime_error {
    MultiplicityError(const std::string& msg, std::vector<std::string> offending = {})
        : std::runtime_error(msg), terms(std::move(offending)) {}
    std::vector<std::string> terms;  // the terms with a repeated factor, as "coef/(form)(form)..."
};

// Residue requested where two pole hyperplanes meet.
struct IntersectionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RcTerm {
    Rational coef;
    std::vector<AffineForm> den;  // sorted
};

// Finite sum of coef / prod(forms). Each form stands for a simple pole.
class RationalCombination {
public:
    RationalCombination() = default;
    static RationalCombination unit();
    static RationalCombination constant(const Rational& c);

    const std::vector<RcTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(Rational coef, std::vector<AffineForm> den);
    RationalCombination operator+(const RationalCombination& o) const;
    RationalCombination operator*(const RationalCombination& o) const;
    RationalCombination scaled(const Rational& c) const;

    // Distinct denominator forms (up to orientation).
    std::vector<AffineForm> poles() const;

    std::string str() const;

private:
    void canonicalize();
    std::vector<RcTerm> terms_;
};

struct RcValue {
    Complex value{0.0, 0.0};
    std::optional<AffineForm> pole;  // set when a denominator vanishes at the point
};

inline constexpr double kVanishingTol = 1e-13;

RationalCombination simplex_monomial(const std::vector<AffineForm>& b);

// A polynomial one-form sum_e c_e t^e * t^(exponent-1) dt.
struct PolyLetter {
    std::vector<std::pair<Rational, Rational>> monomials;  // (c_e, e)
    AffineForm exponent;
};

// Integral over 0 <= t_1 <= ... <= t_k <= 1 of the word, as a rational function.
RationalCombination tangent_word_integral(const std::vector<PolyLetter>& word);

RcValue rc_eval(const RationalCombination& rc, const std::vector<Complex>& s);
std::optional<Rational> rc_eval_exact(const RationalCombination& rc, const std::vector<Rational>& s);

// lim h(s) * rc(s) on the hyperplane h = 0, for h exactly as written.
Complex rc_residue(const RationalCombination& rc, const AffineForm& h, const std::vector<Complex>& s);

}  // namespace mlambda
