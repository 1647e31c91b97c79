#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlambda/exact_rational.hpp"

namespace mlambda {

enum class Part { Full, Tail, Poly };

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    ValidationError(const std::string& msg, double t_) : std::runtime_error(msg), t(t_) {}
    double t;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |a_n| <= M n^kappa and mu_n >= c n.
struct GrowthBound {
    double M = 1.0;
    double kappa = 0.0;
    double c = 1.0;
};

// Deterministic stream n -> (mu_n, a_n), n >= 1, memoized behind a mutex.
class CoefficientStream {
public:
    struct Table {
        std::vector<double> mu;  // mu[n-1]
        std::vector<double> a;
    };
    using Filler = std::function<void(std::size_t n, Table&)>;  // extend table to size n

    CoefficientStream(Filler filler, GrowthBound growth, std::optional<double> lattice_step = std::nullopt,
                      std::optional<std::size_t> finite_size = std::nullopt);

    std::shared_ptr<const Table> table(std::size_t n) const;
    double mu(std::size_t n) const { return table(n)->mu[n - 1]; }
    double a(std::size_t n) const { return table(n)->a[n - 1]; }

    const GrowthBound& growth() const { return growth_; }
    // All mu_n are integer multiples of this step (enables Cauchy products).
    const std::optional<double>& lattice_step() const { return lattice_step_; }
    long lattice_index(std::size_t n) const;
    // Streams read from files stop after a finite number of coefficients.
    const std::optional<std::size_t>& finite_size() const { return finite_size_; }

private:
    Filler filler_;
    GrowthBound growth_;
    std::optional<double> lattice_step_;
    std::optional<std::size_t> finite_size_;
    mutable std::mutex mutex_;
    mutable std::shared_ptr<const Table> table_;
};

using StreamPtr = std::shared_ptr<const CoefficientStream>;

// c * t^e * mu^m, multiplying a_n exp(-lambda mu_n t^p).
struct TailComponent {
    double c = 1.0;
    Rational e = 0;
    int m = 0;
};

struct TailTerm {
    StreamPtr stream;
    std::vector<TailComponent> comps;
};

struct Monomial {
    Rational c;
    Rational e;
};

class ThetaFunction;
using ThetaPtr = std::shared_ptr<const ThetaFunction>;

class ThetaFunction {
public:
    std::string name;
    Rational weight = 1;
    int sign = 1;
    int kernel_p = 1;
    double kernel_scale = 1.0;
    std::vector<Monomial> poly;
    std::vector<TailTerm> tail;
    double conductor = 1.0;
    bool inversion_broken = false;
    bool modular = false;  // holomorphic modular form: critical values 1..w-1

    const ThetaFunction& dual() const { return dual_raw_ ? *dual_raw_ : *this; }
    ThetaPtr dual_ptr() const;
    bool self_dual() const { return dual_raw_ == nullptr || dual_raw_ == this; }

    bool has_poly() const { return !poly.empty(); }
    Rational poly_max_exponent() const;
    Rational poly_min_exponent() const;

    double poly_value(double t) const;
    // Direct truncated summation of the tail (no inversion).
    double tail_direct(double t, double tol, std::size_t max_terms = 4000) const;
    // Honest bound on the remainder after n terms of every tail term.
    double truncation_bound(std::size_t n, double t) const;
    // For t >= 1: |tail(t)| <= C t^growth exp(-rate t^p).
    struct Envelope {
        double C = 0.0;
        double rate = 0.0;
        double growth = 0.0;
    };
    Envelope tail_envelope() const;
    double coefficient_at(double frequency) const;

    friend ThetaPtr make_self_dual(ThetaFunction f);
    friend std::pair<ThetaPtr, ThetaPtr> make_dual_pair(ThetaFunction a, ThetaFunction b);

private:
    const ThetaFunction* dual_raw_ = nullptr;
    std::weak_ptr<const ThetaFunction> dual_weak_;
};

ThetaPtr make_self_dual(ThetaFunction f);
std::pair<ThetaPtr, ThetaPtr> make_dual_pair(ThetaFunction a, ThetaFunction b);

inline constexpr double kRegistrationTol = 1e-8;

// Throws ValidationError if the inversion defect exceeds tol at t in {0.7, 1.0, 1.6}.
void validate_theta(const ThetaFunction& f, double tol = kRegistrationTol);

// name: riemann, eisenstein (params {2k}), delta, theta_plus, theta_minus, jacobi2, jacobi3, jacobi4
ThetaPtr make_builtin_theta(const std::string& name, const std::vector<int>& params = {});
std::vector<std::string> builtin_names();

// Evaluates a part of theta at t; below t = 1/2 the inversion law is used when available.
double theta_eval(const ThetaFunction& f, double t, Part part, double tol = 1e-12, std::size_t max_terms = 4000);
double theta_eval_direct(const ThetaFunction& f, double t, Part part, double tol = 1e-12,
                         std::size_t max_terms = 4000);

double inversion_defect(const ThetaFunction& f, double t, double tol = 1e-12);

struct TopOp {
    enum Kind { MulMonomial, Rescale, Differentiate, Dw, PointwiseProduct } kind;
    Rational exponent = 0;  // MulMonomial
    int n = 1;              // Rescale
    ThetaPtr other;         // PointwiseProduct

    static TopOp mul_monomial(Rational e) { return {MulMonomial, std::move(e), 1, nullptr}; }
    static TopOp rescale(int n) { return {Rescale, 0, n, nullptr}; }
    static TopOp differentiate() { return {Differentiate, 0, 1, nullptr}; }
    static TopOp d_w() { return {Dw, 0, 1, nullptr}; }
    static TopOp product(ThetaPtr g) { return {PointwiseProduct, 0, 1, std::move(g)}; }
};

ThetaPtr apply_top(const TopOp& op, const ThetaPtr& f);

// Numeric evaluator for the tail convolution (f0 * g0)(t) = int_0^inf f0(t/x) g0(x) dx/x.
class Convolution {
public:
    Convolution(ThetaPtr f, ThetaPtr g, double tol);
    double operator()(double t) const;

private:
    ThetaPtr f_, g_;
    double tol_;
};

Convolution convolve(ThetaPtr f, ThetaPtr g, double tol = 1e-10);

// Parses the line-oriented theta format; duals must be defined in the same file.
ThetaPtr load_theta_from_file(const std::string& path, double validation_tol = kRegistrationTol);
ThetaPtr parse_theta_text(const std::string& text, double validation_tol = kRegistrationTol);

// Integer critical points 1..w-1 for modular builtins, empty otherwise.
std::vector<int> critical_values(const ThetaFunction& f);

}  // namespace mlambda
