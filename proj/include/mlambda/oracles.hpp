#pragma once

#include <string>
#include <vector>

#include "mlambda/lambda.hpp"

namespace mlambda {

// Lanczos approximation, relative accuracy around 1e-15; reflection for Re z < 1/2.
Complex gamma_complex(Complex z);

// sum_{i >= 0} (a + i)^(-alpha) for a >= 8 and Re alpha > 1, by Euler-Maclaurin.
Complex power_tail(Complex alpha, double a);

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Q(k_1..k_r) = sum_{n_i >= 1} prod_i (n_i^2 + ... + n_r^2)^(-k_i), r <= 3.
double q_sum(const std::vector<int>& k, double tol = 1e-11);

struct QTerm {
    long long coef = 0;
    std::vector<int> k;
    bool operator==(const QTerm& o) const { return coef == o.coef && k == o.k; }
};
// pi^(sum l) D(2 l_1, ..., 2 l_r) as an integer combination of Q(k) with sum k = sum l.
std::vector<QTerm> reduce_d_to_q(const std::vector<int>& l);

// zeta(n_1..n_r) = sum_{k_1 < ... < k_r} prod k_i^(-n_i); requires n_r >= 2.
double mzv_sum(const std::vector<int>& n, double tol = 1e-11);

struct DirichletResult {
    Complex D{0.0, 0.0};
    Complex DD{0.0, 0.0};  // (2 pi)^(-k-s) Gamma(k) Gamma(s) D
    double err = 0.0;
};
// sum_{m,n >= 1} a_m b_n / (m^k (m+n)^s).
DirichletResult dirichlet_double(const CoefficientStream& a, const CoefficientStream& b, int k, Complex s,
                                 double tol = 1e-12);

// |lhs - rhs| of the hypergeometric reduction lemma, left side by quadrature.
double binding_lemma_check(int p, int m, int n, Complex s);

struct EisensteinValues {
    Complex E{0.0, 0.0};     // completed pi^(-s) Gamma(s) E(z, s)
    Complex E0{0.0, 0.0};    // E - Einf
    Complex Einf{0.0, 0.0};  // xi(2s) y^s + xi(2s-1) y^(1-s)
    double err = 0.0;
};
// Lattice sum E(z,s) = 1/2 sum' y^s / |m + n z|^(2s), Re s > 1.
Complex eisenstein_lattice(Complex z, Complex s, double* err = nullptr);
EisensteinValues eisenstein_real(Complex z, Complex s, const EvalParams& p = {});
Complex eisenstein_infinity(double y, Complex s, const EvalParams& p = {});
// Fourier series 4 sqrt(y) sum N^(s-1/2) sigma_(1-2s)(N) K_(s-1/2)(2 pi N y) cos(2 pi N x); real s.
double eisenstein_fourier_e0(Complex z, double s, double tol = 1e-15);

// xi(2 s1, 2 s2) from the regularized Mellin transform of the real analytic Eisenstein series.
LambdaResult xi_via_eisenstein(Complex s1, Complex s2, const EvalParams& p = {});

// xi(a, b) for (a, b) in {(2,2), (2,4), (4,2), (6,2)} from regularized Eichler integrals.
LambdaResult eichler_xi(int a, int b, const EvalParams& p = {});

struct CheckResult {
    std::string name;
    Complex lhs{0.0, 0.0};
    Complex rhs{0.0, 0.0};
    double defect = 0.0;
};

// Lengths 1..max_length of the log(2) reconstructions for theta_plus / theta_minus.
std::vector<CheckResult> mzv_reconstruction_check(int max_length, const EvalParams& p = {});

// Lambda(f,g;p,s) against single Lambdas and Dirichlet series for modular f, g.
CheckResult lambda_bridge_check(const ThetaPtr& f, const ThetaPtr& g, int p, double s, const EvalParams& params = {});

// xi(s) = Lambda(riemann; s) through the cached expression.
Complex riemann_xi(Complex s, const EvalParams& p = {});

}  // namespace mlambda
