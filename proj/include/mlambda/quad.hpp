#pragma once

#include <stdexcept>
#include <vector>

#include "mlambda/words.hpp"

namespace mlambda {

struct EvalParams {
    double abs_tol = 1e-10;
    std::size_t max_terms = 4000;
    int quad_order = 32;
    int max_refine = 8;
    // horizon policy: the neglected tail beyond T_max is at most abs_tol / horizon_margin
    double horizon_margin = 10.0;
    // panels are split so the final kernel decays by at most exp(-panel_decay) across each
    double panel_decay = 30.0;
};

struct QuadResult {
    Complex value{0.0, 0.0};
    double err = 0.0;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integral from 0 requested where the integrand is not integrable at 0.
struct ConvergenceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Gauss-Legendre rule on [-1, 1] with the cumulative integration matrix
// S[i][k] = int_{-1}^{x_i} l_k(x) dx of the Lagrange basis.
struct GaussRule {
    std::vector<double> x, w;
    std::vector<std::vector<double>> S;
};
const GaussRule& gauss_rule(int order);

double truncation_horizon(const Word& w, const std::vector<Complex>& s, const EvalParams& p);

// Iterated integral over 1 <= t_1 <= ... <= t_k < infinity; the last letter must be a tail.
QuadResult tail_word_integral(const Word& w, const std::vector<Complex>& s, const EvalParams& p);

// Same for several words sharing one mesh and one theta-value cache.
std::vector<QuadResult> tail_word_integrals(const std::vector<Word>& words, const std::vector<Complex>& s,
                                            const EvalParams& p);

// Iterated integral over a <= t_1 <= ... <= t_k <= b (b = infinity allowed when the last letter is a tail).
QuadResult word_integral(const Word& w, const std::vector<Complex>& s, double a, double b, const EvalParams& p);

// Iterated integral over 0 <= t_1 <= ... < infinity, cut off at a lower point chosen from
// the behaviour of each letter at 0; requires every partial exponent sum to be positive.
QuadResult zero_word_integral(const Word& w, const std::vector<Complex>& s, const EvalParams& p);

}  // namespace mlambda
