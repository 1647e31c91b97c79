#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlambda/quad.hpp"

namespace mlambda {

struct PoleError : std::runtime_error {
    PoleError(AffineForm h, double dist)
        : std::runtime_error("point lies on pole hyperplane " + h.hyperplane_str()), hyperplane(std::move(h)),
          distance(dist) {}
    AffineForm hyperplane;
    double distance;
};

// Product of two numeric word integrals (index -1 stands for the empty word) times a rational factor.
struct LambdaTerm {
    int left = -1;
    int right = -1;
    RationalCombination rc;
};

struct LambdaExpression {
    std::vector<ThetaPtr> thetas;
    std::vector<Word> words;
    std::vector<LambdaTerm> terms;
    std::vector<AffineForm> hyperplanes;  // normalized, deduplicated

    std::size_t arity() const { return thetas.size(); }
};

struct LambdaResult {
    Complex value{0.0, 0.0};
    double err = 0.0;
    std::vector<std::string> warnings;
};

LambdaExpression build_expression(const std::vector<ThetaPtr>& thetas);
// Memoized build keyed by theta identity.
std::shared_ptr<const LambdaExpression> cached_expression(const std::vector<ThetaPtr>& thetas);

// Distance |h(s)| / |h| from s to the hyperplane h = 0.
double hyperplane_distance(const AffineForm& h, const std::vector<Complex>& s);
// Nearest hyperplane of the expression, if any.
std::optional<std::pair<AffineForm, double>> nearest_pole(const LambdaExpression& e, const std::vector<Complex>& s);

inline constexpr double kPoleGuard = 1e-10;

LambdaResult lambda_eval(const LambdaExpression& e, const std::vector<Complex>& s, const EvalParams& p = {});

// Evaluates at many points on `threads` workers; per-point results are independent of scheduling.
struct PointResult {
    LambdaResult result;
    std::optional<AffineForm> pole;
    std::string error;
};
std::vector<PointResult> lambda_eval_many(const LambdaExpression& e, const std::vector<std::vector<Complex>>& points,
                                          const EvalParams& p = {}, unsigned threads = 1);

// Integral over [0, inf) of the regularized word, without the split at 1.
LambdaResult lambda_direct(const std::vector<ThetaPtr>& thetas, const std::vector<Complex>& s, const EvalParams& p = {});

// Pure tail-word integral over [0, inf).
LambdaResult d_value(const std::vector<ThetaPtr>& thetas, const std::vector<Complex>& s, const EvalParams& p = {});

const std::vector<AffineForm>& poles(const LambdaExpression& e);

// Residue along h = 0 (orientation as given) at a generic point s of h.
LambdaResult residue(const LambdaExpression& e, const AffineForm& h, const std::vector<Complex>& s,
                     const EvalParams& p = {});

// prod N_i^(s_i / 2) times Lambda.
LambdaResult lstar_eval(const LambdaExpression& e, const std::vector<Complex>& s, const EvalParams& p = {});

}  // namespace mlambda
