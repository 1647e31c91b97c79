#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mlambda/oracles.hpp"

namespace mlambda {

struct VerifyCase {
    std::string suite;
    std::string name;
    double defect = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int trials = 20;
    EvalParams params;
};

// functional, shuffle, residues, eisenstein-id, mzv, qsums, eichler, binding
const std::vector<std::string>& verify_suite_names();

// Runs one suite or "all"; throws std::invalid_argument for unknown names.
std::vector<VerifyCase> run_verify_suite(const std::string& suite, const VerifyOptions& opt = {});

// |a - b| / max(1, |a|)
double defect(Complex a, Complex b);

// Deterministic uniform stream: mt19937_64 mapped to [0, 1) by its top 53 bits.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed);
    double next();
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }
    int integer(int lo, int hi);  // inclusive

private:
    std::mt19937_64 engine_;
};

}  // namespace mlambda
