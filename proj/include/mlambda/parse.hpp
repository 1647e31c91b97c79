#pragma once

#include <string>
#include <vector>

#include "mlambda/lambda.hpp"

namespace mlambda {

// Malformed command-line style input.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// "a", "a+bi", "a-bi", "bi", "i", "(a;b)"
Complex parse_complex(const std::string& text);

// Comma-separated slots, each accepted by parse_complex.
std::vector<Complex> parse_point(const std::string& text);

// "c1,..,cr:b" stands for c1 s1 + ... + cr sr = b; returns the form c.s - b.
AffineForm parse_hyperplane(const std::string& text);

// riemann, eisenstein:4, delta, theta+, theta-, jacobi:2|3|4, file:<path>; at most four entries.
std::vector<ThetaPtr> parse_theta_tuple(const std::string& text);
ThetaPtr parse_theta_name(const std::string& text);

inline constexpr std::size_t kMaxTupleLength = 4;
inline constexpr std::size_t kMaxGridCells = 100000;

// Per slot "lo:hi:step" optionally followed by "@imlo:imhi:imstep", or a fixed complex value.
// Points are row-major with the first slot outermost.
std::vector<std::vector<Complex>> parse_grid(const std::string& text);

}  // namespace mlambda
