#pragma once

#include <map>
#include <string>
#include <vector>

#include "mlambda/exact_rational.hpp"
#include "mlambda/theta.hpp"

namespace mlambda {

// One-form part(theta)(t) t^(exponent - 1) dt.
struct Letter {
    ThetaPtr theta;
    Part part = Part::Full;
    AffineForm exponent;

    Letter with_part(Part p) const { return Letter{theta, p, exponent}; }
    bool operator==(const Letter& o) const;
    bool operator<(const Letter& o) const;
};

using Word = std::vector<Letter>;

// Formal integer combination of words; canonical order, duplicates merged.
class WordSum {
public:
    WordSum() = default;
    explicit WordSum(const Word& w, long long coef = 1);

    void add(const Word& w, long long coef);
    WordSum& operator+=(const WordSum& o);
    WordSum operator+(const WordSum& o) const;
    WordSum operator-(const WordSum& o) const;
    WordSum scaled(long long k) const;

    const std::map<Word, long long>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    bool operator==(const WordSum& o) const { return terms_ == o.terms_; }

    // Total multiplicity sum_w |coef_w|.
    long long weight() const;

private:
    std::map<Word, long long> terms_;
};

WordSum shuffle(const Word& u, const Word& v);
WordSum shuffle(const WordSum& u, const WordSum& v);

// Left concatenation: prefix . ws and ws . suffix.
WordSum concat(const Word& prefix, const WordSum& ws);
WordSum concat(const WordSum& ws, const Word& suffix);

// Regularization by the recursion R(a w b) = a R(w b) - b^inf R(a w), R(a) = a^0.
WordSum regularize(const Word& w);

// Splits every full letter into poly + tail.
WordSum expand_full(const WordSum& ws);

// Reversed word over duals with exponents e -> w - e.
Word reverse_dualize(const Word& w);

// Debug form like "F1.T2 - P2.T1".
std::string word_str(const Word& w);
std::string word_sum_str(const WordSum& ws);

}  // namespace mlambda
