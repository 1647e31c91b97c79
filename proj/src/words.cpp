#include "mlambda/words.hpp"

#include <cstdlib>
#include <tuple>

namespace mlambda {

bool Letter::operator==(const Letter& o) const {
    return theta == o.theta && part == o.part && exponent == o.exponent;
}

bool Letter::operator<(const Letter& o) const {
    const std::string& a = theta ? theta->name : std::string();
    const std::string& b = o.theta ? o.theta->name : std::string();
    if (a != b) return a < b;
    if (theta != o.theta) return std::less<const ThetaFunction*>()(theta.get(), o.theta.get());
    if (part != o.part) return part < o.part;
    return exponent < o.exponent;
}

WordSum::WordSum(const Word& w, long long coef) { add(w, coef); }

void WordSum::add(const Word& w, long long coef) {
    if (coef == 0) return;
    auto& c = terms_[w];
    c += coef;
    if (c == 0) terms_.erase(w);
}

WordSum& WordSum::operator+=(const WordSum& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
}

WordSum WordSum::operator+(const WordSum& o) const {
    WordSum r = *this;
    r += o;
    return r;
}

WordSum WordSum::operator-(const WordSum& o) const { return *this + o.scaled(-1); }

WordSum WordSum::scaled(long long k) const {
    WordSum r;
    for (const auto& [w, c] : terms_) r.add(w, c * k);
    return r;
}

long long WordSum::weight() const {
    long long s = 0;
    for (const auto& [w, c] : terms_) s += std::llabs(c);
    return s;
}

namespace {

void shuffle_into(const Word& u, std::size_t i, const Word& v, std::size_t j, Word& cur, WordSum& out) {
    if (i == u.size() && j == v.size()) {
        out.add(cur, 1);
        return;
    }
    if (i < u.size()) {
        cur.push_back(u[i]);
        shuffle_into(u, i + 1, v, j, cur, out);
        cur.pop_back();
    }
    if (j < v.size()) {
        cur.push_back(v[j]);
        shuffle_into(u, i, v, j + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

WordSum shuffle(const Word& u, const Word& v) {
    WordSum out;
    Word cur;
    shuffle_into(u, 0, v, 0, cur, out);
    return out;
}

WordSum shuffle(const WordSum& u, const WordSum& v) {
    WordSum out;
    for (const auto& [a, ca] : u.terms())
        for (const auto& [b, cb] : v.terms()) out += shuffle(a, b).scaled(ca * cb);
    return out;
}

WordSum concat(const Word& prefix, const WordSum& ws) {
    WordSum out;
    for (const auto& [w, c] : ws.terms()) {
        Word x = prefix;
        x.insert(x.end(), w.begin(), w.end());
        out.add(x, c);
    }
    return out;
}

WordSum concat(const WordSum& ws, const Word& suffix) {
    WordSum out;
    for (const auto& [w, c] : ws.terms()) {
        Word x = w;
        x.insert(x.end(), suffix.begin(), suffix.end());
        out.add(x, c);
    }
    return out;
}

WordSum regularize(const Word& w) {
    for (const auto& l : w)
        if (l.part != Part::Full) throw std::invalid_argument("regularize expects full letters only");
    if (w.empty()) return WordSum(Word{}, 1);
    if (w.size() == 1) return WordSum(Word{w[0].with_part(Part::Tail)}, 1);
    Word rest(w.begin() + 1, w.end());
    Word init(w.begin(), w.end() - 1);
    WordSum out = concat(Word{w.front()}, regularize(rest));
    out += concat(Word{w.back().with_part(Part::Poly)}, regularize(init)).scaled(-1);
    return out;
}

WordSum expand_full(const WordSum& ws) {
    WordSum out;
    for (const auto& [w, c] : ws.terms()) {
        std::vector<Word> acc{Word{}};
        for (const auto& l : w) {
            std::vector<Word> next;
            for (const auto& prefix : acc) {
                if (l.part == Part::Full) {
                    for (Part p : {Part::Poly, Part::Tail}) {
                        Word x = prefix;
                        x.push_back(l.with_part(p));
                        next.push_back(std::move(x));
                    }
                } else {
                    Word x = prefix;
                    x.push_back(l);
                    next.push_back(std::move(x));
                }
            }
            acc = std::move(next);
        }
        for (const auto& x : acc) out.add(x, c);
    }
    return out;
}

Word reverse_dualize(const Word& w) {
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        Letter l = *it;
        AffineForm wconst = AffineForm::constant_form(l.exponent.slots(), l.theta->weight);
        l.exponent = wconst - l.exponent;
        l.theta = l.theta->dual_ptr();
        out.push_back(std::move(l));
    }
    return out;
}

std::string word_str(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (const auto& l : w) {
        if (!out.empty()) out += ".";
        out += l.part == Part::Full ? "F" : (l.part == Part::Tail ? "T" : "P");
        std::string slot;
        for (std::size_t i = 0; i < l.exponent.slots(); ++i)
            if (l.exponent.coeff(i) != 0) slot = std::to_string(i + 1);
        out += slot.empty() ? "[" + l.exponent.str() + "]" : slot;
    }
    return out;
}

std::string word_sum_str(const WordSum& ws) {
    if (ws.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : ws.terms()) {
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (std::llabs(c) != 1) out += std::to_string(std::llabs(c)) + "*";
        out += word_str(w);
    }
    return out;
}

}  // namespace mlambda
