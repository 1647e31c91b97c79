#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "mlambda/words.hpp"

using namespace mlambda;

namespace {

const ThetaPtr& riemann() {
    static ThetaPtr t = make_builtin_theta("riemann");
    return t;
}

Letter full(std::size_t slots, std::size_t i) { return Letter{riemann(), Part::Full, AffineForm::slot(slots, i)}; }

Word word(std::size_t slots, std::initializer_list<std::size_t> idx) {
    Word w;
    for (auto i : idx) w.push_back(full(slots, i));
    return w;
}

Word with(Word w, std::size_t pos, Part p) {
    w[pos] = w[pos].with_part(p);
    return w;
}

// Index-based shuffle, independent of the library recursion.
WordSum naive_shuffle(const Word& u, const Word& v) {
    WordSum out;
    Word cur;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
        if (i == u.size() && j == v.size()) {
            out.add(cur, 1);
            return;
        }
        if (i < u.size()) {
            cur.push_back(u[i]);
            rec(i + 1, j);
            cur.pop_back();
        }
        if (j < v.size()) {
            cur.push_back(v[j]);
            rec(i, j + 1);
            cur.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

// Sum over i of (-1)^(r-i) (prefix sh reversed poly suffix) . tail letter i.
WordSum closed_form_regularize(const Word& w) {
    WordSum out;
    const std::size_t r = w.size();
    for (std::size_t i = 0; i < r; ++i) {
        Word prefix(w.begin(), w.begin() + i);
        Word suffix;
        for (std::size_t j = r; j-- > i + 1;) suffix.push_back(w[j].with_part(Part::Poly));
        WordSum sh = naive_shuffle(prefix, suffix);
        long long sign = ((r - 1 - i) % 2 == 0) ? 1 : -1;
        out += concat(sh, Word{w[i].with_part(Part::Tail)}).scaled(sign);
    }
    return out;
}

Word random_word(std::mt19937_64& rng, std::size_t slots, std::size_t len) {
    std::uniform_int_distribution<std::size_t> pick(0, slots - 1);
    std::uniform_int_distribution<int> part(0, 2);
    Word w;
    for (std::size_t k = 0; k < len; ++k)
        w.push_back(full(slots, pick(rng)).with_part(static_cast<Part>(part(rng))));
    return w;
}

long long binomial(long long n, long long k) {
    long long c = 1;
    for (long long i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace

TEST_CASE("shuffle small cases") {
    Word a = word(3, {0}), b = word(3, {1}), c = word(3, {2});
    WordSum ab = shuffle(a, b);
    CHECK(ab == WordSum(word(3, {0, 1})) + WordSum(word(3, {1, 0})));

    WordSum abc = shuffle(a, word(3, {1, 2}));
    CHECK(abc.size() == 3);
    CHECK(abc.weight() == 3);
    CHECK(abc == WordSum(word(3, {0, 1, 2})) + WordSum(word(3, {1, 0, 2})) + WordSum(word(3, {1, 2, 0})));

    CHECK(shuffle(Word{}, c) == WordSum(c));
    CHECK(shuffle(c, Word{}) == WordSum(c));
}

TEST_CASE("shuffle multiplicity is binomial and merges duplicates") {
    Word aa = word(2, {0, 0});
    WordSum sq = shuffle(aa, aa);
    CHECK(sq.size() == 1);
    CHECK(sq.terms().begin()->second == 6);
    std::mt19937_64 rng(5);
    for (std::size_t p = 0; p <= 4; ++p)
        for (std::size_t q = 0; p + q <= 6; ++q) {
            Word u = random_word(rng, 3, p), v = random_word(rng, 3, q);
            CHECK(shuffle(u, v).weight() == binomial(static_cast<long long>(p + q), static_cast<long long>(p)));
            CHECK(shuffle(u, v) == naive_shuffle(u, v));
        }
}

TEST_CASE("shuffle is commutative and associative") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> len(0, 4);
    for (int trial = 0; trial < 30; ++trial) {
        Word u = random_word(rng, 3, len(rng)), v = random_word(rng, 3, len(rng));
        Word w = random_word(rng, 3, len(rng) % 3);
        CHECK(shuffle(u, v) == shuffle(v, u));
        CHECK(shuffle(shuffle(u, v), WordSum(w)) == shuffle(WordSum(u), shuffle(v, w)));
    }
}

TEST_CASE("regularization of short words") {
    Word one = word(1, {0});
    CHECK(regularize(one) == WordSum(with(one, 0, Part::Tail)));

    Word w2 = word(2, {0, 1});
    WordSum expect2;
    expect2.add(with(w2, 1, Part::Tail), 1);
    expect2.add(Word{w2[1].with_part(Part::Poly), w2[0].with_part(Part::Tail)}, -1);
    CHECK(regularize(w2) == expect2);

    Word w3 = word(3, {0, 1, 2});
    Letter t1 = w3[0].with_part(Part::Tail), t2 = w3[1].with_part(Part::Tail), t3 = w3[2].with_part(Part::Tail);
    Letter p2 = w3[1].with_part(Part::Poly), p3 = w3[2].with_part(Part::Poly);
    WordSum expect3;
    expect3.add({w3[0], w3[1], t3}, 1);
    expect3.add({w3[0], p3, t2}, -1);
    expect3.add({p3, w3[0], t2}, -1);
    expect3.add({p3, p2, t1}, 1);
    CHECK(regularize(w3) == expect3);
    CHECK(regularize(w3).size() == 4);

    CHECK(regularize(Word{}) == WordSum(Word{}));
    CHECK_THROWS_AS(regularize(Word{t1}), std::invalid_argument);
}

TEST_CASE("regularization recursion matches the closed shuffle formula") {
    for (std::size_t r = 1; r <= 4; ++r) {
        Word w;
        for (std::size_t i = 0; i < r; ++i) w.push_back(full(r, i));
        WordSum rec = regularize(w);
        CHECK(rec == closed_form_regularize(w));
        for (const auto& [x, c] : rec.terms()) {
            CHECK(x.back().part == Part::Tail);
            for (std::size_t k = 0; k + 1 < x.size(); ++k) CHECK(x[k].part != Part::Tail);
        }
    }
    // repeated letters as well
    Word rep = word(2, {0, 1, 0, 1});
    CHECK(regularize(rep) == closed_form_regularize(rep));
}

TEST_CASE("expand_full splits full letters") {
    Word w = with(word(2, {0, 1}), 1, Part::Poly);
    WordSum e = expand_full(WordSum(w));
    WordSum expect;
    expect.add(with(w, 0, Part::Tail), 1);
    expect.add(with(w, 0, Part::Poly), 1);
    CHECK(e == expect);
    CHECK(expand_full(e) == e);

    for (std::size_t r = 1; r <= 4; ++r) {
        Word x;
        for (std::size_t i = 0; i < r; ++i) x.push_back(full(r, i));
        WordSum reg = regularize(x);
        WordSum ex = expand_full(reg);
        long long expected_weight = 0;
        for (const auto& [y, c] : reg.terms()) {
            long long fulls = 0;
            for (const auto& l : y) fulls += l.part == Part::Full;
            expected_weight += (std::llabs(c)) << fulls;
        }
        CHECK(ex.weight() <= expected_weight);
        for (const auto& [y, c] : ex.terms()) {
            CHECK(y.back().part == Part::Tail);
            for (const auto& l : y) CHECK(l.part != Part::Full);
        }
    }
}

TEST_CASE("regularize and expand_full are linear") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        Word u = word(3, {0, 1, 2}), v = word(3, {2, 0});
        std::uniform_int_distribution<int> k(-3, 3);
        long long a = k(rng), b = k(rng);
        WordSum combo = WordSum(u, a) + WordSum(v, b), lhs;
        for (const auto& [w, c] : combo.terms()) lhs += regularize(w).scaled(c);
        CHECK(lhs == regularize(u).scaled(a) + regularize(v).scaled(b));
        CHECK(expand_full(lhs) == expand_full(regularize(u)).scaled(a) + expand_full(regularize(v)).scaled(b));
    }
}

TEST_CASE("reverse_dualize") {
    Letter l = full(1, 0);
    Word r = reverse_dualize(Word{l});
    REQUIRE(r.size() == 1);
    CHECK(r[0].theta->name == "riemann");
    CHECK(r[0].exponent == AffineForm::constant_form(1, 1) - AffineForm::slot(1, 0));

    ThetaPtr j2 = make_builtin_theta("jacobi2");
    Word w2{Letter{j2, Part::Full, AffineForm::slot(1, 0)}};
    Word d = reverse_dualize(w2);
    CHECK(d[0].theta->name == "jacobi4");
    CHECK(d[0].exponent == AffineForm::constant_form(1, Rational(1, 2)) - AffineForm::slot(1, 0));
    CHECK(reverse_dualize(d) == w2);

    Word w3 = word(3, {0, 1, 2});
    Word d3 = reverse_dualize(w3);
    CHECK(d3[0].exponent == AffineForm::constant_form(3, 1) - AffineForm::slot(3, 2));
    CHECK(reverse_dualize(d3) == w3);
}

TEST_CASE("debug printing") {
    Word w = word(2, {0, 1});
    CHECK(word_str(Word{w[0], w[1].with_part(Part::Tail)}) == "F1.T2");
    WordSum s = regularize(w);
    CHECK(word_sum_str(s).find("P2.T1") != std::string::npos);
    CHECK(word_str(Word{}) == "1");
}
