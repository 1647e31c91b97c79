#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "mlambda/verify.hpp"

using namespace mlambda;

TEST_CASE("defect") {
    CHECK(defect(Complex(1e-3), Complex(2e-3)) == doctest::Approx(1e-3));
    CHECK(defect(Complex(100), Complex(101)) == doctest::Approx(1e-2));
    CHECK(defect(Complex(0, 2), Complex(0, 2)) == 0.0);
}

TEST_CASE("uniform stream") {
    UniformStream a(42), b(42), c(43);
    std::mt19937_64 raw(42);
    for (int i = 0; i < 100; ++i) {
        double x = a.next();
        CHECK(x == b.next());
        CHECK(x == double(raw() >> 11) * 0x1.0p-53);
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(a.next() != c.next());
    std::set<int> seen;
    for (int i = 0; i < 200; ++i) {
        int k = a.integer(-2, 2);
        CHECK(k >= -2);
        CHECK(k <= 2);
        seen.insert(k);
        double r = a.range(3.0, 4.0);
        CHECK(r >= 3.0);
        CHECK(r < 4.0);
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("suite registry") {
    const auto& names = verify_suite_names();
    for (const char* n : {"functional", "shuffle", "residues", "eisenstein-id", "mzv", "qsums", "eichler", "binding"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK_THROWS_AS(run_verify_suite("nonsense"), std::invalid_argument);
}

TEST_CASE("suites are deterministic and green") {
    VerifyOptions opt;
    opt.seed = 3;
    opt.trials = 4;
    for (const char* suite : {"shuffle", "residues", "qsums"}) {
        auto a = run_verify_suite(suite, opt), b = run_verify_suite(suite, opt);
        REQUIRE(a.size() == b.size());
        CHECK(!a.empty());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].name == b[i].name);
            CHECK(a[i].defect == b[i].defect);
            CHECK_MESSAGE(a[i].pass, a[i].name);
            CHECK(a[i].suite == suite);
        }
    }
}
