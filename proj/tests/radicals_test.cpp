#include <cavopt/radicals.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <random>

namespace {

using cavopt::RadicalSum;
using cavopt::Rational;

// Independent sieve oracle: mark every multiple of p^2 for primes p, collect
// the survivors in order.
std::vector<std::uint64_t> squarefree_sieve(std::uint64_t limit) {
    std::vector<bool> squarefree(limit + 1, true);
    for (std::uint64_t d = 2; d * d <= limit; ++d)
        for (std::uint64_t q = d * d; q <= limit; q += d * d) squarefree[q] = false;
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 1; v <= limit; ++v)
        if (squarefree[v]) out.push_back(v);
    return out;
}

// High-precision evaluation oracle (50 decimal digits).
using BigFloat = boost::multiprecision::cpp_bin_float_50;
BigFloat eval_oracle(const RadicalSum& r) {
    BigFloat acc = 0;
    for (const auto& [alpha, q] : r.terms()) {
        BigFloat num(boost::multiprecision::numerator(q).str());
        BigFloat den(boost::multiprecision::denominator(q).str());
        acc += num / den * sqrt(BigFloat(alpha));
    }
    return acc;
}

TEST(NthSquarefree, SpecExamples) {
    EXPECT_EQ(cavopt::nth_squarefree(1), 1u);
    EXPECT_EQ(cavopt::nth_squarefree(4), 5u);   // 4 = 2^2 is skipped
    EXPECT_EQ(cavopt::nth_squarefree(7), 10u);  // 1,2,3,5,6,7,10
}

TEST(NthSquarefree, MatchesSieveOracleAndIsMonotone) {
    const auto oracle = squarefree_sieve(2000);
    std::uint64_t prev = 0;
    for (std::uint64_t p = 1; p <= 600; ++p) {
        const std::uint64_t v = cavopt::nth_squarefree(p);
        EXPECT_EQ(v, oracle[p - 1]) << "p = " << p;
        EXPECT_GT(v, prev);
        EXPECT_TRUE(cavopt::is_squarefree(v));
        prev = v;
    }
}

TEST(RadicalSum, CombineCancellation) {
    // (sqrt2 + 3*sqrt1, sqrt2, 1, -1) -> 3*sqrt1
    RadicalSum a = RadicalSum::sqrt_of(2) + RadicalSum::integer(3);
    RadicalSum b = RadicalSum::sqrt_of(2);
    RadicalSum c = cavopt::radsum_combine(a, b, 1, -1);
    EXPECT_EQ(c, RadicalSum::integer(3));
}

TEST(RadicalSum, CombineSameTerm) {
    RadicalSum one = RadicalSum::integer(1);
    EXPECT_EQ(cavopt::radsum_combine(one, one, 1, 1), RadicalSum::integer(2));
}

TEST(RadicalSum, CombineCoefficientWise) {
    // (sqrt2 + sqrt3, sqrt3 + sqrt5, 2, 1) -> 2 sqrt2 + 3 sqrt3 + sqrt5
    RadicalSum a = RadicalSum::sqrt_of(2) + RadicalSum::sqrt_of(3);
    RadicalSum b = RadicalSum::sqrt_of(3) + RadicalSum::sqrt_of(5);
    RadicalSum expect;
    expect.add_term(Rational(2), 2);
    expect.add_term(Rational(3), 3);
    expect.add_term(Rational(1), 5);
    EXPECT_EQ(cavopt::radsum_combine(a, b, 2, 1), expect);
}

TEST(RadicalSum, EqualityAndIndependence) {
    EXPECT_EQ(RadicalSum::sqrt_of(2) + RadicalSum::sqrt_of(3),
              RadicalSum::sqrt_of(3) + RadicalSum::sqrt_of(2));
    // sqrt(8) canonicalizes to 2 sqrt(2)
    EXPECT_EQ(RadicalSum::sqrt_of(8), RadicalSum::term(Rational(2), 2));
    EXPECT_EQ(RadicalSum::sqrt_of(12), RadicalSum::term(Rational(2), 3));
    EXPECT_EQ(RadicalSum::sqrt_of(720), RadicalSum::term(Rational(12), 5));
    EXPECT_NE(RadicalSum::integer(3), RadicalSum::sqrt_of(2));
}

TEST(RadicalSum, EvalExamples) {
    EXPECT_DOUBLE_EQ(RadicalSum::integer(3).eval().value, 3.0);

    const auto r2 = RadicalSum::sqrt_of(2).eval();
    EXPECT_NEAR(r2.value, 1.4142135623730951, 1e-15);
    EXPECT_LE(std::fabs(r2.value - 1.4142135623730951), r2.bound);

    // sqrt2 + sqrt3 + sqrt5 + 3, oracle value 8.382332347441762...
    RadicalSum s = RadicalSum::sqrt_of(2) + RadicalSum::sqrt_of(3) + RadicalSum::sqrt_of(5) +
                   RadicalSum::integer(3);
    const auto e = s.eval();
    EXPECT_NEAR(e.value, 8.3823323474417618, 1e-14);
    const double oracle = eval_oracle(s).convert_to<double>();
    EXPECT_LE(std::fabs(e.value - oracle), e.bound);
}

TEST(RadicalSum, EvalBoundHoldsOnRandomSums) {
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<int> coeff(-1000, 1000);
    std::uniform_int_distribution<std::uint64_t> radicand(1, 400);
    for (int trial = 0; trial < 200; ++trial) {
        RadicalSum r;
        const int terms = 1 + static_cast<int>(rng() % 20);
        for (int t = 0; t < terms; ++t) r.add_term(Rational(coeff(rng)), radicand(rng));
        const auto e = r.eval();
        const BigFloat exact = eval_oracle(r);
        EXPECT_LE(std::fabs(e.value - exact.convert_to<double>()), e.bound + 1e-300);
    }
}

TEST(RadicalSum, ExactInequalityImpliesFloatSeparation) {
    // For integer coefficients bounded by 1e3 and <= 20 terms, distinct sums
    // are farther apart than the combined evaluation error bounds.
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> coeff(-1000, 1000);
    std::uniform_int_distribution<std::uint64_t> radicand(1, 60);
    for (int trial = 0; trial < 200; ++trial) {
        RadicalSum a, b;
        for (int t = 0; t < 10; ++t) {
            a.add_term(Rational(coeff(rng)), radicand(rng));
            b.add_term(Rational(coeff(rng)), radicand(rng));
        }
        if (a == b) continue;
        const auto ea = a.eval();
        const auto eb = b.eval();
        EXPECT_GT(std::fabs(ea.value - eb.value), ea.bound + eb.bound)
            << a.str() << " vs " << b.str();
        RadicalSum diff = a - b;
        const auto ed = diff.eval();
        EXPECT_GT(std::fabs(ed.value), ed.bound);
    }
}

TEST(RadicalSum, CombineIsSymmetricBilinear) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> coeff(-50, 50);
    std::uniform_int_distribution<std::uint64_t> radicand(1, 30);
    for (int trial = 0; trial < 100; ++trial) {
        RadicalSum a, b;
        for (int t = 0; t < 5; ++t) {
            a.add_term(Rational(coeff(rng)), radicand(rng));
            b.add_term(Rational(coeff(rng)), radicand(rng));
        }
        const Rational s(coeff(rng)), t(coeff(rng));
        EXPECT_EQ(cavopt::radsum_combine(a, b, s, t), cavopt::radsum_combine(b, a, t, s));
    }
}

TEST(RadicalSum, ZeroEqualsEvalZero) {
    RadicalSum a = RadicalSum::sqrt_of(2) + RadicalSum::sqrt_of(3);
    RadicalSum d = a - a;
    EXPECT_TRUE(d.is_zero());
    EXPECT_EQ(d.eval().value, 0.0);
    EXPECT_EQ(d.str(), "0");
}

TEST(RadicalSum, TextForm) {
    RadicalSum r;
    r.add_term(Rational(3), 1);
    r.add_term(Rational(1, 2), 5);
    r.add_term(Rational(-2), 3);
    EXPECT_EQ(r.str(), "3*sqrt(1) - 2*sqrt(3) + 1/2*sqrt(5)");
}

}  // namespace
