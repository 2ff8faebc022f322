#include <gtest/gtest.h>

#include <random>
#include <set>
#include <numeric>
#include <stdexcept>

#include "selmer3/eisenstein.hpp"

using namespace selmer3;

namespace {

using E = EisensteinInt;

// Residue field oracle: for split p, O_K/pi = F_p with rho -> t where t is the
// root of t^2 + t + 1 with pi(t) = 0 mod p; for inert p, O_K/p = F_p[rho].
struct Fp2 {
    u64 p;
    struct El {
        u64 a, b;
    };
    El mul(El x, El y) const {
        // (a + b rho)(c + d rho) = ac - bd + (ad + bc - bd) rho
        const u64 ac = x.a * y.a % p, bd = x.b * y.b % p;
        const u64 ad = x.a * y.b % p, bc = x.b * y.a % p;
        return {(ac + p - bd) % p, (ad + bc + p - bd) % p};
    }
};

int oracle_symbol_inert(const E& alpha, u64 p) {
    Fp2 f{p};
    Fp2::El x{static_cast<u64>(mod(alpha.a, p)), static_cast<u64>(mod(alpha.b, p))};
    if (x.a == 0 && x.b == 0) return -1;
    Fp2::El r{1, 0};
    for (u64 i = 0; i < (p * p - 1) / 3; ++i) r = f.mul(r, x);
    if (r.a == 1 && r.b == 0) return 0;
    if (r.a == 0 && r.b == 1) return 1;
    if (r.a == p - 1 && r.b == p - 1) return 2;
    ADD_FAILURE() << "not a cube root of unity";
    return -2;
}

u64 root_for(const E& pi, u64 p) {
    for (u64 t = 0; t < p; ++t) {
        if ((t * t + t + 1) % p) continue;
        if (mod(pi.a + pi.b * static_cast<i64>(t), static_cast<i64>(p)) == 0) return t;
    }
    ADD_FAILURE() << "no root";
    return 0;
}

int oracle_symbol_split(const E& alpha, const E& pi, u64 p) {
    const u64 t = root_for(pi, p);
    const u64 x = static_cast<u64>(mod(alpha.a + alpha.b * static_cast<i64>(t), static_cast<i64>(p)));
    if (x == 0) return -1;
    u64 r = 1;
    for (u64 i = 0; i < (p - 1) / 3; ++i) r = r * x % p;
    if (r == 1) return 0;
    if (r == t) return 1;
    if (r == t * t % p) return 2;
    ADD_FAILURE() << "not a cube root of unity";
    return -2;
}

int exp_or_zero(UnityRootExp s) { return s.is_zero() ? -1 : s.exponent(); }

std::vector<E> primary_primes_up_to(i64 bound) {
    std::vector<E> out;
    for (u64 p : primes_up_to(static_cast<u64>(bound))) {
        if (p == 3) continue;
        const auto pr = primes_above(p);
        if (pr.kind == PrimeKind::split) {
            out.push_back(pr.pi);
            out.push_back(pr.pi.conj());
        } else if (static_cast<i64>(p * p) <= bound) {
            out.push_back(E{-static_cast<i64>(p)});
        }
    }
    return out;
}

}  // namespace

TEST(Eisenstein, NormExamples) {
    EXPECT_EQ(norm(E{0, 0}), 0);
    EXPECT_EQ(norm(E{1, 3}), 7);
    EXPECT_EQ(norm(E{2}), 4);
}

TEST(Eisenstein, RingLaws) {
    const E r = E::rho();
    EXPECT_EQ(r * r * r, E{1});
    EXPECT_EQ(r * r + r + E{1}, E{0});
    EXPECT_EQ(r * r, E::rho2());
    std::mt19937_64 rng(7);
    auto rnd = [&] { return E{static_cast<i64>(rng() % 2001) - 1000, static_cast<i64>(rng() % 2001) - 1000}; };
    for (int i = 0; i < 500; ++i) {
        const E x = rnd(), y = rnd(), z = rnd();
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ(x * y, y * x);
        EXPECT_EQ(norm(x * y), norm(x) * norm(y));
        EXPECT_EQ(x * x.conj(), E{norm(x)});
        EXPECT_GE(norm(x), 0);
    }
}

TEST(Eisenstein, Rendering) {
    EXPECT_EQ(to_string(E{1, 3}), "1+3*r");
    EXPECT_EQ(to_string(E{-2, -3}), "-2-3*r");
    EXPECT_EQ(to_string(E{5}), "5+0*r");
}

TEST(Eisenstein, DivisionAndOverflow) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const E x{static_cast<i64>(rng() % 100001) - 50000, static_cast<i64>(rng() % 100001) - 50000};
        E y{static_cast<i64>(rng() % 201) - 100, static_cast<i64>(rng() % 201) - 100};
        if (y.is_zero()) continue;
        const auto [q, r] = divmod(x, y);
        EXPECT_EQ(q * y + r, x);
        EXPECT_LT(norm(r), norm(y));
        EXPECT_EQ(exact_div(x * y, y), x);
    }
    EXPECT_THROW(exact_div(E{7}, E{2}), std::domain_error);
    EXPECT_THROW(E{INT64_MAX} * E{2}, std::overflow_error);
}

TEST(Eisenstein, GcdExamples) {
    EXPECT_EQ(gcd(E{7}, E{1, 3}), (E{1, 3}));
    EXPECT_EQ(gcd(E{5}, E{7}), E{1});
    EXPECT_EQ(gcd(E{3, 1}, E{0}), primary_associate(E{3, 1}).second);
    EXPECT_THROW(gcd(E{0}, E{0}), std::invalid_argument);
}

TEST(Eisenstein, GcdProperties) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        const E c{static_cast<i64>(rng() % 41) - 20, static_cast<i64>(rng() % 41) - 20};
        const E x = c * E{static_cast<i64>(rng() % 61) - 30, static_cast<i64>(rng() % 61) - 30};
        const E y = c * E{static_cast<i64>(rng() % 61) - 30, static_cast<i64>(rng() % 61) - 30};
        if (x.is_zero() && y.is_zero()) continue;
        const E g = gcd(x, y);
        EXPECT_TRUE(divides(g, x));
        EXPECT_TRUE(divides(g, y));
        if (!c.is_zero()) {
            EXPECT_TRUE(divides(c, g));
        }
        if (norm(g) % 3) {
            EXPECT_TRUE(is_primary(g));
        }
    }
}

TEST(Eisenstein, PrimaryAssociate) {
    EXPECT_EQ(primary_associate(E{3, 1}), std::make_pair(E::rho2(), E{-2, -3}));
    EXPECT_EQ(primary_associate(E{5}), std::make_pair(E{-1}, E{-5}));
    EXPECT_EQ(primary_associate(E{1, 3}), std::make_pair(E{1}, E{1, 3}));
    EXPECT_THROW(primary_associate(E{3}), std::domain_error);
    EXPECT_THROW(primary_associate(E{1, -1}), std::domain_error);
    for (i64 a = -20; a <= 20; ++a)
        for (i64 b = -20; b <= 20; ++b) {
            const E z{a, b};
            if (norm(z) % 3 == 0) continue;
            int primary = 0;
            for (const E& u : units()) primary += is_primary(u * z);
            EXPECT_EQ(primary, 1) << to_string(z);
        }
}

TEST(Eisenstein, PrimesAbove) {
    const auto p7 = primes_above(7);
    EXPECT_EQ(p7.kind, PrimeKind::split);
    EXPECT_EQ(p7.pi, (E{1, 3}));
    EXPECT_EQ(primes_above(13).pi, (E{4, 3}));
    EXPECT_EQ(primes_above(5).kind, PrimeKind::inert);
    EXPECT_EQ(primes_above(5).pi, E{5});
    EXPECT_EQ(primes_above(3).kind, PrimeKind::ramified);
    EXPECT_EQ(primes_above(3).pi, (E{1, -1}));
    EXPECT_THROW(primes_above(15), std::invalid_argument);
    EXPECT_THROW(primes_above(1), std::invalid_argument);
    for (u64 p : primes_up_to(5000)) {
        const auto pr = primes_above(p);
        if (p % 3 == 1) {
            ASSERT_EQ(pr.kind, PrimeKind::split);
            ASSERT_TRUE(is_primary(pr.pi));
            ASSERT_EQ(norm(pr.pi), static_cast<i64>(p));
            ASSERT_GT(pr.pi.b, 0);
            ASSERT_EQ(pr.rho_residue, root_for(pr.pi, p));
        } else if (p % 3 == 2) {
            ASSERT_EQ(pr.kind, PrimeKind::inert);
        }
    }
}

TEST(CubicSymbol, Examples) {
    EXPECT_EQ(cubic_symbol(E::rho(), u64{2}).exponent(), 1);
    EXPECT_EQ(cubic_symbol(E::rho(), u64{5}).exponent(), 2);
    EXPECT_EQ(cubic_symbol(E{2}, E{1, 3}).exponent(), 2);
    EXPECT_EQ(cubic_symbol(E::rho(), u64{17}).exponent(), 0);
    EXPECT_EQ(cubic_symbol(E::rho(), u64{4}).exponent(), 2);
    EXPECT_TRUE(cubic_symbol(E{7}, E{1, 3}).is_zero());
    EXPECT_THROW(cubic_symbol(E{2}, u64{6}), std::domain_error);
    EXPECT_THROW(cubic_symbol(E{2}, E{1, -1}), std::domain_error);
    EXPECT_THROW(cubic_symbol(E{2}, u64{0}), std::domain_error);
}

TEST(CubicSymbol, UnityRootExpArithmetic) {
    const UnityRootExp z = UnityRootExp::zero();
    EXPECT_EQ(UnityRootExp(1) * UnityRootExp(2), UnityRootExp(0));
    EXPECT_EQ(UnityRootExp(2) * UnityRootExp(2), UnityRootExp(1));
    EXPECT_TRUE((z * UnityRootExp(1)).is_zero());
    EXPECT_EQ(UnityRootExp(1).inverse(), UnityRootExp(2));
    EXPECT_EQ(UnityRootExp(2).pow(-1), UnityRootExp(1));
    EXPECT_THROW(z.exponent(), std::domain_error);
}

TEST(CubicSymbol, EulerCriterionMatchesExhaustiveCubes) {
    // every prime pi with norm <= 200: exponent 0 exactly on the cubes of (O_K/pi)^x
    for (u64 p : primes_up_to(200)) {
        if (p == 3 || (p % 3 == 2 && p * p > 200)) continue;
        const E pi = primes_above(p).pi;
        const i64 q = norm(pi);
        std::vector<E> residues;
        if (p % 3 == 1) {
            for (i64 a = 1; a < static_cast<i64>(p); ++a) residues.push_back(E{a});
        } else {
            for (i64 a = 0; a < static_cast<i64>(p); ++a)
                for (i64 b = 0; b < static_cast<i64>(p); ++b)
                    if (a || b) residues.push_back(E{a, b});
        }
        ASSERT_EQ(static_cast<i64>(residues.size()), q - 1);
        std::set<E> cubes;
        for (const E& x : residues) cubes.insert(reduce(x * x * x, pi));
        for (const E& x : residues) {
            const bool is_cube = cubes.count(reduce(x, pi)) > 0;
            ASSERT_EQ(cubic_symbol_prime(x, pi).exponent() == 0, is_cube) << to_string(x) << " mod " << to_string(pi);
        }
        EXPECT_EQ(static_cast<i64>(cubes.size()), (q - 1) / 3);
    }
}

TEST(CubicSymbol, ResidueFieldOracle) {
    std::mt19937_64 rng(99);
    for (u64 p : primes_up_to(400)) {
        if (p == 3) continue;
        const auto pr = primes_above(p);
        for (int i = 0; i < 40; ++i) {
            const E alpha{static_cast<i64>(rng() % 20001) - 10000, static_cast<i64>(rng() % 20001) - 10000};
            if (pr.kind == PrimeKind::split) {
                ASSERT_EQ(exp_or_zero(cubic_symbol_prime(alpha, pr.pi)), oracle_symbol_split(alpha, pr.pi, p));
                ASSERT_EQ(exp_or_zero(cubic_symbol_prime(alpha, pr.pi.conj())),
                          oracle_symbol_split(alpha, pr.pi.conj(), p));
                const i64 m = alpha.a;
                ASSERT_EQ(exp_or_zero(cubic_symbol_rational(m, pr)), oracle_symbol_split(E{m}, pr.pi, p));
            } else if (p < 100) {
                ASSERT_EQ(exp_or_zero(cubic_symbol_prime(alpha, pr.pi)), oracle_symbol_inert(alpha, p));
            }
        }
    }
}

TEST(CubicSymbol, Reciprocity) {
    const auto primes = primary_primes_up_to(600);
    for (const E& a : primes)
        for (const E& b : primes) {
            if (a == b) continue;
            ASSERT_EQ(cubic_symbol(a, b), cubic_symbol(b, a)) << to_string(a) << " " << to_string(b);
        }
}

TEST(CubicSymbol, FirstSupplementaryLaw) {
    for (u64 u = 1; u <= 10000; ++u) {
        if (u % 3 == 0) continue;
        const bool trivial = cubic_symbol(E::rho(), u).exponent() == 0;
        ASSERT_EQ(trivial, u % 9 == 1 || u % 9 == 8) << u;
        ASSERT_EQ(rho_symbol(factorize(u)), cubic_symbol(E::rho(), u)) << u;
    }
}

TEST(CubicSymbol, RationalOverInertIsTrivial) {
    for (u64 p : primes_up_to(300)) {
        if (p % 3 != 2) continue;
        for (i64 a = 1; a < 200; ++a) {
            if (a % static_cast<i64>(p) == 0) continue;
            ASSERT_EQ(cubic_symbol(E{a}, u64{p}).exponent(), 0) << a << " " << p;
        }
    }
}

TEST(CubicSymbol, Conjugation) {
    std::mt19937_64 rng(5);
    for (u64 p : primes_up_to(500)) {
        if (p % 3 != 1) continue;
        const E pi = primes_above(p).pi;
        for (int i = 0; i < 20; ++i) {
            const E alpha{static_cast<i64>(rng() % 1001) - 500, static_cast<i64>(rng() % 1001) - 500};
            const auto s = cubic_symbol_prime(alpha, pi);
            const auto c = cubic_symbol_prime(alpha.conj(), pi.conj());
            if (s.is_zero()) {
                EXPECT_TRUE(c.is_zero());
            } else {
                EXPECT_EQ(c, s.pow(2));
            }
        }
    }
}

TEST(CubicSymbol, MultiplicativeInNumeratorAndDenominator) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 300; ++i) {
        const E a{static_cast<i64>(rng() % 201) - 100, static_cast<i64>(rng() % 201) - 100};
        const E b{static_cast<i64>(rng() % 201) - 100, static_cast<i64>(rng() % 201) - 100};
        E beta{static_cast<i64>(rng() % 61) - 30, static_cast<i64>(rng() % 61) - 30};
        if (beta.is_zero() || norm(beta) % 3 == 0) continue;
        EXPECT_EQ(cubic_symbol(a * b, beta), cubic_symbol(a, beta) * cubic_symbol(b, beta));
        E gamma{static_cast<i64>(rng() % 31) - 15, static_cast<i64>(rng() % 31) - 15};
        if (gamma.is_zero() || norm(gamma) % 3 == 0) continue;
        EXPECT_EQ(cubic_symbol(a, beta * gamma), cubic_symbol(a, beta) * cubic_symbol(a, gamma));
    }
}

namespace {

int valuation(E alpha, const E& pi) {
    int v = 0;
    while (divides(pi, alpha)) {
        alpha = exact_div(alpha, pi);
        ++v;
    }
    return v;
}

// alpha is a unit times a rational integer times a cube exactly when the
// valuations at pi and its conjugate agree mod 3 for every split p.
bool integer_times_cube(const E& alpha) {
    for (const auto& [p, e] : factorize(static_cast<u64>(norm(alpha))).factors) {
        (void)e;
        if (p % 3 != 1) continue;
        const E pi = primes_above(p).pi;
        if ((valuation(alpha, pi) - valuation(alpha, pi.conj())) % 3) return false;
    }
    return true;
}

}  // namespace

TEST(CubicSymbol, CharacterSumOverRationalResidues) {
    // sum over xi in (Z/N)^x of (xi/alpha)_3 is phi(N) or 0
    int full = 0, vanishing = 0;
    for (i64 a = -40; a <= 40; ++a)
        for (i64 b = -40; b <= 40; ++b) {
            const E alpha{a, b};
            const i64 N = norm(alpha);
            if (N <= 1 || N > 400 || N % 3 == 0) continue;
            i64 count[3] = {0, 0, 0};
            for (i64 xi = 1; xi < N; ++xi) {
                if (std::gcd(xi, N) != 1) continue;
                ++count[cubic_symbol(E{xi}, alpha).exponent()];
            }
            const bool cube_like = integer_times_cube(alpha);
            if (cube_like) {
                ASSERT_EQ(count[1] + count[2], 0) << to_string(alpha);
                ++full;
            } else {
                ASSERT_TRUE(count[0] == count[1] && count[1] == count[2]) << to_string(alpha);
                ++vanishing;
            }
        }
    EXPECT_GT(full, 0);
    EXPECT_GT(vanishing, 0);
    // unit multiples and integer multiples of cubes keep the full sum
    const E pi7{1, 3};
    for (const E& alpha : {E{8} * E::rho(), E{2} * pi7 * pi7 * pi7, E{-5}, pi7 * pi7 * pi7 * E::rho2()}) {
        const i64 N = norm(alpha);
        for (i64 xi = 1; xi < N; ++xi)
            if (std::gcd(xi, N) == 1) {
                ASSERT_EQ(cubic_symbol(E{xi}, alpha).exponent(), 0) << to_string(alpha);
            }
    }
}
