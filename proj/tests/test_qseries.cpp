#include "thetapair/qseries.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace thetapair;

static QExpansion geometric(const Rational& bound)
{
    QExpansion f(bound);
    for (Rational e(0); e < bound; e += 1) f.add_term(e, Cyclo(1));
    return f;
}

TEST_CASE("addition and multiplication with bound propagation")
{
    QExpansion f(Rational(10));
    f.add_term(Rational(-1), Cyclo(2));
    f.add_term(Rational(1, 2), Cyclo::zeta(4));

    QExpansion g(Rational(5));
    g.add_term(Rational(0), Cyclo(1));
    g.add_term(Rational(3), Cyclo(-1));

    QExpansion s = f + g;
    CHECK(s.bound() == Rational(5));
    CHECK(s.coefficient(Rational(-1)) == Cyclo(2));
    CHECK(s.coefficient(Rational(3)) == Cyclo(-1));

    QExpansion p = f * g;
    // bound = min(10 + 0, 5 + (-1)) = 4
    CHECK(p.bound() == Rational(4));
    CHECK(p.coefficient(Rational(-1)) == Cyclo(2));
    CHECK(p.coefficient(Rational(2)) == Cyclo(-2));
    CHECK(p.coefficient(Rational(7, 2)) == -Cyclo::zeta(4));
    CHECK_THROWS(p.coefficient(Rational(4)));
}

TEST_CASE("series inverse of 1 - q is geometric")
{
    QExpansion f(Rational(20));
    f.add_term(Rational(0), Cyclo(1));
    f.add_term(Rational(1), Cyclo(-1));
    QExpansion inv = f.inverse();
    CHECK(inv.bound() == Rational(20));
    for (Rational e(0); e < 20; e += 1) CHECK(inv.coefficient(e) == Cyclo(1));
    QExpansion prod = f * inv;
    CHECK(prod.coefficient(Rational(0)) == Cyclo(1));
    for (Rational e(1); e < prod.bound(); e += 1) CHECK(prod.coefficient(e).is_zero());
}

TEST_CASE("inverse handles fractional exponents and leading monomials")
{
    QExpansion f(Rational(6));
    f.add_term(Rational(-1, 2), Cyclo::zeta(8));
    f.add_term(Rational(1, 3), Cyclo(Rational(2, 3)));
    f.add_term(Rational(2), Cyclo(-1));
    QExpansion inv = f.inverse();
    CHECK(inv.bound() == Rational(7));  // 6 - 2*(-1/2)
    QExpansion prod = f * inv;
    CHECK(prod.coefficient(Rational(0)) == Cyclo(1));
    Int D = prod.denominator();
    for (Rational e = Rational(1, D); e < prod.bound(); e += Rational(1, D))
        CHECK(prod.coefficient(e).is_zero());
}

TEST_CASE("principal part and truncation")
{
    QExpansion f(Rational(3));
    f.add_term(Rational(-7, 4), Cyclo(5));
    f.add_term(Rational(0), Cyclo(1));
    f.add_term(Rational(1), Cyclo(2));
    QExpansion pp = f.principal_part();
    CHECK(pp.terms().size() == 2);
    CHECK(pp.coefficient(Rational(-7, 4)) == Cyclo(5));
    CHECK(pp.coefficient(Rational(0)) == Cyclo(1));
    CHECK(pp.coefficient(Rational(1)).is_zero());

    QExpansion t = f.truncated(Rational(1, 2));
    CHECK(t.bound() == Rational(1, 2));
    CHECK(t.terms().size() == 2);
}

TEST_CASE("variable rescaling and q-power shifts")
{
    QExpansion f(Rational(8), Rational(2));
    f.add_term(Rational(1), Cyclo(3));
    QExpansion g = f.scaled_variable(Rational(1, 4));
    CHECK(g.bound() == Rational(2));
    CHECK(g.width() == Rational(8));
    CHECK(g.coefficient(Rational(1, 4)) == Cyclo(3));

    QExpansion h = f.shifted(Rational(-3));
    CHECK(h.bound() == Rational(5));
    CHECK(h.coefficient(Rational(-2)) == Cyclo(3));
}

TEST_CASE("numeric evaluation matches closed form")
{
    QExpansion inv = geometric(Rational(200));
    std::complex<double> tau(0.3, 1.1);
    std::complex<double> q = std::exp(std::complex<double>(0, 2 * M_PI) * tau);
    CHECK(std::abs(inv.eval(tau) - 1.0 / (1.0 - q)) < 1e-12);
}
