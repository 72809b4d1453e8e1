#include <catch2/catch_amalgamated.hpp>

#include "thetapair/theta.hpp"

#include <complex>

using namespace thetapair;
using std::complex;

namespace {

QExpansion classical_theta(long long m, const Rational& bound)
{
    // sum over n in Z of q^{m n^2}
    QExpansion f(bound, Rational(1));
    for (long long n = -200; n <= 200; ++n) {
        Rational e = Rational(m) * n * n;
        if (e < bound) f.add_term(e, Cyclo(1));
    }
    return f;
}

complex<double> coset_theta_numeric(const ShiftedLattice& lat,
                                    const std::vector<std::array<Rational, 3>>& orbit,
                                    complex<double> tau)
{
    const complex<double> two_pi_i(0.0, 2.0 * M_PI);
    complex<double> total(0.0);
    for (const auto& s : orbit) {
        ShiftedLattice l = lat;
        l.shift = s;
        for (int x = -24; x <= 24; ++x)
            for (int y = -24; y <= 24; ++y)
                for (int z = -24; z <= 24; ++z) {
                    std::array<Rational, 3> v = {Rational(x) + s[0], Rational(y) + s[1],
                                                 Rational(z) + s[2]};
                    total += std::exp(two_pi_i * tau * to_double(lat.q_value(v)));
                }
    }
    return total;
}

complex<double> unary_theta_numeric(const UnaryThetaSpec& u, complex<double> tau)
{
    const complex<double> two_pi_i(0.0, 2.0 * M_PI);
    long long m = u.class_modulus();
    long long h0 = ((u.h % m) + m) % m;
    complex<double> total(0.0);
    for (long long r = h0 - 600 * m; r <= h0 + 600 * m; r += m)
        total += double(r) * std::exp(two_pi_i * tau * double(u.t) * double(r) * double(r));
    return total;
}

complex<double> g_numeric(double a, double b, complex<double> tau)
{
    const complex<double> pi_i(0.0, M_PI);
    complex<double> total(0.0);
    for (int n = -60; n <= 60; ++n) {
        double nu = a + n;
        total += nu * std::exp(pi_i * nu * nu * tau + 2.0 * pi_i * b * nu);
    }
    return total;
}

complex<double> moebius(const SL2& g, complex<double> tau)
{
    return (double(g.a) * tau + double(g.b)) / (double(g.c) * tau + double(g.d));
}

}  // namespace

TEST_CASE("octagonal coset theta matches the classical theta product")
{
    PolygonalLattice pl = polygonal_to_lattice(8, 1, 3, 3);
    REQUIRE(pl.scale == Rational(1, 3));
    REQUIRE(pl.constant_shift == Rational(7, 3));
    REQUIRE(pl.class_modulus == 3);
    REQUIRE(pl.lattice.gram[0][0] == 18);
    REQUIRE(pl.lattice.gram[1][1] == 54);
    REQUIRE(pl.lattice.gram[2][2] == 54);
    REQUIRE(pl.orbit.size() == 8);

    Rational B(101);
    QExpansion sym = symmetrized_theta_infty(pl, B);
    QExpansion prod = (classical_theta(1, B) - classical_theta(9, B))
                    * (classical_theta(3, B) - classical_theta(27, B))
                    * (classical_theta(3, B) - classical_theta(27, B));
    REQUIRE(sym == prod.truncated(sym.bound()));

    REQUIRE(sym.coefficient(7) == Cyclo(8));
    REQUIRE(sym.coefficient(10) == Cyclo(8));
    REQUIRE(sym.coefficient(13) == Cyclo(0));
    REQUIRE(sym.coefficient(16) == Cyclo(16));
}

TEST_CASE("polygonal generating function matches the single-coset theta")
{
    // p8(x) + 3 p8(y) + 3 p8(z) over x, y, z in Z
    Rational B(40);
    QExpansion gen = polygonal_generating_function(8, 1, 3, 3, B);
    PolygonalLattice pl = polygonal_to_lattice(8, 1, 3, 3);
    QExpansion th = theta_expansion_infty(pl.lattice, (B + pl.constant_shift) / pl.scale);
    QExpansion mapped = th.scaled_variable(pl.scale).shifted(-pl.constant_shift);
    REQUIRE(mapped.truncated(B) == gen);
    REQUIRE(gen.coefficient(0) == Cyclo(1));

    // squares: m = 4 reduces to the plain lattice Z^3
    QExpansion gen4 = polygonal_generating_function(4, 1, 1, 1, Rational(30));
    PolygonalLattice pl4 = polygonal_to_lattice(4, 1, 1, 1);
    REQUIRE(pl4.scale == Rational(1));
    REQUIRE(pl4.constant_shift == Rational(0));
    REQUIRE(pl4.orbit.size() == 1);
    QExpansion th4 = theta_expansion_infty(pl4.lattice, Rational(30));
    REQUIRE(th4 == gen4);
    REQUIRE(th4.coefficient(1) == Cyclo(6));   // r3(1)
    REQUIRE(th4.coefficient(7) == Cyclo(0));   // 7 is not a sum of three squares

    // triangular numbers represent everything up to 25
    QExpansion gen3 = polygonal_generating_function(3, 1, 1, 1, Rational(26));
    for (long long n = 0; n <= 25; ++n)
        REQUIRE_FALSE(gen3.coefficient(Rational(n)).is_zero());
}

TEST_CASE("congruence-class form reproduces the symmetrized octagonal theta")
{
    Rational B(60);
    QExpansion sum(B);
    for (int e1 : {1, -1})
        for (int e2 : {1, -1})
            for (int e3 : {1, -1}) {
                ThetaSpec spec;
                spec.A = {{18, 0, 0}, {0, 54, 0}, {0, 0, 54}};
                spec.h = {e1, e2, e3};
                spec.N = 3;
                sum += theta_expansion_infty(spec, B);
            }
    QExpansion sym = symmetrized_theta_infty(polygonal_to_lattice(8, 1, 3, 3), B);
    REQUIRE(sum == sym);
}

TEST_CASE("congruence-class enumeration agrees with a naive loop")
{
    ThetaSpec spec;
    spec.A = {{18, 0, 0}, {0, 54, 0}, {0, 0, 54}};
    spec.h = {1, 1, 1};
    spec.N = 3;
    Rational B(50);
    QExpansion naive(B);
    for (int u = -40; u <= 40; ++u)
        for (int v = -40; v <= 40; ++v)
            for (int w = -40; w <= 40; ++w) {
                if (((u - 1) % 3 + 3) % 3 || ((v - 1) % 3 + 3) % 3 || ((w - 1) % 3 + 3) % 3)
                    continue;
                Rational e = Rational(18 * u * u + 54 * v * v + 54 * w * w, 18);
                if (e < B) naive.add_term(e, Cyclo(1));
            }
    REQUIRE(theta_expansion_infty(spec, B) == naive);
}

TEST_CASE("unary theta expansion oracle")
{
    UnaryThetaSpec u{2, 1, 3};
    QExpansion f = theta_expansion_infty(u, Rational(120));
    REQUIRE(f.coefficient(4) == Cyclo(2));
    REQUIRE(f.coefficient(16) == Cyclo(-4));
    REQUIRE(f.coefficient(64) == Cyclo(8));
    REQUIRE(f.coefficient(100) == Cyclo(-10));
    REQUIRE(f.coefficient(36) == Cyclo(0));
    REQUIRE(f.coefficient(1) == Cyclo(0));
    std::size_t n = f.terms().size();
    REQUIRE(n == 4);

    // rank-1 congruence-class form with linear P gives the same series
    ThetaSpec spec;
    spec.A = {{72}};
    spec.h = {2};
    spec.N = 6;
    spec.linear_p = true;
    spec.direction = {Rational(1)};
    REQUIRE(theta_expansion_infty(spec, Rational(120)) == f);
}

TEST_CASE("quadratic-character theta rewrite")
{
    REQUIRE(chi_theta_rewrite_check(Rational(200)));
    QExpansion lhs = theta_expansion_infty(UnaryThetaSpec{2, 1, 3}, Rational(120))
                         .scaled_variable(Rational(1, 4));
    REQUIRE(lhs.coefficient(1) == Cyclo(2));
    REQUIRE(lhs.coefficient(4) == Cyclo(-4));
    REQUIRE(lhs.coefficient(16) == Cyclo(8));
    REQUIRE(lhs.coefficient(25) == Cyclo(-10));
}

TEST_CASE("rank-1 S transform matches the direct sum numerically")
{
    for (complex<double> tau : {complex<double>(0.0, 1.0), complex<double>(0.3, 1.1)}) {
        complex<double> stau = -1.0 / tau;
        for (int w2 : {1, 3}) {
            ThetaVector v = ThetaVector::single(1, 3, Rational(1), w2);
            QExpansion base = v.realize(Rational(60));
            ThetaVector vs = v;
            vs.transform_S();
            complex<double> lhs = vs.realize(Rational(60)).eval(tau);
            complex<double> rhs = std::pow(tau, -w2 / 2.0) * base.eval(stau);
            REQUIRE(std::abs(lhs - rhs) < 1e-8);
        }
    }
}

TEST_CASE("rank-1 T transform refines classes and matches numerically")
{
    // c M^2 = 9 and 2 c M = 3 are integers already: no refinement
    ThetaVector v0 = ThetaVector::single(2, 6, Rational(1, 4), 1);
    ThetaVector v0t = v0;
    v0t.transform_T(1);
    REQUIRE(v0t.modulus == 6);

    // c = 1/3, M = 2 needs lambda = 3
    ThetaVector v = ThetaVector::single(1, 2, Rational(1, 3), 1);
    QExpansion base = v.realize(Rational(40));
    ThetaVector vt = v;
    vt.transform_T(1);
    REQUIRE(vt.modulus == 6);
    REQUIRE(vt.comp.size() == 3);
    complex<double> tau(0.2, 0.8);
    REQUIRE(std::abs(vt.realize(Rational(40)).eval(tau) - base.eval(tau + 1.0)) < 1e-9);
    REQUIRE(std::abs(v0t.realize(Rational(40)).eval(tau) - v0.realize(Rational(40)).eval(tau + 1.0))
            < 1e-9);
}

TEST_CASE("double S transform is the principal slash by -I")
{
    STWord ss;
    ss.tokens = {{'S', 0}, {'S', 0}};
    REQUIRE((ss.evaluate() == SL2{-1, 0, 0, -1}));
    for (int w2 : {1, 3}) {
        ThetaVector v = ThetaVector::single(1, 3, Rational(1), w2);
        QExpansion base = v.realize(Rational(50));
        ThetaVector vv = v;
        vv.apply_word(ss);
        // (-1)^{-w2/2} with the principal branch is (-i)^{w2}
        Cyclo unit = Cyclo::zeta(4, -w2);
        REQUIRE(vv.realize(Rational(50)) == unit * base);
    }
}

TEST_CASE("weight-3/2 components at opposite classes cancel")
{
    ThetaVector v = ThetaVector::single(1, 5, Rational(1), 3);
    v.comp[4] = Cyclo(1);
    REQUIRE(v.realize(Rational(80)).empty());
}

TEST_CASE("word replay depends only on the word's product")
{
    PolygonalLattice pl = polygonal_to_lattice(8, 1, 3, 3);
    DiagonalCosetTheta F = DiagonalCosetTheta::make(pl.lattice, Rational(1), true);
    STWord w1;
    w1.tokens = {{'T', 2}, {'S', 0}, {'T', -1}, {'S', 0}, {'T', 3}};
    STWord w2 = decompose_st(w1.evaluate());
    REQUIRE(F.at_word(w1, Rational(4)) == F.at_word(w2, Rational(4)));
}

TEST_CASE("diagonal coset theta at a cusp matches the direct sum numerically")
{
    PolygonalLattice pl = polygonal_to_lattice(8, 1, 3, 3);
    DiagonalCosetTheta F = DiagonalCosetTheta::make(pl.lattice, Rational(1), true);

    QExpansion infty = F.at_infinity(Rational(101)).truncated(Rational(101));
    REQUIRE(infty == symmetrized_theta_infty(pl, Rational(101)));

    for (SL2 g : {SL2{1, 0, 1, 1}, SL2{2, 1, 3, 2}, SL2{0, -1, 1, 0}}) {
        complex<double> w0(0.1, 0.9);
        SL2 gi = g.inverse();
        complex<double> tau = moebius(gi, w0);
        QExpansion exact = F.at_cusp(g, Rational(40));
        complex<double> lhs = exact.eval(tau);
        complex<double> rhs = std::pow(double(g.c) * tau + double(g.d), -1.5)
                            * coset_theta_numeric(pl.lattice, pl.orbit, w0);
        REQUIRE(std::abs(lhs - rhs) < 1e-6);
    }
}

TEST_CASE("g-series transformation laws against direct sums")
{
    const complex<double> pi_i(0.0, M_PI);
    double a = 1.0 / 3.0, b = 1.0 / 5.0;
    for (complex<double> tau : {complex<double>(0.0, 1.0), complex<double>(0.4, 0.9)}) {
        // T: g_{a,b}(tau+1) = e^{-pi i a(a+1)} g_{a,a+b+1/2}(tau)
        complex<double> lhs = g_numeric(a, b, tau + 1.0);
        complex<double> rhs = std::exp(-pi_i * a * (a + 1.0)) * g_numeric(a, a + b + 0.5, tau);
        REQUIRE(std::abs(lhs - rhs) < 1e-9);
        // S: g_{a,b}(-1/tau) = i e^{2 pi i a b} (-i tau)^{3/2} g_{b,-a}(tau)
        lhs = g_numeric(a, b, -1.0 / tau);
        rhs = complex<double>(0, 1) * std::exp(2.0 * pi_i * a * b)
            * std::pow(complex<double>(0, -1) * tau, 1.5) * g_numeric(b, -a, tau);
        REQUIRE(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("unary theta transported to cusps")
{
    UnaryThetaSpec u{2, 1, 3};

    // identity matrix reproduces the expansion at infinity
    QExpansion id = unary_theta_at_cusp(u, Rational(1), SL2{}, Rational(120));
    REQUIRE(id == theta_expansion_infty(u, Rational(120)));

    // rescaled variable
    QExpansion q4 = unary_theta_at_cusp(u, Rational(1, 4), SL2{}, Rational(40));
    REQUIRE(q4 == theta_expansion_infty(u, Rational(160)).scaled_variable(Rational(1, 4)));

    // general matrices against the direct sum
    for (SL2 g : {SL2{1, 0, 1, 1}, SL2{0, -1, 1, 0}, SL2{2, 1, 3, 2}, SL2{1, 0, 6, 1}}) {
        for (Rational delta : {Rational(1), Rational(1, 4)}) {
            // puts Im(tau) = 1/(3c) while Im(g tau) = 3/c, so both the exact
            // series and the direct sum converge quickly
            complex<double> w0(double(g.a) / g.c, 3.0 / g.c);
            complex<double> tau = moebius(g.inverse(), w0);
            QExpansion exact = unary_theta_at_cusp(u, delta, g, Rational(80));
            complex<double> lhs = exact.eval(tau);
            complex<double> rhs = std::pow(double(g.c) * tau + double(g.d), -1.5)
                                * unary_theta_numeric(u, to_double(delta) * w0);
            REQUIRE(std::abs(lhs - rhs) < 1e-6);
        }
    }
}
