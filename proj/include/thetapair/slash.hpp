#ifndef THETAPAIR_SLASH_HPP
#define THETAPAIR_SLASH_HPP

// Shared machinery for transporting expansions to cusps:
//  - rational Hermite splitting M_sigma * gamma = gamma' * U with U upper
//    triangular (handles rescaled variables f(sigma*tau) uniformly),
//  - cocycle units for iterated half-integral-weight slashes, which are exact
//    fourth roots of unity recovered from closed-form j-factors at tau = i.

#include "cyclotomic.hpp"
#include "modular_group.hpp"

#include <cmath>
#include <complex>

namespace thetapair {

inline std::complex<double> moebius_apply(const SL2& g, std::complex<double> tau)
{
    return (double(g.a) * tau + double(g.b)) / (double(g.c) * tau + double(g.d));
}

inline std::complex<double> j_factor(const SL2& g, std::complex<double> tau)
{
    return double(g.c) * tau + double(g.d);
}

// sigma*gamma(tau) = gamma'((p*tau + r)/s) with gamma' in SL2(Z) and
// p, s > 0 rational, p*s = sigma.  Also c'*w + d' = (c*tau + d)/s holds
// identically, including principal branches of square roots since s > 0.
struct ScaledSplit {
    SL2 unimodular;       // gamma'
    Rational p, r, s;     // upper-triangular part
};

inline ScaledSplit split_scaled_action(const Rational& sigma, const SL2& g)
{
    if (sigma <= 0) throw std::invalid_argument("split_scaled_action: sigma must be positive");
    // integer matrix W = lambda * diag(sigma, 1) * gamma
    Rational top_a = sigma * g.a, top_b = sigma * g.b;
    Int lambda = lcm(den(top_a), den(top_b));
    Int w11 = num(top_a) * (lambda / den(top_a));
    Int w12 = num(top_b) * (lambda / den(top_b));
    Int w21 = Int(g.c) * lambda;
    Int w22 = Int(g.d) * lambda;

    Int g1 = gcd(w11, w21);
    if (g1 == 0) throw std::logic_error("split_scaled_action: singular matrix");
    Int alpha = w11 / g1, gamma_c = w21 / g1;
    // Bezout: alpha*delta - beta*gamma_c = 1
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = alpha, r1 = gamma_c;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = Int(r0 - q * r1), x2 = Int(x0 - q * x1), y2 = Int(y0 - q * y1);
        r0 = r1; r1 = r2;
        x0 = x1; x1 = x2;
        y0 = y1; y1 = y2;
    }
    if (r0 == -1) { x0 = -x0; y0 = -y0; }
    // alpha*x0 + gamma_c*y0 = 1; take gamma' = (alpha, -y0; gamma_c, x0)
    Int ga = alpha, gb = -y0, gc = gamma_c, gd = x0;
    // U0 = gamma'^{-1} W
    Int u11 = gd * w11 - gb * w21;
    Int u12 = gd * w12 - gb * w22;
    Int u22 = -gc * w12 + ga * w22;
    Int u21 = -gc * w11 + ga * w21;
    if (u21 != 0) throw std::logic_error("split_scaled_action: not upper triangular");
    if (u11 < 0) {
        ga = -ga; gb = -gb; gc = -gc; gd = -gd;
        u11 = -u11; u12 = -u12; u22 = -u22;
    }
    if (u22 < 0) throw std::logic_error("split_scaled_action: det sign");
    ScaledSplit out;
    out.unimodular = SL2{to_long(ga), to_long(gb), to_long(gc), to_long(gd)};
    out.p = Rational(u11, lambda);
    out.r = Rational(u12, lambda);
    out.s = Rational(u22, lambda);
    if (out.unimodular.det() != 1) throw std::logic_error("split_scaled_action: gamma' not SL2");
    if (out.p * out.s != sigma) throw std::logic_error("split_scaled_action: wrong determinant");
    return out;
}

// Unit relating an iterated principal-branch slash over the word's tokens to
// the principal-branch slash by the full product, for weight weight2/2.
// The ratio prod_k j(t_k, suffix_k(tau0))^{w} / j(gamma, tau0)^{w} is a
// constant fourth root of unity; it is recovered at a generic reference
// point and snapped (the snap gap is pi/2, far above double rounding).
inline Cyclo slash_cocycle_unit(const STWord& word, int weight2)
{
    const std::complex<double> tau0(0.137, 1.0);  // generic point, Im > 0
    std::size_t n = word.tokens.size();
    std::vector<SL2> suffix(n + 1);
    suffix[n] = SL2{};
    for (std::size_t k = n; k-- > 0;) {
        const auto& [t, m] = word.tokens[k];
        suffix[k] = (t == 'S' ? SL2::S() : SL2::T(m)) * suffix[k + 1];
    }
    double w = weight2 / 2.0;
    std::complex<double> acc(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& [t, m] = word.tokens[k];
        if (t != 'S') continue;  // j(T^m, tau) = 1
        std::complex<double> z = moebius_apply(suffix[k + 1], tau0);
        acc *= std::pow(z, w);  // j(S, z) = z
    }
    acc /= std::pow(j_factor(suffix[0], tau0), w);
    // snap to a fourth root of unity
    int best = 0;
    double bestd = 1e9;
    for (int k = 0; k < 4; ++k) {
        std::complex<double> root = std::polar(1.0, M_PI * k / 2.0);
        double d = std::abs(acc - root);
        if (d < bestd) { bestd = d; best = k; }
    }
    if (bestd > 1e-6)
        throw std::logic_error("slash_cocycle_unit: ratio is not a fourth root of unity");
    return Cyclo::zeta(4, best);
}

}  // namespace thetapair

#endif
