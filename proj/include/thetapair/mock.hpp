#ifndef THETAPAIR_MOCK_HPP
#define THETAPAIR_MOCK_HPP

// Appell-Lerch mu machinery: exact q-expansions of mu at torsion arguments,
// the completion mu~ = mu + (i/2) R, the weight-1/2 preimages F_{h,t,N} of
// unary theta functions, and holomorphic-part extraction at arbitrary cusps.
//
// A point a = alpha tau + beta with alpha, beta rational is carried as a
// TorsionArg.  All transformation constants are exact cyclotomic scalars; the
// eta multiplier comes from the closed Dedekind-sum formula.

#include "theta.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace thetapair {

// ---------------------------------------------------------------------------
// eta multiplier

// s(d, c) = sum_{k=1}^{c-1} ((k/c)) ((kd/c)), exact
inline Rational dedekind_sum(long long d, long long c)
{
    if (c <= 0) throw std::invalid_argument("dedekind_sum: need c > 0");
    Rational s(0);
    for (long long k = 1; k < c; ++k) {
        long long kd = ((k * d) % c + c) % c;
        if (kd == 0) continue;
        s += (Rational(k, c) - Rational(1, 2)) * (Rational(kd, c) - Rational(1, 2));
    }
    return s;
}

// v(g) with eta(g tau) = v(g) (c tau + d)^{1/2} eta(tau), principal branch
inline Cyclo eta_multiplier(const SL2& g)
{
    if (g.c > 0)
        return Cyclo::root_of_unity(
            (Rational(g.a + g.d, 12 * g.c) - dedekind_sum(g.d, g.c) - Rational(1, 4)) / 2);
    if (g.c == 0) {
        if (g.d == 1) return Cyclo::root_of_unity(Rational(g.b, 24));
        // g = -T^{-b}: eta(tau - b) with j = -1, (-1)^{1/2} = i
        return Cyclo::root_of_unity(Rational(-g.b, 24)) * Cyclo::zeta(4, -1);
    }
    // c < 0: (-(c tau + d))^{1/2} = i (c tau + d)^{1/2} on the lower half image
    return Cyclo::zeta(4) * eta_multiplier(SL2{-g.a, -g.b, -g.c, -g.d});
}

// ---------------------------------------------------------------------------
// torsion arguments and exact expansions

struct TorsionArg {
    Rational alpha = Rational(0), beta = Rational(0);  // a = alpha tau + beta

    bool lattice_point() const { return is_integer(alpha) && is_integer(beta); }
    TorsionArg operator-(const TorsionArg& o) const { return {alpha - o.alpha, beta - o.beta}; }
};

// theta(z; tau) = sum_{nu in 1/2 + Z} e^{pi i nu^2 tau + 2 pi i nu (z + 1/2)}
inline QExpansion jacobi_theta_expansion(const TorsionArg& z, const Rational& bound)
{
    if (z.lattice_point())
        throw std::invalid_argument("jacobi_theta_expansion: theta vanishes at lattice points");
    QExpansion f(bound);
    double al = to_double(z.alpha);
    double K = std::sqrt(2.0 * std::max(1.0, to_double(bound)) + al * al) + std::abs(al) + 4;
    for (long long n = -(long long)K - 2; n <= (long long)K + 2; ++n) {
        Rational nu = Rational(2 * n + 1, 2);
        Rational e = nu * nu / 2 + nu * z.alpha;
        if (e >= bound) continue;
        f.add_term(e, Cyclo::root_of_unity(nu * (z.beta + Rational(1, 2))));
    }
    Int w(1);
    for (const auto& [e, c] : f.terms()) { (void)c; w = lcm(w, den(e)); }
    f.set_width(Rational(w));
    return f;
}

// mu(a, b; tau) = (e^{pi i a} / theta(b; tau))
//                 * sum_n (-1)^n e^{pi i (n^2+n) tau + 2 pi i n b} / (1 - e^{2 pi i (n tau + a)})
// Each denominator is expanded geometrically in the direction that makes
// exponents increase (sign of n + alpha_a); the window of n values is closed
// under the quadratic lower bound (n^2+n)/2 + n alpha_b >= bound.
// `extra_window` widens the n-window; results must not depend on it.
inline QExpansion mu_expansion(const TorsionArg& a, const TorsionArg& b, const Rational& bound,
                               int extra_window = 0)
{
    if (a.lattice_point())
        throw std::invalid_argument("mu_expansion: a is a lattice point");

    // leading exponent of theta(b): minimize nu^2/2 + nu alpha_b over half-integers
    Rational e0_theta;
    {
        double target = -to_double(b.alpha);
        long long n0 = (long long)std::floor(target - 0.5);
        bool first = true;
        for (long long n = n0 - 2; n <= n0 + 2; ++n) {
            Rational nu = Rational(2 * n + 1, 2);
            Rational e = nu * nu / 2 + nu * b.alpha;
            if (first || e < e0_theta) { e0_theta = e; first = false; }
        }
    }

    Rational Bt = bound - a.alpha / 2;       // bound before the e^{pi i a} shift
    Rational Bn = Bt + e0_theta;             // numerator bound

    QExpansion numer(Bn);
    double guard = std::abs(to_double(a.alpha)) + std::abs(to_double(b.alpha)) + 2 + extra_window;
    auto base_exp = [&](long long n) { return Rational(n) * (n + 1) / 2 + Rational(n) * b.alpha; };
    auto add_n_term = [&](long long n) {
        Rational e0 = base_exp(n);
        Cyclo phase = Cyclo(((n % 2) != 0) ? -1 : 1) * Cyclo::root_of_unity(Rational(n) * b.beta);
        Rational d = Rational(n) + a.alpha;
        if (d > 0) {
            for (Rational e = e0; e < Bn; e += d) {
                long long j = to_long(Int((e - e0) / d));
                numer.add_term(e, phase * Cyclo::root_of_unity(Rational(j) * a.beta));
            }
        } else if (d < 0) {
            // 1/(1-x) = -x^{-1}/(1 - x^{-1}) = -sum_{j>=1} x^{-j}
            for (Rational e = e0 - d; e < Bn; e -= d) {
                long long j = to_long(Int((e - e0) / (-d)));
                numer.add_term(e, -phase * Cyclo::root_of_unity(Rational(-j) * a.beta));
            }
        } else {
            if (is_integer(a.beta))
                throw std::invalid_argument("mu_expansion: denominator vanishes (a in Z tau + Z)");
            numer.add_term(e0, phase * (Cyclo(1) - Cyclo::root_of_unity(a.beta)).inverse());
        }
    };
    for (long long n = 0;; ++n) {
        if ((double)n > guard && base_exp(n) >= Bn) break;
        add_n_term(n);
        if (n > 4000000) throw std::logic_error("mu_expansion: runaway window");
    }
    for (long long n = -1;; --n) {
        if ((double)(-n) > guard && base_exp(n) >= Bn) break;
        add_n_term(n);
        if (n < -4000000) throw std::logic_error("mu_expansion: runaway window");
    }

    if (numer.empty()) {
        QExpansion z(bound);
        return z;
    }
    Rational Btheta = Bt + 2 * e0_theta - numer.min_exponent();
    QExpansion theta_b = jacobi_theta_expansion(b, std::max(Btheta, Rational(e0_theta + 1)));
    QExpansion mu = numer * theta_b.inverse();
    mu = mu.shifted(a.alpha / 2);
    mu = Cyclo::root_of_unity(a.beta / 2) * mu;
    return mu.truncated(bound);
}

// g_{a,b} expansion (family defined with the theta transport machinery)
inline QExpansion g_ab_expansion(const Rational& a, const Rational& b, const Rational& bound)
{
    GSeries g;
    g.a = a;
    g.b = b;
    return g.realize(bound);
}

// ---------------------------------------------------------------------------
// numerical oracles

inline std::complex<double> eta_numeric(std::complex<double> tau)
{
    // Euler's pentagonal series: converges even when |q| is close to 1
    const std::complex<double> two_pi_i(0.0, 2.0 * M_PI);
    std::complex<double> sum(0.0);
    for (long long k = -700; k <= 700; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sign * std::exp(two_pi_i * tau * (double(k * (3 * k - 1)) / 2.0 + 1.0 / 24.0));
    }
    return sum;
}

inline std::complex<double> jacobi_theta_numeric(std::complex<double> z, std::complex<double> tau)
{
    const std::complex<double> pi_i(0.0, M_PI);
    std::complex<double> out(0.0);
    for (int n = -80; n < 80; ++n) {
        double nu = n + 0.5;
        out += std::exp(pi_i * nu * nu * tau + 2.0 * pi_i * nu * (z + 0.5));
    }
    return out;
}

namespace detail {

// raw series; accurate only while Im u, Im v stay within one period of 0,
// otherwise the sum cancels catastrophically
inline std::complex<double> mu_series(std::complex<double> u, std::complex<double> v,
                                      std::complex<double> tau)
{
    const std::complex<double> pi_i(0.0, M_PI);
    std::complex<double> sum(0.0);
    for (int n = -80; n <= 80; ++n) {
        // term = e^A / (1 - e^x); fold 1/(1 - e^x) = -e^{-x}/(1 - e^{-x})
        // when Re(x) > 0 so every exponent has nonpositive real part
        std::complex<double> x = 2.0 * pi_i * (double(n) * tau + u);
        std::complex<double> A = pi_i * u + pi_i * double(n * n + n) * tau + 2.0 * pi_i * double(n) * v;
        std::complex<double> term;
        if (x.real() > 0.0)
            term = -std::exp(A - x) / (1.0 - std::exp(-x));
        else
            term = std::exp(A) / (1.0 - std::exp(x));
        if (n % 2 != 0) term = -term;
        sum += term;
    }
    return sum / jacobi_theta_numeric(v, tau);
}

}  // namespace detail

// beta(x) = int_x^infty t^{-1/2} e^{-pi t} dt = erfc(sqrt(pi x)) for x >= 0
inline double beta_envelope(double x)
{
    if (x < 0) throw std::invalid_argument("beta_envelope: need x >= 0");
    return std::erfc(std::sqrt(M_PI * x));
}

inline double e_function(double z) { return std::erf(std::sqrt(M_PI) * z); }

// e^{x^2} erfc(x) for x >= 0
inline double erfcx(double x)
{
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    double r = 1.0, inv = 1.0 / (2.0 * x * x), term = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * inv;
        r += term;
    }
    return r / (x * std::sqrt(M_PI));
}

inline std::complex<double> r_numeric(std::complex<double> a, std::complex<double> tau,
                                      int terms = 0)
{
    const std::complex<double> pi_i(0.0, M_PI);
    double v = tau.imag();
    if (v <= 0) throw std::invalid_argument("r_numeric: need Im tau > 0");
    double c = a.imag() / v;
    int K = terms > 0 ? terms : (int)(std::abs(c) + std::sqrt(40.0 / (M_PI * v)) + 3);
    std::complex<double> out(0.0);
    for (int n = -K; n < K; ++n) {
        double nu = n + 0.5;
        double sgn = nu > 0 ? 1.0 : -1.0;
        double t = (nu + c) * std::sqrt(2.0 * v);
        double parity = (n % 2 == 0) ? 1.0 : -1.0;
        std::complex<double> z = -pi_i * nu * nu * tau - 2.0 * pi_i * double(nu) * a;
        std::complex<double> term;
        if (sgn * t > 0.0) {
            // sgn - E(t) = sgn erfc(sqrt(pi)|t|); pair the Gaussian decay of
            // erfc with the growing exponential before either over/underflows
            term = sgn * erfcx(std::sqrt(M_PI) * std::abs(t)) * std::exp(z - M_PI * t * t);
        } else {
            term = (sgn - e_function(t)) * std::exp(z);
        }
        out += parity * term;
    }
    return out;
}

inline std::complex<double> torsion_value(const TorsionArg& a, std::complex<double> tau)
{
    return to_double(a.alpha) * tau + to_double(a.beta);
}

inline std::complex<double> r_function_numeric(const TorsionArg& a, std::complex<double> tau,
                                               int terms = 0)
{
    return r_numeric(torsion_value(a, tau), tau, terms);
}

// evaluated via the elliptic law: shift u, v by integer multiples of tau into
// the strip 0 <= Im(.) < Im tau, where the defining series is well conditioned
inline std::complex<double> mutilde_numeric(std::complex<double> u, std::complex<double> v,
                                            std::complex<double> tau)
{
    const std::complex<double> pi_i(0.0, M_PI);
    double y = tau.imag();
    long long k = (long long)std::floor(u.imag() / y);
    long long m = (long long)std::floor(v.imag() / y);
    std::complex<double> u0 = u - double(k) * tau, v0 = v - double(m) * tau;
    double parity = ((k + m) % 2 == 0) ? 1.0 : -1.0;
    std::complex<double> factor =
        parity * std::exp(pi_i * double((k - m) * (k - m)) * tau
                          + 2.0 * pi_i * double(k - m) * (u0 - v0));
    return factor * (detail::mu_series(u0, v0, tau)
                     + std::complex<double>(0, 0.5) * r_numeric(u0 - v0, tau));
}

inline std::complex<double> mu_numeric(std::complex<double> u, std::complex<double> v,
                                       std::complex<double> tau)
{
    return mutilde_numeric(u, v, tau) - std::complex<double>(0, 0.5) * r_numeric(u - v, tau);
}

inline std::complex<double> mutilde_numeric(const TorsionArg& a, const TorsionArg& b,
                                            std::complex<double> tau)
{
    return mutilde_numeric(torsion_value(a, tau), torsion_value(b, tau), tau);
}

// ---------------------------------------------------------------------------
// weight-1/2 preimages of unary theta functions

// F_{h,t,N}(tau) = -e^{-2 pi i (h - N/t)^2 tau} mu~(alpha0 w, -1/2; w),
// w = 8 N^2 tau / t^2, alpha0 = (ht - N)/(2N).  In w-units the leading
// exponential is q_w^{-alpha0^2 / 2}.
struct MockSpec {
    long long h = 0, t = 1, N = 1;

    void validate() const { UnaryThetaSpec{h, t, N}.validate(); }
    Rational alpha0() const { return Rational(h * t - N, 2 * N); }
    Rational sigma() const { return Rational(8 * N * N, t * t); }
    Rational prefactor_exponent() const  // tau-units
    {
        Rational d = Rational(h) - Rational(N, t);
        return -d * d;
    }
    TorsionArg arg_a() const { return {alpha0(), Rational(0)}; }
    TorsionArg arg_b() const { return {Rational(0), Rational(-1, 2)}; }
    UnaryThetaSpec shadow() const { return {h, t, N}; }
};

inline std::complex<double> mock_f_numeric(const MockSpec& spec, const Rational& delta,
                                           std::complex<double> tau)
{
    std::complex<double> w = to_double(spec.sigma() * delta) * tau;
    std::complex<double> a = to_double(spec.alpha0()) * w;
    const std::complex<double> pi_i(0.0, M_PI);
    double k = to_double(spec.alpha0() * spec.alpha0());
    return -std::exp(-pi_i * k * w) * mutilde_numeric(a, std::complex<double>(-0.5, 0.0), w);
}

// ---------------------------------------------------------------------------
// multiprecision evaluation of the completed function
//
// F has a principal part, so near the sample points its magnitude dwarfs the
// xi image by many orders; finite differences on doubles drown in roundoff.
// These mirrors of the numeric evaluators run at 50 decimal digits, where the
// huge exponent range also removes every overflow concern.

namespace mp {

using Real = boost::multiprecision::cpp_bin_float_50;
using Complex = boost::multiprecision::cpp_complex_50;

inline Real pi() { return boost::math::constants::pi<Real>(); }

inline Complex jacobi_theta(const Complex& z, const Complex& tau)
{
    const Complex pi_i(0, pi());
    Complex out(0);
    for (int n = -40; n < 40; ++n) {
        Real nu = Real(n) + Real(1) / 2;
        out += exp(pi_i * nu * nu * tau + 2 * pi_i * nu * (z + Real(1) / 2));
    }
    return out;
}

inline Complex mu_series(const Complex& u, const Complex& v, const Complex& tau)
{
    const Complex pi_i(0, pi());
    Complex sum(0);
    for (int n = -40; n <= 40; ++n) {
        Complex x = 2 * pi_i * (Real(n) * tau + u);
        Complex A = pi_i * u + pi_i * Real(n * n + n) * tau + 2 * pi_i * Real(n) * v;
        Complex term = x.real() > 0 ? -exp(A - x) / (Real(1) - exp(-x))
                                    : exp(A) / (Real(1) - exp(x));
        if (n % 2 != 0) term = -term;
        sum += term;
    }
    return sum / jacobi_theta(v, tau);
}

inline Complex r_sum(const Complex& a, const Complex& tau)
{
    const Complex pi_i(0, pi());
    Real y = tau.imag();
    Real c = a.imag() / y;
    int K = (int)(fabs(c) + sqrt(Real(140) / (pi() * y)) + 5);
    Complex out(0);
    for (int n = -K; n < K; ++n) {
        Real nu = Real(n) + Real(1) / 2;
        Real sgn = nu > 0 ? 1 : -1;
        Real t = (nu + c) * sqrt(2 * y);
        Real parity = (n % 2 == 0) ? 1 : -1;
        Real env = sgn * boost::math::erfc(sgn * sqrt(pi()) * t);
        out += parity * env * exp(-pi_i * nu * nu * tau - 2 * pi_i * nu * a);
    }
    return out;
}

inline Complex mutilde(const Complex& u, const Complex& v, const Complex& tau)
{
    const Complex pi_i(0, pi());
    Real y = tau.imag();
    long long k = (long long)floor(u.imag() / y), m = (long long)floor(v.imag() / y);
    Complex u0 = u - Real(k) * tau, v0 = v - Real(m) * tau;
    Real parity = ((k + m) % 2 == 0) ? 1 : -1;
    Complex factor = parity * exp(pi_i * Real((k - m) * (k - m)) * tau
                                  + 2 * pi_i * Real(k - m) * (u0 - v0));
    return factor * (mu_series(u0, v0, tau) + Complex(0, Real(1) / 2) * r_sum(u0 - v0, tau));
}

inline Complex mu(const Complex& u, const Complex& v, const Complex& tau)
{
    return mutilde(u, v, tau) - Complex(0, Real(1) / 2) * r_sum(u - v, tau);
}

inline Complex mock_f(const MockSpec& spec, const Rational& delta, const Complex& tau)
{
    auto rat = [](const Rational& r) { return Real(num(r)) / Real(den(r)); };
    Complex w = rat(spec.sigma() * delta) * tau;
    Complex a = rat(spec.alpha0()) * w;
    const Complex pi_i(0, pi());
    return -exp(-pi_i * rat(spec.alpha0() * spec.alpha0()) * w)
         * mutilde(a, Complex(Real(-1) / 2, 0), w);
}

// d/dtau-bar by a 16-point circular stencil of radius `step`: the response on
// anti-holomorphic variation is exact to O(step^8) and the purely holomorphic
// part (which carries the huge principal growth) cancels to O(step^14)
template <typename G>
std::complex<double> dbar_stencil(G&& g, std::complex<double> tau, double step)
{
    const int n = 16;
    Complex acc(0);
    for (int j = 0; j < n; ++j) {
        Real ang = 2 * pi() * j / n;
        Complex omega(cos(ang), sin(ang));
        Complex z = Complex(tau.real(), tau.imag()) + Real(step) * omega;
        acc += omega * g(z);
    }
    acc /= Real(n) * Real(step);
    return {acc.real().convert_to<double>(), acc.imag().convert_to<double>()};
}

}  // namespace mp

// one nonholomorphic completion term: coeff * beta(envelope * Im tau) * q^exponent
struct NonholoTerm {
    Rational exponent;
    Cyclo coeff;
    Rational envelope;
};

struct HarmonicExpansion {
    QExpansion holo;
    std::vector<NonholoTerm> nonholo_labels;

    std::complex<double> eval(std::complex<double> tau) const
    {
        const std::complex<double> two_pi_i(0.0, 2.0 * M_PI);
        std::complex<double> out = holo.eval(tau);
        for (const auto& term : nonholo_labels) {
            // beta(x) q^e = erfcx(sqrt(pi x)) e^{-pi x + 2 pi i e tau}: pair the
            // decay of beta with the growth of q^e before either saturates
            double x = to_double(term.envelope) * tau.imag();
            out += term.coeff.to_complex() * erfcx(std::sqrt(M_PI * x))
                 * std::exp(-M_PI * x + two_pi_i * to_double(term.exponent) * tau);
        }
        return out;
    }
};

// (F_{h,t,N}(delta .)) |_{1/2} gamma as a harmonic expansion in tau.
//
// The scaled action sigma*gamma is split as gamma' (p tau + r)/s; in the
// variable w1 the completed mu transforms by
//   mu~(A, B; gamma' w1) = v(gamma')^{-3} (c' w1 + d')^{1/2}
//                          e^{-pi i c' (u - v)^2 / (c' w1 + d')} mu~(u, v; w1)
// with u = alpha0 (a' w1 + b'), v = -(c' w1 + d')/2.  The total exponential
// is exactly linear in w1 (checked by exact polynomial division), and the
// holomorphic part is the mu expansion plus the finitely many sign-boundary
// terms of (i/2) R(u - v; w1).
inline HarmonicExpansion mock_holo_at_matrix(const MockSpec& spec, const Rational& delta,
                                             const SL2& gamma, const Rational& bound,
                                             int extra_window = 0)
{
    spec.validate();
    if (delta <= 0) throw std::invalid_argument("mock_holo_at_matrix: delta must be positive");
    Rational a0 = spec.alpha0();
    ScaledSplit sp = split_scaled_action(spec.sigma() * delta, gamma);
    const SL2& G = sp.unimodular;

    TorsionArg u{a0 * G.a, a0 * G.b};
    TorsionArg v{Rational(-G.c, 2), Rational(-G.d, 2)};
    Rational xi = u.alpha - v.alpha, eta = u.beta - v.beta;

    // exponent polynomial -(a0^2/2)(a' w + b') - (c'/2)(xi w + eta)^2,
    // divided exactly by (c' w + d')
    Rational q2 = -Rational(G.c) / 2 * xi * xi;
    Rational q1 = -a0 * a0 / 2 * G.a - Rational(G.c) * xi * eta;
    Rational q0 = -a0 * a0 / 2 * G.b - Rational(G.c) / 2 * eta * eta;
    Rational A, B;
    if (G.c != 0) {
        A = q2 / G.c;
        B = (q1 - A * G.d) / G.c;
        if (q0 != B * G.d)
            throw std::logic_error("mock_holo_at_matrix: exponent is not linear");
    } else {
        A = q1 / G.d;
        B = q0 / G.d;
    }

    // overall constant: -v(gamma')^{-3} s^{-1/2} e^{2 pi i B}
    Cyclo C = -(eta_multiplier(G).pow(3)).inverse() * sqrt_pos_rational(Rational(1) / sp.s)
            * Cyclo::root_of_unity(B);

    Rational bound_w = bound * sp.s / sp.p;
    QExpansion holo_w = mu_expansion(u, v, bound_w - A, extra_window).shifted(A);

    // sign-boundary leakage of (i/2) R: nu between 0 and -xi
    QExpansion leak(bound_w);
    std::vector<NonholoTerm> tail;
    // a tail term decays like q^{e_eff} with e_eff = (p/s)(A + (nu+xi)^2/2 + xi^2/2),
    // so nu must run until e_eff clears the requested bound
    double xid = to_double(xi);
    long long cap = (long long)(std::abs(xid)
                                + std::sqrt(2.0 * (std::abs(to_double(bound_w))
                                                   + std::abs(to_double(A))) + 4.0) + 6);
    for (long long n = -cap; n < cap; ++n) {
        Rational nu = Rational(2 * n + 1, 2);
        int sgn_nu = nu > 0 ? 1 : -1;
        Rational nupxi = nu + xi;
        int sgn_shift = nupxi > 0 ? 1 : (nupxi < 0 ? -1 : 0);
        Rational e_w = A - nu * nu / 2 - nu * xi;
        Cyclo phase = Cyclo((n % 2 == 0) ? 1 : -1) * Cyclo::root_of_unity(-nu * eta);
        // sgn(nu) - E(t) = (sgn(nu) - sgn_shift) + sgn_shift * (1 - |E(t)|)
        //                = (holomorphic leak)   + sgn_shift * beta(t^2)
        if (sgn_nu != sgn_shift && e_w < bound_w)
            leak.add_term(e_w, Cyclo::zeta(4) * Cyclo(Rational(sgn_nu - sgn_shift, 2)) * phase);
        if (sgn_shift != 0) {
            NonholoTerm term;
            term.exponent = e_w * sp.p / sp.s;
            term.envelope = 2 * (sp.p / sp.s) * nupxi * nupxi;
            term.coeff = C * Cyclo::zeta(4) * Cyclo(Rational(sgn_shift, 2)) * phase
                       * Cyclo::root_of_unity(e_w * sp.r / sp.s);
            tail.push_back(term);
        }
    }

    QExpansion total_w = C * (holo_w + leak);
    HarmonicExpansion out;
    out.holo = QExpansion(bound);
    for (const auto& [e, c] : total_w.terms())
        out.holo.add_term(e * sp.p / sp.s, c * Cyclo::root_of_unity(e * sp.r / sp.s));
    Int wdt(1);
    for (const auto& [e, c] : out.holo.terms()) { (void)c; wdt = lcm(wdt, den(e)); }
    out.holo.set_width(Rational(wdt));
    out.nonholo_labels = std::move(tail);
    return out;
}

inline HarmonicExpansion holo_part_at_cusp(const MockSpec& spec, const Rational& delta,
                                           const STWord& word, const Rational& bound)
{
    return mock_holo_at_matrix(spec, delta, word.evaluate(), bound);
}

inline HarmonicExpansion holo_part_at_cusp(const MockSpec& spec, const Rational& delta,
                                           const CuspData& cusp, const Rational& bound)
{
    if (!cusp.regular)
        throw std::domain_error("holo_part_at_cusp: irregular cusp rejected");
    return mock_holo_at_matrix(spec, delta, cusp.scaling, bound);
}

// ---------------------------------------------------------------------------
// xi-image validation

// xi_{1/2} G = 2 i v^{1/2} conj(dG/dtaubar) by central differences
inline std::complex<double> xi_image_numeric(const MockSpec& spec, const Rational& delta,
                                             std::complex<double> tau, double step)
{
    auto G = [&](const mp::Complex& z) { return mp::mock_f(spec, delta, z); };
    std::complex<double> dtaubar = mp::dbar_stencil(G, tau, step);
    return 2.0 * std::complex<double>(0, 1) * std::sqrt(tau.imag()) * std::conj(dtaubar);
}

// max over samples of | xi(F(delta .)) - scale * theta_shadow(delta .) |
inline double xi_check(const MockSpec& spec, const std::vector<std::complex<double>>& taus,
                       double step = 1e-4, const Rational& delta = Rational(1),
                       double scale = 1.0)
{
    spec.validate();
    QExpansion shadow = theta_expansion_infty(spec.shadow(), Rational(400));
    double worst = 0.0;
    for (auto tau : taus) {
        std::complex<double> lhs = xi_image_numeric(spec, delta, tau, step);
        std::complex<double> rhs = scale * shadow.eval(to_double(delta) * tau);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace thetapair

#endif
