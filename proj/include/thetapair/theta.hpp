#ifndef THETAPAIR_THETA_HPP
#define THETAPAIR_THETA_HPP

// Theta series of shifted lattices and their exact expansions at cusps.
//
// Three source types:
//  - ShiftedLattice: rank-3 coset L + nu, expansion by direct enumeration.
//  - ThetaSpec: congruence-class form sum_{x = h (N)} P(x) q^{x^T A x / 2N^2}.
//  - UnaryThetaSpec: sum_{r = h (2N/t)} r q^{t r^2}, weight 3/2.
//
// Cusp expansions use rank-1 S/T-closed families.  A diagonal coset theta is
// a product of three rank-1 weight-1/2 factors which are replayed token by
// token through an ST word; unary thetas are transported via the weight-3/2
// family g_{a,b}(w) = sum_{nu in a+Z} nu e^{pi i nu^2 w + 2 pi i b nu}.

#include "qseries.hpp"
#include "slash.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace thetapair {

inline Cyclo sqrt_pos_rational(const Rational& x)
{
    if (x <= 0) throw std::invalid_argument("sqrt_pos_rational: need x > 0");
    // sqrt(p/q) = sqrt(p q) / q
    return Cyclo(Rational(1, den(x))) * Cyclo::sqrt_int_embed(num(x) * den(x));
}

// ---------------------------------------------------------------------------
// shifted lattices

struct ShiftedLattice {
    std::array<std::array<long long, 3>, 3> gram;  // integer symmetric, Q(x) = x^T G x / 2
    std::array<Rational, 3> shift;

    void validate() const
    {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (gram[i][j] != gram[j][i])
                    throw std::invalid_argument("ShiftedLattice: gram not symmetric");
        // leading principal minors positive
        long long m1 = gram[0][0];
        long long m2 = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
        long long m3 = gram[0][0] * (gram[1][1] * gram[2][2] - gram[1][2] * gram[2][1])
                     - gram[0][1] * (gram[1][0] * gram[2][2] - gram[1][2] * gram[2][0])
                     + gram[0][2] * (gram[1][0] * gram[2][1] - gram[1][1] * gram[2][0]);
        if (m1 <= 0 || m2 <= 0 || m3 <= 0)
            throw std::invalid_argument("ShiftedLattice: gram not positive definite");
    }

    bool diagonal() const
    {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j && gram[i][j] != 0) return false;
        return true;
    }

    Rational q_value(const std::array<Rational, 3>& v) const
    {
        Rational s(0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                s += Rational(gram[i][j]) * v[i] * v[j];
        return s / 2;
    }
};

namespace detail {

// Enumerates all t in shift + Z^n with Q(t) = t^T A t / 2 < bound, A SPD.
// Uses an exact LDL split Q = sum_i D_i (t_i + sum_{j>i} L_ij t_j)^2 for the
// box bounds (outermost coordinate last), with the final membership decided
// by an exact Q evaluation.
template <typename F>
void enumerate_coset(const std::vector<std::vector<Rational>>& A,
                     const std::vector<Rational>& shift,
                     const Rational& bound, F&& visit)
{
    const std::size_t n = A.size();
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M[i][j] = A[i][j] / 2;
    std::vector<Rational> D(n);
    std::vector<std::vector<Rational>> L(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        D[i] = M[i][i];
        if (D[i] <= 0) throw std::invalid_argument("enumerate_coset: not positive definite");
        for (std::size_t j = i; j < n; ++j) L[i][j] = M[i][j] / D[i];
        for (std::size_t r = i + 1; r < n; ++r)
            for (std::size_t c = i + 1; c < n; ++c)
                M[r][c] -= D[i] * L[i][r] * L[i][c];
    }

    std::vector<Rational> t(n);
    // recurse from the innermost index upward: coordinate k ranges so that
    // D_k (t_k + sum_{j>k} L_kj t_j)^2 <= remaining budget
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t k1, Rational rem) {
        if (k1 == 0) {
            Rational q(0);
            for (std::size_t i = 0; i < n; ++i) {
                Rational u = t[i];
                for (std::size_t j = i + 1; j < n; ++j) u += L[i][j] * t[j];
                q += D[i] * u * u;
            }
            if (q < bound) visit(t, q);
            return;
        }
        std::size_t k = k1 - 1;
        Rational center(0);
        for (std::size_t j = k + 1; j < n; ++j) center += L[k][j] * t[j];
        // |t_k + center| <= sqrt(rem / D_k); widen the double estimate
        double radius = std::sqrt(std::max(0.0, to_double(rem / D[k]))) + 1e-9;
        double lo = -to_double(center) - to_double(shift[k]) - radius;
        double hi = -to_double(center) - to_double(shift[k]) + radius;
        long long xlo = (long long)std::floor(lo) - 1, xhi = (long long)std::ceil(hi) + 1;
        for (long long x = xlo; x <= xhi; ++x) {
            t[k] = shift[k] + Rational(x);
            Rational u = t[k] + center;
            Rational used = D[k] * u * u;
            if (used >= bound) continue;
            rec(k, rem - used);
        }
    };
    rec(n, bound);
}

}  // namespace detail

inline QExpansion theta_expansion_infty(const ShiftedLattice& lat, const Rational& bound)
{
    lat.validate();
    std::vector<std::vector<Rational>> A(3, std::vector<Rational>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A[i][j] = Rational(lat.gram[i][j]);
    std::vector<Rational> shift(lat.shift.begin(), lat.shift.end());
    QExpansion f(bound);
    detail::enumerate_coset(A, shift, bound,
        [&](const std::vector<Rational>&, const Rational& q) { f.add_term(q, Cyclo(1)); });
    Int w(1);
    for (const auto& [e, c] : f.terms()) { (void)c; w = lcm(w, den(e)); }
    f.set_width(Rational(w));
    return f;
}

// ---------------------------------------------------------------------------
// congruence-class (vector-valued component) form

struct ThetaSpec {
    std::vector<std::vector<long long>> A;  // n x n symmetric positive definite
    std::vector<long long> h;               // class vector, A h = 0 (mod N)
    long long N = 1;
    bool linear_p = false;                  // P = 1 or P(x) = direction . x
    std::vector<Rational> direction;

    void validate() const
    {
        std::size_t n = A.size();
        if (n == 0 || n > 3 || h.size() != n)
            throw std::invalid_argument("ThetaSpec: bad dimensions");
        for (std::size_t i = 0; i < n; ++i) {
            if (A[i].size() != n) throw std::invalid_argument("ThetaSpec: A not square");
            for (std::size_t j = 0; j < n; ++j)
                if (A[i][j] != A[j][i]) throw std::invalid_argument("ThetaSpec: A not symmetric");
        }
        if (N <= 0) throw std::invalid_argument("ThetaSpec: N must be positive");
        for (std::size_t i = 0; i < n; ++i) {
            long long s = 0;
            for (std::size_t j = 0; j < n; ++j) s += A[i][j] * h[j];
            if (s % N != 0) throw std::invalid_argument("ThetaSpec: A h != 0 mod N");
        }
        if (linear_p && direction.size() != n)
            throw std::invalid_argument("ThetaSpec: missing direction for linear P");
    }
};

// sum over x = h (mod N) of P(x) q^{x^T A x / (2 N^2)}; substituting x = N t
// with t in h/N + Z^n reduces to coset enumeration for the form t^T A t / 2.
inline QExpansion theta_expansion_infty(const ThetaSpec& spec, const Rational& bound)
{
    spec.validate();
    std::size_t n = spec.A.size();
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A[i][j] = Rational(spec.A[i][j]);
    std::vector<Rational> shift(n);
    for (std::size_t i = 0; i < n; ++i) shift[i] = Rational(spec.h[i], spec.N);
    QExpansion f(bound);
    detail::enumerate_coset(A, shift, bound, [&](const std::vector<Rational>& t, const Rational& q) {
        Cyclo coeff(1);
        if (spec.linear_p) {
            Rational p(0);
            for (std::size_t i = 0; i < n; ++i) p += spec.direction[i] * t[i] * Rational(spec.N);
            if (p == 0) return;
            coeff = Cyclo(p);
        }
        f.add_term(q, coeff);
    });
    Int w(1);
    for (const auto& [e, c] : f.terms()) { (void)c; w = lcm(w, den(e)); }
    f.set_width(Rational(w));
    return f;
}

// ---------------------------------------------------------------------------
// unary theta series

struct UnaryThetaSpec {
    long long h = 0, t = 1, N = 1;

    long long class_modulus() const { return 2 * N / t; }

    void validate() const
    {
        if (N <= 0 || t <= 0 || (2 * N) % t != 0)
            throw std::invalid_argument("UnaryThetaSpec: need t | 2N");
        for (long long p = 2; p * p <= t; ++p)
            if (t % (p * p) == 0) throw std::invalid_argument("UnaryThetaSpec: t not squarefree");
    }

    std::string label() const
    {
        return "theta[" + std::to_string(h) + "," + std::to_string(t) + "," + std::to_string(N) + "]";
    }
};

inline QExpansion theta_expansion_infty(const UnaryThetaSpec& u, const Rational& bound)
{
    u.validate();
    long long m = u.class_modulus();
    long long h0 = ((u.h % m) + m) % m;
    QExpansion f(bound, Rational(1));
    double radius = std::sqrt(std::max(0.0, to_double(bound / Rational(u.t)))) + 1;
    for (long long r = h0 - m * (long long)(radius / m + 2); ; r += m) {
        if ((double)r > radius) break;
        Rational e = Rational(u.t) * r * r;
        if (e < bound && r != 0) f.add_term(e, Cyclo(Rational(r)));
    }
    return f;
}

// q-expansion of sum_n chi(n) n q^{n^2} for the quadratic character mod 3,
// checked term by term against the unary theta (2,1,3) in q^{1/4}.
inline bool chi_theta_rewrite_check(const Rational& bound)
{
    QExpansion lhs(bound, Rational(1));
    double radius = std::sqrt(to_double(bound)) + 1;
    for (long long n = -(long long)radius - 1; n <= (long long)radius + 1; ++n) {
        int chi = (n % 3 == 0) ? 0 : ((((n % 3) + 3) % 3 == 1) ? 1 : -1);
        Rational e = Rational(n) * n;
        if (chi != 0 && e < bound) lhs.add_term(e, Cyclo(Rational(chi * n)));
    }
    UnaryThetaSpec u{2, 1, 3};
    QExpansion rhs = theta_expansion_infty(u, bound * 4).scaled_variable(Rational(1, 4));
    return lhs == rhs.truncated(bound);
}

// ---------------------------------------------------------------------------
// polygonal numbers -> shifted lattice data

// p_m(x) = ((m-2) x^2 - (m-4) x) / 2.  With D = m-2, E = m-4, g = gcd(2D, E)
// and u = (2Dx - E)/g one has a p_m(x) = scale * a u^2 - a E^2/(8D) where
// scale = g^2/(8D) and u runs over the class -E/g mod 2D/g.
struct PolygonalLattice {
    ShiftedLattice lattice;                        // primary coset
    std::vector<std::array<Rational, 3>> orbit;    // sign orbit of shifts (symmetrized theta)
    Rational scale;                                // tau multiplier
    Rational constant_shift;                       // q^{-constant_shift} prefactor
    long long class_modulus = 1;                   // 2D/g
    std::array<long long, 3> coeffs{};             // (a, b, c)
};

inline PolygonalLattice polygonal_to_lattice(long long m, long long a, long long b, long long c)
{
    if (m < 3 || a <= 0 || b <= 0 || c <= 0)
        throw std::invalid_argument("polygonal_to_lattice: need m >= 3 and positive coefficients");
    long long D = m - 2, E = m - 4;
    long long g = std::gcd(2 * D, std::abs(E));
    if (g == 0) g = 2 * D;
    long long M0 = 2 * D / g;
    long long nu0 = ((-E / g) % M0 + M0) % M0;

    PolygonalLattice out;
    out.coeffs = {a, b, c};
    out.class_modulus = M0;
    out.scale = Rational(g * g, 8 * D);
    out.constant_shift = Rational((a + b + c) * E * E, 8 * D);
    out.lattice.gram = {{{2 * a * M0 * M0, 0, 0}, {0, 2 * b * M0 * M0, 0}, {0, 0, 2 * c * M0 * M0}}};
    out.lattice.shift = {Rational(nu0, M0), Rational(nu0, M0), Rational(nu0, M0)};
    out.lattice.validate();

    std::vector<Rational> vals;
    vals.push_back(Rational(nu0, M0));
    if ((2 * nu0) % M0 != 0) vals.push_back(Rational(M0 - nu0, M0));
    for (const Rational& s1 : vals)
        for (const Rational& s2 : vals)
            for (const Rational& s3 : vals) out.orbit.push_back({s1, s2, s3});
    return out;
}

// symmetrized coset theta: sum over the sign orbit of shifts
inline QExpansion symmetrized_theta_infty(const PolygonalLattice& pl, const Rational& bound)
{
    QExpansion f(bound);
    for (const auto& s : pl.orbit) {
        ShiftedLattice lat = pl.lattice;
        lat.shift = s;
        f += theta_expansion_infty(lat, bound);
    }
    return f;
}

// generating function over x, y, z in Z (generalized polygonal numbers) of
// q^{a p_m(x) + b p_m(y) + c p_m(z)}, used as the enumeration oracle in tests
inline QExpansion polygonal_generating_function(long long m, long long a, long long b,
                                                long long c, const Rational& bound)
{
    auto pm = [&](long long x) { return Rational((m - 2) * x * x - (m - 4) * x, 2); };
    auto values = [&](long long coef) {
        std::vector<Rational> out;
        long long cap = 4 * (long long)std::sqrt(to_double(bound) / (m - 2) + 4) + 8;
        for (long long x = -cap; x <= cap; ++x) {
            Rational v = Rational(coef) * pm(x);
            if (v < bound) out.push_back(v);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto vx = values(a), vy = values(b), vz = values(c);
    QExpansion f(bound, Rational(1));
    for (const Rational& ex : vx) {
        if (ex >= bound) break;
        for (const Rational& ey : vy) {
            Rational exy = ex + ey;
            if (exy >= bound) break;
            for (const Rational& ez : vz) {
                Rational e = exy + ez;
                if (e >= bound) break;
                f.add_term(e, Cyclo(1));
            }
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// rank-1 S/T-closed theta family
//
// Basis functions  theta[mu, M, c](tau) = sum_{n = mu (M)} P(n) q^{c n^2}
// with P = 1 (weight 1/2) or P(n) = n (weight 3/2), c rational > 0.
// Closed under  |T^m  (after refining M so that c M^2 and 2 c M are integers)
// and under |S by Poisson summation:
//   theta[mu,M,c] |_{1/2} S = zeta_8^{-1} (2cM^2)^{-1/2} sum_nu e(nu mu / M) theta[nu,M,c']
//   theta[mu,M,c] |_{3/2} S = -zeta_8^{-1} M (2cM^2)^{-3/2} sum_nu e(nu mu / M) theta[nu,M,c']
// with c' = 1/(4 c M^2); slashes are principal-branch.

struct ThetaVector {
    long long modulus = 1;
    Rational quad = Rational(1);
    int weight2 = 1;  // twice the weight: 1 or 3
    std::map<long long, Cyclo> comp;
    Cyclo prefactor = Cyclo(1);

    static ThetaVector single(long long mu, long long M, const Rational& c, int weight2 = 1)
    {
        if (c <= 0 || M <= 0) throw std::invalid_argument("ThetaVector: need c > 0, M > 0");
        ThetaVector v;
        v.modulus = M;
        v.quad = c;
        v.weight2 = weight2;
        v.comp[((mu % M) + M) % M] = Cyclo(1);
        return v;
    }

    // class refinement M -> lambda M (function unchanged)
    void refine(long long lambda)
    {
        std::map<long long, Cyclo> nc;
        for (const auto& [mu, co] : comp)
            for (long long j = 0; j < lambda; ++j) nc[mu + j * modulus] = co;
        comp = std::move(nc);
        modulus *= lambda;
    }

    void transform_T(long long m)
    {
        long long lambda = 1;
        while (true) {
            Rational cm2 = quad * (lambda * modulus) * (lambda * modulus);
            Rational cm = quad * 2 * (lambda * modulus);
            if (is_integer(cm2) && is_integer(cm)) break;
            ++lambda;
            if (lambda > 1000000) throw std::logic_error("transform_T: refinement diverges");
        }
        if (lambda > 1) refine(lambda);
        std::map<long long, Cyclo> nc;
        for (const auto& [mu, co] : comp) {
            Cyclo phase = Cyclo::root_of_unity(Rational(m) * quad * mu * mu);
            nc[mu] = co * phase;
        }
        comp = std::move(nc);
    }

    void transform_S()
    {
        long long M = modulus;
        Rational twoCM2 = 2 * quad * M * M;
        Cyclo amp = Cyclo::zeta(8, -1) * sqrt_pos_rational(twoCM2).inverse();
        if (weight2 == 3)
            amp = -amp * Cyclo(Rational(M) / twoCM2);
        std::map<long long, Cyclo> nc;
        for (long long nu = 0; nu < M; ++nu) {
            Cyclo s;
            for (const auto& [mu, co] : comp) s += co * Cyclo::root_of_unity(Rational(nu * mu, M));
            if (!s.is_zero()) nc[nu] = s;
        }
        comp = std::move(nc);
        quad = Rational(1) / (4 * quad * M * M);
        prefactor *= amp;
    }

    // iterated principal slash by the word, corrected to the principal slash
    // by the word's product
    void apply_word(const STWord& word)
    {
        for (const auto& [t, m] : word.tokens) {
            if (t == 'S') transform_S();
            else transform_T(m);
        }
        prefactor *= slash_cocycle_unit(word, weight2);
    }

    QExpansion realize(const Rational& bound) const
    {
        QExpansion f(bound, Rational(den(quad)));
        if (comp.empty() || prefactor.is_zero()) return f;
        double radius = std::sqrt(std::max(0.0, to_double(bound / quad))) + 1;
        for (const auto& [mu, co] : comp) {
            Cyclo cc = prefactor * co;
            for (long long n = mu - modulus * (long long)(radius / modulus + 2);
                 (double)n <= radius; n += modulus) {
                Rational e = quad * n * n;
                if (e >= bound) continue;
                Cyclo term = (weight2 == 3) ? cc * Cyclo(Rational(n)) : cc;
                if (!term.is_zero()) f.add_term(e, term);
            }
        }
        return f;
    }
};

// ---------------------------------------------------------------------------
// diagonal coset theta at a cusp (product of three rank-1 factors)

struct DiagonalCosetTheta {
    std::array<ThetaVector, 3> factors;

    // f(tau) = Theta_{L+nu}(delta tau), optionally symmetrized over the sign
    // orbit of the shift (required for the polygonal product identities)
    static DiagonalCosetTheta make(const ShiftedLattice& lat, const Rational& delta,
                                   bool symmetrize)
    {
        lat.validate();
        if (!lat.diagonal())
            throw std::invalid_argument("DiagonalCosetTheta: gram must be diagonal");
        if (delta <= 0) throw std::invalid_argument("DiagonalCosetTheta: delta must be positive");
        DiagonalCosetTheta out;
        for (int i = 0; i < 3; ++i) {
            // (d_i/2)(x + s_i)^2 = (d_i / (2 q_i^2)) u^2,  u = q_i x + p_i
            Int p = num(lat.shift[i]), q = den(lat.shift[i]);
            long long qi = to_long(q), pi = to_long(((p % q) + q) % q);
            Rational c = Rational(lat.gram[i][i]) / (2 * qi * qi) * delta;
            ThetaVector v = ThetaVector::single(pi, qi, c, 1);
            long long neg = ((qi - pi) % qi + qi) % qi;
            if (symmetrize && neg != pi) v.comp[neg] = Cyclo(1);
            out.factors[i] = v;
        }
        return out;
    }

    QExpansion at_word(const STWord& word, const Rational& bound) const
    {
        std::array<ThetaVector, 3> f = factors;
        QExpansion prod = QExpansion::constant(Cyclo(1), bound);
        for (int i = 0; i < 3; ++i) {
            f[i].apply_word(word);
            prod *= f[i].realize(bound);
        }
        return prod;
    }

    QExpansion at_cusp(const SL2& gamma, const Rational& bound) const
    {
        return at_word(decompose_st(gamma), bound);
    }

    QExpansion at_infinity(const Rational& bound) const
    {
        return at_word(STWord{}, bound);
    }
};

// ---------------------------------------------------------------------------
// weight-3/2 family g_{a,b} and unary theta transport
//
//   g_{a,b}(w) = sum_{nu in a + Z} nu e^{pi i nu^2 w + 2 pi i b nu}
// Transformation laws:
//   g_{a,b}(w + 1) = e^{-pi i a (a+1)} g_{a, a+b+1/2}(w)
//   g_{a,b}(-1/w) = i e^{2 pi i a b} (-i w)^{3/2} g_{b,-a}(w)
// so with principal-branch slashes
//   g | T^m : prefactor e^{-pi i m a(a+1)},    b -> b + m(a + 1/2)
//   g | S   : prefactor zeta_8^{-1} e^{2 pi i a b},  (a,b) -> (b,-a).

struct GSeries {
    Rational a = Rational(0), b = Rational(0);
    Cyclo prefactor = Cyclo(1);

    void transform_T(long long m)
    {
        prefactor *= Cyclo::root_of_unity(-Rational(m) * a * (a + 1) / 2);
        b += Rational(m) * (a + Rational(1, 2));
    }

    void transform_S()
    {
        prefactor *= Cyclo::zeta(8, -1) * Cyclo::root_of_unity(a * b);
        Rational na = b, nb = -a;
        a = na;
        b = nb;
    }

    void apply_word(const STWord& word)
    {
        for (const auto& [t, m] : word.tokens) {
            if (t == 'S') transform_S();
            else transform_T(m);
        }
        prefactor *= slash_cocycle_unit(word, 3);
    }

    QExpansion realize(const Rational& bound) const
    {
        QExpansion f(bound);
        if (prefactor.is_zero()) { f.set_width(Rational(1)); return f; }
        double radius = std::sqrt(std::max(0.0, 2.0 * to_double(bound))) + 1;
        long long lo = (long long)std::floor(-radius - to_double(a)) - 1;
        long long hi = (long long)std::ceil(radius - to_double(a)) + 1;
        for (long long n = lo; n <= hi; ++n) {
            Rational nu = a + n;
            if (nu == 0) continue;
            Rational e = nu * nu / 2;
            if (e >= bound) continue;
            f.add_term(e, prefactor * Cyclo(nu) * Cyclo::root_of_unity(b * nu));
        }
        Int w(1);
        for (const auto& [e, c] : f.terms()) { (void)c; w = lcm(w, den(e)); }
        f.set_width(Rational(w));
        return f;
    }
};

// (2N/t) g_{ht/2N, 0}(8 N^2 tau / t) equals the unary theta of (h, t, N); the
// rescaled function theta(delta tau) is transported to a cusp by splitting
// the scaled action and replaying the unimodular part through the g laws.
inline QExpansion unary_theta_at_cusp(const UnaryThetaSpec& u, const Rational& delta,
                                      const SL2& gamma, const Rational& bound)
{
    u.validate();
    if (delta <= 0) throw std::invalid_argument("unary_theta_at_cusp: delta must be positive");
    Rational sigma = Rational(8 * u.N * u.N, u.t) * delta;
    ScaledSplit split = split_scaled_action(sigma, gamma);
    GSeries g;
    g.a = Rational(u.h * u.t, 2 * u.N);
    g.b = Rational(0);
    g.prefactor = Cyclo(Rational(2 * u.N, u.t));
    g.apply_word(decompose_st(split.unimodular));
    // j(gamma', w1)^{3/2} = j(gamma, tau)^{3/2} s^{-3/2} with s > 0
    g.prefactor *= sqrt_pos_rational(split.s) * Cyclo(Rational(1) / (split.s * split.s));
    // map w1 = (p tau + r)/s exponents back to tau
    QExpansion in_w = g.realize(bound * split.s / split.p);
    QExpansion out(bound);
    for (const auto& [e, c] : in_w.terms())
        out.add_term(e * split.p / split.s, c * Cyclo::root_of_unity(e * split.r / split.s));
    Int w(1);
    for (const auto& [e, c] : out.terms()) { (void)c; w = lcm(w, den(e)); }
    out.set_width(Rational(w));
    return out;
}

}  // namespace thetapair

#endif
