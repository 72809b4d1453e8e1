#ifndef THETAPAIR_PAIRING_HPP
#define THETAPAIR_PAIRING_HPP

/// Bruinier-Funke pairing: the Petersson product of a weight-3/2 theta series
// against a unary theta function, computed exactly as a finite sum over cusps
// pairing Fourier coefficients of f with the principal-part coefficients of a
// xi-preimage H.  Zero-ness of the result is decided in exact cyclotomic
// arithmetic.

#include "mock.hpp"

#include <functional>

namespace thetapair {

// f supplied as its exact expansion after |_{3/2} gamma (principal branch)
using CuspExpander = std::function<QExpansion(const SL2& gamma, const Rational& bound)>;

struct PairingTerm {
    Rational n;   // pairs c_f(n) with c_H^+(-n), n >= 0
    Cyclo cf;
    Cyclo ch;
};

struct CuspContribution {
    CuspData cusp;
    Cyclo contribution;   // width * sum of cf * ch over the term list
    std::vector<PairingTerm> terms;
};

struct PairingReport {
    long long index = 0;
    bool contains_minus_id = false;
    std::vector<CuspContribution> per_cusp;
    Cyclo total;
    bool is_zero = true;
    std::string label;   // which unary candidate H belongs to
};

// <f, xi(H)> = (1/[SL2(Z):Gamma]) sum_rho w_rho sum_{n>=0} c_{f,rho}(n) c_{H,rho}^+(-n).
// The cusp width enters because the expansions carry tau-exponents rather than
// exponents of the local uniformizer q^{1/w}; with it the total is invariant
// under shrinking Gamma (widths add up to the index change).
// hook for callers that cache the per-cusp mock expansions
using MockExpander =
    std::function<HarmonicExpansion(const MockSpec&, const Rational&, const CuspData&, const Rational&)>;

inline HarmonicExpansion default_mock_expander(const MockSpec& spec, const Rational& delta,
                                               const CuspData& cusp, const Rational& bound)
{
    return holo_part_at_cusp(spec, delta, cusp, bound);
}

inline PairingReport bf_pair(const CuspExpander& f, const MockSpec& H, const Rational& delta,
                             const CongruenceGroup& group,
                             const MockExpander& expand = default_mock_expander)
{
    PairingReport report;
    report.index = group.index();
    report.contains_minus_id = group.contains_minus_id();
    report.label = H.shadow().label();
    Cyclo sum(0);
    for (const CuspData& cusp : group.cusps()) {
        HarmonicExpansion h = expand(H, delta, cusp, Rational(1));
        CuspContribution out;
        out.cusp = cusp;
        Cyclo local(0);
        QExpansion principal = h.holo.principal_part();
        if (!principal.terms().empty()) {
            Rational depth = -principal.terms().begin()->first;   // deepest exponent
            QExpansion fexp = f(cusp.scaling, depth + 1);
            for (const auto& [e, ch] : principal.terms()) {
                if (ch.is_zero()) continue;
                Cyclo cf = fexp.coefficient(-e);
                local += cf * ch;
                out.terms.push_back(PairingTerm{-e, cf, ch});
            }
        }
        out.contribution = Cyclo(Rational(cusp.width)) * local;
        sum += out.contribution;
        report.per_cusp.push_back(std::move(out));
    }
    report.total = sum * Cyclo(Rational(1, report.index));
    report.is_zero = report.total.is_zero();
    return report;
}

// all (h, t) with t a squarefree divisor of 2N and h mod 2N/t, one
// representative per {h, -h} pair, h = 0 and h = -h dropped as identically zero
inline std::vector<UnaryThetaSpec> unary_candidates(long long N)
{
    if (N < 1) throw std::invalid_argument("unary_candidates: need N >= 1");
    std::vector<UnaryThetaSpec> out;
    for (long long t = 1; t <= 2 * N; ++t) {
        if ((2 * N) % t != 0) continue;
        bool squarefree = true;
        for (long long p = 2; p * p <= t; ++p)
            if (t % (p * p) == 0) squarefree = false;
        if (!squarefree) continue;
        long long m = 2 * N / t;
        for (long long h = 1; 2 * h < m; ++h) out.push_back(UnaryThetaSpec{h, t, N});
    }
    return out;
}

// group on which every mock preimage of level N lives (worst case t = 1:
// Gamma1(4N) cap Gamma0(16N^2)); the unary shadows live there too
inline CongruenceGroup pairing_group(long long N)
{
    return CongruenceGroup(16 * N * N, 4 * N);
}

// further intersected with the theta group of a diagonal shifted lattice:
// each rank-1 factor sum_x q^{(d_i/2)(x + p_i/q_i)^2} has level 2 d_i and
// shift class stable under Gamma1(q_i)
inline CongruenceGroup pairing_group(long long N, const ShiftedLattice& lat)
{
    long long M0 = 16 * N * N, M1 = 4 * N;
    for (int i = 0; i < 3; ++i) {
        M0 = std::lcm(M0, 2 * lat.gram[i][i]);
        M1 = std::lcm(M1, to_long(den(lat.shift[i])));
    }
    return CongruenceGroup(M0, M1);
}

struct OrthogonalityReport {
    std::vector<PairingReport> reports;
    bool orthogonal = true;
};

// pair f against every unary candidate of level N
inline OrthogonalityReport orthogonality_report_for(const CuspExpander& f, long long N,
                                                    const CongruenceGroup& group,
                                                    const Rational& delta = Rational(1),
                                                    const MockExpander& expand = default_mock_expander)
{
    OrthogonalityReport out;
    for (const UnaryThetaSpec& u : unary_candidates(N)) {
        PairingReport r = bf_pair(f, MockSpec{u.h, u.t, u.N}, delta, group, expand);
        out.orthogonal = out.orthogonal && r.is_zero;
        out.reports.push_back(std::move(r));
    }
    return out;
}

// end-to-end almost-universality check for a p_m(x) + b p_m(y) + c p_m(z)
inline OrthogonalityReport orthogonality_report(long long m, long long a, long long b,
                                                long long c, const CongruenceGroup* override_group = nullptr,
                                                const MockExpander& expand = default_mock_expander)
{
    PolygonalLattice pl = polygonal_to_lattice(m, a, b, c);
    long long N = pl.class_modulus;
    if (N % 2 == 0) N /= 2;   // class modulus is 2N/t-shaped; unary level N
    // the symmetrized theta at delta = 1 has the same integer exponent grid as
    // the unary candidates; the polygonal scale/shift only relabel exponents
    // and cannot affect orthogonality
    DiagonalCosetTheta theta = DiagonalCosetTheta::make(pl.lattice, Rational(1), true);
    CuspExpander f = [theta](const SL2& g, const Rational& bound) {
        return theta.at_cusp(g, bound);
    };
    if (override_group) return orthogonality_report_for(f, N, *override_group, Rational(1), expand);
    return orthogonality_report_for(f, N, pairing_group(N, pl.lattice), Rational(1), expand);
}

// ---------------------------------------------------------------------------
// numerical Petersson oracle

/// (1/[SL2(Z):Gamma]) sum_{gamma in Gamma\SL2(Z)} int_F f(gamma tau)
// conj(h(gamma tau)) Im(gamma tau)^{3/2} du dv / v^2, with F the standard
// fundamental domain truncated at v = vmax
inline double petersson_numeric(const std::function<std::complex<double>(std::complex<double>)>& f,
                                const std::function<std::complex<double>(std::complex<double>)>& h,
                                const CongruenceGroup& group, int nu = 40, double vmax = 150.0)
{
    const auto& reps = group.cosets();
    double du = 1.0 / nu;
    std::complex<double> acc(0.0);
    for (int i = 0; i < nu; ++i) {
        double u = -0.5 + (i + 0.5) * du;
        // v-grid geometric from the circle |tau| = 1 up to vmax
        double v0 = std::sqrt(std::max(0.0, 1.0 - u * u));
        int nv = 160;
        double ratio = std::pow(vmax / v0, 1.0 / nv);
        for (int j = 0; j < nv; ++j) {
            double va = v0 * std::pow(ratio, j), vb = va * ratio;
            double v = std::sqrt(va * vb), dv = vb - va;
            std::complex<double> tau(u, v);
            double cell = du * dv / (v * v);
            for (const SL2& g : reps) {
                std::complex<double> jf(double(g.c) * u, double(g.c) * v);
                jf += double(g.d);
                std::complex<double> w = (double(g.a) * tau + double(g.b)) / jf;
                acc += f(w) * std::conj(h(w)) * std::pow(w.imag(), 1.5) * cell;
            }
        }
    }
    // when -I is missing the SL2 coset translates tile the orbit space twice
    acc /= double(reps.size()) * (group.contains_minus_id() ? 1.0 : 2.0);
    return acc.real();
}

}  // namespace thetapair

#endif
