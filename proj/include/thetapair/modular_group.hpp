#ifndef THETAPAIR_MODULAR_GROUP_HPP
#define THETAPAIR_MODULAR_GROUP_HPP

#include "rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace thetapair {

struct SL2 {
    long long a = 1, b = 0, c = 0, d = 1;

    friend SL2 operator*(const SL2& x, const SL2& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
    }
    SL2 inverse() const { return {d, -b, -c, a}; }
    SL2 operator-() const { return {-a, -b, -c, -d}; }
    long long det() const { return a * d - b * c; }
    friend bool operator==(const SL2& x, const SL2& y)
    {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }

    static SL2 S() { return {0, -1, 1, 0}; }
    static SL2 T(long long m = 1) { return {1, m, 0, 1}; }

    std::string to_string() const
    {
        return "[" + std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) + "," +
               std::to_string(d) + "]";
    }
};

// A word in the generators S and T; evaluates exactly to an SL2 matrix
// (including sign: -I is encoded as S^2).
struct STWord {
    // tokens: ('S', unused) or ('T', power)
    std::vector<std::pair<char, long long>> tokens;

    SL2 evaluate() const
    {
        SL2 g;
        for (const auto& [t, m] : tokens) g = g * (t == 'S' ? SL2::S() : SL2::T(m));
        return g;
    }
    std::size_t generator_count() const
    {
        std::size_t n = 0;
        for (const auto& [t, m] : tokens) n += (t == 'S') ? 1 : static_cast<std::size_t>(std::llabs(m));
        return n;
    }
    std::string to_string() const
    {
        if (tokens.empty()) return "I";
        std::string out;
        for (const auto& [t, m] : tokens) {
            if (!out.empty()) out += " ";
            if (t == 'S')
                out += "S";
            else
                out += "T^" + std::to_string(m);
        }
        return out;
    }
};

// Greedy continued-fraction style S/T decomposition.  At each step replace
// gamma by S T^r gamma with r minimizing |a + r c|; when the minimum is
// ambiguous, the representative with a + r c = c/2 is taken.
inline STWord decompose_st(SL2 g)
{
    if (g.det() != 1) throw std::invalid_argument("decompose_st: determinant must be 1");
    std::vector<long long> rs;
    while (g.c != 0) {
        long long a = g.a, c = g.c;
        // r near -a/c; examine the two integers around the real minimizer
        long long r0 = -a / c;  // truncated
        long long best = r0 - 2, bestv = a + best * c;
        for (long long r = r0 - 1; r <= r0 + 2; ++r) {
            long long v = a + r * c;
            if (std::llabs(v) < std::llabs(bestv) ||
                (std::llabs(v) == std::llabs(bestv) && 2 * v == c)) {
                best = r;
                bestv = v;
            }
        }
        rs.push_back(best);
        g = SL2{-g.c, -g.d, bestv, g.b + best * g.d};  // S T^r g
    }
    long long eps = g.a;  // +-1
    long long m = eps * g.b;
    STWord w;
    for (long long r : rs) {
        if (r != 0) w.tokens.emplace_back('T', -r);
        w.tokens.emplace_back('S', 1);
    }
    if (m != 0) w.tokens.emplace_back('T', m);
    if (eps * (rs.size() % 2 ? -1 : 1) == -1) {
        w.tokens.emplace_back('S', 1);
        w.tokens.emplace_back('S', 1);
    }
    return w;
}

// Normalized cusp a/c with gcd(a,c)=1 and c >= 0 (infinity is 1/0).
struct Cusp {
    long long a = 1, c = 0;

    static Cusp of(long long a, long long c)
    {
        if (a == 0 && c == 0) throw std::invalid_argument("Cusp: 0/0");
        long long g = std::gcd(std::llabs(a), std::llabs(c));
        a /= g;
        c /= g;
        if (c < 0 || (c == 0 && a < 0)) {
            a = -a;
            c = -c;
        }
        return {a, c};
    }
    friend bool operator==(const Cusp& x, const Cusp& y) { return x.a == y.a && x.c == y.c; }
    std::string to_string() const
    {
        if (c == 0) return "inf";
        return std::to_string(a) + "/" + std::to_string(c);
    }
};

// gamma with gamma(inf) = a/c, second column chosen with |b| minimal
// (ties resolved towards b >= 0).
inline SL2 cusp_to_matrix(const Cusp& cusp)
{
    long long a = cusp.a, c = cusp.c;
    if (c == 0) return SL2{};
    // extended gcd: a*x + c*y = 1
    long long x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = a, r1 = c;
    while (r1 != 0) {
        long long q = r0 / r1;
        std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
        std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
    }
    if (r0 != 1) { x0 = -x0; y0 = -y0; }  // gcd computed as -1
    long long d = x0, b = -y0;
    if (a != 0) {
        // b + t*a, d + t*c stays unimodular; minimize |b|
        long long t = -b / a;
        long long cand[3] = {t - 1, t, t + 1};
        long long bb = b, dd = d;
        for (long long tt : cand) {
            long long nb = b + tt * a;
            if (std::llabs(nb) < std::llabs(bb) || (std::llabs(nb) == std::llabs(bb) && nb > bb)) {
                bb = nb;
                dd = d + tt * c;
            }
        }
        b = bb;
        d = dd;
    }
    SL2 g{a, b, c, d};
    if (g.det() != 1) throw std::logic_error("cusp_to_matrix: not unimodular");
    return g;
}

struct CuspData {
    Cusp cusp;
    SL2 scaling;     // maps infinity to the cusp
    long long width = 1;
    bool regular = true;
};

// Gamma_0(M0) cap Gamma_1(M1), optionally with an upper-triangular constraint
// b = 0 mod Mb (needed for groups conjugated by rational rescalings).
class CongruenceGroup {
public:
    CongruenceGroup(long long M0, long long M1, long long Mb = 1) : M0_(M0), M1_(M1), Mb_(Mb)
    {
        if (M0 < 1 || M1 < 1 || Mb < 1) throw std::invalid_argument("CongruenceGroup: moduli >= 1");
        Mc_ = std::lcm(M0_, M1_);
    }

    long long gamma0_level() const { return M0_; }
    long long gamma1_level() const { return M1_; }
    long long b_modulus() const { return Mb_; }
    long long level() const { return std::lcm(Mc_, Mb_); }

    bool contains(const SL2& g) const
    {
        if (g.det() != 1) return false;
        auto div = [](long long x, long long m) { return x % m == 0; };
        return div(g.c, Mc_) && div(g.a - 1, M1_) && div(g.d - 1, M1_) && div(g.b, Mb_);
    }
    bool contains_minus_id() const { return contains(-SL2{}); }

    const std::vector<SL2>& cosets() const
    {
        if (cosets_.empty()) enumerate_cosets();
        return cosets_;
    }
    long long index() const { return static_cast<long long>(cosets().size()); }

    const std::vector<CuspData>& cusps() const
    {
        if (cusps_.empty()) enumerate_cusps();
        return cusps_;
    }

    // True if the cusps of g1 and g2 (images of infinity) are Gamma-equivalent.
    bool cusps_equivalent(const SL2& g1, const SL2& g2) const
    {
        long long L = level();
        SL2 g1inv = g1.inverse();
        for (long long k = 0; k < L; ++k) {
            SL2 cand = g2 * SL2::T(k) * g1inv;
            if (contains(cand) || contains(-cand)) return true;
        }
        return false;
    }

    // Least k >= 1 with g T^k g^{-1} in +-Gamma; `regular` reports whether the
    // positive representative lies in Gamma.
    std::pair<long long, bool> cusp_width(const SL2& g) const
    {
        long long L = level();
        SL2 ginv = g.inverse();
        for (long long k = 1; k <= 2 * L; ++k) {
            SL2 cand = g * SL2::T(k) * ginv;
            if (contains(cand)) return {k, true};
            if (contains(-cand)) return {k, false};
        }
        throw std::logic_error("cusp_width: none found up to 2*level");
    }

private:
    // Left-invariant bucket key for right cosets: the bottom row mod
    // lcm(M0,M1), canonicalized over the unit scalings compatible with Gamma.
    std::uint64_t coset_key(const SL2& g) const
    {
        long long m = Mc_;
        auto norm = [m](long long x) { return ((x % m) + m) % m; };
        long long c = norm(g.c), d = norm(g.d);
        std::uint64_t best = UINT64_MAX;
        for (long long u : unit_scalings_) {
            std::uint64_t key =
                static_cast<std::uint64_t>(u * c % m) * static_cast<std::uint64_t>(m) +
                static_cast<std::uint64_t>(u * d % m);
            best = std::min(best, key);
        }
        return best;
    }

    long long coset_index(const SL2& g) const
    {
        auto it = buckets_.find(coset_key(g));
        if (it == buckets_.end()) return -1;
        for (std::size_t idx : it->second)
            if (contains(g * cosets_[idx].inverse())) return static_cast<long long>(idx);
        return -1;
    }

    void enumerate_cosets() const
    {
        // units u mod Mc with u = 1 mod M1 (possible d mod Mc of group elements)
        unit_scalings_.clear();
        if (Mc_ == 1) {
            unit_scalings_.push_back(0);
        } else {
            for (long long u = 1; u < Mc_; u += M1_)
                if (std::gcd(u, Mc_) == 1) unit_scalings_.push_back(u);
        }

        cosets_.push_back(SL2{});
        buckets_[coset_key(SL2{})].push_back(0);
        std::vector<SL2> gens = {SL2::S(), SL2::T(1), SL2::T(-1)};
        for (std::size_t head = 0; head < cosets_.size(); ++head) {
            SL2 base = cosets_[head];
            for (const SL2& gen : gens) {
                SL2 next = base * gen;
                if (coset_index(next) >= 0) continue;
                buckets_[coset_key(next)].push_back(cosets_.size());
                cosets_.push_back(next);
            }
        }
    }

    // Cusp classes are the orbits of right cosets under right multiplication
    // by T and by -I.
    void enumerate_cusps() const
    {
        const auto& reps = cosets();
        std::size_t n = reps.size();
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto unite = [&](std::size_t x, std::size_t y) { parent[find(x)] = find(y); };
        for (std::size_t i = 0; i < n; ++i) {
            long long jt = coset_index(reps[i] * SL2::T(1));
            long long jm = coset_index(-reps[i]);
            if (jt < 0 || jm < 0) throw std::logic_error("enumerate_cusps: closure failure");
            unite(i, static_cast<std::size_t>(jt));
            unite(i, static_cast<std::size_t>(jm));
        }
        // pick the nicest fraction occurring in each class
        std::map<std::size_t, Cusp> best;
        auto nicer = [](const Cusp& x, const Cusp& y) {
            auto key = [](const Cusp& u) {
                return std::make_tuple(u.c, std::llabs(u.a), u.a < 0);
            };
            return key(x) < key(y);
        };
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t root = find(i);
            Cusp cusp = Cusp::of(reps[i].a, reps[i].c);
            if (cusp.c != 0) {
                // translate by T^k in Gamma (k = 0 mod Mb): a is defined mod Mb*c
                long long m = Mb_ * cusp.c;
                long long r = ((cusp.a % m) + m) % m;
                if (std::llabs(r - m) < r) r = r - m;  // ties keep the positive one
                cusp = Cusp::of(r, cusp.c);
            }
            auto it = best.find(root);
            if (it == best.end() || nicer(cusp, it->second)) best[root] = cusp;
        }
        for (const auto& [root, cusp] : best) {
            SL2 scale = cusp_to_matrix(cusp);
            auto [w, reg] = cusp_width(scale);
            cusps_.push_back(CuspData{cusp, scale, w, reg});
        }
    }

    long long M0_, M1_, Mb_, Mc_;
    mutable std::vector<SL2> cosets_;
    mutable std::vector<CuspData> cusps_;
    mutable std::vector<long long> unit_scalings_;
    mutable std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

}  // namespace thetapair

#endif
