#ifndef THETAPAIR_CYCLOTOMIC_HPP
#define THETAPAIR_CYCLOTOMIC_HPP

// Exact arithmetic in cyclotomic fields Q(zeta_M).  Elements are kept in a
// normal form: power-basis representation mod Phi_M with M the *minimal*
// conductor (so rationals always end up at M = 1, and zero tests are exact).

#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace thetapair {

namespace detail {

inline std::vector<long> prime_factors(long n)
{
    std::vector<long> ps;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline long euler_phi(long n)
{
    long r = n;
    for (long p : prime_factors(n)) r = r / p * (p - 1);
    return r;
}

// Exact division of integer polynomials, remainder must vanish.
inline std::vector<Int> poly_divide_exact(std::vector<Int> a, const std::vector<Int>& b)
{
    std::vector<Int> q(a.size() - b.size() + 1, Int(0));
    for (long i = static_cast<long>(q.size()) - 1; i >= 0; --i) {
        Int f = a[i + b.size() - 1] / b.back();
        q[i] = f;
        if (f == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= f * b[j];
    }
    for (const Int& r : a)
        if (r != 0) throw std::logic_error("poly_divide_exact: nonzero remainder");
    return q;
}

inline const std::vector<Int>& cyclotomic_polynomial(long n)
{
    static std::map<long, std::vector<Int>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<Int> poly(n + 1, Int(0));  // x^n - 1
    poly[0] = -1;
    poly[n] = 1;
    for (long d = 1; d < n; ++d)
        if (n % d == 0) poly = poly_divide_exact(std::move(poly), cyclotomic_polynomial(d));
    return cache.emplace(n, std::move(poly)).first->second;
}

// Rows of x^j mod Phi_M (integer coefficients) for phi(M) <= j < M.
inline const std::vector<std::vector<Int>>& power_reduction_rows(long M)
{
    static std::map<long, std::vector<std::vector<Int>>> cache;
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    const auto& phiM = cyclotomic_polynomial(M);
    long deg = static_cast<long>(phiM.size()) - 1;
    std::vector<std::vector<Int>> rows;
    if (M > deg) {
        std::vector<Int> row(deg);
        for (long k = 0; k < deg; ++k) row[k] = -phiM[k];  // x^deg mod Phi
        rows.push_back(row);
        for (long j = deg + 1; j < M; ++j) {
            std::vector<Int> next(deg, Int(0));
            Int top = row[deg - 1];
            for (long k = deg - 1; k >= 1; --k) next[k] = row[k - 1];
            if (top != 0)
                for (long k = 0; k < deg; ++k) next[k] += top * rows[0][k];
            rows.push_back(next);
            row = std::move(next);
        }
    }
    return cache.emplace(M, std::move(rows)).first->second;
}

}  // namespace detail

class Cyclo {
public:
    Cyclo() : M_(1) {}
    Cyclo(const Rational& r) : M_(1)
    {
        if (r != 0) c_[0] = r;
    }
    Cyclo(long n) : Cyclo(Rational(n)) {}
    Cyclo(int n) : Cyclo(Rational(n)) {}

    static Cyclo zeta(long M, long k = 1)
    {
        Cyclo z;
        z.M_ = M;
        z.c_[((k % M) + M) % M] = 1;
        z.normalize();
        return z;
    }

    // exp(2*pi*i * r) for rational r
    static Cyclo root_of_unity(const Rational& r)
    {
        Rational f = r - Rational(rfloor(r));
        return zeta(to_long(den(f)), to_long(num(f)));
    }

    long conductor() const { return M_; }
    bool is_zero() const { return c_.empty(); }
    bool is_rational() const { return M_ == 1; }
    Rational rational_value() const
    {
        if (M_ != 1) throw std::domain_error("Cyclo: not rational");
        return c_.empty() ? Rational(0) : c_.begin()->second;
    }
    const std::map<long, Rational>& coefficients() const { return c_; }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b)
    {
        long M = std::lcm(a.M_, b.M_);
        Cyclo r;
        r.M_ = M;
        for (const auto& [k, v] : a.c_) r.c_[k * (M / a.M_)] += v;
        for (const auto& [k, v] : b.c_) r.c_[k * (M / b.M_)] += v;
        r.normalize();
        return r;
    }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }
    Cyclo operator-() const
    {
        Cyclo r(*this);
        for (auto& [k, v] : r.c_) v = -v;
        return r;
    }
    friend Cyclo operator*(const Cyclo& a, const Cyclo& b)
    {
        long M = std::lcm(a.M_, b.M_);
        Cyclo r;
        r.M_ = M;
        long sa = M / a.M_, sb = M / b.M_;
        for (const auto& [ka, va] : a.c_)
            for (const auto& [kb, vb] : b.c_) r.c_[(ka * sa + kb * sb) % M] += va * vb;
        r.normalize();
        return r;
    }
    Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
    Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
    Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }

    friend bool operator==(const Cyclo& a, const Cyclo& b)
    {
        return a.M_ == b.M_ && a.c_ == b.c_;
    }
    friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

    // Multiplicative inverse via the extended Euclidean algorithm on
    // (polynomial rep, Phi_M) in Q[x].
    Cyclo inverse() const
    {
        if (is_zero()) throw std::domain_error("Cyclo: division by zero");
        if (M_ == 1) {
            Cyclo r;
            r.c_[0] = Rational(1) / c_.begin()->second;
            return r;
        }
        long phi = detail::euler_phi(M_);
        std::vector<Rational> a(phi + 1, Rational(0));
        for (const auto& [k, v] : c_) a[k] = v;
        const auto& phiM = detail::cyclotomic_polynomial(M_);
        std::vector<Rational> b(phiM.size());
        for (std::size_t i = 0; i < phiM.size(); ++i) b[i] = Rational(phiM[i]);
        // xgcd: track u with u*a = r (mod Phi_M)
        auto deg = [](const std::vector<Rational>& p) {
            long d = static_cast<long>(p.size()) - 1;
            while (d >= 0 && p[d] == 0) --d;
            return d;
        };
        std::vector<Rational> r0 = b, r1 = a, u0{Rational(0)}, u1{Rational(1)};
        while (deg(r1) > 0) {
            long d0 = deg(r0), d1 = deg(r1);
            // r0 -= (lead(r0)/lead(r1)) x^(d0-d1) r1, repeated: full division step
            std::vector<Rational> q(d0 - d1 + 1, Rational(0));
            std::vector<Rational> rem = r0;
            for (long i = d0 - d1; i >= 0; --i) {
                Rational f = rem[i + d1] / r1[d1];
                q[i] = f;
                if (f == 0) continue;
                for (long j = 0; j <= d1; ++j) rem[i + j] -= f * r1[j];
            }
            // u_new = u0 - q*u1
            std::vector<Rational> un(std::max(u0.size(), q.size() + u1.size()), Rational(0));
            for (std::size_t i = 0; i < u0.size(); ++i) un[i] = u0[i];
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = 0; j < u1.size(); ++j) un[i + j] -= q[i] * u1[j];
            r0 = std::move(r1);
            r1 = std::move(rem);
            u0 = std::move(u1);
            u1 = std::move(un);
        }
        long d1 = deg(r1);
        if (d1 != 0) throw std::logic_error("Cyclo::inverse: gcd not constant");
        Rational g = r1[0];
        Cyclo res;
        res.M_ = M_;
        for (std::size_t k = 0; k < u1.size(); ++k)
            if (u1[k] != 0) res.c_[static_cast<long>(k)] = u1[k] / g;
        res.normalize();
        return res;
    }

    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }

    Cyclo pow(long e) const
    {
        if (e < 0) return inverse().pow(-e);
        Cyclo r(Rational(1)), base(*this);
        while (e) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    // complex conjugate (zeta -> zeta^{-1})
    Cyclo conj() const
    {
        Cyclo r;
        r.M_ = M_;
        for (const auto& [k, v] : c_) r.c_[((M_ - k) % M_ + M_) % M_] += v;
        r.normalize();
        return r;
    }

    std::complex<double> to_complex() const
    {
        std::complex<double> s(0.0, 0.0);
        for (const auto& [k, v] : c_) {
            double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(M_);
            s += to_double(v) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return s;
    }

    // Exact square root of an integer: sqrt(n) for n > 0 is the positive real
    // root, sqrt(-n) = i*sqrt(n).  Realized through quadratic Gauss sums.
    static Cyclo sqrt_int_embed(const Int& n)
    {
        if (n == 0) return Cyclo();
        Int s, sf;
        square_split(n, s, sf);
        Cyclo r = Cyclo(Rational(s));
        if (sf < 0) {
            r *= zeta(4);
            sf = -sf;
        }
        for (long p : detail::prime_factors(to_long(sf))) r *= sqrt_prime(p);
        return r;
    }

    std::string to_string() const;
    static Cyclo parse(const std::string& s);

private:
    static Cyclo sqrt_prime(long p)
    {
        if (p == 2) return zeta(8) - zeta(8, 3);
        // Gauss sum g = sum_a (a|p) zeta_p^a equals sqrt(p) or i*sqrt(p).
        Cyclo g;
        g.M_ = p;
        std::vector<int> legendre(p, -1);
        legendre[0] = 0;
        for (long a = 1; a < p; ++a) legendre[(a * a) % p] = 1;
        for (long a = 1; a < p; ++a) g.c_[a] = Rational(legendre[a]);
        g.normalize();
        if (p % 4 == 3) g *= zeta(4, 3);  // divide by i
        return g;
    }

    void normalize()
    {
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->second == 0)
                it = c_.erase(it);
            else
                ++it;
        }
        if (c_.empty()) {
            M_ = 1;
            return;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            changed |= reduce_even();
            changed |= reduce_exponent_gcd();
            changed |= reduce_power_basis();
            if (c_.empty()) {
                M_ = 1;
                return;
            }
            for (long p : detail::prime_factors(M_)) {
                if (descend_prime(p)) {
                    changed = true;
                    break;
                }
            }
        }
    }

    // zeta_{2m}^k = (-1)^k zeta_m^{k(m+1)/2} for odd m
    bool reduce_even()
    {
        if (M_ % 2 != 0 || M_ % 4 == 0) return false;
        long m = M_ / 2;
        if (m == 1) {  // conductor 2: zeta_2 = -1
            std::map<long, Rational> nc;
            for (const auto& [k, v] : c_) nc[0] += (k % 2 ? -v : v);
            c_ = std::move(nc);
            M_ = 1;
            strip_zeros();
            return true;
        }
        std::map<long, Rational> nc;
        long half = (m + 1) / 2;
        for (const auto& [k, v] : c_) {
            long e = (k % m) * half % m;
            nc[e] += (k % 2 ? -v : v);
        }
        c_ = std::move(nc);
        M_ = m;
        strip_zeros();
        return true;
    }

    bool reduce_exponent_gcd()
    {
        if (M_ == 1 || c_.empty()) return false;
        long g = M_;
        for (const auto& [k, v] : c_) g = std::gcd(g, k);
        if (g == 1) return false;
        std::map<long, Rational> nc;
        for (const auto& [k, v] : c_) nc[k / g] = v;
        c_ = std::move(nc);
        M_ /= g;
        return true;
    }

    bool reduce_power_basis()
    {
        if (M_ == 1 || c_.empty()) return false;
        long phi = detail::euler_phi(M_);
        bool need = false;
        for (const auto& [k, v] : c_)
            if (k >= phi) {
                need = true;
                break;
            }
        if (!need) return false;
        const auto& rows = detail::power_reduction_rows(M_);
        std::vector<Rational> acc(phi, Rational(0));
        for (const auto& [k, v] : c_) {
            if (k < phi)
                acc[k] += v;
            else
                for (long j = 0; j < phi; ++j)
                    if (rows[k - phi][j] != 0) acc[j] += v * Rational(rows[k - phi][j]);
        }
        c_.clear();
        for (long j = 0; j < phi; ++j)
            if (acc[j] != 0) c_[j] = acc[j];
        return true;
    }

    // Try writing the element in Q(zeta_{M/p}); assumes power-basis form.
    bool descend_prime(long p)
    {
        if (M_ % p != 0 || M_ == p) return false;
        long d = M_ / p;
        if ((M_ / p) % p == 0) {
            // p^2 | M: basis zeta_M^i (0 <= i < p) over Q(zeta_d), zeta_M^p = zeta_d.
            std::map<long, Rational> comp0;
            for (const auto& [k, v] : c_) {
                if (k % p != 0) return false;
                comp0[k / p] += v;
            }
            c_ = std::move(comp0);
            M_ = d;
            reduce_power_basis();
            strip_zeros();
            return true;
        }
        // p || M (p odd): zeta_M^k = zeta_p^{ku mod p} zeta_d^{kv mod d} with the
        // CRT weights u,v; {zeta_p^i : i < p-1} is a Q(zeta_d)-basis.
        long u = 0, v = 0;
        for (long t = 1; t < p; ++t)
            if ((t * (d % p)) % p == 1) {
                u = t;
                break;
            }
        for (long t = 1; t < d; ++t)
            if ((t * (p % d)) % d == 1) {
                v = t;
                break;
            }
        std::vector<std::map<long, Rational>> comp(p - 1);
        for (const auto& [k, v0] : c_) {
            long i = (k % p) * u % p;
            long j = (k % d) * v % d;
            if (i == p - 1) {
                for (long t = 0; t < p - 1; ++t) comp[t][j] -= v0;
            } else {
                comp[i][j] += v0;
            }
        }
        auto reduce_at_d = [&](std::map<long, Rational>& m) {
            Cyclo tmp;
            tmp.M_ = d;
            tmp.c_ = std::move(m);
            tmp.strip_zeros();
            tmp.reduce_power_basis();
            tmp.strip_zeros();
            m = std::move(tmp.c_);
        };
        for (long i = 1; i < p - 1; ++i) {
            reduce_at_d(comp[i]);
            if (!comp[i].empty()) return false;
        }
        reduce_at_d(comp[0]);
        c_ = std::move(comp[0]);
        M_ = d;
        return true;
    }

    void strip_zeros()
    {
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->second == 0)
                it = c_.erase(it);
            else
                ++it;
        }
    }

    long M_;
    std::map<long, Rational> c_;  // exponent -> rational coefficient
};

inline std::string Cyclo::to_string() const
{
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, v] : c_) {
        Rational a = v;
        if (first) {
            if (a < 0) {
                out += "-";
                a = -a;
            }
        } else {
            out += (a < 0) ? " - " : " + ";
            if (a < 0) a = -a;
        }
        first = false;
        bool unit_coeff = (a == 1) && k != 0;
        if (!unit_coeff) out += thetapair::to_string(a);
        if (k != 0) {
            if (!unit_coeff) out += "*";
            out += "z{" + std::to_string(M_) + "}";
            if (k != 1) out += "^" + std::to_string(k);
        }
    }
    return out;
}

inline Cyclo Cyclo::parse(const std::string& s)
{
    Cyclo total;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    skip_ws();
    if (i == s.size()) throw std::invalid_argument("Cyclo::parse: empty input");
    bool first = true;
    while (i < s.size()) {
        skip_ws();
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = (s[i] == '-') ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw std::invalid_argument("Cyclo::parse: expected +/- near '" + s.substr(i) + "'");
        }
        first = false;
        Rational coeff(1);
        bool have_coeff = false;
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])))) {
            std::size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
            coeff = parse_rational(s.substr(i, j - i));
            i = j;
            have_coeff = true;
            skip_ws();
            if (i < s.size() && s[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        Cyclo term(coeff * sign);
        if (i < s.size() && s[i] == 'z') {
            ++i;
            if (i >= s.size() || s[i] != '{')
                throw std::invalid_argument("Cyclo::parse: expected '{' after z");
            std::size_t close = s.find('}', i);
            if (close == std::string::npos) throw std::invalid_argument("Cyclo::parse: missing '}'");
            long M = std::stol(s.substr(i + 1, close - i - 1));
            i = close + 1;
            long k = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t j = i;
                if (j < s.size() && s[j] == '-') ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                k = std::stol(s.substr(i, j - i));
                i = j;
            }
            term = term * zeta(M, k);
        } else if (!have_coeff) {
            throw std::invalid_argument("Cyclo::parse: expected term near '" + s.substr(i) + "'");
        }
        total += term;
        skip_ws();
    }
    return total;
}

}  // namespace thetapair

#endif
