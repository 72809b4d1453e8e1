#ifndef THETAPAIR_RATIONAL_HPP
#define THETAPAIR_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace thetapair {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline Int num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rational& r) { return boost::multiprecision::denominator(r); }

// floor(a/b) for the rational r = a/b.
inline Int rfloor(const Rational& r)
{
    Int n = num(r), d = den(r);
    Int q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

inline Int rceil(const Rational& r) { return -rfloor(-r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline long to_long(const Int& n)
{
    if (n > std::numeric_limits<long>::max() || n < std::numeric_limits<long>::min())
        throw std::overflow_error("thetapair: integer too large for long");
    return static_cast<long>(n);
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

inline Rational parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Int(s));
    Int n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rational(n, d);
}

inline std::string to_string(const Rational& r)
{
    std::ostringstream os;
    os << num(r);
    if (den(r) != 1) os << '/' << den(r);
    return os.str();
}

// Largest s with s^2 | n, and the squarefree part (n = s^2 * sf).  n != 0.
inline void square_split(const Int& n_in, Int& s, Int& sf)
{
    Int n = boost::multiprecision::abs(n_in);
    s = 1;
    sf = (n_in < 0) ? Int(-1) : Int(1);
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (int i = 0; i + 1 < e; i += 2) s *= p;
        if (e % 2) sf *= p;
    }
    sf *= n;
}

}  // namespace thetapair

#endif
