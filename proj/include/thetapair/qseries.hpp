#ifndef THETAPAIR_QSERIES_HPP
#define THETAPAIR_QSERIES_HPP

// Truncated q-expansions f = sum_e c_e q^e with rational (possibly negative,
// non-integral) exponents and cyclotomic coefficients.  `bound` is the
// correctness horizon: every term with exponent < bound is present and exact;
// terms at or beyond bound are dropped.

#include "cyclotomic.hpp"

#include <complex>
#include <map>

namespace thetapair {

class QExpansion {
public:
    QExpansion() : width_(1), bound_(0) {}
    explicit QExpansion(const Rational& bound, const Rational& width = Rational(1))
        : width_(width), bound_(bound)
    {
    }

    static QExpansion constant(const Cyclo& c, const Rational& bound)
    {
        QExpansion f(bound);
        f.add_term(Rational(0), c);
        return f;
    }

    const Rational& bound() const { return bound_; }
    const Rational& width() const { return width_; }
    void set_width(const Rational& w) { width_ = w; }
    const std::map<Rational, Cyclo>& terms() const { return t_; }
    bool empty() const { return t_.empty(); }

    void add_term(const Rational& e, const Cyclo& c)
    {
        if (e >= bound_ || c.is_zero()) return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    // Smallest common denominator of all exponents present.
    Int denominator() const
    {
        Int d = 1;
        for (const auto& [e, c] : t_) d = lcm(d, den(e));
        return d;
    }

    Rational min_exponent() const { return t_.empty() ? bound_ : t_.begin()->first; }

    // Exact coefficient lookup; exponents at/beyond the bound are not known.
    Cyclo coefficient(const Rational& e) const
    {
        if (e >= bound_) throw std::out_of_range("QExpansion::coefficient beyond bound");
        auto it = t_.find(e);
        return it == t_.end() ? Cyclo() : it->second;
    }

    friend QExpansion operator+(const QExpansion& a, const QExpansion& b)
    {
        QExpansion r(std::min(a.bound_, b.bound_), a.width_);
        for (const auto& [e, c] : a.t_) r.add_term(e, c);
        for (const auto& [e, c] : b.t_) r.add_term(e, c);
        return r;
    }
    friend QExpansion operator-(const QExpansion& a, const QExpansion& b) { return a + (-b); }
    QExpansion operator-() const
    {
        QExpansion r(bound_, width_);
        for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
        return r;
    }
    friend QExpansion operator*(const QExpansion& a, const QExpansion& b)
    {
        Rational bound = std::min(a.bound_ + b.min_exponent(), b.bound_ + a.min_exponent());
        QExpansion r(bound, a.width_);
        for (const auto& [ea, ca] : a.t_) {
            if (ea + b.min_exponent() >= bound) continue;
            for (const auto& [eb, cb] : b.t_) {
                if (ea + eb >= bound) break;
                r.add_term(ea + eb, ca * cb);
            }
        }
        return r;
    }
    friend QExpansion operator*(const Cyclo& s, const QExpansion& f)
    {
        QExpansion r(f.bound_, f.width_);
        if (s.is_zero()) return r;
        for (const auto& [e, c] : f.t_) r.add_term(e, s * c);
        return r;
    }
    QExpansion& operator+=(const QExpansion& o) { return *this = *this + o; }
    QExpansion& operator-=(const QExpansion& o) { return *this = *this - o; }
    QExpansion& operator*=(const QExpansion& o) { return *this = *this * o; }

    // Multiplicative inverse; leading coefficient must be a unit.  The result
    // is known below bound() - 2*min_exponent().
    QExpansion inverse() const
    {
        if (t_.empty()) throw std::domain_error("QExpansion::inverse of zero series");
        Rational e0 = min_exponent();
        Cyclo c0inv = t_.begin()->second.inverse();
        Rational rbound = bound_ - 2 * e0;
        QExpansion r(rbound, width_);
        Int D = denominator();
        Rational step(1, D);
        // r[t] solves sum_{e} f[e] r[t + e0 - e] = [t == -e0]
        for (Rational tgt = -e0; tgt < rbound; tgt += step) {
            Cyclo acc = (tgt == -e0) ? Cyclo(1) : Cyclo();
            for (auto it = std::next(t_.begin()); it != t_.end(); ++it) {
                Rational need = tgt + e0 - it->first;
                if (need < -e0) break;
                auto h = r.t_.find(need);
                if (h != r.t_.end()) acc -= it->second * h->second;
            }
            if (!acc.is_zero()) r.t_.emplace(tgt, c0inv * acc);
        }
        return r;
    }

    // Terms with exponent <= 0 (the data entering the pairing at a cusp).
    QExpansion principal_part() const
    {
        QExpansion r(bound_, width_);
        for (const auto& [e, c] : t_) {
            if (e > 0) break;
            r.t_.emplace(e, c);
        }
        return r;
    }

    QExpansion truncated(const Rational& new_bound) const
    {
        QExpansion r(std::min(new_bound, bound_), width_);
        for (const auto& [e, c] : t_) {
            if (e >= r.bound_) break;
            r.t_.emplace(e, c);
        }
        return r;
    }

    // f(tau) -> f(delta * tau): exponents and bound scale by delta > 0.
    QExpansion scaled_variable(const Rational& delta) const
    {
        QExpansion r(bound_ * delta, width_ / delta);
        for (const auto& [e, c] : t_) r.t_.emplace(e * delta, c);
        return r;
    }

    // q^a * f
    QExpansion shifted(const Rational& a) const
    {
        QExpansion r(bound_ + a, width_);
        for (const auto& [e, c] : t_) r.t_.emplace(e + a, c);
        return r;
    }

    // Numerical evaluation at tau in the upper half-plane (truncation error is
    // the caller's concern; terms are summed as given).
    std::complex<double> eval(std::complex<double> tau) const
    {
        std::complex<double> s(0.0, 0.0);
        const std::complex<double> two_pi_i(0.0, 2.0 * M_PI);
        for (const auto& [e, c] : t_) s += c.to_complex() * std::exp(two_pi_i * to_double(e) * tau);
        return s;
    }

    friend bool operator==(const QExpansion& a, const QExpansion& b)
    {
        return a.t_ == b.t_ && a.bound_ == b.bound_;
    }

private:
    Rational width_;
    Rational bound_;
    std::map<Rational, Cyclo> t_;
};

}  // namespace thetapair

#endif
