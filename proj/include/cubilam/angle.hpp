#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubilam {

using Rational = mpq_class;

/// Exact rational angle on the circle R/Z, always stored reduced in [0,1).
///
/// Equality is exact rational equality; no floating-point representative is
/// authoritative anywhere in the combinatorial layer.
class Angle {
public:
    Angle() : v_(0) {}

    explicit Angle(const Rational& v) : v_(v) { normalize(); }

    Angle(long num, long den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Angle: zero denominator");
        normalize();
    }

    static Angle parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) {
                mpz_class n(text);
                return Angle(Rational(n));
            }
            mpz_class n(text.substr(0, slash));
            mpz_class d(text.substr(slash + 1));
            if (d == 0) throw std::invalid_argument("zero denominator");
            return Angle(Rational(n, d));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Angle: cannot parse '" + text + "'");
        }
    }

    const Rational& value() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    /// Serializes as reduced "p/q", or "0" for the zero angle.
    std::string str() const {
        if (v_ == 0) return "0";
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    double to_double() const { return v_.get_d(); }

    bool operator==(const Angle& o) const { return v_ == o.v_; }
    bool operator!=(const Angle& o) const { return v_ != o.v_; }
    bool operator<(const Angle& o) const { return v_ < o.v_; }
    bool operator<=(const Angle& o) const { return v_ <= o.v_; }
    bool operator>(const Angle& o) const { return v_ > o.v_; }
    bool operator>=(const Angle& o) const { return v_ >= o.v_; }

    /// Sum mod 1.
    Angle operator+(const Angle& o) const { return Angle(v_ + o.v_); }
    /// Difference mod 1.
    Angle operator-(const Angle& o) const { return Angle(v_ - o.v_); }

private:
    Rational v_;

    void normalize() {
        v_.canonicalize();
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        v_ -= Rational(fl);
        v_.canonicalize();
    }
};

inline void require_degree(int d) {
    if (d != 2 && d != 3) throw std::domain_error("degree must be 2 or 3");
}

/// The angle d-tupling map t -> d*t mod 1 (z -> z^d on the unit circle).
inline Angle sigma(int d, const Angle& t) {
    require_degree(d);
    return Angle(Rational(d) * t.value());
}

/// n-fold iterate of sigma, exact.
inline Angle sigma_iter(int d, const Angle& t, unsigned long n) {
    require_degree(d);
    mpz_class dn;
    mpz_ui_pow_ui(dn.get_mpz_t(), static_cast<unsigned long>(d), n);
    return Angle(Rational(dn) * t.value());
}

/// Exact (pre)periodic orbit data of a rational angle under sigma_d.
struct OrbitInfo {
    unsigned long preperiod = 0;
    unsigned long period = 1;
    std::vector<Angle> orbit;  // preperiod + period distinct entries
};

inline OrbitInfo orbit_info(int d, const Angle& t) {
    require_degree(d);
    OrbitInfo info;
    std::map<Angle, unsigned long> seen;
    Angle cur = t;
    for (;;) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            info.preperiod = it->second;
            info.period = info.orbit.size() - it->second;
            return info;
        }
        seen.emplace(cur, info.orbit.size());
        info.orbit.push_back(cur);
        cur = sigma(d, cur);
    }
}

/// Length of the positively-oriented arc from a to b; exact rational in (0,1).
inline Rational arc_length(const Angle& a, const Angle& b) {
    if (a == b) throw std::invalid_argument("arc_length: endpoints coincide");
    Rational diff = b.value() - a.value();
    if (diff < 0) diff += 1;
    return diff;
}

/// Arc length that tolerates equal endpoints (returns 0); used by winding sums
/// where a chord may collapse.
inline Rational arc_length_or_zero(const Angle& a, const Angle& b) {
    if (a == b) return Rational(0);
    return arc_length(a, b);
}

/// True iff x lies strictly inside the open arc from lo to hi (positively
/// oriented).
inline bool in_open_arc(const Angle& x, const Angle& lo, const Angle& hi) {
    if (lo == hi) return false;
    if (x == lo || x == hi) return false;
    return arc_length(lo, x) < arc_length(lo, hi);
}

/// True iff x lies in the closed arc [lo, hi] (positively oriented).
inline bool in_closed_arc(const Angle& x, const Angle& lo, const Angle& hi) {
    if (x == lo || x == hi) return true;
    if (lo == hi) return false;
    return arc_length(lo, x) < arc_length(lo, hi);
}

/// The d preimages of t under sigma_d, in increasing order.
inline std::vector<Angle> sigma_preimages(int d, const Angle& t) {
    require_degree(d);
    std::vector<Angle> out;
    out.reserve(d);
    for (int k = 0; k < d; ++k)
        out.push_back(Angle((t.value() + k) / d));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cubilam
