#pragma once

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubilam/angle.hpp"

namespace cubilam {

// ---------------------------------------------------------------------------
// Cyclotomic rationals: Q[x] / Phi_q(x), with zeta = class of x = e^{2 pi i/q}
// ---------------------------------------------------------------------------

namespace detail {

using QPoly = std::vector<Rational>;  // dense, index = power

inline void qtrim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    qtrim(out);
    return out;
}

/// Exact division, requiring zero remainder.
inline QPoly qdiv_exact(QPoly num, const QPoly& den) {
    QPoly quot(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Rational(0));
    while (num.size() >= den.size() && !num.empty()) {
        Rational c = num.back() / den.back();
        std::size_t shift = num.size() - den.size();
        quot[shift] = c;
        for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
        qtrim(num);
    }
    if (!num.empty()) throw std::logic_error("cyclotomic: non-exact division");
    return quot;
}

inline QPoly cyclotomic_poly(unsigned q) {
    // Phi_q = (x^q - 1) / prod_{d | q, d < q} Phi_d
    QPoly num(q + 1, Rational(0));
    num[0] = -1;
    num[q] = 1;
    for (unsigned d = 1; d < q; ++d) {
        if (q % d != 0) continue;
        num = qdiv_exact(num, cyclotomic_poly(d));
    }
    return num;
}

}  // namespace detail

/// The field Q(zeta_q) with exact coefficient vectors in the power basis
/// 1, zeta, ..., zeta^{phi(q)-1}.
class CycloField {
public:
    explicit CycloField(unsigned q) : q_(q), phi_(detail::cyclotomic_poly(q)) {
        if (q == 0) throw std::invalid_argument("CycloField: q must be positive");
        deg_ = phi_.size() - 1;
    }

    unsigned order() const { return q_; }
    std::size_t degree() const { return deg_; }

    using Elem = std::vector<Rational>;  // size deg_

    Elem zero() const { return Elem(deg_, Rational(0)); }
    Elem one() const {
        Elem e = zero();
        e[0] = 1;
        return e;
    }
    Elem from_rational(const Rational& r) const {
        Elem e = zero();
        e[0] = r;
        return e;
    }

    /// zeta^k reduced into the power basis.
    Elem zeta_power(long k) const {
        long r = k % static_cast<long>(q_);
        if (r < 0) r += q_;
        std::vector<Rational> x(static_cast<std::size_t>(r) + 1, Rational(0));
        x.back() = 1;
        return reduce(x);
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem out = a;
        for (std::size_t i = 0; i < deg_; ++i) out[i] += b[i];
        return out;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem out = a;
        for (std::size_t i = 0; i < deg_; ++i) out[i] -= b[i];
        return out;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<Rational> prod(2 * deg_, Rational(0));
        for (std::size_t i = 0; i < deg_; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < deg_; ++j) prod[i + j] += a[i] * b[j];
        }
        return reduce(prod);
    }
    Elem scale(const Elem& a, const Rational& r) const {
        Elem out = a;
        for (auto& c : out) c *= r;
        return out;
    }

    bool is_zero(const Elem& a) const {
        for (const auto& c : a)
            if (c != 0) return false;
        return true;
    }

    std::complex<double> to_complex(const Elem& a) const {
        std::complex<double> z(0.0, 0.0);
        const double tau = 6.283185307179586476925286766559;
        for (std::size_t i = 0; i < deg_; ++i) {
            double arg = tau * static_cast<double>(i) / static_cast<double>(q_);
            z += a[i].get_d() * std::complex<double>(std::cos(arg), std::sin(arg));
        }
        return z;
    }

    std::string str(const Elem& a) const {
        std::string s;
        bool first = true;
        for (std::size_t i = 0; i < deg_; ++i) {
            if (a[i] == 0) continue;
            if (!first) s += " + ";
            s += a[i].get_str();
            if (i == 1) s += "*z";
            else if (i > 1) s += "*z^" + std::to_string(i);
            first = false;
        }
        return first ? "0" : s;
    }

private:
    unsigned q_;
    detail::QPoly phi_;
    std::size_t deg_ = 1;

    Elem reduce(std::vector<Rational> p) const {
        while (p.size() > deg_) {
            Rational c = p.back();
            p.pop_back();
            if (c == 0) continue;
            std::size_t shift = p.size() - (phi_.size() - 1);
            for (std::size_t i = 0; i + 1 < phi_.size(); ++i) p[shift + i] -= c * phi_[i];
        }
        p.resize(deg_, Rational(0));
        return p;
    }
};

// ---------------------------------------------------------------------------
// Polynomials in the parameter b over Q(zeta_q)
// ---------------------------------------------------------------------------

struct ParamPoly {
    const CycloField* field = nullptr;
    std::vector<CycloField::Elem> coeffs;  // index = power of b

    void trim() {
        while (!coeffs.empty() && field->is_zero(coeffs.back())) coeffs.pop_back();
    }
    bool is_zero() const { return coeffs.empty(); }
    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    static ParamPoly zero(const CycloField& f) { return ParamPoly{&f, {}}; }
    static ParamPoly constant(const CycloField& f, CycloField::Elem e) {
        ParamPoly p{&f, {std::move(e)}};
        p.trim();
        return p;
    }
    static ParamPoly variable(const CycloField& f) {
        return ParamPoly{&f, {f.zero(), f.one()}};
    }

    ParamPoly operator+(const ParamPoly& o) const {
        ParamPoly out{field, {}};
        out.coeffs.resize(std::max(coeffs.size(), o.coeffs.size()), field->zero());
        for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i];
        for (std::size_t i = 0; i < o.coeffs.size(); ++i)
            out.coeffs[i] = field->add(out.coeffs[i], o.coeffs[i]);
        out.trim();
        return out;
    }
    ParamPoly operator*(const ParamPoly& o) const {
        if (is_zero() || o.is_zero()) return zero(*field);
        ParamPoly out{field, {}};
        out.coeffs.assign(coeffs.size() + o.coeffs.size() - 1, field->zero());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs.size(); ++j)
                out.coeffs[i + j] =
                    field->add(out.coeffs[i + j], field->mul(coeffs[i], o.coeffs[j]));
        out.trim();
        return out;
    }
    ParamPoly scaled(const CycloField::Elem& e) const {
        ParamPoly out{field, coeffs};
        for (auto& c : out.coeffs) c = field->mul(c, e);
        out.trim();
        return out;
    }
    bool operator==(const ParamPoly& o) const {
        ParamPoly a = *this, b = o;
        a.trim();
        b.trim();
        return a.coeffs == b.coeffs;
    }

    std::complex<double> eval(std::complex<double> b) const {
        std::complex<double> v(0.0, 0.0);
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * b + field->to_complex(coeffs[i]);
        return v;
    }

    std::string str(const std::string& var = "b") const {
        if (coeffs.empty()) return "0";
        std::string s;
        bool first = true;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (field->is_zero(coeffs[i])) continue;
            if (!first) s += " + ";
            s += "(" + field->str(coeffs[i]) + ")";
            if (i == 1) s += "*" + var;
            else if (i > 1) s += "*" + var + "^" + std::to_string(i);
            first = false;
        }
        return first ? "0" : s;
    }
};

// ---------------------------------------------------------------------------
// Truncated power series in z with ParamPoly coefficients
// ---------------------------------------------------------------------------

/// Truncation of a series c_1 z + c_2 z^2 + ... + c_N z^N whose coefficients
/// are exact polynomials in the parameter b over Q(zeta_q).
struct PowerSeriesPoly {
    const CycloField* field = nullptr;
    unsigned truncation = 0;
    std::vector<ParamPoly> coeffs;  // index k holds the z^{k+1} coefficient

    const ParamPoly& coeff(unsigned power_of_z) const {
        if (power_of_z == 0 || power_of_z > truncation)
            throw std::out_of_range("PowerSeriesPoly: power out of range");
        return coeffs[power_of_z - 1];
    }

    static PowerSeriesPoly identity(const CycloField& f, unsigned n) {
        PowerSeriesPoly s{&f, n, {}};
        s.coeffs.assign(n, ParamPoly::zero(f));
        s.coeffs[0] = ParamPoly::constant(f, f.one());
        return s;
    }

    PowerSeriesPoly mul(const PowerSeriesPoly& o) const {
        PowerSeriesPoly out{field, truncation, {}};
        out.coeffs.assign(truncation, ParamPoly::zero(*field));
        for (unsigned i = 1; i <= truncation; ++i) {
            if (coeffs[i - 1].is_zero()) continue;
            for (unsigned j = 1; i + j <= truncation; ++j)
                out.coeffs[i + j - 1] = out.coeffs[i + j - 1] + coeffs[i - 1] * o.coeffs[j - 1];
        }
        return out;
    }
};

/// One application of f_b(w) = lambda w + b w^2 + w^3 to a truncated series.
inline PowerSeriesPoly apply_cubic(const PowerSeriesPoly& s, long p) {
    const CycloField& F = *s.field;
    auto lambda = F.zeta_power(p);
    PowerSeriesPoly s2 = s.mul(s);
    PowerSeriesPoly s3 = s2.mul(s);
    PowerSeriesPoly out{s.field, s.truncation, {}};
    out.coeffs.assign(s.truncation, ParamPoly::zero(F));
    ParamPoly b = ParamPoly::variable(F);
    for (unsigned k = 1; k <= s.truncation; ++k) {
        ParamPoly c = s.coeffs[k - 1].scaled(lambda);
        c = c + b * s2.coeffs[k - 1];
        c = c + s3.coeffs[k - 1];
        out.coeffs[k - 1] = c;
    }
    return out;
}

/// Truncation of the n-fold iterate of f_b with lambda = e^{2 pi i p/q}.
inline PowerSeriesPoly iterate_series(const CycloField& field, long p, unsigned n_apps,
                                      unsigned order) {
    PowerSeriesPoly s = PowerSeriesPoly::identity(field, order);
    for (unsigned i = 0; i < n_apps; ++i) s = apply_cubic(s, p);
    return s;
}

/// The q-th iterate of f_b at a p/q-parabolic fixed point, truncated at order
/// N >= q+1. The linear coefficient is exactly 1 and the z^2..z^q coefficients
/// vanish identically.
inline PowerSeriesPoly compose_series(const CycloField& field, long p, unsigned N) {
    unsigned q = field.order();
    if (N < q + 1) throw std::invalid_argument("compose_series: need N >= q+1");
    if (std::gcd(p < 0 ? -p : p, static_cast<long>(q)) != 1 && q != 1)
        throw std::invalid_argument("compose_series: p/q must be reduced");
    return iterate_series(field, p, q, N);
}

/// Roots of a complex polynomial via Durand-Kerner iteration.
inline std::vector<std::complex<double>> polynomial_roots(
    std::vector<std::complex<double>> coeffs) {
    while (!coeffs.empty() && std::abs(coeffs.back()) < 1e-14) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    std::size_t n = coeffs.size() - 1;
    for (auto& c : coeffs) c /= coeffs.back();

    std::vector<std::complex<double>> roots(n);
    std::complex<double> seed(0.4, 0.9);
    roots[0] = seed;
    for (std::size_t i = 1; i < n; ++i) roots[i] = roots[i - 1] * seed;

    auto eval = [&](std::complex<double> z) {
        std::complex<double> v(0.0, 0.0);
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * z + coeffs[i];
        return v;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            std::complex<double> delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

struct ParabolicCoefficient {
    long p;
    unsigned q;
    ParamPoly poly;                            // exact polynomial in b
    std::vector<std::complex<double>> roots;   // numeric roots
};

/// The z^{q+1} coefficient of the q-th iterate at the p/q-parabolic point:
/// a non-zero polynomial in b, plus its numerically computed roots.
inline ParabolicCoefficient tpq(const CycloField& field, long p) {
    unsigned q = field.order();
    PowerSeriesPoly s = compose_series(field, p, q + 1);

    // the multiplier of the q-th iterate is exactly 1
    ParamPoly lin = s.coeff(1);
    if (!(lin == ParamPoly::constant(field, field.one())))
        throw std::logic_error("tpq: linear coefficient is not 1");
    // intermediate coefficients vanish identically
    for (unsigned k = 2; k <= q; ++k)
        if (!s.coeff(k).is_zero())
            throw std::logic_error("tpq: z^" + std::to_string(k) + " coefficient nonzero");

    ParabolicCoefficient out;
    out.p = p;
    out.q = q;
    out.poly = s.coeff(q + 1);
    if (out.poly.is_zero()) throw std::logic_error("tpq: coefficient is the zero polynomial");

    std::vector<std::complex<double>> num;
    for (const auto& c : out.poly.coeffs) num.push_back(field.to_complex(c));
    out.roots = polynomial_roots(std::move(num));
    return out;
}

}  // namespace cubilam
