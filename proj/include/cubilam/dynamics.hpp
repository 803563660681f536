#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cubilam/angle.hpp"
#include "cubilam/gaps.hpp"
#include "cubilam/series.hpp"

namespace cubilam {

using Real = long double;
using Cplx = std::complex<Real>;

inline constexpr Real kTau = 6.283185307179586476925286766559L;

/// The cubic normal form f(z) = lambda z + b z^2 + z^3.
struct CubicMap {
    Cplx lambda{0.0L, 0.0L};
    Cplx b{0.0L, 0.0L};

    Cplx eval(Cplx z) const { return ((z + b) * z + lambda) * z; }
    Cplx deriv(Cplx z) const { return (Real(3) * z + Real(2) * b) * z + lambda; }

    /// Escape radius dominating the filled Julia set of the normal form.
    Real escape_radius() const {
        Real r = 2 * (1 + std::abs(lambda) + std::abs(b));
        return r < 10 ? Real(10) : r;
    }

    /// The two critical points, roots of 3 z^2 + 2 b z + lambda.
    std::pair<Cplx, Cplx> critical_points() const {
        Cplx disc = std::sqrt(b * b - Real(3) * lambda);
        return {(-b + disc) / Real(3), (-b - disc) / Real(3)};
    }
};

/// Escape-time Green function: log|f^n(z)| / 3^n at the first escaping
/// iterate, 0 if the orbit stays bounded for `iters` steps.
inline Real green(const CubicMap& f, Cplx z, int iters) {
    if (iters < 1) throw std::invalid_argument("green: iters must be >= 1");
    const Real R = f.escape_radius();
    Real scale = 1.0L;
    for (int n = 0; n <= iters; ++n) {
        Real az = std::abs(z);
        if (az > R) return std::log(az) * scale;
        z = f.eval(z);
        scale /= 3;
    }
    return 0.0L;
}

// ---------------------------------------------------------------------------
// External rays
// ---------------------------------------------------------------------------

struct RayParams {
    int samples_per_level = 8;      // subdivisions per tripling of the potential
    Real landing_green = 1e-10L;    // stop once the potential drops below this
    Real contraction_tol = 1e-8L;   // last samples must cluster this tightly
    int newton_steps = 60;
    int max_levels = 40;
};

struct RayTrace {
    Angle theta;
    std::vector<Cplx> points;      // ordered by decreasing Green value
    std::vector<Real> potentials;  // Green value of each sample
    std::optional<Cplx> landing_estimate;
    bool inconclusive = false;
    std::string note;

    bool landed() const { return landing_estimate.has_value(); }
};

/// Traces the external ray of the given rational argument by Newton's method
/// on f^n(z) = W along a geometric ladder of potentials, tracking the exact
/// tripled argument at every level. Landing is declared when the last five
/// samples cluster within tolerance at negligible potential; anything else is
/// reported inconclusive.
inline RayTrace trace_ray(const CubicMap& f, const Angle& theta,
                          const RayParams& params = RayParams{}) {
    RayTrace ray;
    ray.theta = theta;

    const Real logR = std::log(f.escape_radius());
    const Real t0 = Real(1.2) * logR;
    // Boettcher coordinate at infinity: phi(z) = z + b/3 + O(1/z)
    const Cplx bott_shift = f.b / Real(3);

    Cplx z;
    bool have_seed = false;

    int level = 0, sub = 0;
    for (;;) {
        Real t = t0 * std::pow(Real(3), -(level + Real(sub) / params.samples_per_level));
        if (t < params.landing_green / 3) break;  // descend past the landing threshold
        if (level >= params.max_levels) break;

        // pull the potential into [logR, 3 logR) with n exact triplings
        int n = 0;
        Real tn = t;
        while (tn < logR) {
            tn *= 3;
            ++n;
        }
        Angle arg = sigma_iter(3, theta, static_cast<unsigned long>(n));
        Cplx w = std::polar(std::exp(tn), kTau * Real(arg.to_double())) - bott_shift;

        if (!have_seed) {
            z = w;
            have_seed = true;
        }
        // Newton iteration on F(zz) = f^n(zz) - w
        Cplx zz = z;
        bool converged = false;
        for (int it = 0; it < params.newton_steps; ++it) {
            Cplx val = zz, der(1.0L, 0.0L);
            for (int k = 0; k < n; ++k) {
                der *= f.deriv(val);
                val = f.eval(val);
            }
            Cplx F = val - w;
            if (std::abs(der) == 0.0L) break;
            Cplx step = F / der;
            zz -= step;
            if (std::abs(step) < 1e-15L * (1 + std::abs(zz))) {
                converged = true;
                break;
            }
        }
        if (!converged || !std::isfinite(std::abs(zz))) {
            ray.inconclusive = true;
            ray.note = "newton did not converge at potential " +
                       std::to_string(static_cast<double>(t)) +
                       " (possible branch ambiguity near a critical value)";
            return ray;
        }
        // a jump far beyond the local scale signals a branch switch
        if (!ray.points.empty() &&
            std::abs(zz - ray.points.back()) > Real(0.75) * (1 + std::abs(ray.points.back()))) {
            ray.inconclusive = true;
            ray.note = "sample jump at potential " + std::to_string(static_cast<double>(t));
            return ray;
        }
        z = zz;
        ray.points.push_back(z);
        ray.potentials.push_back(t);

        if (++sub == params.samples_per_level) {
            sub = 0;
            ++level;
        }
    }

    if (ray.points.size() >= 5) {
        bool contracted = true;
        const Cplx& last = ray.points.back();
        for (std::size_t i = ray.points.size() - 5; i < ray.points.size(); ++i)
            if (std::abs(ray.points[i] - last) > params.contraction_tol) contracted = false;
        if (contracted && ray.potentials.back() < params.landing_green) {
            ray.landing_estimate = last;
            return ray;
        }
    }
    ray.inconclusive = true;
    if (ray.note.empty()) ray.note = "samples did not contract below tolerance";
    return ray;
}

/// Combinatorial rotation number of a cycle of ray arguments under
/// multiplication by d^r: the cyclic shift of the counterclockwise labeling.
inline Rational ray_cycle_rotation(const std::vector<Angle>& args, int d, unsigned long r) {
    require_degree(d);
    std::vector<Angle> vs = args;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (vs.empty()) throw std::invalid_argument("ray_cycle_rotation: empty argument set");

    std::vector<Angle> img;
    for (const auto& v : vs) {
        Angle w = v;
        for (unsigned long i = 0; i < r; ++i) w = sigma(d, w);
        img.push_back(w);
    }
    for (const auto& w : img)
        if (!std::binary_search(vs.begin(), vs.end(), w))
            throw std::invalid_argument(
                "ray_cycle_rotation: set is not permuted by multiplication by d^r");
    std::size_t m = vs.size();
    std::size_t shift = std::lower_bound(vs.begin(), vs.end(), img[0]) - vs.begin();
    for (std::size_t i = 0; i < m; ++i)
        if (img[i] != vs[(i + shift) % m])
            throw std::invalid_argument("ray_cycle_rotation: permutation is not a cyclic shift");
    Rational rho(static_cast<long>(shift), static_cast<long>(m));
    rho.canonicalize();
    return rho;
}

// ---------------------------------------------------------------------------
// Repelling petals
// ---------------------------------------------------------------------------

/// Repelling petal data for g(z) = z + a z^{q+1} + ... : the preimage of the
/// half-plane Re(w/a) > r under z -> z^{-q}, within one repelling sector.
struct Petal {
    unsigned q = 1;
    Cplx a{1.0L, 0.0L};
    Real r = 10.0L;
    int sector = 0;
    bool certified = false;
    Real max_remainder = 0.0L;     // max |F(w) - w + qa| over the sample grid
    bool containment_ok = false;   // every sampled point of Pi has a preimage in Pi
    std::string note;
};

namespace detail {

/// g as a polynomial z + a z^{q+1} + higher terms.
inline Cplx eval_petal_poly(const std::vector<Cplx>& tail, unsigned q, Cplx a, Cplx z) {
    Cplx v = z + a * std::pow(z, Real(q + 1));
    Real p = Real(q + 2);
    for (const auto& c : tail) {
        v += c * std::pow(z, p);
        p += 1;
    }
    return v;
}

/// The branch of w^{-1/q} lying in the repelling sector with index `sector`.
inline Cplx sector_root(Cplx w, unsigned q, Cplx a, int sector) {
    // repelling directions solve a v^q > 0
    Real base_arg = -std::arg(a) / Real(q) + kTau * sector / Real(q);
    Cplx principal = std::pow(w, Cplx(-1.0L / Real(q), 0.0L));
    Cplx best = principal;
    Real best_dist = 1e30L;
    for (unsigned k = 0; k < q; ++k) {
        Cplx cand = principal * std::polar(Real(1), kTau * k / Real(q));
        Real diff = std::remainder(std::arg(cand) - base_arg, kTau);
        if (std::abs(diff) < best_dist) {
            best_dist = std::abs(diff);
            best = cand;
        }
    }
    return best;
}

}  // namespace detail

/// Certifies the petal numerically on a sample grid: the conjugated map
/// F(w) = (g(w^{-1/q}))^{-q} must satisfy |F(w) - w + qa| < |a|/2 on the
/// half-plane Re(w/a) > r, and every sampled point must have an F-preimage in
/// the half-plane (so F(Pi) contains Pi on samples).
inline Petal repelling_petal(const std::vector<Cplx>& g_tail, unsigned q, Cplx a, Real r,
                             int sector = 0, int grid = 32) {
    if (std::abs(a) == 0.0L)
        throw std::invalid_argument("repelling_petal: leading coefficient a is zero");
    if (q == 0) throw std::invalid_argument("repelling_petal: q must be positive");

    Petal petal;
    petal.q = q;
    petal.a = a;
    petal.r = r;
    petal.sector = sector;

    auto F = [&](Cplx w) {
        Cplx z = detail::sector_root(w, q, a, sector);
        Cplx gz = detail::eval_petal_poly(g_tail, q, a, z);
        return std::pow(gz, -Cplx(Real(q), 0.0L));
    };

    const Cplx qa = Real(q) * a;
    const Real half_a = std::abs(a) / 2;
    bool remainder_ok = true;
    bool containment = true;
    Real worst = 0.0L;

    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            // w/a = x + i y over (r, r + 3q] x [-3q, 3q]
            Real x = r + (i + 1) * (Real(3) * q) / grid;
            Real y = -Real(3) * q + j * (Real(6) * q) / (grid - 1);
            Cplx w = a * Cplx(x, y);

            Cplx Fw = F(w);
            Real rem = std::abs(Fw - w + qa);
            worst = std::max(worst, rem);
            if (!(rem < half_a)) remainder_ok = false;

            // preimage of w under F, seeded at w + qa; it must stay in Pi
            Cplx pre = w + qa;
            for (int it = 0; it < 50; ++it) {
                Cplx err = F(pre) - w;
                if (std::abs(err) < 1e-13L * (1 + std::abs(w))) break;
                pre -= err;  // F is a near-translation: derivative ~ 1
            }
            if (std::abs(F(pre) - w) > 1e-9L * (1 + std::abs(w)) ||
                !((pre / a).real() > r))
                containment = false;
        }
    }
    petal.max_remainder = worst;
    petal.containment_ok = containment;
    petal.certified = remainder_ok && containment;
    if (!remainder_ok)
        petal.note = "remainder bound violated: max |F(w) - w + qa| = " +
                     std::to_string(static_cast<double>(worst)) + " (r too small)";
    else if (!containment)
        petal.note = "half-plane containment failed on samples";
    return petal;
}

// ---------------------------------------------------------------------------
// Ray landing stability experiment
// ---------------------------------------------------------------------------

struct StabilityReport {
    bool precondition_met = false;
    bool all_stable = false;
    Cplx base_landing{};
    int tested = 0;
    int stable = 0;
    std::vector<int> untested_directions;
    std::string note;
};

/// Operational "lands at 0" test for rays aimed at the parabolic point at the
/// origin. Approach inside a repelling petal is algebraic, far too slow for
/// the strict contraction criterion, so a monotone tail marching into a small
/// neighbourhood of 0 counts as landing there.
inline bool ray_lands_at_zero(const RayTrace& ray, Real tol, Real tail_radius = 0.2L) {
    if (ray.landed()) return std::abs(*ray.landing_estimate) <= tol;
    if (ray.points.size() < 16) return false;
    std::size_t tail = ray.points.size() - 12;
    Real prev = std::abs(ray.points[tail - 1]);
    if (prev > tail_radius) return false;
    for (std::size_t i = tail; i < ray.points.size(); ++i) {
        Real cur = std::abs(ray.points[i]);
        if (cur > prev + 1e-12L) return false;
        prev = cur;
    }
    // genuine decrease over the tail, not a stall at a distant point
    return prev < Real(0.98) * std::abs(ray.points[tail - 1]);
}

/// Numerical illustration of ray-landing stability at a parabolic fixed point:
/// traces the ray at b_star (must land at 0) and at perturbed parameters
/// b_star + delta e^{i phi} over a grid of directions.
inline StabilityReport ray_stability_experiment(long p, unsigned q, Cplx b_star,
                                                const Angle& theta, Real delta,
                                                int grid = 12,
                                                Real land_tol = 1e-5L) {
    StabilityReport rep;
    const Real tau_pq = kTau * Real(p) / Real(q);
    const Cplx lambda = std::polar(Real(1), tau_pq);

    // |T_{p/q}(b_star)| must be bounded away from zero
    CycloField F(q);
    auto tp = tpq(F, p);
    std::complex<double> tval = tp.poly.eval(
        std::complex<double>(static_cast<double>(b_star.real()),
                             static_cast<double>(b_star.imag())));
    if (std::abs(tval) < 1e-8) {
        rep.note = "precondition unmet: |T(b)| too small (degenerate parabolic)";
        return rep;
    }

    CubicMap base{lambda, b_star};
    auto ray = trace_ray(base, theta);
    if (!ray_lands_at_zero(ray, land_tol)) {
        rep.note = "precondition unmet: base ray does not land at 0";
        return rep;
    }
    rep.precondition_met = true;
    rep.base_landing = ray.points.empty() ? Cplx(0, 0) : ray.points.back();

    if (delta == 0.0L) {
        rep.all_stable = true;
        rep.tested = rep.stable = 1;
        return rep;
    }
    bool all = true;
    for (int k = 0; k < grid; ++k) {
        Cplx bk = b_star + delta * std::polar(Real(1), kTau * k / Real(grid));
        CubicMap fk{lambda, bk};
        auto rk = trace_ray(fk, theta);
        bool at_zero = ray_lands_at_zero(rk, land_tol);
        if (!at_zero && (rk.inconclusive && !rk.landed())) {
            rep.untested_directions.push_back(k);
            continue;
        }
        ++rep.tested;
        if (at_zero) ++rep.stable;
        else all = false;
    }
    rep.all_stable = all && rep.tested > 0 && rep.stable == rep.tested;
    return rep;
}

}  // namespace cubilam
