#ifndef FRONTLAB_BESSEL_HPP
#define FRONTLAB_BESSEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontlab/grids.hpp"
#include "frontlab/rng.hpp"

namespace frontlab {

// Normalization used throughout: every driving Brownian motion satisfies
// E[(B_{s+h} - B_s)^2] = 2h, so the squared-Bessel dimension-3 radial process
// solves d xi = dB + (2/xi) ds.

inline double normal_pdf(double x) { return 0.3989422804014326779399461 * std::exp(-0.5 * x * x); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244008444); }

/// Inverse standard normal CDF (Acklam rational approximation polished by a
/// Newton step), accurate to ~1e-15 over (0,1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1) required");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // one Newton polish
    const double e = normal_cdf(x) - p;
    x -= e / normal_pdf(x);
    return x;
}

/// E[xi^y_s] - y for the Bessel process, in closed form.
/// Reduces to 4 sqrt(s/pi) at y = 0.
inline double bessel3_mean_displacement(double y, double s) {
    if (s <= 0.0) return 0.0;
    const double sig = std::sqrt(2.0 * s);
    if (y <= 1e-8 * sig) return 4.0 * std::sqrt(s / M_PI);
    const double rho = y / sig;
    return (y + 2.0 * s / y) * (2.0 * normal_cdf(rho) - 1.0) + 2.0 * sig * normal_pdf(rho) - y;
}

/// One-step transition CDF of the Bessel process: P(xi_{s+h} <= r | xi_s = a).
inline double bessel3_cdf(double a, double h, double r) {
    if (r <= 0.0) return 0.0;
    const double sig = std::sqrt(2.0 * h);
    if (a <= 1e-10 * sig) {
        const double u = r / sig;
        return 2.0 * normal_cdf(u) - 1.0 - 2.0 * u * normal_pdf(u);
    }
    return normal_cdf((r - a) / sig) + normal_cdf((r + a) / sig) - 1.0 +
           (sig / a) * (normal_pdf((r + a) / sig) - normal_pdf((r - a) / sig));
}

/// Inverse of bessel3_cdf in r; monotone in the start point a, which is what
/// makes shared-uniform stepping an order-preserving exact coupling.
inline double bessel3_quantile(double a, double h, double u) {
    const double sig = std::sqrt(2.0 * h);
    const double z = normal_quantile(u);
    double r = std::max(a + sig * z, 0.25 * sig);
    if (a <= 1e-10 * sig) r = std::max(sig, a + sig * std::abs(z));
    double lo = 0.0, hi = std::max(4.0 * sig, a + sig * (std::abs(z) + 4.0));
    while (bessel3_cdf(a, h, hi) < u) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        const double F = bessel3_cdf(a, h, r);
        if (F > u) hi = r; else lo = r;
        // transition density, for Newton
        double f;
        if (a <= 1e-10 * sig) {
            f = (r * r) / (sig * sig * sig) * std::sqrt(2.0 / M_PI) * std::exp(-r * r / (2.0 * sig * sig));
        } else {
            f = (r / a) * (normal_pdf((r - a) / sig) - normal_pdf((r + a) / sig)) / sig;
        }
        double step = (f > 1e-300) ? (F - u) / f : 0.0;
        double next = r - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - r) < 1e-14 * (1.0 + r)) { r = next; break; }
        r = next;
    }
    return r;
}

enum class PathKind { exact_bessel, timechange_bridge, euler_bridge, brownian };

struct Path {
    std::vector<double> grid;
    std::vector<double> values;
    PathKind construction = PathKind::exact_bessel;
    double start_y = 0.0;
    std::optional<std::pair<double, double>> target;  ///< (x, t) for bridges
    std::uint64_t seed = 0;

    double back() const { return values.back(); }
};

namespace detail {

/// Exact Bessel values at the given increasing times (first time may be 0),
/// via the 3-dimensional radial representation: per-coordinate Gaussian
/// increments of variance 2*dt, value = Euclidean norm.
inline std::vector<double> bessel_values_at(double y, const std::vector<double>& times,
                                            GaussianRng& rng) {
    std::vector<double> out(times.size());
    double x1 = y, x2 = 0.0, x3 = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double du = times[i] - prev;
        if (du < 0.0) throw std::invalid_argument("bessel_values_at: times must be nondecreasing");
        if (du > 0.0) {
            const double sd = std::sqrt(2.0 * du);
            x1 += sd * rng.gauss();
            x2 += sd * rng.gauss();
            x3 += sd * rng.gauss();
        }
        out[i] = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
        prev = times[i];
    }
    if (!times.empty() && times.front() == 0.0) out.front() = y;  // exact start
    return out;
}

}  // namespace detail

/// Exact Bessel path at the grid times. Law is exact at the grid
/// (finite-dimensional distributions), deterministic given seed.
inline Path sample_bessel_path(double y, std::vector<double> grid, std::uint64_t seed) {
    if (y < 0.0) throw std::invalid_argument("sample_bessel_path: y >= 0 required");
    if (grid.empty() || grid.front() != 0.0 || !is_increasing(grid))
        throw std::invalid_argument("sample_bessel_path: grid must be increasing with grid[0] = 0");
    GaussianRng rng(seed);
    Path p;
    p.values = detail::bessel_values_at(y, grid, rng);
    p.grid = std::move(grid);
    p.construction = PathKind::exact_bessel;
    p.start_y = y;
    p.seed = seed;
    return p;
}

/// Exact bridge from y to 0 in time t at grid times within [0, t):
/// xi^{t,y->0}_s = ((t-s)/t) * xi^y_{s t/(t-s)}.
inline Path sample_bridge_to_zero(double y, double t, std::vector<double> grid, std::uint64_t seed) {
    if (y < 0.0 || t <= 0.0) throw std::invalid_argument("sample_bridge_to_zero: y >= 0, t > 0 required");
    if (grid.empty() || grid.front() != 0.0 || !is_increasing(grid))
        throw std::invalid_argument("sample_bridge_to_zero: grid must be increasing with grid[0] = 0");
    if (grid.back() >= t) throw std::invalid_argument("sample_bridge_to_zero: grid point >= t");
    std::vector<double> transformed(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) transformed[i] = grid[i] * t / (t - grid[i]);
    GaussianRng rng(seed);
    std::vector<double> base = detail::bessel_values_at(y, transformed, rng);
    Path p;
    p.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) p.values[i] = (t - grid[i]) / t * base[i];
    p.grid = std::move(grid);
    p.construction = PathKind::timechange_bridge;
    p.start_y = y;
    p.target = {0.0, t};
    p.seed = seed;
    return p;
}

namespace detail {

/// coth with the small/large argument branches handled.
inline double coth(double u) {
    const double au = std::abs(u);
    if (au < 1e-6) return 1.0 / u + u / 3.0;
    if (au > 20.0) return u > 0 ? 1.0 : -1.0;
    return 1.0 / std::tanh(u);
}

/// Bridge drift of the conditioned SDE, x >= 0.
inline double bridge_drift(double xi, double x, double ttg) {
    if (x <= 0.0) return 2.0 / xi - xi / ttg;
    const double u = x * xi / (2.0 * ttg);
    return (x / ttg) * coth(u) - xi / ttg;
}

}  // namespace detail

/// Euler-Maruyama bridge from y to x in time t on the coth-drift SDE.
/// Values are recorded at the requested grid (subset of [0, t - eps_end],
/// eps_end = dt_max); the final segment is linear interpolation to x.
/// A hard floor of 1e-12 guards the 2/xi and coth drifts.
inline Path sample_bridge(double y, double x, double t, std::vector<double> grid,
                          std::uint64_t seed, double dt_max) {
    if (y < 0.0 || x < 0.0 || t <= 0.0 || dt_max <= 0.0)
        throw std::invalid_argument("sample_bridge: need y, x >= 0 and t, dt_max > 0");
    const double eps_end = dt_max;
    if (grid.empty() || grid.front() != 0.0 || !is_increasing(grid))
        throw std::invalid_argument("sample_bridge: grid must be increasing with grid[0] = 0");
    if (grid.back() > t - eps_end + 1e-12)
        throw std::invalid_argument("sample_bridge: grid must stay within [0, t - dt_max]");
    GaussianRng rng(seed);
    Path p;
    p.values.resize(grid.size());
    p.values[0] = y;
    double xi = y, s = 0.0;
    std::size_t gi = 1;
    const double s_end = t - eps_end;
    while (gi < grid.size()) {
        double h = std::min(dt_max, grid[gi] - s);
        if (s + h > s_end) h = s_end - s;
        xi += detail::bridge_drift(std::max(xi, 1e-12), x, t - s) * h +
              std::sqrt(2.0 * h) * rng.gauss();
        xi = std::max(xi, 1e-12);
        s += h;
        if (std::abs(s - grid[gi]) < 1e-12) {
            // linear endpoint extrapolation region
            p.values[gi] = (s > s_end - 1e-12) ? (xi + (x - xi) * 0.0) : xi;
            p.values[gi] = xi;
            ++gi;
        }
    }
    p.grid = std::move(grid);
    p.construction = PathKind::euler_bridge;
    p.start_y = y;
    p.target = {x, t};
    p.seed = seed;
    return p;
}

struct MemberSpec {
    PathKind kind = PathKind::exact_bessel;
    double y = 0.0;
    double x = 0.0;  ///< bridge endpoint
    double t = 0.0;  ///< bridge horizon
};

/// Family of paths driven by one noise stream.
///
/// Coupling matrix (per shared grid step):
///   brownian / exact_bessel            -- exact quantile coupling: ordering,
///                                         difference bounds and Brownian
///                                         domination hold with zero tolerance
///   timechange_bridge (equal t)        -- exact, via the coupled underlying
///                                         Bessel processes at transformed times
///   timechange_bridge vs exact_bessel  -- shared uniforms (law exact, no
///                                         pointwise inequality guarantee)
///   euler_bridge (same y, t)           -- shared Gaussian driver; inequalities
///                                         hold up to the Euler tolerance
/// Bridges to zero with different horizons in one family are rejected: their
/// transformed time grids cannot be driven by a single stream.
struct CoupledPaths {
    std::uint64_t seed = 0;
    Path driver;             ///< Brownian path built from the shared stream
    std::vector<Path> members;
};

inline CoupledPaths coupled_family(const std::vector<MemberSpec>& specs,
                                   const std::vector<double>& grid, std::uint64_t seed,
                                   double dt_max = 1e-2) {
    if (grid.empty() || grid.front() != 0.0 || !is_increasing(grid))
        throw std::invalid_argument("coupled_family: grid must be increasing with grid[0] = 0");
    double bridge_t = -1.0;
    for (const auto& m : specs) {
        if (m.kind == PathKind::timechange_bridge) {
            if (bridge_t > 0.0 && m.t != bridge_t)
                throw std::invalid_argument(
                    "coupled_family: bridges to zero with different horizons cannot share a driver");
            bridge_t = m.t;
            if (grid.back() >= m.t)
                throw std::invalid_argument("coupled_family: grid reaches a bridge horizon");
        }
    }

    GaussianRng rng(seed);
    const std::size_t n = grid.size();
    CoupledPaths out;
    out.seed = seed;
    out.members.resize(specs.size());
    for (std::size_t j = 0; j < specs.size(); ++j) {
        auto& p = out.members[j];
        p.grid = grid;
        p.values.assign(n, 0.0);
        p.construction = specs[j].kind;
        p.start_y = specs[j].y;
        p.seed = seed;
        if (specs[j].kind == PathKind::timechange_bridge) p.target = {0.0, specs[j].t};
        if (specs[j].kind == PathKind::euler_bridge) p.target = {specs[j].x, specs[j].t};
        p.values[0] = specs[j].y;
    }
    out.driver.grid = grid;
    out.driver.values.assign(n, 0.0);
    out.driver.construction = PathKind::brownian;
    out.driver.seed = seed;

    // per-member state: plain value, or the underlying Bessel for bridges
    std::vector<double> state(specs.size());
    for (std::size_t j = 0; j < specs.size(); ++j) state[j] = specs[j].y;
    double drv = 0.0;

    for (std::size_t i = 1; i < n; ++i) {
        const double h = grid[i] - grid[i - 1];
        const double u = rng.uniform();
        const double z = normal_quantile(u);
        drv += std::sqrt(2.0 * h) * z;
        out.driver.values[i] = drv;
        for (std::size_t j = 0; j < specs.size(); ++j) {
            const auto& m = specs[j];
            switch (m.kind) {
                case PathKind::brownian:
                    state[j] += std::sqrt(2.0 * h) * z;
                    out.members[j].values[i] = state[j];
                    break;
                case PathKind::exact_bessel:
                    state[j] = bessel3_quantile(state[j], h, u);
                    out.members[j].values[i] = state[j];
                    break;
                case PathKind::timechange_bridge: {
                    // advance the underlying Bessel between transformed times
                    const double t = m.t;
                    const double u_prev = grid[i - 1] * t / (t - grid[i - 1]);
                    const double u_cur = grid[i] * t / (t - grid[i]);
                    state[j] = bessel3_quantile(state[j], u_cur - u_prev, u);
                    out.members[j].values[i] = (t - grid[i]) / t * state[j];
                    break;
                }
                case PathKind::euler_bridge: {
                    // substep with the shared increment split evenly
                    double s = grid[i - 1];
                    const int nsub = std::max(1, static_cast<int>(std::ceil(h / dt_max)));
                    const double hs = h / nsub;
                    for (int k = 0; k < nsub; ++k) {
                        state[j] += detail::bridge_drift(std::max(state[j], 1e-12), m.x, m.t - s) * hs +
                                    std::sqrt(2.0 * hs) * z / std::sqrt(static_cast<double>(nsub));
                        state[j] = std::max(state[j], 1e-12);
                        s += hs;
                    }
                    out.members[j].values[i] = state[j];
                    break;
                }
            }
        }
    }
    return out;
}

/// G = max over grid of |value - trend| / max(s^{1/2-eps}, s^{1/2+eps});
/// the trend is the start level for free paths and the chord for bridges.
inline double fluctuation_statistic(const Path& path, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("fluctuation_statistic: eps in (0, 1/2)");
    bool any = false;
    double g = 0.0;
    for (std::size_t i = 0; i < path.grid.size(); ++i) {
        const double s = path.grid[i];
        if (s <= 0.0) continue;
        any = true;
        double trend = path.start_y;
        if (path.target) {
            const auto [x, t] = *path.target;
            trend = path.start_y + (x - path.start_y) * s / t;
        }
        const double denom = std::max(std::pow(s, 0.5 - eps), std::pow(s, 0.5 + eps));
        g = std::max(g, std::abs(path.values[i] - trend) / denom);
    }
    if (!any) throw std::invalid_argument("fluctuation_statistic: grid has no s > 0");
    return g;
}

/// Path export for debugging: CSV with columns s,value.
inline std::string path_to_csv(const Path& p) {
    std::string out = "s,value\n";
    char buf[64];
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.grid[i], p.values[i]);
        out += buf;
    }
    return out;
}

}  // namespace frontlab

#endif
