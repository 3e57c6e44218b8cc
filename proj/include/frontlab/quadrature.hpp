#ifndef FRONTLAB_QUADRATURE_HPP
#define FRONTLAB_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace frontlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  ///< a-posteriori estimate, not a rigorous bound
};

namespace detail {

template <class F>
double simpson(const F& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
QuadResult adapt(const F& f, double a, double fa, double b, double fb, double m, double fm,
                 double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double err = (left + right - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol)
        return {left + right + err, std::abs(err)};
    QuadResult l = adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1);
    QuadResult r = adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
    return {l.value + r.value, l.error + r.error};
}

}  // namespace detail

/// Adaptive composite Simpson on [a, b] to absolute tolerance tol.
template <class F>
QuadResult adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 40) {
    if (!(b > a)) return {0.0, 0.0};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Integral over [a, inf) by doubling blocks until a block contributes less
/// than tol/4. The integrand must decay; callers with slowly decaying tails
/// should supply their own analytic tail bound instead.
template <class F>
QuadResult integrate_tail(const F& f, double a, double tol, int max_blocks = 60) {
    double lo = a;
    double width = (std::abs(a) > 1.0) ? std::abs(a) : 1.0;
    QuadResult total;
    for (int k = 0; k < max_blocks; ++k) {
        QuadResult blk = adaptive_simpson(f, lo, lo + width, tol / 8.0);
        total.value += blk.value;
        total.error += blk.error;
        if (std::abs(blk.value) < tol / 4.0 && k > 0) return total;
        lo += width;
        width *= 2.0;
    }
    throw std::runtime_error("integrate_tail: integral did not settle; tail may be non-integrable");
}

/// Trapezoid rule on a stored (x, y) sampling.
inline double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("trapezoid: need matching arrays of size >= 2");
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

/// Trapezoid on every other node; the difference against trapezoid() is the
/// cheap a-posteriori quadrature error estimate used by the path functionals.
inline double trapezoid_coarse(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("trapezoid_coarse: need matching arrays of size >= 3");
    double s = 0.0;
    std::size_t prev = 0;
    for (std::size_t i = 2; i < x.size(); i += 2) {
        s += 0.5 * (y[i] + y[prev]) * (x[i] - x[prev]);
        prev = i;
    }
    if (prev != x.size() - 1) {
        const std::size_t last = x.size() - 1;
        s += 0.5 * (y[last] + y[prev]) * (x[last] - x[prev]);
    }
    return s;
}

}  // namespace frontlab

#endif
