#ifndef FRONTLAB_GRIDS_HPP
#define FRONTLAB_GRIDS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace frontlab {

/// {0, s_min, s_min*ratio, ...} up to and including s_max.
inline std::vector<double> geometric_grid(double s_min, double s_max, double ratio) {
    if (s_min <= 0.0 || s_max <= s_min || ratio <= 1.0)
        throw std::invalid_argument("geometric_grid: need 0 < s_min < s_max and ratio > 1");
    std::vector<double> g{0.0};
    for (double s = s_min; s < s_max; s *= ratio) g.push_back(s);
    g.push_back(s_max);
    return g;
}

/// Grid on [0, t - eps_end] refined geometrically near both endpoints.
/// Bridge functionals integrate m''(s) * path, which concentrates near s = 0,
/// while the time-changed sampling needs resolution near s = t as well.
inline std::vector<double> bridge_grid(double t, double s_min, double ratio, double eps_end) {
    if (t <= 0.0 || eps_end <= 0.0 || eps_end >= t / 2)
        throw std::invalid_argument("bridge_grid: need 0 < eps_end < t/2");
    std::vector<double> g{0.0};
    for (double s = s_min; s < t / 2; s *= ratio) g.push_back(s);
    std::vector<double> back;
    for (double s = eps_end; s < t / 2; s *= ratio) back.push_back(t - s);
    std::sort(back.begin(), back.end());
    g.push_back(t / 2);
    g.insert(g.end(), back.begin(), back.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

/// n+1 equally spaced points on [a, b].
inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    return g;
}

/// Strictly increasing check used by several preconditions.
inline bool is_increasing(const std::vector<double>& g) {
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) return false;
    return true;
}

}  // namespace frontlab

#endif
