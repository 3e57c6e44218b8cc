#ifndef FRONTLAB_RNG_HPP
#define FRONTLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace frontlab {

/// Stateless 64-bit mix (splitmix64 finalizer). Used to derive independent
/// per-task seeds from (base seed, task index) so that ensembles are
/// reproducible regardless of how work is split across threads.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base ^ mix64(index + 1));
}

/// Gaussian stream on top of mt19937_64 via Box-Muller.
/// Self-contained so that a fixed seed gives bit-identical streams across
/// standard-library versions (std::normal_distribution does not promise that).
class GaussianRng {
  public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on (0,1] (never returns 0, safe under log()).
    double uniform() {
        const std::uint64_t r = eng_();
        return (static_cast<double>(r >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal draw.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace frontlab

#endif
