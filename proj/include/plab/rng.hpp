#ifndef PLAB_RNG_HPP
#define PLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "plab/linalg.hpp"

namespace plab {

/// Deterministic sampler.  Doubles are derived from raw mt19937_64 output so
/// that a seed fixes the sample stream independently of the standard
/// library's distribution implementations.
class Sampler {
  public:
    explicit Sampler(uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

    /// Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform01() - 1.0; }

    /// Componentwise uniform in [-r, r)^n.
    Vec cube(int n, double r = 1.0) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = r * symmetric();
        return v;
    }

    /// Uniform in the Euclidean ball of radius r (rejection from the cube).
    Vec ball(int n, double r = 1.0) {
        for (;;) {
            Vec v = cube(n, 1.0);
            if (v.norm() <= 1.0) return r * v;
        }
    }

    /// Uniform integer in [0, m).
    int index(int m) { return static_cast<int>(gen_() % static_cast<uint64_t>(m)); }

  private:
    std::mt19937_64 gen_;
};

}

#endif
