#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace ngopt {

/// Identifier written into run manifests.
inline constexpr char const* kRngId = "mt19937_64;seed=splitmix64(seed^stream*0x9E3779B97F4A7C15);u01=(x>>11)*2^-53";

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent streams derived from one user seed.
enum class RngStream : std::uint64_t {
    InitialGuess = 0,
    ProblemMatrix = 1,
    Test = 2,
};

/// Deterministic uniform generator. The mapping from raw 64-bit output to
/// [0, 1) is spelled out here rather than left to std::uniform_real_distribution,
/// whose algorithm differs between standard libraries.
class Rng {
  public:
    Rng(std::uint64_t seed, RngStream stream)
        : engine_(splitmix64(seed ^ (static_cast<std::uint64_t>(stream) * 0x9E3779B97F4A7C15ULL))) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    Eigen::VectorXd uniform_vector(Eigen::Index n, double lo = 0.0, double hi = 1.0) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v[i] = uniform(lo, hi);
        }
        return v;
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace ngopt
