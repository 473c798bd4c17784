#pragma once

#include <cstdint>
#include <random>

#include "itheta/rational.hpp"

namespace itheta {

/// Seeded generator with platform-independent integer and real draws
/// (std::*_distribution output is implementation-defined, the raw engine is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi].
    long uniform_int(long lo, long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(engine_() % span);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal draw (Box-Muller).
    double normal();

    /// Rational p/den with p uniform in [-den*bound, den*bound].
    Rational rational(long bound, long den) {
        Rational q(uniform_int(-bound * den, bound * den), den);
        q.canonicalize();
        return q;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace itheta
