#include "itheta/random.hpp"

#include <cmath>
#include <numbers>

namespace itheta {

double Rng::normal() {
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace itheta
