#include "ulr/rng.hpp"

#include <cmath>
#include <numbers>

#include "ulr/errors.hpp"

namespace ulr {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double low, double high) { return low + (high - low) * uniform(); }

int Rng::uniform_int(int low, int high) {
  if (high < low) throw DomainError("Rng::uniform_int: empty range");
  const double span = static_cast<double>(high) - low + 1.0;
  return low + static_cast<int>(std::floor(uniform() * span));
}

double Rng::normal() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

}  // namespace ulr
