#include "semisup/rng.hpp"

#include <cmath>

namespace semisup {

double Rng::normal(double mean, double stddev) {
  // u1 must be > 0 for the log.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * M_PI * u2);
}

}  // namespace semisup
