#include "bolab/parameters.hpp"

#include <cmath>
#include <string>

#include "bolab/errors.hpp"

namespace bolab {

ParameterSet parameter_set(double s) {
  if (!(s > 0.0 && s < 0.25)) {
    throw DomainError("parameter s must lie in (0, 0.25), got " + std::to_string(s));
  }
  ParameterSet ps;
  ps.s = s;
  ps.p = 2.0 / (1.0 - 2.0 * s) + s * s;
  ps.r = 0.5 - 1.0 / ps.p;
  ps.b = 0.5 - std::pow(s, 15.0 / 8.0);
  ps.tau = 8.0 - std::pow(s, 13.0 / 8.0);
  ps.q = 1.0 + std::pow(s, 1.5);
  ps.kappa = 1.0 - std::pow(s, 1.25);
  ps.gamma = 2.0 - std::pow(s, 2.5);
  ps.epsilon = std::pow(s, 7.0 / 4.0);
  return ps;
}

std::array<double, 10> ParameterSet::hierarchy() const noexcept {
  return {s * s * s, 2.0 - gamma, r - s, 0.5 - b, epsilon, 8.0 - tau, q - 1.0, 1.0 - kappa, s, std::sqrt(s)};
}

bool ParameterSet::hierarchy_holds() const noexcept {
  const auto h = hierarchy();
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (!(h[i - 1] < h[i])) return false;
  }
  return true;
}

}  // namespace bolab
