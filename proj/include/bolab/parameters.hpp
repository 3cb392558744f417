#pragma once

#include <array>
#include <string_view>

namespace bolab {

/// The exponent family derived from the single small parameter s.
struct ParameterSet {
  double s = 0.0;
  double p = 0.0;        ///< 2/(1-2s) + s^2
  double r = 0.0;        ///< 1/2 - 1/p
  double b = 0.0;        ///< 1/2 - s^{15/8}
  double tau = 0.0;      ///< 8 - s^{13/8}
  double q = 0.0;        ///< 1 + s^{3/2}
  double kappa = 0.0;    ///< 1 - s^{5/4}
  double gamma = 0.0;    ///< 2 - s^{5/2}
  double epsilon = 0.0;  ///< s^{7/4}

  /// The ten smallness factors, in the order they should increase:
  /// s^3, 2-gamma, r-s, 1/2-b, epsilon, 8-tau, q-1, 1-kappa, s, s^{1/2}.
  std::array<double, 10> hierarchy() const noexcept;
  static constexpr std::array<std::string_view, 10> hierarchy_labels{
      "s^3", "2-gamma", "r-s", "1/2-b", "epsilon", "8-tau", "q-1", "1-kappa", "s", "s^(1/2)"};
  /// True when hierarchy() is strictly increasing.
  bool hierarchy_holds() const noexcept;
};

/// Throws DomainError unless 0 < s < 1/4.
ParameterSet parameter_set(double s);

}  // namespace bolab
