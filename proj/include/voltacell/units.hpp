#pragma once

#include <string>

namespace voltacell {

/// SI dimension as exponents of (m, s, kg, A, K, mol). Exponents may be
/// fractional (k_BV carries m^2.5 mol^-0.5).
struct Dimension {
  double length = 0.0;
  double time = 0.0;
  double mass = 0.0;
  double current = 0.0;
  double temperature = 0.0;
  double amount = 0.0;
};

namespace dim {
inline constexpr Dimension none{};
inline constexpr Dimension length{1, 0, 0, 0, 0, 0};
inline constexpr Dimension area{2, 0, 0, 0, 0, 0};
inline constexpr Dimension time{0, 1, 0, 0, 0, 0};
inline constexpr Dimension temperature{0, 0, 0, 0, 1, 0};
inline constexpr Dimension inverse_temperature{0, 0, 0, 0, -1, 0};
inline constexpr Dimension concentration{-3, 0, 0, 0, 0, 1};
inline constexpr Dimension molar_volume{3, 0, 0, 0, 0, -1};
inline constexpr Dimension diffusivity{2, -1, 0, 0, 0, 0};
inline constexpr Dimension potential{2, -3, 1, -1, 0, 0};
inline constexpr Dimension stress{-1, -2, 1, 0, 0, 0};
inline constexpr Dimension conductivity{-3, 3, -1, 2, 0, 0};
inline constexpr Dimension thermal_conductivity{1, -3, 1, 0, -1, 0};
inline constexpr Dimension volumetric_heat_capacity{-1, -2, 1, 0, -1, 0};
inline constexpr Dimension current_density{-2, 0, 0, 1, 0, 0};
inline constexpr Dimension gas_constant{2, -2, 1, 0, -1, -1};
inline constexpr Dimension faraday{0, 1, 0, 1, 0, -1};
inline constexpr Dimension reaction_rate{2.5, -1, 0, 0, 0, -0.5};
inline constexpr Dimension power_density{-1, -3, 1, 0, 0, 0};
}  // namespace dim

/// Reference scales for the internal change of units. Everything the solver
/// touches is divided by `reference(dimension)`; outputs multiply it back.
class ScaleSet {
 public:
  ScaleSet() = default;
  ScaleSet(double length, double time, double potential, double temperature,
           double concentration, double stress);

  /// Identity scales: internal units are SI.
  static ScaleSet si() { return ScaleSet(1, 1, 1, 1, 1, 1); }

  double length() const { return length_; }
  double time() const { return time_; }
  double potential() const { return potential_; }
  double temperature() const { return temperature_; }
  double concentration() const { return concentration_; }
  double stress() const { return stress_; }

  // Derived base references.
  double mass() const { return stress_ * length_ * time_ * time_; }
  double current() const {
    return stress_ * length_ * length_ * length_ / (time_ * potential_);
  }
  double amount() const { return concentration_ * length_ * length_ * length_; }

  double reference(const Dimension& d) const;

  double to_internal(double value_si, const Dimension& d) const {
    return value_si / reference(d);
  }
  double to_si(double value_internal, const Dimension& d) const {
    return value_internal * reference(d);
  }

  std::string describe() const;

 private:
  double length_ = 1.0;
  double time_ = 1.0;
  double potential_ = 1.0;
  double temperature_ = 1.0;
  double concentration_ = 1.0;
  double stress_ = 1.0;
};

}  // namespace voltacell
