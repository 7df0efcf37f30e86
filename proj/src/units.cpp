#include "voltacell/units.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace voltacell {

ScaleSet::ScaleSet(double length, double time, double potential, double temperature,
                   double concentration, double stress)
    : length_(length),
      time_(time),
      potential_(potential),
      temperature_(temperature),
      concentration_(concentration),
      stress_(stress) {
  for (double v : {length, time, potential, temperature, concentration, stress}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("ScaleSet: all reference scales must be positive and finite");
    }
  }
}

double ScaleSet::reference(const Dimension& d) const {
  auto pw = [](double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); };
  return pw(length_, d.length) * pw(time_, d.time) * pw(mass(), d.mass) *
         pw(current(), d.current) * pw(temperature_, d.temperature) * pw(amount(), d.amount);
}

std::string ScaleSet::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "length_m=" << length_ << " time_s=" << time_ << " potential_V=" << potential_
     << " temperature_K=" << temperature_ << " concentration_mol_m3=" << concentration_
     << " stress_Pa=" << stress_;
  return os.str();
}

}  // namespace voltacell
