#include "voltacell/guard.hpp"

#include <cmath>
#include <sstream>

namespace voltacell {

GuardPolicy GuardPolicy::defaults(double c_e0) {
  GuardPolicy p;
  p.eps_e = 1e-3 * c_e0;
  p.eps_s_fraction = 1e-4;
  return p;
}

void GuardPolicy::validate() const {
  if (!(eps_e > 0.0)) throw std::invalid_argument("GuardPolicy: eps_e must be positive");
  if (!(eps_s_fraction > 0.0 && eps_s_fraction < 0.5)) {
    throw std::invalid_argument("GuardPolicy: eps_s fraction must lie in (0, 0.5)");
  }
}

BoundGuard::BoundGuard(GuardPolicy policy) : policy_(policy) { policy_.validate(); }

double BoundGuard::electrolyte(double c_e, int entity, int point, const Point& x) {
  if (c_e >= policy_.eps_e) return c_e;
  record("c_e", entity, point, x, c_e, policy_.eps_e);
  return policy_.eps_e;
}

double BoundGuard::solid(double c_s, double c_max, int entity, int point, const Point& x) {
  const double eps = policy_.eps_s_fraction * c_max;
  if (c_s >= eps && c_s <= c_max - eps) return c_s;
  const double to = c_s < eps ? eps : c_max - eps;
  record("c_s", entity, point, x, c_s, to);
  return to;
}

void BoundGuard::record(const char* field, int entity, int point, const Point& x, double from,
                        double to) {
  if (policy_.action == GuardAction::Abort || !std::isfinite(from)) {
    std::ostringstream os;
    os << "bound guard: " << field << " = " << from << " at entity " << entity << ", point "
       << point << " (" << x.x << ", " << x.y << ") violates the admissible range";
    throw GuardViolation(os.str());
  }
  ++count_;
  if (events_.size() < kMaxStored) events_.push_back({field, entity, point, x, from, to});
}

void BoundGuard::reset() {
  count_ = 0;
  events_.clear();
}

}  // namespace voltacell
