#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "voltacell/geometry.hpp"

namespace voltacell {

enum class GuardAction { ClampAndLog, Abort };

/// Bounds applied to concentrations when they enter nonlinear laws.
struct GuardPolicy {
  double eps_e = 2.0;          // floor for c_e, in the units of the concentrations
  double eps_s_fraction = 1e-4;  // margin for c_s from 0 and c_max, as a fraction of c_max
  GuardAction action = GuardAction::ClampAndLog;

  /// eps_e = 1e-3 c_e0, eps_s = 1e-4 c_max.
  static GuardPolicy defaults(double c_e0);
  void validate() const;
};

struct ClampEvent {
  std::string field;
  int entity = -1;  // element or edge id
  int point = -1;
  Point x;
  double original = 0.0;
  double clamped = 0.0;
};

class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clamps concentration samples and keeps a log of every clamp. The
/// solution vectors themselves are never modified.
class BoundGuard {
 public:
  explicit BoundGuard(GuardPolicy policy = {});

  const GuardPolicy& policy() const { return policy_; }
  double electrolyte(double c_e, int entity, int point, const Point& x);
  double solid(double c_s, double c_max, int entity, int point, const Point& x);

  std::size_t count() const { return count_; }
  /// The first `kMaxStored` events in full.
  const std::vector<ClampEvent>& events() const { return events_; }
  void reset();

  static constexpr std::size_t kMaxStored = 256;

 private:
  void record(const char* field, int entity, int point, const Point& x, double from, double to);

  GuardPolicy policy_;
  std::size_t count_ = 0;
  std::vector<ClampEvent> events_;
};

}  // namespace voltacell
