#include "qaa/schedule.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qaa {

ScheduleValues Schedule::evaluate(double tau) const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("schedule evaluated outside [0, 1]: tau = " +
                            std::to_string(tau));
  }
  // Endpoints are pinned so the steering terms vanish exactly there.
  if (tau == 0.0) return {1.0, 0.0, 0.0, 0.0};
  if (tau == 1.0) return {0.0, 1.0, 0.0, 0.0};
  const double half = 0.5 * std::numbers::pi * tau;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const double d = 0.5 * std::numbers::pi * std::sin(std::numbers::pi * tau);
  return {c * c, s * s, -d, d};
}

std::string Schedule::name() const {
  switch (kind_) {
    case ScheduleKind::CosSin:
      return "cos-sin";
  }
  throw std::logic_error("unreachable schedule kind");
}

Schedule parse_schedule(const std::string& name) {
  if (name == "cos-sin" || name == "cos2") {
    return Schedule(ScheduleKind::CosSin);
  }
  throw std::invalid_argument("unknown schedule '" + name + "'");
}

}  // namespace qaa
