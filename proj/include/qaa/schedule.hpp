#pragma once

#include <string>

namespace qaa {

// Interpolation weights at dimensionless time tau = t / t_a, plus their
// tau-derivatives. The initial weight starts at 1 and ends at 0; the final
// weight does the opposite.
struct ScheduleValues {
  double f_initial;
  double f_final;
  double df_initial;  // d f_initial / d tau
  double df_final;    // d f_final / d tau
};

enum class ScheduleKind {
  CosSin,  // f_initial = cos^2(pi tau / 2), f_final = sin^2(pi tau / 2)
};

class Schedule {
 public:
  explicit Schedule(ScheduleKind kind = ScheduleKind::CosSin) : kind_(kind) {}

  ScheduleKind kind() const { return kind_; }

  // Throws std::domain_error outside [0, 1]. The endpoints are exact:
  // evaluate(0) == {1, 0, 0, 0} and evaluate(1) == {0, 1, 0, 0}, so boundary
  // conditions that rely on a vanishing derivative hold bit-exactly.
  ScheduleValues evaluate(double tau) const;

  std::string name() const;

 private:
  ScheduleKind kind_;
};

Schedule parse_schedule(const std::string& name);

}  // namespace qaa
