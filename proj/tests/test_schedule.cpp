#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qaa/schedule.hpp"

using namespace qaa;

TEST_SUITE_BEGIN("schedule");

TEST_CASE("endpoints are pinned exactly") {
  const Schedule s;
  const ScheduleValues a = s.evaluate(0.0);
  CHECK(a.f_initial == 1.0);
  CHECK(a.f_final == 0.0);
  CHECK(a.df_initial == 0.0);
  CHECK(a.df_final == 0.0);
  const ScheduleValues b = s.evaluate(1.0);
  CHECK(b.f_initial == 0.0);
  CHECK(b.f_final == 1.0);
  CHECK(b.df_initial == 0.0);
  CHECK(b.df_final == 0.0);
}

TEST_CASE("midpoint values") {
  const Schedule s;
  const ScheduleValues v = s.evaluate(0.5);
  CHECK(v.f_initial == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.f_final == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.df_initial == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-15));
  CHECK(v.df_final == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
}

TEST_CASE("weights sum to one and derivatives mirror") {
  const Schedule s;
  for (double tau : {0.05, 0.2, 0.37, 0.6, 0.85, 0.99}) {
    const ScheduleValues v = s.evaluate(tau);
    CHECK(v.f_initial + v.f_final == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.df_initial == -v.df_final);
    CHECK(v.f_initial >= 0.0);
    CHECK(v.f_final >= 0.0);
  }
}

TEST_CASE("derivatives match finite differences") {
  const Schedule s;
  const double eps = 1e-6;
  for (double tau : {0.1, 0.33, 0.5, 0.77, 0.9}) {
    const ScheduleValues v = s.evaluate(tau);
    const ScheduleValues hi = s.evaluate(tau + eps);
    const ScheduleValues lo = s.evaluate(tau - eps);
    CHECK(v.df_initial ==
          doctest::Approx((hi.f_initial - lo.f_initial) / (2 * eps)).epsilon(1e-8));
    CHECK(v.df_final ==
          doctest::Approx((hi.f_final - lo.f_final) / (2 * eps)).epsilon(1e-8));
  }
}

TEST_CASE("evaluate rejects tau outside the anneal") {
  const Schedule s;
  CHECK_THROWS_AS(s.evaluate(-0.001), std::domain_error);
  CHECK_THROWS_AS(s.evaluate(1.001), std::domain_error);
}

TEST_CASE("schedule names parse") {
  CHECK(parse_schedule("cos-sin").kind() == ScheduleKind::CosSin);
  CHECK(parse_schedule("cos2").kind() == ScheduleKind::CosSin);
  CHECK(Schedule().name() == "cos-sin");
  CHECK_THROWS_AS(parse_schedule("linear"), std::invalid_argument);
}

TEST_SUITE_END();
