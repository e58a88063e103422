#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <magnus/bounds.hpp>

#include <cmath>

using namespace magnus;

namespace {

void check_rhs_at_origin(const IVPSystem &sys, const OdeState &expect) {
  REQUIRE(sys.dimension == static_cast<int>(sys.initial.size()));
  REQUIRE(!sys.name.empty());
  OdeState dy(sys.initial.size());
  sys.rhs(0.0, sys.initial, dy);
  REQUIRE(dy.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(dy[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("systems start from zero with unit speed in the lead coordinate") {
  check_rhs_at_origin(standard_system(), {1});
  check_rhs_at_origin(method1_system(), {1});
  check_rhs_at_origin(method3_system(), {1, 0});
  check_rhs_at_origin(method4_system(), {1, 0, 0, 0});
  check_rhs_at_origin(method5_system(), {1, 0, 0, 0, 0});
}

TEST_CASE("inverse-time integral of the scalar comparison equation") {
  CHECK(chi_standard(0) == 0);
  CHECK(chi_standard(1.0) > 0);
  CHECK(chi_standard(4.0) > chi_standard(1.0));
  CHECK(std::abs(delta_standard() - 2.1737374) < 1e-6);
}

TEST_CASE("scalar comparison radius: stable under refinement, equals integral") {
  BlowupResult r = blowup_radius(standard_system());
  CHECK(r.est_error < 1e-6);
  CHECK(std::abs(r.radius - delta_standard()) < 1e-5);
  BlowupResult c = blowup_radius(standard_system(), 1e-11);
  CHECK(std::abs(c.radius - r.radius) < 1e-6);
}

TEST_CASE("low-order forcing: two-segment bound and improved radius") {
  double v = method1_delta_plus_lhat();
  CHECK(std::abs(v - 2.1811375) < 1e-6);
  CHECK(std::abs((v - delta_standard()) - 0.0074001) < 2e-6);
  BlowupResult r = blowup_radius(method1_system());
  CHECK(std::abs(r.radius - 2.2762) < 1e-3);
  CHECK(r.radius > v);
  CHECK(r.radius > delta_standard());
}

TEST_CASE("energy-integral radius") {
  CHECK(std::abs(method2_radius() - 2.281) < 1e-3);
}

TEST_CASE("coupled-pair radius") {
  BlowupResult r = blowup_radius(method3_system());
  CHECK(std::abs(r.radius - 2.204) < 1e-2);
  CHECK(r.est_error < 1e-3);
}

TEST_CASE("four-component radius") {
  BlowupResult r = blowup_radius(method4_system());
  CHECK(std::abs(r.radius - 2.297) < 1e-2);
  CHECK(r.est_error < 1e-3);
}

TEST_CASE("five-component polynomial radius") {
  BlowupResult r = blowup_radius(method5_system());
  CHECK(std::abs(r.radius - 2.293) < 1e-2);
  CHECK(r.est_error < 1e-3);
}

TEST_CASE("radii order: scalar, coupled pair, polynomial, four-component") {
  double d = delta_standard();
  double m3 = blowup_radius(method3_system()).radius;
  double m4 = blowup_radius(method4_system()).radius;
  double m5 = blowup_radius(method5_system()).radius;
  CHECK(d < m3);
  CHECK(m3 < m5);
  CHECK(m5 < m4);
}
