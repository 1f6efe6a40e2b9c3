#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "omstirap/errors.hpp"
#include "omstirap/model.hpp"
#include "test_util.hpp"

using namespace omstirap;

TEST_SUITE_BEGIN("model");

TEST_CASE("pulse envelopes hit their closed-form values") {
  PulseSchedule s;  // A=350, T=3, tau=1

  CHECK(pulse_left(s, s.half_delay) == doctest::Approx(s.amplitude).epsilon(1e-15));
  CHECK(pulse_left(s, s.half_delay + s.width) ==
        doctest::Approx(s.amplitude / std::exp(1.0)).epsilon(1e-15));
  // 350 * exp(-1/9) = 313.19376...
  CHECK(pulse_left(s, 0.0) ==
        doctest::Approx(350.0 * std::exp(-1.0 / 9.0)).epsilon(1e-15));
  CHECK(pulse_left(s, 0.0) == doctest::Approx(313.19376088502942).epsilon(1e-13));

  CHECK(pulse_right(s, -s.half_delay) == doctest::Approx(s.amplitude).epsilon(1e-15));
  CHECK(pulse_right(s, -s.half_delay - s.width) ==
        doctest::Approx(s.amplitude / std::exp(1.0)).epsilon(1e-15));
  CHECK(pulse_right(s, 0.0) == doctest::Approx(pulse_left(s, 0.0)).epsilon(1e-15));
}

TEST_CASE("left and right pulses are mirror images") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> time(-20.0, 20.0);
  std::uniform_real_distribution<double> par(0.1, 5.0);
  for (int i = 0; i < 200; ++i) {
    PulseSchedule s;
    s.amplitude = 100.0 * par(rng);
    s.width = par(rng);
    s.half_delay = par(rng);
    const double t = time(rng);
    CHECK(pulse_left(s, t) == pulse_right(s, -t));
  }
}

TEST_CASE("middle drive synthesis") {
  SystemParams p = testutil::decay_free_params();
  PulseSchedule s;

  SUBCASE("zero drives give zero") {
    s.amplitude = 0.0;
    CHECK(pulse_middle(p, s, 0.3) == 0.0);
  }

  SUBCASE("equal envelopes with J=1/2 and delta'=1 give -Omega") {
    s.half_delay = 0.0;  // left and right coincide
    const double omega = pulse_left(s, 0.7);
    CHECK(pulse_middle(p, s, 0.7) == doctest::Approx(-omega).epsilon(1e-15));
  }

  SUBCASE("baseline schedule at t=0") {
    const double expected = -350.0 * std::exp(-1.0 / 9.0);
    CHECK(pulse_middle(p, s, 0.0) == doctest::Approx(expected).epsilon(1e-14));
  }

  SUBCASE("linear in the amplitude") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.1, 4.0);
    for (int i = 0; i < 100; ++i) {
      const double c = dist(rng);
      const double t = dist(rng) - 2.0;
      PulseSchedule scaled = s;
      scaled.amplitude = s.amplitude * c;
      CHECK(pulse_middle(p, scaled, t) ==
            doctest::Approx(c * pulse_middle(p, s, t)).epsilon(1e-14));
    }
  }

  SUBCASE("zero detuning is rejected") {
    p.delta_L = 0.0;
    CHECK_THROWS_AS(pulse_middle(p, s, 0.0), SimError);
  }
}

TEST_CASE("thermal occupancy") {
  CHECK(thermal_occupancy(std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(thermal_occupancy(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // 1/(e^0.01 - 1), evaluated independently at high precision.
  CHECK(thermal_occupancy(0.01) ==
        doctest::Approx(99.50083333194445).epsilon(1e-13));

  SUBCASE("monotone decreasing in the ratio") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(1e-3, 20.0);
    for (int i = 0; i < 200; ++i) {
      double a = dist(rng), b = dist(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      CHECK(thermal_occupancy(a) > thermal_occupancy(b));
    }
  }

  SUBCASE("nonpositive ratios are rejected") {
    CHECK_THROWS_AS(thermal_occupancy(0.0), SimError);
    CHECK_THROWS_AS(thermal_occupancy(-1.0), SimError);
    CHECK_THROWS_AS(thermal_occupancy(std::nan("")), SimError);
  }
}

TEST_CASE("validate_params") {
  SystemParams p = testutil::decay_free_params();
  PulseSchedule s;

  SUBCASE("the decay-free baseline is clean") {
    const ValidationReport r = validate_params(p, s);
    CHECK(r.ok());
  }

  SUBCASE("J away from omega/2 warns LINEAR_COUPLING") {
    p.j1 = 0.3;
    const ValidationReport r = validate_params(p, s);
    CHECK(!r.has_errors());
    CHECK(r.has_code("LINEAR_COUPLING"));
  }

  SUBCASE("strong coupling estimate warns WEAK_COUPLING") {
    p.g1 = p.g2 = 0.01;  // g*A/|delta'| = 3.5 >= 0.5
    const ValidationReport r = validate_params(p, s);
    CHECK(!r.has_errors());
    CHECK(r.has_code("WEAK_COUPLING"));
  }

  SUBCASE("detuning off the sideband warns RED_SIDEBAND") {
    p.delta_M = 1.2;
    CHECK(validate_params(p, s).has_code("RED_SIDEBAND"));
  }

  SUBCASE("error findings") {
    SystemParams bad = p;
    bad.g1 = std::nan("");
    CHECK(validate_params(bad, s).has_code("NONFINITE"));

    bad = p;
    bad.omega_m1 = -1.0;
    CHECK(validate_params(bad, s).has_code("NONPOSITIVE_FREQUENCY"));

    bad = p;
    bad.gamma_M = -0.1;
    CHECK(validate_params(bad, s).has_code("NEGATIVE_DECAY"));

    bad = p;
    bad.nbar2 = -1.0;
    CHECK(validate_params(bad, s).has_code("NEGATIVE_OCCUPANCY"));

    PulseSchedule w = s;
    w.width = 0.0;
    CHECK(validate_params(p, w).has_code("NONPOSITIVE_WIDTH"));

    w = s;
    w.amplitude = -5.0;
    CHECK(validate_params(p, w).has_code("NEGATIVE_AMPLITUDE"));

    w = s;
    w.t_start = 2.0;
    w.t_end = -2.0;
    CHECK(validate_params(p, w).has_code("INVALID_WINDOW"));
  }

  SUBCASE("pure: repeated calls give identical reports") {
    p.j1 = 0.3;
    p.g1 = 0.02;
    const ValidationReport a = validate_params(p, s);
    const ValidationReport b = validate_params(p, s);
    REQUIRE(a.findings.size() == b.findings.size());
    for (std::size_t i = 0; i < a.findings.size(); ++i) {
      CHECK(a.findings[i].code == b.findings[i].code);
      CHECK(a.findings[i].message == b.findings[i].message);
      CHECK((a.findings[i].severity == b.findings[i].severity));
    }
  }
}

TEST_SUITE_END();
