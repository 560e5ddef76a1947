#include <cmath>
#include <random>

#include "doctest.h"
#include "mfc/actuation.hpp"
#include "mfc/plant.hpp"
#include "support/oracles.hpp"

using namespace mfc;

TEST_SUITE("rk4") {
  TEST_CASE("exponential decay") {
    auto f = [](double, const StateVec& x, double) { return StateVec{-x[0], 0.0}; };
    StateVec x{1.0, 0.0};
    for (int k = 0; k < 10; ++k) x = rk4_step(f, 0.01 * k, x, 0.0, 0.01);
    CHECK(std::abs(x[0] - std::exp(-0.1)) <= 1e-7);
  }

  TEST_CASE("constant rate is integrated exactly") {
    auto f = [](double, const StateVec&, double v) { return StateVec{v, -2.0}; };
    StateVec x{0.5, 1.0};
    x = rk4_step(f, 0.0, x, 3.0, 0.25);
    CHECK(x[0] == doctest::Approx(1.25));
    CHECK(x[1] == doctest::Approx(0.5));
  }

  TEST_CASE("blow-up raises a divergence error") {
    auto f = [](double, const StateVec& x, double) { return StateVec{1e12 * x[0], 0.0}; };
    CHECK_THROWS_AS(rk4_step(f, 0.0, StateVec{1.0, 0.0}, 0.0, 1.0), DivergenceError);
    auto g = [](double, const StateVec&, double) { return StateVec{NAN, 0.0}; };
    CHECK_THROWS_AS(rk4_step(g, 0.0, StateVec{1.0, 0.0}, 0.0, 1.0), DivergenceError);
  }

  TEST_CASE("self-convergence is fourth order on sys1") {
    auto v = [](double t) { return 0.5 * std::sin(t); };
    auto dyn = [](const StateVec& x, double u) { return system1_dynamics(x, u); };
    const double horizon = 2.0;
    auto end_value = [&](double dt) { return oracle::simulate_output(dyn, v, dt, horizon).back(); };
    const double y1 = end_value(0.04), y2 = end_value(0.02), y4 = end_value(0.01);
    CHECK(oracle::observed_order(std::abs(y1 - y2), std::abs(y2 - y4)) >= 3.9);
  }
}

TEST_SUITE("plants") {
  TEST_CASE("dynamics examples") {
    auto d1 = system1_dynamics({1.0, 1.0}, 0.5);
    CHECK(d1[0] == doctest::Approx(2.5));
    CHECK(d1[1] == doctest::Approx(0.0));
    auto d2 = system2_dynamics({1.0, 1.0}, 1.0);
    CHECK(d2[0] == doctest::Approx(4.0));
    CHECK(d2[1] == doctest::Approx(-4.0));
    CHECK(system1_dynamics({0.0, 0.0}, 1.0)[0] == doctest::Approx(4.0));
    auto d3 = system2_dynamics({0.0, 0.0}, 1.0);
    CHECK(d3[0] == doctest::Approx(3.0));
    CHECK(d3[1] == doctest::Approx(-2.0));
  }

  TEST_CASE("zero input from rest stays at rest") {
    for (const char* id : {"sys1", "sys2", "ultralocal"}) {
      Plant p(*find_plant(id), {}, Schedule::constant(0.0), 1.0);
      for (int k = 0; k < 1000; ++k) p.advance(k * 1e-3, 0.0, 1e-3, 1);
      CHECK(p.output() == 0.0);
    }
  }

  TEST_CASE("realizations satisfy the input-output equations at second order") {
    auto v = [](double t) { return 0.5 * std::sin(t); };
    auto vd = [](double t) { return 0.5 * std::cos(t); };
    auto d1 = [](const StateVec& x, double u) { return system1_dynamics(x, u); };
    auto d2 = [](const StateVec& x, double u) { return system2_dynamics(x, u); };
    for (int which = 0; which < 2; ++which) {
      CAPTURE(which);
      auto res = [&](double dt) {
        return which == 0 ? oracle::max_equation_residual(d1, oracle::sys1_residual, v, vd, dt, 4.0)
                          : oracle::max_equation_residual(d2, oracle::sys2_residual, v, vd, dt, 4.0);
      };
      const double r1 = res(0.04), r2 = res(0.02), r3 = res(0.01);
      CHECK(oracle::observed_order(r1, r2) >= 2.0);
      CHECK(oracle::observed_order(r2, r3) >= 2.0);
      CHECK(res(1e-4) < 1e-4);
    }
  }

  TEST_CASE("registry lookups") {
    CHECK(find_plant("sys1")->dim == 2);
    CHECK(find_plant("ultralocal")->dim == 1);
    CHECK(find_plant("sys3") == nullptr);
  }
}

TEST_SUITE("actuation") {
  TEST_CASE("clamp and fault") {
    auto a = apply_actuation(2.0, 0.5, 1.65);
    CHECK(a.v == 1.65);
    CHECK(a.v_bar == doctest::Approx(0.825));
    auto b = apply_actuation(-0.3, 1.0, 1.65);
    CHECK(b.v == -0.3);
    CHECK(b.v_bar == -0.3);
    CHECK(apply_actuation(-9.0, 1.0, 1.65).v == -1.65);
  }

  TEST_CASE("saturation is idempotent") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
      const double once = apply_actuation(u(rng), 1.0, 1.65).v;
      CHECK(apply_actuation(once, 1.0, 1.65).v == once);
      CHECK(std::abs(once) <= 1.65);
    }
  }

  TEST_CASE("measurement chain") {
    std::mt19937_64 rng(1);
    CHECK(measure(0.123, 0.0, 0, rng) == 0.123);
    CHECK(quantize(0.0, 12) == 0.0);
    CHECK(quantize(100.0, 12) == doctest::Approx(2047 * adc_lsb(12)));
    CHECK(quantize(-100.0, 12) == doctest::Approx(-2048 * adc_lsb(12)));
    std::uniform_real_distribution<double> u(-3.3, 3.3 - adc_lsb(12));
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double y = u(rng);
      worst = std::max(worst, std::abs(quantize(y, 12) - y));
    }
    CHECK(worst <= 8.06e-4);
  }

  TEST_CASE("noise-free measurement leaves the generator untouched") {
    std::mt19937_64 a(9), b(9);
    (void)measure(1.0, 0.0, 12, a);
    CHECK(a() == b());
  }
}
