#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "epidemica/analytic.hpp"

using namespace epidemica;
using Catch::Approx;

namespace {

EpidemicParams walking_params() {
  // N=100, aggregate rate 0.37043/h, one seed.
  return {100, 0.37043 / 100.0, 0.0, 1};
}

}  // namespace

TEST_CASE("epidemic parameter validation") {
  EpidemicParams p = walking_params();
  REQUIRE_NOTHROW(p.validate());
  p.initial_infected = 0;
  REQUIRE_THROWS_AS(p.validate(), config_error);
  p.initial_infected = 100;
  REQUIRE_THROWS_AS(p.validate(), config_error);
  p = walking_params();
  p.population = 1;
  REQUIRE_THROWS_AS(p.validate(), config_error);
}

TEST_CASE("SI closed form boundary behavior") {
  const EpidemicParams p = walking_params();
  REQUIRE(si_infected_closed_form(p, 0.0) == Approx(1.0));
  REQUIRE(si_infected_closed_form(p, 1e4) == Approx(100.0));
  REQUIRE_THROWS_AS(si_infected_closed_form(p, -1.0), config_error);
  EpidemicParams sis = p;
  sis.recovery_rate_per_h = 0.1;
  REQUIRE_THROWS_AS(si_infected_closed_form(sis, 1.0), config_error);
  // Monotone saturation.
  double prev = 0.0;
  for (double t = 0.0; t <= 40.0; t += 0.5) {
    const double i = si_infected_closed_form(p, t);
    REQUIRE(i >= prev);
    prev = i;
  }
}

TEST_CASE("SI closed form agrees with RK4 to 1e-6 relative") {
  const EpidemicParams p = walking_params();
  const OdeSolution sol = solve_epidemic_ode(p, EpidemicModel::si, 30.0, 0.01);
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.t_h.size(); ++i) {
    const double exact = si_infected_closed_form(p, sol.t_h[i]);
    worst = std::max(worst, std::abs(sol.infected[i] - exact) / exact);
  }
  REQUIRE(worst <= 1e-6);
  REQUIRE(si_infected_closed_form(p, 10.0) == Approx(29.0941).margin(1e-3));
}

TEST_CASE("ODE solver guards") {
  const EpidemicParams p = walking_params();
  REQUIRE_THROWS_AS(solve_epidemic_ode(p, EpidemicModel::si, 10.0, 11.0), config_error);
  REQUIRE_THROWS_AS(solve_epidemic_ode(p, EpidemicModel::si, -1.0, 0.1), config_error);
  REQUIRE_THROWS_AS(solve_epidemic_ode(p, EpidemicModel::si, 10.0, 0.0), config_error);
}

TEST_CASE("SIS decays in the subcritical regime") {
  EpidemicParams p = walking_params();
  p.recovery_rate_per_h = 0.5;  // gamma > beta*N = 0.37043
  const OdeSolution sol = solve_epidemic_ode(p, EpidemicModel::sis, 60.0, 0.01);
  REQUIRE(sol.infected.back() < 0.05);
  REQUIRE(sol.infected.back() < sol.infected.front());
}

TEST_CASE("SIR conserves the population") {
  EpidemicParams p{1000, 3e-4, 0.25, 10};
  const OdeSolution sol = solve_epidemic_ode(p, EpidemicModel::sir, 40.0, 0.01);
  REQUIRE(sol.max_conservation_error() <= 1e-8 * 1000);
  // Recovered mass grows, susceptibles fall.
  REQUIRE(sol.recovered.back() > 0.0);
  REQUIRE(sol.susceptible.back() < 990.0);
}

TEST_CASE("SIS steady state") {
  EpidemicParams p{100, 0.01, 0.0, 1};
  REQUIRE(sis_steady_state(p) == Approx(100.0));
  p.recovery_rate_per_h = 0.5;
  REQUIRE(sis_steady_state(p) == Approx(50.0));
  // Long-horizon ODE lands on the same level.
  const OdeSolution sol = solve_epidemic_ode(p, EpidemicModel::sis, 200.0, 0.01);
  REQUIRE(std::abs(sol.infected.back() - 50.0) < 0.1);
  p.recovery_rate_per_h = 2.0;  // gamma >= beta*N
  REQUIRE(sis_steady_state(p) == 0.0);
  p.pairwise_rate_per_h = 0.0;
  REQUIRE(sis_steady_state(p) == 0.0);
}

TEST_CASE("target success cdf anchors and monotonicity") {
  const EpidemicParams p = walking_params();
  REQUIRE(target_success_cdf(p, 0.0) == 0.0);
  REQUIRE(target_success_cdf(p, 10.0) == Approx(0.283778).margin(5e-6));
  REQUIRE(target_success_cdf(p, 25.0) == Approx(0.990580).margin(5e-6));
  REQUIRE_THROWS_AS(target_success_cdf(p, -0.5), config_error);
  double prev = -1.0;
  for (double t = 0.0; t <= 40.0; t += 0.25) {
    const double v = target_success_cdf(p, t);
    REQUIRE(v >= prev);
    REQUIRE(v <= 1.0);
    prev = v;
  }
  // The ODE-integrated CDF reproduces the closed form.
  const OdeSolution sol = solve_epidemic_ode(p, EpidemicModel::si, 30.0, 0.01);
  for (std::size_t i = 0; i < sol.t_h.size(); i += 100) {
    REQUIRE(sol.target_hit_cdf[i] == Approx(target_success_cdf(p, sol.t_h[i])).margin(1e-7));
  }
}

TEST_CASE("expected risk anchors, the zero-rate case, and quadrature agreement") {
  const EpidemicParams p = walking_params();
  REQUIRE(expected_risk(p, 0.0) == 0.0);
  REQUIRE(expected_risk(p, 10.0) == Approx(0.901022).margin(5e-6));
  REQUIRE(expected_risk(p, 20.0) == Approx(7.725332).margin(5e-6));
  REQUIRE(expected_risk(p, 20.0) / expected_risk(p, 10.0) == Approx(8.574).margin(0.01));
  REQUIRE_THROWS_AS(expected_risk(p, -1.0), config_error);

  EpidemicParams frozen = p;
  frozen.pairwise_rate_per_h = 0.0;
  frozen.initial_infected = 3;
  REQUIRE(expected_risk(frozen, 7.0) == Approx(3.0 * 7.0 / 100.0));

  // Trapezoid quadrature over the RK4 trajectory as an independent route.
  const OdeSolution sol = solve_epidemic_ode(p, EpidemicModel::si, 20.0, 0.005);
  double integral = 0.0;
  for (std::size_t i = 1; i < sol.t_h.size(); ++i) {
    integral += 0.5 * (sol.infected[i] + sol.infected[i - 1]) * (sol.t_h[i] - sol.t_h[i - 1]);
  }
  REQUIRE(expected_risk(p, 20.0) == Approx(integral / 100.0).margin(1e-6));

  // Strictly increasing in the horizon.
  double prev = -1.0;
  for (double t = 0.0; t <= 30.0; t += 0.5) {
    const double r = expected_risk(p, t);
    REQUIRE(r > prev);
    prev = r;
  }
}

TEST_CASE("optimal timeout anchors against a bisection oracle") {
  const EpidemicParams p = walking_params();
  REQUIRE(optimal_timeout(p, 0.0) == 0.0);
  REQUIRE_THROWS_AS(optimal_timeout(p, 1.0), infeasible_error);
  REQUIRE_THROWS_AS(optimal_timeout(p, -0.1), infeasible_error);

  const auto bisect = [&](double rho) {
    double lo = 0.0, hi = 200.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (target_success_cdf(p, mid) >= rho ? hi : lo) = mid;
    }
    return hi;
  };
  REQUIRE(optimal_timeout(p, 0.95) == Approx(bisect(0.95)).margin(1e-6));
  REQUIRE(optimal_timeout(p, 0.90) == Approx(bisect(0.90)).margin(1e-6));
  REQUIRE(optimal_timeout(p, 0.95) == Approx(20.3821).margin(1e-3));
  REQUIRE(optimal_timeout(p, 0.90) == Approx(18.3665).margin(1e-3));
  // Reaching the target reliability exactly at the returned time.
  REQUIRE(target_success_cdf(p, optimal_timeout(p, 0.8)) == Approx(0.8).margin(1e-9));
}

TEST_CASE("optimal timeout shrinks with more seeds and faster mixing") {
  for (double rho : {0.5, 0.9}) {
    double prev = 1e9;
    for (std::int32_t seeds : {1, 2, 4, 8, 16}) {
      EpidemicParams p = walking_params();
      p.initial_infected = seeds;
      const double t = optimal_timeout(p, rho);
      REQUIRE(t < prev);
      prev = t;
    }
    prev = 1e9;
    for (double rate : {0.002, 0.004, 0.008, 0.016, 0.032}) {
      EpidemicParams p = walking_params();
      p.pairwise_rate_per_h = rate;
      const double t = optimal_timeout(p, rho);
      REQUIRE(t < prev);
      prev = t;
    }
  }
}

TEST_CASE("risk at the optimal timeout collapses to ln(1/(1-rho))/rate") {
  // Closed-form identity; also the exact statement of per-user risk being
  // independent of the population at a fixed aggregate rate.
  for (double rho : {0.25, 0.5, 0.9, 0.99}) {
    for (std::int32_t n : {50, 100, 200}) {
      for (std::int32_t seeds : {1, 5}) {
        EpidemicParams p{n, 0.37043 / n, 0.0, seeds};
        const double risk = expected_risk(p, optimal_timeout(p, rho));
        REQUIRE(risk == Approx(std::log(1.0 / (1.0 - rho)) / 0.37043).margin(1e-9));
      }
    }
  }
}

TEST_CASE("gamma > 0 falls back to the ODE route") {
  EpidemicParams p{200, 2e-3, 0.05, 2};
  const double cdf = target_success_cdf(p, 8.0);
  REQUIRE(cdf > 0.0);
  REQUIRE(cdf < 1.0);
  const double risk = expected_risk(p, 8.0);
  REQUIRE(risk > 0.0);
  const double t = optimal_timeout(p, 0.5);
  REQUIRE(target_success_cdf(p, t) == Approx(0.5).margin(1e-6));
}

TEST_CASE("ode csv export schema") {
  EpidemicParams p{10, 0.01, 0.0, 1};
  const OdeSolution sol = solve_epidemic_ode(p, EpidemicModel::si, 1.0, 0.5);
  const std::string csv = to_csv(sol);
  REQUIRE(csv.rfind("t,S,I,R,P\n0,9,1,0,0\n", 0) == 0);
}
