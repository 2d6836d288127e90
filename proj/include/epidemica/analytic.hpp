#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "epidemica/io.hpp"

namespace epidemica {

enum class EpidemicModel { si, sis, sir };

inline const char* to_string(EpidemicModel m) {
  switch (m) {
    case EpidemicModel::si: return "si";
    case EpidemicModel::sis: return "sis";
    default: return "sir";
  }
}

struct EpidemicParams {
  std::int32_t population = 0;        // N
  double pairwise_rate_per_h = 0.0;   // infection rate per (infected, susceptible) pair
  double recovery_rate_per_h = 0.0;   // 0 for the SI family
  std::int32_t initial_infected = 1;

  double aggregate_rate_per_h() const { return pairwise_rate_per_h * population; }

  void validate() const {
    if (population < 2) throw config_error("epidemic: population must be >= 2");
    if (!(pairwise_rate_per_h >= 0.0)) throw config_error("epidemic: pairwise rate must be >= 0");
    if (!(recovery_rate_per_h >= 0.0)) throw config_error("epidemic: recovery rate must be >= 0");
    if (initial_infected < 1 || initial_infected >= population)
      throw config_error("epidemic: need 1 <= initial infected < population");
  }
};

// Logistic growth of the mixed SI model:
//   I(t) = N I0 / (I0 + (N - I0) e^{-beta N t}).
inline double si_infected_closed_form(const EpidemicParams& p, double t) {
  p.validate();
  if (p.recovery_rate_per_h != 0.0)
    throw config_error("si_infected_closed_form: requires zero recovery rate");
  if (t < 0.0) throw config_error("si_infected_closed_form: t must be >= 0");
  const double n = p.population, i0 = p.initial_infected;
  return n * i0 / (i0 + (n - i0) * std::exp(-p.aggregate_rate_per_h() * t));
}

struct OdeSolution {
  std::vector<double> t_h;
  std::vector<double> susceptible;
  std::vector<double> infected;
  std::vector<double> recovered;
  std::vector<double> target_hit_cdf;
  std::vector<double> cum_infected_time;  // integral of I dt, for risk quadrature
  double step_h = 0.0;
  EpidemicModel model = EpidemicModel::si;

  double max_conservation_error() const {
    const double n = susceptible.empty()
                         ? 0.0
                         : susceptible.front() + infected.front() + recovered.front();
    double worst = 0.0;
    for (std::size_t i = 0; i < t_h.size(); ++i) {
      worst = std::max(worst, std::abs(susceptible[i] + infected[i] + recovered[i] - n));
    }
    return worst;
  }
};

inline constexpr const char* kOdeCsvHeader = "t,S,I,R,P";

inline std::string to_csv(const OdeSolution& sol) {
  std::string out = kOdeCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < sol.t_h.size(); ++i) {
    out += format_double(sol.t_h[i]);
    out += ',';
    out += format_double(sol.susceptible[i]);
    out += ',';
    out += format_double(sol.infected[i]);
    out += ',';
    out += format_double(sol.recovered[i]);
    out += ',';
    out += format_double(sol.target_hit_cdf[i]);
    out += '\n';
  }
  return out;
}

// Fixed-step RK4 for the compartment dynamics, the target-hit CDF
// dP/dt = beta I (1 - P), and the running integral of I. The requested step
// is shrunk (never grown) so the grid lands exactly on the horizon.
inline OdeSolution solve_epidemic_ode(const EpidemicParams& p, EpidemicModel model, double horizon_h,
                                      double step_h = 0.01) {
  p.validate();
  if (!(horizon_h > 0.0)) throw config_error("ode: horizon must be positive");
  if (!(step_h > 0.0)) throw config_error("ode: step must be positive");
  if (step_h > horizon_h) throw config_error("ode: step exceeds horizon");

  const double beta = p.pairwise_rate_per_h;
  const double gamma = p.recovery_rate_per_h;
  const double n = p.population;

  // State: S, I, R, P, Q (= integral of I).
  struct State {
    double s, i, r, pr, q;
  };
  const auto deriv = [&](const State& y) {
    State d{};
    switch (model) {
      case EpidemicModel::si:
        d.s = -beta * y.s * y.i;
        d.i = beta * y.s * y.i;
        d.r = 0.0;
        break;
      case EpidemicModel::sis:
        d.i = beta * y.i * (n - y.i) - gamma * y.i;
        d.s = -d.i;
        d.r = 0.0;
        break;
      case EpidemicModel::sir:
        d.s = -beta * y.s * y.i;
        d.i = beta * y.s * y.i - gamma * y.i;
        d.r = gamma * y.i;
        break;
    }
    d.pr = beta * y.i * (1.0 - y.pr);
    d.q = y.i;
    return d;
  };
  const auto axpy = [](const State& y, double a, const State& d) {
    return State{y.s + a * d.s, y.i + a * d.i, y.r + a * d.r, y.pr + a * d.pr, y.q + a * d.q};
  };

  const auto steps = static_cast<std::size_t>(std::ceil(horizon_h / step_h - 1e-12));
  const double h = horizon_h / static_cast<double>(steps);

  OdeSolution sol;
  sol.model = model;
  sol.step_h = h;
  sol.t_h.reserve(steps + 1);

  State y{n - static_cast<double>(p.initial_infected), static_cast<double>(p.initial_infected),
          0.0, 0.0, 0.0};
  const auto record = [&](double t, const State& s) {
    sol.t_h.push_back(t);
    sol.susceptible.push_back(s.s);
    sol.infected.push_back(s.i);
    sol.recovered.push_back(s.r);
    sol.target_hit_cdf.push_back(s.pr);
    sol.cum_infected_time.push_back(s.q);
  };
  record(0.0, y);
  for (std::size_t k = 1; k <= steps; ++k) {
    const State k1 = deriv(y);
    const State k2 = deriv(axpy(y, 0.5 * h, k1));
    const State k3 = deriv(axpy(y, 0.5 * h, k2));
    const State k4 = deriv(axpy(y, h, k3));
    y = State{y.s + h / 6.0 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s),
              y.i + h / 6.0 * (k1.i + 2 * k2.i + 2 * k3.i + k4.i),
              y.r + h / 6.0 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r),
              y.pr + h / 6.0 * (k1.pr + 2 * k2.pr + 2 * k3.pr + k4.pr),
              y.q + h / 6.0 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q)};
    if (!std::isfinite(y.s) || !std::isfinite(y.i) || !std::isfinite(y.r) || !std::isfinite(y.pr)) {
      throw data_error("ode: state became non-finite at t=" +
                       format_double(static_cast<double>(k) * h) + " (model " +
                       std::string(to_string(model)) + ", step " + format_double(h) + ")");
    }
    record(static_cast<double>(k) * h, y);
  }
  return sol;
}

// Endemic level of the mixed SIS model, max(0, N - gamma/beta).
inline double sis_steady_state(const EpidemicParams& p) {
  p.validate();
  if (p.pairwise_rate_per_h == 0.0) return 0.0;
  return std::max(0.0, p.population - p.recovery_rate_per_h / p.pairwise_rate_per_h);
}

// Probability that a fixed node has been reached by time t, treating the
// target as one of the N mixed nodes. For the SI family this is closed-form:
//   P(t) = 1 - (1 + c) / (e^{beta N t} + c),  c = (N - I0) / I0.
inline double target_success_cdf(const EpidemicParams& p, double t) {
  p.validate();
  if (t < 0.0) throw config_error("target_success_cdf: t must be >= 0");
  if (p.recovery_rate_per_h == 0.0) {
    const double c = (p.population - p.initial_infected) / static_cast<double>(p.initial_infected);
    return 1.0 - (1.0 + c) / (std::exp(p.aggregate_rate_per_h() * t) + c);
  }
  if (t == 0.0) return 0.0;
  return solve_epidemic_ode(p, EpidemicModel::sir, t).target_hit_cdf.back();
}

// Expected per-user exposure (1/N) * integral_0^T I(t) dt in hours, with no
// early stopping at the hit. Closed form for the SI family:
//   T + ln((1 + c e^{-beta N T}) / (1 + c)) / (beta N).
inline double expected_risk(const EpidemicParams& p, double t) {
  p.validate();
  if (t < 0.0) throw config_error("expected_risk: T must be >= 0");
  if (p.recovery_rate_per_h == 0.0) {
    if (p.pairwise_rate_per_h == 0.0)
      return static_cast<double>(p.initial_infected) * t / p.population;
    const double lam = p.aggregate_rate_per_h();
    const double c = (p.population - p.initial_infected) / static_cast<double>(p.initial_infected);
    return t + std::log((1.0 + c * std::exp(-lam * t)) / (1.0 + c)) / lam;
  }
  if (t == 0.0) return 0.0;
  return solve_epidemic_ode(p, EpidemicModel::sir, t).cum_infected_time.back() / p.population;
}

// Smallest timeout whose success probability reaches the reliability target;
// by monotonicity of the risk integral it also minimizes exposure subject to
// that constraint. Closed form for the SI family, bisection otherwise.
inline double optimal_timeout(const EpidemicParams& p, double reliability) {
  p.validate();
  if (!(reliability >= 0.0 && reliability < 1.0))
    throw infeasible_error("optimal_timeout: reliability must lie in [0,1)");
  if (reliability == 0.0) return 0.0;
  if (p.recovery_rate_per_h == 0.0) {
    if (p.pairwise_rate_per_h == 0.0)
      throw infeasible_error("optimal_timeout: zero rate cannot reach a positive reliability");
    const double n = p.population, i0 = p.initial_infected;
    return std::log((n / (1.0 - reliability) - (n - i0)) / i0) / p.aggregate_rate_per_h();
  }
  double lo = 0.0, hi = 1.0;
  while (target_success_cdf(p, hi) < reliability) {
    hi *= 2.0;
    if (hi > 1e7) throw infeasible_error("optimal_timeout: reliability unreachable");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (target_success_cdf(p, mid) >= reliability ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace epidemica
