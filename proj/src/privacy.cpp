// Copyright 2026 The padmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "padmm/privacy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "padmm/errors.hpp"

namespace padmm {

namespace {

void check_epsilon_delta(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw ParameterError("privacy: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("privacy: delta must be in (0,1)");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double default_c0(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("default_c0: delta must be in (0,1)");
  return std::sqrt(std::log(1.0 / delta) / std::log(1.25 / delta));
}

double noise_multiplier(double epsilon, double delta, int t, int l, double c0) {
  check_epsilon_delta(epsilon, delta);
  if (t < 1) throw ParameterError("noise_multiplier: t must be >= 1");
  if (l < 1) throw ParameterError("noise_multiplier: l must be >= 1");
  if (!(c0 > 0.0)) throw ParameterError("noise_multiplier: c0 must be > 0");
  const double steps = static_cast<double>(t) * static_cast<double>(l);
  return c0 * std::sqrt(steps * 2.0 * std::log(1.25 / delta)) / epsilon;
}

double composed_epsilon(double per_step_epsilon, long long steps, double c0) {
  if (!(per_step_epsilon > 0.0)) {
    throw ParameterError("composed_epsilon: per_step_epsilon must be > 0");
  }
  if (steps < 0) throw ParameterError("composed_epsilon: steps must be >= 0");
  if (!(c0 > 0.0)) throw ParameterError("composed_epsilon: c0 must be > 0");
  return c0 * std::sqrt(static_cast<double>(steps)) * per_step_epsilon;
}

PrivacyBudget PrivacyBudget::make(double epsilon, double delta, int t, int l,
                                  double c0_override) {
  check_epsilon_delta(epsilon, delta);
  PrivacyBudget b;
  b.epsilon = epsilon;
  b.delta = delta;
  b.t = t;
  b.l = l;
  b.c0 = c0_override > 0.0 ? c0_override : default_c0(delta);
  b.sigma = noise_multiplier(epsilon, delta, t, l, b.c0);
  return b;
}

double sensitivity(const SensitivityParams& p) {
  if (!(p.c1 > 0.0)) throw ParameterError("sensitivity: c1 must be > 0");
  if (!(p.rho > 0.0)) throw ParameterError("sensitivity: rho must be > 0");
  if (p.degree < 1) throw ParameterError("sensitivity: degree must be >= 1");
  if (p.m_i < 1) throw ParameterError("sensitivity: m_i must be >= 1");
  if (!(p.eta > 0.0)) throw ParameterError("sensitivity: eta must be > 0");
  return 2.0 * p.c1 / ((2.0 * p.rho * p.degree + p.eta) * p.m_i);
}

void gaussian_perturb(std::vector<double>& w, double s, double sigma,
                      std::mt19937_64& rng) {
  if (s < 0.0) throw ParameterError("gaussian_perturb: s must be >= 0");
  if (sigma < 0.0) throw ParameterError("gaussian_perturb: sigma must be >= 0");
  const double stddev = s * sigma;
  if (stddev == 0.0) return;  // degenerate Gaussian: leave w untouched
  std::normal_distribution<double> noise(0.0, stddev);
  for (double& x : w) x += noise(rng);
}

std::string AuditReport::to_text() const {
  std::ostringstream out;
  out << "per_step_epsilon=" << fmt(per_step_epsilon) << '\n'
      << "composed_epsilon=" << fmt(composed_epsilon) << '\n'
      << "sigma=" << fmt(sigma) << '\n'
      << "c0=" << fmt(c0) << '\n'
      << "t=" << t << '\n'
      << "l=" << l << '\n'
      << "steps_taken=" << steps_taken << '\n'
      << "slack=" << fmt(slack) << '\n';
  if (per_step_at_least_one) {
    out << "warning=per-step epsilon >= 1; sqrt composition assumes per-step epsilon < 1\n";
  }
  return out.str();
}

AuditReport audit_total_budget(const PrivacyBudget& budget, long long steps_taken) {
  check_epsilon_delta(budget.epsilon, budget.delta);
  if (budget.t < 1 || budget.l < 1) {
    throw ParameterError("audit_total_budget: t and l must be >= 1");
  }
  if (!(budget.sigma > 0.0)) throw ParameterError("audit_total_budget: sigma must be > 0");

  const long long budgeted_steps =
      static_cast<long long>(budget.t) * static_cast<long long>(budget.l);
  const long long steps = steps_taken < 0 ? budgeted_steps : steps_taken;
  if (steps > budgeted_steps) {
    throw BudgetExceededError("audit: run took " + std::to_string(steps) +
                              " noisy steps but budgeted only " +
                              std::to_string(budgeted_steps));
  }

  AuditReport report;
  report.sigma = budget.sigma;
  report.c0 = budget.c0;
  report.t = budget.t;
  report.l = budget.l;
  report.steps_taken = steps;
  // Invert the calibration: a Gaussian mechanism with multiplier σ is
  // (sqrt(2·ln(1.25/δ))/σ, δ)-DP per step.
  report.per_step_epsilon = std::sqrt(2.0 * std::log(1.25 / budget.delta)) / budget.sigma;
  report.composed_epsilon = composed_epsilon(report.per_step_epsilon, steps, budget.c0);
  report.slack = budget.epsilon - report.composed_epsilon;
  report.per_step_at_least_one = report.per_step_epsilon >= 1.0;

  if (report.composed_epsilon > budget.epsilon + 1e-9) {
    throw BudgetExceededError("audit: composed epsilon " + fmt(report.composed_epsilon) +
                              " exceeds budgeted " + fmt(budget.epsilon));
  }
  return report;
}

}  // namespace padmm
