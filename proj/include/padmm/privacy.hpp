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
//
// Differential-privacy plumbing: per-update sensitivity of the closed-form
// primal step, Gaussian noise calibration for a target (ε, δ) across t·l
// adaptive compositions, the mechanism itself, and a budget auditor.

#ifndef PADMM_PRIVACY_HPP_
#define PADMM_PRIVACY_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace padmm {

// Default composition constant sqrt(ln(1/δ) / ln(1.25/δ)); always ≤ 1.
double default_c0(double delta);

// Noise multiplier σ = c0 · sqrt(t·l·2·ln(1.25/δ)) / ε.
double noise_multiplier(double epsilon, double delta, int t, int l, double c0);

// Total privacy charge of `steps` adaptive compositions of a per-step
// (ε, δ) mechanism: ε' = c0 · sqrt(steps) · ε.
double composed_epsilon(double per_step_epsilon, long long steps, double c0);

// A run's privacy parameters with the calibrated noise multiplier.
struct PrivacyBudget {
  double epsilon = 0.0;  // total ε > 0
  double delta = 0.0;    // δ in (0,1)
  double c0 = 1.0;       // composition constant
  int t = 1;             // outer iterations
  int l = 1;             // inner updates per outer iteration
  double sigma = 0.0;    // noise multiplier σ

  // Validates ranges and computes sigma.  c0_override ≤ 0 selects the
  // default constant for the given delta.
  static PrivacyBudget make(double epsilon, double delta, int t, int l,
                            double c0_override = 0.0);
};

// Inputs of the per-update l2 sensitivity bound.
struct SensitivityParams {
  double c1 = 1.0;   // loss Lipschitz constant
  double rho = 0.0;  // ADMM penalty ρ
  int degree = 0;    // neighbor count |N_i|
  int m_i = 0;       // local sample count
  double eta = 0.0;  // approximation parameter η for this update
};

// s = 2·c1 / ((2·ρ·degree + η) · m_i).
double sensitivity(const SensitivityParams& p);

// Adds i.i.d. N(0, (s·σ)²) noise to every coordinate of w in place.
void gaussian_perturb(std::vector<double>& w, double s, double sigma,
                      std::mt19937_64& rng);

// Result of auditing a run of `steps_taken` noisy updates against a budget.
struct AuditReport {
  double per_step_epsilon = 0.0;
  double composed_epsilon = 0.0;
  double sigma = 0.0;
  double c0 = 1.0;
  int t = 0;
  int l = 0;
  long long steps_taken = 0;
  double slack = 0.0;            // budget ε − composed ε (≥ 0 when within budget)
  bool per_step_at_least_one = false;  // √-composition assumes per-step ε < 1

  std::string to_text() const;  // flat key: value block
};

// Recomputes the per-step ε implied by (budget, σ), composes it over the
// steps actually taken, and checks the result against the budgeted ε
// (1e−9 tolerance).  Throws BudgetExceededError when the run took more
// steps than budgeted or the composed ε overshoots.  steps_taken < 0
// means "audit the plan": use the full t·l.
AuditReport audit_total_budget(const PrivacyBudget& budget, long long steps_taken = -1);

}  // namespace padmm

#endif  // PADMM_PRIVACY_HPP_
