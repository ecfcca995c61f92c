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
// Regularized logistic-regression objective: per-node empirical risk, its
// gradient, Lipschitz constants, and projection onto the model domain
// (an origin-centered ball of diameter D).

#ifndef PADMM_OBJECTIVE_HPP_
#define PADMM_OBJECTIVE_HPP_

#include <span>
#include <utility>
#include <vector>

#include "padmm/dataset.hpp"

namespace padmm {

using ModelVector = std::vector<double>;

// Constants describing the objective
//   L_i(w) = (1/m_i) Σ_j log(1 + exp(−b_j wᵀa_j)) + (λ/(2n)) ‖w‖²
// shared by all nodes of a run.  c1 bounds ‖∇loss‖ for unit-ball features;
// c2 bounds the full local objective's gradient over the domain ball.
struct ObjectiveSpec {
  double lambda = 0.0;       // regularizer weight λ ≥ 0
  int n = 1;                 // node count (the λ/n split)
  double c1 = 1.0;           // loss Lipschitz constant
  double c2 = 1.0;           // local-objective Lipschitz constant
  double domain_diameter = 2.0;  // D; models live in the ball of radius D/2

  // Validates inputs, fills (c1, c2) from lipschitz_constants().  A positive
  // c2_override replaces the derived c2.
  static ObjectiveSpec make(double lambda, int n, double domain_diameter,
                            double c2_override = 0.0);
};

// Overflow-safe log(1 + exp(z)): max(z,0) + log1p(exp(−|z|)).
double log1p_exp(double z);

// log(1 + exp(−b·wᵀa)) for one labelled sample.
double logistic_loss(std::span<const double> features, int label, const ModelVector& w);
double logistic_loss(const Sample& sample, const ModelVector& w);

// Mean logistic loss over the partition plus (λ/(2n))‖w‖².
double local_objective(const NodePartition& part, const ObjectiveSpec& spec,
                       const ModelVector& w);

// Gradient of local_objective:
//   (1/m_i) Σ_j [−b_j a_j / (1 + exp(b_j wᵀa_j))] + (λ/n) w.
// The out-parameter overload reuses the caller's buffer (resized to d).
ModelVector local_gradient(const NodePartition& part, const ObjectiveSpec& spec,
                           const ModelVector& w);
void local_gradient(const NodePartition& part, const ObjectiveSpec& spec,
                    const ModelVector& w, ModelVector& out);

// (c1, c2) for unit-norm features over a ball of diameter D:
//   c1 = 1,  c2 = c1 + (λ/n)·(D/2).
std::pair<double, double> lipschitz_constants(double lambda, int n, double domain_diameter);

// Radial projection onto the ball of radius D/2: w unchanged when
// ‖w‖ ≤ D/2, else scaled to the boundary.
void project_to_domain_inplace(ModelVector& w, double domain_diameter);
ModelVector project_to_domain(ModelVector w, double domain_diameter);

}  // namespace padmm

#endif  // PADMM_OBJECTIVE_HPP_
