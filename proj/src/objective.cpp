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

#include "padmm/objective.hpp"

#include <algorithm>
#include <cmath>

#include "padmm/errors.hpp"
#include "padmm/vec.hpp"

namespace padmm {

ObjectiveSpec ObjectiveSpec::make(double lambda, int n, double domain_diameter,
                                  double c2_override) {
  if (lambda < 0.0) throw ParameterError("ObjectiveSpec: lambda must be >= 0");
  if (n < 1) throw ParameterError("ObjectiveSpec: n must be >= 1");
  if (domain_diameter <= 0.0) {
    throw ParameterError("ObjectiveSpec: domain_diameter must be > 0");
  }
  if (c2_override < 0.0) throw ParameterError("ObjectiveSpec: c2_override must be >= 0");
  ObjectiveSpec spec;
  spec.lambda = lambda;
  spec.n = n;
  spec.domain_diameter = domain_diameter;
  auto [c1, c2] = lipschitz_constants(lambda, n, domain_diameter);
  spec.c1 = c1;
  spec.c2 = c2_override > 0.0 ? c2_override : c2;
  return spec;
}

double log1p_exp(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

double logistic_loss(std::span<const double> features, int label, const ModelVector& w) {
  if (features.size() != w.size()) {
    throw ShapeError("logistic_loss: feature dimension " + std::to_string(features.size()) +
                     " != model dimension " + std::to_string(w.size()));
  }
  return log1p_exp(-static_cast<double>(label) * dot(features, w));
}

double logistic_loss(const Sample& sample, const ModelVector& w) {
  return logistic_loss(sample.features, sample.label, w);
}

double local_objective(const NodePartition& part, const ObjectiveSpec& spec,
                       const ModelVector& w) {
  if (part.size() == 0) throw PartitionError("local_objective: empty partition");
  if (part.dim < 1) throw ShapeError("local_objective: zero-dimensional features");
  if (part.dim != static_cast<int>(w.size())) {
    throw ShapeError("local_objective: partition dimension " + std::to_string(part.dim) +
                     " != model dimension " + std::to_string(w.size()));
  }
  double loss_sum = 0.0;
  for (std::size_t j = 0; j < part.size(); ++j) {
    loss_sum += log1p_exp(-static_cast<double>(part.labels[j]) * dot(part.row(j), w));
  }
  const double reg = spec.lambda / (2.0 * spec.n) * squared_norm(w);
  return loss_sum / static_cast<double>(part.size()) + reg;
}

void local_gradient(const NodePartition& part, const ObjectiveSpec& spec,
                    const ModelVector& w, ModelVector& out) {
  if (part.size() == 0) throw PartitionError("local_gradient: empty partition");
  if (part.dim < 1) throw ShapeError("local_gradient: zero-dimensional features");
  if (part.dim != static_cast<int>(w.size())) {
    throw ShapeError("local_gradient: partition dimension " + std::to_string(part.dim) +
                     " != model dimension " + std::to_string(w.size()));
  }
  const auto d = w.size();
  out.assign(d, 0.0);
  for (std::size_t j = 0; j < part.size(); ++j) {
    const auto row = part.row(j);
    const double b = static_cast<double>(part.labels[j]);
    // −b / (1 + exp(b·wᵀa)); exp saturating to +inf yields 0, which is the
    // correct limit, so no special-casing is needed.
    const double coef = -b / (1.0 + std::exp(b * dot(row, w)));
    for (std::size_t x = 0; x < d; ++x) out[x] += coef * row[x];
  }
  const double inv_m = 1.0 / static_cast<double>(part.size());
  const double reg = spec.lambda / spec.n;
  for (std::size_t x = 0; x < d; ++x) out[x] = out[x] * inv_m + reg * w[x];
}

ModelVector local_gradient(const NodePartition& part, const ObjectiveSpec& spec,
                           const ModelVector& w) {
  ModelVector out;
  local_gradient(part, spec, w, out);
  return out;
}

std::pair<double, double> lipschitz_constants(double lambda, int n, double domain_diameter) {
  if (lambda < 0.0) throw ParameterError("lipschitz_constants: lambda must be >= 0");
  if (n < 1) throw ParameterError("lipschitz_constants: n must be >= 1");
  if (domain_diameter <= 0.0) {
    throw ParameterError("lipschitz_constants: domain_diameter must be > 0");
  }
  const double c1 = 1.0;
  const double c2 = c1 + lambda / n * (domain_diameter / 2.0);
  return {c1, c2};
}

void project_to_domain_inplace(ModelVector& w, double domain_diameter) {
  if (domain_diameter <= 0.0) {
    throw ParameterError("project_to_domain: domain_diameter must be > 0");
  }
  const double radius = domain_diameter / 2.0;
  const double n = norm(w);
  if (n > radius) {
    const double scale = radius / n;
    for (double& x : w) x *= scale;
  }
}

ModelVector project_to_domain(ModelVector w, double domain_diameter) {
  project_to_domain_inplace(w, domain_diameter);
  return w;
}

}  // namespace padmm
