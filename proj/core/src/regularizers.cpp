// Copyright 2026 The expo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "expo/regularizers.hpp"

#include <cmath>
#include <vector>

#include "expo/error.hpp"

namespace expo {
namespace {

struct Draw {
  Matrix points;
  Matrix design;
  std::size_t dimension = 0;
};

Draw draw_neighbors(const RegularizerConfig& config, const Vector& x,
                    std::uint64_t counter) {
  Draw draw;
  switch (config.kind) {
    case RegularizerKind::kFidelity1d: {
      const auto d = static_cast<std::size_t>(x.size());
      draw.dimension = choose_dimension(config.neighborhood, d, counter);
      draw.points =
          sample_one_dim(config.neighborhood, x, draw.dimension, counter);
      draw.design = draw.points.col(static_cast<Eigen::Index>(draw.dimension));
      break;
    }
    case RegularizerKind::kFidelity:
      draw.points = sample(config.neighborhood, x, counter);
      draw.design = draw.points;
      break;
    case RegularizerKind::kStability:
      draw.points = sample(config.neighborhood, x, counter);
      break;
    case RegularizerKind::kNone:
      break;
  }
  return draw;
}

ResidualTerm evaluate_term(RegularizerKind kind, const Draw& draw,
                           const Matrix& predictions, const Vector& anchor,
                           double ridge) {
  if (kind == RegularizerKind::kStability) {
    return stability_term(predictions, anchor);
  }
  return fidelity_term(draw.design, predictions, ridge);
}

RegularizerResult compute(const Predictor& model, const Vector& x,
                          const RegularizerConfig& config,
                          std::uint64_t counter, RegularizerKind expected) {
  if (config.kind != expected) {
    throw Error(ErrorCode::kBadParameter,
                "regularizer config kind is " + to_string(config.kind) +
                    ", expected " + to_string(expected));
  }
  config.validate();
  Draw draw = draw_neighbors(config, x, counter);
  const Matrix predictions = model.predict(draw.points);
  Vector anchor;
  if (expected == RegularizerKind::kStability) anchor = model.predict_one(x);
  ResidualTerm term =
      evaluate_term(expected, draw, predictions, anchor, config.ridge);
  RegularizerResult result;
  result.loss = term.loss;
  result.points = std::move(draw.points);
  result.point_gradients = std::move(term.gradient);
  result.anchor_gradient = std::move(term.anchor_gradient);
  result.dimension = draw.dimension;
  return result;
}

}  // namespace

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::kNone:
      return "none";
    case RegularizerKind::kFidelity:
      return "fidelity";
    case RegularizerKind::kFidelity1d:
      return "fidelity_1d";
    case RegularizerKind::kStability:
      return "stability";
  }
  return "none";
}

RegularizerKind parse_regularizer_kind(const std::string& name) {
  if (name == "none") return RegularizerKind::kNone;
  if (name == "fidelity") return RegularizerKind::kFidelity;
  if (name == "fidelity_1d") return RegularizerKind::kFidelity1d;
  if (name == "stability") return RegularizerKind::kStability;
  throw Error(ErrorCode::kConfig, "unknown regularizer '" + name + "'");
}

void RegularizerConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kBadParameter, "gamma must be >= 0");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw Error(ErrorCode::kBadParameter, "ridge must be >= 0");
  }
  neighborhood.validate();
}

std::size_t default_regularizer_samples(RegularizerKind kind, std::size_t d) {
  return kind == RegularizerKind::kFidelity ? 5 * (d + 1) : 5;
}

ResidualTerm fidelity_term(const Matrix& design, const Matrix& predictions,
                           double ridge) {
  if (design.rows() != predictions.rows()) {
    throw Error(ErrorCode::kBadShape, "design and predictions disagree on m");
  }
  const LeastSquares fit(design, ridge);
  const double m = static_cast<double>(design.rows());
  ResidualTerm term;
  term.gradient.resize(predictions.rows(), predictions.cols());
  term.anchor_gradient = Vector::Zero(predictions.cols());
  for (Eigen::Index c = 0; c < predictions.cols(); ++c) {
    const Vector r = fit.residuals(predictions.col(c));
    term.loss += r.squaredNorm() / m;
    term.gradient.col(c) = (2.0 / m) * fit.annihilate(r);
  }
  return term;
}

ResidualTerm stability_term(const Matrix& predictions, const Vector& anchor) {
  if (anchor.size() != predictions.cols()) {
    throw Error(ErrorCode::kBadShape, "anchor output width mismatch");
  }
  const double m = static_cast<double>(predictions.rows());
  const Matrix diff = predictions.rowwise() - anchor.transpose();
  ResidualTerm term;
  term.loss = diff.squaredNorm() / m;
  term.gradient = (2.0 / m) * diff;
  term.anchor_gradient = -(2.0 / m) * diff.colwise().sum().transpose();
  return term;
}

RegularizerResult fidelity_loss(const Predictor& model, const Vector& x,
                                const RegularizerConfig& config,
                                std::uint64_t counter) {
  return compute(model, x, config, counter, RegularizerKind::kFidelity);
}

RegularizerResult fidelity_1d_loss(const Predictor& model, const Vector& x,
                                   const RegularizerConfig& config,
                                   std::uint64_t counter) {
  return compute(model, x, config, counter, RegularizerKind::kFidelity1d);
}

RegularizerResult stability_loss(const Predictor& model, const Vector& x,
                                 const RegularizerConfig& config,
                                 std::uint64_t counter) {
  return compute(model, x, config, counter, RegularizerKind::kStability);
}

RegularizerResult regularizer_loss(const Predictor& model, const Vector& x,
                                   const RegularizerConfig& config,
                                   std::uint64_t counter) {
  if (config.kind == RegularizerKind::kNone) {
    RegularizerResult none;
    none.anchor_gradient =
        Vector::Zero(static_cast<Eigen::Index>(model.output_dim()));
    return none;
  }
  return compute(model, x, config, counter, config.kind);
}

void accumulate_gradient(const Mlp& model, const Vector& x,
                         const RegularizerResult& result, double scale,
                         GradientTape& tape) {
  if (result.points.rows() == 0) return;
  const Eigen::Index m = result.points.rows();
  Matrix stacked(m + 1, result.points.cols());
  stacked.topRows(m) = result.points;
  stacked.row(m) = x.transpose();
  Matrix upstream(m + 1, result.point_gradients.cols());
  upstream.topRows(m) = scale * result.point_gradients;
  upstream.row(m) = scale * result.anchor_gradient.transpose();
  model.backward(model.trace(stacked), upstream, tape);
}

double accumulate_regularizer(const Mlp& model, const Matrix& anchors,
                              std::span<const std::uint64_t> counters,
                              const RegularizerConfig& config, double scale,
                              GradientTape& tape) {
  if (config.kind == RegularizerKind::kNone || anchors.rows() == 0) return 0.0;
  config.validate();
  if (counters.size() != static_cast<std::size_t>(anchors.rows())) {
    throw Error(ErrorCode::kBadShape, "one counter per anchor required");
  }
  const bool with_anchor = config.kind == RegularizerKind::kStability;
  const auto m = static_cast<Eigen::Index>(config.neighborhood.samples_m);
  const Eigen::Index block = m + (with_anchor ? 1 : 0);
  const Eigen::Index n = anchors.rows();

  std::vector<Draw> draws;
  draws.reserve(static_cast<std::size_t>(n));
  Matrix stacked(n * block, anchors.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector x = anchors.row(i).transpose();
    draws.push_back(
        draw_neighbors(config, x, counters[static_cast<std::size_t>(i)]));
    stacked.middleRows(i * block, m) = draws.back().points;
    if (with_anchor) stacked.row(i * block + m) = x.transpose();
  }

  const ForwardTrace trace = model.trace(stacked);
  const Matrix& outputs = trace.values.back();
  Matrix upstream = Matrix::Zero(outputs.rows(), outputs.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix predictions = outputs.middleRows(i * block, m);
    Vector anchor;
    if (with_anchor) anchor = outputs.row(i * block + m).transpose();
    const ResidualTerm term =
        evaluate_term(config.kind, draws[static_cast<std::size_t>(i)],
                      predictions, anchor, config.ridge);
    total += term.loss;
    upstream.middleRows(i * block, m) = scale * term.gradient;
    if (with_anchor) {
      upstream.row(i * block + m) = scale * term.anchor_gradient.transpose();
    }
  }
  model.backward(trace, upstream, tape);
  return total;
}

}  // namespace expo
