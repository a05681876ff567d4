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

#include "expo/model.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "expo/error.hpp"
#include "expo/rng.hpp"

namespace expo {
namespace {

void activate(Matrix& z, Activation activation) {
  if (activation == Activation::kTanh) {
    z = z.array().tanh().matrix();
  } else {
    z = z.cwiseMax(0.0);
  }
}

// Derivative expressed through the post-activation value h. ReLU'(0) = 0.
Matrix activation_slope(const Matrix& h, Activation activation) {
  if (activation == Activation::kTanh) {
    return (1.0 - h.array().square()).matrix();
  }
  return (h.array() > 0.0).cast<double>().matrix();
}

void check_tape(const Mlp& model, const GradientTape& tape) {
  const auto& layers = model.layers();
  bool ok = tape.layers.size() == layers.size();
  for (std::size_t l = 0; ok && l < layers.size(); ++l) {
    ok = tape.layers[l].weights.rows() == layers[l].weights.rows() &&
         tape.layers[l].weights.cols() == layers[l].weights.cols() &&
         tape.layers[l].bias.size() == layers[l].bias.size();
  }
  if (!ok) throw Error(ErrorCode::kBadShape, "tape does not mirror model");
}

}  // namespace

Vector Predictor::predict_one(const Vector& x) const {
  return predict(x.transpose()).row(0).transpose();
}

std::string to_string(Activation activation) {
  return activation == Activation::kTanh ? "tanh" : "relu";
}

Activation parse_activation(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw Error(ErrorCode::kConfig, "unknown activation '" + name + "'");
}

GradientTape GradientTape::zeros_like(const Mlp& model) {
  GradientTape tape;
  for (const auto& layer : model.layers()) {
    tape.layers.push_back(
        {Matrix::Zero(layer.weights.rows(), layer.weights.cols()),
         Vector::Zero(layer.bias.size())});
  }
  tape.input_gradient = Vector::Zero(static_cast<Eigen::Index>(model.input_dim()));
  return tape;
}

GradientTape& GradientTape::operator+=(const GradientTape& other) {
  if (other.layers.size() != layers.size()) {
    throw Error(ErrorCode::kBadShape, "tape layer count mismatch");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].weights += other.layers[l].weights;
    layers[l].bias += other.layers[l].bias;
  }
  if (other.input_gradient.size() == input_gradient.size()) {
    input_gradient += other.input_gradient;
  }
  return *this;
}

GradientTape& GradientTape::operator*=(double scale) {
  for (auto& layer : layers) {
    layer.weights *= scale;
    layer.bias *= scale;
  }
  input_gradient *= scale;
  return *this;
}

Vector GradientTape::flatten() const {
  Eigen::Index total = 0;
  for (const auto& layer : layers) {
    total += layer.weights.size() + layer.bias.size();
  }
  Vector flat(total);
  Eigen::Index at = 0;
  for (const auto& layer : layers) {
    flat.segment(at, layer.weights.size()) =
        Eigen::Map<const Vector>(layer.weights.data(), layer.weights.size());
    at += layer.weights.size();
    flat.segment(at, layer.bias.size()) = layer.bias;
    at += layer.bias.size();
  }
  return flat;
}

Mlp::Mlp(std::vector<DenseLayer> layers, Activation activation)
    : layers_(std::move(layers)), activation_(activation) {
  if (layers_.empty()) throw Error(ErrorCode::kBadShape, "model has no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.weights.rows() < 1 || layer.weights.cols() < 1 ||
        layer.bias.size() != layer.weights.rows()) {
      throw Error(ErrorCode::kBadShape,
                  "layer " + std::to_string(l) + " has inconsistent shape");
    }
    if (l > 0 && layer.weights.cols() != layers_[l - 1].weights.rows()) {
      throw Error(ErrorCode::kBadShape,
                  "layer " + std::to_string(l) + " does not chain");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw Error(ErrorCode::kBadParameter,
                  "layer " + std::to_string(l) + " has non-finite values");
    }
  }
}

Mlp Mlp::init(const std::vector<std::size_t>& layer_sizes,
              Activation activation, std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw Error(ErrorCode::kBadShape, "need at least input and output sizes");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(layer_sizes[l]);
    const auto out = static_cast<Eigen::Index>(layer_sizes[l + 1]);
    if (in < 1 || out < 1) {
      throw Error(ErrorCode::kBadShape, "layer sizes must be >= 1");
    }
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    auto engine = make_engine(seed, Stream::kInit, l);
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer{Matrix(out, in), Vector::Zero(out)};
    for (Eigen::Index i = 0; i < out; ++i) {
      for (Eigen::Index j = 0; j < in; ++j) layer.weights(i, j) = dist(engine);
    }
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers), activation);
}

std::vector<std::size_t> Mlp::layer_sizes() const {
  std::vector<std::size_t> sizes{input_dim()};
  for (const auto& layer : layers_) {
    sizes.push_back(static_cast<std::size_t>(layer.weights.rows()));
  }
  return sizes;
}

std::size_t Mlp::input_dim() const {
  return static_cast<std::size_t>(layers_.front().weights.cols());
}

std::size_t Mlp::output_dim() const {
  return static_cast<std::size_t>(layers_.back().weights.rows());
}

std::size_t Mlp::parameter_count() const {
  std::size_t total = 0;
  for (const auto& layer : layers_) {
    total += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
  }
  return total;
}

void Mlp::check_input(Eigen::Index cols) const {
  if (cols != static_cast<Eigen::Index>(input_dim())) {
    throw Error(ErrorCode::kBadShape,
                "input has " + std::to_string(cols) + " features, model expects " +
                    std::to_string(input_dim()));
  }
}

Vector Mlp::forward(const Vector& x) const {
  return predict(x.transpose()).row(0).transpose();
}

Matrix Mlp::predict(const Matrix& points) const {
  check_input(points.cols());
  Matrix h = points;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = h * layers_[l].weights.transpose();
    z.rowwise() += layers_[l].bias.transpose();
    if (l + 1 < layers_.size()) activate(z, activation_);
    h = std::move(z);
  }
  return h;
}

ForwardTrace Mlp::trace(const Matrix& points) const {
  check_input(points.cols());
  ForwardTrace t;
  t.values.reserve(layers_.size() + 1);
  t.values.push_back(points);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = t.values.back() * layers_[l].weights.transpose();
    z.rowwise() += layers_[l].bias.transpose();
    if (l + 1 < layers_.size()) activate(z, activation_);
    t.values.push_back(std::move(z));
  }
  return t;
}

Matrix Mlp::backward(const ForwardTrace& trace, const Matrix& upstream,
                     GradientTape& tape) const {
  check_tape(*this, tape);
  if (trace.values.size() != layers_.size() + 1 ||
      upstream.rows() != trace.values.front().rows() ||
      upstream.cols() != static_cast<Eigen::Index>(output_dim())) {
    throw Error(ErrorCode::kBadShape, "upstream does not match trace");
  }
  Matrix delta = upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Matrix& input = trace.values[l];
    tape.layers[l].weights.noalias() += delta.transpose() * input;
    tape.layers[l].bias += delta.colwise().sum().transpose();
    Matrix back = delta * layers_[l].weights;
    if (l > 0) {
      back.array() *= activation_slope(input, activation_).array();
    }
    delta = std::move(back);
  }
  return delta;
}

GradientTape Mlp::backward(const Vector& x, const Vector& upstream) const {
  if (upstream.size() != static_cast<Eigen::Index>(output_dim())) {
    throw Error(ErrorCode::kBadShape, "upstream length must equal output size");
  }
  GradientTape tape = GradientTape::zeros_like(*this);
  const auto t = trace(x.transpose());
  tape.input_gradient = backward(t, upstream.transpose(), tape).row(0).transpose();
  return tape;
}

Vector Mlp::saliency(const Vector& x, std::size_t class_index) const {
  if (class_index >= output_dim()) {
    throw Error(ErrorCode::kBadShape, "class index out of range");
  }
  Vector upstream = Vector::Zero(static_cast<Eigen::Index>(output_dim()));
  upstream(static_cast<Eigen::Index>(class_index)) = 1.0;
  GradientTape scratch = GradientTape::zeros_like(*this);
  const auto t = trace(x.transpose());
  return backward(t, upstream.transpose(), scratch).row(0).transpose();
}

Vector Mlp::input_gradient(const Vector& x, std::size_t output_index) const {
  return saliency(x, output_index);
}

Vector Mlp::parameters() const {
  GradientTape view;
  view.layers = layers_;
  return view.flatten();
}

void Mlp::set_parameters(const Vector& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count())) {
    throw Error(ErrorCode::kBadShape, "parameter vector has wrong length");
  }
  Eigen::Index at = 0;
  for (auto& layer : layers_) {
    Eigen::Map<Vector>(layer.weights.data(), layer.weights.size()) =
        flat.segment(at, layer.weights.size());
    at += layer.weights.size();
    layer.bias = flat.segment(at, layer.bias.size());
    at += layer.bias.size();
  }
}

void Sgd::step(Mlp& model, const GradientTape& tape) const {
  check_tape(model, tape);
  auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].weights -= learning_rate_ * tape.layers[l].weights;
    layers[l].bias -= learning_rate_ * tape.layers[l].bias;
  }
}

void Adam::step(Mlp& model, const GradientTape& tape) {
  check_tape(model, tape);
  const Vector grad = tape.flatten();
  if (first_moment_.size() != grad.size()) {
    first_moment_ = Vector::Zero(grad.size());
    second_moment_ = Vector::Zero(grad.size());
    steps_ = 0;
  }
  ++steps_;
  first_moment_ = params_.beta1 * first_moment_ + (1.0 - params_.beta1) * grad;
  second_moment_ = params_.beta2 * second_moment_ +
                   (1.0 - params_.beta2) * grad.array().square().matrix();
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(params_.beta1, t);
  const double c2 = 1.0 - std::pow(params_.beta2, t);
  const Vector update =
      ((first_moment_.array() / c1) /
       ((second_moment_.array() / c2).sqrt() + params_.epsilon))
          .matrix();
  model.set_parameters(model.parameters() - params_.learning_rate * update);
}

}  // namespace expo
