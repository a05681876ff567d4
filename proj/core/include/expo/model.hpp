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

#ifndef EXPO_MODEL_HPP_
#define EXPO_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "expo/linalg.hpp"

namespace expo {

// Anything that maps points to outputs and can report input gradients.
// Explainers, metrics and bounds only need this view of a model.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;

  // One point per row in, one output vector per row out.
  virtual Matrix predict(const Matrix& points) const = 0;

  // d f(x)[output_index] / dx.
  virtual Vector input_gradient(const Vector& x,
                                std::size_t output_index) const = 0;

  Vector predict_one(const Vector& x) const;
};

enum class Activation { kTanh, kRelu };

std::string to_string(Activation activation);
Activation parse_activation(const std::string& name);

struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
};

class Mlp;

// Gradients mirroring an Mlp's parameter shapes, plus an optional input
// gradient.
struct GradientTape {
  std::vector<DenseLayer> layers;
  Vector input_gradient;

  static GradientTape zeros_like(const Mlp& model);

  GradientTape& operator+=(const GradientTape& other);
  GradientTape& operator*=(double scale);

  // Parameters in layer order, weights row-major then bias.
  Vector flatten() const;
};

// Post-activation values of every layer for a batch; front() is the input
// and back() is the (linear) output.
struct ForwardTrace {
  std::vector<Matrix> values;
};

// Fully connected network with a shared hidden activation and a linear
// output layer (identity for regression, logits for classification).
class Mlp : public Predictor {
 public:
  Mlp(std::vector<DenseLayer> layers, Activation activation);

  // Glorot-uniform weights drawn from (seed, layer), zero biases.
  static Mlp init(const std::vector<std::size_t>& layer_sizes,
                  Activation activation, std::uint64_t seed);

  std::vector<std::size_t> layer_sizes() const;
  Activation activation() const { return activation_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  std::size_t input_dim() const override;
  std::size_t output_dim() const override;
  std::size_t parameter_count() const;

  Vector forward(const Vector& x) const;
  Matrix predict(const Matrix& points) const override;
  ForwardTrace trace(const Matrix& points) const;

  // Reverse mode over a traced batch: adds d(sum_r upstream_r . f(x_r))/dtheta
  // into tape and returns the per-row input gradients.
  Matrix backward(const ForwardTrace& trace, const Matrix& upstream,
                  GradientTape& tape) const;

  // Single point; the tape's input_gradient is filled.
  GradientTape backward(const Vector& x, const Vector& upstream) const;

  // Signed d f(x)[class_index] / dx.
  Vector saliency(const Vector& x, std::size_t class_index) const;
  Vector input_gradient(const Vector& x,
                        std::size_t output_index) const override;

  Vector parameters() const;
  void set_parameters(const Vector& flat);

 private:
  void check_input(Eigen::Index cols) const;

  std::vector<DenseLayer> layers_;
  Activation activation_;
};

class Sgd {
 public:
  explicit Sgd(double learning_rate) : learning_rate_(learning_rate) {}
  void step(Mlp& model, const GradientTape& tape) const;

 private:
  double learning_rate_;
};

struct AdamParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  explicit Adam(AdamParams params = {}) : params_(params) {}
  void step(Mlp& model, const GradientTape& tape);
  std::size_t steps() const { return steps_; }

 private:
  AdamParams params_;
  Vector first_moment_;
  Vector second_moment_;
  std::size_t steps_ = 0;
};

}  // namespace expo

#endif  // EXPO_MODEL_HPP_
