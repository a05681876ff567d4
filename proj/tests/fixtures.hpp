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

#ifndef EXPO_TESTS_FIXTURES_HPP_
#define EXPO_TESTS_FIXTURES_HPP_

#include <functional>
#include <random>
#include <vector>
#include <utility>

#include "expo/model.hpp"

namespace fixture {

// Scalar function of the input wrapped as a one-output predictor.
class FunctionModel : public expo::Predictor {
 public:
  using Fn = std::function<double(const expo::Vector&)>;
  using Grad = std::function<expo::Vector(const expo::Vector&)>;

  FunctionModel(std::size_t d, Fn f, Grad g)
      : d_(d), f_(std::move(f)), g_(std::move(g)) {}

  std::size_t input_dim() const override { return d_; }
  std::size_t output_dim() const override { return 1; }
  expo::Matrix predict(const expo::Matrix& points) const override {
    expo::Matrix out(points.rows(), 1);
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
      out(r, 0) = f_(points.row(r).transpose());
    }
    return out;
  }
  expo::Vector input_gradient(const expo::Vector& x,
                              std::size_t) const override {
    return g_(x);
  }

 private:
  std::size_t d_;
  Fn f_;
  Grad g_;
};

inline FunctionModel square_model() {
  return FunctionModel(
      1, [](const expo::Vector& x) { return x(0) * x(0); },
      [](const expo::Vector& x) { return expo::Vector::Constant(1, 2.0 * x(0)); });
}

// Single dense layer f(x) = W x + b.
inline expo::Mlp affine_model(const expo::Matrix& w, const expo::Vector& b) {
  return expo::Mlp({expo::DenseLayer{w, b}}, expo::Activation::kTanh);
}

inline expo::Mlp affine_model(const expo::Vector& w, double b) {
  return affine_model(expo::Matrix(w.transpose()), expo::Vector::Constant(1, b));
}

inline expo::Mlp constant_model(std::size_t d, double c) {
  return affine_model(expo::Vector::Zero(static_cast<Eigen::Index>(d)), c);
}

inline expo::Matrix random_matrix(Eigen::Index r, Eigen::Index c,
                                  std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  expo::Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline expo::Vector random_vector(Eigen::Index n, std::mt19937_64& rng,
                                  double scale = 1.0) {
  return random_matrix(n, 1, rng, scale).col(0);
}

// Random biases so that no hidden unit sits at a symmetric point.
inline expo::Mlp random_mlp(const std::vector<std::size_t>& sizes,
                            std::uint64_t seed,
                            expo::Activation act = expo::Activation::kTanh) {
  expo::Mlp model = expo::Mlp::init(sizes, act, seed);
  std::mt19937_64 rng(seed + 1000);
  for (auto& layer : model.layers()) {
    layer.bias = random_vector(layer.bias.size(), rng, 0.3);
  }
  return model;
}

}  // namespace fixture

#endif  // EXPO_TESTS_FIXTURES_HPP_
