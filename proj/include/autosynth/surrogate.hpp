// Copyright 2026 The AutoSynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// The surrogate reconstruction model: a per-point encoder with max-pooling
// into a latent code, a fully connected decoder back to a fixed-size cloud,
// the symmetric Chamfer loss with its gradient, and an Adam trainer.

#ifndef AUTOSYNTH_SURROGATE_HPP_
#define AUTOSYNTH_SURROGATE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "autosynth/datasetgen.hpp"
#include "autosynth/mesh.hpp"

namespace autosynth {

enum class ChamferMethod { kAuto, kBruteForce, kKdTree };

// (1 / 2m) (sum_x min_y |x - y|^2 + sum_y min_x |y - x|^2), m = |X| = |Y|.
// Throws SizeMismatch when the sizes differ or are zero.
double chamfer(const PointCloud& x, const PointCloud& y,
               ChamferMethod method = ChamferMethod::kAuto);

inline constexpr double kLeakySlope = 0.01;

struct ModelShape {
  std::size_t points = 256;                   // v
  std::size_t latent = 64;                    // L
  std::vector<std::size_t> encoder = {64, 128};  // per-point stages after the 3-d input
  std::vector<std::size_t> decoder = {256, 512};  // hidden stages before the 3v output

  bool is_valid() const;
  std::size_t parameter_count() const;
  bool operator==(const ModelShape&) const = default;
};

struct AutoencoderParams {
  ModelShape shape;
  Eigen::VectorXd values;  // all weights (column-major) and biases, layer by layer

  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias.
  static AutoencoderParams initialize(const ModelShape& shape, std::uint64_t seed);
  static AutoencoderParams zeros(const ModelShape& shape);

  bool is_valid() const;
  bool operator==(const AutoencoderParams& o) const {
    return shape == o.shape && values.size() == o.values.size() && values == o.values;
  }
};

// Throws ShapeMismatch unless |cloud| == params.shape.points.
PointCloud forward(const AutoencoderParams& params, const PointCloud& cloud);

struct LossAndGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

// Mean Chamfer(forward(X), X) over the batch and its gradient. Nearest
// neighbors are held fixed (first found wins on ties) and max-pool routes
// the gradient to the first maximal point.
LossAndGrad loss_and_grad(const AutoencoderParams& params, std::span<const PointCloud> batch);

// Arithmetic used during training (passes and Adam state). The returned
// parameters are double either way; forward() and loss_and_grad() are double.
enum class TrainPrecision { kFloat32, kFloat64 };

struct TrainConfig {
  std::size_t batch = 8;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t iterations = 2000;
  std::uint64_t seed = 0;
  std::size_t latent = 64;
  std::vector<std::size_t> encoder = {64, 128};
  std::vector<std::size_t> decoder = {256, 512};
  TrainPrecision precision = TrainPrecision::kFloat32;

  bool is_valid() const;
};

inline constexpr std::size_t kFullScaleIterations = 20000;

struct TrainResult {
  AutoencoderParams params;
  std::vector<double> losses;  // one per iteration
};

// Adam over batches drawn uniformly with replacement. Deterministic for a
// fixed config. Throws NonFinite when the loss stops being finite.
TrainResult train_surrogate(std::span<const PointCloud> clouds, const TrainConfig& config);
TrainResult train_surrogate(const Dataset& dataset, const TrainConfig& config);

// Mean Chamfer(forward(X), X) over the target clouds, summed in index order.
double evaluate_fitness(const AutoencoderParams& params, const Dataset& target, int threads = 1);

void save_params(const AutoencoderParams& params, const std::filesystem::path& path);
AutoencoderParams load_params(const std::filesystem::path& path);
void write_loss_csv(std::span<const double> losses, const std::filesystem::path& path);

}  // namespace autosynth

#endif  // AUTOSYNTH_SURROGATE_HPP_
