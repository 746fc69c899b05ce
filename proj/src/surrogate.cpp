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


#include "autosynth/surrogate.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "autosynth/errors.hpp"
#include "autosynth/kdtree.hpp"
#include "autosynth/parallel.hpp"
#include "autosynth/rng.hpp"

namespace autosynth {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// --- Chamfer ---------------------------------------------------------------

// Nearest-neighbor assignment in both directions between a and b (3 x m each).
template <class T>
struct Matching {
  std::vector<std::uint32_t> a_to_b, b_to_a;
  std::vector<T> a_dist, b_dist;  // squared distances

  double value() const {
    double sa = 0.0, sb = 0.0;
    for (T d : a_dist) sa += d;
    for (T d : b_dist) sb += d;
    return (sa + sb) / (2.0 * static_cast<double>(a_dist.size()));
  }
};

// For every point of `to`, the nearest point of `from` (first index on ties).
// The loop nest keeps the inner loop branch-free so it vectorizes.
template <class T>
void nearest_brute(const T* from, const T* to, std::size_t m, std::vector<std::uint32_t>& arg,
                   std::vector<T>& dist) {
  arg.assign(m, 0);
  dist.assign(m, std::numeric_limits<T>::infinity());
  std::vector<T> tx(m), ty(m), tz(m);
  for (std::size_t j = 0; j < m; ++j) {
    tx[j] = to[3 * j];
    ty[j] = to[3 * j + 1];
    tz[j] = to[3 * j + 2];
  }
  std::uint32_t* best_arg = arg.data();
  T* best = dist.data();
  for (std::size_t i = 0; i < m; ++i) {
    const T fx = from[3 * i], fy = from[3 * i + 1], fz = from[3 * i + 2];
    const auto ii = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < m; ++j) {
      const T dx = tx[j] - fx, dy = ty[j] - fy, dz = tz[j] - fz;
      const T d = dx * dx + dy * dy + dz * dz;
      const bool lt = d < best[j];
      best[j] = lt ? d : best[j];
      best_arg[j] = lt ? ii : best_arg[j];
    }
  }
}

template <class T>
Matching<T> match_brute(const T* a, const T* b, std::size_t m) {
  Matching<T> r;
  nearest_brute(b, a, m, r.a_to_b, r.a_dist);
  nearest_brute(a, b, m, r.b_to_a, r.b_dist);
  return r;
}

Matching<double> match_kdtree(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  const std::size_t m = a.size();
  Matching<double> r;
  r.a_to_b.resize(m);
  r.b_to_a.resize(m);
  r.a_dist.resize(m);
  r.b_dist.resize(m);
  const KdTree tree_b(b);
  for (std::size_t i = 0; i < m; ++i) {
    const auto hit = tree_b.nearest(a[i]);
    r.a_to_b[i] = hit.index;
    r.a_dist[i] = hit.squared_distance;
  }
  const KdTree tree_a(a);
  for (std::size_t j = 0; j < m; ++j) {
    const auto hit = tree_a.nearest(b[j]);
    r.b_to_a[j] = hit.index;
    r.b_dist[j] = hit.squared_distance;
  }
  return r;
}

constexpr std::size_t kKdTreeThreshold = 512;

// Loss of one reconstruction and its gradient with respect to pred
// (both 3 x m, column-major). grad is overwritten with scale * dL/dpred.
template <class T>
double chamfer_with_grad(const T* pred, const T* target, std::size_t m, double scale, T* grad) {
  const Matching<T> match = match_brute(pred, target, m);
  const T c = static_cast<T>(scale / static_cast<double>(m));  // d/dx |x - y|^2 / 2m = (x - y) / m
  std::fill(grad, grad + 3 * m, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = match.a_to_b[i];
    for (int k = 0; k < 3; ++k) grad[3 * i + k] += c * (pred[3 * i + k] - target[3 * j + k]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = match.b_to_a[j];
    for (int k = 0; k < 3; ++k) grad[3 * i + k] += c * (pred[3 * i + k] - target[3 * j + k]);
  }
  return match.value();
}

// --- Model -----------------------------------------------------------------

struct Layer {
  std::size_t in = 0, out = 0;
  std::size_t weight = 0, bias = 0;  // offsets into the parameter vector
};

struct Layout {
  std::vector<Layer> point;  // shared per-point stages
  std::vector<Layer> dense;  // pooled -> latent -> ... -> 3v
  std::size_t total = 0;
};

Layout layout_of(const ModelShape& shape) {
  Layout l;
  auto add = [&](std::vector<Layer>& dst, std::size_t in, std::size_t out) {
    Layer layer{in, out, l.total, l.total + in * out};
    l.total += in * out + out;
    dst.push_back(layer);
  };
  std::size_t width = 3;
  for (std::size_t w : shape.encoder) {
    add(l.point, width, w);
    width = w;
  }
  add(l.dense, width, shape.latent);
  width = shape.latent;
  for (std::size_t w : shape.decoder) {
    add(l.dense, width, w);
    width = w;
  }
  add(l.dense, width, 3 * shape.points);
  return l;
}

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
void leaky(Mat<T>& m) {
  m = m.cwiseMax(T(kLeakySlope) * m);
}

// Multiplies delta by the rectifier derivative, read off the activated output.
template <class T>
void scale_by_leaky_grad(Mat<T>& delta, const Mat<T>& activated) {
  T* d = delta.data();
  const T* a = activated.data();
  for (Eigen::Index i = 0; i < delta.size(); ++i) d[i] *= a[i] > T(0) ? T(1) : T(kLeakySlope);
}

template <class T>
struct Activations {
  std::size_t batch = 0;
  std::vector<Mat<T>> point;  // point[0] = input, 3 x (batch * v)
  Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic> argmax;  // feature x sample
  std::vector<Mat<T>> dense;  // dense[0] = pooled features
};

template <class T>
class Model {
 public:
  using ConstMatMap = Eigen::Map<const Mat<T>>;
  using MatMap = Eigen::Map<Mat<T>>;
  using ConstVecMap = Eigen::Map<const Vec<T>>;
  using VecMap = Eigen::Map<Vec<T>>;

  Model(const ModelShape& shape, const T* values)
      : shape_(shape), layout_(layout_of(shape)), values_(values) {}

  ConstMatMap weight(const Layer& l) const { return ConstMatMap(values_ + l.weight, l.out, l.in); }
  ConstVecMap bias(const Layer& l) const { return ConstVecMap(values_ + l.bias, l.out); }
  std::size_t parameter_count() const { return layout_.total; }

  Activations<T> run(std::span<const PointCloud> batch) const {
    const std::size_t v = shape_.points;
    Activations<T> act;
    act.batch = batch.size();
    Mat<T> input(3, batch.size() * v);
    for (std::size_t b = 0; b < batch.size(); ++b) {
      if (batch[b].size() != v) {
        throw ShapeMismatch("surrogate expects " + std::to_string(v) + " points, got " +
                            std::to_string(batch[b].size()));
      }
      for (std::size_t k = 0; k < v; ++k) input.col(b * v + k) = batch[b].points[k].cast<T>();
    }
    act.point.push_back(std::move(input));
    for (const Layer& l : layout_.point) {
      Mat<T> h(l.out, act.point.back().cols());
      h.noalias() = weight(l) * act.point.back();
      h.colwise() += bias(l);
      leaky(h);
      act.point.push_back(std::move(h));
    }

    // Max-pool over each sample's points; the first maximal point wins.
    const Mat<T>& h = act.point.back();
    const auto rows = h.rows();
    Mat<T> pooled(rows, batch.size());
    act.argmax.resize(rows, batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const std::size_t start = b * v;
      T* best = pooled.col(b).data();
      std::uint32_t* arg = act.argmax.col(b).data();
      for (Eigen::Index r = 0; r < rows; ++r) {
        best[r] = h(r, start);
        arg[r] = static_cast<std::uint32_t>(start);
      }
      for (std::size_t c = start + 1; c < start + v; ++c) {
        const T* col = h.col(c).data();
        const auto cc = static_cast<std::uint32_t>(c);
        for (Eigen::Index r = 0; r < rows; ++r) {
          const bool gt = col[r] > best[r];
          best[r] = gt ? col[r] : best[r];
          arg[r] = gt ? cc : arg[r];
        }
      }
    }
    act.dense.push_back(std::move(pooled));
    for (std::size_t i = 0; i < layout_.dense.size(); ++i) {
      const Layer& l = layout_.dense[i];
      Mat<T> z(l.out, act.dense.back().cols());
      z.noalias() = weight(l) * act.dense.back();
      z.colwise() += bias(l);
      if (i + 1 < layout_.dense.size()) leaky(z);
      act.dense.push_back(std::move(z));
    }
    return act;
  }

  // Writes dLoss/dparams into grad (parameter_count() entries) given
  // dLoss/doutput (3v x batch).
  void backward(const Activations<T>& act, Mat<T> d_out, T* grad) const {
    Mat<T> delta = std::move(d_out);
    for (std::size_t i = layout_.dense.size(); i-- > 0;) {
      const Layer& l = layout_.dense[i];
      if (i + 1 < layout_.dense.size()) scale_by_leaky_grad(delta, act.dense[i + 1]);
      MatMap(grad + l.weight, l.out, l.in).noalias() = delta * act.dense[i].transpose();
      VecMap(grad + l.bias, l.out) = delta.rowwise().sum();
      Mat<T> next(l.in, delta.cols());
      next.noalias() = weight(l).transpose() * delta;
      delta = std::move(next);
    }

    // Max-pool passes the gradient to one column per feature and sample, so
    // the per-point stages only need the touched columns.
    const std::size_t total_cols = static_cast<std::size_t>(act.point[0].cols());
    std::vector<std::int64_t> slot(total_cols, -1);
    std::vector<std::uint32_t> cols;
    for (std::size_t b = 0; b < act.batch; ++b) {
      for (Eigen::Index r = 0; r < act.argmax.rows(); ++r) {
        const std::uint32_t c = act.argmax(r, b);
        if (slot[c] < 0) {
          slot[c] = static_cast<std::int64_t>(cols.size());
          cols.push_back(c);
        }
      }
    }
    const auto ncols = static_cast<Eigen::Index>(cols.size());
    const auto gather = [&](const Mat<T>& m) {
      Mat<T> out(m.rows(), ncols);
      for (Eigen::Index k = 0; k < ncols; ++k) out.col(k) = m.col(cols[k]);
      return out;
    };
    Mat<T> d_point = Mat<T>::Zero(act.argmax.rows(), ncols);
    for (std::size_t b = 0; b < act.batch; ++b) {
      for (Eigen::Index r = 0; r < act.argmax.rows(); ++r) {
        d_point(r, slot[act.argmax(r, b)]) += delta(r, b);
      }
    }
    Mat<T> current = gather(act.point.back());
    for (std::size_t i = layout_.point.size(); i-- > 0;) {
      const Layer& l = layout_.point[i];
      scale_by_leaky_grad(d_point, current);
      Mat<T> prev = gather(act.point[i]);
      MatMap(grad + l.weight, l.out, l.in).noalias() = d_point * prev.transpose();
      VecMap(grad + l.bias, l.out) = d_point.rowwise().sum();
      if (i > 0) {
        Mat<T> next(l.in, ncols);
        next.noalias() = weight(l).transpose() * d_point;
        d_point = std::move(next);
      }
      current = std::move(prev);
    }
  }

  // Mean batch loss; gradient written to grad.
  double loss_and_grad(std::span<const PointCloud> batch, T* grad) const {
    const Activations<T> act = run(batch);
    const std::size_t v = shape_.points;
    const Mat<T>& out = act.dense.back();
    const Mat<T>& input = act.point.front();
    Mat<T> d_out(out.rows(), out.cols());
    const double scale = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      loss += chamfer_with_grad<T>(out.col(b).data(), input.data() + 3 * v * b, v, scale,
                                   d_out.col(b).data());
    }
    backward(act, std::move(d_out), grad);
    return loss * scale;
  }

 private:
  const ModelShape& shape_;
  Layout layout_;
  const T* values_;
};

void check_params(const AutoencoderParams& params) {
  if (!params.shape.is_valid()) throw ShapeMismatch("invalid model shape");
  if (static_cast<std::size_t>(params.values.size()) != params.shape.parameter_count()) {
    throw ShapeMismatch("parameter vector size does not match the model shape");
  }
}

PointCloud output_cloud(const Mat<double>& out, std::size_t b, std::size_t v) {
  PointCloud cloud;
  cloud.points.resize(v);
  for (std::size_t k = 0; k < v; ++k) cloud.points[k] = out.col(b).segment<3>(3 * k);
  return cloud;
}

}  // namespace

double chamfer(const PointCloud& x, const PointCloud& y, ChamferMethod method) {
  if (x.size() != y.size()) {
    throw SizeMismatch("chamfer: clouds have " + std::to_string(x.size()) + " and " +
                       std::to_string(y.size()) + " points");
  }
  if (x.size() == 0) throw SizeMismatch("chamfer: clouds are empty");
  if (method == ChamferMethod::kAuto) {
    method = x.size() > kKdTreeThreshold ? ChamferMethod::kKdTree : ChamferMethod::kBruteForce;
  }
  if (method == ChamferMethod::kKdTree) return match_kdtree(x.points, y.points).value();
  return match_brute(x.points.front().data(), y.points.front().data(), x.size()).value();
}

bool ModelShape::is_valid() const {
  if (points < 1 || latent < 1 || encoder.empty()) return false;
  for (auto w : encoder) {
    if (w < 1) return false;
  }
  for (auto w : decoder) {
    if (w < 1) return false;
  }
  return true;
}

std::size_t ModelShape::parameter_count() const { return layout_of(*this).total; }

AutoencoderParams AutoencoderParams::initialize(const ModelShape& shape, std::uint64_t seed) {
  if (!shape.is_valid()) throw ShapeMismatch("invalid model shape");
  const Layout layout = layout_of(shape);
  AutoencoderParams p{shape, VectorXd(layout.total)};
  Rng rng(seed);
  auto fill = [&](const Layer& l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.in));
    for (std::size_t i = l.weight; i < l.bias + l.out; ++i) p.values[i] = rng.uniform(-bound, bound);
  };
  for (const Layer& l : layout.point) fill(l);
  for (const Layer& l : layout.dense) fill(l);
  return p;
}

AutoencoderParams AutoencoderParams::zeros(const ModelShape& shape) {
  if (!shape.is_valid()) throw ShapeMismatch("invalid model shape");
  return AutoencoderParams{shape, VectorXd::Zero(shape.parameter_count())};
}

bool AutoencoderParams::is_valid() const {
  return shape.is_valid() && static_cast<std::size_t>(values.size()) == shape.parameter_count() &&
         values.allFinite();
}

PointCloud forward(const AutoencoderParams& params, const PointCloud& cloud) {
  check_params(params);
  const Model<double> model(params.shape, params.values.data());
  const auto act = model.run(std::span<const PointCloud>(&cloud, 1));
  return output_cloud(act.dense.back(), 0, params.shape.points);
}

LossAndGrad loss_and_grad(const AutoencoderParams& params, std::span<const PointCloud> batch) {
  check_params(params);
  if (batch.empty()) throw ShapeMismatch("loss_and_grad: empty batch");
  const Model<double> model(params.shape, params.values.data());
  LossAndGrad result{0.0, VectorXd(params.values.size())};
  result.loss = model.loss_and_grad(batch, result.grad.data());
  return result;
}

bool TrainConfig::is_valid() const {
  return batch >= 1 && learning_rate > 0.0 && std::isfinite(learning_rate) && iterations >= 1 &&
         beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0 &&
         latent >= 1 && !encoder.empty();
}

namespace {

// Forward, backward and the Adam state all use T.
template <class T>
TrainResult train_impl(std::span<const PointCloud> clouds, const TrainConfig& config) {
  ModelShape shape{clouds.front().size(), config.latent, config.encoder, config.decoder};
  TrainResult result{AutoencoderParams::initialize(shape, derive_seed(config.seed, "init")), {}};
  result.losses.reserve(config.iterations);

  const Eigen::Index n = result.params.values.size();
  Vec<T> theta = result.params.values.cast<T>();
  Vec<T> grad(n);
  Vec<T> m = Vec<T>::Zero(n);
  Vec<T> s = Vec<T>::Zero(n);
  const Model<T> model(result.params.shape, theta.data());
  Rng rng(derive_seed(config.seed, "batches"));
  std::vector<PointCloud> batch(config.batch);
  double beta1_t = 1.0, beta2_t = 1.0;
  const T b1 = static_cast<T>(config.beta1), b2 = static_cast<T>(config.beta2);
  const T eps = static_cast<T>(config.epsilon);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    for (auto& c : batch) c = clouds[rng.index(clouds.size())];
    const double loss = model.loss_and_grad(batch, grad.data());
    // A non-finite entry makes the sum non-finite.
    if (!std::isfinite(loss) || !std::isfinite(static_cast<double>(grad.sum()))) {
      throw NonFinite("training diverged at iteration " + std::to_string(it) + " (loss " +
                      std::to_string(loss) + "); lower the learning rate");
    }
    result.losses.push_back(loss);
    beta1_t *= config.beta1;
    beta2_t *= config.beta2;
    const T step = static_cast<T>(config.learning_rate / (1.0 - beta1_t));
    const T bias2 = static_cast<T>(1.0 / (1.0 - beta2_t));
    T* th = theta.data();
    T* mm = m.data();
    T* ss = s.data();
    const T* g = grad.data();
    for (Eigen::Index i = 0; i < n; ++i) {
      mm[i] = b1 * mm[i] + (T(1) - b1) * g[i];
      ss[i] = b2 * ss[i] + (T(1) - b2) * (g[i] * g[i]);
      th[i] -= step * mm[i] / (std::sqrt(ss[i] * bias2) + eps);
    }
  }
  result.params.values = theta.template cast<double>();
  return result;
}

}  // namespace

TrainResult train_surrogate(std::span<const PointCloud> clouds, const TrainConfig& config) {
  if (!config.is_valid()) throw InvalidArgument("train_surrogate: invalid training config");
  if (clouds.empty()) throw InvalidArgument("train_surrogate: no training clouds");
  for (const auto& c : clouds) {
    if (c.size() != clouds.front().size()) {
      throw ShapeMismatch("train_surrogate: clouds differ in size");
    }
  }
  if (config.precision == TrainPrecision::kFloat64) return train_impl<double>(clouds, config);
  return train_impl<float>(clouds, config);
}

TrainResult train_surrogate(const Dataset& dataset, const TrainConfig& config) {
  std::vector<PointCloud> clouds;
  clouds.reserve(dataset.size());
  for (const auto& e : dataset.entries) clouds.push_back(e.cloud);
  return train_surrogate(clouds, config);
}

double evaluate_fitness(const AutoencoderParams& params, const Dataset& target, int threads) {
  check_params(params);
  if (target.entries.empty()) throw InvalidArgument("evaluate_fitness: empty target dataset");
  std::vector<double> scores(target.entries.size());
  parallel_for(target.entries.size(), threads, [&](std::size_t i) {
    const PointCloud& x = target.entries[i].cloud;
    scores[i] = chamfer(forward(params, x), x);
  });
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

// --- Checkpoints -----------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'A', 'S', 'Y', 'N', 'A', 'E', '0', '1'};
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, std::size_t& pos, const std::filesystem::path& path) {
  if (pos + 8 > in.size()) throw IoError("truncated checkpoint '" + path.string() + "'");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace

void save_params(const AutoencoderParams& params, const std::filesystem::path& path) {
  check_params(params);
  std::string out(kMagic, sizeof kMagic);
  put_u64(out, kCheckpointVersion);
  put_u64(out, params.shape.points);
  put_u64(out, params.shape.latent);
  put_u64(out, params.shape.encoder.size());
  for (auto w : params.shape.encoder) put_u64(out, w);
  put_u64(out, params.shape.decoder.size());
  for (auto w : params.shape.decoder) put_u64(out, w);
  put_u64(out, static_cast<std::uint64_t>(params.values.size()));
  for (Eigen::Index i = 0; i < params.values.size(); ++i) {
    put_u64(out, std::bit_cast<std::uint64_t>(params.values[i]));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

AutoencoderParams load_params(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string in = ss.str();
  if (in.size() < sizeof kMagic || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0) {
    throw IoError("'" + path.string() + "' is not a surrogate checkpoint");
  }
  std::size_t pos = sizeof kMagic;
  if (get_u64(in, pos, path) != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version in '" + path.string() + "'");
  }
  AutoencoderParams p;
  p.shape.points = get_u64(in, pos, path);
  p.shape.latent = get_u64(in, pos, path);
  const auto read_widths = [&] {
    const std::uint64_t n = get_u64(in, pos, path);
    if (n > 64) throw IoError("corrupt layer count in '" + path.string() + "'");
    std::vector<std::size_t> w(n);
    for (auto& x : w) x = get_u64(in, pos, path);
    return w;
  };
  p.shape.encoder = read_widths();
  p.shape.decoder = read_widths();
  if (!p.shape.is_valid()) throw IoError("invalid model shape in '" + path.string() + "'");
  const std::uint64_t count = get_u64(in, pos, path);
  if (count != p.shape.parameter_count() || in.size() - pos != count * 8) {
    throw IoError("parameter count mismatch in '" + path.string() + "'");
  }
  p.values.resize(static_cast<Eigen::Index>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    p.values[static_cast<Eigen::Index>(i)] = std::bit_cast<double>(get_u64(in, pos, path));
  }
  return p;
}

void write_loss_csv(std::span<const double> losses, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << "iteration,loss\n";
  char buf[64];
  for (std::size_t i = 0; i < losses.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, losses[i]);
    f << buf;
  }
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace autosynth
