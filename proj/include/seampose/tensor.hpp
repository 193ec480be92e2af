#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "seampose/errors.hpp"
#include "seampose/rng.hpp"

namespace seampose {

/// Flat parameter tensor with a gradient slot. Matrices are column-major with
/// shape = {rows, cols}; vectors have shape = {n}.
template <typename S>
struct Tensor {
  std::string name;
  std::vector<int> shape;
  std::vector<S> data;
  std::vector<S> grad;

  Tensor() = default;
  Tensor(std::string n, std::vector<int> sh) : name(std::move(n)), shape(std::move(sh)) {
    size_t total = 1;
    for (int d : shape) total *= static_cast<size_t>(d);
    data.assign(total, S(0));
    grad.assign(total, S(0));
  }

  size_t size() const { return data.size(); }
  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() > 1 ? shape[1] : 1; }

  using Map = Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>>;
  using ConstMap = Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>>;
  using VecMap = Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, 1>>;
  using ConstVecMap = Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, 1>>;

  Map m() { return Map(data.data(), rows(), cols()); }
  ConstMap m() const { return ConstMap(data.data(), rows(), cols()); }
  Map g() { return Map(grad.data(), rows(), cols()); }
  VecMap v() { return VecMap(data.data(), static_cast<long>(data.size())); }
  ConstVecMap v() const { return ConstVecMap(data.data(), static_cast<long>(data.size())); }
  VecMap gv() { return VecMap(grad.data(), static_cast<long>(grad.size())); }

  void zero_grad() { std::fill(grad.begin(), grad.end(), S(0)); }

  /// Uniform fan-in initialization, filled in storage order.
  void init_uniform(Rng& rng, double bound) {
    for (auto& x : data) x = static_cast<S>(rng.uniform(-bound, bound));
  }

  bool finite() const {
    for (S x : data)
      if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
  }

  bool grad_finite() const {
    for (S x : grad)
      if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
  }

  template <typename T>
  Tensor<T> cast() const {
    Tensor<T> out;
    out.name = name;
    out.shape = shape;
    out.data.resize(data.size());
    out.grad.assign(data.size(), T(0));
    for (size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<T>(data[i]);
    return out;
  }
};

}  // namespace seampose
