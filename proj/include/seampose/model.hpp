#pragma once

#include <future>
#include <vector>

#include "seampose/kinematics.hpp"
#include "seampose/signal.hpp"
#include "seampose/tensor.hpp"

namespace seampose {

struct ModelConfig {
  int channels = kChannels;
  int embed = 96;
  int hidden = 256;
  int dec1 = 256;
  int window = kWindowFrames;
  static constexpr int lstm_layers = 2;
  static constexpr int decode_steps = 3;  // median-pooled prediction frames
  static constexpr int out = kPoseDim;

  int lstm_input(int layer) const { return layer == 0 ? embed : 2 * hidden; }

  bool operator==(const ModelConfig&) const = default;
};

/// All trainable tensors of the embed / bi-LSTM / decoder network.
template <typename S>
struct ModelParams {
  ModelConfig cfg;
  Tensor<S> embed_w, embed_b;
  struct Direction {
    Tensor<S> w_in;   // (4H, in)
    Tensor<S> w_rec;  // (4H, H)
    Tensor<S> bias;   // (4H)
  };
  // [layer][0]=forward-in-time, [layer][1]=backward-in-time
  std::array<std::array<Direction, 2>, ModelConfig::lstm_layers> lstm;
  Tensor<S> dec1_w, dec1_b, dec2_w, dec2_b;

  explicit ModelParams(const ModelConfig& c = {}) : cfg(c) {
    const int h = cfg.hidden;
    embed_w = Tensor<S>("embed.w", {cfg.embed, cfg.channels});
    embed_b = Tensor<S>("embed.b", {cfg.embed});
    for (int l = 0; l < ModelConfig::lstm_layers; ++l)
      for (int d = 0; d < 2; ++d) {
        const std::string p = "lstm" + std::to_string(l) + (d == 0 ? ".fwd." : ".bwd.");
        lstm[l][d].w_in = Tensor<S>(p + "w_in", {4 * h, cfg.lstm_input(l)});
        lstm[l][d].w_rec = Tensor<S>(p + "w_rec", {4 * h, h});
        lstm[l][d].bias = Tensor<S>(p + "bias", {4 * h});
      }
    dec1_w = Tensor<S>("dec1.w", {cfg.dec1, 2 * h});
    dec1_b = Tensor<S>("dec1.b", {cfg.dec1});
    dec2_w = Tensor<S>("dec2.w", {ModelConfig::out, cfg.dec1});
    dec2_b = Tensor<S>("dec2.b", {ModelConfig::out});
  }

  std::vector<Tensor<S>*> tensors() {
    std::vector<Tensor<S>*> out = {&embed_w, &embed_b};
    for (auto& layer : lstm)
      for (auto& dir : layer) {
        out.push_back(&dir.w_in);
        out.push_back(&dir.w_rec);
        out.push_back(&dir.bias);
      }
    for (Tensor<S>* t : {&dec1_w, &dec1_b, &dec2_w, &dec2_b}) out.push_back(t);
    return out;
  }
  std::vector<const Tensor<S>*> tensors() const {
    auto mutable_list = const_cast<ModelParams*>(this)->tensors();
    return {mutable_list.begin(), mutable_list.end()};
  }

  void init(uint64_t seed) {
    Rng rng(derive_seed(seed, 0x1417));
    embed_w.init_uniform(rng, 1.0 / std::sqrt(double(cfg.channels)));
    embed_b.init_uniform(rng, 1.0 / std::sqrt(double(cfg.channels)));
    const double kb = 1.0 / std::sqrt(double(cfg.hidden));
    for (auto& layer : lstm)
      for (auto& dir : layer) {
        dir.w_in.init_uniform(rng, kb);
        dir.w_rec.init_uniform(rng, kb);
        dir.bias.init_uniform(rng, kb);
      }
    dec1_w.init_uniform(rng, 1.0 / std::sqrt(double(2 * cfg.hidden)));
    dec1_b.init_uniform(rng, 1.0 / std::sqrt(double(2 * cfg.hidden)));
    dec2_w.init_uniform(rng, 1.0 / std::sqrt(double(cfg.dec1)));
    dec2_b.init_uniform(rng, 1.0 / std::sqrt(double(cfg.dec1)));
  }

  void zero_grad() {
    for (Tensor<S>* t : tensors()) t->zero_grad();
  }

  size_t num_params() const {
    size_t n = 0;
    for (const Tensor<S>* t : tensors()) n += t->size();
    return n;
  }

  template <typename T>
  ModelParams<T> cast() const {
    ModelParams<T> out(cfg);
    auto src = tensors();
    auto dst = out.tensors();
    for (size_t i = 0; i < src.size(); ++i) *dst[i] = src[i]->template cast<T>();
    return out;
  }
};

namespace nn {

template <typename S>
using Mx = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vx = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
S sigmoid(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

/// Cached activations of one LSTM direction over a window.
template <typename S>
struct DirectionCache {
  Mx<S> gate_i, gate_f, gate_g, gate_o;  // (H, T), post-activation
  Mx<S> cell, cell_tanh;                 // (H, T)
  Mx<S> h;                               // (H, T)

  void resize(int h_dim, int t) {
    for (Mx<S>* m : {&gate_i, &gate_f, &gate_g, &gate_o, &cell, &cell_tanh, &h})
      m->resize(h_dim, t);
  }
};

template <typename S>
struct ForwardCache {
  Mx<S> x;      // (C, T) input window
  Mx<S> embed;  // (E, T)
  std::array<std::array<DirectionCache<S>, 2>, ModelConfig::lstm_layers> dir;
  std::array<Mx<S>, ModelConfig::lstm_layers> layer_out;  // (2H, T)
  Mx<S> dec1_out;                                         // (D1, 3)
  Mx<S> dec_y;                                            // (78, 3)
  std::array<int, ModelConfig::out> median_idx{};
  PoseVector<S> pose;
  FkCache<S> fk;
  // scratch for backward
  Mx<S> d_layer, d_gates, d_out_lower;
};

/// Runs one direction of one layer: input (in, T) already multiplied by
/// nothing; this applies w_in once as a GEMM, then the recurrence.
template <typename S>
void run_direction(const typename ModelParams<S>::Direction& p, const Mx<S>& input, bool backward,
                   DirectionCache<S>& c) {
  const int h = p.w_rec.cols();
  const int t_len = static_cast<int>(input.cols());
  c.resize(h, t_len);
  Mx<S> pre = p.w_in.m() * input;  // (4H, T)
  pre.colwise() += p.bias.v();
  Vx<S> hprev = Vx<S>::Zero(h), cprev = Vx<S>::Zero(h), gates(4 * h);
  for (int s = 0; s < t_len; ++s) {
    const int t = backward ? t_len - 1 - s : s;
    gates.noalias() = p.w_rec.m() * hprev;
    gates += pre.col(t);
    c.gate_i.col(t) = S(1) / (S(1) + (-gates.segment(0, h).array()).exp());
    c.gate_f.col(t) = S(1) / (S(1) + (-gates.segment(h, h).array()).exp());
    c.gate_g.col(t) = gates.segment(2 * h, h).array().tanh();
    c.gate_o.col(t) = S(1) / (S(1) + (-gates.segment(3 * h, h).array()).exp());
    c.cell.col(t) = c.gate_f.col(t).cwiseProduct(cprev) +
                    c.gate_i.col(t).cwiseProduct(c.gate_g.col(t));
    c.cell_tanh.col(t) = c.cell.col(t).array().tanh();
    c.h.col(t) = c.gate_o.col(t).cwiseProduct(c.cell_tanh.col(t));
    hprev = c.h.col(t);
    cprev = c.cell.col(t);
  }
}

/// BPTT for one direction. `dh_out` is dL/dh at every step. Reads weights
/// from `p`, accumulates parameter gradients into `g` (may alias `p`).
template <typename S>
void direction_backward(const typename ModelParams<S>::Direction& p,
                        typename ModelParams<S>::Direction& g, const Mx<S>& input, bool backward,
                        const DirectionCache<S>& c, const Mx<S>& dh_out, Mx<S>& d_input_accum) {
  const int h = p.w_rec.cols();
  const int t_len = static_cast<int>(input.cols());
  Mx<S> da(4 * h, t_len);
  Vx<S> dh_rec = Vx<S>::Zero(h), dc = Vx<S>::Zero(h);
  for (int s = t_len - 1; s >= 0; --s) {
    const int t = backward ? t_len - 1 - s : s;
    const int t_prev = backward ? t + 1 : t - 1;  // previous processing step
    const S* gi = &c.gate_i(0, t);
    const S* gf = &c.gate_f(0, t);
    const S* gg = &c.gate_g(0, t);
    const S* go = &c.gate_o(0, t);
    const S* ct = &c.cell_tanh(0, t);
    const S* cp = s == 0 ? nullptr : &c.cell(0, t_prev);
    const S* dho = &dh_out(0, t);
    S* dac = &da(0, t);
    S* dcp = dc.data();
    const S* dhr = dh_rec.data();
    for (int k = 0; k < h; ++k) {
      const S dh = dho[k] + dhr[k];
      const S d_cell = dh * go[k] * (S(1) - ct[k] * ct[k]) + dcp[k];
      dac[k] = d_cell * gg[k] * gi[k] * (S(1) - gi[k]);
      dac[h + k] = (cp ? d_cell * cp[k] : S(0)) * gf[k] * (S(1) - gf[k]);
      dac[2 * h + k] = d_cell * gi[k] * (S(1) - gg[k] * gg[k]);
      dac[3 * h + k] = dh * ct[k] * go[k] * (S(1) - go[k]);
      dcp[k] = d_cell * gf[k];
    }
    dh_rec.noalias() = p.w_rec.m().transpose() * da.col(t);
    if (s == 0) break;
  }
  // Parameter gradients: h_prev matrix shifted by one processing step.
  Mx<S> hprev = Mx<S>::Zero(h, t_len);
  for (int s = 1; s < t_len; ++s) {
    const int t = backward ? t_len - 1 - s : s;
    const int tp = backward ? t + 1 : t - 1;
    hprev.col(t) = c.h.col(tp);
  }
  g.w_in.g().noalias() += da * input.transpose();
  g.w_rec.g().noalias() += da * hprev.transpose();
  g.bias.gv().noalias() += da.rowwise().sum();
  d_input_accum.noalias() += p.w_in.m().transpose() * da;
}

/// Elementwise median of three with a deterministic argmedian
/// (ties resolved toward the lowest index).
template <typename S>
int median3_index(S a, S b, S c) {
  // order indices by (value, index)
  int idx[3] = {0, 1, 2};
  S val[3] = {a, b, c};
  auto less = [&](int p, int q) { return val[p] < val[q] || (val[p] == val[q] && p < q); };
  if (less(idx[1], idx[0])) std::swap(idx[0], idx[1]);
  if (less(idx[2], idx[1])) std::swap(idx[1], idx[2]);
  if (less(idx[1], idx[0])) std::swap(idx[0], idx[1]);
  return idx[1];
}

}  // namespace nn

/// Full forward pass on a single window. `x` is row-major (window, channels).
/// The per-window formulation keeps the output bit-identical regardless of
/// how windows are batched around it.
template <typename S>
void forward_window(const ModelParams<S>& params, const S* x, const Skeleton& skel,
                    nn::ForwardCache<S>& c, PoseVector<S>* pose_out, JointPositions<S>* joints_out,
                    bool parallel_dirs = false) {
  const ModelConfig& cfg = params.cfg;
  const int t_len = cfg.window, ch = cfg.channels, h = cfg.hidden;
  c.x.resize(ch, t_len);
  for (int t = 0; t < t_len; ++t)
    for (int k = 0; k < ch; ++k) c.x(k, t) = x[t * ch + k];

  c.embed.noalias() = params.embed_w.m() * c.x;
  c.embed.colwise() += params.embed_b.v();

  const nn::Mx<S>* input = &c.embed;
  for (int l = 0; l < ModelConfig::lstm_layers; ++l) {
    if (parallel_dirs) {
      auto fwd = std::async(std::launch::async, [&] {
        nn::run_direction<S>(params.lstm[l][0], *input, false, c.dir[l][0]);
      });
      nn::run_direction<S>(params.lstm[l][1], *input, true, c.dir[l][1]);
      fwd.get();
    } else {
      nn::run_direction<S>(params.lstm[l][0], *input, false, c.dir[l][0]);
      nn::run_direction<S>(params.lstm[l][1], *input, true, c.dir[l][1]);
    }
    c.layer_out[l].resize(2 * h, t_len);
    c.layer_out[l].topRows(h) = c.dir[l][0].h;
    c.layer_out[l].bottomRows(h) = c.dir[l][1].h;
    input = &c.layer_out[l];
  }

  const int d_steps = ModelConfig::decode_steps;
  const nn::Mx<S>& top = c.layer_out[ModelConfig::lstm_layers - 1];
  c.dec1_out.resize(cfg.dec1, d_steps);
  c.dec_y.resize(ModelConfig::out, d_steps);
  for (int s = 0; s < d_steps; ++s) {
    const int t = t_len - d_steps + s;
    c.dec1_out.col(s) = (params.dec1_w.m() * top.col(t) + params.dec1_b.v()).array().tanh();
    c.dec_y.col(s) = params.dec2_w.m() * c.dec1_out.col(s) + params.dec2_b.v();
  }
  if (!c.dec_y.allFinite()) throw NonFiniteActivation("forward: non-finite decoder output");

  for (int i = 0; i < ModelConfig::out; ++i) {
    const int k = nn::median3_index(c.dec_y(i, 0), c.dec_y(i, 1), c.dec_y(i, 2));
    c.median_idx[i] = k;
    c.pose.v(i) = c.dec_y(i, k);
  }
  if (pose_out) *pose_out = c.pose;
  const JointPositions<S> joints = forward_kinematics(c.pose, skel, &c.fk);
  if (joints_out) *joints_out = joints;
}

/// Eq.-style loss: MAE over the 78 pose entries plus MAE over the 24
/// position entries (meters).
template <typename S>
S pose_joint_loss(const PoseVector<S>& pose, const JointPositions<S>& joints,
                  const Eigen::Ref<const Eigen::Matrix<S, kPoseDim, 1>>& pose_target,
                  const Eigen::Ref<const Eigen::Matrix<S, kJointDim, 1>>& joint_target) {
  const S lp = (pose.v - pose_target).cwiseAbs().sum() / S(kPoseDim);
  const S lj = (joints.p - joint_target).cwiseAbs().sum() / S(kJointDim);
  return lp + lj;
}

/// Forward + full reverse pass for one window. Weights come from `params`;
/// gradients accumulate into `grads` (which may be the same object, or a
/// separate per-thread sink — caller zeroes and normalizes). `upstream`
/// scales the loss being differentiated. Returns the (unscaled) window loss.
template <typename S>
S loss_and_backward(const ModelParams<S>& params, ModelParams<S>& grads, const S* x,
                    const Eigen::Matrix<S, kPoseDim, 1>& pose_target,
                    const Eigen::Matrix<S, kJointDim, 1>& joint_target, const Skeleton& skel,
                    nn::ForwardCache<S>& c, JointPositions<S>* joints_out = nullptr,
                    S upstream = S(1)) {
  PoseVector<S> pose;
  JointPositions<S> joints;
  forward_window(params, x, skel, c, &pose, &joints);
  if (joints_out) *joints_out = joints;
  const S loss = pose_joint_loss<S>(pose, joints, pose_target, joint_target);

  // d/dpose of both MAE terms; the joint term flows back through FK.
  Eigen::Matrix<S, kJointDim, 1> d_joints;
  for (int k = 0; k < kJointDim; ++k) {
    const S d = joints.p(k) - joint_target(k);
    d_joints(k) = (d > S(0) ? upstream : (d < S(0) ? -upstream : S(0))) / S(kJointDim);
  }
  const PoseVector<S> gfk = fk_backward<S>(c.pose, skel, c.fk, d_joints);
  Eigen::Matrix<S, kPoseDim, 1> d_pose;
  for (int k = 0; k < kPoseDim; ++k) {
    const S d = c.pose.v(k) - pose_target(k);
    d_pose(k) = (d > S(0) ? upstream : (d < S(0) ? -upstream : S(0))) / S(kPoseDim) + gfk.v(k);
  }

  const ModelConfig& cfg = params.cfg;
  const int t_len = cfg.window, h = cfg.hidden;
  const int d_steps = ModelConfig::decode_steps;

  // median pool routes each entry's gradient to the median column
  nn::Mx<S> dy = nn::Mx<S>::Zero(ModelConfig::out, d_steps);
  for (int i = 0; i < ModelConfig::out; ++i) dy(i, c.median_idx[i]) = d_pose(i);

  // decoder backward
  const nn::Mx<S>& top = c.layer_out[ModelConfig::lstm_layers - 1];
  nn::Mx<S>& d_top = c.d_layer;
  d_top = nn::Mx<S>::Zero(2 * h, t_len);
  for (int s = 0; s < d_steps; ++s) {
    const int t = t_len - d_steps + s;
    grads.dec2_w.g().noalias() += dy.col(s) * c.dec1_out.col(s).transpose();
    grads.dec2_b.gv() += dy.col(s);
    nn::Vx<S> dd1 = params.dec2_w.m().transpose() * dy.col(s);
    dd1.array() *= (S(1) - c.dec1_out.col(s).array().square());
    grads.dec1_w.g().noalias() += dd1 * top.col(t).transpose();
    grads.dec1_b.gv() += dd1;
    d_top.col(t).noalias() += params.dec1_w.m().transpose() * dd1;
  }

  // LSTM layers, top down
  for (int l = ModelConfig::lstm_layers - 1; l >= 0; --l) {
    const nn::Mx<S>& input = l == 0 ? c.embed : c.layer_out[l - 1];
    nn::Mx<S>& d_input = c.d_out_lower;
    d_input = nn::Mx<S>::Zero(input.rows(), t_len);
    const nn::Mx<S> dh_fwd = d_top.topRows(h);
    const nn::Mx<S> dh_bwd = d_top.bottomRows(h);
    nn::direction_backward<S>(params.lstm[l][0], grads.lstm[l][0], input, false, c.dir[l][0],
                              dh_fwd, d_input);
    nn::direction_backward<S>(params.lstm[l][1], grads.lstm[l][1], input, true, c.dir[l][1],
                              dh_bwd, d_input);
    d_top = d_input;
  }

  // embed backward (d_top now holds dL/d embed output)
  grads.embed_w.g().noalias() += d_top * c.x.transpose();
  grads.embed_b.gv() += d_top.rowwise().sum();
  return loss;
}

}  // namespace seampose
