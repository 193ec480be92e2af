#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "seampose/dataset.hpp"
#include "seampose/model.hpp"

namespace seampose {

enum class Stage : int { Independent = 0, Adaptive };

inline const char* stage_name(Stage s) {
  return s == Stage::Independent ? "independent" : "adaptive";
}

struct TrainConfig {
  Stage stage = Stage::Independent;
  int epochs = 0;        // 0 -> stage default
  double start_lr = 0;   // 0 -> stage default
  int batch = 512;
  uint64_t seed = 1;
  bool augment = true;
  int hidden = 256;
  int threads = 0;  // 0 -> hardware concurrency, capped at 4

  int resolved_epochs() const {
    return epochs > 0 ? epochs : (stage == Stage::Independent ? 15 : 10);
  }
  double resolved_lr() const {
    return start_lr > 0 ? start_lr : (stage == Stage::Independent ? 8e-3 : 4e-4);
  }
  int resolved_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(4u, std::max(1u, hw)));
  }
};

/// Cosine decay from start_lr at the first step to 0 at the last.
inline double cosine_lr(double start_lr, long step, long total_steps) {
  if (total_steps <= 1) return start_lr;
  const double u = static_cast<double>(step) / static_cast<double>(total_steps - 1);
  return 0.5 * start_lr * (1.0 + std::cos(kPi * u));
}

/// Adam with bias correction; epsilon outside the square root.
template <typename S>
class AdamOptimizer {
 public:
  explicit AdamOptimizer(ModelParams<S>& params, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (Tensor<S>* t : params.tensors()) {
      m_.emplace_back(t->size(), S(0));
      v_.emplace_back(t->size(), S(0));
    }
  }

  void step(ModelParams<S>& params, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    auto tensors = params.tensors();
    for (size_t i = 0; i < tensors.size(); ++i) {
      Tensor<S>& p = *tensors[i];
      for (size_t k = 0; k < p.size(); ++k) {
        const S g = p.grad[k];
        m_[i][k] = static_cast<S>(beta1_ * m_[i][k] + (1.0 - beta1_) * g);
        v_[i][k] = static_cast<S>(beta2_ * v_[i][k] + (1.0 - beta2_) * g * g);
        const double mhat = m_[i][k] / bc1;
        const double vhat = v_[i][k] / bc2;
        p.data[k] -= static_cast<S>(lr * mhat / (std::sqrt(vhat) + eps_));
      }
    }
  }

  long steps() const { return t_; }

 private:
  double beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<std::vector<S>> m_, v_;
};

struct MetricsRow {
  int epoch;
  std::string split;
  double loss;
  double mpjpe_cm;
};

inline void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << "epoch,split,loss,mpjpe_cm\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%.17g,%.17g\n", r.epoch, r.split.c_str(), r.loss,
                  r.mpjpe_cm);
    f << buf;
  }
}

struct TrainResult {
  ModelParams<float> params{ModelConfig{}};  // best-validation checkpoint
  std::vector<MetricsRow> log;
  double best_val_loss = 0;
  int best_epoch = -1;
};

namespace detail {

struct EvalAccum {
  double loss = 0;
  double mpjpe = 0;
  size_t count = 0;
};

/// Runs `fn(worker)` on nt threads and rethrows the first worker error
/// (by worker index, so failures are deterministic too).
template <typename Fn>
void run_workers(int nt, Fn&& fn) {
  std::vector<std::exception_ptr> errors(nt);
  std::vector<std::thread> pool;
  for (int w = 0; w < nt; ++w)
    pool.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Forward the listed windows; deterministic reduction in chunk order.
inline EvalAccum eval_windows(const ModelParams<float>& params, const WindowSet& set,
                              int threads) {
  const size_t n = set.size();
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>((n + 63) / 64)));
  std::vector<EvalAccum> partial(nt);
  const size_t chunk = (n + nt - 1) / nt;
  run_workers(nt, [&](int w) {
    nn::ForwardCache<float> cache;
    const size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    for (size_t i = lo; i < hi; ++i) {
      PoseVector<float> pose;
      JointPositions<float> joints;
      forward_window<float>(params, set.window_ptr(i), set.skeletons.at(set.subject[i]), cache,
                            &pose, &joints);
      JointPositions<float> truth;
      truth.p = set.joint_label(i);
      partial[w].loss +=
          pose_joint_loss<float>(pose, joints, set.pose_label(i), set.joint_label(i));
      partial[w].mpjpe += mpjpe(joints, truth);
      partial[w].count += 1;
    }
  });
  EvalAccum total;
  for (const auto& p : partial) {
    total.loss += p.loss;
    total.mpjpe += p.mpjpe;
    total.count += p.count;
  }
  if (total.count > 0) {
    total.loss /= static_cast<double>(total.count);
    total.mpjpe /= static_cast<double>(total.count);
  }
  return total;
}

}  // namespace detail

/// Two-stage training entry point: Adam with a cosine schedule over all
/// steps, per-epoch train/val logging, best-validation checkpoint retained.
/// Deterministic given the seed and thread count.
inline TrainResult train(const TrainConfig& cfg, const WindowSet& train_set,
                         const WindowSet& val_set, const ModelParams<float>* init = nullptr,
                         std::ostream* progress = nullptr) {
  if (train_set.size() == 0) throw ConfigError("train: empty training set");
  if (val_set.size() == 0) throw ConfigError("train: empty validation set");
  if (cfg.stage == Stage::Adaptive && init == nullptr)
    throw ConfigError("train: adaptive stage requires a trained base model");

  ModelConfig mc;
  mc.channels = train_set.channels;
  mc.hidden = cfg.hidden;
  mc.window = train_set.window;
  ModelParams<float> params(mc);
  if (init != nullptr) {
    if (!(init->cfg == mc)) throw ConfigError("train: base model configuration mismatch");
    params = *init;
  } else {
    params.init(cfg.seed);
  }

  const int epochs = cfg.resolved_epochs();
  const double lr0 = cfg.resolved_lr();
  const int batch = std::max(1, cfg.batch);
  const int threads = cfg.resolved_threads();
  const size_t n = train_set.size();
  const long batches_per_epoch = static_cast<long>((n + batch - 1) / batch);
  const long total_steps = batches_per_epoch * epochs;

  AdamOptimizer<float> adam(params);
  TrainResult result;
  const double initial_val = detail::eval_windows(params, val_set, threads).loss;

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  // per-thread gradient buffers, reduced in thread order
  std::vector<ModelParams<float>> grad_buffers;
  for (int w = 0; w < threads; ++w) grad_buffers.emplace_back(mc);

  long step = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(cfg.seed, 0x5F0F, epoch));
    for (size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.bounded(i)]);

    double train_loss = 0, train_mpjpe = 0;
    size_t train_count = 0;
    for (long b = 0; b < batches_per_epoch; ++b, ++step) {
      const size_t lo = static_cast<size_t>(b) * batch;
      const size_t hi = std::min(n, lo + batch);
      const size_t bsize = hi - lo;
      const int nt = std::max(1, std::min<int>(threads, static_cast<int>((bsize + 7) / 8)));
      const size_t chunk = (bsize + nt - 1) / nt;
      std::vector<double> losses(nt, 0.0), errs(nt, 0.0);
      detail::run_workers(nt, [&](int w) {
        nn::ForwardCache<float> cache;
        std::vector<float> aug_buf;
        ModelParams<float>& g = grad_buffers[w];
        g.zero_grad();
        const size_t wlo = lo + w * chunk, whi = std::min(hi, wlo + chunk);
        for (size_t i = wlo; i < whi; ++i) {
          const size_t idx = order[i];
          const float* xin = train_set.window_ptr(idx);
          if (cfg.augment) {
            SignalWindow win;
            win.x.resize(train_set.window, train_set.channels);
            for (int t = 0; t < train_set.window; ++t)
              for (int c = 0; c < train_set.channels; ++c)
                win.x(t, c) = xin[t * train_set.channels + c];
            Rng arng(derive_seed(cfg.seed, 0xA417, epoch, idx));
            const SignalWindow aug = augment(win, arng);
            aug_buf.resize(static_cast<size_t>(train_set.window) * train_set.channels);
            for (int t = 0; t < train_set.window; ++t)
              for (int c = 0; c < train_set.channels; ++c)
                aug_buf[t * train_set.channels + c] = static_cast<float>(aug.x(t, c));
            xin = aug_buf.data();
          }
          JointPositions<float> joints;
          Eigen::Matrix<float, kPoseDim, 1> pt = train_set.pose_label(idx);
          Eigen::Matrix<float, kJointDim, 1> jt = train_set.joint_label(idx);
          losses[w] += loss_and_backward<float>(
              params, g, xin, pt, jt, train_set.skeletons.at(train_set.subject[idx]), cache,
              &joints);
          JointPositions<float> truth;
          truth.p = jt;
          errs[w] += mpjpe(joints, truth);
        }
      });

      params.zero_grad();
      auto dst = params.tensors();
      const float scale = 1.0f / static_cast<float>(bsize);
      for (int w = 0; w < nt; ++w) {
        auto src = grad_buffers[w].tensors();
        for (size_t ti = 0; ti < dst.size(); ++ti) dst[ti]->gv() += src[ti]->gv();
      }
      for (size_t ti = 0; ti < dst.size(); ++ti) {
        dst[ti]->gv() *= scale;
        if (!dst[ti]->grad_finite())
          throw NonFiniteGradient("train: non-finite gradient in " + dst[ti]->name);
      }
      adam.step(params, cosine_lr(lr0, step, total_steps));
      for (int w = 0; w < nt; ++w) {
        train_loss += losses[w];
        train_mpjpe += errs[w];
      }
      train_count += bsize;
    }

    const detail::EvalAccum val = detail::eval_windows(params, val_set, threads);
    result.log.push_back({epoch, "train", train_loss / static_cast<double>(train_count),
                          train_mpjpe / static_cast<double>(train_count)});
    result.log.push_back({epoch, "val", val.loss, val.mpjpe});
    if (progress)
      (*progress) << "epoch " << epoch << " train_loss "
                  << train_loss / static_cast<double>(train_count) << " val_loss " << val.loss
                  << " val_mpjpe_cm " << val.mpjpe << "\n";

    if (!std::isfinite(val.loss) || val.loss > 10.0 * std::max(initial_val, 1e-12))
      throw DivergenceDetected("train: validation loss diverged at epoch " +
                               std::to_string(epoch));
    if (result.best_epoch < 0 || val.loss < result.best_val_loss) {
      result.best_val_loss = val.loss;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  return result;
}

// ---- checkpoints: JSON manifest + little-endian f32 blob ----

inline void save_checkpoint(const std::string& dir, const ModelParams<float>& params,
                            const TrainConfig& cfg, int epoch, double val_loss) {
  std::filesystem::create_directories(dir);
  nlohmann::json tensors = nlohmann::json::array();
  size_t offset = 0;
  std::ofstream blob(dir + "/tensors.bin", std::ios::binary);
  if (!blob) throw DataError("cannot write " + dir + "/tensors.bin");
  for (const Tensor<float>* t : params.tensors()) {
    tensors.push_back({{"name", t->name}, {"shape", t->shape}, {"offset", offset}});
    blob.write(reinterpret_cast<const char*>(t->data.data()),
               static_cast<std::streamsize>(t->size() * sizeof(float)));
    offset += t->size();
  }
  nlohmann::json j = {
      {"format", "seampose-checkpoint-v1"},
      {"model",
       {{"channels", params.cfg.channels},
        {"embed", params.cfg.embed},
        {"hidden", params.cfg.hidden},
        {"dec1", params.cfg.dec1},
        {"window", params.cfg.window}}},
      {"train",
       {{"stage", stage_name(cfg.stage)},
        {"epochs", cfg.resolved_epochs()},
        {"start_lr", cfg.resolved_lr()},
        {"batch", cfg.batch},
        {"seed", cfg.seed},
        {"augment", cfg.augment}}},
      {"epoch", epoch},
      {"val_loss", val_loss},
      {"dtype", "f32le"},
      {"tensors", tensors}};
  std::ofstream f(dir + "/manifest.json");
  if (!f) throw DataError("cannot write " + dir + "/manifest.json");
  f << j.dump(2) << "\n";
}

inline ModelParams<float> load_checkpoint(const std::string& dir) {
  std::ifstream f(dir + "/manifest.json");
  if (!f) throw DataError("cannot read " + dir + "/manifest.json");
  nlohmann::json j;
  f >> j;
  if (j.at("format").get<std::string>() != "seampose-checkpoint-v1")
    throw DataError(dir + ": unknown checkpoint format");
  ModelConfig mc;
  mc.channels = j.at("model").at("channels").get<int>();
  mc.embed = j.at("model").at("embed").get<int>();
  mc.hidden = j.at("model").at("hidden").get<int>();
  mc.dec1 = j.at("model").at("dec1").get<int>();
  mc.window = j.at("model").at("window").get<int>();
  ModelParams<float> params(mc);
  std::ifstream blob(dir + "/tensors.bin", std::ios::binary);
  if (!blob) throw DataError("cannot read " + dir + "/tensors.bin");
  for (Tensor<float>* t : params.tensors()) {
    blob.read(reinterpret_cast<char*>(t->data.data()),
              static_cast<std::streamsize>(t->size() * sizeof(float)));
    if (!blob) throw DataError(dir + ": truncated tensor blob");
  }
  for (const Tensor<float>* t : params.tensors())
    if (!t->finite()) throw DataError(dir + ": non-finite parameters in checkpoint");
  return params;
}

}  // namespace seampose
