#include <catch2/catch.hpp>

#include <filesystem>

#include "seampose/train.hpp"

using namespace seampose;

namespace {

ModelConfig small_config() {
  ModelConfig c;
  c.channels = 4;
  c.window = 24;
  c.hidden = 8;
  return c;
}

// Fabricated in-memory window set with valid rotation targets.
WindowSet fake_window_set(size_t n, uint64_t seed, int window = 24, int channels = 4) {
  WindowSet set;
  set.window = window;
  set.channels = channels;
  for (int c = 0; c < channels; ++c) set.channel_index.push_back(c);
  const Skeleton skel = Skeleton::with_arm_length(0.57);
  set.skeletons.emplace(0, skel);
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    PoseVector<double> pose;
    for (int j = 0; j < kPoseJoints; ++j)
      pose.rot6(static_cast<PoseJoint>(j)) = rot6d_from_matrix(random_rotation(rng));
    // Windows correlated with the pose so there is something to learn.
    for (int t = 0; t < window; ++t)
      for (int c = 0; c < channels; ++c)
        set.x.push_back(static_cast<float>(0.5 * pose.v(c * 7) +
                                           0.2 * std::sin(0.4 * t + pose.v(c * 11 + 3)) +
                                           0.05 * rng.uniform(-1, 1)));
    const JointPositions<double> jp = forward_kinematics(pose, skel);
    for (int k = 0; k < kPoseDim; ++k) set.pose.push_back(static_cast<float>(pose.v(k)));
    for (int k = 0; k < kJointDim; ++k) set.jpos.push_back(static_cast<float>(jp.p(k)));
    set.subject.push_back(0);
    set.category.push_back(0);
    set.t_us.push_back(i * kFramePeriodUs);
    set.session_id.push_back(0);
  }
  return set;
}

}  // namespace

TEST_CASE("cosine schedule endpoints") {
  const double lr0 = 8e-3;
  REQUIRE(cosine_lr(lr0, 0, 1500) == lr0);
  REQUIRE(cosine_lr(lr0, 1499, 1500) <= 1e-3 * lr0);
  REQUIRE(cosine_lr(lr0, 749, 1500) == Approx(0.5 * lr0).epsilon(0.01));
  REQUIRE(cosine_lr(lr0, 0, 1) == lr0);
}

TEST_CASE("one optimizer step at lr=1e-5 strictly decreases the batch loss") {
  const WindowSet set = fake_window_set(8, 42);
  ModelParams<float> params(small_config());
  params.init(7);
  AdamOptimizer<float> adam(params);
  const Skeleton& skel = set.skeletons.at(0);

  auto batch_loss = [&](ModelParams<float>& p, bool accumulate) {
    nn::ForwardCache<float> cache;
    double total = 0;
    for (size_t i = 0; i < set.size(); ++i) {
      Eigen::Matrix<float, kPoseDim, 1> pt = set.pose_label(i);
      Eigen::Matrix<float, kJointDim, 1> jt = set.joint_label(i);
      if (accumulate) {
        total += loss_and_backward<float>(p, p, set.window_ptr(i), pt, jt, skel, cache);
      } else {
        PoseVector<float> pose;
        JointPositions<float> joints;
        forward_window<float>(p, set.window_ptr(i), skel, cache, &pose, &joints);
        total += pose_joint_loss<float>(pose, joints, pt, jt);
      }
    }
    return total / static_cast<double>(set.size());
  };

  params.zero_grad();
  const double before = batch_loss(params, true);
  for (Tensor<float>* t : params.tensors()) t->gv() *= 1.0f / static_cast<float>(set.size());
  adam.step(params, 1e-5);
  const double after = batch_loss(params, false);
  REQUIRE(after < before);
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
  const WindowSet train_set = fake_window_set(24, 1);
  const WindowSet val_set = fake_window_set(8, 2);
  TrainConfig cfg;
  cfg.stage = Stage::Independent;
  cfg.epochs = 2;
  cfg.start_lr = 2e-4;
  cfg.batch = 8;
  cfg.seed = 1234;
  cfg.hidden = 8;
  cfg.threads = 2;
  // channels/window come from the set
  TrainResult a = train(cfg, train_set, val_set);
  TrainResult b = train(cfg, train_set, val_set);
  REQUIRE(a.log.size() == b.log.size());
  for (size_t i = 0; i < a.log.size(); ++i) {
    REQUIRE(a.log[i].loss == b.log[i].loss);
    REQUIRE(a.log[i].mpjpe_cm == b.log[i].mpjpe_cm);
  }
  auto ta = a.params.tensors(), tb = b.params.tensors();
  for (size_t i = 0; i < ta.size(); ++i)
    for (size_t k = 0; k < ta[i]->size(); ++k) REQUIRE(ta[i]->data[k] == tb[i]->data[k]);
  REQUIRE(a.best_epoch == b.best_epoch);
}

TEST_CASE("adaptive stage requires a base model") {
  const WindowSet train_set = fake_window_set(8, 3);
  TrainConfig cfg;
  cfg.stage = Stage::Adaptive;
  cfg.hidden = 8;
  REQUIRE_THROWS_AS(train(cfg, train_set, train_set, nullptr), ConfigError);
}

TEST_CASE("stage defaults follow the two-stage scheme") {
  TrainConfig ui;
  ui.stage = Stage::Independent;
  REQUIRE(ui.resolved_epochs() == 15);
  REQUIRE(ui.resolved_lr() == 8e-3);
  TrainConfig ua;
  ua.stage = Stage::Adaptive;
  REQUIRE(ua.resolved_epochs() == 10);
  REQUIRE(ua.resolved_lr() == 4e-4);
  REQUIRE(ui.batch == 512);
}

TEST_CASE("an absurd learning rate raises a numeric failure") {
  const WindowSet train_set = fake_window_set(16, 5);
  const WindowSet val_set = fake_window_set(8, 6);
  TrainConfig cfg;
  cfg.epochs = 6;
  cfg.start_lr = 2e3;
  cfg.batch = 8;
  cfg.hidden = 8;
  cfg.threads = 1;
  cfg.augment = false;
  REQUIRE_THROWS_AS(train(cfg, train_set, val_set), NumericError);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  ModelParams<float> params(small_config());
  params.init(55);
  TrainConfig cfg;
  cfg.seed = 55;
  const auto dir = std::filesystem::temp_directory_path() / "seampose_ckpt_test";
  std::filesystem::remove_all(dir);
  save_checkpoint(dir.string(), params, cfg, 3, 0.125);
  const ModelParams<float> back = load_checkpoint(dir.string());
  REQUIRE(back.cfg == params.cfg);
  auto ta = params.tensors();
  auto tb = back.tensors();
  for (size_t i = 0; i < ta.size(); ++i) {
    REQUIRE(ta[i]->name == tb[i]->name);
    for (size_t k = 0; k < ta[i]->size(); ++k) REQUIRE(ta[i]->data[k] == tb[i]->data[k]);
  }
}

TEST_CASE("metrics csv format") {
  std::vector<MetricsRow> rows = {{0, "train", 0.5, 12.25}, {0, "val", 0.625, 14.5}};
  const auto path =
      (std::filesystem::temp_directory_path() / "seampose_metrics_test.csv").string();
  write_metrics_csv(path, rows);
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  REQUIRE(line == "epoch,split,loss,mpjpe_cm");
  std::getline(f, line);
  REQUIRE(line == "0,train,0.5,12.25");
}

TEST_CASE("short training run learns the fabricated mapping") {
  const WindowSet train_set = fake_window_set(160, 11);
  const WindowSet val_set = fake_window_set(40, 12);
  TrainConfig cfg;
  cfg.epochs = 8;
  cfg.start_lr = 1e-3;
  cfg.batch = 16;
  cfg.seed = 3;
  cfg.hidden = 8;
  cfg.threads = 2;
  cfg.augment = false;
  const TrainResult r = train(cfg, train_set, val_set);
  const double first_val = r.log[1].loss;
  REQUIRE(r.log[1].split == "val");
  REQUIRE(r.best_val_loss < first_val);
  REQUIRE(r.best_epoch >= 0);
}
