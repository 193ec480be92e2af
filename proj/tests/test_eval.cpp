#include <catch2/catch.hpp>

#include <filesystem>

#include "seampose/evaluation.hpp"
#include "seampose/simulator.hpp"

using namespace seampose;

namespace {

// One tiny dataset shared by the evaluation tests.
const DatasetManifest& eval_dataset() {
  static const DatasetManifest manifest = [] {
    const auto dir = std::filesystem::temp_directory_path() / "seampose_eval_dataset";
    std::filesystem::remove_all(dir);
    SimOptions opt;
    opt.subjects = 2;
    opt.minutes_per_subject = 1.5;
    opt.sessions_per_subject = 3;
    opt.seed = 21;
    return build_dataset(opt, dir.string());
  }();
  return manifest;
}

}  // namespace

TEST_CASE("oracle predictor scores exactly zero") {
  const DatasetManifest& m = eval_dataset();
  OraclePredictor oracle(Skeleton::with_arm_length(m.subjects.back().arm_length_m));
  const EvalReport r = evaluate(oracle, m, m.splits.ua_test, "oracle");
  REQUIRE(r.overall_cm == 0.0);
  for (double j : r.per_joint_cm) REQUIRE(j == 0.0);
  REQUIRE(r.frames > 0);
}

TEST_CASE("constant mean-pose predictor matches a direct computation") {
  const DatasetManifest& m = eval_dataset();
  const JointPositions<float> mean = mean_pose_of(m, m.splits.ua_test);
  ConstantPredictor pred;
  pred.value = mean;
  const EvalReport r = evaluate(pred, m, m.splits.ua_test, "mean");

  // Independent oracle: walk the same windows, average distances directly.
  double total = 0;
  size_t frames = 0;
  for (int sid : m.splits.ua_test) {
    const auto it = std::find_if(m.sessions.begin(), m.sessions.end(),
                                 [sid](const SessionRef& s) { return s.id == sid; });
    const Session session = load_session(it->dir);
    const Skeleton skel = Skeleton::with_arm_length(m.subjects.back().arm_length_m);
    WindowStream ws(1);
    for (const auto& frame : session.frames) {
      const auto w = ws.push(frame);
      if (!w) continue;
      Eigen::Matrix<double, kJointDim, 1> truth =
          label_positions(session, frame.t_us, skel).p.cast<double>();
      double e = 0;
      for (int j = 0; j < kOutJoints; ++j)
        e += (mean.p.segment<3>(3 * j).cast<double>() - truth.segment<3>(3 * j)).norm() * 100.0;
      total += e / kOutJoints;
      ++frames;
    }
  }
  REQUIRE(frames == r.frames);
  REQUIRE(r.overall_cm == Approx(total / frames).margin(1e-9));
}

TEST_CASE("per-joint means recombine to the overall mean") {
  const DatasetManifest& m = eval_dataset();
  ConstantPredictor pred;
  pred.value = mean_pose_of(m, m.splits.ua_test);
  const EvalReport r = evaluate(pred, m, m.splits.ua_test, "mean");
  double s = 0;
  for (double j : r.per_joint_cm) s += j;
  REQUIRE(s / kOutJoints == Approx(r.overall_cm).margin(1e-9));
}

TEST_CASE("category stats partition the test frames") {
  const DatasetManifest& m = eval_dataset();
  ConstantPredictor pred;
  pred.value = mean_pose_of(m, m.splits.ua_test);
  const EvalReport r = evaluate(pred, m, m.splits.ua_test, "mean");
  size_t covered = 0;
  for (const auto& [name, st] : r.per_category) covered += st.frames;
  REQUIRE(covered == r.frames);
  REQUIRE(r.per_category.count("defined") == 1);
}

TEST_CASE("evaluation reports are deterministic and serializable") {
  const DatasetManifest& m = eval_dataset();
  ConstantPredictor pred;
  pred.value = mean_pose_of(m, m.splits.ua_test);
  const EvalReport a = evaluate(pred, m, m.splits.ua_test, "tag");
  const EvalReport b = evaluate(pred, m, m.splits.ua_test, "tag");
  REQUIRE(a.to_json().dump() == b.to_json().dump());
  REQUIRE(a.fingerprint == b.fingerprint);
  const EvalReport c = evaluate(pred, m, m.splits.ua_test, "other-tag");
  REQUIRE(a.fingerprint != c.fingerprint);

  const auto base = (std::filesystem::temp_directory_path() / "seampose_eval_report").string();
  a.save(base);
  REQUIRE(std::filesystem::exists(base + ".json"));
  REQUIRE(std::filesystem::exists(base + ".txt"));
  REQUIRE(a.render_text().find("overall MPJPE") != std::string::npos);
}

TEST_CASE("empty test sets are rejected") {
  const DatasetManifest& m = eval_dataset();
  ConstantPredictor pred;
  REQUIRE_THROWS_AS(evaluate(pred, m, {}, "none"), EmptyTestSet);
}

TEST_CASE("ablated window sets are bit-exact column subsets") {
  const DatasetManifest& m = eval_dataset();
  const std::vector<int> ids = {m.splits.ua_test[0]};
  const WindowSet full = build_window_set(m, ids, 4);
  const WindowSet ablated = build_window_set(m, ids, 4, channels_without(SeamPair::Sleeve));
  REQUIRE(ablated.channels == 6);
  REQUIRE(ablated.size() == full.size());
  const auto [l, r] = seam_pair_channels(SeamPair::Sleeve);
  for (size_t n = 0; n < full.size(); ++n) {
    const float* fw = full.window_ptr(n);
    const float* aw = ablated.window_ptr(n);
    int ac = 0;
    for (int c = 0; c < kChannels; ++c) {
      if (c == l || c == r) continue;
      for (int t = 0; t < full.window; ++t)
        REQUIRE(aw[t * ablated.channels + ac] == fw[t * full.channels + c]);
      ++ac;
    }
  }

  // Labels are untouched by channel removal.
  REQUIRE(ablated.pose == full.pose);
  REQUIRE(ablated.jpos == full.jpos);
}

TEST_CASE("window tensors round-trip through the binary sidecar format") {
  const DatasetManifest& m = eval_dataset();
  const WindowSet set = build_window_set(m, {m.splits.ui_train[0]}, 8);
  REQUIRE(set.size() > 0);
  const WindowTensor t = to_window_tensor(set);
  REQUIRE(t.shape[0] == static_cast<int>(set.size()));
  const auto base = (std::filesystem::temp_directory_path() / "seampose_windows").string();
  save_window_tensor(base, t);
  const WindowTensor back = load_window_tensor(base);
  REQUIRE(back.shape == t.shape);
  REQUIRE(back.hop == t.hop);
  REQUIRE(back.channel_names == t.channel_names);
  REQUIRE(back.data == t.data);
}

TEST_CASE("two-stage protocol end to end at toy scale") {
  const DatasetManifest& m = eval_dataset();
  ProtocolConfig pc;
  pc.ui.epochs = 2;
  pc.ui.start_lr = 2e-3;
  pc.ui.batch = 32;
  pc.ui.seed = 5;
  pc.ui.hidden = 8;
  pc.ui.threads = 2;
  pc.ua = pc.ui;
  pc.ua.epochs = 2;
  pc.ua.start_lr = 2e-4;
  pc.train_hop = 8;
  const ProtocolResult r = run_two_stage(m, pc);
  REQUIRE(r.report.frames > 0);
  REQUIRE(r.report.overall_cm > 0.0);
  REQUIRE(r.baseline_mpjpe_cm > 0.0);
  REQUIRE(std::isfinite(r.report.overall_cm));
  REQUIRE(r.ui_train.log.size() == 4);
  REQUIRE(r.ua_train.log.size() == 4);

  // Curve machinery at a single tiny budget.
  TrainConfig ua = pc.ua;
  const auto curve = finetune_curve(r.ui_model, m, ua, {0.4}, 8);
  REQUIRE(curve.size() == 1);
  REQUIRE(curve[0].windows > 0);

  const auto svg = (std::filesystem::temp_directory_path() / "seampose_curve.svg").string();
  write_svg_curve(svg, {{1, 10, 0.5, 10}, {2, 8, 0.4, 20}}, "curve");
  REQUIRE(std::filesystem::exists(svg));
  const auto bars = (std::filesystem::temp_directory_path() / "seampose_bars.svg").string();
  write_svg_bars(bars, {"a", "b"}, {1.0, 2.0}, "bars");
  REQUIRE(std::filesystem::exists(bars));
}
