#pragma once

#include <iomanip>
#include <sstream>

#include "seampose/smoothing.hpp"
#include "seampose/train.hpp"

namespace seampose {

/// Ground-truth joint positions for the label nearest a sensor timestamp,
/// rounded to f32 like every prediction. Deliberately not inlined: one
/// compiled instance keeps truth bit-identical across every call site, which
/// the oracle-scores-zero property relies on.
#if defined(__GNUC__)
__attribute__((noinline))
#endif
inline JointPositions<float>
label_positions(const Session& session, uint64_t t_us, const Skeleton& skel) {
  PoseVector<double> pose;
  pose.v = session.poses[session.nearest_label(t_us)].cast<double>();
  JointPositions<float> out;
  out.p = forward_kinematics(pose, skel).p.cast<float>();
  return out;
}

/// Per-frame pose source scored by evaluate(). Stateful predictors (running
/// median) are reset at session boundaries.
struct Predictor {
  virtual ~Predictor() = default;
  virtual void reset_session() {}
  virtual JointPositions<float> predict(const SignalWindow& w, const Session& session,
                                        uint64_t t_us) = 0;
};

struct NetPredictor : Predictor {
  const ModelParams<float>& params;
  std::map<int, Skeleton> skeletons;
  RunningMedianFilter<float> smooth{5};
  nn::ForwardCache<float> cache;
  std::vector<float> buf;

  NetPredictor(const ModelParams<float>& p, const Skeleton& s) : params(p) {
    skeletons.emplace(-1, s);
  }
  NetPredictor(const ModelParams<float>& p, std::map<int, Skeleton> skels)
      : params(p), skeletons(std::move(skels)) {}

  void reset_session() override { smooth.reset(); }

  const Skeleton& skeleton_for(int subject) const {
    const auto it = skeletons.find(subject);
    if (it != skeletons.end()) return it->second;
    const auto any = skeletons.find(-1);
    if (any == skeletons.end()) throw ConfigError("net predictor: no skeleton for subject");
    return any->second;
  }

  JointPositions<float> predict(const SignalWindow& w, const Session& session,
                                uint64_t) override {
    buf.resize(static_cast<size_t>(w.x.rows()) * w.x.cols());
    for (int t = 0; t < w.x.rows(); ++t)
      for (int c = 0; c < w.x.cols(); ++c)
        buf[t * w.x.cols() + c] = static_cast<float>(w.x(t, c));
    JointPositions<float> joints;
    forward_window<float>(params, buf.data(), skeleton_for(session.meta.subject), cache, nullptr,
                          &joints);
    return smooth.push(joints);
  }
};

inline std::map<int, Skeleton> manifest_skeletons(const DatasetManifest& m) {
  std::map<int, Skeleton> out;
  for (const auto& s : m.subjects) out.emplace(s.id, Skeleton::with_arm_length(s.arm_length_m));
  return out;
}

/// Feeds ground truth back: the zero-error reference.
struct OraclePredictor : Predictor {
  Skeleton skel;
  explicit OraclePredictor(const Skeleton& s) : skel(s) {}
  JointPositions<float> predict(const SignalWindow&, const Session& session,
                                uint64_t t_us) override {
    return label_positions(session, t_us, skel);
  }
};

struct ConstantPredictor : Predictor {
  JointPositions<float> value;
  JointPositions<float> predict(const SignalWindow&, const Session&, uint64_t) override {
    return value;
  }
};

struct CategoryStat {
  double mpjpe_cm = 0;
  size_t frames = 0;
};

/// Study-reported reference values, recorded as annotations only; synthetic
/// results are not comparable to the hardware study.
struct ReferenceAnnotations {
  double study_ua_mpjpe_cm = 6.0;
  double study_ui_mpjpe_cm = 8.6;
};

struct EvalReport {
  double overall_cm = 0;
  double overall_std_cm = 0;  // across subjects
  std::array<double, kOutJoints> per_joint_cm{};
  std::map<std::string, CategoryStat> per_category;
  size_t frames = 0;
  int subjects = 0;
  std::string fingerprint;
  ReferenceAnnotations reference;

  nlohmann::json to_json() const {
    nlohmann::json joints = nlohmann::json::object();
    for (int j = 0; j < kOutJoints; ++j)
      joints[out_joint_name(static_cast<OutJoint>(j))] = per_joint_cm[j];
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [name, st] : per_category)
      cats[name] = {{"mpjpe_cm", st.mpjpe_cm}, {"frames", st.frames}};
    return {{"overall_mpjpe_cm", overall_cm},
            {"overall_std_cm", overall_std_cm},
            {"per_joint_mpjpe_cm", joints},
            {"per_category", cats},
            {"frames", frames},
            {"subjects", subjects},
            {"fingerprint", fingerprint},
            {"reference_annotations",
             {{"note", "study-reported values on real hardware; context only"},
              {"user_adaptive_mpjpe_cm", reference.study_ua_mpjpe_cm},
              {"user_independent_mpjpe_cm", reference.study_ui_mpjpe_cm}}}};
  }

  std::string render_text() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "overall MPJPE: " << overall_cm << " cm (std " << overall_std_cm << " across "
       << subjects << " subject" << (subjects == 1 ? "" : "s") << ", " << frames << " frames)\n";
    os << "per joint (cm):\n";
    for (int j = 0; j < kOutJoints; ++j)
      os << "  " << std::setw(10) << out_joint_name(static_cast<OutJoint>(j)) << "  "
         << per_joint_cm[j] << "\n";
    os << "per motion category (cm):\n";
    for (const auto& [name, st] : per_category)
      os << "  " << std::setw(10) << name << "  " << st.mpjpe_cm << "  (" << st.frames
         << " frames)\n";
    os << "reference (hardware study, context only): UA " << reference.study_ua_mpjpe_cm
       << " cm, UI " << reference.study_ui_mpjpe_cm << " cm\n";
    os << "fingerprint: " << fingerprint << "\n";
    return os.str();
  }

  void save(const std::string& base_path) const {
    std::ofstream fj(base_path + ".json");
    if (!fj) throw DataError("cannot write " + base_path + ".json");
    fj << to_json().dump(2) << "\n";
    std::ofstream ft(base_path + ".txt");
    ft << render_text();
  }
};

inline std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

struct SubjectAccum {
  double sum = 0;
  std::array<double, kOutJoints> joint_sum{};
  size_t frames = 0;
};

}  // namespace detail

/// Scores a predictor over held-out sessions at hop 1 with smoothing inside
/// the predictor, mirroring the live pipeline. Per-frame error is the mean
/// Euclidean distance over 8 joints, pelvis-relative, in cm.
inline EvalReport evaluate(Predictor& predictor, const DatasetManifest& manifest,
                           const std::vector<int>& session_ids, const std::string& config_tag,
                           const std::vector<int>& channels = all_channels()) {
  if (session_ids.empty()) throw EmptyTestSet("evaluate: no test sessions");
  std::map<int, detail::SubjectAccum> by_subject;
  std::map<std::string, CategoryStat> by_category;
  size_t frames = 0;

  for (int sid : session_ids) {
    const auto it = std::find_if(manifest.sessions.begin(), manifest.sessions.end(),
                                 [sid](const SessionRef& s) { return s.id == sid; });
    if (it == manifest.sessions.end())
      throw ConfigError("evaluate: unknown session id " + std::to_string(sid));
    const Session session = load_session(it->dir);
    const auto subj_it =
        std::find_if(manifest.subjects.begin(), manifest.subjects.end(),
                     [&](const SubjectInfo& s) { return s.id == session.meta.subject; });
    if (subj_it == manifest.subjects.end()) throw DataError("evaluate: unknown subject");
    const Skeleton skel = Skeleton::with_arm_length(subj_it->arm_length_m);

    predictor.reset_session();
    WindowStream ws(1, static_cast<int>(channels.size()));
    Eigen::VectorXd vals(static_cast<long>(channels.size()));
    for (const auto& frame : session.frames) {
      std::optional<SignalWindow> w;
      for (size_t c = 0; c < channels.size(); ++c)
        vals(static_cast<long>(c)) = static_cast<double>(frame.ch[channels[c]]);
      try {
        w = ws.push_values(frame.t_us, vals);
      } catch (const GapDetected&) {
        predictor.reset_session();
        continue;
      }
      if (!w) continue;
      const JointPositions<float> pred = predictor.predict(*w, session, frame.t_us);
      JointPositions<double> truth;
      truth.p = label_positions(session, frame.t_us, skel).p.cast<double>();
      JointPositions<double> predd;
      predd.p = pred.p.cast<double>();

      auto& acc = by_subject[session.meta.subject];
      double frame_err = 0;
      for (int j = 0; j < kOutJoints; ++j) {
        const double e =
            (predd.p.segment<3>(3 * j) - truth.p.segment<3>(3 * j)).norm() * 100.0;
        acc.joint_sum[j] += e;
        frame_err += e;
      }
      frame_err /= kOutJoints;
      acc.sum += frame_err;
      acc.frames += 1;
      auto& cat = by_category[motion_category_name(session.category_at(frame.t_us))];
      cat.mpjpe_cm += frame_err;
      cat.frames += 1;
      ++frames;
    }
  }
  if (frames == 0) throw EmptyTestSet("evaluate: sessions produced no windows");

  EvalReport report;
  report.frames = frames;
  report.subjects = static_cast<int>(by_subject.size());
  std::vector<double> subject_means;
  for (auto& [subj, acc] : by_subject) {
    subject_means.push_back(acc.sum / static_cast<double>(acc.frames));
    for (int j = 0; j < kOutJoints; ++j)
      report.per_joint_cm[j] += acc.joint_sum[j] / static_cast<double>(acc.frames);
  }
  for (int j = 0; j < kOutJoints; ++j) report.per_joint_cm[j] /= subject_means.size();
  double mean = 0;
  for (double m : subject_means) mean += m;
  mean /= subject_means.size();
  double var = 0;
  for (double m : subject_means) var += (m - mean) * (m - mean);
  report.overall_cm = mean;
  report.overall_std_cm = subject_means.size() > 1
                              ? std::sqrt(var / static_cast<double>(subject_means.size()))
                              : 0.0;
  for (auto& [name, st] : by_category) {
    st.mpjpe_cm /= static_cast<double>(st.frames);
    report.per_category[name] = st;
  }
  std::string key = config_tag;
  for (int sid : session_ids) key += "," + std::to_string(sid);
  report.fingerprint = fnv1a_hex(key);
  return report;
}

/// Per-joint mean of ground-truth positions over the scored frames: the
/// strongest constant predictor, used as the learning baseline.
inline JointPositions<float> mean_pose_of(const DatasetManifest& manifest,
                                          const std::vector<int>& session_ids) {
  Eigen::Matrix<double, kJointDim, 1> sum = Eigen::Matrix<double, kJointDim, 1>::Zero();
  size_t n = 0;
  for (int sid : session_ids) {
    const auto it = std::find_if(manifest.sessions.begin(), manifest.sessions.end(),
                                 [sid](const SessionRef& s) { return s.id == sid; });
    if (it == manifest.sessions.end()) throw ConfigError("mean_pose_of: unknown session");
    const Session session = load_session(it->dir);
    const auto subj_it =
        std::find_if(manifest.subjects.begin(), manifest.subjects.end(),
                     [&](const SubjectInfo& s) { return s.id == session.meta.subject; });
    const Skeleton skel = Skeleton::with_arm_length(subj_it->arm_length_m);
    WindowStream ws(1);
    for (const auto& frame : session.frames) {
      std::optional<SignalWindow> w;
      try {
        w = ws.push(frame);
      } catch (const GapDetected&) {
        continue;
      }
      if (!w) continue;
      sum += label_positions(session, frame.t_us, skel).p.cast<double>();
      ++n;
    }
  }
  if (n == 0) throw EmptyTestSet("mean_pose_of: no frames");
  JointPositions<float> out;
  out.p = (sum / static_cast<double>(n)).cast<float>();
  return out;
}

// ---- the full two-stage protocol, shared by experiments ----

struct ProtocolConfig {
  TrainConfig ui;
  TrainConfig ua;
  int train_hop = 4;
  std::vector<int> channels = all_channels();
};

struct ProtocolResult {
  ModelParams<float> ui_model{ModelConfig{}};
  ModelParams<float> ua_model{ModelConfig{}};
  EvalReport report;
  double baseline_mpjpe_cm = 0;
  TrainResult ui_train, ua_train;
};

/// Splits the fine-tune windows into train and validation parts
/// (session-disjoint when more than one session is available).
inline std::pair<std::vector<int>, std::vector<int>> split_finetune_sessions(
    const SplitSpec& splits) {
  std::vector<int> tr = splits.ua_finetune, va;
  if (tr.size() >= 2) {
    va.push_back(tr.back());
    tr.pop_back();
  } else {
    va = tr;  // single session: validate on the same session
  }
  return {tr, va};
}

/// User-independent training on the other subjects, user-adaptive fine-tuning
/// on the evaluated subject's earlier sessions, scored on its last sessions.
inline ProtocolResult run_two_stage(const DatasetManifest& manifest, const ProtocolConfig& pc,
                                    std::ostream* progress = nullptr) {
  ProtocolConfig cfg = pc;
  cfg.ui.stage = Stage::Independent;
  cfg.ua.stage = Stage::Adaptive;
  cfg.ua.hidden = cfg.ui.hidden;

  const WindowSet ui_train =
      build_window_set(manifest, manifest.splits.ui_train, cfg.train_hop, cfg.channels);
  const WindowSet ui_val =
      build_window_set(manifest, manifest.splits.ui_val, cfg.train_hop, cfg.channels);
  if (progress)
    (*progress) << "[stage independent] windows train=" << ui_train.size()
                << " val=" << ui_val.size() << "\n";
  ProtocolResult result;
  result.ui_train = train(cfg.ui, ui_train, ui_val, nullptr, progress);
  result.ui_model = result.ui_train.params;

  const auto [ft_train_ids, ft_val_ids] = split_finetune_sessions(manifest.splits);
  const WindowSet ua_train = build_window_set(manifest, ft_train_ids, cfg.train_hop, cfg.channels);
  const WindowSet ua_val = build_window_set(manifest, ft_val_ids, cfg.train_hop, cfg.channels);
  if (progress)
    (*progress) << "[stage adaptive] windows train=" << ua_train.size()
                << " val=" << ua_val.size() << "\n";
  result.ua_train = train(cfg.ua, ua_train, ua_val, &result.ui_model, progress);
  result.ua_model = result.ua_train.params;

  NetPredictor net(result.ua_model, manifest_skeletons(manifest));
  result.report = evaluate(net, manifest, manifest.splits.ua_test, "two-stage", cfg.channels);

  ConstantPredictor mean_pred;
  mean_pred.value = mean_pose_of(manifest, manifest.splits.ua_test);
  result.baseline_mpjpe_cm =
      evaluate(mean_pred, manifest, manifest.splits.ua_test, "mean-pose").overall_cm;
  return result;
}

// ---- fine-tune data budget curve ----

struct CurvePoint {
  double minutes;
  double mpjpe_cm;
  double std_cm;
  size_t windows;
};

/// Truncates the fine-tune pool to a time budget (whole sessions first, the
/// last one partially) and fine-tunes from the same base model per point.
inline std::vector<CurvePoint> finetune_curve(const ModelParams<float>& base,
                                              const DatasetManifest& manifest,
                                              const TrainConfig& ua_template,
                                              const std::vector<double>& minutes_grid,
                                              int train_hop,
                                              const std::vector<int>& channels = all_channels(),
                                              std::ostream* progress = nullptr) {
  if (minutes_grid.empty()) throw ConfigError("finetune_curve: empty grid");
  const WindowSet pool = build_window_set(manifest, manifest.splits.ua_finetune, train_hop,
                                          channels);
  // Cumulative time consumed per window, session after session.
  std::vector<double> cum_seconds(pool.size());
  double consumed = 0;
  uint64_t session_start = 0;
  int current = -1;
  double session_base = 0;
  for (size_t i = 0; i < pool.size(); ++i) {
    if (pool.session_id[i] != current) {
      current = pool.session_id[i];
      session_start = pool.t_us[i];
      session_base = consumed;
    }
    cum_seconds[i] =
        session_base + static_cast<double>(pool.t_us[i] - session_start) / 1e6;
    consumed = cum_seconds[i];
  }

  std::vector<CurvePoint> curve;
  for (double minutes : minutes_grid) {
    const double budget_s = minutes * 60.0;
    WindowSet subset;
    subset.window = pool.window;
    subset.channels = pool.channels;
    subset.hop = pool.hop;
    subset.channel_index = pool.channel_index;
    subset.skeletons = pool.skeletons;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (cum_seconds[i] > budget_s) continue;
      const float* x = pool.window_ptr(i);
      subset.x.insert(subset.x.end(), x, x + static_cast<size_t>(pool.window) * pool.channels);
      subset.pose.insert(subset.pose.end(), pool.pose.begin() + i * kPoseDim,
                         pool.pose.begin() + (i + 1) * kPoseDim);
      subset.jpos.insert(subset.jpos.end(), pool.jpos.begin() + i * kJointDim,
                         pool.jpos.begin() + (i + 1) * kJointDim);
      subset.subject.push_back(pool.subject[i]);
      subset.category.push_back(pool.category[i]);
      subset.t_us.push_back(pool.t_us[i]);
      subset.session_id.push_back(pool.session_id[i]);
    }
    if (subset.size() < 4)
      throw ConfigError("finetune_curve: budget leaves too few windows");
    // Hold out the trailing 10% (at least one window) for validation.
    const size_t val_n = std::max<size_t>(1, subset.size() / 10);
    WindowSet tr = subset, va = subset;
    auto shrink = [&](WindowSet& s, size_t lo, size_t hi) {
      const auto wsz = static_cast<size_t>(s.window) * s.channels;
      s.x.assign(subset.x.begin() + lo * wsz, subset.x.begin() + hi * wsz);
      s.pose.assign(subset.pose.begin() + lo * kPoseDim, subset.pose.begin() + hi * kPoseDim);
      s.jpos.assign(subset.jpos.begin() + lo * kJointDim, subset.jpos.begin() + hi * kJointDim);
      s.subject.assign(subset.subject.begin() + lo, subset.subject.begin() + hi);
      s.category.assign(subset.category.begin() + lo, subset.category.begin() + hi);
      s.t_us.assign(subset.t_us.begin() + lo, subset.t_us.begin() + hi);
      s.session_id.assign(subset.session_id.begin() + lo, subset.session_id.begin() + hi);
    };
    shrink(tr, 0, subset.size() - val_n);
    shrink(va, subset.size() - val_n, subset.size());

    TrainConfig ua = ua_template;
    ua.stage = Stage::Adaptive;
    if (progress)
      (*progress) << "[curve " << minutes << " min] windows=" << subset.size() << "\n";
    const TrainResult r = train(ua, tr, va, &base, progress);
    NetPredictor net(r.params, manifest_skeletons(manifest));
    const EvalReport rep = evaluate(net, manifest, manifest.splits.ua_test,
                                    "curve-" + std::to_string(minutes), channels);
    curve.push_back({minutes, rep.overall_cm, rep.overall_std_cm, subset.size()});
  }
  return curve;
}

// ---- seam-removal ablation ----

struct AblationSpec {
  SeamPair removed;
};

struct AblationResult {
  SeamPair removed;
  EvalReport report;
  double baseline_mpjpe_cm = 0;  // the 8-channel run on the same splits
  double delta_cm = 0;           // report.overall - baseline
};

/// Full retrain with one symmetric seam pair removed at the input (embed
/// rebuilt for 6 channels), following the same two-stage protocol.
inline AblationResult run_ablation(const AblationSpec& spec, const DatasetManifest& manifest,
                                   const ProtocolConfig& base_cfg, double baseline_mpjpe_cm,
                                   std::ostream* progress = nullptr) {
  ProtocolConfig cfg = base_cfg;
  cfg.channels = channels_without(spec.removed);
  const ProtocolResult r = run_two_stage(manifest, cfg, progress);
  AblationResult out;
  out.removed = spec.removed;
  out.report = r.report;
  out.baseline_mpjpe_cm = baseline_mpjpe_cm;
  out.delta_cm = r.report.overall_cm - baseline_mpjpe_cm;
  return out;
}

// ---- tiny SVG emitters for the curve and per-joint bars ----

inline void write_svg_curve(const std::string& path, const std::vector<CurvePoint>& curve,
                            const std::string& title) {
  if (curve.empty()) throw ConfigError("svg curve: no points");
  const double w = 480, h = 300, ml = 50, mb = 40, mt = 30, mr = 15;
  double xmax = 0, ymax = 0;
  for (const auto& p : curve) {
    xmax = std::max(xmax, p.minutes);
    ymax = std::max(ymax, p.mpjpe_cm + p.std_cm);
  }
  ymax = ymax * 1.15 + 1e-9;
  auto px = [&](double x) { return ml + (w - ml - mr) * x / xmax; };
  auto py = [&](double y) { return h - mb - (h - mb - mt) * y / ymax; };
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
  f << "<text x='" << w / 2 << "' y='18' text-anchor='middle' font-size='13'>" << title
    << "</text>\n";
  f << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
    << "' stroke='black'/>\n";
  f << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << ml << "' y2='" << mt
    << "' stroke='black'/>\n";
  f << "<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
  for (const auto& p : curve) f << px(p.minutes) << "," << py(p.mpjpe_cm) << " ";
  f << "'/>\n";
  for (const auto& p : curve) {
    f << "<circle cx='" << px(p.minutes) << "' cy='" << py(p.mpjpe_cm)
      << "' r='3' fill='steelblue'/>\n";
    f << "<line x1='" << px(p.minutes) << "' y1='" << py(p.mpjpe_cm - p.std_cm) << "' x2='"
      << px(p.minutes) << "' y2='" << py(p.mpjpe_cm + p.std_cm)
      << "' stroke='steelblue' stroke-width='1'/>\n";
    f << "<text x='" << px(p.minutes) << "' y='" << h - mb + 16
      << "' text-anchor='middle' font-size='10'>" << p.minutes << "</text>\n";
  }
  f << "<text x='" << w / 2 << "' y='" << h - 6
    << "' text-anchor='middle' font-size='11'>fine-tune data (min)</text>\n";
  f << "<text x='14' y='" << h / 2 << "' font-size='11' transform='rotate(-90 14 " << h / 2
    << ")'>MPJPE (cm)</text>\n";
  f << "</svg>\n";
}

inline void write_svg_bars(const std::string& path, const std::vector<std::string>& labels,
                           const std::vector<double>& values, const std::string& title) {
  if (labels.size() != values.size() || labels.empty())
    throw ConfigError("svg bars: label/value mismatch");
  const double w = 480, h = 300, ml = 50, mb = 60, mt = 30, mr = 15;
  double ymax = 0;
  for (double v : values) ymax = std::max(ymax, v);
  ymax = ymax * 1.15 + 1e-9;
  const double bw = (w - ml - mr) / values.size();
  auto py = [&](double y) { return h - mb - (h - mb - mt) * y / ymax; };
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
  f << "<text x='" << w / 2 << "' y='18' text-anchor='middle' font-size='13'>" << title
    << "</text>\n";
  for (size_t i = 0; i < values.size(); ++i) {
    const double x = ml + i * bw;
    f << "<rect x='" << x + 3 << "' y='" << py(values[i]) << "' width='" << bw - 6
      << "' height='" << (h - mb - py(values[i])) << "' fill='steelblue'/>\n";
    f << "<text x='" << x + bw / 2 << "' y='" << h - mb + 14
      << "' text-anchor='end' font-size='9' transform='rotate(-45 " << x + bw / 2 << " "
      << h - mb + 14 << ")'>" << labels[i] << "</text>\n";
    f << "<text x='" << x + bw / 2 << "' y='" << py(values[i]) - 4
      << "' text-anchor='middle' font-size='9'>" << std::fixed << std::setprecision(1)
      << values[i] << "</text>\n";
  }
  f << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
    << "' stroke='black'/>\n";
  f << "</svg>\n";
}

}  // namespace seampose
