// seampose: dataset synthesis, training, evaluation, and the real-time
// sensor stream toolkit, as one CLI.

#include <CLI11.hpp>
#include <iostream>

#include "seampose/seampose.hpp"

using namespace seampose;

namespace {

nlohmann::json g_config;  // loaded from --config, applied as defaults

template <typename T>
void config_default(const std::string& section, const std::string& key, T& target) {
  if (g_config.contains(section) && g_config[section].contains(key))
    target = g_config[section][key].get<T>();
  else if (g_config.contains(key) && !g_config[key].is_object())
    target = g_config[key].get<T>();
}

Stage parse_stage(const std::string& s) {
  if (s == "independent") return Stage::Independent;
  if (s == "adaptive") return Stage::Adaptive;
  throw UsageError("unknown stage: " + s + " (want independent|adaptive)");
}

SeamPair parse_seam_pair(const std::string& s) {
  for (int i = 0; i < 4; ++i)
    if (s == seam_pair_name(static_cast<SeamPair>(i))) return static_cast<SeamPair>(i);
  throw UsageError("unknown seam pair: " + s +
                   " (want shoulderTop|shoulderFront|shoulderBack|sleeve)");
}

std::vector<int> parse_split(const DatasetManifest& m, const std::string& name) {
  if (name == "ua_test") return m.splits.ua_test;
  if (name == "ua_finetune") return m.splits.ua_finetune;
  if (name == "ui_val") return m.splits.ui_val;
  if (name == "ui_train") return m.splits.ui_train;
  throw UsageError("unknown split: " + name);
}

std::unique_ptr<ByteSink> open_sink(const std::string& spec) {
  if (spec == "-") return std::make_unique<StdoutByteSink>();
  return std::make_unique<FileByteSink>(spec);
}

std::unique_ptr<ByteSource> open_source(const std::string& spec) {
  if (spec == "-") return std::make_unique<StdinByteSource>();
  return std::make_unique<FileByteSource>(spec);
}

struct TrainCliOptions {
  std::string dataset, stage = "independent", init, out = "out";
  TrainConfig cfg;
  int hop = 4;
  bool no_augment = false;
  std::string remove_pair;  // optional channel ablation at train time
};

int cmd_train(TrainCliOptions& o) {
  const DatasetManifest manifest = DatasetManifest::load(o.dataset + "/dataset.json");
  o.cfg.stage = parse_stage(o.stage);
  o.cfg.augment = !o.no_augment;
  std::vector<int> channels = all_channels();
  if (!o.remove_pair.empty()) channels = channels_without(parse_seam_pair(o.remove_pair));

  std::vector<int> train_ids, val_ids;
  if (o.cfg.stage == Stage::Independent) {
    train_ids = manifest.splits.ui_train;
    val_ids = manifest.splits.ui_val;
  } else {
    std::tie(train_ids, val_ids) = split_finetune_sessions(manifest.splits);
    if (o.init.empty()) throw UsageError("adaptive stage requires --init <checkpoint>");
  }
  const WindowSet train_set = build_window_set(manifest, train_ids, o.hop, channels);
  const WindowSet val_set = build_window_set(manifest, val_ids, o.hop, channels);
  std::cerr << "windows: train " << train_set.size() << ", val " << val_set.size() << "\n";

  std::optional<ModelParams<float>> init;
  if (!o.init.empty()) init = load_checkpoint(o.init);
  const TrainResult r = train(o.cfg, train_set, val_set, init ? &*init : nullptr, &std::cerr);

  fs::create_directories(o.out);
  save_checkpoint(o.out + "/checkpoint", r.params, o.cfg, r.best_epoch, r.best_val_loss);
  write_metrics_csv(o.out + "/metrics.csv", r.log);
  std::cout << "best val loss " << r.best_val_loss << " at epoch " << r.best_epoch
            << "; checkpoint written to " << o.out << "/checkpoint\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seam-capacitance upper-body pose toolkit"};
  app.require_subcommand(1);

  // Global flags; --config values become per-subcommand defaults.
  std::string config_path;
  uint64_t global_seed = 0;
  std::string global_out;
  auto* seed_opt = app.add_option("--seed", global_seed, "seed override");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", global_out, "output directory override");

  // -- simulate --
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  SimOptions sim_opt;
  std::string sim_out = "dataset";
  bool sim_no_noise = false;
  sim->add_option("--subjects", sim_opt.subjects);
  sim->add_option("--minutes", sim_opt.minutes_per_subject, "minutes per subject");
  sim->add_option("--sessions", sim_opt.sessions_per_subject, "sessions per subject");
  sim->add_option("--seed", sim_opt.seed);
  sim->add_flag("--no-noise", sim_no_noise, "disable sensor noise and drift");
  sim->add_option("--out", sim_out, "dataset directory");

  // -- train --
  auto* tr = app.add_subcommand("train", "train a stage of the model");
  TrainCliOptions tr_opt;
  tr->add_option("--dataset", tr_opt.dataset)->required();
  tr->add_option("--stage", tr_opt.stage, "independent|adaptive");
  tr->add_option("--init", tr_opt.init, "base checkpoint for the adaptive stage");
  tr->add_option("--epochs", tr_opt.cfg.epochs, "0 = stage default");
  tr->add_option("--lr", tr_opt.cfg.start_lr, "0 = stage default");
  tr->add_option("--batch", tr_opt.cfg.batch);
  tr->add_option("--hidden", tr_opt.cfg.hidden);
  tr->add_option("--threads", tr_opt.cfg.threads);
  tr->add_option("--hop", tr_opt.hop, "training window hop");
  tr->add_option("--seed", tr_opt.cfg.seed);
  tr->add_flag("--no-augment", tr_opt.no_augment);
  tr->add_option("--remove", tr_opt.remove_pair, "drop a seam pair at the input");
  tr->add_option("--out", tr_opt.out);

  // -- eval --
  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on held-out sessions");
  std::string ev_dataset, ev_model, ev_split = "ua_test", ev_out = "out", ev_remove;
  bool ev_svg = false;
  ev->add_option("--dataset", ev_dataset)->required();
  ev->add_option("--model", ev_model)->required();
  ev->add_option("--split", ev_split, "ua_test|ua_finetune|ui_val|ui_train");
  ev->add_option("--remove", ev_remove, "seam pair removed at the input");
  ev->add_flag("--svg", ev_svg, "emit per-joint SVG bars");
  ev->add_option("--out", ev_out);

  // -- finetune-curve --
  auto* fc = app.add_subcommand("finetune-curve",
                                "fine-tune with shrinking data budgets and plot the curve");
  std::string fc_dataset, fc_base, fc_out = "out";
  std::vector<double> fc_grid = {2.5, 7.5, 15.0};
  TrainConfig fc_cfg;
  int fc_hop = 4;
  fc->add_option("--dataset", fc_dataset)->required();
  fc->add_option("--base", fc_base, "user-independent checkpoint")->required();
  fc->add_option("--grid", fc_grid, "fine-tune budgets in minutes");
  fc->add_option("--epochs", fc_cfg.epochs);
  fc->add_option("--lr", fc_cfg.start_lr);
  fc->add_option("--batch", fc_cfg.batch);
  fc->add_option("--threads", fc_cfg.threads);
  fc->add_option("--hop", fc_hop);
  fc->add_option("--seed", fc_cfg.seed);
  fc->add_option("--out", fc_out);

  // -- ablate --
  auto* ab = app.add_subcommand("ablate", "retrain with a seam pair removed");
  std::string ab_dataset, ab_remove = "none", ab_out = "out", ab_baseline;
  ProtocolConfig ab_cfg;
  ab->add_option("--dataset", ab_dataset)->required();
  ab->add_option("--remove", ab_remove, "shoulderTop|shoulderFront|shoulderBack|sleeve|none");
  ab->add_option("--baseline", ab_baseline, "baseline report.json for the delta");
  ab->add_option("--epochs-ui", ab_cfg.ui.epochs);
  ab->add_option("--epochs-ua", ab_cfg.ua.epochs);
  ab->add_option("--lr-ui", ab_cfg.ui.start_lr);
  ab->add_option("--lr-ua", ab_cfg.ua.start_lr);
  ab->add_option("--batch", ab_cfg.ui.batch);
  ab->add_option("--hidden", ab_cfg.ui.hidden);
  ab->add_option("--threads", ab_cfg.ui.threads);
  ab->add_option("--hop", ab_cfg.train_hop);
  ab->add_option("--seed", ab_cfg.ui.seed);
  ab->add_option("--out", ab_out);

  // -- replay --
  auto* rp = app.add_subcommand("replay", "stream a session over the wire protocol");
  std::string rp_session, rp_to = "-";
  double rp_rate = kSampleRateHz, rp_speed = 1.0;
  rp->add_option("--session", rp_session)->required();
  rp->add_option("--to", rp_to, "sink: file path or - for stdout");
  rp->add_option("--rate", rp_rate, "frame rate in Hz");
  rp->add_option("--speed", rp_speed, "time scale; 0 = as fast as possible");

  // -- infer-live --
  auto* il = app.add_subcommand("infer-live", "real-time inference over a byte transport");
  std::string il_from = "-", il_model, il_skel, il_out = "-";
  bool il_no_drop = false, il_parallel = false;
  size_t il_queue = 64;
  il->add_option("--from", il_from, "source: file path or - for stdin");
  il->add_option("--model", il_model)->required();
  il->add_option("--skeleton", il_skel, "skeleton JSON")->required();
  il->add_option("--out", il_out, "JSON-lines sink: file path or -");
  il->add_flag("--no-drop", il_no_drop, "block instead of dropping under overload");
  il->add_flag("--parallel", il_parallel, "run LSTM directions on two threads");
  il->add_option("--queue", il_queue, "frame queue capacity");

  // -- inspect --
  auto* in = app.add_subcommand("inspect", "session or dataset statistics");
  std::string in_session, in_dataset, in_dump;
  int in_hop = 4;
  in->add_option("--session", in_session);
  in->add_option("--dataset", in_dataset);
  in->add_option("--dump-windows", in_dump,
                 "materialize normalized windows (base path, writes .bin/.json)");
  in->add_option("--hop", in_hop);

  // Load --config before the real parse so its values act as defaults.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot read config " << config_path << "\n";
      return 1;
    }
    try {
      f >> g_config;
    } catch (const std::exception& e) {
      std::cerr << "error: bad config JSON: " << e.what() << "\n";
      return 2;
    }
    config_default(          "simulate", "subjects", sim_opt.subjects);
    config_default<double>(  "simulate", "minutes", sim_opt.minutes_per_subject);
    config_default(          "simulate", "sessions", sim_opt.sessions_per_subject);
    config_default<uint64_t>("simulate", "seed", sim_opt.seed);
    config_default(          "train", "stage", tr_opt.stage);
    config_default(          "train", "epochs", tr_opt.cfg.epochs);
    config_default(          "train", "lr", tr_opt.cfg.start_lr);
    config_default(          "train", "batch", tr_opt.cfg.batch);
    config_default(          "train", "hidden", tr_opt.cfg.hidden);
    config_default(          "train", "threads", tr_opt.cfg.threads);
    config_default(          "train", "hop", tr_opt.hop);
    config_default<uint64_t>("train", "seed", tr_opt.cfg.seed);
    config_default(          "finetune-curve", "grid", fc_grid);
    config_default(          "ablate", "hidden", ab_cfg.ui.hidden);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      if (seed_opt->count()) sim_opt.seed = global_seed;
      if (!global_out.empty()) sim_out = global_out;
      sim_opt.noise = !sim_no_noise;
      const DatasetManifest m = build_dataset(sim_opt, sim_out);
      std::cout << "dataset: " << m.sessions.size() << " sessions, " << m.subjects.size()
                << " subjects, manifest " << sim_out << "/dataset.json\n";
      return 0;
    }
    if (tr->parsed()) {
      if (seed_opt->count()) tr_opt.cfg.seed = global_seed;
      if (!global_out.empty()) tr_opt.out = global_out;
      return cmd_train(tr_opt);
    }
    if (ev->parsed()) {
      if (!global_out.empty()) ev_out = global_out;
      const DatasetManifest manifest = DatasetManifest::load(ev_dataset + "/dataset.json");
      const ModelParams<float> model = load_checkpoint(ev_model);
      std::vector<int> channels = all_channels();
      if (!ev_remove.empty()) channels = channels_without(parse_seam_pair(ev_remove));
      if (static_cast<int>(channels.size()) != model.cfg.channels)
        throw UsageError("model expects " + std::to_string(model.cfg.channels) +
                         " channels; pass a matching --remove");
      NetPredictor net(model, manifest_skeletons(manifest));
      const EvalReport report =
          evaluate(net, manifest, parse_split(manifest, ev_split), ev_model, channels);
      fs::create_directories(ev_out);
      report.save(ev_out + "/report");
      if (ev_svg) {
        std::vector<std::string> labels;
        std::vector<double> values;
        for (int j = 0; j < kOutJoints; ++j) {
          labels.push_back(out_joint_name(static_cast<OutJoint>(j)));
          values.push_back(report.per_joint_cm[j]);
        }
        write_svg_bars(ev_out + "/per_joint.svg", labels, values, "per-joint MPJPE (cm)");
      }
      std::cout << report.render_text();
      return 0;
    }
    if (fc->parsed()) {
      if (seed_opt->count()) fc_cfg.seed = global_seed;
      if (!global_out.empty()) fc_out = global_out;
      const DatasetManifest manifest = DatasetManifest::load(fc_dataset + "/dataset.json");
      const ModelParams<float> base = load_checkpoint(fc_base);
      fc_cfg.stage = Stage::Adaptive;
      fc_cfg.hidden = base.cfg.hidden;
      const auto curve =
          finetune_curve(base, manifest, fc_cfg, fc_grid, fc_hop, all_channels(), &std::cerr);
      fs::create_directories(fc_out);
      nlohmann::json points = nlohmann::json::array();
      std::ofstream csv(fc_out + "/curve.csv");
      csv << "minutes,mpjpe_cm,std_cm,windows\n";
      for (const auto& p : curve) {
        points.push_back({{"minutes", p.minutes},
                          {"mpjpe_cm", p.mpjpe_cm},
                          {"std_cm", p.std_cm},
                          {"windows", p.windows}});
        csv << p.minutes << ',' << p.mpjpe_cm << ',' << p.std_cm << ',' << p.windows << '\n';
        std::cout << p.minutes << " min -> " << p.mpjpe_cm << " cm\n";
      }
      std::ofstream fj(fc_out + "/curve.json");
      fj << points.dump(2) << "\n";
      write_svg_curve(fc_out + "/curve.svg", curve, "MPJPE vs fine-tune data");
      return 0;
    }
    if (ab->parsed()) {
      if (seed_opt->count()) ab_cfg.ui.seed = global_seed;
      if (!global_out.empty()) ab_out = global_out;
      const DatasetManifest manifest = DatasetManifest::load(ab_dataset + "/dataset.json");
      ab_cfg.ua.seed = ab_cfg.ui.seed + 1;
      ab_cfg.ua.batch = ab_cfg.ui.batch;
      ab_cfg.ua.hidden = ab_cfg.ui.hidden;
      ab_cfg.ua.threads = ab_cfg.ui.threads;
      if (ab_remove != "none") ab_cfg.channels = channels_without(parse_seam_pair(ab_remove));
      const ProtocolResult r = run_two_stage(manifest, ab_cfg, &std::cerr);
      fs::create_directories(ab_out);
      r.report.save(ab_out + "/report");
      save_checkpoint(ab_out + "/checkpoint_ui", r.ui_model, ab_cfg.ui, r.ui_train.best_epoch,
                      r.ui_train.best_val_loss);
      save_checkpoint(ab_out + "/checkpoint_ua", r.ua_model, ab_cfg.ua, r.ua_train.best_epoch,
                      r.ua_train.best_val_loss);
      nlohmann::json summary = {{"removed", ab_remove},
                                {"overall_mpjpe_cm", r.report.overall_cm},
                                {"mean_pose_baseline_cm", r.baseline_mpjpe_cm}};
      if (!ab_baseline.empty()) {
        std::ifstream bf(ab_baseline);
        if (!bf) throw DataError("cannot read baseline report " + ab_baseline);
        nlohmann::json bj;
        bf >> bj;
        const double base_cm = bj.at("overall_mpjpe_cm").get<double>();
        summary["baseline_overall_cm"] = base_cm;
        summary["delta_cm"] = r.report.overall_cm - base_cm;
      }
      std::ofstream sf(ab_out + "/ablation.json");
      sf << summary.dump(2) << "\n";
      std::cout << "removed=" << ab_remove << " mpjpe=" << r.report.overall_cm << " cm\n";
      return 0;
    }
    if (rp->parsed()) {
      const Session session = load_session(rp_session);
      auto sink = open_sink(rp_to);
      const ReplayStats st = replay(session.frames, *sink, rp_rate, rp_speed);
      std::cerr << "replayed " << st.frames << " frames in " << st.elapsed_s << " s ("
                << st.achieved_hz << " Hz)\n";
      return 0;
    }
    if (il->parsed()) {
      const ModelParams<float> model = load_checkpoint(il_model);
      const Skeleton skel = Skeleton::load(il_skel);
      auto source = open_source(il_from);
      std::ofstream file_out;
      std::ostream* out = &std::cout;
      if (il_out != "-") {
        file_out.open(il_out);
        if (!file_out) throw DataError("cannot open " + il_out);
        out = &file_out;
      }
      LiveOptions opt;
      opt.allow_drops = !il_no_drop;
      opt.queue_capacity = il_queue;
      opt.parallel_forward = il_parallel;
      opt.jsonl = out;
      const LiveStats stats = infer_live(*source, model, skel, opt);
      std::cerr << "predictions " << stats.predictions << ", dropped " << stats.dropped
                << ", gaps " << stats.gaps << ", decode errors " << stats.decode_errors << "\n";
      return 0;
    }
    if (in->parsed()) {
      if (!in_session.empty()) {
        const Session s = load_session(in_session);
        std::cout << "subject " << s.meta.subject << ", session " << s.meta.session_index
                  << "\n";
        std::cout << "frames " << s.frames.size() << " @ "
                  << (s.frames.size() > 1 ? (s.frames.size() - 1) / s.duration_s() : 0.0)
                  << " Hz, labels " << s.poses.size() << ", duration " << s.duration_s()
                  << " s\n";
        size_t gaps = 0;
        for (size_t i = 1; i < s.frames.size(); ++i)
          if (s.frames[i].t_us - s.frames[i - 1].t_us > 2 * kFramePeriodUs) ++gaps;
        std::cout << "gaps " << gaps << "\n";
        for (int c = 0; c < kChannels; ++c) {
          uint32_t lo = s.frames.empty() ? 0 : s.frames[0].ch[c], hi = lo;
          for (const auto& f : s.frames) {
            lo = std::min(lo, f.ch[c]);
            hi = std::max(hi, f.ch[c]);
          }
          std::cout << "  " << ChannelLayout::names[c] << ": min " << lo << " max " << hi
                    << " p2p " << hi - lo << "\n";
        }
        std::cout << "segments:\n";
        for (const auto& g : s.meta.segments)
          std::cout << "  " << g.script << " [" << motion_category_name(g.category) << "] "
                    << g.start_us / 1e6 << "-" << g.end_us / 1e6 << " s\n";
        if (!in_dump.empty()) {
          WindowStream ws(in_hop);
          WindowTensor t;
          t.hop = in_hop;
          for (const char* n : ChannelLayout::names) t.channel_names.push_back(n);
          t.sources.push_back(in_session);
          size_t count = 0;
          for (const auto& f : s.frames) {
            std::optional<SignalWindow> w;
            try {
              w = ws.push(f);
            } catch (const GapDetected&) {
              continue;
            }
            if (!w) continue;
            for (int tt = 0; tt < kWindowFrames; ++tt)
              for (int c = 0; c < kChannels; ++c)
                t.data.push_back(static_cast<float>(w->x(tt, c)));
            ++count;
          }
          t.shape = {static_cast<int>(count), kWindowFrames, kChannels};
          save_window_tensor(in_dump, t);
          std::cout << "wrote " << count << " windows to " << in_dump << ".bin/.json\n";
        }
        return 0;
      }
      if (!in_dataset.empty()) {
        const DatasetManifest m = DatasetManifest::load(in_dataset + "/dataset.json");
        std::cout << "seed " << m.seed << ", subjects " << m.subjects.size() << ", sessions "
                  << m.sessions.size() << "\n";
        for (const auto& s : m.subjects)
          std::cout << "  subject " << s.id << ": arm " << s.arm_length_m << " m, height "
                    << s.height_m << " m\n";
        std::cout << "splits: ui_train " << m.splits.ui_train.size() << ", ui_val "
                  << m.splits.ui_val.size() << ", ua_finetune " << m.splits.ua_finetune.size()
                  << ", ua_test " << m.splits.ua_test.size() << "\n";
        return 0;
      }
      throw UsageError("inspect: pass --session or --dataset");
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
