#pragma once

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seampose/motion.hpp"
#include "seampose/signal.hpp"

namespace seampose {

namespace fs = std::filesystem;

struct ScriptSegment {
  std::string script;
  MotionCategory category = MotionCategory::Defined;
  uint64_t start_us = 0;
  uint64_t end_us = 0;
};

struct SessionMeta {
  int subject = 0;
  int session_index = 0;
  uint64_t wear_seed = 0;
  uint64_t sensor_t0_us = 0;
  uint64_t label_t0_us = 0;
  std::vector<ScriptSegment> segments;
};

/// One wearing of the shirt: frame-aligned sensor stream at 32 Hz and pose
/// labels at 30 fps.
struct Session {
  SessionMeta meta;
  std::vector<CapFrame> frames;
  std::vector<Eigen::Matrix<float, kPoseDim, 1>> poses;  // 6D labels per label frame

  uint64_t label_t_us(size_t k) const {
    return meta.label_t0_us + static_cast<uint64_t>(std::llround(k * 1e6 / kLabelFps));
  }

  /// Index of the label frame nearest to a sensor timestamp.
  size_t nearest_label(uint64_t t_us) const {
    const double k = (static_cast<double>(t_us) - static_cast<double>(meta.label_t0_us)) *
                     kLabelFps / 1e6;
    long i = std::lround(k);
    if (i < 0) i = 0;
    if (i >= static_cast<long>(poses.size())) i = static_cast<long>(poses.size()) - 1;
    return static_cast<size_t>(i);
  }

  MotionCategory category_at(uint64_t t_us) const {
    for (const auto& s : meta.segments)
      if (t_us >= s.start_us && t_us < s.end_us) return s.category;
    return meta.segments.empty() ? MotionCategory::Defined : meta.segments.back().category;
  }

  double duration_s() const {
    return frames.empty() ? 0.0
                          : static_cast<double>(frames.back().t_us - frames.front().t_us) / 1e6;
  }
};

// ---- raw frame CSV: header `seq,t_us,ch0..ch7` ----

inline void write_frames_csv(const std::string& path, const std::vector<CapFrame>& frames) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << "seq,t_us,ch0,ch1,ch2,ch3,ch4,ch5,ch6,ch7\n";
  for (const auto& fr : frames) {
    f << fr.seq << ',' << fr.t_us;
    for (uint32_t c : fr.ch) f << ',' << c;
    f << '\n';
  }
}

inline std::vector<CapFrame> read_frames_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot read " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("seq,t_us,ch0", 0) != 0)
    throw DataError(path + ": not a session frame CSV");
  std::vector<CapFrame> out;
  uint64_t prev_seq = 0;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    CapFrame fr;
    unsigned long long seq, t;
    unsigned long ch[kChannels];
    if (std::sscanf(line.c_str(), "%llu,%llu,%lu,%lu,%lu,%lu,%lu,%lu,%lu,%lu", &seq, &t, &ch[0],
                    &ch[1], &ch[2], &ch[3], &ch[4], &ch[5], &ch[6], &ch[7]) != 10)
      throw DataError(path + ": malformed row");
    fr.seq = static_cast<uint32_t>(seq);
    fr.t_us = t;
    for (int c = 0; c < kChannels; ++c) {
      if (ch[c] > kMaxCode) throw DataError(path + ": code exceeds 28-bit range");
      fr.ch[c] = static_cast<uint32_t>(ch[c]);
    }
    if (!first && fr.seq <= prev_seq) throw DataError(path + ": seq not strictly increasing");
    prev_seq = fr.seq;
    first = false;
    out.push_back(fr);
  }
  return out;
}

// ---- little-endian f32 tensor blobs ----

inline void write_f32(const std::string& path, const float* data, size_t n) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(float)));
}

inline std::vector<float> read_f32(const std::string& path, size_t expect) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw DataError("cannot read " + path);
  const auto bytes = static_cast<size_t>(f.tellg());
  if (bytes != expect * sizeof(float)) throw DataError(path + ": unexpected blob size");
  std::vector<float> out(expect);
  f.seekg(0);
  f.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(bytes));
  return out;
}

// ---- session directory layout: frames.csv, labels.bin, meta.json ----

inline void write_session(const std::string& dir, const Session& s) {
  fs::create_directories(dir);
  write_frames_csv(dir + "/frames.csv", s.frames);
  std::vector<float> blob;
  blob.reserve(s.poses.size() * kPoseDim);
  for (const auto& p : s.poses) blob.insert(blob.end(), p.data(), p.data() + kPoseDim);
  write_f32(dir + "/labels.bin", blob.data(), blob.size());
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& g : s.meta.segments)
    segs.push_back({{"script", g.script},
                    {"category", motion_category_name(g.category)},
                    {"start_us", g.start_us},
                    {"end_us", g.end_us}});
  nlohmann::json j = {{"subject", s.meta.subject},
                      {"session_index", s.meta.session_index},
                      {"wear_seed", s.meta.wear_seed},
                      {"sensor", {{"t0_us", s.meta.sensor_t0_us}, {"rate_hz", kSampleRateHz},
                                  {"frames", s.frames.size()}}},
                      {"labels", {{"t0_us", s.meta.label_t0_us}, {"fps", kLabelFps},
                                  {"frames", s.poses.size()}, {"dims", kPoseDim}}},
                      {"segments", segs}};
  std::ofstream f(dir + "/meta.json");
  if (!f) throw DataError("cannot write " + dir + "/meta.json");
  f << j.dump(2) << "\n";
}

inline MotionCategory motion_category_from_name(const std::string& n) {
  for (int i = 0; i < 3; ++i)
    if (n == motion_category_name(static_cast<MotionCategory>(i)))
      return static_cast<MotionCategory>(i);
  throw DataError("unknown motion category: " + n);
}

inline Session load_session(const std::string& dir) {
  Session s;
  std::ifstream f(dir + "/meta.json");
  if (!f) throw DataError("cannot read " + dir + "/meta.json");
  nlohmann::json j;
  f >> j;
  s.meta.subject = j.at("subject").get<int>();
  s.meta.session_index = j.at("session_index").get<int>();
  s.meta.wear_seed = j.at("wear_seed").get<uint64_t>();
  s.meta.sensor_t0_us = j.at("sensor").at("t0_us").get<uint64_t>();
  s.meta.label_t0_us = j.at("labels").at("t0_us").get<uint64_t>();
  for (const auto& g : j.at("segments"))
    s.meta.segments.push_back({g.at("script").get<std::string>(),
                               motion_category_from_name(g.at("category").get<std::string>()),
                               g.at("start_us").get<uint64_t>(), g.at("end_us").get<uint64_t>()});
  s.frames = read_frames_csv(dir + "/frames.csv");
  const size_t label_frames = j.at("labels").at("frames").get<size_t>();
  const auto blob = read_f32(dir + "/labels.bin", label_frames * kPoseDim);
  s.poses.resize(label_frames);
  for (size_t k = 0; k < label_frames; ++k)
    std::memcpy(s.poses[k].data(), blob.data() + k * kPoseDim, kPoseDim * sizeof(float));
  return s;
}

// ---- dataset manifest ----

struct SubjectInfo {
  int id = 0;
  double arm_length_m = 0.57;
  double bust_m = 0.9;
  double height_m = 1.7;
  std::array<double, kChannels> baseline{};
  double coupling_gain = 1.0;
};

struct SessionRef {
  int id = 0;
  int subject = 0;
  std::string dir;
  double duration_s = 0;
};

struct SplitSpec {
  std::vector<int> ui_train, ui_val, ua_finetune, ua_test;  // session ids
};

struct DatasetManifest {
  uint64_t seed = 0;
  std::vector<SubjectInfo> subjects;
  std::vector<SessionRef> sessions;
  SplitSpec splits;

  nlohmann::json to_json() const {
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& s : subjects)
      subs.push_back({{"id", s.id},
                      {"arm_length_m", s.arm_length_m},
                      {"bust_m", s.bust_m},
                      {"height_m", s.height_m},
                      {"baseline", s.baseline},
                      {"coupling_gain", s.coupling_gain}});
    nlohmann::json sess = nlohmann::json::array();
    for (const auto& s : sessions)
      sess.push_back({{"id", s.id}, {"subject", s.subject}, {"dir", s.dir},
                      {"duration_s", s.duration_s}});
    return {{"seed", seed},
            {"channels", ChannelLayout::names},
            {"subjects", subs},
            {"sessions", sess},
            {"splits",
             {{"ui_train", splits.ui_train},
              {"ui_val", splits.ui_val},
              {"ua_finetune", splits.ua_finetune},
              {"ua_test", splits.ua_test}}}};
  }

  static DatasetManifest from_json(const nlohmann::json& j) {
    DatasetManifest m;
    m.seed = j.at("seed").get<uint64_t>();
    for (const auto& s : j.at("subjects")) {
      SubjectInfo si;
      si.id = s.at("id").get<int>();
      si.arm_length_m = s.at("arm_length_m").get<double>();
      si.bust_m = s.at("bust_m").get<double>();
      si.height_m = s.at("height_m").get<double>();
      for (int c = 0; c < kChannels; ++c) si.baseline[c] = s.at("baseline").at(c).get<double>();
      si.coupling_gain = s.at("coupling_gain").get<double>();
      m.subjects.push_back(si);
    }
    for (const auto& s : j.at("sessions"))
      m.sessions.push_back({s.at("id").get<int>(), s.at("subject").get<int>(),
                            s.at("dir").get<std::string>(), s.at("duration_s").get<double>()});
    const auto& sp = j.at("splits");
    m.splits.ui_train = sp.at("ui_train").get<std::vector<int>>();
    m.splits.ui_val = sp.at("ui_val").get<std::vector<int>>();
    m.splits.ua_finetune = sp.at("ua_finetune").get<std::vector<int>>();
    m.splits.ua_test = sp.at("ua_test").get<std::vector<int>>();
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << to_json().dump(2) << "\n";
  }

  static DatasetManifest load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot read " + path);
    nlohmann::json j;
    f >> j;
    return from_json(j);
  }
};

// ---- materialized normalized windows: f32 blob + JSON sidecar ----

struct WindowTensor {
  std::vector<int> shape;         // [N, window, channels]
  std::vector<std::string> channel_names;
  int hop = 1;
  std::vector<std::string> sources;
  std::vector<float> data;
};

inline void save_window_tensor(const std::string& base_path, const WindowTensor& w) {
  write_f32(base_path + ".bin", w.data.data(), w.data.size());
  nlohmann::json j = {{"shape", w.shape},
                      {"dtype", "f32le"},
                      {"channels", w.channel_names},
                      {"hop", w.hop},
                      {"sources", w.sources}};
  std::ofstream f(base_path + ".json");
  if (!f) throw DataError("cannot write " + base_path + ".json");
  f << j.dump(2) << "\n";
}

inline WindowTensor load_window_tensor(const std::string& base_path) {
  std::ifstream f(base_path + ".json");
  if (!f) throw DataError("cannot read " + base_path + ".json");
  nlohmann::json j;
  f >> j;
  WindowTensor w;
  w.shape = j.at("shape").get<std::vector<int>>();
  w.channel_names = j.at("channels").get<std::vector<std::string>>();
  w.hop = j.at("hop").get<int>();
  w.sources = j.at("sources").get<std::vector<std::string>>();
  size_t n = 1;
  for (int d : w.shape) n *= static_cast<size_t>(d);
  w.data = read_f32(base_path + ".bin", n);
  return w;
}

}  // namespace seampose
