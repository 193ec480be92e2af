#include <catch2/catch.hpp>

#include <thread>

#include "seampose/live.hpp"
#include "seampose/replay.hpp"
#include "seampose/simulator.hpp"

using namespace seampose;

namespace {

CapFrame random_frame(Rng& rng, uint32_t seq) {
  CapFrame f;
  f.seq = seq;
  f.t_us = 1000ull * seq;
  for (auto& c : f.ch) c = static_cast<uint32_t>(rng.bounded(kMaxCode + 1ull));
  return f;
}

bool frames_equal(const CapFrame& a, const CapFrame& b) {
  return a.seq == b.seq && a.t_us == b.t_us && a.ch == b.ch;
}

}  // namespace

TEST_CASE("wire frames are 49 bytes and round-trip exactly") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const CapFrame f = random_frame(rng, static_cast<uint32_t>(i));
    const auto bytes = encode_frame(f);
    REQUIRE(bytes.size() == kWireFrameSize);
    WireError err;
    const auto back = decode_frame(bytes.data(), bytes.size(), &err);
    REQUIRE(back.has_value());
    REQUIRE(frames_equal(*back, f));
  }
}

TEST_CASE("encode rejects out-of-range codes") {
  CapFrame f;
  f.ch[3] = kMaxCode + 1;
  REQUIRE_THROWS_AS(encode_frame(f), RangeViolation);
}

TEST_CASE("a flipped byte is caught by crc and the stream resynchronizes") {
  Rng rng(2);
  FrameDecoder dec;
  const CapFrame a = random_frame(rng, 1), b = random_frame(rng, 2), c = random_frame(rng, 3);
  auto ba = encode_frame(a);
  ba[20] ^= 0xFF;  // corrupt a payload byte
  const auto bb = encode_frame(b);
  const auto bc = encode_frame(c);
  dec.feed(ba.data(), ba.size());
  dec.feed(bb.data(), bb.size());
  dec.feed(bc.data(), bc.size());
  std::vector<CapFrame> out;
  while (auto f = dec.next()) out.push_back(*f);
  REQUIRE(out.size() == 2);
  REQUIRE(frames_equal(out[0], b));
  REQUIRE(frames_equal(out[1], c));
  REQUIRE(dec.crc_mismatches() >= 1);
}

TEST_CASE("decoder survives arbitrary garbage") {
  Rng rng(3);
  FrameDecoder dec;
  for (int round = 0; round < 50; ++round) {
    std::vector<uint8_t> junk(rng.bounded(300));
    for (auto& x : junk) x = static_cast<uint8_t>(rng.bounded(256));
    dec.feed(junk.data(), junk.size());
    while (dec.next()) {
    }
  }
  // After garbage, valid frames still come through.
  const CapFrame f = random_frame(rng, 9);
  const auto bytes = encode_frame(f);
  dec.feed(bytes.data(), bytes.size());
  std::optional<CapFrame> got;
  while (auto x = dec.next()) got = x;
  REQUIRE(got.has_value());
  REQUIRE(frames_equal(*got, f));
}

TEST_CASE("clean fuzz stream of ten thousand frames is lossless") {
  Rng rng(4);
  FrameDecoder dec;
  std::vector<CapFrame> sent;
  for (uint32_t i = 0; i < 10'000; ++i) {
    const CapFrame f = random_frame(rng, i + 1);
    sent.push_back(f);
    const auto bytes = encode_frame(f);
    dec.feed(bytes.data(), bytes.size());
  }
  size_t idx = 0;
  while (auto f = dec.next()) {
    REQUIRE(frames_equal(*f, sent[idx]));
    ++idx;
  }
  REQUIRE(idx == sent.size());
}

TEST_CASE("interleaved garbage between frames does not lose valid frames") {
  Rng rng(5);
  FrameDecoder dec;
  std::vector<CapFrame> sent;
  for (uint32_t i = 0; i < 500; ++i) {
    if (rng.uniform() < 0.3) {
      std::vector<uint8_t> junk(1 + rng.bounded(40));
      for (auto& x : junk) x = static_cast<uint8_t>(rng.bounded(256));
      dec.feed(junk.data(), junk.size());
    }
    const CapFrame f = random_frame(rng, i + 1);
    sent.push_back(f);
    const auto bytes = encode_frame(f);
    dec.feed(bytes.data(), bytes.size());
  }
  std::vector<CapFrame> got;
  while (auto f = dec.next()) got.push_back(*f);
  REQUIRE(got.size() == sent.size());
  for (size_t i = 0; i < sent.size(); ++i) REQUIRE(frames_equal(got[i], sent[i]));
}

TEST_CASE("range-violating payloads with a valid crc are rejected") {
  CapFrame f;
  f.seq = 1;
  f.t_us = 5;
  f.ch.fill(10);
  auto bytes = encode_frame(f);
  // Force channel 0 out of range and re-stamp the crc so only the range check fires.
  wire::put_u32(&bytes[15], kMaxCode + 5);
  const uint16_t crc = crc16_ccitt(bytes.data(), 47);
  bytes[47] = static_cast<uint8_t>(crc);
  bytes[48] = static_cast<uint8_t>(crc >> 8);
  FrameDecoder dec;
  dec.feed(bytes.data(), bytes.size());
  REQUIRE(!dec.next().has_value());
  REQUIRE(dec.range_violations() == 1);
}

TEST_CASE("replay paces the configured rate and supports unpaced mode") {
  SubjectProfile subj;
  {
    Rng rng(6);
    subj = generate_subject(0, rng);
  }
  SessionRecipe recipe;
  recipe.duration_s = 20;
  const Session session = make_session(subj, 0, 31, recipe);

  SECTION("two seconds at 32 Hz stays within 5 percent") {
    std::vector<CapFrame> head(session.frames.begin(), session.frames.begin() + 64);
    MemoryPipe pipe;
    const ReplayStats st = replay(head, pipe, kSampleRateHz, 1.0);
    REQUIRE(st.frames == 64);
    REQUIRE(st.achieved_hz == Approx(32.0).epsilon(0.05));
  }

  SECTION("unpaced replay delivers everything fast") {
    MemoryPipe pipe;
    const ReplayStats st = replay(session.frames, pipe, kSampleRateHz, 0.0);
    REQUIRE(st.frames == session.frames.size());
    REQUIRE(st.elapsed_s < 2.0);
    pipe.close();
    FrameDecoder dec;
    uint8_t buf[4096];
    size_t n, decoded = 0;
    while ((n = pipe.read(buf, sizeof(buf))) > 0) {
      dec.feed(buf, n);
      while (dec.next()) ++decoded;
    }
    REQUIRE(decoded == session.frames.size());
  }
}

TEST_CASE("warm-up produces the first prediction exactly at frame 180") {
  ModelConfig mc;
  mc.channels = kChannels;
  mc.hidden = 8;
  ModelParams<float> params(mc);
  params.init(77);
  InferencePipeline pipe(params, Skeleton::with_arm_length(0.57));
  Rng rng(8);
  int emitted = 0;
  for (int i = 0; i < 200; ++i) {
    CapFrame f;
    f.seq = static_cast<uint32_t>(i + 1);
    f.t_us = static_cast<uint64_t>(i) * kFramePeriodUs;
    for (auto& c : f.ch) c = 50'000'000 + static_cast<uint32_t>(rng.bounded(1'000'000));
    const auto p = pipe.push(f);
    if (i < kHistoryFrames - 1) REQUIRE(!p.has_value());
    if (i == kHistoryFrames - 1) REQUIRE(p.has_value());
    if (p) ++emitted;
  }
  REQUIRE(emitted == 200 - (kHistoryFrames - 1));
}

TEST_CASE("live inference equals offline batch inference bit for bit") {
  SubjectProfile subj;
  {
    Rng rng(16);
    subj = generate_subject(0, rng);
  }
  SessionRecipe recipe;
  recipe.duration_s = 18;
  const Session session = make_session(subj, 0, 77, recipe);
  ModelConfig mc;
  mc.channels = kChannels;
  mc.hidden = 16;
  ModelParams<float> params(mc);
  params.init(123);
  const Skeleton skel = subject_skeleton(subj);

  const std::vector<Prediction> offline = offline_infer(session, params, skel);
  REQUIRE(offline.size() == session.frames.size() - (kHistoryFrames - 1));

  MemoryPipe pipe;
  std::thread writer([&] {
    replay(session.frames, pipe, kSampleRateHz, 0.0);
    pipe.close();
  });
  LiveOptions opt;
  opt.allow_drops = false;
  LiveStats stats;
  stats.collect = true;
  stats = infer_live(pipe, params, skel, opt, stats);
  writer.join();

  REQUIRE(stats.predictions == offline.size());
  REQUIRE(stats.dropped == 0);
  for (size_t i = 0; i < offline.size(); ++i) {
    REQUIRE(stats.kept[i].t_us == offline[i].t_us);
    for (int k = 0; k < kJointDim; ++k)
      REQUIRE(stats.kept[i].joints.p(k) == offline[i].joints.p(k));
  }
}

TEST_CASE("latency records are monotone and the jsonl schema is stable") {
  SubjectProfile subj;
  {
    Rng rng(26);
    subj = generate_subject(0, rng);
  }
  SessionRecipe recipe;
  recipe.duration_s = 16;
  const Session session = make_session(subj, 0, 5, recipe);
  ModelConfig mc;
  mc.channels = kChannels;
  mc.hidden = 8;
  ModelParams<float> params(mc);
  params.init(9);

  MemoryPipe pipe;
  std::thread writer([&] {
    replay(session.frames, pipe, kSampleRateHz, 0.0);
    pipe.close();
  });
  std::ostringstream jsonl;
  LiveOptions opt;
  opt.allow_drops = false;
  opt.jsonl = &jsonl;
  LiveStats stats;
  stats.collect = true;
  stats = infer_live(pipe, params, subject_skeleton(subj), opt, stats);
  writer.join();

  REQUIRE(stats.predictions > 0);
  for (const auto& p : stats.kept) {
    REQUIRE(p.latency.t_frame_in <= p.latency.t_window_ready);
    REQUIRE(p.latency.t_window_ready <= p.latency.t_inference_done);
    REQUIRE(p.latency.t_inference_done <= p.latency.t_output_written);
  }

  std::istringstream lines(jsonl.str());
  std::string line;
  size_t count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    REQUIRE(j.contains("t_us"));
    REQUIRE(j.at("joints").size() == 8);
    REQUIRE(j.at("joints").at(0).size() == 3);
    REQUIRE(j.contains("latency_us"));
    REQUIRE(j.contains("dropped"));
    ++count;
  }
  REQUIRE(count == stats.predictions);

  // Parsed joints equal the in-memory predictions after f32 round-trip.
  std::istringstream again(jsonl.str());
  std::getline(again, line);
  const auto j0 = nlohmann::json::parse(line);
  for (int jj = 0; jj < kOutJoints; ++jj)
    for (int c = 0; c < 3; ++c)
      REQUIRE(static_cast<float>(j0.at("joints").at(jj).at(c).get<double>()) ==
              stats.kept[0].joints.p(3 * jj + c));
}
