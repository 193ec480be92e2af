#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "seampose/session.hpp"

using namespace seampose;
namespace fs = std::filesystem;

namespace {

const std::string cli = SEAMPOSE_CLI_PATH;

int run(const std::string& args) {
  const int rc = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "seampose_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("cli end-to-end: simulate, train both stages, eval, replay, infer") {
  const fs::path d = work_dir();
  const std::string ds = (d / "dataset").string();

  REQUIRE(run("simulate --subjects 2 --minutes 1.5 --sessions 3 --seed 11 --out " + ds) == 0);
  REQUIRE(fs::exists(ds + "/dataset.json"));
  REQUIRE(fs::exists(ds + "/subject0_skeleton.json"));
  REQUIRE(run("inspect --dataset " + ds) == 0);

  const DatasetManifest m = DatasetManifest::load(ds + "/dataset.json");
  REQUIRE(run("inspect --session " + m.sessions[0].dir + " --dump-windows " +
              (d / "win").string() + " --hop 8") == 0);
  REQUIRE(fs::exists((d / "win").string() + ".bin"));
  REQUIRE(fs::exists((d / "win").string() + ".json"));

  const std::string ui = (d / "ui").string();
  REQUIRE(run("train --dataset " + ds + " --stage independent --epochs 2 --lr 2e-3 --batch 32 "
              "--hidden 8 --hop 8 --threads 2 --seed 3 --out " + ui) == 0);
  REQUIRE(fs::exists(ui + "/checkpoint/manifest.json"));
  REQUIRE(fs::exists(ui + "/metrics.csv"));

  const std::string ua = (d / "ua").string();
  REQUIRE(run("train --dataset " + ds + " --stage adaptive --init " + ui + "/checkpoint "
              "--epochs 2 --lr 2e-4 --batch 32 --hidden 8 --hop 8 --threads 2 --seed 4 --out " +
              ua) == 0);

  REQUIRE(run("eval --dataset " + ds + " --model " + ua + "/checkpoint --split ua_test --svg "
              "--out " + (d / "eval").string()) == 0);
  REQUIRE(fs::exists((d / "eval" / "report.json").string()));
  REQUIRE(fs::exists((d / "eval" / "report.txt").string()));
  REQUIRE(fs::exists((d / "eval" / "per_joint.svg").string()));

  const std::string stream = (d / "stream.bin").string();
  REQUIRE(run("replay --session " + m.sessions.back().dir + " --to " + stream + " --speed 0") ==
          0);
  REQUIRE(fs::file_size(stream) > 0);

  const std::string jsonl = (d / "pred.jsonl").string();
  REQUIRE(run("infer-live --from " + stream + " --model " + ua + "/checkpoint --skeleton " +
              ds + "/subject1_skeleton.json --no-drop --out " + jsonl) == 0);
  std::ifstream pf(jsonl);
  std::string line;
  size_t lines = 0;
  while (std::getline(pf, line)) {
    if (lines == 0) {
      const auto j = nlohmann::json::parse(line);
      REQUIRE(j.contains("t_us"));
      REQUIRE(j.at("joints").size() == 8);
      REQUIRE(j.contains("latency_us"));
      REQUIRE(j.contains("dropped"));
    }
    ++lines;
  }
  const Session last = load_session(m.sessions.back().dir);
  REQUIRE(lines == last.frames.size() - (kHistoryFrames - 1));
}

TEST_CASE("cli exit codes: usage=1, data=2") {
  REQUIRE(run("definitely-not-a-subcommand") == 1);
  REQUIRE(run("train") == 1);                        // missing required --dataset
  REQUIRE(run("simulate --subjects 1 --out /tmp/seampose_cli_bad") == 1);  // impossible split
  REQUIRE(run("eval --dataset /nonexistent --model /nope") == 2);
  REQUIRE(run("train --dataset /nonexistent") == 2);
  REQUIRE(run("replay --session /nonexistent") == 2);
  REQUIRE(run("inspect") == 1);
  REQUIRE(run("--help") == 0);
}

TEST_CASE("cli config file provides defaults") {
  const fs::path d = work_dir();
  const std::string cfg_path = (d / "config.json").string();
  {
    std::ofstream f(cfg_path);
    f << R"({"simulate": {"subjects": 2, "minutes": 0.8, "sessions": 3, "seed": 77}})";
  }
  const std::string ds = (d / "cfg_dataset").string();
  REQUIRE(run("--config " + cfg_path + " simulate --out " + ds) == 0);
  const DatasetManifest m = DatasetManifest::load(ds + "/dataset.json");
  REQUIRE(m.seed == 77);
  REQUIRE(m.subjects.size() == 2);
  REQUIRE(m.sessions.size() == 6);
}
