#include <array>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <doctest.h>

#include "armpose/config.hpp"
#include "armpose/io.hpp"
#include "armpose/network.hpp"
#include "support.hpp"

using test_support::scratch_dir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ARMPOSE_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

// 16x16 images keep rendering and training fast.
fs::path small_config(const fs::path& dir, int epochs = 2) {
  armpose::CliConfig c;
  c.camera.width = c.camera.height = 16;
  c.camera.fx = c.camera.fy = 16;
  c.camera.cx = c.camera.cy = 8;
  c.train.epochs = epochs;
  c.train.learning_rate = 1e-3;
  c.train.batch_size = 12;
  const auto path = dir / "small.cfg";
  armpose::write_file(path.string(), armpose::config_to_text(c, "test"));
  return path;
}

std::string slurp(const fs::path& p) { return armpose::read_file(p.string()); }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("oa generate --help").code == 0);
  CHECK(run("").code != 0);
  CHECK(run("bogus").code == 1);
  CHECK(run("oa generate").code == 1);
  CHECK(run("dataset generate --out x").code == 1);
  CHECK(run("dataset generate --random 3 --validation 3 --out x").code == 1);
}

TEST_CASE("oa commands") {
  const auto dir = scratch_dir("cli_oa");
  const auto file = dir / "oa.csv";
  auto r = run("oa generate --runs 144 --factors 7 --levels 12 --strength 2 --out " + q(file));
  CHECK(r.code == 0);
  REQUIRE(fs::exists(file));
  const auto text = slurp(file);
  CHECK(text.rfind("f1,f2,f3,f4,f5,f6,f7\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 145);

  r = run("oa verify " + q(file) + " --strength 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("holds") != std::string::npos);

  r = run("oa verify " + q(file) + " --strength 3");
  CHECK(r.code == 3);

  SUBCASE("a corrupted cell is reported by column pair") {
    std::istringstream in(text);
    std::string line, bad;
    for (int i = 0; std::getline(in, line); ++i) {
      if (i == 5) {
        const auto comma = line.find(',');
        const int v = std::stoi(line.substr(0, comma));
        line = std::to_string((v + 1) % 12) + line.substr(comma);
      }
      bad += line + "\n";
    }
    const auto bad_file = dir / "bad.csv";
    armpose::write_file(bad_file.string(), bad);
    r = run("oa verify " + q(bad_file) + " --strength 2");
    CHECK(r.code == 3);
    CHECK(r.out.find("columns (1,") != std::string::npos);
  }
  SUBCASE("unsupported and invalid requests") {
    r = run("oa generate --runs 144 --factors 9 --levels 12 --strength 2 --out " + q(dir / "x.csv"));
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "x.csv"));
    CHECK(run("oa generate --runs 100 --factors 7 --levels 12 --strength 2 --out " + q(dir / "y.csv")).code == 1);
    CHECK(run("oa verify " + q(dir / "missing.csv")).code == 1);
  }
}

TEST_CASE("fk command") {
  auto r = run("fk --joints 0,0,0,0,0,0,0");
  CHECK(r.code == 0);
  CHECK(r.out.find("1.000000000") != std::string::npos);
  CHECK(run("fk --joints '10, -20, 30, 0, 0, 15, -5'").code == 0);
  CHECK(run("fk --joints 0,0,0,0,0,0").code == 1);
  CHECK(run("fk --joints 0,0,zero,0,0,0,0").code == 1);
  r = run("fk --joints 0,0,0,90,0,0,0");
  CHECK(r.code == 4);
  CHECK(r.out.find("joint 4") != std::string::npos);
  const std::string asset = std::string(ARMPOSE_SOURCE_DIR) + "/assets/sawyer_like.json";
  CHECK(run("fk --joints 0,0,0,0,0,0,0 --robot " + asset).out == run("fk --joints 0,0,0,0,0,0,0").out);
}

TEST_CASE("dataset, train and eval") {
  const auto dir = scratch_dir("cli_pipeline");
  const auto cfg = small_config(dir);

  auto r = run("oa generate --out " + q(dir / "oa.csv"));
  REQUIRE(r.code == 0);
  r = run("dataset generate --design " + q(dir / "oa.csv") + " --config " + q(cfg) + " --out " + q(dir / "orth"));
  CHECK(r.code == 0);
  CHECK(r.out.find("11^7 = 19487171") != std::string::npos);
  CHECK(fs::exists(dir / "orth" / "manifest.json"));
  CHECK(slurp(dir / "orth" / "manifest.json").find("\"orthogonal\"") != std::string::npos);

  r = run("dataset generate --random 12 --seed 3 --config " + q(cfg) + " --out " + q(dir / "a"));
  CHECK(r.code == 0);
  CHECK(run("dataset generate --random 12 --seed 3 --config " + q(cfg) + " --out " + q(dir / "b")).code == 0);
  for (const auto& e : fs::directory_iterator(dir / "a"))
    CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
  CHECK(run("dataset generate --validation 6 --config " + q(cfg) + " --out " + q(dir / "v")).code == 0);
  CHECK(slurp(dir / "v" / "manifest.json").find("\"validation\"") != std::string::npos);

  SUBCASE("a design outside the joint limits") {
    r = run("dataset generate --design " + q(dir / "oa.csv") + " --step 20 --config " + q(cfg) + " --out " +
            q(dir / "w"));
    CHECK(r.code == 4);
    armpose::write_file((dir / "wide.csv").string(), "j1,j2,j3,j4,j5,j6,j7\n0,0,0,0,0,0,80\n");
    CHECK(run("dataset generate --design " + q(dir / "wide.csv") + " --out " + q(dir / "w")).code == 1);
    CHECK_FALSE(fs::exists(dir / "w"));
  }

  r = run("train --dataset " + q(dir / "a") + " --config " + q(cfg) + " --out " + q(dir / "m.ann1") + " --log " +
          q(dir / "loss.csv"));
  CHECK(r.code == 0);
  const auto log = slurp(dir / "loss.csv");
  CHECK(log.rfind("epoch,loss\n", 0) == 0);
  CHECK(std::count(log.begin(), log.end(), '\n') == 3);
  const auto model = armpose::load_model((dir / "m.ann1").string());
  CHECK(model.spec.input_height == 16);

  r = run("eval --model " + q(dir / "m.ann1") + " --dataset " + q(dir / "v") + " --report " + q(dir / "e.csv"));
  CHECK(r.code == 0);
  const auto report = slurp(dir / "e.csv");
  CHECK(report.rfind("dataset,j1,j2,j3,j4,j5,j6,j7,average\n", 0) == 0);
  CHECK(std::count(report.begin(), report.end(), '\n') == 2);

  SUBCASE("mismatched inputs") {
    armpose::CliConfig big;
    armpose::write_file((dir / "big.cfg").string(), armpose::config_to_text(big, "test"));
    CHECK(run("dataset generate --validation 2 --config " + q(dir / "big.cfg") + " --out " + q(dir / "big")).code ==
          0);
    CHECK(run("eval --model " + q(dir / "m.ann1") + " --dataset " + q(dir / "big") + " --report " +
              q(dir / "x.csv"))
              .code == 5);
    CHECK(run("eval --model " + q(dir / "missing.ann1") + " --dataset " + q(dir / "v") + " --report " +
              q(dir / "x.csv"))
              .code == 1);
    CHECK(run("train --dataset " + q(dir / "nowhere") + " --out " + q(dir / "x.ann1")).code == 1);
  }
  SUBCASE("compare") {
    r = run("compare --orthogonal " + q(dir / "a") + " --random " + q(dir / "b") + " --validation " + q(dir / "v") +
            " --config " + q(cfg) + " --out " + q(dir / "rep"));
    CHECK(r.code == 0);
    for (const char* f : {"loss_orthogonal.csv", "loss_random.csv", "eval_orthogonal_validation.csv",
                          "eval_random_validation.csv", "table_validation.csv", "summary.svg", "config_used.cfg"})
      CHECK(fs::exists(dir / "rep" / f));
    CHECK(run("compare --orthogonal " + q(dir / "orth") + " --random " + q(dir / "b") + " --validation " +
              q(dir / "v") + " --config " + q(cfg) + " --out " + q(dir / "rep2"))
              .code == 5);
  }
}

TEST_CASE("config command") {
  const auto dir = scratch_dir("cli_config");
  CHECK(run("config --out " + q(dir / "d.cfg")).code == 0);
  CHECK(run("config --paper-config --out " + q(dir / "p.cfg")).code == 0);
  const auto d = armpose::load_config((dir / "d.cfg").string());
  const auto p = armpose::load_config((dir / "p.cfg").string());
  CHECK(d.train.learning_rate == 1e-4);
  CHECK(p.train.learning_rate == 1e-6);
  CHECK(p.train.epochs == 20000);
  const std::string root = ARMPOSE_SOURCE_DIR;
  CHECK(slurp(dir / "d.cfg") == slurp(root + "/configs/desk_scale.cfg"));
  CHECK(slurp(dir / "p.cfg") == slurp(root + "/configs/paper.cfg"));

  armpose::write_file((dir / "bad.cfg").string(), "epochs = 2\nwhatever = 1\n");
  const auto r = run("train --dataset x --config " + q(dir / "bad.cfg") + " --out " + q(dir / "m.ann1"));
  CHECK(r.code == 1);
  CHECK(r.out.find("line 2") != std::string::npos);
}
