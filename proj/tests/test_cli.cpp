#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "specsel/cli.hpp"
#include "specsel/graph.hpp"
#include "specsel/io.hpp"

using namespace specsel;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "specsel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("specsel_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string put(const std::string& name, const std::string& text) const {
    write_file_atomic((dir / name).string(), text);
    return (dir / name).string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string read(const std::string& name) const { return read_text_file(path(name)); }
};

std::string complete_edge_list(std::size_t n) {
  std::ostringstream s;
  write_edge_list(s, Graph::complete(n));
  return s.str();
}

const char* kSelectConfig = R"({
  "observed": "obs.txt",
  "seed": 7,
  "K": 10,
  "classifier_params": {"random_forest": {"trees": 30}},
  "candidates": [
    {"name": "empty", "family": "bernoulli", "n": 8, "p": 0},
    {"name": "complete", "family": "bernoulli", "n": 8, "p": 1}
  ]
})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == kExitConfig);
    CHECK(run({"bogus"}).code == kExitConfig);
    CHECK(run({"select"}).code == kExitConfig);  // --config is required
    CHECK(run({"--help"}).code == kExitOk);
    const Run missing = run({"select", "--config", "/nonexistent/specsel.json"});
    CHECK(missing.code == kExitConfig);
    CHECK(missing.err.find("/nonexistent/specsel.json") != std::string::npos);
  }

  TEST_CASE("simulate writes K files and a manifest") {
    Scratch s("simulate");
    const auto cfg = s.put("sim.json", R"({"seed": 3, "K": 3, "model": {"family": "bernoulli", "n": 6, "p": 0}})");
    const Run r = run({"simulate", "--config", cfg, "--out", s.path("out")});
    REQUIRE(r.code == kExitOk);
    for (const char* f : {"out/network_0001.txt", "out/network_0002.txt", "out/network_0003.txt"})
      CHECK(s.read(f) == "n 6 directed 0\n");
    const auto manifest = nlohmann::json::parse(s.read("out/manifest.json"));
    CHECK(manifest["K"] == 3);
    CHECK(manifest["networks"].size() == 3);
    CHECK(manifest["networks"][0]["seed"] != manifest["networks"][1]["seed"]);

    // Same seed, same bytes; --seed overrides the config.
    const auto gw = s.put("gw.json", R"({"seed": 5, "K": 2, "prefix": "g",
      "model": {"family": "gwesp_ergm", "n": 12, "theta1": -1.5, "theta2": 0.3, "theta3": 1.0}})");
    REQUIRE(run({"simulate", "--config", gw, "--out", s.path("a")}).code == kExitOk);
    REQUIRE(run({"simulate", "--config", gw, "--out", s.path("b")}).code == kExitOk);
    REQUIRE(run({"simulate", "--config", gw, "--out", s.path("c"), "--seed", "6"}).code == kExitOk);
    CHECK(s.read("a/manifest.json") == s.read("b/manifest.json"));
    CHECK(s.read("a/g_0002.txt") == s.read("b/g_0002.txt"));
    CHECK(s.read("a/manifest.json") != s.read("c/manifest.json"));

    const auto noseed = s.put("noseed.json", R"({"K": 1, "model": {"family": "bernoulli", "n": 6, "p": 0}})");
    const Run e = run({"simulate", "--config", noseed, "--out", s.path("x")});
    CHECK(e.code == kExitConfig);
    CHECK(e.err.find("seed") != std::string::npos);
  }

  TEST_CASE("spectrum") {
    Scratch s("spectrum");
    s.put("k3.txt", "n 3 directed 0\n1 2\n2 3\n1 3\n");
    s.put("di.txt", "n 2 directed 1\n1 2\n2 1\n");
    s.put("dup.txt", "n 3 directed 0\n1 2\n\n2 1\n");
    const auto cfg = s.put("k3.json", R"({"inputs": ["k3.txt"], "label": "K3"})");
    REQUIRE(run({"spectrum", "--config", cfg, "--out", s.path("o")}).code == kExitOk);
    CHECK(s.read("o/spectra.csv") == "model_label,replicate_id,lambda_1,lambda_2,lambda_3\nK3,1,0,3,3\n");

    const auto di = s.put("di.json", R"({"inputs": ["di.txt"], "output": "d.csv"})");
    REQUIRE(run({"spectrum", "--config", di, "--out", s.path("o")}).code == kExitOk);
    CHECK(s.read("o/d.csv") == "model_label,replicate_id,lambda_1,lambda_2\nobserved,1,0,4\n");

    const auto dup = s.put("dup.json", R"({"inputs": ["dup.txt"]})");
    const Run e = run({"spectrum", "--config", dup, "--out", s.path("o")});
    CHECK(e.code == kExitConfig);
    CHECK(e.err.find("line 4") != std::string::npos);
  }

  TEST_CASE("select") {
    Scratch s("select");
    s.put("obs.txt", complete_edge_list(8));
    const auto cfg = s.put("sel.json", kSelectConfig);
    const Run r = run({"select", "--config", cfg, "--out", s.path("a"), "--threads", "2"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("predicted: complete") != std::string::npos);
    const auto report = nlohmann::json::parse(s.read("a/report.json"));
    CHECK(report["predicted"] == "complete");
    CHECK(report["normalized"]["complete"] == 1.0);

    REQUIRE(run({"select", "--config", cfg, "--out", s.path("b")}).code == kExitOk);
    CHECK(s.read("a/report.json") == s.read("b/report.json"));
  }

  TEST_CASE("select with a 20-model menu has exactly one top score") {
    Scratch s("menu");
    s.put("obs.txt", "n 10 directed 0\n1 2\n2 3\n3 4\n4 5\n5 1\n6 7\n8 9\n");
    nlohmann::json cfg = {{"observed", "obs.txt"}, {"seed", 1}, {"K", 5}};
    cfg["classifier"] = "gaussian_nb";
    cfg["candidates"] = nlohmann::json::array();
    for (int m = 0; m < 20; ++m)
      cfg["candidates"].push_back({{"family", "bernoulli"}, {"n", 10}, {"theta1", -3.0 + 0.15 * m}});
    const auto path = s.put("menu.json", cfg.dump());
    REQUIRE(run({"select", "--config", path, "--out", s.path("o")}).code == kExitOk);
    const auto report = nlohmann::json::parse(s.read("o/report.json"));
    int ones = 0;
    for (const auto& [name, v] : report["normalized"].items()) ones += v.get<double>() == 1.0;
    CHECK(report["normalized"].size() == 20);
    CHECK(ones >= 1);
    CHECK(report["normalized"][report["predicted"].get<std::string>()] == 1.0);
  }

  TEST_CASE("select reports config problems with exit code 2") {
    Scratch s("select_errors");
    s.put("obs.txt", complete_edge_list(9));
    const auto mismatch = s.put("m.json", kSelectConfig);
    const Run e = run({"select", "--config", mismatch, "--out", s.path("o")});
    CHECK(e.code == kExitConfig);
    CHECK(e.err.find("n = 8") != std::string::npos);
    CHECK_FALSE(fs::exists(s.path("o/report.json")));

    const auto extra = s.put("x.json", R"({"observed": "obs.txt", "seed": 1, "candidates": [], "Kk": 3})");
    const Run u = run({"select", "--config", extra});
    CHECK(u.code == kExitConfig);
    CHECK(u.err.find("'Kk'") != std::string::npos);

    const auto broken = s.put("b.json", R"({"observed": "obs.txt", )");
    const Run b = run({"select", "--config", broken});
    CHECK(b.code == kExitConfig);
    CHECK(b.err.find("malformed JSON") != std::string::npos);
  }

  TEST_CASE("save_classifier writes a loadable model") {
    Scratch s("save");
    s.put("obs.txt", complete_edge_list(8));
    auto cfg = nlohmann::json::parse(kSelectConfig);
    cfg["save_classifier"] = true;
    const auto path = s.put("sel.json", cfg.dump());
    REQUIRE(run({"select", "--config", path, "--out", s.path("o")}).code == kExitOk);
    const auto j = nlohmann::json::parse(s.read("o/classifier.json"));
    CHECK(j["class_names"].size() == 2);
  }

  TEST_CASE("study") {
    Scratch s("study");
    const auto cfg = s.put("s1.json", R"({"study": 1, "seed": 2, "R": 2, "K": 3, "grid": [0.0, 0.5],
      "sizes": [8, 10, 12], "classifier_params": {"random_forest": {"trees": 10}}})");
    REQUIRE(run({"study", "--config", cfg, "--out", s.path("a")}).code == kExitOk);
    REQUIRE(run({"study", "--config", cfg, "--out", s.path("b"), "--threads", "3"}).code == kExitOk);
    const std::string csv = s.read("a/study1.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
    CHECK(csv == s.read("b/study1.csv"));
    CHECK(s.read("a/study1.svg") == s.read("b/study1.svg"));

    const auto s5 = s.put("s5.json", R"({"study": 5, "seed": 2, "R": 2, "K": 3, "grid": [0.5], "sizes": [8, 10],
      "classifiers": ["gbt", "random_forest", "gaussian_nb"],
      "classifier_params": {"random_forest": {"trees": 10}, "gbt": {"rounds": 5}}})");
    REQUIRE(run({"study", "--config", s5, "--out", s.path("c")}).code == kExitOk);
    const std::string svg = s.read("c/study5.svg");
    std::size_t lines = 0;
    for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
    CHECK(lines == 3 * 2);

    const auto bad = s.put("bad.json", R"({"study": 9, "seed": 1})");
    CHECK(run({"study", "--config", bad, "--out", s.path("d")}).code == kExitConfig);
    const auto zero = s.put("zero.json", R"({"study": 1, "seed": 1, "R": 0})");
    CHECK(run({"study", "--config", zero, "--out", s.path("d")}).code == kExitConfig);
    const auto typo = s.put("typo.json", R"({"study": 1, "seed": 1, "gird": [0.1]})");
    const Run t = run({"study", "--config", typo, "--out", s.path("d")});
    CHECK(t.code == kExitConfig);
    CHECK(t.err.find("'gird'") != std::string::npos);
    CHECK_FALSE(fs::exists(s.path("d/study1.csv")));
  }
}
