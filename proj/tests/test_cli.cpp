#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "prony/cli.hpp"
#include "prony/variety.hpp"

using namespace prony;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("prony_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("solve") {
  Run r = invoke({"solve", "--moments", write("m1.json", R"({"d": 2, "moments": [2, 3, 5, 9]})")});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["kind"] == "Unique");
  CHECK(j["nodes"][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["nodes"][1].get<double>() == doctest::Approx(2.0));
  CHECK(j["amplitudes"][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["amplitudes"][1].get<double>() == doctest::Approx(1.0));
  CHECK(j.contains("delta"));
  CHECK(j.contains("eta"));
  CHECK(j.contains("residual_norm"));

  r = invoke({"solve", "--moments", write("m2.json", R"({"d": 2, "moments": [0, 0, 1, 0]})")});
  CHECK(r.code == 3);
  CHECK(json::parse(r.out)["kind"] == "Empty");

  CHECK(invoke({"solve", "--moments", write("bad.json", R"({"d": 2, "moments": [2, 3)")}).code == 2);
  CHECK(invoke({"solve", "--moments", write("short.json", R"({"d": 2, "moments": [2, 3, 5]})")}).code == 2);
  CHECK(invoke({"solve", "--moments", (scratch() / "missing.json").string()}).code == 2);
  CHECK(invoke({"solve", "--moments", write("m3.json", R"({"d": 2, "moments": [2, 3, 5, 9]})"), "--d", "3"}).code == 2);
  CHECK(invoke({"solve"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
}

TEST_CASE("curve") {
  const std::string m = write("c.json", R"({"d": 2, "moments": [2, 3, 5]})");
  Run r = invoke({"curve", "--moments", m, "--window", "0:20", "--samples", "5"});
  CHECK(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"t", "interval", "x_1", "x_2", "a_1", "a_2", "min_gap", "residual"});

  // every row re-validates on the variety when read back
  for (std::size_t k = 1; k < rows.size(); ++k) {
    Signal s;
    s.nodes = {std::stod(rows[k][2]), std::stod(rows[k][3])};
    s.amplitudes = {std::stod(rows[k][4]), std::stod(rows[k][5])};
    CHECK(is_member(MomentVector{{2, 3, 5}, 2}, s, 2, 1e-8));
    if (k > 1) CHECK(std::stod(rows[k][0]) > std::stod(rows[k - 1][0]));
  }

  r = invoke({"curve", "--moments", write("c2.json", R"({"d": 2, "moments": [1, 0, -1]})"), "--window", "-1.5:1.5"});
  CHECK(r.code == 0);
  CHECK(csv(r.out).size() == 1);

  r = invoke({"curve", "--moments", write("c3.json", R"({"d": 2, "moments": [1, 0, -1]})"), "--window", "-5:5"});
  rows = csv(r.out);
  REQUIRE(rows.size() > 1);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double t = std::stod(rows[k][0]);
    CHECK(std::abs(t) > 2.0);
    CHECK(rows[k][1] == (t < 0 ? "0" : "1"));
  }

  r = invoke({"curve", "--moments", m, "--format", "json", "--window", "0:20"});
  CHECK(json::parse(r.out).size() == 5);
  CHECK(invoke({"curve", "--moments", m, "--window", "3"}).code == 2);
  CHECK(invoke({"curve", "--moments", m, "--window", "4:3"}).code == 2);
  CHECK(invoke({"curve", "--moments", write("c4.json", R"({"d": 2, "moments": [1, 1, 1]})")}).code == 3);
}

TEST_CASE("sample") {
  const std::string m = write("s.json", R"({"d": 2, "moments": [2, 3, 5, 9]})");
  Run r = invoke({"sample", "--moments", m, "--q", "2", "--window", "-3:3", "--samples", "7"});
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"a_1", "a_2", "x_1", "x_2"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    Signal s;
    s.amplitudes = {std::stod(rows[k][0]), std::stod(rows[k][1])};
    s.nodes = {std::stod(rows[k][2]), std::stod(rows[k][3])};
    CHECK(is_member(MomentVector{{2, 3, 5}, 2}, s, 2, 1e-8));
  }
  CHECK(invoke({"sample", "--moments", m, "--q", "4"}).code == 2);
}

TEST_CASE("classify and figure") {
  Run r = invoke({"classify", "--mu", "1,0,-1"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["kind"] == "HyperbolaNonSingular");
  CHECK(j["parabola_crossings"] == 2);
  CHECK(json::parse(invoke({"classify", "--mu", "0,1,4"}).out)["kind"] == "Line");
  CHECK(invoke({"classify", "--mu", "0,0,1"}).code == 3);
  CHECK(invoke({"classify", "--mu", "1,2"}).code == 2);
  CHECK(invoke({"classify", "--mu", "1,x,2"}).code == 2);

  const std::string lines = write("lines.json", R"({"lines": [[1, 0, -1], [1, 1, 1], [2, 3, 5], [0, 1, 4]]})");
  r = invoke({"figure", "--lines", lines, "--samples", "20"});
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"line", "mu_0", "mu_1", "mu_2", "kind", "branch", "index", "x_1",
                                            "x_2", "marked"});
  std::set<std::string> groups;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    groups.insert(rows[k][0]);
    const double m0 = std::stod(rows[k][1]), m1 = std::stod(rows[k][2]), m2 = std::stod(rows[k][3]);
    const double x1 = std::stod(rows[k][7]), x2 = std::stod(rows[k][8]);
    CHECK(std::abs(m0 * x1 * x2 - m1 * (x1 + x2) + m2) <= 1e-10 * (1 + 9 * std::abs(m0) + 6 * std::abs(m1) + std::abs(m2)));
  }
  CHECK(groups.size() == 4);
  CHECK(invoke({"figure", "--lines", write("bare.json", "[[1, 0, -1]]")}).code == 0);
  CHECK(invoke({"figure", "--lines", write("nolines.json", R"({"x": 1})")}).code == 2);
}

TEST_CASE("bounds") {
  const std::string m = write("b.json", R"({"d": 2, "moments": [2, 3, 5]})");
  Run r = invoke({"bounds", "--moments", m, "--D", "3", "--window", "7:9.6"});
  CHECK(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() > 2);
  const std::vector<std::string> head = rows[0];
  const auto col = [&head](const char* name) {
    return static_cast<std::size_t>(std::find(head.begin(), head.end(), name) - head.begin());
  };
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) CHECK(rows[k][col("holds")] == "1");
  CHECK(rows.back()[col("kind")] == "summary");
  CHECK(rows.back()[col("holds")] == "1");

  // a box too small for part of the window flags rows
  r = invoke({"bounds", "--moments", m, "--D", "2", "--window", "7:9.6"});
  rows = csv(r.out);
  bool flagged = false;
  for (const auto& row : rows)
    if (row[col("status")] == "out_of_box") flagged = true;
  CHECK(flagged);
  CHECK(rows.back()[col("holds")] == "1");
  CHECK(invoke({"bounds", "--moments", m, "--D", "0.5"}).code == 2);
}

TEST_CASE("escape") {
  const std::string m = write("e.json", R"({"d": 2, "moments": [2, 3, 5]})");
  Run r = invoke({"escape", "--moments", m, "--t", "300"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["constants"]["t0"].get<double>() == doctest::Approx(250.0));

  r = invoke({"escape", "--moments", m, "--t", "100"});
  CHECK(r.code == 4);
  CHECK(r.err.find("PreconditionT") != std::string::npos);
  CHECK(json::parse(r.out)["threshold"].get<double>() == doctest::Approx(250.0));

  CHECK(invoke({"escape", "--moments", write("flat.json", R"({"alpha": [0, 1], "beta": [1, 1]})"), "--t", "10"}).code == 4);
  r = invoke({"escape", "--moments", write("pen.json", R"({"alpha": [1, 0.5], "beta": [2, -1]})"), "--t", "1000"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["alpha_positive"] == true);
}

TEST_CASE("amplify") {
  Run r = invoke({"amplify", "--trials", "100", "--format", "json"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["fits"].size() == 4);
  CHECK(std::abs(j["fits"][3]["slope"].get<double>() + 3) <= 0.5);
  CHECK(invoke({"amplify", "--trials", "10"}).code == 2);
  CHECK(invoke({"amplify", "--d", "5"}).code == 2);
  CHECK(invoke({"amplify", "--q-list", "1.5"}).code == 2);
}

TEST_CASE("--out writes the data to a file") {
  const std::string m = write("o.json", R"({"d": 2, "moments": [2, 3, 5, 9]})");
  const fs::path out = scratch() / "solve_out.json";
  Run r = invoke({"solve", "--moments", m, "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == invoke({"solve", "--moments", m}).out);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string m2 = write("d2.json", R"({"d": 2, "moments": [2, 3, 5, 9]})");
  const std::string m3 = write("d3.json", R"({"d": 2, "moments": [2, 3, 5]})");
  const std::string lines = write("dl.json", R"({"lines": [[1, 0, -1], [1, 1, 1], [2, 3, 5], [0, 1, 4]]})");
  const std::vector<std::vector<std::string>> cmds{
      {"solve", "--moments", m2},
      {"curve", "--moments", m3, "--window", "0:20"},
      {"sample", "--moments", m2, "--q", "2"},
      {"classify", "--mu", "1,0,-1"},
      {"figure", "--lines", lines},
      {"bounds", "--moments", m3, "--D", "3"},
      {"escape", "--moments", m3, "--t", "300"},
      {"amplify", "--trials", "100", "--seed", "11"},
  };
  for (const auto& c : cmds) {
    const Run a = invoke(c), b = invoke(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}
