#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pdmetric/cli.hpp"
#include "pdmetric/profile.hpp"
#include "test_support.hpp"

using namespace pdmetric;
namespace fs = std::filesystem;

namespace {

const std::string kData = PDMETRIC_TEST_DATA;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("pdmetric_cli_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("profile command") {
  auto r = run({"profile", data("stable_rank.dgm"), data("empty.dgm")});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("\"steps\": [[0, 2], [1, 1], [3, 0]]") != std::string::npos);

  r = run({"profile", data("single_a.dgm"), data("single_a.dgm")});
  CHECK(r.out.find("\"steps\": [[0, 0]]") != std::string::npos);

  r = run({"profile", data("stable_rank.dgm"), data("empty.dgm"), "--format", "csv"});
  CHECK(r.out == "t,value\n0,2\n1,1\n3,0\n");

  TempDir tmp;
  const auto out_path = (tmp.path() / "p.json").string();
  r = run({"profile", data("stable_rank.dgm"), data("empty.dgm"), "--out", out_path});
  CHECK(r.out.empty());
  std::ifstream in(out_path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(profile_from_json(text).steps().size() == 3);
}

TEST_CASE("parse errors exit 2 with file and line") {
  auto r = run({"profile", data("bad.dgm"), data("empty.dgm")});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("bad.dgm:2") != std::string::npos);
  r = run({"dist", data("missing.dgm"), data("empty.dgm"), "--metric", "bottleneck"});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("dist command examples") {
  auto r = run({"dist", data("single_a.dgm"), data("single_b.dgm"), "--metric", "prokhorov", "--f", "poly:0,1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "1\n");
  CHECK(run({"dist", data("shift_x.dgm"), data("shift_y.dgm"), "--metric", "bottleneck"}).out == "3\n");
  CHECK(run({"dist", data("stable_rank.dgm"), data("empty.dgm"), "--metric", "wasserstein", "--p", "2"}).out ==
        "3.16227766017\n");
  CHECK(run({"dist", data("stable_rank.dgm"), data("empty.dgm"), "--metric", "kth-bottleneck", "--k", "2"}).out ==
        "1\n");
  CHECK(run({"dist", data("shift_x.dgm"), data("shift_y.dgm"), "--metric", "prokhorov", "--f", "poly:0,2"}).out ==
        "2\n");
  CHECK(run({"dist", data("single_a.dgm"), data("single_b.dgm"), "--metric", "bottleneck", "--ground-p", "2"}).out ==
        "1.41421356237\n");
}

TEST_CASE("bottleneck equals kth-bottleneck 1 byte for byte") {
  std::mt19937_64 rng(61);
  TempDir tmp;
  for (int trial = 0; trial < 10; ++trial) {
    std::ostringstream a, b;
    write_diagram(a, testing::random_diagram(rng, 0, 12));
    write_diagram(b, testing::random_diagram(rng, 0, 12));
    const auto pa = tmp.write("a.dgm", a.str()), pb = tmp.write("b.dgm", b.str());
    CHECK(run({"dist", pa, pb, "--metric", "bottleneck"}).out ==
          run({"dist", pa, pb, "--metric", "kth-bottleneck", "--k", "1"}).out);
    CHECK(run({"dist", pa, pb, "--metric", "bottleneck"}).out ==
          run({"dist", pa, pb, "--metric", "prokhorov", "--f", "const:1"}).out);
  }
}

TEST_CASE("oracle flag agrees and respects the size cap") {
  for (const char* f : {"poly:0,1", "poly:0,3,2"}) {
    CHECK(run({"dist", data("shift_x.dgm"), data("shift_y.dgm"), "--metric", "prokhorov", "--f", f, "--oracle"}).out ==
          run({"dist", data("shift_x.dgm"), data("shift_y.dgm"), "--metric", "prokhorov", "--f", f}).out);
  }
  auto r = run({"dist", data("matrix/d00.dgm"), data("matrix/d01.dgm"), "--metric", "bottleneck", "--oracle"});
  CHECK((r.code == cli::kOk || r.code == cli::kInvalidSpec));
}

TEST_CASE("invalid metric specifications exit 3") {
  const std::string a = data("single_a.dgm"), b = data("single_b.dgm");
  const std::vector<std::vector<std::string>> bad = {
      {"dist", a, b, "--metric", "prokhorov", "--f", "const:0"},
      {"dist", a, b, "--metric", "prokhorov", "--f", "poly:1,1"},
      {"dist", a, b, "--metric", "prokhorov"},
      {"dist", a, b, "--metric", "prokhorov", "--f", "poly:0,1", "--k", "2"},
      {"dist", a, b, "--metric", "bottleneck", "--p", "2"},
      {"dist", a, b, "--metric", "kth-bottleneck"},
      {"dist", a, b, "--metric", "kth-bottleneck", "--k", "0"},
      {"dist", a, b, "--metric", "wasserstein"},
      {"dist", a, b, "--metric", "wasserstein", "--p", "0.5"},
      {"dist", a, b, "--metric", "euclid"},
      {"dist", a, b, "--metric", "bottleneck", "--ground-p", "0.3"},
      {"dist", a, "--metric", "bottleneck"},
      {"matrix", a, b, "--metric", "prokhorov", "--f", "const:2"},
      {"matrix", a, "--metric", "bottleneck"},
      {"check", a, b, "--p", "0.5"},
      {"frobnicate"},
      {},
  };
  for (const auto& args : bad) {
    std::string joined;
    for (const auto& s : args) joined += s + " ";
    CAPTURE(joined);
    CHECK(run(args).code == cli::kInvalidSpec);
  }
}

TEST_CASE("MetricSpec validation") {
  cli::MetricSpec spec;
  spec.kind = cli::MetricKind::prokhorov;
  CHECK_THROWS_AS(spec.validate(false), cli::SpecError);
  spec.f = ParamFunction::constant(2);
  CHECK_NOTHROW(spec.validate(false));
  CHECK_THROWS_AS(spec.validate(true), cli::SpecError);
  spec.f = ParamFunction::polynomial({0, 1});
  CHECK_NOTHROW(spec.validate(true));
  spec.p = 2;
  CHECK_THROWS_AS(spec.validate(false), cli::SpecError);
  CHECK(cli::parse_metric_kind("kth-bottleneck") == cli::MetricKind::kth_bottleneck);
  CHECK_THROWS_AS(cli::parse_metric_kind("nope"), cli::SpecError);
  CHECK(cli::format_value(1.0 / 3.0) == "0.333333333333");
  CHECK(cli::format_value(0.0) == "0");
}

TEST_CASE("matrix command") {
  TempDir tmp;
  const auto a = tmp.write("a.dgm", "0 4\n"), b = tmp.write("b.dgm", "1 5\n"), a2 = tmp.write("c.dgm", "0 4\n");
  auto r = run({"matrix", a, b, a2, "--metric", "prokhorov", "--f", "poly:0,1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "name,a.dgm,b.dgm,c.dgm\na.dgm,0,1,0\nb.dgm,1,0,1\nc.dgm,0,1,0\n");

  const auto t1 = run({"matrix", data("matrix"), "--metric", "bottleneck", "--threads", "1"});
  const auto t4 = run({"matrix", data("matrix"), "--metric", "bottleneck", "--threads", "4"});
  CHECK(t1.code == cli::kOk);
  CHECK(t1.out == t4.out);

  const auto bad = run({"matrix", a, data("bad.dgm"), "--metric", "bottleneck", "--out", (tmp.path() / "m.csv").string()});
  CHECK(bad.code == cli::kInputError);
  CHECK_FALSE(fs::exists(tmp.path() / "m.csv"));
}

TEST_CASE("distance_matrix is symmetric with a zero diagonal") {
  std::mt19937_64 rng(62);
  std::vector<PersistenceDiagram> ds;
  for (int i = 0; i < 7; ++i) ds.push_back(testing::random_diagram(rng, 0, 10));
  for (const char* metric : {"bottleneck", "prokhorov", "wasserstein"}) {
    cli::MetricSpec spec;
    spec.kind = cli::parse_metric_kind(metric);
    if (spec.kind == cli::MetricKind::prokhorov) spec.f = ParamFunction::polynomial({0, 3, 2});
    if (spec.kind == cli::MetricKind::wasserstein) spec.p = 2;
    const auto m1 = cli::distance_matrix(ds, spec, 1);
    const auto m3 = cli::distance_matrix(ds, spec, 3);
    CHECK(m1 == m3);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(m1[i][i] == 0.0);
      for (std::size_t j = 0; j < ds.size(); ++j) CHECK(m1[i][j] == m1[j][i]);
    }
  }
}

TEST_CASE("check command") {
  auto r = run({"check", data("single_a.dgm"), data("single_b.dgm")});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("VIOLATED") == std::string::npos);
  CHECK(r.out.find(" 0 violated") != std::string::npos);

  r = run({"check", data("shift_x.dgm"), data("shift_x.dgm"), "--triple"});
  CHECK(r.code == cli::kOk);

  r = run({"check", data("shift_x.dgm"), data("shift_y.dgm"), "--p", "1,2"});
  CHECK(r.code == cli::kOk);

  // A single point at diagonal distance 0.5: the size factor M^q + N - 1
  // drops below 1 and the Wasserstein-Prokhorov bound fails.
  TempDir tmp;
  const auto small = tmp.write("small.dgm", "0 1\n");
  r = run({"check", small, data("empty.dgm"), "--p", "1", "--q", "1", "--c", "1"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("VIOLATED  W_q^q <= pi_q^q") != std::string::npos);
}
