#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/commands.hpp"
#include "qgauss/dataset.hpp"
#include "qgauss/estimation.hpp"
#include "qgauss/io.hpp"

using namespace qgauss;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("qgauss_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qgauss");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_files(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

std::string synth(const fs::path& dir, const std::string& id, double q, double beta, std::size_t n, std::int64_t step,
                  std::uint64_t seed) {
  const auto r = run({"synth", "--q", io::format_double(q), "--beta", io::format_double(beta), "--n",
                      std::to_string(n), "--step", std::to_string(step), "--id", id, "--seed",
                      std::to_string(seed), "--out", dir.string()});
  REQUIRE(r.code == 0);
  return (dir / (id + ".csv")).string();
}

}  // namespace

TEST_CASE("run-config validation") {
  cli::RunConfig c;
  c.dt_ladder = {4, 8};
  CHECK_NOTHROW(cli::validate(c));
  c.grid.count = 7;
  CHECK_THROWS_AS(cli::validate(c), cli::UsageError);
  c.grid.count = 8;
  c.dt_ladder = {8, 4};
  CHECK_THROWS_AS(cli::validate(c), cli::UsageError);
  c.dt_ladder = {};
  CHECK_THROWS_AS(cli::validate(c), cli::UsageError);
  c.dt_ladder = {0, 4};
  CHECK_THROWS_AS(cli::validate(c), cli::UsageError);

  CHECK(cli::parse_dt_list("4, 8,16") == std::vector<std::int64_t>{4, 8, 16});
  CHECK_THROWS_AS(cli::parse_dt_list("4,,8"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_dt_list("4,x"), cli::UsageError);
}

TEST_SUITE("table1") {
  TEST_CASE("published rows, bit-identical on re-run") {
    TempDir dir;
    REQUIRE(run({"table1", "--out", dir.path.string()}).code == 0);
    const std::string first = slurp(dir.path / "table1.csv");
    CHECK(first ==
          "dt,q,beta\n4,1.53,1.78\n8,1.52,1.67\n16,1.48,1.52\n30,1.46,1.42\n60,1.45,1.33\n"
          "120,1.42,1.25\n240,1.39,1.14\n390,1.37,1.10\n780,1.35,1.03\n");
    REQUIRE(run({"table1", "--out", dir.path.string()}).code == 0);
    CHECK(slurp(dir.path / "table1.csv") == first);
  }
}

TEST_SUITE("scaling") {
  TEST_CASE("bundled table") {
    TempDir dir;
    REQUIRE(run({"table1", "--out", dir.path.string()}).code == 0);
    const auto r = run({"scaling", "--input", (dir.path / "table1.csv").string(), "--out", dir.path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("tau = -0.080") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir.path / "scaling.json"));
    CHECK(std::abs(j["tau_fit"]["exponent"].get<double>()) == doctest::Approx(0.0804).epsilon(0.01));
    CHECK(std::abs(j["gamma_fit"]["exponent"].get<double>()) == doctest::Approx(0.1048).epsilon(0.01));
    CHECK(std::abs(j["delta_fit"]["exponent"].get<double>()) == doctest::Approx(1.285).epsilon(0.01));
    CHECK(j["tau_fit"].contains("r_squared"));
    for (const char* f : {"scaling_tau.csv", "scaling_gamma.csv", "scaling_delta.csv"}) CHECK(fs::exists(dir.path / f));
    CHECK(slurp(dir.path / "scaling_tau.csv").rfind("dt,q_minus_1,fitted\n", 0) == 0);
  }

  TEST_CASE("exact power-law rows give zero stderr") {
    TempDir dir;
    std::ofstream(dir.path / "exact.csv") << "dt,q,beta\n"
                                           << "1,1.5,1\n"
                                           << "10," << io::format_double(1.0 + 0.5 * std::pow(10.0, -0.1)) << ","
                                           << io::format_double(std::pow(10.0, -0.2)) << "\n"
                                           << "100," << io::format_double(1.0 + 0.5 * std::pow(100.0, -0.1)) << ","
                                           << io::format_double(std::pow(100.0, -0.2)) << "\n";
    REQUIRE(run({"scaling", "--input", (dir.path / "exact.csv").string(), "--out", dir.path.string()}).code == 0);
    const auto j = nlohmann::json::parse(slurp(dir.path / "scaling.json"));
    CHECK(j["tau_fit"]["exponent_stderr"].get<double>() < 1e-10);
    CHECK(j["tau_fit"]["exponent"].get<double>() == doctest::Approx(-0.1));
    CHECK(j["gamma_fit"]["exponent"].get<double>() == doctest::Approx(0.2));
  }

  TEST_CASE("two rows are rejected") {
    TempDir dir;
    std::ofstream(dir.path / "two.csv") << "dt,q,beta\n4,1.53,1.78\n8,1.52,1.67\n";
    const auto out = dir.path / "out";
    const auto r = run({"scaling", "--input", (dir.path / "two.csv").string(), "--out", out.string()});
    CHECK(r.code == cli::kExitData);
    CHECK(r.err.find("three") != std::string::npos);
    CHECK(count_files(out) == 0);
  }
}

TEST_SUITE("synth and fit") {
  TEST_CASE("synth is seeded and validated") {
    TempDir dir;
    const auto a = dir.path / "a";
    const auto b = dir.path / "b";
    synth(a, "s", 1.5, 1.0, 5000, 1, 42);
    synth(b, "s", 1.5, 1.0, 5000, 1, 42);
    CHECK(slurp(a / "s.csv") == slurp(b / "s.csv"));
    synth(b, "t", 1.5, 1.0, 5000, 1, 43);
    CHECK(slurp(a / "s.csv") != slurp(b / "t.csv"));

    const auto bad = dir.path / "bad";
    CHECK(run({"synth", "--q", "1.5", "--beta", "1", "--n", "1", "--out", bad.string()}).code == cli::kExitUsage);
    CHECK(run({"synth", "--q", "3.5", "--beta", "1", "--n", "10", "--out", bad.string()}).code == cli::kExitUsage);
    CHECK(run({"synth", "--q", "1.5", "--beta", "-1", "--n", "10", "--out", bad.string()}).code == cli::kExitUsage);
    CHECK(count_files(bad) == 0);
  }

  TEST_CASE("two-company bundle on a two-rung ladder") {
    TempDir dir;
    const auto a = synth(dir.path, "AAA", 1.5, 1.0, 20000, 1, 1);
    const auto b = synth(dir.path, "BBB", 1.5, 2.0, 20000, 1, 2);
    const auto out = dir.path / "fit";
    const auto r = run({"fit", "--input", a, b, "--dt", "4,16", "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto fits = io::read_fits(out / "fits.csv");
    REQUIRE(fits.size() == 2);
    CHECK(fits[0].dt == 4);
    CHECK(fits[1].dt == 16);
    CHECK(count_files(out) == 5);  // fits table + ccdf and pdf files per dt
    CHECK(slurp(out / "ccdf_dt4.csv").rfind("x,ccdf_empirical,ccdf_fitted\n", 0) == 0);
    CHECK(slurp(out / "pdf_dt16.csv").rfind("x,pdf_numeric,pdf_model\n", 0) == 0);

    const auto jdir = dir.path / "fit_json";
    REQUIRE(run({"fit", "--input", a, b, "--dt", "4,16", "--format", "json", "--out", jdir.string()}).code == 0);
    CHECK(io::read_fits(jdir / "fits.json").size() == 2);
    CHECK(io::read_ccdf(jdir / "ccdf_dt4.json").thresholds.size() > 8);
  }

  TEST_CASE("round trip at dt = 1") {
    TempDir dir;
    const auto p = synth(dir.path, "walk", 1.5, 1.0, 1000000, 1, 7);
    const auto before = slurp(p);
    const auto out = dir.path / "fit";
    REQUIRE(run({"fit", "--input", p, "--dt", "1", "--out", out.string()}).code == 0);
    const auto fits = io::read_fits(out / "fits.csv");
    REQUIRE(fits.size() == 1);
    CHECK(fits[0].converged);
    CHECK(std::abs(fits[0].q - 1.5) < 0.02);
    // The table is in normalized units; divide out the volatility.
    CHECK(std::abs(fits[0].beta_in_return_units() - 1.0) < 0.1);
    CHECK(slurp(p) == before);  // input untouched
  }

  TEST_CASE("missing input leaves no output") {
    TempDir dir;
    const auto out = dir.path / "fit";
    const auto r = run({"fit", "--input", (dir.path / "nope.csv").string(), "--dt", "4", "--out", out.string()});
    CHECK(r.code == cli::kExitData);
    CHECK(r.err.find("nope.csv") != std::string::npos);
    CHECK_FALSE(fs::exists(out));
  }

  TEST_CASE("dt longer than a series is a data error with no output") {
    TempDir dir;
    const auto p = synth(dir.path, "short", 1.5, 1.0, 100, 1, 3);
    const auto out = dir.path / "fit";
    CHECK(run({"fit", "--input", p, "--dt", "4,200", "--out", out.string()}).code == cli::kExitData);
    CHECK_FALSE(fs::exists(out));
  }

  TEST_CASE("multi-scale corpus recovers the generating scaling exponents") {
    // One corpus per rung: prices dt ticks apart whose increments are
    // draws at that rung's published (q, beta).
    TempDir dir;
    std::vector<ScaleFitResult> fits;
    std::vector<ScaleFitResult> generating;
    std::uint64_t seed = 100;
    for (const auto& row : published_scale_table()) {
      const auto rung = dir.path / ("dt" + std::to_string(row.dt));
      std::vector<std::string> args{"fit", "--dt", std::to_string(row.dt), "--out", (rung / "fit").string(), "--input"};
      for (const char* id : {"c1", "c2"}) args.push_back(synth(rung, id, row.q, row.beta, 100001, row.dt, seed++));
      REQUIRE(run(args).code == 0);
      auto f = io::read_fits(rung / "fit" / "fits.csv").at(0);
      f.beta = f.beta_in_return_units();
      fits.push_back(f);
      generating.push_back({row.dt, row.q, row.beta});
    }
    for (std::size_t i = 1; i < fits.size(); ++i) {
      CHECK(fits[i].q <= fits[i - 1].q + 0.01);
    }
    const auto got = scaling_report(fits);
    const auto want = scaling_report(generating);
    CHECK(std::abs(got.tau_fit.exponent - want.tau_fit.exponent) <= 2.0 * got.tau_fit.exponent_stderr);
    CHECK(std::abs(got.gamma_fit.exponent - want.gamma_fit.exponent) <= 2.0 * got.gamma_fit.exponent_stderr);
    CHECK(std::abs(got.delta_fit.exponent - want.delta_fit.exponent) <= 2.0 * got.delta_fit.exponent_stderr);
  }
}

TEST_SUITE("pdfplot") {
  TEST_CASE("exact ccdf agrees with the folded model density") {
    TempDir dir;
    const QGaussianParams p{1.53, 1.78, 0.0};
    EmpiricalCCDF c;
    for (double x : log_grid(0.05, 20.0, 400)) {
      c.thresholds.push_back(x);
      c.probabilities.push_back(ccdf_abs(p, x));
    }
    std::ofstream(dir.path / "c.json") << io::ccdf_to_json(c, "exact").dump();
    REQUIRE(run({"pdfplot", "--q", "1.53", "--beta", "1.78", "--input", (dir.path / "c.json").string(), "--out",
                 dir.path.string()})
                .code == 0);
    std::ifstream in(dir.path / "pdfplot.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,pdf_numeric,pdf_model");
    int checked = 0;
    while (std::getline(in, line)) {
      double x = 0, num = 0, model = 0;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &num, &model) == 3);
      CHECK(num >= 0.0);
      if (x >= 0.1 && x <= 10.0) {
        CHECK(std::abs(num / model - 1.0) < 0.01);
        ++checked;
      }
    }
    CHECK(checked > 300);
  }

  TEST_CASE("three points give two rows") {
    TempDir dir;
    std::ofstream(dir.path / "c.csv") << "x,ccdf\n0.5,0.8\n1,0.5\n2,0.1\n";
    REQUIRE(run({"pdfplot", "--q", "1.5", "--beta", "1", "--input", (dir.path / "c.csv").string(), "--out",
                 dir.path.string()})
                .code == 0);
    CHECK(slurp(dir.path / "pdfplot.csv").size() > 0);
    std::ifstream in(dir.path / "pdfplot.csv");
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 3);
  }

  TEST_CASE("malformed input") {
    TempDir dir;
    std::ofstream(dir.path / "c.csv") << "x,ccdf\n0.5,0.8\n1,zz\n2,0.1\n";
    const auto out = dir.path / "out";
    CHECK(run({"pdfplot", "--q", "1.5", "--beta", "1", "--input", (dir.path / "c.csv").string(), "--out", out.string()})
              .code == cli::kExitData);
    CHECK_FALSE(fs::exists(out / "pdfplot.csv"));
  }
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"fit", "--dt", "8,4", "--input", "x.csv"}).code == cli::kExitUsage);
  CHECK(run({"table1", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitSuccess);
}

TEST_CASE("config file supplies defaults, flags override") {
  TempDir dir;
  const auto p = synth(dir.path, "walk", 1.5, 1.0, 20000, 1, 5);
  const auto cfg = dir.path / "run.ini";
  std::ofstream(cfg) << "dt=4,8\ngrid-count=20\nout=" << (dir.path / "from_config").string() << "\n";
  REQUIRE(run({"fit", "--config", cfg.string(), "--input", p}).code == 0);
  const auto fits = io::read_fits(dir.path / "from_config" / "fits.csv");
  REQUIRE(fits.size() == 2);
  CHECK(fits[1].dt == 8);
  CHECK(fits[0].n_points <= 20);

  REQUIRE(run({"fit", "--config", cfg.string(), "--input", p, "--dt", "2", "--out", (dir.path / "flag").string()})
              .code == 0);
  const auto over = io::read_fits(dir.path / "flag" / "fits.csv");
  REQUIRE(over.size() == 1);
  CHECK(over[0].dt == 2);
}
