#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgauss/dataset.hpp"
#include "qgauss/estimation.hpp"
#include "qgauss/io.hpp"

namespace qgauss::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Files are rendered in memory and written only after every step succeeded.
struct PendingFile {
  fs::path path;
  std::string content;
};

void write_all(const fs::path& dir, const std::vector<PendingFile>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": cannot create output directory: " + ec.message());
  for (const auto& f : files) {
    std::ofstream out(dir / f.path, std::ios::binary);
    out << f.content;
    if (!out) throw DataError((dir / f.path).string() + ": write failed");
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return kExitSuccess;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

const fs::path& single_input(const RunConfig& config, const char* command) {
  if (config.inputs.size() != 1) {
    throw UsageError(std::string(command) + " expects exactly one --input path");
  }
  return config.inputs.front();
}

void validate_params(const QGaussianParams& params) {
  try {
    validate(params);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string power_law_csv(const char* x_name, const char* y_name, const std::vector<double>& xs,
                          const std::vector<double>& ys, const PowerLawFit& fit) {
  std::ostringstream s;
  s << x_name << ',' << y_name << ",fitted\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s << io::format_double(xs[i]) << ',' << io::format_double(ys[i]) << ',' << io::format_double(fit.predict(xs[i]))
      << '\n';
  }
  return s.str();
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.dt_ladder.empty()) throw UsageError("dt ladder is empty");
  for (std::size_t i = 0; i < config.dt_ladder.size(); ++i) {
    if (config.dt_ladder[i] < 1) throw UsageError("dt values must be positive");
    if (i > 0 && config.dt_ladder[i] <= config.dt_ladder[i - 1]) {
      throw UsageError("dt ladder must be strictly increasing");
    }
  }
  if (config.grid.count < 8) throw UsageError("grid count must be at least 8");
  if (!(config.grid.min > 0.0)) throw UsageError("grid minimum must be positive");
  if (config.grid.tail_count < 0) throw UsageError("grid tail count must be non-negative");
  if (config.grid.max && !(*config.grid.max > config.grid.min)) {
    throw UsageError("grid maximum must exceed the minimum");
  }
}

std::vector<std::int64_t> parse_dt_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string_view item(text.data() + start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError("invalid dt list '" + text + "'");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (config.inputs.empty()) throw UsageError("fit needs at least one --input price file");

    std::vector<PriceSeries> series;
    for (const auto& path : config.inputs) series.push_back(io::read_price_csv(path));

    std::vector<ScaleFitResult> fits;
    std::vector<PendingFile> files;
    for (const std::int64_t dt : config.dt_ladder) {
      std::vector<NormalizedReturns> parts;
      for (const auto& s : series) parts.push_back(normalize(log_returns(s, dt)));
      const NormalizedReturns pooled = pool(parts);
      const EmpiricalCCDF ccdf = empirical_ccdf(pooled, config.grid);
      ScaleFitResult fit = fit_qgaussian_ccdf(ccdf);
      fit.volatility = pooled.volatility;
      fits.push_back(fit);
      out << "dt=" << dt << " q=" << io::format_double(fit.q) << " beta=" << io::format_double(fit.beta)
          << (fit.converged ? "" : " (not converged)") << '\n';

      const QGaussianParams model{fit.q, fit.beta, 0.0};
      std::vector<double> fitted;
      for (const double x : ccdf.thresholds) fitted.push_back(ccdf_abs(model, x));
      const std::string stem = "ccdf_dt" + std::to_string(dt);
      if (config.format == OutputFormat::json) {
        json j = io::ccdf_to_json(ccdf, "pooled");
        j["ccdf_fitted"] = fitted;
        files.push_back({stem + ".json", j.dump(2) + "\n"});
      } else {
        std::ostringstream s;
        s << "x,ccdf_empirical,ccdf_fitted\n";
        for (std::size_t i = 0; i < ccdf.thresholds.size(); ++i) {
          s << io::format_double(ccdf.thresholds[i]) << ',' << io::format_double(ccdf.probabilities[i]) << ','
            << io::format_double(fitted[i]) << '\n';
        }
        files.push_back({stem + ".csv", s.str()});
      }

      std::ostringstream p;
      p << "x,pdf_numeric,pdf_model\n";
      for (const auto& d : numerical_pdf(ccdf)) {
        p << io::format_double(d.x) << ',' << io::format_double(d.density) << ','
          << io::format_double(2.0 * pdf(model, d.x)) << '\n';
      }
      files.push_back({"pdf_dt" + std::to_string(dt) + ".csv", p.str()});
    }

    if (config.format == OutputFormat::json) {
      files.push_back({"fits.json", io::fits_to_json(fits).dump(2) + "\n"});
    } else {
      std::ostringstream s;
      io::write_fits_csv(s, fits);
      files.push_back({"fits.csv", s.str()});
    }
    write_all(config.out_dir, files);
  });
}

int cmd_scaling(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto fits = io::read_fits(single_input(config, "scaling"));
    const ScalingReport report = scaling_report(fits);

    std::vector<double> dt;
    std::vector<double> qm1;
    std::vector<double> inv_beta;
    for (const auto& f : fits) {
      dt.push_back(static_cast<double>(f.dt));
      qm1.push_back(f.q - 1.0);
      inv_beta.push_back(1.0 / f.beta);
    }
    const json j{{"tau_fit", io::to_json(report.tau_fit)},
                 {"gamma_fit", io::to_json(report.gamma_fit)},
                 {"delta_fit", io::to_json(report.delta_fit)}};
    write_all(config.out_dir, {
                                  {"scaling.json", j.dump(2) + "\n"},
                                  {"scaling_tau.csv", power_law_csv("dt", "q_minus_1", dt, qm1, report.tau_fit)},
                                  {"scaling_gamma.csv", power_law_csv("dt", "inv_beta", dt, inv_beta, report.gamma_fit)},
                                  {"scaling_delta.csv",
                                   power_law_csv("q_minus_1", "inv_beta", qm1, inv_beta, report.delta_fit)},
                              });
    auto line = [&out](const char* name, const PowerLawFit& f) {
      out << name << " = " << io::format_double(f.exponent) << " +/- " << io::format_double(f.exponent_stderr)
          << " (amplitude " << io::format_double(f.amplitude) << ", r^2 " << io::format_double(f.r_squared) << ")\n";
    };
    line("tau", report.tau_fit);
    line("gamma", report.gamma_fit);
    line("delta", report.delta_fit);
  });
}

int cmd_table1(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ostringstream s;
    s << "dt,q,beta\n";
    for (const auto& row : published_scale_table()) {
      s << row.dt << ',' << two_decimals(row.q) << ',' << two_decimals(row.beta) << '\n';
    }
    write_all(config.out_dir, {{"table1.csv", s.str()}});
    out << (config.out_dir / "table1.csv").string() << '\n';
  });
}

int cmd_synth(const RunConfig& config, const SynthOptions& synth, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_params(synth.params);
    if (synth.params.mu != 0.0) throw UsageError("synth: mu must be 0");
    if (synth.n < 2) throw UsageError("synth: n must be at least 2");
    if (synth.step < 1) throw UsageError("synth: step must be positive");
    if (synth.id.empty()) throw UsageError("synth: id must not be empty");

    const auto draws = sample(synth.params, synth.n - 1, config.seed);
    std::vector<std::int64_t> t(synth.n);
    std::vector<double> lw(synth.n);
    lw[0] = std::log(100.0);
    for (std::size_t i = 0; i < synth.n; ++i) {
      t[i] = static_cast<std::int64_t>(i) * synth.step;
      if (i > 0) lw[i] = lw[i - 1] + draws[i - 1];
    }
    const auto series = PriceSeries::from_log_prices(synth.id, std::move(t), std::move(lw));
    std::ostringstream s;
    io::write_price_csv(s, series);
    const fs::path name = synth.id + ".csv";
    write_all(config.out_dir, {{name, s.str()}});
    out << (config.out_dir / name).string() << '\n';
  });
}

int cmd_pdfplot(const RunConfig& config, const QGaussianParams& params, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_params(params);
    const EmpiricalCCDF ccdf = io::read_ccdf(single_input(config, "pdfplot"));
    const auto density = numerical_pdf(ccdf);
    std::ostringstream s;
    s << "x,pdf_numeric,pdf_model\n";
    for (const auto& d : density) {
      s << io::format_double(d.x) << ',' << io::format_double(d.density) << ','
        << io::format_double(2.0 * pdf(params, d.x)) << '\n';
    }
    write_all(config.out_dir, {{"pdfplot.csv", s.str()}});
    out << (config.out_dir / "pdfplot.csv").string() << '\n';
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fit q-Gaussian exceedance distributions to absolute normalized returns across time scales"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file supplying defaults for the shared options");

  RunConfig config;
  std::vector<std::string> inputs;
  // Kept as text so that both "--dt 4,8" and a config entry "dt=4,8"
  // (which CLI11 splits into items) go through parse_dt_list.
  std::vector<std::string> dt_items{"4,8,16,30,60,120,240,390,780"};
  double grid_max = 0.0;
  std::string out_dir = ".";
  std::string format = "csv";

  app.add_option("--input", inputs, "Input path(s)");
  app.add_option("--dt", dt_items, "Comma-separated dt ladder in ticks")->expected(1, 64)->capture_default_str();
  app.add_option("--grid-min", config.grid.min, "Smallest threshold")->capture_default_str();
  app.add_option("--grid-max", grid_max, "Largest threshold (default: set by --grid-tail-count)");
  app.add_option("--grid-count", config.grid.count, "Number of log-spaced thresholds")->capture_default_str();
  app.add_option("--grid-tail-count", config.grid.tail_count,
                 "Without --grid-max, end the grid where this many |r| remain above it (0: at max |r|)")
      ->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  auto* fit = app.add_subcommand("fit", "Fit (q, beta) per dt to pooled price files");
  auto* scaling = app.add_subcommand("scaling", "Fit the tau, gamma and delta power laws to a fits table");
  auto* table1 = app.add_subcommand("table1", "Write the bundled published (dt, q, beta) table");
  auto* synth = app.add_subcommand("synth", "Write a price series with i.i.d. q-Gaussian log increments");
  auto* pdfplot = app.add_subcommand("pdfplot", "Numerical density of a ccdf file next to the model density");
  for (auto* sub : {fit, scaling, table1, synth, pdfplot}) sub->fallthrough();

  SynthOptions synth_opts;
  synth->add_option("--q", synth_opts.params.q, "Entropic index q")->required();
  synth->add_option("--beta", synth_opts.params.beta, "Scale parameter beta")->required();
  synth->add_option("--n", synth_opts.n, "Number of prices")->required();
  synth->add_option("--step", synth_opts.step, "Ticks between prices")->capture_default_str();
  synth->add_option("--id", synth_opts.id, "Output file stem")->capture_default_str();

  QGaussianParams plot_params;
  pdfplot->add_option("--q", plot_params.q, "Entropic index q")->required();
  pdfplot->add_option("--beta", plot_params.beta, "Scale parameter beta")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return kExitSuccess;
    }
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    std::string dt_text;
    for (const auto& item : dt_items) dt_text += (dt_text.empty() ? "" : ",") + item;
    config.dt_ladder = parse_dt_list(dt_text);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (app.count("--grid-max") > 0) config.grid.max = grid_max;
  config.inputs.assign(inputs.begin(), inputs.end());
  config.out_dir = out_dir;
  config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;

  if (fit->parsed()) return cmd_fit(config, out, err);
  if (scaling->parsed()) return cmd_scaling(config, out, err);
  if (table1->parsed()) return cmd_table1(config, out, err);
  if (synth->parsed()) return cmd_synth(config, synth_opts, out, err);
  return cmd_pdfplot(config, plot_params, out, err);
}

}  // namespace qgauss::cli
