#pragma once

// Command implementations behind the `qgauss` executable. Each command
// returns a process exit status and reports diagnostics on `err`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qgauss/errors.hpp"
#include "qgauss/qgaussian.hpp"
#include "qgauss/returns.hpp"

namespace qgauss::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::int64_t> dt_ladder;
  GridSpec grid;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::csv;
};

// Throws UsageError on an empty or non-increasing ladder, non-positive
// dt, or fewer than 8 grid points.
void validate(const RunConfig& config);

// "4,8,16" -> {4, 8, 16}. Throws UsageError on malformed text.
std::vector<std::int64_t> parse_dt_list(const std::string& text);

struct SynthOptions {
  QGaussianParams params;
  std::size_t n = 0;          // number of prices
  std::int64_t step = 1;      // ticks between consecutive prices
  std::string id = "synth";   // output file stem
};

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_scaling(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_table1(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_synth(const RunConfig& config, const SynthOptions& synth, std::ostream& out, std::ostream& err);
int cmd_pdfplot(const RunConfig& config, const QGaussianParams& params, std::ostream& out, std::ostream& err);

// Full command-line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qgauss::cli
