#pragma once

// File formats: price CSV input, empirical CCDF (CSV/JSON), fit tables
// (CSV/JSON) and power-law reports (JSON). All UTF-8, comma separated,
// '.' decimal point. Parse failures throw DataError naming the source
// and line.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgauss/estimation.hpp"
#include "qgauss/returns.hpp"

namespace qgauss::io {

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

// Reads the ln of a positive decimal, including values whose magnitude
// is outside double range (e.g. "3.2e+1200"). Returns false on bad text.
bool parse_log_positive_decimal(std::string_view text, double& log_value);

// Header must contain `timestamp` and `price`; other columns are ignored.
PriceSeries parse_price_csv(std::istream& in, const std::string& id, const std::string& source = "<stream>");
PriceSeries read_price_csv(const std::filesystem::path& path);
void write_price_csv(std::ostream& out, const PriceSeries& series);

void write_ccdf_csv(std::ostream& out, const EmpiricalCCDF& ccdf);
nlohmann::json ccdf_to_json(const EmpiricalCCDF& ccdf, const std::string& id);
// Accepts CSV with `x` and `ccdf` (or `ccdf_empirical`) columns and an
// optional `n_samples` column, or the JSON layout of ccdf_to_json.
EmpiricalCCDF read_ccdf(const std::filesystem::path& path);

nlohmann::json to_json(const ScaleFitResult& fit);
nlohmann::json to_json(const PowerLawFit& fit);

// `dt,q,beta,residual,n_points,converged,volatility`.
void write_fits_csv(std::ostream& out, const std::vector<ScaleFitResult>& fits);
nlohmann::json fits_to_json(const std::vector<ScaleFitResult>& fits);
// CSV needs at least `dt,q,beta`; JSON is an array of fit objects or
// an object with a "fits" array.
std::vector<ScaleFitResult> read_fits(const std::filesystem::path& path);

}  // namespace qgauss::io
