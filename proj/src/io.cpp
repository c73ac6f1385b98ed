#include "qgauss/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string_view>

#include "qgauss/errors.hpp"

namespace qgauss::io {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Minimal header-addressed CSV reader.
class CsvTable {
 public:
  CsvTable(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw DataError(source_ + ": empty file");
    // Tolerate a UTF-8 byte order mark.
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto names = split_fields(line);
    for (std::size_t i = 0; i < names.size(); ++i) columns_[std::string(names[i])] = i;
    width_ = names.size();
    in_ = &in;
  }

  std::optional<std::size_t> column(const std::string& name) const {
    const auto it = columns_.find(name);
    if (it == columns_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(const std::string& name) const {
    const auto c = column(name);
    if (!c) throw DataError(source_ + ": missing column '" + name + "'");
    return *c;
  }

  // Next non-blank row; false at end of input.
  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(*in_, row_)) {
      ++line_no_;
      if (trim(row_).empty()) continue;
      fields = split_fields(row_);
      if (fields.size() != width_) {
        fail("expected " + std::to_string(width_) + " fields, found " + std::to_string(fields.size()));
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  double number(std::string_view text, const char* what) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return v;
  }

  std::int64_t integer(std::string_view text, const char* what) const {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return v;
  }

 private:
  std::string source_;
  std::map<std::string, std::size_t> columns_;
  std::size_t width_ = 0;
  std::size_t line_no_ = 0;
  std::string row_;
  std::istream* in_ = nullptr;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open file");
  return in;
}

bool has_json_extension(const std::filesystem::path& path) { return path.extension() == ".json"; }

json parse_json_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_log_price(double log_price) {
  if (std::abs(log_price) < 700.0) return format_double(std::exp(log_price));
  // Outside double range: decimal mantissa and exponent from ln W directly.
  const double decimal = log_price / std::numbers::ln10;
  double exponent = std::floor(decimal);
  double mantissa = std::pow(10.0, decimal - exponent);
  if (mantissa >= 10.0) {
    mantissa /= 10.0;
    exponent += 1.0;
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, mantissa, std::chars_format::fixed, 16);
  std::string out(buf, end);
  out += 'e';
  out += std::to_string(static_cast<long long>(exponent));
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

bool parse_log_positive_decimal(std::string_view text, double& log_value) {
  text = trim(text);
  if (text.empty()) return false;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size()) {
    if (!(v > 0.0) || !std::isfinite(v)) return false;
    log_value = std::log(v);
    return true;
  }
  if (ec != std::errc::result_out_of_range) return false;
  const std::size_t e = text.find_first_of("eE");
  if (e == std::string_view::npos) return false;
  const std::string_view mant = text.substr(0, e);
  std::string_view expo = text.substr(e + 1);
  if (!expo.empty() && expo.front() == '+') expo.remove_prefix(1);
  double m = 0.0;
  std::int64_t x = 0;
  const auto rm = std::from_chars(mant.data(), mant.data() + mant.size(), m);
  const auto rx = std::from_chars(expo.data(), expo.data() + expo.size(), x);
  if (rm.ec != std::errc() || rm.ptr != mant.data() + mant.size()) return false;
  if (rx.ec != std::errc() || rx.ptr != expo.data() + expo.size() || expo.empty()) return false;
  if (!(m > 0.0) || !std::isfinite(m)) return false;
  log_value = std::log(m) + static_cast<double>(x) * std::numbers::ln10;
  return true;
}

PriceSeries parse_price_csv(std::istream& in, const std::string& id, const std::string& source) {
  CsvTable table(in, source);
  const std::size_t tcol = table.require("timestamp");
  const std::size_t pcol = table.require("price");
  std::vector<std::int64_t> timestamps;
  std::vector<double> logs;
  std::vector<std::string_view> f;
  while (table.next(f)) {
    timestamps.push_back(table.integer(f[tcol], "timestamp"));
    double lw = 0.0;
    if (!parse_log_positive_decimal(f[pcol], lw)) table.fail("price must be a positive decimal, got '" + std::string(f[pcol]) + "'");
    logs.push_back(lw);
  }
  try {
    return PriceSeries::from_log_prices(id, std::move(timestamps), std::move(logs));
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
}

PriceSeries read_price_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_price_csv(in, path.stem().string(), path.string());
}

void write_price_csv(std::ostream& out, const PriceSeries& series) {
  out << "timestamp,price\n";
  const auto& t = series.timestamps();
  const auto& lw = series.log_prices();
  for (std::size_t i = 0; i < series.size(); ++i) out << t[i] << ',' << format_log_price(lw[i]) << '\n';
}

void write_ccdf_csv(std::ostream& out, const EmpiricalCCDF& ccdf) {
  out << "x,ccdf,n_samples\n";
  for (std::size_t i = 0; i < ccdf.thresholds.size(); ++i) {
    out << format_double(ccdf.thresholds[i]) << ',' << format_double(ccdf.probabilities[i]) << ','
        << ccdf.n_samples << '\n';
  }
}

json ccdf_to_json(const EmpiricalCCDF& ccdf, const std::string& id) {
  return json{{"id", id}, {"dt", ccdf.dt}, {"x", ccdf.thresholds}, {"ccdf", ccdf.probabilities},
              {"n_samples", ccdf.n_samples}};
}

EmpiricalCCDF read_ccdf(const std::filesystem::path& path) {
  EmpiricalCCDF out;
  if (has_json_extension(path)) {
    const json j = parse_json_file(path);
    try {
      out.thresholds = j.at("x").get<std::vector<double>>();
      out.probabilities = j.at("ccdf").get<std::vector<double>>();
      out.n_samples = j.value("n_samples", std::size_t{0});
      out.dt = j.value("dt", std::int64_t{0});
    } catch (const json::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  } else {
    auto in = open_input(path);
    CsvTable table(in, path.string());
    const std::size_t xcol = table.require("x");
    auto pcol = table.column("ccdf");
    if (!pcol) pcol = table.require("ccdf_empirical");
    const auto ncol = table.column("n_samples");
    std::vector<std::string_view> f;
    while (table.next(f)) {
      out.thresholds.push_back(table.number(f[xcol], "x"));
      out.probabilities.push_back(table.number(f[*pcol], "ccdf"));
      if (ncol) out.n_samples = static_cast<std::size_t>(table.integer(f[*ncol], "n_samples"));
    }
  }
  if (out.thresholds.size() != out.probabilities.size()) {
    throw DataError(path.string() + ": x and ccdf arrays differ in length");
  }
  return out;
}

json to_json(const ScaleFitResult& fit) {
  return json{{"dt", fit.dt},           {"q", fit.q},
              {"beta", fit.beta},       {"residual", fit.residual},
              {"n_points", fit.n_points}, {"converged", fit.converged},
              {"volatility", fit.volatility}};
}

json to_json(const PowerLawFit& fit) {
  return json{{"exponent", fit.exponent},
              {"amplitude", fit.amplitude},
              {"exponent_stderr", fit.exponent_stderr},
              {"r_squared", fit.r_squared}};
}

void write_fits_csv(std::ostream& out, const std::vector<ScaleFitResult>& fits) {
  out << "dt,q,beta,residual,n_points,converged,volatility\n";
  for (const auto& f : fits) {
    out << f.dt << ',' << format_double(f.q) << ',' << format_double(f.beta) << ',' << format_double(f.residual)
        << ',' << f.n_points << ',' << (f.converged ? "true" : "false") << ',' << format_double(f.volatility)
        << '\n';
  }
}

json fits_to_json(const std::vector<ScaleFitResult>& fits) {
  json arr = json::array();
  for (const auto& f : fits) arr.push_back(to_json(f));
  return json{{"fits", arr}};
}

std::vector<ScaleFitResult> read_fits(const std::filesystem::path& path) {
  std::vector<ScaleFitResult> fits;
  if (has_json_extension(path)) {
    const json j = parse_json_file(path);
    const json& arr = j.is_object() && j.contains("fits") ? j.at("fits") : j;
    if (!arr.is_array()) throw DataError(path.string() + ": expected an array of fits");
    try {
      for (const auto& e : arr) {
        ScaleFitResult f;
        f.dt = e.at("dt").get<std::int64_t>();
        f.q = e.at("q").get<double>();
        f.beta = e.at("beta").get<double>();
        f.residual = e.value("residual", 0.0);
        f.n_points = e.value("n_points", std::size_t{0});
        f.converged = e.value("converged", true);
        f.volatility = e.value("volatility", 1.0);
        fits.push_back(f);
      }
    } catch (const json::exception& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    return fits;
  }

  auto in = open_input(path);
  CsvTable table(in, path.string());
  const std::size_t dcol = table.require("dt");
  const std::size_t qcol = table.require("q");
  const std::size_t bcol = table.require("beta");
  const auto rcol = table.column("residual");
  const auto ncol = table.column("n_points");
  const auto ccol = table.column("converged");
  const auto vcol = table.column("volatility");
  std::vector<std::string_view> f;
  while (table.next(f)) {
    ScaleFitResult r;
    r.dt = table.integer(f[dcol], "dt");
    r.q = table.number(f[qcol], "q");
    r.beta = table.number(f[bcol], "beta");
    if (rcol) r.residual = table.number(f[*rcol], "residual");
    if (ncol) r.n_points = static_cast<std::size_t>(table.integer(f[*ncol], "n_points"));
    if (ccol) {
      const std::string_view c = f[*ccol];
      if (c == "true" || c == "1") {
        r.converged = true;
      } else if (c == "false" || c == "0") {
        r.converged = false;
      } else {
        table.fail("invalid converged flag '" + std::string(c) + "'");
      }
    } else {
      r.converged = true;
    }
    if (vcol) r.volatility = table.number(f[*vcol], "volatility");
    fits.push_back(r);
  }
  return fits;
}

}  // namespace qgauss::io
