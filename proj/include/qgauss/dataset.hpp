#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qgauss {

// (dt, q, beta) per time scale, as published for absolute normalized
// returns of the 100 largest US companies.
struct PublishedScaleRow {
  std::int64_t dt;
  double q;
  double beta;
};

std::span<const PublishedScaleRow> published_scale_table() noexcept;

// Default time-scale ladder, in ticks.
std::vector<std::int64_t> default_dt_ladder();

}  // namespace qgauss
