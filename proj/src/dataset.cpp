#include "qgauss/dataset.hpp"

#include <array>

namespace qgauss {
namespace {

constexpr std::array<PublishedScaleRow, 9> kPublished = {{
    {4, 1.53, 1.78},
    {8, 1.52, 1.67},
    {16, 1.48, 1.52},
    {30, 1.46, 1.42},
    {60, 1.45, 1.33},
    {120, 1.42, 1.25},
    {240, 1.39, 1.14},
    {390, 1.37, 1.10},
    {780, 1.35, 1.03},
}};

}  // namespace

std::span<const PublishedScaleRow> published_scale_table() noexcept { return kPublished; }

std::vector<std::int64_t> default_dt_ladder() {
  std::vector<std::int64_t> ladder;
  for (const auto& row : kPublished) ladder.push_back(row.dt);
  return ladder;
}

}  // namespace qgauss
