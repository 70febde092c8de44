#pragma once

#include <utility>
#include <vector>

#include "mondrian/tiling.hpp"

namespace fixtures {

using mondrian::tiling::make_tiling;
using mondrian::tiling::Placement;
using mondrian::tiling::Rect;
using mondrian::tiling::Tiling;
using mondrian::tiling::TilingFault;

// Six pieces with areas 4..9 on a 6x6 board, drawn by hand:
//   AAAAAB
//   DDCCCB
//   DDCCCB
//   DDCCCB
//   EEEEFF
//   EEEEFF
inline Tiling figure_six() {
  return make_tiling(6, {{Rect{1, 5}, 0, 0, true},
                         {Rect{1, 4}, 5, 0, false},
                         {Rect{3, 3}, 2, 1, false},
                         {Rect{2, 3}, 0, 1, false},
                         {Rect{2, 4}, 0, 4, true},
                         {Rect{2, 2}, 4, 4, false}});
}

inline std::vector<std::pair<TilingFault, Tiling>> tampered_figure_six() {
  std::vector<std::pair<TilingFault, Tiling>> out;
  auto base = figure_six().placements;

  auto oob = base;
  oob[5].x = 5;
  out.emplace_back(TilingFault::OutOfBounds, make_tiling(6, oob));

  auto overlap = base;
  overlap[5].x = 3;
  out.emplace_back(TilingFault::Overlap, make_tiling(6, overlap));

  auto gap = base;
  gap.pop_back();
  out.emplace_back(TilingFault::Gap, make_tiling(6, gap));

  auto twin = base;
  twin[4] = Placement{Rect{2, 2}, 0, 4, false};
  twin.push_back(Placement{Rect{2, 2}, 2, 4, false});
  out.emplace_back(TilingFault::CongruentPair, make_tiling(6, twin));
  return out;
}

inline std::vector<Tiling> valid_corpus() {
  return {
      figure_six(),
      make_tiling(3, {{Rect{1, 3}, 0, 0, false}, {Rect{2, 3}, 1, 0, false}}),
      make_tiling(3, {{Rect{1, 3}, 0, 0, true}, {Rect{2, 2}, 0, 1, false}, {Rect{1, 2}, 2, 1, false}}),
      make_tiling(4, {{Rect{1, 4}, 0, 0, false}, {Rect{3, 4}, 1, 0, false}}),
      make_tiling(5, {{Rect{1, 5}, 0, 0, true}, {Rect{4, 5}, 0, 1, true}}),
  };
}

}  // namespace fixtures
