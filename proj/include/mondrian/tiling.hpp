#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace mondrian::tiling {

/// Largest square side the search supports.
inline constexpr std::uint32_t kMaxSide = 64;

/// Integer-sided rectangle up to congruence: w <= h always.
struct Rect {
  std::uint32_t w = 0;
  std::uint32_t h = 0;

  std::uint64_t area() const { return std::uint64_t{w} * h; }
  bool is_square() const { return w == h; }

  friend auto operator<=>(const Rect&, const Rect&) = default;
};

Rect canonical_rect(std::int64_t a, std::int64_t b);

/// A rect placed on the board. (x, y) is the top-left cell, y grows
/// downward. rotated means the long side runs horizontally.
struct Placement {
  Rect rect;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  bool rotated = false;

  std::uint32_t width() const { return rotated ? rect.h : rect.w; }
  std::uint32_t height() const { return rotated ? rect.w : rect.h; }

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct Tiling {
  std::uint32_t n = 0;
  std::vector<Placement> placements;
  std::uint64_t defect = 0;

  friend bool operator==(const Tiling&, const Tiling&) = default;
};

/// Builds a tiling from placements and fills in the defect.
Tiling make_tiling(std::uint32_t n, std::vector<Placement> placements);

enum class TilingFault { None, Overlap, Gap, OutOfBounds, CongruentPair };

std::string_view to_string(TilingFault fault);

struct Verification {
  bool valid = false;
  TilingFault fault = TilingFault::None;
  std::uint64_t defect = 0;
  std::uint64_t min_area = 0;
  std::uint64_t max_area = 0;
};

/// Checks a claimed tiling from scratch on an explicit cell grid. Shares no
/// code with the search, so it serves as the oracle for every certificate.
Verification verify_tiling(const Tiling& tiling);

/// Multiplies every coordinate and side by k. Throws std::invalid_argument
/// for an invalid input tiling or k == 0.
Tiling scale_tiling(const Tiling& tiling, std::uint32_t k);

/// Rects with area d and long side <= n, ascending by short side.
std::vector<Rect> rects_with_area(std::uint64_t d, std::uint32_t n);

/// Optional restrictions on the enumerated piece sets.
struct PieceSetFilter {
  bool require_lo = false;       // some piece must have area exactly lo
  bool require_hi = false;       // some piece must have area exactly hi
  bool allow_whole_square = true;
};

using PieceSetVisitor = std::function<bool(const std::vector<Rect>&)>;

/// Streams every set of distinct rects fitting the n×n square with areas in
/// [lo, hi] and total area n². Sets arrive with the largest piece first,
/// ordered by descending largest area and then lexicographically. The
/// visitor returns false to stop early.
void enumerate_piece_sets(std::uint32_t n, std::uint64_t lo, std::uint64_t hi,
                          const PieceSetVisitor& visit,
                          const PieceSetFilter& filter = {});

/// Collecting convenience wrapper around the streaming form.
std::vector<std::vector<Rect>> collect_piece_sets(std::uint32_t n,
                                                  std::uint64_t lo,
                                                  std::uint64_t hi,
                                                  const PieceSetFilter& filter = {});

}  // namespace mondrian::tiling
