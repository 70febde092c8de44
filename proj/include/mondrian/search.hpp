#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mondrian/numtheory.hpp"
#include "mondrian/tiling.hpp"

namespace mondrian::tiling {

/// Default node budget. One node is one placement attempted by the search.
inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

enum class SearchStatus { Found, Exhausted, BudgetExceeded };

struct CoverResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Tiling> tiling;
  std::uint64_t nodes = 0;
};

/// Backtracking exact cover of the n×n square by `pieces`, each used once in
/// either orientation. Always extends the partial tiling at the topmost,
/// then leftmost, empty cell, so the filled region stays a skyline of
/// column heights. Stops after `node_limit` placements.
///
/// Throws std::invalid_argument if the areas do not sum to n², a piece does
/// not fit, two pieces are congruent, or n exceeds kMaxSide.
CoverResult exact_cover_search(std::uint32_t n, std::span<const Rect> pieces,
                               std::uint64_t node_limit);

/// Unbudgeted form: a tiling, or nullopt when none exists.
std::optional<Tiling> exact_cover_tile(std::uint32_t n, std::span<const Rect> pieces);

/// Result of searching an ordered list of piece sets until the first one
/// tiles. `nodes` totals the placements charged, in list order, up to and
/// including the set that tiled.
struct BatchOutcome {
  std::optional<std::size_t> found_index;
  std::optional<Tiling> tiling;
  std::uint64_t nodes = 0;
  bool budget_exceeded = false;
};

/// Searches sets concurrently, then reduces in list order so the outcome
/// equals search_piece_sets_serial for every worker count.
BatchOutcome search_piece_sets(std::uint32_t n,
                               std::span<const std::vector<Rect>> sets,
                               std::uint64_t node_limit, int workers);

/// One set after another on the calling thread.
BatchOutcome search_piece_sets_serial(std::uint32_t n,
                                      std::span<const std::vector<Rect>> sets,
                                      std::uint64_t node_limit);

/// Thrown when solve_m runs out of nodes. M(n) lies in [lower_bound, upper_bound].
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint32_t n, std::uint64_t lower_bound, std::uint64_t upper_bound,
                 std::uint64_t nodes);

  std::uint32_t n;
  std::uint64_t lower_bound;
  std::uint64_t upper_bound;
  std::uint64_t nodes;
};

struct MResult {
  std::uint32_t n = 0;
  std::uint64_t value = 0;
  Tiling certificate;
  std::uint64_t nodes = 0;
};

/// Smallest defect over tilings of the n×n square by at least two pairwise
/// incongruent rects. Tries defect w = 0, 1, 2, ... and, for each w, the
/// windows [a, a + w] with a descending; the first window holding a tiling
/// whose smallest area is a and largest is a + w decides the answer.
MResult solve_m(std::uint32_t n, std::uint64_t node_budget = kDefaultNodeBudget,
                int workers = 1);

/// Searches the single window [lo, hi] for a tiling whose smallest area is
/// exactly lo and largest exactly hi (whole-square piece excluded).
std::optional<Tiling> find_tiling_in_window(std::uint32_t n, std::uint64_t lo,
                                            std::uint64_t hi,
                                            std::uint64_t node_budget = kDefaultNodeBudget,
                                            int workers = 1);

/// Defect of the best split of the square into full-height strips of
/// distinct widths. A cheap upper bound on M(n).
std::uint64_t strip_upper_bound(std::uint32_t n);

enum class PerfectVerdict { FilterExcluded, Exhausted, PerfectFound };

std::string_view to_string(PerfectVerdict verdict);

/// One equal-area area class examined by check_perfect.
struct PerfectAttempt {
  std::uint64_t d = 0;        // common area, a proper divisor of n²
  std::uint64_t pieces = 0;   // n² / d
  std::uint64_t classes = 0;  // |rects_with_area(d, n)|
  bool searched = false;      // false when pieces > classes
};

struct PerfectCheckOutcome {
  std::uint32_t n = 0;
  PerfectVerdict verdict = PerfectVerdict::Exhausted;
  std::optional<std::uint64_t> witness_d;  // smallest d with d·τ(d) >= n², if any
  std::optional<Tiling> certificate;
  std::uint64_t nodes_searched = 0;
  std::vector<PerfectAttempt> attempts;
};

class PerfectBudgetExceeded : public std::runtime_error {
 public:
  PerfectBudgetExceeded(std::uint32_t n, std::vector<std::uint64_t> unresolved,
                        std::uint64_t nodes);

  std::uint32_t n;
  std::vector<std::uint64_t> unresolved_d;
  std::uint64_t nodes;
};

/// Decides whether the n×n square has an equal-area tiling. The divisor
/// filter settles most n without search; the rest are searched exhaustively
/// over each admissible common area d.
PerfectCheckOutcome check_perfect(std::uint32_t n, std::uint64_t node_budget,
                                  const numtheory::FactorTable& table, int workers = 1);

}  // namespace mondrian::tiling
