#include "mondrian/search.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <set>
#include <string>

namespace mondrian::tiling {

namespace {

void validate_pieces(std::uint32_t n, std::span<const Rect> pieces) {
  if (n == 0 || n > kMaxSide) {
    throw std::invalid_argument("square side must be in [1, " + std::to_string(kMaxSide) +
                                "], got " + std::to_string(n));
  }
  std::uint64_t total = 0;
  std::set<Rect> seen;
  for (const Rect& r : pieces) {
    if (r.w == 0 || r.w > r.h) {
      throw std::invalid_argument("piece is not a canonical rect");
    }
    if (r.h > n) {
      throw std::invalid_argument("piece " + std::to_string(r.w) + "x" +
                                  std::to_string(r.h) + " does not fit in " +
                                  std::to_string(n) + "x" + std::to_string(n));
    }
    if (!seen.insert(r).second) {
      throw std::invalid_argument("pieces must be pairwise incongruent");
    }
    total += r.area();
  }
  if (total != std::uint64_t{n} * n) {
    throw std::invalid_argument("piece areas sum to " + std::to_string(total) +
                                ", expected " + std::to_string(std::uint64_t{n} * n));
  }
}

// Filled cells always form a skyline: placing a piece whose top-left corner
// is the first empty cell in row-major order keeps every column filled as a
// prefix from the top. The first empty cell is then the leftmost column of
// minimum height, and the run of equal-height columns starting there must
// be split exactly among the tops of the pieces placed into it.
class SkylineSearch {
 public:
  SkylineSearch(std::uint32_t n, std::span<const Rect> pieces, std::uint64_t limit)
      : n_(n), pieces_(pieces.begin(), pieces.end()), used_(pieces.size(), 0), limit_(limit) {
    placed_.reserve(pieces.size());
  }

  CoverResult run() {
    CoverResult result;
    const bool found = descend();
    result.nodes = nodes_;
    if (found) {
      result.status = SearchStatus::Found;
      result.tiling = make_tiling(n_, placed_);
    } else {
      result.status = exceeded_ ? SearchStatus::BudgetExceeded : SearchStatus::Exhausted;
    }
    return result;
  }

 private:
  __extension__ typedef unsigned __int128 Bits;

  bool descend() {
    std::uint32_t row = n_;
    std::uint32_t col = 0;
    for (std::uint32_t c = 0; c < n_; ++c) {
      if (heights_[c] < row) {
        row = heights_[c];
        col = c;
      }
    }
    if (row == n_) return true;

    std::uint32_t run = 1;
    while (col + run < n_ && heights_[col + run] == row) ++run;
    const std::uint32_t room = n_ - row;

    // Can the run width be written as a sum of distinct remaining pieces'
    // horizontal extents? If not, this branch is dead.
    const Bits window = (Bits{1} << (run + 1)) - 1;
    Bits reach = 1;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (used_[i]) continue;
      const Rect& p = pieces_[i];
      Bits next = reach;
      if (p.h <= room && p.w <= run) next |= reach << p.w;
      if (!p.is_square() && p.w <= room && p.h <= run) next |= reach << p.h;
      reach = next & window;
    }
    if (((reach >> run) & 1) == 0) return false;

    const bool root = placed_.empty();
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (used_[i]) continue;
      const Rect& p = pieces_[i];
      for (int orient = 0; orient < 2; ++orient) {
        // The corner piece keeps its upright orientation: transposing a
        // tiling about the main diagonal fixes the corner and swaps it.
        if (orient == 1 && (p.is_square() || root)) break;
        const bool rotated = orient == 1;
        const std::uint32_t width = rotated ? p.h : p.w;
        const std::uint32_t height = rotated ? p.w : p.h;
        if (width > run || height > room) continue;
        if (nodes_ == limit_) {
          exceeded_ = true;
          return false;
        }
        ++nodes_;

        used_[i] = 1;
        placed_.push_back({p, col, row, rotated});
        for (std::uint32_t c = col; c < col + width; ++c) heights_[c] += height;
        if (descend()) return true;
        for (std::uint32_t c = col; c < col + width; ++c) heights_[c] -= height;
        placed_.pop_back();
        used_[i] = 0;
        if (exceeded_) return false;
      }
    }
    return false;
  }

  std::uint32_t n_;
  std::vector<Rect> pieces_;
  std::vector<char> used_;
  std::array<std::uint32_t, kMaxSide> heights_{};
  std::vector<Placement> placed_;
  std::uint64_t limit_;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
};

// Pieces in descending area order; big pieces first prune fastest.
std::vector<Rect> search_order(std::span<const Rect> pieces) {
  std::vector<Rect> ordered(pieces.begin(), pieces.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Rect& a, const Rect& b) { return a.area() > b.area(); });
  return ordered;
}

CoverResult run_search(std::uint32_t n, std::span<const Rect> pieces, std::uint64_t limit) {
  const auto ordered = search_order(pieces);
  return SkylineSearch(n, ordered, limit).run();
}

}  // namespace

CoverResult exact_cover_search(std::uint32_t n, std::span<const Rect> pieces,
                               std::uint64_t node_limit) {
  validate_pieces(n, pieces);
  return run_search(n, pieces, node_limit);
}

std::optional<Tiling> exact_cover_tile(std::uint32_t n, std::span<const Rect> pieces) {
  auto result = exact_cover_search(n, pieces, std::numeric_limits<std::uint64_t>::max());
  return std::move(result.tiling);
}

BatchOutcome search_piece_sets_serial(std::uint32_t n,
                                      std::span<const std::vector<Rect>> sets,
                                      std::uint64_t node_limit) {
  BatchOutcome out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto r = exact_cover_search(n, sets[i], node_limit - out.nodes);
    out.nodes += r.nodes;
    if (r.status == SearchStatus::BudgetExceeded) {
      out.budget_exceeded = true;
      return out;
    }
    if (r.status == SearchStatus::Found) {
      out.found_index = i;
      out.tiling = std::move(r.tiling);
      return out;
    }
  }
  return out;
}

BatchOutcome search_piece_sets(std::uint32_t n, std::span<const std::vector<Rect>> sets,
                               std::uint64_t node_limit, int workers) {
  workers = std::max(1, workers);
  if (workers == 1) return search_piece_sets_serial(n, sets, node_limit);
  for (const auto& set : sets) validate_pieces(n, set);

  BatchOutcome out;
  const std::size_t batch = static_cast<std::size_t>(workers) * 4;
  std::vector<CoverResult> results;
  for (std::size_t start = 0; start < sets.size(); start += batch) {
    const std::size_t count = std::min(batch, sets.size() - start);
    const std::uint64_t cap = node_limit - out.nodes;
    results.assign(count, CoverResult{});

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      const auto k = static_cast<std::size_t>(i);
      results[k] = run_search(n, sets[start + k], cap);
    }

    // Replay in list order. A search that needed more nodes than remained
    // at its serial turn would have stopped there, so it counts as exceeded.
    for (std::size_t k = 0; k < count; ++k) {
      const std::uint64_t remaining = node_limit - out.nodes;
      auto& r = results[k];
      if (r.status == SearchStatus::BudgetExceeded || r.nodes > remaining) {
        out.nodes = node_limit;
        out.budget_exceeded = true;
        return out;
      }
      out.nodes += r.nodes;
      if (r.status == SearchStatus::Found) {
        out.found_index = start + k;
        out.tiling = std::move(r.tiling);
        return out;
      }
    }
  }
  return out;
}

BudgetExceeded::BudgetExceeded(std::uint32_t n_, std::uint64_t lower, std::uint64_t upper,
                               std::uint64_t nodes_)
    : std::runtime_error("node budget exhausted for n = " + std::to_string(n_) +
                         "; M(n) in [" + std::to_string(lower) + ", " +
                         std::to_string(upper) + "]"),
      n(n_),
      lower_bound(lower),
      upper_bound(upper),
      nodes(nodes_) {}

namespace {

// Buffers piece sets in generation order and searches them in batches
// against one shared node budget.
class BatchedSearch {
 public:
  BatchedSearch(std::uint32_t n, std::uint64_t budget, int workers)
      : n_(n), budget_(budget), workers_(std::max(1, workers)) {}

  // Returns false when the caller should stop producing sets.
  bool push(const std::vector<Rect>& set) {
    pending_.push_back(set);
    if (pending_.size() >= flush_size()) flush();
    return !found_ && !exceeded_;
  }

  void flush() {
    if (pending_.empty() || found_ || exceeded_) {
      pending_.clear();
      return;
    }
    auto out = search_piece_sets(n_, pending_, budget_ - used_, workers_);
    pending_.clear();
    used_ += out.nodes;
    if (out.budget_exceeded) exceeded_ = true;
    if (out.tiling) found_ = std::move(out.tiling);
  }

  bool exceeded() const { return exceeded_; }
  const std::optional<Tiling>& found() const { return found_; }
  std::uint64_t used() const { return used_; }

 private:
  std::size_t flush_size() const { return static_cast<std::size_t>(workers_) * 16; }

  std::uint32_t n_;
  std::uint64_t budget_;
  int workers_;
  std::uint64_t used_ = 0;
  std::vector<std::vector<Rect>> pending_;
  std::optional<Tiling> found_;
  bool exceeded_ = false;
};

void search_window(BatchedSearch& search, std::uint32_t n, std::uint64_t lo, std::uint64_t hi) {
  PieceSetFilter filter;
  filter.require_lo = true;
  filter.require_hi = true;
  filter.allow_whole_square = false;
  enumerate_piece_sets(
      n, lo, hi, [&](const std::vector<Rect>& set) { return search.push(set); }, filter);
}

void check_side(std::uint32_t n) {
  if (n < 3 || n > kMaxSide) {
    throw std::invalid_argument("square side must be in [3, " + std::to_string(kMaxSide) +
                                "], got " + std::to_string(n));
  }
}

}  // namespace

std::uint64_t strip_upper_bound(std::uint32_t n) {
  // Best spread over partitions of n into at least two distinct parts.
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint32_t> parts;
  auto walk = [&](auto&& self, std::uint32_t next, std::uint32_t left) -> void {
    if (left == 0) {
      if (parts.size() >= 2) best = std::min<std::uint64_t>(best, parts.back() - parts.front());
      return;
    }
    for (std::uint32_t p = next; p <= left; ++p) {
      parts.push_back(p);
      self(self, p + 1, left - p);
      parts.pop_back();
    }
  };
  walk(walk, 1, n);
  return best * n;
}

MResult solve_m(std::uint32_t n, std::uint64_t node_budget, int workers) {
  check_side(n);
  const std::uint64_t square = std::uint64_t{n} * n;
  const std::uint64_t largest = square - n;  // n×(n-1)
  const std::uint64_t ceiling = strip_upper_bound(n);

  BatchedSearch search(n, node_budget, workers);
  for (std::uint64_t w = 0; w <= ceiling; ++w) {
    if (w > largest - 1) break;
    const std::uint64_t top = std::min(square / 2, largest - w);
    for (std::uint64_t a = top; a >= 1 && !search.found() && !search.exceeded(); --a) {
      search_window(search, n, a, a + w);
    }
    search.flush();
    if (search.exceeded()) throw BudgetExceeded(n, w, ceiling, search.used());
    if (search.found()) {
      return MResult{n, w, *search.found(), search.used()};
    }
  }
  throw std::logic_error("no tiling found up to the strip bound for n = " + std::to_string(n));
}

std::optional<Tiling> find_tiling_in_window(std::uint32_t n, std::uint64_t lo, std::uint64_t hi,
                                            std::uint64_t node_budget, int workers) {
  check_side(n);
  if (lo == 0 || lo > hi) throw std::invalid_argument("window must satisfy 1 <= lo <= hi");
  BatchedSearch search(n, node_budget, workers);
  search_window(search, n, lo, hi);
  search.flush();
  if (search.exceeded()) throw BudgetExceeded(n, 0, strip_upper_bound(n), search.used());
  return search.found();
}

std::string_view to_string(PerfectVerdict verdict) {
  switch (verdict) {
    case PerfectVerdict::FilterExcluded: return "FilterExcluded";
    case PerfectVerdict::Exhausted: return "Exhausted";
    case PerfectVerdict::PerfectFound: return "PerfectFound";
  }
  return "unknown";
}

PerfectBudgetExceeded::PerfectBudgetExceeded(std::uint32_t n_, std::vector<std::uint64_t> unresolved,
                                             std::uint64_t nodes_)
    : std::runtime_error("node budget exhausted in perfect check for n = " + std::to_string(n_) +
                         " with " + std::to_string(unresolved.size()) + " unresolved areas"),
      n(n_),
      unresolved_d(std::move(unresolved)),
      nodes(nodes_) {}

namespace {

std::uint64_t tau_of_divisor(std::uint64_t d, const std::vector<numtheory::PrimePower>& fac) {
  std::uint64_t count = 1;
  for (const auto& pp : fac) {
    unsigned e = 0;
    while (d % pp.prime == 0) {
      d /= pp.prime;
      ++e;
    }
    count *= e + 1;
  }
  return count;
}

// Streams the k-subsets of items in lexicographic index order.
template <typename Visit>
bool for_each_subset(const std::vector<Rect>& items, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<Rect> chosen(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) chosen[i] = items[idx[i]];
    if (!visit(chosen)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == items.size() - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

PerfectCheckOutcome check_perfect(std::uint32_t n, std::uint64_t node_budget,
                                  const numtheory::FactorTable& table, int workers) {
  check_side(n);
  const auto report = numtheory::witness_report(n, table);
  PerfectCheckOutcome outcome;
  outcome.n = n;
  if (report.p1) {
    outcome.verdict = PerfectVerdict::FilterExcluded;
    return outcome;
  }
  outcome.witness_d = report.witness;

  const std::uint64_t square = std::uint64_t{n} * n;
  const auto fac = table.factorize(n);
  std::vector<std::uint64_t> candidates;
  for (const std::uint64_t d : numtheory::divisors_of_square(n, table)) {
    if (d != square && d * tau_of_divisor(d, fac) >= square) candidates.push_back(d);
  }

  BatchedSearch search(n, node_budget, workers);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::uint64_t d = candidates[i];
    const auto rects = rects_with_area(d, n);
    PerfectAttempt attempt{d, square / d, rects.size(), false};
    if (attempt.pieces <= attempt.classes) {
      attempt.searched = true;
      for_each_subset(rects, attempt.pieces,
                      [&](const std::vector<Rect>& set) { return search.push(set); });
      search.flush();
    }
    outcome.attempts.push_back(attempt);
    if (search.exceeded()) {
      throw PerfectBudgetExceeded(
          n, std::vector<std::uint64_t>(candidates.begin() + static_cast<std::ptrdiff_t>(i),
                                        candidates.end()),
          search.used());
    }
    if (search.found()) {
      outcome.verdict = PerfectVerdict::PerfectFound;
      outcome.certificate = search.found();
      outcome.nodes_searched = search.used();
      return outcome;
    }
  }
  outcome.verdict = PerfectVerdict::Exhausted;
  outcome.nodes_searched = search.used();
  return outcome;
}

}  // namespace mondrian::tiling
