#include "mondrian/tiling.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace mondrian::tiling {

namespace {

constexpr std::uint32_t kMaxVerifySide = 1u << 16;

}  // namespace

Rect canonical_rect(std::int64_t a, std::int64_t b) {
  if (a <= 0 || b <= 0) {
    throw std::invalid_argument("rect sides must be positive, got " +
                                std::to_string(a) + "x" + std::to_string(b));
  }
  if (a > kMaxVerifySide || b > kMaxVerifySide) {
    throw std::invalid_argument("rect side exceeds 2^16");
  }
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return Rect{lo, hi};
}

Tiling make_tiling(std::uint32_t n, std::vector<Placement> placements) {
  Tiling t{n, std::move(placements), 0};
  if (!t.placements.empty()) {
    const auto [lo, hi] = std::minmax_element(
        t.placements.begin(), t.placements.end(),
        [](const Placement& a, const Placement& b) { return a.rect.area() < b.rect.area(); });
    t.defect = hi->rect.area() - lo->rect.area();
  }
  return t;
}

std::string_view to_string(TilingFault fault) {
  switch (fault) {
    case TilingFault::None: return "none";
    case TilingFault::Overlap: return "overlap";
    case TilingFault::Gap: return "gap";
    case TilingFault::OutOfBounds: return "out-of-bounds";
    case TilingFault::CongruentPair: return "congruent-pair";
  }
  return "unknown";
}

Verification verify_tiling(const Tiling& tiling) {
  Verification v;
  if (!tiling.placements.empty()) {
    v.min_area = std::numeric_limits<std::uint64_t>::max();
    for (const auto& p : tiling.placements) {
      v.min_area = std::min(v.min_area, p.rect.area());
      v.max_area = std::max(v.max_area, p.rect.area());
    }
    v.defect = v.max_area - v.min_area;
  }

  const std::uint64_t n = tiling.n;
  if (n == 0 || n > kMaxVerifySide) {
    v.fault = TilingFault::OutOfBounds;
    return v;
  }
  for (const auto& p : tiling.placements) {
    if (p.rect.w == 0 || p.rect.w > p.rect.h ||
        std::uint64_t{p.x} + p.width() > n || std::uint64_t{p.y} + p.height() > n) {
      v.fault = TilingFault::OutOfBounds;
      return v;
    }
  }

  std::vector<char> grid(n * n, 0);
  for (const auto& p : tiling.placements) {
    for (std::uint64_t r = p.y; r < p.y + p.height(); ++r) {
      for (std::uint64_t c = p.x; c < p.x + p.width(); ++c) {
        char& cell = grid[r * n + c];
        if (cell) {
          v.fault = TilingFault::Overlap;
          return v;
        }
        cell = 1;
      }
    }
  }
  if (std::find(grid.begin(), grid.end(), 0) != grid.end()) {
    v.fault = TilingFault::Gap;
    return v;
  }

  std::set<Rect> seen;
  for (const auto& p : tiling.placements) {
    if (!seen.insert(p.rect).second) {
      v.fault = TilingFault::CongruentPair;
      return v;
    }
  }
  v.valid = true;
  return v;
}

Tiling scale_tiling(const Tiling& tiling, std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("scale factor must be positive");
  const auto check = verify_tiling(tiling);
  if (!check.valid) {
    throw std::invalid_argument("cannot scale an invalid tiling (" +
                                std::string(to_string(check.fault)) + ")");
  }
  if (std::uint64_t{tiling.n} * k > kMaxVerifySide) {
    throw std::invalid_argument("scaled square exceeds 2^16");
  }
  std::vector<Placement> scaled;
  scaled.reserve(tiling.placements.size());
  for (const auto& p : tiling.placements) {
    scaled.push_back({Rect{p.rect.w * k, p.rect.h * k}, p.x * k, p.y * k, p.rotated});
  }
  return make_tiling(tiling.n * k, std::move(scaled));
}

std::vector<Rect> rects_with_area(std::uint64_t d, std::uint32_t n) {
  std::vector<Rect> out;
  for (std::uint64_t w = 1; w * w <= d; ++w) {
    if (d % w != 0) continue;
    const std::uint64_t h = d / w;
    if (h <= n) out.push_back(Rect{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)});
  }
  return out;
}

namespace {

class PieceSetWalker {
 public:
  PieceSetWalker(std::uint32_t n, std::uint64_t lo, std::uint64_t hi,
                 const PieceSetFilter& filter, const PieceSetVisitor& visit)
      : lo_(lo), hi_(hi), filter_(filter), visit_(visit) {
    for (std::uint32_t w = 1; w <= n; ++w) {
      for (std::uint32_t h = w; h <= n; ++h) {
        const Rect r{w, h};
        if (r.area() < lo || r.area() > hi) continue;
        if (!filter.allow_whole_square && w == n && h == n) continue;
        candidates_.push_back(r);
      }
    }
    std::sort(candidates_.begin(), candidates_.end(), [](const Rect& a, const Rect& b) {
      if (a.area() != b.area()) return a.area() > b.area();
      return a < b;
    });
    suffix_.assign(candidates_.size() + 1, 0);
    for (std::size_t i = candidates_.size(); i-- > 0;) {
      suffix_[i] = suffix_[i + 1] + candidates_[i].area();
    }
    target_ = std::uint64_t{n} * n;
  }

  void run() {
    if (candidates_.empty()) return;
    // The hi-area block leads the sort order.
    if (filter_.require_hi && candidates_.front().area() != hi_) return;
    if (filter_.require_lo && candidates_.back().area() != lo_) return;
    walk(0, target_, false, false);
  }

 private:
  // Returns false once the visitor asks to stop.
  bool walk(std::size_t i, std::uint64_t remaining, bool has_lo, bool has_hi) {
    if (remaining == 0) {
      if (filter_.require_lo && !has_lo) return true;
      if (filter_.require_hi && !has_hi) return true;
      return visit_(chosen_);
    }
    if (i == candidates_.size() || suffix_[i] < remaining) return true;
    if (filter_.require_hi && !has_hi && candidates_[i].area() != hi_) return true;
    if (filter_.require_lo && !has_lo && remaining < lo_) return true;

    const Rect r = candidates_[i];
    if (r.area() <= remaining) {
      chosen_.push_back(r);
      const bool go = walk(i + 1, remaining - r.area(), has_lo || r.area() == lo_,
                           has_hi || r.area() == hi_);
      chosen_.pop_back();
      if (!go) return false;
    }
    return walk(i + 1, remaining, has_lo, has_hi);
  }

  std::uint64_t lo_;
  std::uint64_t hi_;
  const PieceSetFilter& filter_;
  const PieceSetVisitor& visit_;
  std::vector<Rect> candidates_;
  std::vector<std::uint64_t> suffix_;
  std::vector<Rect> chosen_;
  std::uint64_t target_ = 0;
};

}  // namespace

void enumerate_piece_sets(std::uint32_t n, std::uint64_t lo, std::uint64_t hi,
                          const PieceSetVisitor& visit, const PieceSetFilter& filter) {
  if (n == 0 || lo == 0 || lo > hi) return;
  PieceSetWalker(n, lo, hi, filter, visit).run();
}

std::vector<std::vector<Rect>> collect_piece_sets(std::uint32_t n, std::uint64_t lo,
                                                  std::uint64_t hi,
                                                  const PieceSetFilter& filter) {
  std::vector<std::vector<Rect>> out;
  enumerate_piece_sets(
      n, lo, hi,
      [&](const std::vector<Rect>& set) {
        out.push_back(set);
        return true;
      },
      filter);
  return out;
}

}  // namespace mondrian::tiling
