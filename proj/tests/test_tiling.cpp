#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fixtures.hpp"
#include "mondrian/certificate.hpp"
#include "mondrian/tiling.hpp"

using namespace mondrian::tiling;

TEST_CASE("canonical_rect") {
  CHECK(canonical_rect(3, 2) == Rect{2, 3});
  CHECK(canonical_rect(2, 3) == Rect{2, 3});
  CHECK(canonical_rect(4, 4) == Rect{4, 4});
  CHECK_THROWS_AS(canonical_rect(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(canonical_rect(5, -1), std::invalid_argument);
}

TEST_CASE("rects_with_area") {
  CHECK(rects_with_area(12, 6) == std::vector<Rect>{{2, 6}, {3, 4}});
  CHECK(rects_with_area(9, 6) == std::vector<Rect>{{3, 3}});
  CHECK(rects_with_area(4, 6) == std::vector<Rect>{{1, 4}, {2, 2}});
  CHECK(rects_with_area(1, 1) == std::vector<Rect>{{1, 1}});
  CHECK(rects_with_area(7, 6).empty());
  // At most one rect per pair of complementary divisors.
  for (std::uint64_t d = 1; d <= 400; ++d) {
    std::uint64_t tau = 0;
    for (std::uint64_t k = 1; k <= d; ++k) tau += d % k == 0;
    REQUIRE(rects_with_area(d, 400).size() == (tau + 1) / 2);
  }
}

TEST_CASE("verify_tiling: figure-style 6x6 tiling") {
  const auto v = verify_tiling(fixtures::figure_six());
  CHECK(v.valid);
  CHECK(v.fault == TilingFault::None);
  CHECK(v.min_area == 4);
  CHECK(v.max_area == 9);
  CHECK(v.defect == 5);
}

TEST_CASE("verify_tiling: single whole-square piece") {
  const auto t = make_tiling(3, {{Rect{3, 3}, 0, 0, false}});
  const auto v = verify_tiling(t);
  CHECK(v.valid);
  CHECK(v.defect == 0);
}

TEST_CASE("verify_tiling: each tamper class is rejected") {
  SUBCASE("congruent pair") {
    // Two 1x2 dominoes cover a 2x2 square but are congruent.
    const auto t = make_tiling(2, {{Rect{1, 2}, 0, 0, false}, {Rect{1, 2}, 1, 0, false}});
    const auto v = verify_tiling(t);
    CHECK_FALSE(v.valid);
    CHECK(v.fault == TilingFault::CongruentPair);
  }
  for (const auto& [fault, tiling] : fixtures::tampered_figure_six()) {
    CAPTURE(to_string(fault));
    const auto v = verify_tiling(tiling);
    CHECK_FALSE(v.valid);
    CHECK(v.fault == fault);
  }
}

TEST_CASE("verify_tiling: degenerate input") {
  CHECK(verify_tiling(Tiling{0, {}, 0}).fault == TilingFault::OutOfBounds);
  CHECK(verify_tiling(Tiling{3, {}, 0}).fault == TilingFault::Gap);
  // A non-canonical rect (w > h) is never produced by the library.
  CHECK(verify_tiling(make_tiling(1, {{Rect{2, 1}, 0, 0, false}})).fault == TilingFault::OutOfBounds);
}

TEST_CASE("scale_tiling") {
  const auto strip = make_tiling(4, {{Rect{1, 4}, 0, 0, false}, {Rect{3, 4}, 1, 0, false}});
  REQUIRE(verify_tiling(strip).valid);
  CHECK(strip.defect == 8);

  CHECK(scale_tiling(strip, 1) == strip);

  const auto doubled = scale_tiling(strip, 2);
  CHECK(doubled.n == 8);
  CHECK(doubled.placements[0].rect == Rect{2, 8});
  CHECK(doubled.placements[1].rect == Rect{6, 8});
  const auto v = verify_tiling(doubled);
  CHECK(v.valid);
  CHECK(v.defect == 32);
  CHECK(doubled.defect == 32);

  CHECK_THROWS_AS(scale_tiling(strip, 0), std::invalid_argument);
  const auto broken = fixtures::tampered_figure_six().front().second;
  CHECK_THROWS_AS(scale_tiling(broken, 2), std::invalid_argument);
}

TEST_CASE("property: scaling multiplies the defect by k^2") {
  for (const auto& t : fixtures::valid_corpus()) {
    const auto base = verify_tiling(t);
    REQUIRE(base.valid);
    for (std::uint32_t k = 1; k <= 4; ++k) {
      const auto s = verify_tiling(scale_tiling(t, k));
      REQUIRE(s.valid);
      REQUIRE(s.defect == std::uint64_t{k} * k * base.defect);
    }
  }
  const auto zero = make_tiling(3, {{Rect{3, 3}, 0, 0, false}});
  for (std::uint32_t k = 1; k <= 4; ++k) CHECK(verify_tiling(scale_tiling(zero, k)).defect == 0);
}

TEST_CASE("enumerate_piece_sets: examples") {
  CHECK(collect_piece_sets(1, 1, 1) == std::vector<std::vector<Rect>>{{{1, 1}}});
  CHECK(collect_piece_sets(3, 9, 9) == std::vector<std::vector<Rect>>{{{3, 3}}});

  const auto sets = collect_piece_sets(6, 4, 9);
  auto contains = [&](std::vector<Rect> want) {
    std::sort(want.begin(), want.end());
    return std::any_of(sets.begin(), sets.end(), [&](std::vector<Rect> s) {
      std::sort(s.begin(), s.end());
      return s == want;
    });
  };
  CHECK(contains({{3, 3}, {2, 4}, {2, 3}, {1, 5}, {1, 4}, {2, 2}}));
  CHECK(contains({{3, 3}, {2, 4}, {1, 6}, {1, 5}, {1, 4}, {2, 2}}));
  // Areas 9+8+6+6+4+4 = 37, so this set can never be streamed for a 6x6 square.
  CHECK_FALSE(contains({{3, 3}, {2, 4}, {2, 3}, {1, 6}, {1, 4}, {2, 2}}));
}

TEST_CASE("enumerate_piece_sets: matches subset-sum brute force") {
  for (std::uint32_t n : {3u, 4u, 5u, 6u}) {
    for (std::uint64_t lo = 1; lo <= 8; lo += 3) {
      for (std::uint64_t hi = lo; hi <= std::uint64_t{n} * n; hi += 5) {
        std::vector<Rect> pool;
        for (std::uint32_t w = 1; w <= n; ++w)
          for (std::uint32_t h = w; h <= n; ++h)
            if (w * h >= lo && w * h <= hi) pool.push_back({w, h});
        if (pool.size() > 20) continue;
        std::set<std::vector<Rect>> brute;
        for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
          std::vector<Rect> s;
          std::uint64_t area = 0;
          for (std::size_t i = 0; i < pool.size(); ++i)
            if (mask >> i & 1) {
              s.push_back(pool[i]);
              area += pool[i].area();
            }
          if (area == std::uint64_t{n} * n) {
            std::sort(s.begin(), s.end());
            brute.insert(s);
          }
        }
        std::set<std::vector<Rect>> streamed;
        for (auto s : collect_piece_sets(n, lo, hi)) {
          for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i - 1].area() >= s[i].area());
          std::sort(s.begin(), s.end());
          REQUIRE(streamed.insert(s).second);
        }
        REQUIRE(streamed == brute);
      }
    }
  }
}

TEST_CASE("enumerate_piece_sets: order and early stop") {
  const auto sets = collect_piece_sets(6, 4, 12);
  REQUIRE(sets.size() > 2);
  for (std::size_t i = 1; i < sets.size(); ++i) {
    REQUIRE(sets[i - 1].front().area() >= sets[i].front().area());
  }
  int seen = 0;
  enumerate_piece_sets(6, 4, 12, [&](const std::vector<Rect>&) { return ++seen < 2; });
  CHECK(seen == 2);
}

TEST_CASE("enumerate_piece_sets: exact window filter") {
  PieceSetFilter f;
  f.require_lo = true;
  f.require_hi = true;
  f.allow_whole_square = false;
  for (const auto& s : collect_piece_sets(6, 4, 9, f)) {
    REQUIRE(s.front().area() == 9);
    REQUIRE(s.back().area() == 4);
  }
  CHECK(collect_piece_sets(3, 9, 9, f).empty());
}

TEST_CASE("certificate JSON round trip") {
  for (const auto& t : fixtures::valid_corpus()) {
    const auto text = certificate_string(t);
    const auto back = parse_certificate(text);
    REQUIRE(back == t);
    REQUIRE(certificate_string(back) == text);
  }
  const auto text = certificate_string(fixtures::figure_six());
  CHECK(text.rfind("{\"n\":6,\"defect\":5,\"pieces\":[{\"w\":1,\"h\":5,\"x\":0,\"y\":0,\"rot\":true}", 0) == 0);
}

TEST_CASE("certificate JSON rejects malformed input") {
  CHECK_THROWS_AS(parse_certificate("not json"), CertificateError);
  CHECK_THROWS_AS(parse_certificate("[]"), CertificateError);
  CHECK_THROWS_AS(parse_certificate(R"({"n":3,"pieces":[]})"), CertificateError);
  CHECK_THROWS_AS(parse_certificate(R"({"n":3,"defect":0,"pieces":[{"w":3,"h":2,"x":0,"y":0,"rot":false}]})"),
                  CertificateError);
  CHECK_THROWS_AS(parse_certificate(R"({"n":3,"defect":0,"pieces":[{"w":3,"h":3,"x":-1,"y":0,"rot":false}]})"),
                  CertificateError);
  CHECK_THROWS_AS(parse_certificate(R"({"n":3,"defect":0,"pieces":[{"w":3,"h":3,"x":0,"y":0,"rot":1}]})"),
                  CertificateError);
}
