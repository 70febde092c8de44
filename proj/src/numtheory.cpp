#include "mondrian/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mondrian::numtheory {

namespace {

constexpr std::uint64_t kSegment = 1u << 17;

// Primes <= bound by a byte sieve; used for small prime lists only.
std::vector<std::uint32_t> simple_primes(std::uint64_t bound) {
  std::vector<std::uint32_t> primes;
  if (bound < 2) return primes;
  std::vector<char> composite(bound + 1, 0);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = 1;
  }
  return primes;
}

std::uint32_t checked_limit(std::uint64_t limit) {
  if (limit < 2) {
    throw std::invalid_argument("factor table limit must be >= 2, got " +
                                std::to_string(limit));
  }
  if (limit > 0xFFFFFFFEull) {
    throw std::invalid_argument("factor table limit exceeds 32-bit range");
  }
  return static_cast<std::uint32_t>(limit);
}

}  // namespace

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

FactorTable::FactorTable(std::uint32_t limit, std::vector<std::uint32_t> spf)
    : limit_(limit), spf_(std::move(spf)) {
  if (spf_.size() != static_cast<std::size_t>(limit_) + 1) {
    throw std::invalid_argument("spf array size does not match limit");
  }
}

void FactorTable::check_range(std::uint64_t n) const {
  if (n < 1 || n > limit_) {
    throw std::invalid_argument(std::to_string(n) +
                                " is outside the factor table range [1, " +
                                std::to_string(limit_) + "]");
  }
}

std::uint32_t FactorTable::spf(std::uint64_t m) const {
  if (m < 2) throw std::invalid_argument("spf is undefined below 2");
  check_range(m);
  return spf_[m];
}

std::vector<PrimePower> FactorTable::factorize(std::uint64_t n) const {
  check_range(n);
  std::vector<PrimePower> out;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

std::vector<std::uint32_t> FactorTable::primes_up_to(std::uint64_t bound) const {
  std::vector<std::uint32_t> out;
  const std::uint64_t top = std::min<std::uint64_t>(bound, limit_);
  for (std::uint64_t m = 2; m <= top; ++m) {
    if (spf_[m] == m) out.push_back(static_cast<std::uint32_t>(m));
  }
  return out;
}

FactorTable build_factor_table(std::uint64_t limit, int workers) {
  const std::uint32_t lim = checked_limit(limit);
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(lim) + 1, 0);
  const auto base = simple_primes(isqrt(lim));
  const std::int64_t segments =
      static_cast<std::int64_t>((lim - 1) / kSegment + 1);

  // Segments cover [2, lim] and are disjoint, so writes never race.
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, workers))
  for (std::int64_t s = 0; s < segments; ++s) {
    const std::uint64_t lo = 2 + static_cast<std::uint64_t>(s) * kSegment;
    const std::uint64_t hi = std::min<std::uint64_t>(lim, lo + kSegment - 1);
    for (const std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t m = std::max(p * p, (lo + p - 1) / p * p);
      for (; m <= hi; m += p) {
        if (spf[m] == 0) spf[m] = static_cast<std::uint32_t>(p);
      }
    }
    for (std::uint64_t m = lo; m <= hi; ++m) {
      if (spf[m] == 0) spf[m] = static_cast<std::uint32_t>(m);
    }
  }
  return FactorTable(lim, std::move(spf));
}

FactorTable build_factor_table_reference(std::uint64_t limit) {
  const std::uint32_t lim = checked_limit(limit);
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(lim) + 1, 0);
  for (std::uint64_t i = 2; i <= lim; ++i) {
    if (spf[i] != 0) continue;
    spf[i] = static_cast<std::uint32_t>(i);
    for (std::uint64_t j = i * i; j <= lim; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return FactorTable(lim, std::move(spf));
}

std::uint64_t tau(std::uint64_t n, const FactorTable& table) {
  std::uint64_t count = 1;
  for (const auto& pp : table.factorize(n)) count *= pp.exponent + 1;
  return count;
}

std::uint64_t tau_of_square(std::uint64_t n, const FactorTable& table) {
  std::uint64_t count = 1;
  for (const auto& pp : table.factorize(n)) count *= 2 * pp.exponent + 1;
  return count;
}

namespace {

std::vector<std::uint64_t> expand_divisors(const std::vector<PrimePower>& fac,
                                           unsigned scale) {
  std::vector<std::uint64_t> out{1};
  for (const auto& pp : fac) {
    const std::size_t prior = out.size();
    std::uint64_t power = 1;
    for (unsigned e = 1; e <= pp.exponent * scale; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < prior; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::uint64_t> divisors(std::uint64_t n, const FactorTable& table) {
  return expand_divisors(table.factorize(n), 1);
}

std::vector<std::uint64_t> divisors_of_square(std::uint64_t n,
                                              const FactorTable& table) {
  return expand_divisors(table.factorize(n), 2);
}

namespace {

// Walks every divisor d of n² together with τ(d).
template <typename Visit>
void for_each_square_divisor(const std::vector<PrimePower>& fac, std::size_t i,
                             std::uint64_t d, std::uint64_t tau_d, Visit&& visit) {
  if (i == fac.size()) {
    visit(d, tau_d);
    return;
  }
  std::uint64_t power = 1;
  for (unsigned e = 0; e <= 2 * fac[i].exponent; ++e) {
    for_each_square_divisor(fac, i + 1, d * power, tau_d * (e + 1), visit);
    power *= fac[i].prime;
  }
}

}  // namespace

WitnessReport witness_report(std::uint64_t n, const FactorTable& table) {
  if (n < 3) {
    throw std::invalid_argument("witness_report requires n >= 3, got " +
                                std::to_string(n));
  }
  if (n > kWitnessLimit) {
    throw std::range_error("witness_report: n = " + std::to_string(n) +
                           " exceeds the 64-bit overflow guard (n <= 10^6)");
  }
  const auto fac = table.factorize(n);
  const std::uint64_t square = n * n;
  std::uint64_t tau_n = 1;
  std::uint64_t tau_sq = 1;
  for (const auto& pp : fac) {
    tau_n *= pp.exponent + 1;
    tau_sq *= 2 * pp.exponent + 1;
  }

  WitnessReport report;
  report.n = n;
  report.p2 = true;
  report.p3 = true;
  for_each_square_divisor(fac, 0, 1, 1, [&](std::uint64_t d, std::uint64_t tau_d) {
    if (d == square) return;
    if (d * tau_d >= square && (!report.witness || d < *report.witness)) {
      report.witness = d;
    }
    if (d * tau_sq >= square) report.p2 = false;
    if (d * tau_n * tau_n >= square) report.p3 = false;
  });
  report.p1 = !report.witness.has_value();
  return report;
}

bool is_rough(std::uint64_t n, std::uint64_t z, const FactorTable& table) {
  if (n == 0) throw std::invalid_argument("is_rough requires n >= 1");
  if (n == 1) return true;
  if (n <= table.limit()) return table.spf(n) > z;
  const std::uint64_t root = isqrt(n);
  if (root > table.limit()) {
    throw std::invalid_argument(std::to_string(n) +
                                " needs primes beyond the factor table limit");
  }
  const std::uint64_t bound = std::min(z, root);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (table.is_prime(p) && n % p == 0) return false;
  }
  // Past the loop either spf(n) > z, or n is prime.
  return z < n;
}

std::uint64_t rough_count(std::uint64_t x, std::uint64_t z, int workers) {
  if (x == 0) return 0;
  const auto primes = simple_primes(std::min(z, x));
  const std::int64_t segments = static_cast<std::int64_t>((x - 1) / kSegment + 1);
  std::uint64_t total = 0;

#pragma omp parallel num_threads(std::max(1, workers))
  {
    std::vector<char> struck(kSegment);
#pragma omp for schedule(dynamic, 1) reduction(+ : total)
    for (std::int64_t s = 0; s < segments; ++s) {
      const std::uint64_t lo = 1 + static_cast<std::uint64_t>(s) * kSegment;
      const std::uint64_t hi = std::min(x, lo + kSegment - 1);
      const std::size_t len = hi - lo + 1;
      std::fill_n(struck.begin(), len, 0);
      for (const std::uint64_t p : primes) {
        if (p > hi) break;
        for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
          struck[m - lo] = 1;
        }
      }
      total += static_cast<std::uint64_t>(
          std::count(struck.begin(), struck.begin() + static_cast<std::ptrdiff_t>(len), 0));
    }
  }
  return total;
}

std::uint64_t rough_count_reference(std::uint64_t x, std::uint64_t z) {
  if (x == 0) return 0;
  std::vector<char> struck(x + 1, 0);
  for (const std::uint64_t p : simple_primes(std::min(z, x))) {
    for (std::uint64_t m = p; m <= x; m += p) struck[m] = 1;
  }
  return static_cast<std::uint64_t>(std::count(struck.begin() + 1, struck.end(), 0));
}

long double mertens_product(std::uint64_t z) {
  long double product = 1.0L;
  for (const std::uint64_t p : simple_primes(z)) {
    product *= 1.0L - 1.0L / static_cast<long double>(p);
  }
  return product;
}

double growth_g(double x) {
  if (!(x > std::numbers::e)) {
    throw std::invalid_argument("g(x) requires x > e");
  }
  return std::max(1.0, std::log(std::log(std::log(x))));
}

double tau_threshold(double x) {
  const double g = growth_g(x);
  return g * std::log(x) * std::log(std::log(x));
}

std::uint64_t compute_z(double x) {
  if (!(x > std::exp(std::numbers::e))) {
    throw std::invalid_argument("compute_z requires x > e^e");
  }
  const double root = tau_threshold(x);
  return static_cast<std::uint64_t>(std::floor(root * root));
}

std::uint64_t tau_summatory(std::uint64_t x) {
  const std::uint64_t s = isqrt(x);
  std::uint64_t sum = 0;
  for (std::uint64_t a = 1; a <= s; ++a) sum += x / a;
  return 2 * sum - s * s;
}

std::uint64_t census_excess_tau(std::uint64_t x, const FactorTable& table,
                                int workers) {
  if (x > table.limit()) {
    throw std::invalid_argument("census_excess_tau: x exceeds the factor table");
  }
  const double threshold = tau_threshold(static_cast<double>(x));
  std::uint64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count) \
    num_threads(std::max(1, workers))
  for (std::int64_t n = 3; n <= static_cast<std::int64_t>(x); ++n) {
    if (static_cast<double>(tau(static_cast<std::uint64_t>(n), table)) > threshold) {
      ++count;
    }
  }
  return count;
}

}  // namespace mondrian::numtheory
