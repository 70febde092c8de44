#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mondrian::numtheory {

/// Euler-Mascheroni constant. The only source of γ in the project.
inline constexpr long double kEulerGamma = 0.577215664901532860606512090082L;

/// Largest n accepted by witness_report: keeps d·τ(d) below 2^64 for every d | n².
inline constexpr std::uint64_t kWitnessLimit = 1'000'000;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Smallest-prime-factor table over [2, limit]. Immutable once built, so a
/// single instance may be shared by any number of threads.
class FactorTable {
 public:
  FactorTable(std::uint32_t limit, std::vector<std::uint32_t> spf);

  std::uint32_t limit() const { return limit_; }

  /// Smallest prime factor of m, 2 <= m <= limit.
  std::uint32_t spf(std::uint64_t m) const;

  bool is_prime(std::uint64_t m) const { return m >= 2 && spf(m) == m; }

  /// Prime factorization of n (1 <= n <= limit), primes ascending.
  std::vector<PrimePower> factorize(std::uint64_t n) const;

  /// Primes up to min(bound, limit), ascending.
  std::vector<std::uint32_t> primes_up_to(std::uint64_t bound) const;

 private:
  void check_range(std::uint64_t n) const;

  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;  // indexed by m; entries 0 and 1 unused
};

/// Segmented, OpenMP-parallel construction. Output is identical for every
/// worker count.
FactorTable build_factor_table(std::uint64_t limit, int workers = 1);

/// Plain serial Eratosthenes. Reference for the parallel kernel.
FactorTable build_factor_table_reference(std::uint64_t limit);

std::uint64_t tau(std::uint64_t n, const FactorTable& table);

/// τ(n²) from the exponents of n: ∏(2e+1).
std::uint64_t tau_of_square(std::uint64_t n, const FactorTable& table);

/// Divisors of n in ascending order.
std::vector<std::uint64_t> divisors(std::uint64_t n, const FactorTable& table);

/// Divisors of n² in ascending order, generated from the factorization of n.
std::vector<std::uint64_t> divisors_of_square(std::uint64_t n,
                                              const FactorTable& table);

/// Outcome of scanning the proper divisors d of n² for d·τ(d) >= n².
///
/// p1: no such d exists (so no equal-area tiling of the n×n square can exist).
/// p2: d·τ(n²) < n² for every proper d.
/// p3: d·τ(n)² < n² for every proper d.
/// p3 implies p2 implies p1.
struct WitnessReport {
  std::uint64_t n = 0;
  std::optional<std::uint64_t> witness;  // smallest qualifying d
  bool p1 = false;
  bool p2 = false;
  bool p3 = false;
};

WitnessReport witness_report(std::uint64_t n, const FactorTable& table);

/// True iff every divisor of n greater than 1 exceeds z (1 is vacuously
/// rough). n may exceed the table limit while isqrt(n) <= limit, in which
/// case the table's primes up to min(z, isqrt(n)) are trial-divided.
bool is_rough(std::uint64_t n, std::uint64_t z, const FactorTable& table);

/// |{1 <= n <= x : n is z-rough}| by segmented sieving, OpenMP over segments.
std::uint64_t rough_count(std::uint64_t x, std::uint64_t z, int workers = 1);

/// Single-array serial sieve. Reference for rough_count.
std::uint64_t rough_count_reference(std::uint64_t x, std::uint64_t z);

/// ∏_{p <= z} (1 - 1/p).
long double mertens_product(std::uint64_t z);

/// The slowly growing factor g(x) = max(1, ln ln ln x). Requires x > e.
double growth_g(double x);

/// z = floor((g(x) · ln x · ln ln x)²). Requires x > e^e.
std::uint64_t compute_z(double x);

/// The τ cutoff g(x) · ln x · ln ln x shared by the excess-τ set and the
/// rough-and-small-τ census column. Requires x > e.
double tau_threshold(double x);

/// Σ_{n <= x} τ(n) by the hyperbola identity, O(√x).
std::uint64_t tau_summatory(std::uint64_t x);

/// #{3 <= n <= x : τ(n) > tau_threshold(x)}.
std::uint64_t census_excess_tau(std::uint64_t x, const FactorTable& table,
                                int workers = 1);

/// floor(sqrt(x)) exactly.
std::uint64_t isqrt(std::uint64_t x);

}  // namespace mondrian::numtheory
