#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mondrian/numtheory.hpp"

namespace mondrian::census {

/// Counts over n in [3, x] for each link of the chain
///   z-rough with small τ  =>  p3  =>  p2  =>  p1  =>  M(n) != 0
/// along with the two asymptotic reference values.
///
/// count_rough covers [3, x]; the library primitive rough_count covers
/// [1, x], so the two differ by the contribution of 1 (and of 2 when z < 2).
struct CensusRecord {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::uint64_t count_p1 = 0;
  std::uint64_t count_p2 = 0;
  std::uint64_t count_p3 = 0;
  std::uint64_t count_rough_and_small_tau = 0;
  std::uint64_t count_rough = 0;
  std::uint64_t count_excess_tau = 0;
  double theorem_rhs = 0;  // (e^-γ / 2) x / ln ln x
  double mertens_rhs = 0;  // e^-γ x / ln z
  long double euler_gamma = numtheory::kEulerGamma;

  bool chain_holds() const {
    return count_rough_and_small_tau <= count_p3 && count_p3 <= count_p2 &&
           count_p2 <= count_p1;
  }
};

/// A broken chain inclusion or a disagreement between two routes to the
/// same count. Never expected; the CLI maps it to exit status 3.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// OpenMP over blocks of n; per-block counts are summed in block order.
/// Requires 16 <= x <= min(table.limit(), kWitnessLimit).
CensusRecord run_chain_census(std::uint64_t x, const numtheory::FactorTable& table,
                              int workers = 1);

/// Same census on one thread. Reference for the parallel kernel.
CensusRecord run_chain_census_serial(std::uint64_t x, const numtheory::FactorTable& table);

inline constexpr const char* kCensusCsvHeader =
    "x,z,count_p1,count_p2,count_p3,count_rough_small_tau,count_rough,count_excess_tau,"
    "theorem_rhs,mertens_rhs";

std::string census_csv_row(const CensusRecord& record);

nlohmann::ordered_json census_json(const CensusRecord& record,
                                   const std::vector<std::string>& notes = {});

/// Empirical side of the lower-bound argument: the sieved rough count set
/// against its density references, plus the chain when it fits the table.
/// Reports the asymptotic bound; never asserts it.
struct TheoremReport {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  bool z_from_x = true;            // false when the caller overrode z
  std::uint64_t rough_count = 0;   // over [1, x]
  long double mertens_product = 0;
  double density_reference = 0;    // x · ∏_{p<=z}(1 - 1/p)
  double mertens_rhs = 0;
  double theorem_rhs = 0;
  double ratio_to_product = 0;     // rough_count / density_reference
  double ratio_to_mertens_rhs = 0;
  bool ratio_in_band = false;      // ratio_to_product in [0.9, 1.1]
  std::optional<CensusRecord> chain;
  std::vector<std::string> notes;
};

inline constexpr double kRatioBandLow = 0.9;
inline constexpr double kRatioBandHigh = 1.1;

TheoremReport theorem_report(std::uint64_t x, const numtheory::FactorTable& table,
                             std::optional<std::uint64_t> z = std::nullopt, int workers = 1);

std::string theorem_report_text(const TheoremReport& report);
nlohmann::ordered_json theorem_report_json(const TheoremReport& report);

/// A contiguous run of sequence terms keyed by index.
struct OeisSeries {
  std::int64_t offset = 0;
  std::map<std::int64_t, std::int64_t> values;

  std::int64_t last() const { return values.empty() ? offset - 1 : values.rbegin()->first; }
};

class BFileError : public std::runtime_error {
 public:
  BFileError(std::size_t line, const std::string& what);
  std::size_t line;
};

/// Parses the OEIS b-file format: '#' comment lines, blank lines, and
/// "index value" data lines separated by one space with consecutive indices.
OeisSeries load_bfile(std::istream& in);
OeisSeries load_bfile(const std::filesystem::path& path);

struct OeisMismatch {
  std::uint32_t n = 0;
  std::uint64_t computed = 0;
  std::int64_t expected = 0;

  friend bool operator==(const OeisMismatch&, const OeisMismatch&) = default;
};

struct OeisTerm {
  std::uint32_t n = 0;
  std::optional<std::uint64_t> computed;  // empty when the budget ran out
  std::int64_t expected = 0;
  std::uint64_t nodes = 0;
};

struct OeisComparison {
  std::vector<OeisTerm> terms;
  std::vector<OeisMismatch> mismatches;
  std::vector<std::uint32_t> budget_exceeded;
};

/// Solves M(n) for each n in [from, to] and compares with the series.
OeisComparison compare_oeis(const OeisSeries& series, std::int64_t from, std::int64_t to,
                            std::uint64_t node_budget, int workers = 1);

}  // namespace mondrian::census
