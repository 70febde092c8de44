#include "mondrian/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mondrian/census.hpp"
#include "mondrian/certificate.hpp"
#include "mondrian/numtheory.hpp"
#include "mondrian/search.hpp"

namespace mondrian::cli {

namespace {

using nlohmann::ordered_json;

const std::map<std::string, OutputFormat> kFormats{
    {"text", OutputFormat::Text}, {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};

struct CommonFlags {
  std::uint64_t budget = 100'000'000;
  std::string format = "text";
  std::string out;
  int workers = 0;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--budget", flags.budget, "Node budget (one node = one placement)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  sub->add_option("--out", flags.out, "Write results to PATH instead of stdout");
  sub->add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
}

int default_workers(const std::optional<std::string>& env_threads) {
  if (env_threads && !env_threads->empty()) {
    int value = 0;
    const auto* end = env_threads->data() + env_threads->size();
    const auto [ptr, ec] = std::from_chars(env_threads->data(), end, value);
    if (ec != std::errc{} || ptr != end || value < 1) {
      throw UsageError("MONDRIAN_THREADS must be a positive integer, got '" + *env_threads + "'");
    }
    return value;
  }
  return std::max(1, omp_get_max_threads());
}

void require_format(const RunConfig& cfg, std::initializer_list<OutputFormat> allowed,
                    const char* command) {
  if (std::find(allowed.begin(), allowed.end(), cfg.format) == allowed.end()) {
    throw UsageError(std::string("output format not supported by '") + command + "'");
  }
}

void validate(const RunConfig& cfg) {
  using numtheory::kWitnessLimit;
  switch (cfg.command) {
    case Command::Solve:
    case Command::Perfect:
      if (*cfg.n < 3 || *cfg.n > tiling::kMaxSide) {
        throw UsageError("--n must be in [3, " + std::to_string(tiling::kMaxSide) + "]");
      }
      if (cfg.command == Command::Perfect) {
        require_format(cfg, {OutputFormat::Text, OutputFormat::Json}, "perfect");
      }
      break;
    case Command::Census:
      for (const auto x : cfg.x) {
        if (x < 16 || x > kWitnessLimit) throw UsageError("--x must be in [16, 1000000]");
      }
      break;
    case Command::Rough:
      if (cfg.x.front() < 1) throw UsageError("--x must be positive");
      if (*cfg.z < 1) throw UsageError("--z must be positive");
      break;
    case Command::Chain:
      require_format(cfg, {OutputFormat::Text, OutputFormat::Json}, "chain");
      if (cfg.n && (*cfg.n < 3 || *cfg.n > kWitnessLimit)) {
        throw UsageError("--n must be in [3, 1000000]");
      }
      if (!cfg.x.empty() && cfg.x.front() < 16) throw UsageError("--x must be >= 16");
      if (cfg.z && *cfg.z < 2) throw UsageError("--z must be >= 2");
      break;
    case Command::VerifyOeis:
      require_format(cfg, {OutputFormat::Text, OutputFormat::Json}, "verify-oeis");
      if (*cfg.from < 3 || *cfg.from > *cfg.to) {
        throw UsageError("--from and --to must satisfy 3 <= from <= to");
      }
      break;
  }
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args,
                     const std::optional<std::string>& env_threads) {
  CLI::App app{"Exact Mondrian puzzle search and divisor-chain censuses", "mondrian"};
  app.require_subcommand(1, 1);

  CommonFlags common;
  std::uint64_t n = 0;
  std::uint64_t x_single = 0;
  std::vector<std::uint64_t> x_list;
  std::uint64_t z = 0;
  std::int64_t from = 0;
  std::int64_t to = 0;
  std::string bfile;

  auto* solve = app.add_subcommand("solve", "Compute M(n) with a certificate tiling");
  solve->add_option("--n", n, "Square side")->required();
  add_common(solve, common);

  auto* perfect = app.add_subcommand("perfect", "Decide whether M(n) = 0");
  perfect->add_option("--n", n, "Square side")->required();
  add_common(perfect, common);

  auto* census = app.add_subcommand("census", "Chain census at one or more checkpoints");
  census->add_option("--x", x_list, "Checkpoints, comma separated")->required()->delimiter(',');
  add_common(census, common);

  auto* rough = app.add_subcommand("rough", "Count z-rough integers up to x");
  rough->add_option("--x", x_single, "Upper limit")->required();
  rough->add_option("--z", z, "Roughness bound")->required();
  add_common(rough, common);

  auto* chain = app.add_subcommand("chain", "Witness report for n, or the rough-count report for x");
  auto* chain_n = chain->add_option("--n", n, "Report the divisor witness chain for n");
  auto* chain_x = chain->add_option("--x", x_single, "Report rough counts against references");
  auto* chain_z = chain->add_option("--z", z, "Override the roughness bound derived from x");
  chain_n->excludes(chain_x);
  chain_z->needs(chain_x);
  add_common(chain, common);

  auto* verify = app.add_subcommand("verify-oeis", "Compare solve results with a b-file");
  verify->add_option("--bfile", bfile, "OEIS b-file path")->required();
  verify->add_option("--from", from, "First n")->required();
  verify->add_option("--to", to, "Last n")->required();
  add_common(verify, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = app.exit(e, out, err);
    if (code == 0) throw HelpRequested(out.str());
    throw UsageError(err.str());
  }

  RunConfig cfg;
  if (solve->parsed()) cfg.command = Command::Solve;
  if (perfect->parsed()) cfg.command = Command::Perfect;
  if (census->parsed()) cfg.command = Command::Census;
  if (rough->parsed()) cfg.command = Command::Rough;
  if (chain->parsed()) cfg.command = Command::Chain;
  if (verify->parsed()) cfg.command = Command::VerifyOeis;

  CLI::App* active = app.get_subcommands().front();
  const auto given = [active](const char* name) {
    const CLI::Option* opt = active->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--n")) cfg.n = n;
  if (cfg.command == Command::Census) cfg.x = x_list;
  if (given("--x") && cfg.command != Command::Census) cfg.x = {x_single};
  if (given("--z")) cfg.z = z;
  if (given("--from")) cfg.from = from;
  if (given("--to")) cfg.to = to;
  if (given("--bfile")) cfg.bfile = bfile;
  if (cfg.command == Command::Chain && !cfg.n && cfg.x.empty()) {
    throw UsageError("chain needs either --n or --x");
  }

  cfg.node_budget = common.budget;
  cfg.format = kFormats.at(common.format);
  if (given("--out")) cfg.output_path = common.out;
  cfg.workers = given("--workers") ? common.workers : default_workers(env_threads);

  validate(cfg);
  return cfg;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  const char* env = std::getenv("MONDRIAN_THREADS");
  return parse_args(args, env ? std::optional<std::string>(env) : std::nullopt);
}

namespace {

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// One character per piece, cycling through a 62-symbol alphabet.
std::string render_grid(const tiling::Tiling& t) {
  static constexpr std::string_view kSymbols =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  std::vector<std::string> rows(t.n, std::string(t.n, '.'));
  for (std::size_t i = 0; i < t.placements.size(); ++i) {
    const auto& p = t.placements[i];
    for (std::uint32_t r = p.y; r < p.y + p.height(); ++r) {
      for (std::uint32_t c = p.x; c < p.x + p.width(); ++c) {
        rows[r][c] = kSymbols[i % kSymbols.size()];
      }
    }
  }
  std::string out;
  for (const auto& row : rows) out += "  " + row + "\n";
  return out;
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto n = static_cast<std::uint32_t>(*cfg.n);
  err << "mondrian: solving n = " << n << "\n";
  tiling::MResult result;
  try {
    result = tiling::solve_m(n, cfg.node_budget, cfg.workers);
  } catch (const tiling::BudgetExceeded& e) {
    err << "mondrian: " << e.what() << "\n";
    return kExitBudget;
  }
  const auto check = tiling::verify_tiling(result.certificate);
  if (!check.valid || check.defect != result.value) {
    err << "mondrian: certificate failed verification\n";
    return kExitConsistency;
  }

  switch (cfg.format) {
    case OutputFormat::Json:
      out << tiling::certificate_string(result.certificate) << "\n";
      break;
    case OutputFormat::Csv:
      out << "w,h,x,y,rot\n";
      for (const auto& p : result.certificate.placements) {
        out << p.rect.w << ',' << p.rect.h << ',' << p.x << ',' << p.y << ','
            << (p.rotated ? "true" : "false") << "\n";
      }
      break;
    case OutputFormat::Text:
      out << "n = " << n << "\n";
      out << "M(n) = " << result.value << "\n";
      out << "min_area = " << check.min_area << "\n";
      out << "max_area = " << check.max_area << "\n";
      out << "nodes = " << result.nodes << "\n";
      out << "pieces:\n";
      for (const auto& p : result.certificate.placements) {
        out << "  " << p.rect.w << "x" << p.rect.h << " at (" << p.x << "," << p.y << ")"
            << (p.rotated ? " rotated" : "") << "\n";
      }
      out << "grid:\n" << render_grid(result.certificate);
      break;
  }
  return kExitOk;
}

int run_perfect(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto n = static_cast<std::uint32_t>(*cfg.n);
  const auto table = numtheory::build_factor_table(std::max<std::uint64_t>(n, 2), cfg.workers);
  tiling::PerfectCheckOutcome outcome;
  try {
    outcome = tiling::check_perfect(n, cfg.node_budget, table, cfg.workers);
  } catch (const tiling::PerfectBudgetExceeded& e) {
    err << "mondrian: " << e.what() << "; unresolved d:";
    for (const auto d : e.unresolved_d) err << " " << d;
    err << "\n";
    return kExitBudget;
  }
  if (outcome.certificate && !tiling::verify_tiling(*outcome.certificate).valid) {
    err << "mondrian: certificate failed verification\n";
    return kExitConsistency;
  }

  if (cfg.format == OutputFormat::Json) {
    ordered_json doc;
    doc["n"] = n;
    doc["verdict"] = std::string(tiling::to_string(outcome.verdict));
    doc["witness_d"] = outcome.witness_d ? ordered_json(*outcome.witness_d) : ordered_json(nullptr);
    doc["nodes"] = outcome.nodes_searched;
    ordered_json attempts = ordered_json::array();
    for (const auto& a : outcome.attempts) {
      attempts.push_back({{"d", a.d}, {"pieces", a.pieces}, {"classes", a.classes},
                          {"searched", a.searched}});
    }
    doc["attempts"] = std::move(attempts);
    doc["certificate"] = outcome.certificate ? tiling::certificate_to_json(*outcome.certificate)
                                             : ordered_json(nullptr);
    out << doc.dump() << "\n";
    return kExitOk;
  }
  out << tiling::to_string(outcome.verdict) << "\n";
  out << "n = " << n << "\n";
  out << "witness_d = " << (outcome.witness_d ? std::to_string(*outcome.witness_d) : "none") << "\n";
  out << "nodes = " << outcome.nodes_searched << "\n";
  for (const auto& a : outcome.attempts) {
    out << "  d = " << a.d << ": " << a.pieces << " pieces, " << a.classes << " shapes"
        << (a.searched ? ", searched" : ", too few shapes") << "\n";
  }
  if (outcome.certificate) out << "grid:\n" << render_grid(*outcome.certificate);
  return kExitOk;
}

int run_census(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto top = *std::max_element(cfg.x.begin(), cfg.x.end());
  const auto table = numtheory::build_factor_table(top, cfg.workers);
  std::vector<census::CensusRecord> records;
  for (const auto x : cfg.x) {
    err << "mondrian: census x = " << x << "\n";
    records.push_back(census::run_chain_census(x, table, cfg.workers));
  }
  const std::vector<std::string> notes{
      "counts cover n in [3, x]",
      "count_rough excludes 1 and 2, unlike rough_count over [1, x]",
      "theorem_rhs and mertens_rhs are asymptotic references, not asserted bounds"};
  switch (cfg.format) {
    case OutputFormat::Csv:
      out << census::kCensusCsvHeader << "\n";
      for (const auto& r : records) out << census::census_csv_row(r) << "\n";
      break;
    case OutputFormat::Json: {
      ordered_json doc = ordered_json::array();
      for (const auto& r : records) doc.push_back(census::census_json(r, notes));
      out << doc.dump() << "\n";
      break;
    }
    case OutputFormat::Text:
      for (const auto& r : records) {
        out << "x = " << r.x << ", z = " << r.z << "\n";
        out << "  p1 (no witness)        " << r.count_p1 << "\n";
        out << "  p2                     " << r.count_p2 << "\n";
        out << "  p3                     " << r.count_p3 << "\n";
        out << "  rough with small tau   " << r.count_rough_and_small_tau << "\n";
        out << "  rough                  " << r.count_rough << "\n";
        out << "  excess tau             " << r.count_excess_tau << "\n";
        out << "  theorem_rhs            " << g6(r.theorem_rhs) << "\n";
        out << "  mertens_rhs            " << g6(r.mertens_rhs) << "\n";
      }
      break;
  }
  return kExitOk;
}

int run_rough(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto x = cfg.x.front();
  const auto z = *cfg.z;
  const auto count = numtheory::rough_count(x, z, cfg.workers);
  const double reference =
      static_cast<double>(static_cast<long double>(x) * numtheory::mertens_product(z));
  const double ratio = static_cast<double>(count) / reference;
  switch (cfg.format) {
    case OutputFormat::Csv:
      out << "x,z,rough_count,density_reference,ratio\n";
      out << x << ',' << z << ',' << count << ',' << g6(reference) << ',' << g6(ratio) << "\n";
      break;
    case OutputFormat::Json: {
      ordered_json doc;
      doc["x"] = x;
      doc["z"] = z;
      doc["rough_count"] = count;
      doc["density_reference"] = reference;
      doc["ratio"] = ratio;
      out << doc.dump() << "\n";
      break;
    }
    case OutputFormat::Text:
      out << "rough_count(" << x << ", " << z << ") = " << count << "\n";
      out << "x * mertens_product(z) = " << g6(reference) << "\n";
      out << "ratio = " << g6(ratio) << "\n";
      break;
  }
  return kExitOk;
}

int run_chain(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.n) {
    const auto table = numtheory::build_factor_table(*cfg.n, cfg.workers);
    const auto r = numtheory::witness_report(*cfg.n, table);
    if (cfg.format == OutputFormat::Json) {
      ordered_json doc;
      doc["n"] = r.n;
      doc["witness"] = r.witness ? ordered_json(*r.witness) : ordered_json(nullptr);
      doc["p1"] = r.p1;
      doc["p2"] = r.p2;
      doc["p3"] = r.p3;
      out << doc.dump() << "\n";
    } else {
      out << "n = " << r.n << "\n";
      out << "witness = " << (r.witness ? std::to_string(*r.witness) : "none") << "\n";
      out << "p1 = " << std::boolalpha << r.p1 << "\np2 = " << r.p2 << "\np3 = " << r.p3
          << std::noboolalpha << "\n";
    }
    return kExitOk;
  }
  const auto x = cfg.x.front();
  const bool with_chain = !cfg.z && x <= numtheory::kWitnessLimit;
  const auto table = numtheory::build_factor_table(with_chain ? x : 2, cfg.workers);
  const auto report = census::theorem_report(x, table, cfg.z, cfg.workers);
  if (cfg.format == OutputFormat::Json) {
    out << census::theorem_report_json(report).dump() << "\n";
  } else {
    out << census::theorem_report_text(report);
  }
  return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  census::OeisSeries series;
  try {
    series = census::load_bfile(std::filesystem::path(*cfg.bfile));
  } catch (const std::exception& e) {
    err << "mondrian: " << e.what() << "\n";
    return kExitUsage;
  }
  if (*cfg.from < series.offset || *cfg.to > series.last()) {
    err << "mondrian: range [" << *cfg.from << ", " << *cfg.to << "] is outside the b-file ["
        << series.offset << ", " << series.last() << "]\n";
    return kExitUsage;
  }
  const auto cmp = census::compare_oeis(series, *cfg.from, *cfg.to, cfg.node_budget, cfg.workers);
  if (cfg.format == OutputFormat::Json) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : cmp.terms) {
      terms.push_back({{"n", t.n},
                       {"computed", t.computed ? ordered_json(*t.computed) : ordered_json(nullptr)},
                       {"expected", t.expected},
                       {"nodes", t.nodes}});
    }
    ordered_json mismatches = ordered_json::array();
    for (const auto& m : cmp.mismatches) {
      mismatches.push_back({{"n", m.n}, {"computed", m.computed}, {"expected", m.expected}});
    }
    ordered_json doc;
    doc["terms"] = std::move(terms);
    doc["mismatches"] = std::move(mismatches);
    doc["budget_exceeded"] = cmp.budget_exceeded;
    out << doc.dump() << "\n";
  } else {
    for (const auto& t : cmp.terms) {
      out << "n = " << t.n << ": computed "
          << (t.computed ? std::to_string(*t.computed) : "budget exceeded") << ", expected "
          << t.expected << "\n";
    }
    out << cmp.mismatches.size() << " mismatches\n";
    if (!cmp.budget_exceeded.empty()) {
      out << cmp.budget_exceeded.size() << " budget exceeded\n";
    }
  }
  if (!cmp.mismatches.empty()) return kExitConsistency;
  if (!cmp.budget_exceeded.empty()) return kExitBudget;
  return kExitOk;
}

}  // namespace

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int status = kExitOk;
  try {
    switch (cfg.command) {
      case Command::Solve: status = run_solve(cfg, buffer, err); break;
      case Command::Perfect: status = run_perfect(cfg, buffer, err); break;
      case Command::Census: status = run_census(cfg, buffer, err); break;
      case Command::Rough: status = run_rough(cfg, buffer, err); break;
      case Command::Chain: status = run_chain(cfg, buffer, err); break;
      case Command::VerifyOeis: status = run_verify(cfg, buffer, err); break;
    }
  } catch (const census::ConsistencyError& e) {
    err << "mondrian: internal consistency error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const std::invalid_argument& e) {
    err << "mondrian: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "mondrian: " << e.what() << "\n";
    return kExitConsistency;
  }

  if (cfg.output_path) {
    std::ofstream file(*cfg.output_path, std::ios::binary);
    if (!file) {
      err << "mondrian: cannot write " << *cfg.output_path << "\n";
      return kExitUsage;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return status;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << e.what();
    if (std::string_view(e.what()).empty() || std::string_view(e.what()).back() != '\n') err << "\n";
    return kExitUsage;
  }
  return dispatch(cfg, out, err);
}

}  // namespace mondrian::cli
