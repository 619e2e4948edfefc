#include "ade/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ade/curvefam.hpp"
#include "ade/errors.hpp"
#include "ade/kernels/quadratic.hpp"
#include "ade/localdens.hpp"
#include "ade/numfield.hpp"
#include "ade/orbits.hpp"
#include "ade/rootsys.hpp"
#include "ade/scanner.hpp"

#ifndef ADE_GIT_DESCRIBE
#define ADE_GIT_DESCRIBE "unknown"
#endif

namespace ade::cli {

using nlohmann::json;
using numfield::FieldContext;
using numfield::RingInt;
using rootsys::DynkinType;
using rootsys::Kind;

json RunConfig::to_json() const {
  return {{"subcommand", subcommand},
          {"field", field},
          {"type", type},
          {"X", X},
          {"prime_bound", prime_bound},
          {"M_grid", M_grid},
          {"workers", workers},
          {"out", out},
          {"excluded_primes", excluded_primes},
          {"exclude_set", exclude_set},
          {"dump", dump},
          {"p", p},
          {"b", b},
          {"poly", poly},
          {"m", m},
          {"method", method},
          {"cache_dir", std::getenv("ADE_CACHE_DIR") ? std::getenv("ADE_CACHE_DIR") : ""}};
}

namespace {

struct Result {
  int code = kOk;
  std::string status = "ok";
  json payload = json::object();
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<DynkinType> casecheck_types() {
  std::vector<DynkinType> t;
  for (int n = 2; n <= 10; ++n) t.push_back(DynkinType::make(Kind::A, n));
  for (int n = 4; n <= 13; ++n) t.push_back(DynkinType::make(Kind::D, n));
  for (int n = 6; n <= 8; ++n) t.push_back(DynkinType::make(Kind::E, n));
  return t;
}

Result cmd_casecheck(const RunConfig& cfg, bool type_given) {
  Result r;
  std::vector<DynkinType> types = type_given ? std::vector<DynkinType>{DynkinType::parse(cfg.type)} : casecheck_types();
  json rows = json::array();
  for (const DynkinType& t : types) {
    json row;
    try {
      row = rootsys::to_json(rootsys::verify_exponent_identity(t));
      row["identity"] = "pass";
    } catch (const IdentityFailure& e) {
      row = {{"type", t.name()}, {"identity", "fail"}, {"check", e.check}, {"coordinate", e.coordinate},
             {"expected", e.expected}, {"actual", e.actual}};
      r.code = kVerificationFailed;
    }
    curvefam::CurveFamily fam = curvefam::family(t);
    int sum = 0;
    for (int d : fam.degrees) sum += d;
    int v_dim = rootsys::graded_decomposition(t).v_dim;
    row["degrees"] = fam.degrees;
    row["dimension_law"] = {{"degree_sum", sum}, {"v_dim", v_dim}, {"holds", sum == v_dim}};
    if (sum != v_dim) r.code = kVerificationFailed;
    rows.push_back(row);
  }
  r.payload["types"] = rows;
  if (r.code != kOk) r.status = "failed";
  return r;
}

scanner::ScanOptions scan_options(const RunConfig& cfg) {
  scanner::ScanOptions opt;
  opt.prime_bound = cfg.prime_bound;
  opt.M_grid = cfg.M_grid;
  opt.workers = cfg.workers;
  if (cfg.exclude_set) {
    opt.excluded_primes = cfg.excluded_primes;
    opt.use_default_exclusion = false;
  }
  opt.dump_points = !cfg.dump.empty();
  return opt;
}

void write_dump(const RunConfig& cfg, const FieldContext& ctx, const scanner::ScanReport& rep) {
  if (cfg.dump.empty()) return;
  std::ofstream os(cfg.dump);
  if (!os) throw std::ios_base::failure("cannot write " + cfg.dump);
  scanner::write_csv(ctx, rep, os);
  if (!os) throw std::ios_base::failure("short write to " + cfg.dump);
}

Result cmd_scan(const RunConfig& cfg) {
  Result r;
  FieldContext ctx = FieldContext::parse(cfg.field);
  auto fam = curvefam::family(DynkinType::parse(cfg.type));
  Rat X = numfield::parse_rational(cfg.X);
  scanner::ScanReport rep = scanner::scan(ctx, fam, X, scan_options(cfg));
  write_dump(cfg, ctx, rep);
  r.payload["scan"] = scanner::to_json(ctx, rep);
  if (rep.total == 0) r.status = "no data";
  if (rep.brute_disagreements > 0) {
    r.code = kVerificationFailed;
    r.status = "failed";
  }
  return r;
}

Result cmd_density(const RunConfig& cfg) {
  Result r;
  FieldContext ctx = FieldContext::parse(cfg.field);
  auto fam = curvefam::family(DynkinType::parse(cfg.type));
  Rat X = numfield::parse_rational(cfg.X);

  numfield::PrimeTable table = numfield::cached_prime_table(ctx, cfg.prime_bound);
  localdens::DensityOptions dopt;
  dopt.workers = cfg.workers;
  localdens::EulerProduct e = localdens::euler_product(ctx, fam, cfg.prime_bound, dopt);
  if (e.factors.size() != table.primes.size()) throw Error("prime table disagrees with the Euler product primes");

  scanner::ScanReport rep = scanner::scan(ctx, fam, X, scan_options(cfg));
  write_dump(cfg, ctx, rep);

  r.payload["euler_product"] = localdens::to_json(ctx, e);
  r.payload["scan"] = scanner::to_json(ctx, rep);
  r.payload["prime_table"] = {{"count", table.primes.size()}, {"bound", table.bound}};
  if (rep.total == 0) {
    r.status = "no data";
    r.payload["comparison"] = nullptr;
    return r;
  }
  double diff = rep.empirical_density - e.value;
  double tolerance = 0.02 + rep.band;
  r.payload["comparison"] = {{"empirical_density", rep.empirical_density},
                             {"euler_product", e.value},
                             {"difference", diff},
                             {"band", rep.band},
                             {"tail_halfwidth", e.tail_halfwidth},
                             {"tolerance", tolerance},
                             {"within_tolerance", std::fabs(diff) <= tolerance}};
  if (rep.brute_disagreements > 0) {
    r.code = kVerificationFailed;
    r.status = "failed";
  }
  return r;
}

numfield::InvariantPoint parse_point(const FieldContext& ctx, const std::string& text) {
  numfield::InvariantPoint b;
  for (const std::string& s : split(text, ',')) b.push_back(ctx.parse_element(s));
  return b;
}

Result cmd_classify(const RunConfig& cfg) {
  Result r;
  FieldContext ctx = FieldContext::parse(cfg.field);
  auto fam = curvefam::family(DynkinType::parse(cfg.type));
  numfield::InvariantPoint b = parse_point(ctx, cfg.b);
  if (static_cast<int>(b.size()) != fam.rank())
    throw ParseError("--b needs " + std::to_string(fam.rank()) + " coordinates");
  numfield::PrimeIdeal P = ctx.prime_of(ctx.parse_element(cfg.p));
  RingInt disc = curvefam::discriminant_A(ctx, fam.type, b);
  scanner::DivisibilityClass c = scanner::classify(ctx, fam, b, P);
  scanner::DivisibilityClass cb = scanner::classify_bruteforce(ctx, fam, b, P);
  r.payload = {{"discriminant", ctx.format(disc)},
               {"prime", ctx.format(P.generator)},
               {"norm", P.norm},
               {"valuation", ctx.valuation(P, disc)},
               {"class", scanner::to_string(c)},
               {"bruteforce_class", scanner::to_string(cb)}};
  if (c != cb) {
    r.code = kVerificationFailed;
    r.status = "failed";
  }
  return r;
}

Result cmd_rho(const RunConfig& cfg) {
  Result r;
  FieldContext ctx = FieldContext::parse(cfg.field);
  auto fam = curvefam::family(DynkinType::parse(cfg.type));
  numfield::PrimeIdeal P = ctx.prime_of(ctx.parse_element(cfg.p));
  localdens::DensityOptions opt;
  opt.workers = cfg.workers;
  if (cfg.method == "enumerate")
    opt.method = localdens::Method::Enumerate;
  else if (cfg.method == "accelerated")
    opt.method = localdens::Method::Accelerated;
  r.payload = localdens::to_json(ctx, localdens::local_density(ctx, fam, P, opt));
  return r;
}

Result cmd_orbit(const RunConfig& cfg) {
  Result r;
  FieldContext ctx = FieldContext::parse(cfg.field);
  orbits::MonicPoly f = orbits::MonicPoly::parse(ctx, cfg.poly);
  RingInt m = ctx.parse_element(cfg.m);
  try {
    RingInt l = orbits::weak_shift(ctx, f, m, cfg.excluded_primes);
    orbits::OrbitMatrix w = orbits::construct_orbit(ctx, f, m, cfg.excluded_primes);
    orbits::OrbitCertificate c = orbits::certify(ctx, f, m, w, l);
    r.payload = {{"poly", f.format(ctx)},
                 {"m", ctx.format(m)},
                 {"shift", ctx.format(l)},
                 {"matrix", orbits::to_json(ctx, w)},
                 {"certificate",
                  {{"integral_after_clearing", c.integral_after_clearing},
                   {"charpoly_matches", c.charpoly_matches},
                   {"superdiagonal_matches", c.superdiagonal_matches},
                   {"q", orbits::format(ctx, c.q.value)},
                   {"q_matches", c.q_matches},
                   {"q_norm_matches", c.q_norm_matches},
                   {"ok", c.ok()}}}};
    if (!c.ok()) {
      r.code = kVerificationFailed;
      r.status = "failed";
    }
  } catch (const NoShift& e) {
    r.code = kVerificationFailed;
    r.status = "no shift";
    r.payload = {{"poly", f.format(ctx)}, {"m", ctx.format(m)}, {"reason", e.what()}};
  }
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"ADE discriminant statistics"};
  app.require_subcommand(1);
  std::string excluded;
  std::string grid;

  auto common = [&](CLI::App* s) {
    s->add_option("--field", cfg.field, "Q, Q(i), Q(sqrt-3), ...");
    s->add_option("--type", cfg.type, "Dynkin type, e.g. A2");
    s->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);
    s->add_option("--out", cfg.out, "report path (default stdout)");
  };
  auto scanning = [&](CLI::App* s) {
    s->add_option("--X", cfg.X, "height bound, integer or fraction");
    s->add_option("--prime-bound", cfg.prime_bound);
    s->add_option("--exclude-primes", excluded, "comma separated rational primes");
    s->add_option("--M-grid", grid, "comma separated tail cuts");
    s->add_option("--dump", cfg.dump, "CSV path for the scanned points");
  };

  CLI::App* casecheck = app.add_subcommand("casecheck", "exponent identities and dimension law");
  common(casecheck);
  CLI::App* density = app.add_subcommand("density", "empirical density against the Euler product");
  common(density);
  scanning(density);
  CLI::App* scan = app.add_subcommand("scan", "scan Sigma up to height X");
  common(scan);
  scanning(scan);
  CLI::App* orbit = app.add_subcommand("orbit", "construct and certify an orbit matrix");
  common(orbit);
  orbit->add_option("--poly", cfg.poly, "monic coefficients from the leading one, e.g. 1,0,-2,4")->required();
  orbit->add_option("--m", cfg.m);
  orbit->add_option("--exclude-primes", excluded);
  CLI::App* classify = app.add_subcommand("classify", "divisibility class of Delta(b) at a prime");
  common(classify);
  classify->add_option("--b", cfg.b, "invariants p_2, ..., comma separated")->required();
  classify->add_option("--p", cfg.p, "prime element")->required();
  CLI::App* rho = app.add_subcommand("rho", "local density at a prime");
  common(rho);
  rho->add_option("--p", cfg.p, "prime element")->required();
  rho->add_option("--method", cfg.method)->check(CLI::IsMember({"auto", "enumerate", "accelerated"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kBudgetOrIo;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  auto start = std::chrono::steady_clock::now();
  Result r;
  std::string error;
  try {
    if (!excluded.empty()) {
      cfg.exclude_set = true;
      for (const std::string& s : split(excluded, ',')) cfg.excluded_primes.push_back(std::stoull(s));
    }
    if (!grid.empty()) {
      cfg.M_grid.clear();
      for (const std::string& s : split(grid, ',')) cfg.M_grid.push_back(std::stoull(s));
    }
    if (cfg.subcommand == "casecheck")
      r = cmd_casecheck(cfg, chosen->count("--type") > 0);
    else if (cfg.subcommand == "density")
      r = cmd_density(cfg);
    else if (cfg.subcommand == "scan")
      r = cmd_scan(cfg);
    else if (cfg.subcommand == "orbit")
      r = cmd_orbit(cfg);
    else if (cfg.subcommand == "classify")
      r = cmd_classify(cfg);
    else
      r = cmd_rho(cfg);
  } catch (const BudgetExceeded& e) {
    r = {kBudgetOrIo, "budget exceeded", json::object()};
    error = e.what();
  } catch (const FactorBudgetExceeded& e) {
    r = {kBudgetOrIo, "budget exceeded", json::object()};
    error = e.what();
  } catch (const std::ios_base::failure& e) {
    r = {kBudgetOrIo, "io error", json::object()};
    error = e.what();
  } catch (const IdentityFailure& e) {
    r = {kVerificationFailed, "failed", json::object()};
    error = e.what();
  } catch (const std::exception& e) {
    r = {kBudgetOrIo, "error", json::object()};
    error = e.what();
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = {{"schema", kSchema},
                 {"version", ADE_GIT_DESCRIBE},
                 {"config", cfg.to_json()},
                 {"isa", kernels::to_string(kernels::active_isa())},
                 {"status", r.status},
                 {"exit_code", r.code},
                 {"wall_seconds", wall},
                 {"result", r.payload}};
  if (!error.empty()) report["error"] = error;
  std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream os(cfg.out);
    if (!(os << text)) {
      err << "cannot write " << cfg.out << "\n";
      return kBudgetOrIo;
    }
  }
  if (!error.empty()) err << error << "\n";
  return r.code;
}

}  // namespace ade::cli
