#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "detsieve/arithmetic.hpp"
#include "detsieve/bound_calculator.hpp"
#include "detsieve/errors.hpp"
#include "detsieve/intmat.hpp"
#include "detsieve/local_densities.hpp"
#include "detsieve/orbit_enum.hpp"
#include "detsieve/prime_matrix_builder.hpp"
#include "detsieve/sieve_engine.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace detsieve;

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

// reports carry doubles rounded to 12 significant digits so reruns are byte-identical
double sig12(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

double round4(double v) { return sig12(std::round(v * 10000.0) / 10000.0); }

json jrat(const Rational& r) {
  json out;
  const i128 lo = std::numeric_limits<std::int64_t>::min();
  const i128 hi = std::numeric_limits<std::int64_t>::max();
  if (r.num() >= lo && r.num() <= hi && r.den() <= hi) {
    out["num"] = static_cast<std::int64_t>(r.num());
    out["den"] = static_cast<std::int64_t>(r.den());
  } else {
    out["num"] = i128_to_string(r.num());
    out["den"] = i128_to_string(r.den());
  }
  return out;
}

json jmat(const Mat& x) {
  json rows = json::array();
  for (int i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
    rows.push_back(row);
  }
  return rows;
}

void parallel_for(int workers, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  const int use = static_cast<int>(std::min<std::size_t>(std::max(workers, 1), jobs));
  if (use <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first_error;
  auto drain = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (first_error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(use));
  for (int w = 0; w < use; ++w) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// grammar: term (('+'|'-') term)*, term = factor ('*'? factor)*,
// factor = integer | x<row><col> ('^' exponent)?
PolynomialOnV parse_polynomial(const std::string& raw, int n) {
  std::string src;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) src.push_back(c);
  if (src.empty()) throw ValidationError("empty polynomial expression");
  std::vector<PolynomialOnV> terms;
  std::size_t pos = 0;
  auto parse_int = [&]() -> std::int64_t {
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (start == pos) throw ValidationError("expected an integer in the polynomial");
    if (pos - start > 18) throw ValidationError("polynomial coefficient too large");
    return std::stoll(src.substr(start, pos - start));
  };
  while (pos < src.size()) {
    std::int64_t sign = 1;
    if (src[pos] == '+') {
      ++pos;
    } else if (src[pos] == '-') {
      sign = -1;
      ++pos;
    }
    PolyTerm term;
    term.coef = sign;
    term.exps.assign(static_cast<std::size_t>(n) * n, 0);
    bool any = false;
    while (pos < src.size()) {
      char c = src[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        term.coef *= parse_int();
        any = true;
      } else if (c == 'x') {
        ++pos;
        if (pos + 1 >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])) ||
            !std::isdigit(static_cast<unsigned char>(src[pos + 1])))
          throw ValidationError("matrix entries are written x<row><col>, e.g. x11");
        int i = src[pos] - '0';
        int j = src[pos + 1] - '0';
        pos += 2;
        if (i < 1 || i > n || j < 1 || j > n)
          throw ValidationError("entry index out of range for the given dimension");
        int e = 1;
        if (pos < src.size() && src[pos] == '^') {
          ++pos;
          e = static_cast<int>(parse_int());
          if (e < 1) throw ValidationError("exponents must be positive");
        }
        term.exps[static_cast<std::size_t>(i - 1) * n + (j - 1)] += e;
        any = true;
      } else {
        break;
      }
      if (pos < src.size() && src[pos] == '*') {
        ++pos;
        continue;
      }
      if (pos < src.size() && (src[pos] == 'x' || std::isdigit(static_cast<unsigned char>(src[pos]))))
        continue;
      break;
    }
    if (!any) throw ValidationError("empty term in polynomial");
    PolynomialOnV one;
    one.n = n;
    one.terms = {term};
    terms.push_back(one);
  }
  PolynomialOnV acc = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) acc = acc + terms[k];
  return acc;
}

struct GlobalOpts {
  std::string out_path;
  std::string csv_path;
  int workers = 1;
};

void emit(const json& report, const GlobalOpts& g, const std::string& csv = "") {
  std::string text = report.dump(2);
  text.push_back('\n');
  if (!g.out_path.empty()) {
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output path " + g.out_path);
    f << text;
  }
  if (!g.csv_path.empty()) {
    if (csv.empty()) throw ValidationError("this subcommand has no CSV grid output");
    std::ofstream f(g.csv_path, std::ios::binary);
    if (!f) throw ValidationError("cannot open csv path " + g.csv_path);
    f << csv;
  }
  std::cout << text;
}

json report_head(const std::string& command, json config) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["tool_version"] = kToolVersion;
  out["command"] = command;
  out["config"] = std::move(config);
  return out;
}

const std::vector<std::int64_t> kWitnessBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// ------------------------------------------------------------------ count ----

struct CountParams {
  std::int64_t m = 1;
  int n = 2;
  std::string norm = "max";
  std::vector<double> grid;
  std::int64_t budget = 1'000'000'000;
};

void run_count(const CountParams& p, const GlobalOpts& g) {
  NormSpec::Kind kind = norm_kind_from_string(p.norm);
  if (p.grid.empty()) throw ValidationError("the threshold grid must not be empty");
  CountSeries series;
  series.m = p.m;
  series.n = p.n;
  series.kind = kind;
  series.grid.resize(p.grid.size());
  parallel_for(g.workers, p.grid.size(), [&](std::size_t i) {
    NormSpec norm{kind, p.grid[i]};
    series.grid[i] = {p.grid[i], count_points(p.m, p.n, norm, EnumBudget{p.budget})};
  });
  json config;
  config["m"] = p.m;
  config["n"] = p.n;
  config["norm"] = p.norm;
  config["grid"] = p.grid;
  config["budget"] = p.budget;
  config["out"] = g.out_path;
  config["csv"] = g.csv_path;
  json report = report_head("count", config);
  report["ordering"] = "point-norm";
  json rows = json::array();
  std::string csv = "T,count\n";
  for (const auto& [T, c] : series.grid) {
    json row;
    row["T"] = sig12(T);
    row["count"] = c;
    rows.push_back(row);
    csv += std::to_string(static_cast<std::int64_t>(T)) + "," + std::to_string(c) + "\n";
  }
  report["rows"] = rows;
  if (series.grid.size() >= 4) {
    GrowthFit fit = fit_growth_exponent(series);
    json jf;
    jf["exponent"] = sig12(fit.exponent);
    jf["leading"] = sig12(fit.leading);
    jf["rms_residual"] = sig12(fit.rms_residual);
    report["fit"] = jf;
    csv += "a_est," + json(sig12(fit.exponent)).dump() + "\n";
  } else {
    report["fit"] = nullptr;
  }
  emit(report, g, csv);
}

// -------------------------------------------------------------- densities ----

struct DensityParams {
  std::int64_t m = 1;
  int n = 2;
  std::string f = "x11";
  std::int64_t N = 1;
  int t = 1;
  std::int64_t pmax = 13;
  std::int64_t dmax = 30;
  int orbit_index = 0;
  std::int64_t cap = 8'000'000;
};

Mat orbit_base_point(std::int64_t m, int n, int orbit_index) {
  OrbitDecomposition dec = hnf_orbit_reps(m, n);
  if (orbit_index < 0 || orbit_index >= static_cast<int>(dec.reps.size()))
    throw ValidationError("orbit index out of range; the variety has " +
                          std::to_string(dec.reps.size()) + " orbits");
  return dec.reps[static_cast<std::size_t>(orbit_index)];
}

void run_densities(const DensityParams& p, const GlobalOpts& g) {
  if (p.pmax < 2) throw ValidationError("the prime bound must be at least 2");
  Mat v = orbit_base_point(p.m, p.n, p.orbit_index);
  PolynomialOnV f = parse_polynomial(p.f, p.n);
  f.N = p.N;
  f.t = p.t;
  std::vector<std::int64_t> moduli = {1};
  for (std::int64_t q : primes_up_to(p.pmax)) moduli.push_back(q);
  std::vector<Rational> rho(moduli.size());
  parallel_for(g.workers, moduli.size(), [&](std::size_t i) {
    rho[i] = rho_f(moduli[i], v, f, static_cast<std::uint64_t>(p.cap));
  });
  json config;
  config["m"] = p.m;
  config["n"] = p.n;
  config["f"] = p.f;
  config["N"] = p.N;
  config["t"] = p.t;
  config["pmax"] = p.pmax;
  config["dmax"] = p.dmax;
  config["orbit_index"] = p.orbit_index;
  config["cap"] = p.cap;
  config["out"] = g.out_path;
  config["csv"] = g.csv_path;
  json report = report_head("densities", config);
  report["base_point"] = jmat(v);
  json rows = json::array();
  std::string csv = "d,num,den\n";
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    json row;
    row["d"] = moduli[i];
    row["rho"] = jrat(rho[i]);
    row["rho_value"] = sig12(rho[i].to_double());
    rows.push_back(row);
    csv += std::to_string(moduli[i]) + "," + i128_to_string(rho[i].num()) + "," +
           i128_to_string(rho[i].den()) + "\n";
  }
  report["rows"] = rows;
  json mult = json::array();
  std::vector<std::int64_t> ps = primes_up_to(p.pmax);
  for (std::size_t a = 0; a < ps.size(); ++a)
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      if (ps[a] * ps[b] > p.dmax) continue;
      json cell;
      cell["d1"] = ps[a];
      cell["d2"] = ps[b];
      cell["ok"] = check_multiplicativity(ps[a], ps[b], v, f);
      mult.push_back(cell);
    }
  report["multiplicativity"] = mult;
  SingularSeries ss = singular_series_partial(v, f, p.t, p.pmax);
  json jss;
  jss["product"] = jrat(ss.product);
  jss["product_value"] = sig12(ss.product.to_double());
  json jfac = json::array();
  for (const auto& [q, val] : ss.factors) {
    json cell;
    cell["p"] = q;
    cell["factor"] = jrat(val);
    jfac.push_back(cell);
  }
  jss["factors"] = jfac;
  jss["skipped"] = ss.skipped;
  report["singular_series"] = jss;
  PrimitivityReport prim = weak_primitivity(v, f, 6.0, std::min<std::int64_t>(p.pmax, 31));
  json jprim;
  jprim["probed_gcd"] = prim.probed_gcd;
  jprim["points_probed"] = prim.points_probed;
  json jwit = json::array();
  for (const auto& [q, w] : prim.witnesses) {
    json cell;
    cell["p"] = q;
    cell["witness_found"] = w.has_value();
    jwit.push_back(cell);
  }
  jprim["witnesses"] = jwit;
  report["primitivity"] = jprim;
  emit(report, g, csv);
}

// ------------------------------------------------------------------ sieve ----

struct SieveParamsCli {
  std::int64_t m = 1;
  int n = 2;
  std::string f = "x11";
  std::int64_t N = 1;
  int t = 1;
  double T = 100.0;
  std::string norm = "max";
  double z = 10.0;
  double tau = 0.0;  // 0 means the spectral-theory level for the group
  int orbit_index = 0;
  std::int64_t budget = 1'000'000'000;
  std::int64_t rmax = 30;
};

void run_sieve(const SieveParamsCli& p, const GlobalOpts& g) {
  NormSpec norm{norm_kind_from_string(p.norm), p.T};
  Mat v = orbit_base_point(p.m, p.n, p.orbit_index);
  PolynomialOnV f = parse_polynomial(p.f, p.n);
  f.N = p.N;
  f.t = p.t;
  SiftSequence seq = build_sequence(v, f, norm, EnumBudget{p.budget});
  double tau_theory = level_tau(sl_n_group_data(p.n)).to_double();
  double tau_used = p.tau > 0.0 ? p.tau : tau_theory;
  double D = seq.X > 0 ? std::pow(static_cast<double>(seq.X), tau_used) : 1.0;
  std::set<std::int64_t> exempt;
  for (const auto& [q, e] : factor(f.N).prime_powers) exempt.insert(q);
  std::int64_t S = legendre_sift(seq, p.z, exempt);
  std::vector<std::int64_t> zprimes;
  if (p.z >= 2.0)
    for (std::int64_t q : primes_up_to(static_cast<std::int64_t>(std::floor(p.z + 1e-9))))
      if (!exempt.count(q)) zprimes.push_back(q);
  std::int64_t s_moebius = internal::sift_moebius(seq, zprimes);
  std::int64_t s_direct = internal::sift_direct(seq, zprimes);
  std::vector<std::int64_t> ds;
  for (std::int64_t d = 1; d <= std::max<std::int64_t>(p.rmax, static_cast<std::int64_t>(D)); ++d)
    if (d == 1 || moebius(d) != 0) ds.push_back(d);
  std::vector<Rational> rho(ds.size());
  parallel_for(g.workers, ds.size(), [&](std::size_t i) { rho[i] = rho_f(ds[i], v, f); });
  DensityTable table;
  for (std::size_t i = 0; i < ds.size(); ++i) table.rows.push_back({ds[i], rho[i]});
  std::vector<double> dgrid;
  for (double dd = 2.0; dd < D; dd *= 2.0) dgrid.push_back(dd);
  dgrid.push_back(std::max(D, 1.0));
  std::vector<LevelScanRow> levels = level_scan(seq, table, dgrid);
  json config;
  config["m"] = p.m;
  config["n"] = p.n;
  config["f"] = p.f;
  config["N"] = p.N;
  config["t"] = p.t;
  config["T"] = sig12(p.T);
  config["norm"] = p.norm;
  config["z"] = sig12(p.z);
  config["tau"] = sig12(p.tau);
  config["orbit_index"] = p.orbit_index;
  config["rmax"] = p.rmax;
  config["budget"] = p.budget;
  config["out"] = g.out_path;
  config["csv"] = g.csv_path;
  json report = report_head("sieve", config);
  report["ordering"] = "point-norm";
  report["X"] = seq.X;
  report["a0"] = seq.a0;
  report["z"] = sig12(p.z);
  report["sifted"] = S;
  json agree;
  agree["moebius"] = s_moebius;
  agree["direct"] = s_direct;
  agree["match"] = (s_moebius == s_direct);
  report["sift_cross_check"] = agree;
  report["tau_theory"] = sig12(tau_theory);
  report["tau_used"] = sig12(tau_used);
  report["level_D"] = sig12(D);
  json jrem = json::array();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    Rational R = remainder_term(seq, ds[i], table);
    json cell;
    cell["d"] = ds[i];
    cell["rho"] = jrat(rho[i]);
    cell["remainder"] = jrat(R);
    cell["abs"] = sig12(std::abs(R.to_double()));
    jrem.push_back(cell);
  }
  report["remainders"] = jrem;
  json jlev = json::array();
  std::string csv = "D,remainder_sum,ratio_to_mass\n";
  for (const auto& row : levels) {
    json cell;
    cell["D"] = sig12(row.D);
    cell["remainder_sum"] = sig12(row.remainder_sum);
    cell["ratio_to_mass"] = sig12(row.ratio_to_mass);
    jlev.push_back(cell);
    csv += json(sig12(row.D)).dump() + "," + json(sig12(row.remainder_sum)).dump() + "," +
           json(sig12(row.ratio_to_mass)).dump() + "\n";
  }
  report["level_scan"] = jlev;
  emit(report, g, csv);
}

// -------------------------------------------------------------- construct ----

struct ConstructParams {
  int n = 3;
  std::uint64_t seed = 1;
  int count = 1;
  bool allow_n4 = false;
  std::int64_t search_bound = 1 << 22;
  std::int64_t solver_T_start = 1 << 17;
  std::int64_t solver_T_cap = std::int64_t{1} << 27;
  int max_frame_attempts = 32;
  std::int64_t budget = 2'000'000'000;
};

json make_certificate(const BuildResult& res, std::uint64_t seed) {
  const int n = res.frame.n;
  const std::int64_t half = std::int64_t{1} << (n - 2);
  const std::int64_t full = std::int64_t{1} << (n - 1);
  json cert;
  cert["n"] = n;
  cert["seed"] = seed;
  cert["matrix"] = jmat(res.x);
  cert["det"] = static_cast<std::int64_t>(det_exact(res.x));
  json entries = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      json cell;
      cell["row"] = i;
      cell["col"] = j;
      cell["value"] = res.x(i, j);
      cell["prime"] = is_prime(res.x(i, j));
      cell["method"] = "deterministic-miller-rabin";
      cell["witnesses"] = kWitnessBases;
      entries.push_back(cell);
    }
  cert["entries"] = entries;
  cert["frame"] = jmat(res.frame.rows);
  cert["minors"] = res.eq.A.A;
  const auto& A = res.eq.A.A;
  i128 sum = 0;
  bool nonzero = true;
  for (std::int64_t a : A) {
    sum += a;
    nonzero = nonzero && (a != 0);
  }
  std::int64_t gall = 0;
  for (std::int64_t a : A) gall = std::gcd(gall, a);
  json checks;
  checks["minors_nonzero"] = nonzero;
  checks["first_minor_is_half_det_mod_det"] = (((A[0] % full) + full) % full) == half;
  checks["first_two_minors_gcd_is_half_det"] = std::gcd(A[0], A[1]) == half;
  checks["minor_sum_divisible_by_det"] = (sum % full) == 0;
  checks["minor_gcd_is_half_det"] = gall == half;
  checks["local_solvability"] = vinogradov_local_check(res.eq.A0, res.eq.A);
  cert["congruences"] = checks;
  json eq;
  eq["A0"] = res.eq.A0;
  json coefs = json::array();
  i128 residual = -static_cast<i128>(res.eq.A0);
  for (std::size_t j = 0; j < A.size(); ++j) {
    std::int64_t c = (j % 2 == 0) ? A[j] : -A[j];
    coefs.push_back(c);
    residual += static_cast<i128>(c) * res.top_row[j];
  }
  eq["coefficients"] = coefs;
  eq["solution"] = res.top_row;
  eq["residual"] = static_cast<std::int64_t>(residual);
  cert["equation"] = eq;
  json solver;
  solver["T"] = res.solver_T;
  solver["frame_attempts"] = res.frame_attempts;
  solver["search_convention"] =
      "positive prime tuples; the symmetric count over signed entries is not searched";
  cert["solver"] = solver;
  return cert;
}

void run_construct(const ConstructParams& p, const GlobalOpts& g) {
  if (p.count < 1) throw ValidationError("certificate count must be positive");
  BuildOptions opts;
  opts.search_bound = p.search_bound;
  opts.solver_T_start = p.solver_T_start;
  opts.solver_T_cap = p.solver_T_cap;
  opts.max_frame_attempts = p.max_frame_attempts;
  opts.allow_n4 = p.allow_n4;
  opts.solver_visit_budget = p.budget;
  if (p.n == 2) build_prime_matrix(2, p.seed, opts);  // raises the documented rejection
  std::vector<BuildResult> results(static_cast<std::size_t>(p.count));
  parallel_for(g.workers, results.size(), [&](std::size_t i) {
    results[i] = build_prime_matrix(p.n, p.seed + i, opts);
  });
  json config;
  config["n"] = p.n;
  config["seed"] = p.seed;
  config["count"] = p.count;
  config["allow_n4"] = p.allow_n4;
  config["search_bound"] = p.search_bound;
  config["solver_T_start"] = p.solver_T_start;
  config["solver_T_cap"] = p.solver_T_cap;
  config["max_frame_attempts"] = p.max_frame_attempts;
  config["budget"] = p.budget;
  config["out"] = g.out_path;
  json report = report_head("construct", config);
  if (p.count == 1) {
    report["certificate"] = make_certificate(results[0], p.seed);
  } else {
    json arr = json::array();
    for (std::size_t i = 0; i < results.size(); ++i)
      arr.push_back(make_certificate(results[i], p.seed + i));
    report["certificates"] = arr;
  }
  emit(report, g);
}

// ----------------------------------------------------------------- bounds ----

struct BoundsParams {
  int sln = 0;
  int division = 0;
  int t = 1;
  int deg = 1;
  double rho_w = 0.0;
  bool literal_variant = false;
  int dim_g = 0;
  std::int64_t a = 0;
  int b = 0;
  int ne = 0;
  std::string p_exponent;
};

Rational parse_rational_arg(const std::string& s) {
  std::size_t slash = s.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(s));
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

void run_bounds(const BoundsParams& p, const GlobalOpts& g) {
  SieveParams sp;
  sp.t = p.t;
  sp.deg_f = p.deg;
  if (p.rho_w > 0.0) sp.rho_w = p.rho_w;
  std::optional<GroupData> gd;
  if (p.sln > 0) {
    gd = sl_n_group_data(p.sln);
  } else if (p.dim_g > 0) {
    GroupData custom;
    custom.dim_G = p.dim_g;
    custom.a = Rational(p.a);
    custom.b = p.b;
    custom.n_e = p.ne;
    if (!p.p_exponent.empty()) custom.p = parse_rational_arg(p.p_exponent);
    gd = custom;
  }
  if (!gd && p.division == 0)
    throw ValidationError("give --sln, --division, or explicit group data (--dim-g --a --ne)");
  json config;
  config["sln"] = p.sln;
  config["division"] = p.division;
  config["t"] = p.t;
  config["deg"] = p.deg;
  config["rho_w"] = sig12(p.rho_w);
  config["literal_variant"] = p.literal_variant;
  config["dim_g"] = p.dim_g;
  config["a"] = p.a;
  config["b"] = p.b;
  config["ne"] = p.ne;
  config["p"] = p.p_exponent;
  config["out"] = g.out_path;
  json report = report_head("bounds", config);
  report["log_convention"] = "natural";
  report["threshold_rounding"] = "4 decimals";
  if (gd) {
    json jg;
    jg["dim_G"] = gd->dim_G;
    jg["a"] = jrat(gd->a);
    jg["b"] = gd->b;
    jg["n_e"] = gd->n_e;
    jg["p"] = gd->p ? jrat(*gd->p) : json(nullptr);
    report["group"] = jg;
    report["theta"] = jrat(theta(*gd));
    report["tau"] = jrat(level_tau(*gd));
    report["alpha"] = jrat(alpha_exponent(*gd, sp.t));
    RBound rg = r_bound_general(*gd, sp);
    json jr;
    jr["threshold"] = jrat(rg.threshold);
    jr["threshold_value"] = round4(rg.threshold.to_double());
    jr["r0_upper"] = rg.r0_upper;
    report["r_general"] = jr;
    if (gd->p) {
      report["r_smooth"] = jrat(r_bound_smooth(*gd, sp));
      report["r_weighted"] = round4(r_bound_weighted(*gd->p, gd->dim_G, gd->a, sp));
      if (sp.rho_w) {
        double mu = (*gd->p * Rational(gd->dim_G) * Rational(sp.deg_f) / gd->a).to_double();
        report["r_weighted_general"] = round4(weighted_sieve_threshold(mu, sp.t, *sp.rho_w));
      }
    }
    if (p.sln >= 3) report["r_weighted_sln"] = round4(r_bound_weighted_sln(p.sln, sp));
    if (p.literal_variant && p.sln >= 2)
      report["ne_cubed_variant"] = jrat(r_bound_ne_cubed_variant(p.sln, sp));
  }
  if (p.division > 0) {
    R0Division rd = r0_division_algebra(p.division, sp);
    json jd;
    jd["p_n"] = jrat(rd.p_n);
    jd["threshold"] = round4(rd.threshold);
    jd["r0_upper"] = rd.r0_upper;
    report["r0_division"] = jd;
  }
  report["r0_uniform_shape"] = round4(r0_uniform_shape(sp));
  emit(report, g);
}

// ------------------------------------------------------------- uniformity ----

struct UniformityParams {
  std::int64_t q = 2;
  std::string norm = "max";
  std::vector<double> grid;
  std::int64_t budget = 1'000'000'000;
};

void run_uniformity(const UniformityParams& p, const GlobalOpts& g) {
  if (p.grid.empty()) throw ValidationError("the threshold grid must not be empty");
  UniformityReport rep =
      uniformity_report(p.q, p.grid, norm_kind_from_string(p.norm), EnumBudget{p.budget});
  json config;
  config["q"] = p.q;
  config["norm"] = p.norm;
  config["grid"] = p.grid;
  config["budget"] = p.budget;
  config["out"] = g.out_path;
  config["csv"] = g.csv_path;
  json report = report_head("uniformity", config);
  report["ordering"] = "point-norm";
  report["q"] = rep.q;
  report["index"] = rep.index;
  if (rep.index <= 200) {
    json reps = json::array();
    for (const Mat& r : rep.coset_reps) reps.push_back(jmat(r));
    report["coset_reps"] = reps;
  }
  json rows = json::array();
  std::string csv = "T,total,max_deviation\n";
  for (const auto& row : rep.rows) {
    json cell;
    cell["T"] = sig12(row.T);
    cell["total"] = row.total;
    cell["coset_counts"] = row.coset_counts;
    cell["max_deviation"] = sig12(row.max_deviation);
    rows.push_back(cell);
    csv += std::to_string(static_cast<std::int64_t>(row.T)) + "," + std::to_string(row.total) +
           "," + json(sig12(row.max_deviation)).dump() + "\n";
  }
  report["rows"] = rows;
  emit(report, g, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affine linear sieve experiments on determinant-m matrix varieties"};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config");
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--out", g.out_path, "write the JSON report to this path")->capture_default_str();
  app.add_option("--csv", g.csv_path, "write the grid rows as CSV to this path")
      ->capture_default_str();
  app.add_option("--workers", g.workers, "worker pool size; results do not depend on it")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();

  CountParams cp;
  CLI::App* count = app.add_subcommand("count", "count determinant-m matrices in norm balls");
  count->add_option("--m", cp.m, "determinant")->required();
  count->add_option("--n", cp.n, "matrix dimension")->capture_default_str();
  count->add_option("--norm", cp.norm, "norm kind: max or frobenius")->capture_default_str();
  count->add_option("--grid", cp.grid, "norm thresholds")->delimiter(',')->required();
  count->add_option("--budget", cp.budget, "enumeration visit budget")->capture_default_str();

  DensityParams dp;
  CLI::App* densities =
      app.add_subcommand("densities", "local congruence densities of a polynomial on an orbit");
  densities->add_option("--m", dp.m, "determinant")->capture_default_str();
  densities->add_option("--n", dp.n, "matrix dimension")->capture_default_str();
  densities->add_option("--f", dp.f, "polynomial in entries x<row><col>")->capture_default_str();
  densities->add_option("--N", dp.N, "declared normalizer dividing every orbit value")
      ->capture_default_str();
  densities->add_option("--t", dp.t, "declared factor count")->capture_default_str();
  densities->add_option("--pmax", dp.pmax, "largest prime modulus")->capture_default_str();
  densities->add_option("--dmax", dp.dmax, "largest product for multiplicativity checks")
      ->capture_default_str();
  densities->add_option("--orbit-index", dp.orbit_index, "which orbit representative to use")
      ->capture_default_str();
  densities->add_option("--cap", dp.cap, "residue orbit state cap")->capture_default_str();

  SieveParamsCli sp;
  CLI::App* sieve = app.add_subcommand("sieve", "sift orbit values and measure remainders");
  sieve->add_option("--m", sp.m, "determinant")->capture_default_str();
  sieve->add_option("--n", sp.n, "matrix dimension")->capture_default_str();
  sieve->add_option("--f", sp.f, "polynomial in entries x<row><col>")->capture_default_str();
  sieve->add_option("--N", sp.N, "declared normalizer")->capture_default_str();
  sieve->add_option("--t", sp.t, "declared factor count")->capture_default_str();
  sieve->add_option("--T", sp.T, "norm threshold")->capture_default_str();
  sieve->add_option("--norm", sp.norm, "norm kind: max or frobenius")->capture_default_str();
  sieve->add_option("--z", sp.z, "sift primes below z")->capture_default_str();
  sieve->add_option("--tau", sp.tau, "level exponent override; 0 uses the spectral value")
      ->capture_default_str();
  sieve->add_option("--orbit-index", sp.orbit_index, "which orbit representative to use")
      ->capture_default_str();
  sieve->add_option("--rmax", sp.rmax, "largest squarefree modulus in the remainder table")
      ->capture_default_str();
  sieve->add_option("--budget", sp.budget, "enumeration visit budget")->capture_default_str();

  ConstructParams xp;
  CLI::App* construct =
      app.add_subcommand("construct", "build matrices with every entry prime and det 2^(n-1)");
  construct->add_option("--n", xp.n, "matrix dimension")->capture_default_str();
  construct->add_option("--seed", xp.seed, "base seed; certificate k uses seed+k")
      ->capture_default_str();
  construct->add_option("--count", xp.count, "number of certificates")->capture_default_str();
  construct->add_flag("--allow-n4", xp.allow_n4, "enable the best-effort four-dimensional build");
  construct->add_option("--search-bound", xp.search_bound, "initial progression search bound")
      ->capture_default_str();
  construct->add_option("--solver-t-start", xp.solver_T_start, "initial solver threshold")
      ->capture_default_str();
  construct->add_option("--solver-t-cap", xp.solver_T_cap, "largest solver threshold")
      ->capture_default_str();
  construct
      ->add_option("--max-frame-attempts", xp.max_frame_attempts, "frames tried before giving up")
      ->capture_default_str();
  construct->add_option("--budget", xp.budget, "solver visit budget")->capture_default_str();

  BoundsParams bp;
  CLI::App* bounds = app.add_subcommand("bounds", "saturation-bound calculators");
  bounds->add_option("--sln", bp.sln, "use the unimodular group of this dimension");
  bounds->add_option("--division", bp.division, "division-algebra family dimension (prime)");
  bounds->add_option("--t", bp.t, "sieve dimension")->capture_default_str();
  bounds->add_option("--deg", bp.deg, "polynomial degree")->capture_default_str();
  bounds->add_option("--rho-w", bp.rho_w, "free sieve weight in (0, 4t)");
  bounds->add_flag("--literal-variant", bp.literal_variant,
                   "also print the published cubic-exponent variant");
  bounds->add_option("--dim-g", bp.dim_g, "group dimension for custom group data");
  bounds->add_option("--a", bp.a, "ball volume growth exponent");
  bounds->add_option("--b", bp.b, "log power in the volume growth")->capture_default_str();
  bounds->add_option("--ne", bp.ne, "least even integer >= p/2");
  bounds->add_option("--p", bp.p_exponent, "integrability exponent, integer or num/den");

  UniformityParams up;
  CLI::App* uniformity =
      app.add_subcommand("uniformity", "coset equidistribution in unimodular congruence classes");
  uniformity->add_option("--q", up.q, "congruence modulus")->required();
  uniformity->add_option("--norm", up.norm, "norm kind: max or frobenius")->capture_default_str();
  uniformity->add_option("--grid", up.grid, "norm thresholds")->delimiter(',')->required();
  uniformity->add_option("--budget", up.budget, "enumeration visit budget")->capture_default_str();

  for (CLI::App* sub : {count, densities, sieve, construct, bounds, uniformity})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*count) run_count(cp, g);
    if (*densities) run_densities(dp, g);
    if (*sieve) run_sieve(sp, g);
    if (*construct) run_construct(xp, g);
    if (*bounds) run_bounds(bp, g);
    if (*uniformity) run_uniformity(up, g);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const SearchExhausted& e) {
    std::cerr << "search exhausted: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
