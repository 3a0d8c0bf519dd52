#include "subcert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subcert/errors.hpp"
#include "subcert/extremal.hpp"
#include "subcert/matrix_io.hpp"
#include "subcert/report.hpp"
#include "subcert/selector.hpp"
#include "subcert/spectral.hpp"
#include "subcert/stiefel.hpp"

namespace subcert::cli {

namespace {

using report::Array;
using report::Json;
using report::Object;

// ---------------------------------------------------------------------------
// Small formatting helpers

std::string human_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Json vec2_json(Vec2 v) { return Array{v.x, v.y}; }

Json structure_json(const ClusterStructure& s) {
  Object o;
  o["sizes"] = Array{s.p, s.q, s.r};
  o["values"] = Array{vec2_json(s.x), vec2_json(s.y), vec2_json(s.z)};
  Array clusters;
  for (int c = 0; c < 3; ++c) {
    Array members;
    for (size_t i = 0; i < s.assignment.size(); ++i)
      if (s.assignment[i] == c) members.push_back(static_cast<int>(i) + 1);
    clusters.push_back(std::move(members));
  }
  o["clusters"] = std::move(clusters);
  return o;
}

Json certificate_json(const PairCertificate& c) {
  Object o;
  o["i"] = c.i + 1;
  o["j"] = c.j + 1;
  o["sigma2"] = c.sigma2;
  o["path"] = to_string(c.path);
  o["depth"] = c.depth;
  o["case_b_value"] = c.caseB_value ? Json(*c.caseB_value) : Json(nullptr);
  return o;
}

int emit(std::ostream& out, std::ostream& err, const std::string& command,
         Object input, Object result, Array checks, const std::string& human,
         int code) {
  Object rep;
  rep["command"] = command;
  rep["input"] = std::move(input);
  rep["result"] = std::move(result);
  rep["checks"] = std::move(checks);
  rep["exit_code"] = code;
  rep["exit_code_semantics"] = report::exit_code_semantics();
  out << Json(std::move(rep)).dump();
  err << human << "\n";
  return code;
}

int fail(std::ostream& out, std::ostream& err, const std::string& command,
         const std::string& type, const std::string& message, int code,
         std::optional<double> residual = std::nullopt) {
  Object eo;
  eo["type"] = type;
  eo["message"] = message;
  if (residual) eo["residual"] = *residual;
  Object rep;
  rep["command"] = command;
  rep["error"] = std::move(eo);
  rep["exit_code"] = code;
  rep["exit_code_semantics"] = report::exit_code_semantics();
  out << Json(std::move(rep)).dump();
  err << "error (" << type << "): " << message << "\n";
  return code;
}

FileFormat parse_format(const std::string& s) {
  if (s == "csv") return FileFormat::Csv;
  if (s == "json") return FileFormat::Json;
  return FileFormat::Auto;
}

const char* format_name(const std::string& path, FileFormat fmt) {
  if (fmt == FileFormat::Csv) return "csv";
  if (fmt == FileFormat::Json) return "json";
  const auto dot = path.rfind('.');
  return (dot != std::string::npos && path.substr(dot) == ".json") ? "json"
                                                                   : "csv";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base, int n, int trial) {
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
                            static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial));
  return base ^ splitmix64(key);
}

int checked_int(std::int64_t v, const char* what) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ParamError(std::string(what) + " out of range: " + std::to_string(v));
  return static_cast<int>(v);
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the exit code after writing its report.

struct CertifyArgs {
  std::string path;
  std::vector<std::uint64_t> random;  // n seed
  std::string format;
};

int cmd_certify(std::ostream& out, std::ostream& err, const CertifyArgs& args) {
  Object input;
  std::optional<StiefelMatrix> loaded;
  if (!args.random.empty()) {
    if (!args.path.empty())
      throw ParamError("give either a file path or --random, not both");
    const int n = checked_int(static_cast<std::int64_t>(args.random[0]), "n");
    if (n < 3) throw ParamError("--random needs n >= 3, got " + std::to_string(n));
    loaded = sample_haar(n, args.random[1]);
    input["source"] = "--random";
    input["seed"] = std::to_string(args.random[1]);
  } else {
    if (args.path.empty()) throw ParamError("give a file path or --random n seed");
    loaded = read_matrix(args.path, parse_format(args.format));
    input["source"] = args.path;
  }
  const StiefelMatrix& a = *loaded;
  input["n"] = a.n();

  const PairCertificate cert = certify_pair(a);
  const PairCertificate exhaustive = brute_force_best(a);
  const auto equality = detect_equality(a);

  Object result;
  result["bound"] = cert.bound;
  result["certificate"] = certificate_json(cert);
  Object ex;
  ex["i"] = exhaustive.i + 1;
  ex["j"] = exhaustive.j + 1;
  ex["sigma2"] = exhaustive.sigma2;
  result["exhaustive"] = std::move(ex);
  result["equality"] = equality ? structure_json(*equality) : Json(nullptr);
  result["residual"] = a.residual();

  const bool ok = cert.sigma2 >= cert.bound - 1e-10 &&
                  exhaustive.sigma2 >= cert.sigma2 - 1e-13 &&
                  a.residual() <= StiefelMatrix::kOrthTol;
  Array checks;
  checks.push_back(report::make_check("certificate_sound",
                                      cert.sigma2 >= cert.bound - 1e-10,
                                      cert.sigma2 - cert.bound, 1e-10));
  checks.push_back(report::make_check("exhaustive_dominates",
                                      exhaustive.sigma2 >= cert.sigma2 - 1e-13,
                                      exhaustive.sigma2 - cert.sigma2, 1e-13));
  checks.push_back(report::make_check("orthonormality_residual",
                                      a.residual() <= StiefelMatrix::kOrthTol,
                                      a.residual(), StiefelMatrix::kOrthTol));

  const std::string human =
      "certify: n=" + std::to_string(a.n()) + " pair (" + std::to_string(cert.i + 1) +
      "," + std::to_string(cert.j + 1) + ") sigma2=" + human_num(cert.sigma2) +
      " >= bound " + human_num(cert.bound) + " via " + to_string(cert.path) +
      (equality ? "; equality family (" + std::to_string(equality->p) + "," +
                      std::to_string(equality->q) + "," + std::to_string(equality->r) + ")"
                : "; equality: none");
  return emit(out, err, "certify", std::move(input), std::move(result),
              std::move(checks), human, ok ? 0 : 3);
}

struct GenerateArgs {
  std::vector<std::int64_t> extremal;  // n p q r
  double orientation = 0.0;
  bool orientation_given = false;
  std::vector<std::uint64_t> haar;  // n seed
  std::string out_path;
  std::string format;
};

int cmd_generate(std::ostream& out, std::ostream& err, const GenerateArgs& args) {
  if (args.extremal.empty() == args.haar.empty())
    throw ParamError("give exactly one of --extremal or --haar");
  if (args.orientation_given && args.extremal.empty())
    throw ParamError("--orientation only applies to --extremal");

  Object input;
  std::optional<StiefelMatrix> built;
  Object result;
  std::string what;
  if (!args.extremal.empty()) {
    const int n = checked_int(args.extremal[0], "n");
    const int p = checked_int(args.extremal[1], "p");
    const int q = checked_int(args.extremal[2], "q");
    const int r = checked_int(args.extremal[3], "r");
    ExtremalFamily fam = construct_extremal(n, p, q, r, args.orientation);
    result["structure"] = structure_json(fam.structure);
    built = std::move(fam.matrix);
    input["source"] = "--extremal";
    input["composition"] = Array{p, q, r};
    input["orientation"] = args.orientation;
    what = "extremal (" + std::to_string(p) + "," + std::to_string(q) + "," +
           std::to_string(r) + ")";
  } else {
    const int n = checked_int(static_cast<std::int64_t>(args.haar[0]), "n");
    if (n < 3) throw ParamError("--haar needs n >= 3, got " + std::to_string(n));
    built = sample_haar(n, args.haar[1]);
    input["source"] = "--haar";
    input["seed"] = std::to_string(args.haar[1]);
    what = "random sample";
  }
  const StiefelMatrix& a = *built;
  input["n"] = a.n();

  const FileFormat fmt = parse_format(args.format);
  write_matrix(args.out_path, a, fmt);
  result["out"] = args.out_path;
  result["format"] = format_name(args.out_path, fmt);
  result["n"] = a.n();
  result["residual"] = a.residual();

  const bool ok = a.residual() <= 1e-12;
  Array checks;
  checks.push_back(report::make_check("orthonormality_residual",
                                      a.residual() <= 1e-12, a.residual(), 1e-12));

  const std::string human = "generate: wrote n=" + std::to_string(a.n()) + " " +
                            what + " to " + args.out_path;
  return emit(out, err, "generate", std::move(input), std::move(result),
              std::move(checks), human, ok ? 0 : 3);
}

struct SpectrumArgs {
  std::string path;
  std::string format;
};

int cmd_spectrum(std::ostream& out, std::ostream& err, const SpectrumArgs& args) {
  const StiefelMatrix a = read_matrix(args.path, parse_format(args.format));
  const int n = a.n();
  const RowSquares rs = row_squares(a);
  const SymMatrix g = build_G(rs);
  const SymMatrix m = build_M(rs);
  const SymmetricSpectrum sg = eigen(g, false);
  const SymmetricSpectrum sm = eigen(m, false);
  int oi = 0, oj = 0;
  const double moff = min_offdiag(m, &oi, &oj);

  Object input;
  input["source"] = args.path;
  input["n"] = n;

  Object gj;
  gj["eigenvalues"] = Array(sg.eigenvalues.begin(), sg.eigenvalues.end());
  gj["positive_count"] = sg.positive_count;
  gj["trace"] = g.trace();
  gj["row_sum_residual"] = row_sum_residual(g, 0.0);

  Object mj;
  mj["eigenvalues"] = Array(sm.eigenvalues.begin(), sm.eigenvalues.end());
  mj["positive_count"] = sm.positive_count;
  mj["row_sum_residual"] = row_sum_residual(m, 2.0 / n);
  Object mo;
  mo["value"] = moff;
  mo["i"] = oi + 1;
  mo["j"] = oj + 1;
  mj["min_offdiag"] = std::move(mo);
  try {
    const auto comps = support_components(m);
    Array arr;
    for (const auto& comp : comps) {
      Array rows;
      for (const int k : comp) rows.push_back(k + 1);
      arr.push_back(std::move(rows));
    }
    mj["support_components"] = std::move(arr);
  } catch (const ValidationError&) {
    // Negative entries: the support graph is not defined for this matrix.
    mj["support_components"] = nullptr;
  }

  Object result;
  result["G"] = std::move(gj);
  result["M"] = std::move(mj);

  const double min_off_tol = std::max(1e-12, 100.0 * a.residual());
  Array checks;
  checks.push_back(report::make_check("g_trace", std::abs(g.trace() - 4.0 / n) <= 1e-9,
                                      std::abs(g.trace() - 4.0 / n), 1e-9));
  checks.push_back(report::make_check("g_row_sum", row_sum_residual(g, 0.0) <= 1e-9,
                                      row_sum_residual(g, 0.0), 1e-9));
  checks.push_back(report::make_check("g_positive_inertia", sg.positive_count <= 2,
                                      static_cast<double>(sg.positive_count), 2.0));
  checks.push_back(report::make_check("m_row_sum",
                                      row_sum_residual(m, 2.0 / n) <= 1e-9,
                                      row_sum_residual(m, 2.0 / n), 1e-9));
  checks.push_back(report::make_check("m_min_offdiag_nonpositive",
                                      moff <= min_off_tol, moff, min_off_tol));

  const bool ok = std::abs(g.trace() - 4.0 / n) <= 1e-9 &&
                  row_sum_residual(g, 0.0) <= 1e-9 && sg.positive_count <= 2 &&
                  row_sum_residual(m, 2.0 / n) <= 1e-9 && moff <= min_off_tol;

  const std::string human = "spectrum: n=" + std::to_string(n) + "; G inertia " +
                            std::to_string(sg.positive_count) +
                            " positive; min offdiag M " + human_num(moff) +
                            (ok ? "; checks pass" : "; CHECKS FAIL");
  return emit(out, err, "spectrum", std::move(input), std::move(result),
              std::move(checks), human, ok ? 0 : 3);
}

struct PolygonArgs {
  std::string path;
  bool classify = false;
  std::string format;
};

int cmd_polygon(std::ostream& out, std::ostream& err, const PolygonArgs& args) {
  const PolygonInstance poly = read_polygon(args.path, parse_format(args.format));
  const int n = poly.n();
  const PolygonDefect d = polygon_defect(poly);

  Object input;
  input["source"] = args.path;
  input["n"] = n;

  Object result;
  result["defect"] = d.value;
  Object am;
  am["i"] = d.i + 1;
  am["j"] = d.j + 1;
  result["argmax"] = std::move(am);
  result["bound"] = 2.0 / n;
  std::string eq_text;
  if (args.classify) {
    const auto cls = polygon_equality_classify(poly);
    result["classification"] = cls ? structure_json(*cls) : Json(nullptr);
    eq_text = cls ? "; equality family (" + std::to_string(cls->p) + "," +
                        std::to_string(cls->q) + "," + std::to_string(cls->r) + ")"
                  : "; equality: none";
  }

  Array checks;
  checks.push_back(report::make_check("defect_bound", d.value >= 2.0 / n - 1e-10,
                                      d.value - 2.0 / n, 1e-10));

  const bool ok = d.value >= 2.0 / n - 1e-10;
  const std::string human = "polygon: n=" + std::to_string(n) + " defect " +
                            human_num(d.value) + " at pair (" +
                            std::to_string(d.i + 1) + "," + std::to_string(d.j + 1) +
                            "); bound " + human_num(2.0 / n) + eq_text;
  return emit(out, err, "polygon", std::move(input), std::move(result),
              std::move(checks), human, ok ? 0 : 3);
}

struct SweepArgs {
  std::vector<std::int64_t> n_range;  // lo hi
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

struct TrialRecord {
  double margin = 0.0;        // cert.sigma2 * sqrt(n) - 1
  double brute_sigma2 = 0.0;
  bool sound = false;
  bool dominated = false;
  bool case_b_exists = false;
  bool exception = false;
};

int cmd_sweep(std::ostream& out, std::ostream& err, const SweepArgs& args) {
  const int lo = checked_int(args.n_range[0], "n-range lo");
  const int hi = checked_int(args.n_range[1], "n-range hi");
  const int trials = checked_int(args.trials, "trials");
  if (lo < 3 || hi < lo) throw ParamError("need 3 <= lo <= hi in --n-range");
  if (trials < 1) throw ParamError("--trials must be >= 1");

  const int span = hi - lo + 1;
  const std::int64_t total = static_cast<std::int64_t>(span) * trials;
  std::vector<TrialRecord> rec(static_cast<size_t>(total));

  // Per-trial seeds depend only on (n, trial), so any execution order gives
  // the same records; aggregation below is serial and in index order.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const int n = lo + static_cast<int>(idx / trials);
    const int t = static_cast<int>(idx % trials);
    TrialRecord& r = rec[static_cast<size_t>(idx)];
    try {
      const StiefelMatrix a = sample_haar(n, trial_seed(args.seed, n, t));
      const PairCertificate cert = certify_pair(a);
      const PairCertificate exhaustive = serial_ref::brute_force_best(a);
      const RowSquares rs = row_squares(a);
      double min_cond = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j)
          min_cond = std::min(min_cond, pair_condition_lhs(rs, i, j));
      r.margin = cert.sigma2 * std::sqrt(static_cast<double>(n)) - 1.0;
      r.brute_sigma2 = exhaustive.sigma2;
      r.sound = cert.sigma2 >= cert.bound - 1e-10;
      r.dominated = exhaustive.sigma2 >= cert.sigma2 - 1e-13;
      r.case_b_exists = min_cond <= 1e-12;
    } catch (const Error&) {
      r.exception = true;
    }
  }

  std::int64_t bad_sound = 0, bad_dom = 0, bad_caseb = 0, bad_exc = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  Array per_n;
  for (int n = lo; n <= hi; ++n) {
    double nm = std::numeric_limits<double>::infinity();
    double nb = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      const TrialRecord& r =
          rec[static_cast<size_t>(static_cast<std::int64_t>(n - lo) * trials + t)];
      if (r.exception) {
        ++bad_exc;
        continue;
      }
      if (!r.sound) ++bad_sound;
      if (!r.dominated) ++bad_dom;
      if (!r.case_b_exists) ++bad_caseb;
      nm = std::min(nm, r.margin);
      nb = std::min(nb, r.brute_sigma2);
    }
    min_margin = std::min(min_margin, nm);
    Object row;
    row["n"] = n;
    row["min_margin"] = nm;
    row["min_brute_sigma2"] = nb;
    per_n.push_back(std::move(row));
  }
  const std::int64_t violations = bad_sound + bad_dom + bad_caseb + bad_exc;

  Object input;
  input["n_lo"] = lo;
  input["n_hi"] = hi;
  input["trials_per_n"] = trials;
  input["seed"] = std::to_string(args.seed);

  Object result;
  Object vio;
  vio["soundness"] = bad_sound;
  vio["dominance"] = bad_dom;
  vio["case_b"] = bad_caseb;
  vio["exceptions"] = bad_exc;
  vio["total"] = violations;
  result["violations"] = std::move(vio);
  result["min_margin"] = min_margin;
  result["per_n"] = std::move(per_n);

  Array checks;
  checks.push_back(report::make_check("soundness_violations", bad_sound == 0,
                                      static_cast<double>(bad_sound), 0.0));
  checks.push_back(report::make_check("dominance_violations", bad_dom == 0,
                                      static_cast<double>(bad_dom), 0.0));
  checks.push_back(report::make_check("case_b_violations", bad_caseb == 0,
                                      static_cast<double>(bad_caseb), 0.0));

  const std::string human =
      "sweep: n " + std::to_string(lo) + ".." + std::to_string(hi) + ", " +
      std::to_string(trials) + " trials each; " + std::to_string(violations) +
      " violations; min margin " + human_num(min_margin);
  return emit(out, err, "sweep", std::move(input), std::move(result),
              std::move(checks), human, violations == 0 ? 0 : 3);
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"2x2 submatrix invertibility certificates for n x 2 matrices "
               "with orthonormal columns"};
  app.name("subcert");
  app.require_subcommand(1);

  CertifyArgs cert_args;
  CLI::App* certify = app.add_subcommand(
      "certify", "certify a well-invertible 2x2 submatrix of a matrix");
  certify->add_option("path", cert_args.path, "matrix file (csv or json)");
  certify->add_option("--random", cert_args.random, "sample n seed")->expected(2);
  certify->add_option("--format", cert_args.format, "input format override")
      ->check(CLI::IsMember({"csv", "json"}));

  GenerateArgs gen_args;
  CLI::App* generate =
      app.add_subcommand("generate", "write an equality family or random sample");
  generate->add_option("--extremal", gen_args.extremal, "n p q r")->expected(4);
  CLI::Option* orient_opt =
      generate->add_option("--orientation", gen_args.orientation,
                           "rotate the extremal family (radians)");
  generate->add_option("--haar", gen_args.haar, "n seed")->expected(2);
  generate->add_option("--out", gen_args.out_path, "output path")->required();
  generate->add_option("--format", gen_args.format, "output format override")
      ->check(CLI::IsMember({"csv", "json"}));

  SpectrumArgs spec_args;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "eigenstructure of the certificate matrices");
  spectrum->add_option("path", spec_args.path, "matrix file")->required();
  spectrum->add_option("--format", spec_args.format, "input format override")
      ->check(CLI::IsMember({"csv", "json"}));

  PolygonArgs poly_args;
  CLI::App* polygon =
      app.add_subcommand("polygon", "pair defect of a closed polygon");
  polygon->add_option("path", poly_args.path, "polygon file")->required();
  polygon->add_flag("--classify", poly_args.classify,
                    "recognize equality families");
  polygon->add_option("--format", poly_args.format, "input format override")
      ->check(CLI::IsMember({"csv", "json"}));

  SweepArgs sweep_args;
  CLI::App* sweep =
      app.add_subcommand("sweep", "batch random-trial soundness experiment");
  sweep->add_option("--n-range", sweep_args.n_range, "lo hi")
      ->expected(2)
      ->required();
  sweep->add_option("--trials", sweep_args.trials, "trials per n")->required();
  sweep->add_option("--seed", sweep_args.seed, "base seed")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(out, err, "cli", "parameter", e.what(), 6);
  }
  gen_args.orientation_given = orient_opt->count() > 0;

  const std::string command = certify->parsed()    ? "certify"
                              : generate->parsed() ? "generate"
                              : spectrum->parsed() ? "spectrum"
                              : polygon->parsed()  ? "polygon"
                                                   : "sweep";
  try {
    if (certify->parsed()) return cmd_certify(out, err, cert_args);
    if (generate->parsed()) return cmd_generate(out, err, gen_args);
    if (spectrum->parsed()) return cmd_spectrum(out, err, spec_args);
    if (polygon->parsed()) return cmd_polygon(out, err, poly_args);
    return cmd_sweep(out, err, sweep_args);
  } catch (const OrthonormalityError& e) {
    return fail(out, err, command, "validation", e.what(), 2, e.residual());
  } catch (const ParamError& e) {
    return fail(out, err, command, "parameter", e.what(), 6);
  } catch (const ParseError& e) {
    return fail(out, err, command, "parse", e.what(), 5);
  } catch (const IoError& e) {
    return fail(out, err, command, "io", e.what(), 4);
  } catch (const InvariantError& e) {
    return fail(out, err, command, "invariant", e.what(), 3);
  } catch (const ValidationError& e) {
    return fail(out, err, command, "validation", e.what(), 2);
  } catch (const std::exception& e) {
    return fail(out, err, command, "invariant", e.what(), 3);
  }
}

}  // namespace subcert::cli
