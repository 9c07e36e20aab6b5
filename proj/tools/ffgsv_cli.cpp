// SPDX-License-Identifier: Apache-2.0
// Command-line driver over the C API.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ffgsv/ffgsv.h"

namespace {

namespace fs = std::filesystem;

/// Carries the process exit code: 2 for degeneracy, 1 for everything else.
struct Failure {
  int code;
  std::string message;
};

void check(ffgsv_status st, const std::string& what) {
  if (st == FFGSV_OK) return;
  const int code = st == FFGSV_E_DEGENERATE ? 2 : 1;
  throw Failure{code, what + ": " + ffgsv_last_error()};
}

[[noreturn]] void usage(const std::string& msg) { throw Failure{1, msg}; }

struct PolyDel { void operator()(ffgsv_poly* p) const { ffgsv_poly_free(p); } };
struct MatDel { void operator()(ffgsv_matrix* m) const { ffgsv_matrix_free(m); } };
struct TraceDel { void operator()(ffgsv_trace* t) const { ffgsv_trace_free(t); } };
struct SpecDel {
  void operator()(ffgsv_experiment_spec* s) const { ffgsv_experiment_spec_free(s); }
};
struct ExpDel {
  void operator()(ffgsv_experiment* e) const { ffgsv_experiment_free(e); }
};
using Poly = std::unique_ptr<ffgsv_poly, PolyDel>;
using Mat = std::unique_ptr<ffgsv_matrix, MatDel>;
using Trace = std::unique_ptr<ffgsv_trace, TraceDel>;

std::string take_string(char* s) {
  std::string out(s ? s : "");
  ffgsv_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{1, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{1, "cannot write '" + path + "'"};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (cur.empty()) usage("empty item in list '" + s + "'");
    out.push_back(cur);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage("not a number: '" + item + "'");
    }
  }
  return out;
}

Poly load_poly(const std::string& path, int arity) {
  ffgsv_poly* p = nullptr;
  check(ffgsv_poly_parse(read_file(path).c_str(), arity, &p), path);
  return Poly(p);
}

Mat load_matrix(const std::string& path) {
  ffgsv_matrix* m = nullptr;
  check(ffgsv_matrix_parse(read_file(path).c_str(), &m), path);
  return Mat(m);
}

std::string poly_text(const ffgsv_poly* p, bool pretty) {
  char* s = nullptr;
  check(pretty ? ffgsv_poly_to_string(p, &s) : ffgsv_poly_format(p, &s),
        "format");
  std::string out = take_string(s);
  if (pretty) out += '\n';
  return out;
}

std::vector<double> roots_of(const ffgsv_trace* t, std::size_t i) {
  std::size_t n = 0;
  check(ffgsv_trace_roots(t, i, nullptr, 0, &n), "trace");
  std::vector<double> r(n);
  check(ffgsv_trace_roots(t, i, r.data(), r.size(), &n), "trace");
  return r;
}

/// Run bookkeeping written next to every CSV.
struct Manifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> params;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void set(const std::string& k, const std::string& v) { params.emplace_back(k, v); }

  std::string text(const std::string& extra = {}) const {
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::string s = "subcommand = " + subcommand + "\n";
    s += std::string("version = ") + ffgsv_version() + "\n";
    for (const auto& [k, v] : params) s += k + " = " + v + "\n";
    s += extra;
    s += "duration_seconds = " + fmt(secs) + "\n";
    return s;
  }
};

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

void emit_with_manifest(const std::string& out, const std::string& text,
                        const Manifest& m) {
  emit(out, text);
  if (!out.empty() && out != "-") write_file(out + ".manifest.txt", m.text());
}

// ---- classical --------------------------------------------------------

struct ClassicalOpts {
  std::string family;
  int n = -1, s = -1, t = -1, k = -1;
  bool pretty = false;
  std::string out;
};

void run_classical(const ClassicalOpts& o) {
  ffgsv_poly* p = nullptr;
  if (o.family == "hermite") {
    if (o.n < 0) usage("hermite needs --n");
    check(ffgsv_classical(FFGSV_FAMILY_HERMITE, o.n, 0, 0, &p), "classical");
  } else if (o.family == "laguerre") {
    if (o.s < 0 || o.k < 0) usage("laguerre needs --s and --k");
    check(ffgsv_classical(FFGSV_FAMILY_LAGUERRE, o.s, o.k, 0, &p), "classical");
  } else {
    if (o.s < 0 || o.t < 0 || o.k < 0) usage("jacobi needs --s, --t and --k");
    check(ffgsv_classical(FFGSV_FAMILY_JACOBI, o.s, o.t, o.k, &p), "classical");
  }
  Poly poly(p);
  emit(o.out, poly_text(poly.get(), o.pretty));
}

// ---- convolve ---------------------------------------------------------

struct ConvolveOpts {
  std::string kind, p, q, out;
  int m = -1, n = -1;
  bool pretty = false;
};

void run_convolve(const ConvolveOpts& o) {
  ffgsv_poly* r = nullptr;
  if (o.kind == "additive") {
    Poly p = load_poly(o.p, 1), q = load_poly(o.q, 1);
    int n = o.n;
    if (n < 0) n = std::max(ffgsv_poly_degree(p.get(), 0),
                            ffgsv_poly_degree(q.get(), 0));
    check(ffgsv_additive_convolve(p.get(), q.get(), n, &r), "convolve");
  } else {
    if (o.m < 0 || o.n < 0) usage("rect needs --m and --n");
    Poly p = load_poly(o.p, 2), q = load_poly(o.q, 2);
    check(ffgsv_rect_convolve(p.get(), q.get(), o.m, o.n, &r), "convolve");
  }
  Poly res(r);
  emit(o.out, poly_text(res.get(), o.pretty));
}

// ---- evolve -----------------------------------------------------------

struct EvolveOpts {
  std::string kind;
  std::string poly, matrix, matrix_b;
  std::string theta;
  double theta_max = -1;
  int steps = -1;
  std::string shape;
  std::string spec = "gsvd";
  bool exact = false, floating = false;
  std::string method = "operator";
  std::string out;
};

std::vector<int> parse_shape(const std::string& s) {
  std::vector<int> v;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage("bad --shape '" + s + "'");
    }
  }
  if (v.size() != 3) usage("--shape takes k,s,t");
  return v;
}

/// Builds the input polynomial and model parameters for an evolve or drift
/// run. Shape flags must agree with matrix dimensions.
struct ModelInput {
  Poly p;
  ffgsv_model model = FFGSV_MODEL_HERMITE;
  int params[3] = {0, 0, 0};
};

ModelInput model_input(const std::string& kind, const std::string& poly,
                       const std::string& matrix, const std::string& matrix_b,
                       const std::string& shape, bool want_exact) {
  ModelInput in;
  const bool have_poly = !poly.empty();
  if (have_poly == !matrix.empty()) {
    usage("give exactly one of --poly and --matrix");
  }
  ffgsv_poly* raw = nullptr;
  if (kind == "hermite") {
    in.model = FFGSV_MODEL_HERMITE;
    if (have_poly) {
      in.p = load_poly(poly, 1);
    } else {
      Mat a = load_matrix(matrix);
      check(ffgsv_charpoly(a.get(), want_exact, &raw), "charpoly");
      in.p.reset(raw);
    }
  } else if (kind == "laguerre") {
    in.model = FFGSV_MODEL_LAGUERRE;
    if (have_poly) {
      in.p = load_poly(poly, 2);
      in.params[0] = ffgsv_poly_degree(in.p.get(), 0);
      in.params[1] = ffgsv_poly_degree(in.p.get(), 1);
    } else {
      Mat c = load_matrix(matrix);
      check(ffgsv_singular_charpoly(c.get(), want_exact, &raw),
            "singular charpoly");
      in.p.reset(raw);
      in.params[0] = static_cast<int>(ffgsv_matrix_rows(c.get()));
      in.params[1] = static_cast<int>(ffgsv_matrix_cols(c.get()));
    }
  } else {
    in.model = FFGSV_MODEL_GSVD;
    std::vector<int> sh;
    if (!shape.empty()) sh = parse_shape(shape);
    if (have_poly) {
      if (sh.empty()) usage("gsvd from a polynomial needs --shape k,s,t");
      in.p = load_poly(poly, 3);
    } else {
      if (matrix_b.empty()) usage("gsvd from matrices needs --matrix-b");
      Mat a = load_matrix(matrix), b = load_matrix(matrix_b);
      const int k = static_cast<int>(ffgsv_matrix_cols(a.get()));
      const int s = static_cast<int>(ffgsv_matrix_rows(a.get()));
      const int t = static_cast<int>(ffgsv_matrix_rows(b.get()));
      if (!sh.empty() && (sh[0] != k || sh[1] != s || sh[2] != t)) {
        usage("--shape " + shape + " does not match the matrices (" +
              std::to_string(k) + "," + std::to_string(s) + "," +
              std::to_string(t) + ")");
      }
      sh = {k, s, t};
      check(ffgsv_tri_charpoly(a.get(), b.get(), want_exact, &raw),
            "tri charpoly");
      in.p.reset(raw);
    }
    std::copy(sh.begin(), sh.end(), in.params);
  }
  return in;
}

std::vector<std::string> theta_grid(const EvolveOpts& o) {
  if (!o.theta.empty()) {
    if (o.theta_max >= 0) usage("give --theta or --theta-max, not both");
    return split_list(o.theta);
  }
  if (o.theta_max < 0 || o.steps < 1) {
    usage("need --theta list or --theta-max with --steps");
  }
  std::vector<std::string> out;
  for (int i = 0; i <= o.steps; ++i) out.push_back(fmt(o.theta_max * i / o.steps));
  return out;
}

void run_evolve(const EvolveOpts& o) {
  if (o.exact && o.floating) usage("--exact and --float are exclusive");
  if (o.kind != "gsvd" && (o.spec == "singular")) {
    usage("--spec singular applies to gsvd only");
  }
  Manifest man;
  man.subcommand = "evolve " + o.kind;
  const auto grid = theta_grid(o);

  // Exact unless asked otherwise or the matrices are complex.
  bool want_exact = !o.floating;
  if (!o.matrix.empty() && !o.exact) {
    for (const std::string& path : {o.matrix, o.matrix_b}) {
      if (path.empty()) continue;
      Mat m = load_matrix(path);
      if (ffgsv_matrix_is_complex(m.get())) want_exact = false;
    }
  }
  ModelInput in = model_input(o.kind, o.poly, o.matrix, o.matrix_b, o.shape,
                              want_exact);
  if (!want_exact && ffgsv_poly_is_exact(in.p.get())) {
    ffgsv_poly* f = nullptr;
    check(ffgsv_poly_to_float(in.p.get(), &f), "to float");
    in.p.reset(f);
  }

  man.set("input", o.poly.empty() ? o.matrix + (o.matrix_b.empty() ? "" : "," + o.matrix_b)
                                  : o.poly);
  man.set("params", std::to_string(in.params[0]) + "," +
                        std::to_string(in.params[1]) + "," +
                        std::to_string(in.params[2]));
  man.set("arithmetic", want_exact ? "exact" : "float");
  man.set("spec", o.spec);
  man.set("method", o.method);
  man.set("theta_first", grid.front());
  man.set("theta_last", grid.back());
  man.set("theta_count", std::to_string(grid.size()));

  if (o.spec == "none") {
    // Evolved polynomials instead of roots.
    std::string text;
    for (const auto& th : grid) {
      ffgsv_poly* r = nullptr;
      switch (in.model) {
        case FFGSV_MODEL_HERMITE:
          check(ffgsv_hermite_evolve(in.p.get(), th.c_str(), &r), "evolve");
          break;
        case FFGSV_MODEL_LAGUERRE:
          check(ffgsv_laguerre_evolve(in.p.get(), th.c_str(), &r), "evolve");
          break;
        default:
          check(ffgsv_gsvd_evolve(in.p.get(), th.c_str(), in.params[0],
                                  in.params[1], in.params[2], &r),
                "evolve");
      }
      Poly ev(r);
      text += "# theta = " + th + "\n" + poly_text(ev.get(), false);
    }
    emit_with_manifest(o.out, text, man);
    return;
  }

  const ffgsv_specialization sp =
      o.spec == "singular" ? FFGSV_SPEC_SINGULAR : FFGSV_SPEC_GSVD;
  ffgsv_trace* raw = nullptr;
  if (o.method == "ode") {
    const auto th = parse_doubles(o.theta.empty() ? fmt(0) + "," + fmt(o.theta_max)
                                                  : o.theta);
    if (th.size() < 2) usage("ode needs at least two theta values");
    const int steps = o.steps > 0 ? o.steps : static_cast<int>(th.size()) - 1;
    check(ffgsv_evolve_ode(in.p.get(), in.model, in.params, th.front(),
                           th.back(), steps, &raw),
          "ode");
  } else {
    std::vector<const char*> ptrs;
    for (const auto& s : grid) ptrs.push_back(s.c_str());
    check(ffgsv_evolve_operator(in.p.get(), in.model, in.params, sp,
                                ptrs.data(), ptrs.size(), &raw),
          "operator");
  }
  Trace trace(raw);
  std::string csv = "theta,root_index,root_value,method\n";
  const std::string method = ffgsv_trace_method(trace.get());
  for (std::size_t i = 0; i < ffgsv_trace_size(trace.get()); ++i) {
    const auto r = roots_of(trace.get(), i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      csv += fmt(ffgsv_trace_theta(trace.get(), i)) + "," + std::to_string(j) +
             "," + fmt(r[j]) + "," + method + "\n";
    }
  }
  const std::string reason = ffgsv_trace_abort_reason(trace.get());
  if (!reason.empty()) man.set("abort_reason", reason);
  emit_with_manifest(o.out, csv, man);
  if (!reason.empty()) {
    throw Failure{2, "ode stopped early: " + reason};
  }
}

// ---- drift ------------------------------------------------------------

struct DriftOpts {
  std::string model;
  std::string roots;
  int n = -1, s = -1, t = -1;
  std::string poly, matrix, matrix_b, shape;
  double theta = 0;
  std::string out;
};

void run_drift(const DriftOpts& o) {
  Manifest man;
  man.subcommand = "drift " + o.model;
  std::vector<double> roots;
  if (!o.roots.empty()) roots = parse_doubles(o.roots);
  int params[3] = {0, 0, 0};
  Poly p;
  ffgsv_model model = FFGSV_MODEL_HERMITE;
  if (o.model == "hermite") {
    model = FFGSV_MODEL_HERMITE;
  } else if (o.model == "laguerre") {
    if (o.n < 0) usage("laguerre drift needs --n");
    model = FFGSV_MODEL_LAGUERRE;
    params[0] = static_cast<int>(roots.size());
    params[1] = o.n;
  } else if (o.model == "jacobi") {
    if (o.s < 0 || o.t < 0) usage("jacobi drift needs --s and --t");
    model = FFGSV_MODEL_JACOBI;
    params[1] = o.s;
    params[2] = o.t;
  } else {
    ModelInput in = model_input("gsvd", o.poly, o.matrix, o.matrix_b, o.shape,
                                false);
    model = FFGSV_MODEL_GSVD;
    std::copy(std::begin(in.params), std::end(in.params), params);
    p = std::move(in.p);
    if (roots.empty()) {
      // Roots of the gsvd slice at the requested theta.
      const std::string th = fmt(o.theta);
      const char* ptr = th.c_str();
      ffgsv_poly* f = nullptr;
      check(ffgsv_poly_to_float(p.get(), &f), "to float");
      Poly pf(f);
      ffgsv_trace* raw = nullptr;
      check(ffgsv_evolve_operator(pf.get(), model, params, FFGSV_SPEC_GSVD,
                                  &ptr, 1, &raw),
            "roots");
      Trace tr(raw);
      roots = roots_of(tr.get(), 0);
    }
  }
  if (roots.empty()) usage("no roots given (--roots)");
  std::vector<double> v(roots.size());
  check(ffgsv_drift(model, params, p.get(), o.theta, roots.data(),
                    roots.size(), v.data()),
        "drift");
  std::string csv = "root_index,root,velocity\n";
  for (std::size_t i = 0; i < roots.size(); ++i) {
    csv += std::to_string(i) + "," + fmt(roots[i]) + "," + fmt(v[i]) + "\n";
  }
  man.set("roots", o.roots.empty() ? "computed" : o.roots);
  man.set("params", std::to_string(params[0]) + "," +
                        std::to_string(params[1]) + "," +
                        std::to_string(params[2]));
  man.set("theta", fmt(o.theta));
  emit_with_manifest(o.out, csv, man);
}

// ---- experiment -------------------------------------------------------

struct ExperimentOpts {
  std::string config;
  std::optional<long> trials;
  std::optional<int> steps, beta, threads;
  std::optional<double> sigma2;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dist, convention;
  bool independent = false;
  std::string out = "ffgsv_out";
  bool print_config = false;
};

void run_experiment(const ExperimentOpts& o) {
  if (o.print_config) {
    char* s = nullptr;
    check(ffgsv_experiment_default_config(&s), "config");
    std::cout << take_string(s);
    return;
  }
  Manifest man;
  man.subcommand = "experiment";
  const std::string cfg_text = o.config.empty() ? std::string() : read_file(o.config);
  ffgsv_experiment_spec* sraw = nullptr;
  check(ffgsv_experiment_spec_parse(cfg_text.c_str(), &sraw),
        o.config.empty() ? "built-in config" : o.config);
  std::unique_ptr<ffgsv_experiment_spec, SpecDel> spec(sraw);
  if (o.convention) {
    check(ffgsv_experiment_spec_set_convention(spec.get(), o.convention->c_str()),
          "--matrix-convention");
  }
  ffgsv_mc_config mc{};
  check(ffgsv_experiment_spec_mc(spec.get(), &mc), "config");
  if (o.trials) mc.trials = *o.trials;
  if (o.steps) mc.steps = *o.steps;
  if (o.sigma2) mc.sigma2 = *o.sigma2;
  if (o.beta) mc.beta = *o.beta;
  if (o.seed) mc.master_seed = *o.seed;
  if (o.dist) mc.rademacher = *o.dist == "rademacher";
  if (o.threads) mc.threads = *o.threads;
  if (o.independent) mc.shared_increments = 0;
  if (mc.trials < 1) usage("--trials must be >= 1");
  if (mc.steps < 1) usage("--steps must be >= 1");
  if (!(mc.sigma2 > 0)) usage("--sigma2 must be > 0");

  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw Failure{1, "cannot create '" + o.out + "': " + ec.message()};

  ffgsv_experiment* eraw = nullptr;
  check(ffgsv_experiment_run(spec.get(), &mc, &eraw), "experiment");
  std::unique_ptr<ffgsv_experiment, ExpDel> exp(eraw);
  check(ffgsv_experiment_write_csv(exp.get(), o.out.c_str()), "write csv");
  char* sum = nullptr;
  check(ffgsv_experiment_summary(exp.get(), &sum), "summary");

  man.set("config", o.config.empty() ? "built-in" : o.config);
  man.set("trials", std::to_string(mc.trials));
  man.set("steps", std::to_string(mc.steps));
  man.set("sigma2", fmt(mc.sigma2));
  man.set("beta", std::to_string(mc.beta));
  man.set("dist", mc.rademacher ? "rademacher" : "gaussian");
  man.set("seed", std::to_string(mc.master_seed));
  man.set("shared_increments", mc.shared_increments ? "true" : "false");
  man.set("threads", std::to_string(mc.threads));
  write_file((fs::path(o.out) / "manifest.txt").string(),
             man.text(take_string(sum)));
  std::cout << "wrote paths.csv, moments.csv, horizon.csv, samples.csv, "
               "manifest.txt to "
            << o.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite free convolutions, GSVD root flows and Monte Carlo checks"};
  app.set_version_flag("--version", std::string(ffgsv_version()));
  app.require_subcommand(1);

  ClassicalOpts co;
  auto* classical = app.add_subcommand("classical", "Hermite, Laguerre or Jacobi polynomial");
  classical->add_option("family", co.family)
      ->required()
      ->check(CLI::IsMember({"hermite", "laguerre", "jacobi"}));
  classical->add_option("--n", co.n, "Hermite degree")->check(CLI::NonNegativeNumber);
  classical->add_option("--s", co.s)->check(CLI::NonNegativeNumber);
  classical->add_option("--t", co.t)->check(CLI::NonNegativeNumber);
  classical->add_option("--k", co.k)->check(CLI::NonNegativeNumber);
  classical->add_flag("--pretty", co.pretty, "Human-readable output");
  classical->add_option("--out", co.out, "Output file (default stdout)");

  ConvolveOpts cv;
  auto* convolve = app.add_subcommand("convolve", "Finite free convolution of two polynomial files");
  convolve->add_option("kind", cv.kind)
      ->required()
      ->check(CLI::IsMember({"additive", "rect"}));
  convolve->add_option("p", cv.p)->required()->check(CLI::ExistingFile);
  convolve->add_option("q", cv.q)->required()->check(CLI::ExistingFile);
  convolve->add_option("--m", cv.m)->check(CLI::NonNegativeNumber);
  convolve->add_option("--n", cv.n, "Degree (additive: defaults to max degree)")
      ->check(CLI::NonNegativeNumber);
  convolve->add_flag("--pretty", cv.pretty);
  convolve->add_option("--out", cv.out);

  EvolveOpts ev;
  auto* evolve = app.add_subcommand("evolve", "Root paths under an evolution operator");
  evolve->add_option("kind", ev.kind)
      ->required()
      ->check(CLI::IsMember({"hermite", "laguerre", "gsvd"}));
  evolve->add_option("--poly", ev.poly, "Polynomial file")->check(CLI::ExistingFile);
  evolve->add_option("--matrix", ev.matrix, "Matrix file (A or C)")->check(CLI::ExistingFile);
  evolve->add_option("--matrix-b", ev.matrix_b, "Second matrix for gsvd")
      ->check(CLI::ExistingFile);
  evolve->add_option("--theta", ev.theta, "Comma-separated increasing theta values");
  evolve->add_option("--theta-max", ev.theta_max, "Grid i*theta_max/steps")
      ->check(CLI::NonNegativeNumber);
  evolve->add_option("--steps", ev.steps, "Grid or RK4 steps")->check(CLI::PositiveNumber);
  evolve->add_option("--shape", ev.shape, "k,s,t");
  evolve->add_option("--spec", ev.spec, "Slice to track; none prints polynomials")
      ->check(CLI::IsMember({"singular", "gsvd", "none"}));
  evolve->add_flag("--exact", ev.exact, "Rational arithmetic (default for rational input)");
  evolve->add_flag("--float", ev.floating, "Double arithmetic");
  evolve->add_option("--method", ev.method)->check(CLI::IsMember({"operator", "ode"}));
  evolve->add_option("--out", ev.out);

  DriftOpts dr;
  auto* drift = app.add_subcommand("drift", "Root velocities of a drift model");
  drift->add_option("model", dr.model)
      ->required()
      ->check(CLI::IsMember({"hermite", "laguerre", "jacobi", "gsvd"}));
  drift->add_option("--roots", dr.roots, "Comma-separated roots");
  drift->add_option("--n", dr.n)->check(CLI::NonNegativeNumber);
  drift->add_option("--s", dr.s)->check(CLI::NonNegativeNumber);
  drift->add_option("--t", dr.t)->check(CLI::NonNegativeNumber);
  drift->add_option("--poly", dr.poly)->check(CLI::ExistingFile);
  drift->add_option("--matrix", dr.matrix)->check(CLI::ExistingFile);
  drift->add_option("--matrix-b", dr.matrix_b)->check(CLI::ExistingFile);
  drift->add_option("--shape", dr.shape, "k,s,t");
  drift->add_option("--theta", dr.theta)->check(CLI::NonNegativeNumber);
  drift->add_option("--out", dr.out);

  ExperimentOpts ex;
  auto* experiment = app.add_subcommand("experiment", "Two-process GSVD Monte Carlo run");
  experiment->add_option("--config", ex.config, "key = value config (default built in)")
      ->check(CLI::ExistingFile);
  experiment->add_option("--trials", ex.trials);
  experiment->add_option("--steps", ex.steps);
  experiment->add_option("--sigma2", ex.sigma2);
  experiment->add_option("--beta", ex.beta)->check(CLI::IsMember({1, 2}));
  experiment->add_option("--seed", ex.seed);
  experiment->add_option("--dist", ex.dist)
      ->check(CLI::IsMember({"gaussian", "rademacher"}));
  experiment->add_option("--threads", ex.threads)->check(CLI::NonNegativeNumber);
  experiment->add_option("--matrix-convention", ex.convention)
      ->check(CLI::IsMember({"paper-display", "values-consistent"}));
  experiment->add_flag("--independent", ex.independent,
                       "Independent increments per process");
  experiment->add_option("--out", ex.out, "Output directory");
  experiment->add_flag("--print-config", ex.print_config,
                       "Print the built-in config and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*classical) run_classical(co);
    if (*convolve) run_convolve(cv);
    if (*evolve) run_evolve(ev);
    if (*drift) run_drift(dr);
    if (*experiment) run_experiment(ex);
  } catch (const Failure& f) {
    std::cerr << "ffgsv: " << f.message << "\n";
    return f.code;
  }
  return 0;
}
