// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/ffgsv.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <filesystem>
#include <new>
#include <string>
#include <variant>
#include <vector>

#include "ffgsv/experiment.hpp"
#include "ffgsv/ffconv.hpp"
#include "ffgsv/rootflow.hpp"
#include "ffgsv/roots.hpp"
#include "ffgsv/specpoly.hpp"
#include "ffgsv/textio.hpp"

#ifndef FFGSV_VERSION
#define FFGSV_VERSION "0.0.0"
#endif

using namespace ffgsv;

struct ffgsv_poly {
  std::variant<UniPoly<Rational>, BiPoly<Rational>, TriPoly<Rational>,
               UniPoly<double>, BiPoly<double>, TriPoly<double>>
      v;
};

struct ffgsv_matrix {
  bool complex = false;
  Matrix<Rational> q;
  Matrix<Complex> z;
};

struct ffgsv_trace {
  EvolutionTrace trace;
};

struct ffgsv_experiment_spec {
  ExperimentSpec spec;
};

struct ffgsv_experiment {
  Section6Result res;
};

namespace {

thread_local std::string g_last_error;

ffgsv_status to_status(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return FFGSV_E_INVALID_ARGUMENT;
    case Errc::parse: return FFGSV_E_PARSE;
    case Errc::degree: return FFGSV_E_DEGREE;
    case Errc::shape: return FFGSV_E_SHAPE;
    case Errc::mode: return FFGSV_E_MODE;
    case Errc::degenerate: return FFGSV_E_DEGENERATE;
    case Errc::io: return FFGSV_E_IO;
    case Errc::internal: return FFGSV_E_INTERNAL;
  }
  return FFGSV_E_INTERNAL;
}

/// Thrown when a caller buffer is too small.
struct BufferTooSmall {};

template <class F>
ffgsv_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return FFGSV_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const BufferTooSmall&) {
    g_last_error = "output buffer too small";
    return FFGSV_E_BUFFER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FFGSV_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FFGSV_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FFGSV_E_INTERNAL;
  }
}

template <class T>
const T& need(const T* p, const char* what) {
  if (!p) throw Error(Errc::invalid_argument, std::string(what) + " is null");
  return *p;
}

template <class T>
void need_out(T** out) {
  if (!out) throw Error(Errc::invalid_argument, "output pointer is null");
  *out = nullptr;
}

std::string_view text_arg(const char* p, const char* what) {
  if (!p) throw Error(Errc::invalid_argument, std::string(what) + " is null");
  return p;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class P>
ffgsv_poly* wrap(P p) {
  return new ffgsv_poly{std::move(p)};
}

bool exact(const ffgsv_poly& p) { return p.v.index() < 3; }
int arity(const ffgsv_poly& p) { return static_cast<int>(p.v.index() % 3) + 1; }

void need_arity(const ffgsv_poly& p, int n, const char* op) {
  if (arity(p) != n) {
    throw Error(Errc::invalid_argument,
                std::string(op) + " needs a polynomial in " +
                    std::to_string(n) + " variable(s), got " +
                    std::to_string(arity(p)));
  }
}

template <std::size_t N>
Poly<Rational, N> as_exact(const ffgsv_poly& p) {
  return std::get<N - 1>(p.v);
}

template <std::size_t N>
Poly<double, N> as_float(const ffgsv_poly& p) {
  if (exact(p)) return to_float(std::get<N - 1>(p.v));
  return std::get<N + 2>(p.v);
}

Rational theta_exact(const char* text) {
  const Rational q = parse_rational(text_arg(text, "theta"));
  if (sgn(q) < 0) throw Error(Errc::invalid_argument, "theta must be >= 0");
  return q;
}

double theta_float(const char* text) {
  const double v = parse_real(text_arg(text, "theta"));
  if (!std::isfinite(v) || v < 0) {
    throw Error(Errc::invalid_argument, "theta must be finite and >= 0");
  }
  return v;
}

void copy_out(const std::vector<double>& v, double* buf, std::size_t cap,
              std::size_t* count) {
  if (count) *count = v.size();
  if (v.empty() || (!buf && cap == 0 && count)) return;  // size query
  if (!buf || cap < v.size()) throw BufferTooSmall{};
  std::copy(v.begin(), v.end(), buf);
}

Matrix<Complex> as_complex(const ffgsv_matrix& m) {
  if (m.complex) return m.z;
  Matrix<Complex> out(m.q.rows(), m.q.cols());
  for (std::size_t i = 0; i < m.q.rows(); ++i) {
    for (std::size_t j = 0; j < m.q.cols(); ++j) out(i, j) = to_double(m.q(i, j));
  }
  return out;
}

void need_real(const ffgsv_matrix& m) {
  if (m.complex) {
    throw Error(Errc::mode, "exact mode needs real rational matrices");
  }
}

ShapeParams shape_from(const int* params) {
  if (!params) throw Error(Errc::invalid_argument, "params is null");
  ShapeParams s{params[0], params[1], params[2]};
  s.validate();
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* ffgsv_version(void) { return FFGSV_VERSION; }
const char* ffgsv_last_error(void) { return g_last_error.c_str(); }
void ffgsv_string_free(char* s) { std::free(s); }

ffgsv_status ffgsv_poly_parse(const char* text, int arity_, ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const PolyText pt = parse_poly_text(text_arg(text, "text"));
    switch (arity_) {
      case 1: *out = wrap(to_poly<1>(pt)); break;
      case 2: *out = wrap(to_poly<2>(pt)); break;
      case 3: *out = wrap(to_poly<3>(pt)); break;
      default: throw Error(Errc::invalid_argument, "arity must be 1, 2 or 3");
    }
  });
}

ffgsv_status ffgsv_poly_format(const ffgsv_poly* p, char** text) {
  return guard([&] {
    need_out(text);
    const auto& pp = need(p, "polynomial");
    *text = dup_string(
        std::visit([](const auto& x) { return format_poly_text(x); }, pp.v));
  });
}

ffgsv_status ffgsv_poly_to_string(const ffgsv_poly* p, char** text) {
  return guard([&] {
    need_out(text);
    const auto& pp = need(p, "polynomial");
    *text = dup_string(
        std::visit([](const auto& x) { return to_string(x); }, pp.v));
  });
}

ffgsv_status ffgsv_poly_to_float(const ffgsv_poly* p, ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "polynomial");
    switch (arity(pp)) {
      case 1: *out = wrap(as_float<1>(pp)); break;
      case 2: *out = wrap(as_float<2>(pp)); break;
      default: *out = wrap(as_float<3>(pp)); break;
    }
  });
}

int ffgsv_poly_arity(const ffgsv_poly* p) { return p ? arity(*p) : 0; }
int ffgsv_poly_is_exact(const ffgsv_poly* p) { return p && exact(*p) ? 1 : 0; }

int ffgsv_poly_degree(const ffgsv_poly* p, int var) {
  if (!p || var < 0 || var >= arity(*p)) return -1;
  return std::visit(
      [&](const auto& x) { return x.degree(static_cast<std::size_t>(var)); },
      p->v);
}

ffgsv_status ffgsv_poly_coeff(const ffgsv_poly* p, const int* exps,
                              double* out) {
  return guard([&] {
    const auto& pp = need(p, "polynomial");
    need(exps, "exponents");
    need(out, "output");
    *out = std::visit(
        [&](const auto& x) {
          typename std::decay_t<decltype(x)>::Exponents e{};
          for (std::size_t v = 0; v < e.size(); ++v) {
            if (exps[v] < 0) throw Error(Errc::degree, "negative exponent");
            e[v] = exps[v];
          }
          return to_double(x.coeff(e));
        },
        pp.v);
  });
}

void ffgsv_poly_free(ffgsv_poly* p) { delete p; }

ffgsv_status ffgsv_matrix_parse(const char* text, ffgsv_matrix** out) {
  return guard([&] {
    need_out(out);
    const auto tok = tokenize(text_arg(text, "text"));
    auto m = std::make_unique<ffgsv_matrix>();
    std::size_t used = 0;
    if (tokens_are_complex(tok)) {
      m->complex = true;
      m->z = parse_complex_matrix_tokens(tok, &used);
    } else {
      m->q = parse_matrix_tokens(tok, &used);
    }
    if (used != tok.size()) {
      throw Error(Errc::parse, "unexpected trailing matrix entries");
    }
    *out = m.release();
  });
}

size_t ffgsv_matrix_rows(const ffgsv_matrix* m) {
  return m ? (m->complex ? m->z.rows() : m->q.rows()) : 0;
}
size_t ffgsv_matrix_cols(const ffgsv_matrix* m) {
  return m ? (m->complex ? m->z.cols() : m->q.cols()) : 0;
}
int ffgsv_matrix_is_complex(const ffgsv_matrix* m) {
  return m && m->complex ? 1 : 0;
}
void ffgsv_matrix_free(ffgsv_matrix* m) { delete m; }

ffgsv_status ffgsv_charpoly(const ffgsv_matrix* a, int exact_, ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& m = need(a, "matrix");
    if (ffgsv_matrix_rows(a) != ffgsv_matrix_cols(a)) {
      throw Error(Errc::shape, "charpoly needs a square matrix");
    }
    if (exact_) {
      need_real(m);
      *out = wrap(charpoly(m.q));
    } else if (m.complex) {
      if (!(m.z == m.z.adjoint())) {
        throw Error(Errc::invalid_argument, "complex matrix must be Hermitian");
      }
      *out = wrap(charpoly(m.z));
    } else {
      *out = wrap(charpoly(to_float(m.q)));
    }
  });
}

ffgsv_status ffgsv_singular_charpoly(const ffgsv_matrix* c, int exact_,
                                     ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& m = need(c, "matrix");
    if (ffgsv_matrix_rows(c) > ffgsv_matrix_cols(c)) {
      throw Error(Errc::shape, "singular_charpoly needs m <= n (transpose C)");
    }
    if (exact_) {
      need_real(m);
      *out = wrap(singular_charpoly(m.q));
    } else if (m.complex) {
      *out = wrap(singular_charpoly(m.z));
    } else {
      *out = wrap(singular_charpoly(to_float(m.q)));
    }
  });
}

ffgsv_status ffgsv_tri_charpoly(const ffgsv_matrix* a, const ffgsv_matrix* b,
                                int exact_, ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& ma = need(a, "matrix A");
    const auto& mb = need(b, "matrix B");
    if (exact_) {
      need_real(ma);
      need_real(mb);
      *out = wrap(tri_charpoly(MatrixPair<Rational>{ma.q, mb.q}));
    } else if (ma.complex || mb.complex) {
      *out = wrap(tri_charpoly(MatrixPair<Complex>{as_complex(ma), as_complex(mb)}));
    } else {
      *out = wrap(tri_charpoly(MatrixPair<double>{to_float(ma.q), to_float(mb.q)}));
    }
  });
}

ffgsv_status ffgsv_gsv_squares(const ffgsv_matrix* a, const ffgsv_matrix* b,
                               double* values, size_t capacity, size_t* count,
                               int* deficiency) {
  return guard([&] {
    const auto& ma = need(a, "matrix A");
    const auto& mb = need(b, "matrix B");
    GsvResult r;
    if (ma.complex || mb.complex) {
      r = gsv_squares(MatrixPair<Complex>{as_complex(ma), as_complex(mb)});
    } else {
      r = gsv_squares(MatrixPair<double>{to_float(ma.q), to_float(mb.q)});
    }
    if (deficiency) *deficiency = r.deficiency;
    copy_out(r.values.values, values, capacity, count);
  });
}

ffgsv_status ffgsv_additive_convolve(const ffgsv_poly* p, const ffgsv_poly* q,
                                     int n, ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "p");
    const auto& qq = need(q, "q");
    need_arity(pp, 1, "additive convolution");
    need_arity(qq, 1, "additive convolution");
    if (exact(pp) && exact(qq)) {
      *out = wrap(additive_convolve(as_exact<1>(pp), as_exact<1>(qq), n));
    } else {
      *out = wrap(additive_convolve(as_float<1>(pp), as_float<1>(qq), n));
    }
  });
}

ffgsv_status ffgsv_rect_convolve(const ffgsv_poly* p, const ffgsv_poly* q,
                                 int m, int n, ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "p");
    const auto& qq = need(q, "q");
    need_arity(pp, 2, "rectangular convolution");
    need_arity(qq, 2, "rectangular convolution");
    if (exact(pp) && exact(qq)) {
      *out = wrap(rect_convolve(as_exact<2>(pp), as_exact<2>(qq), m, n));
    } else {
      *out = wrap(rect_convolve(as_float<2>(pp), as_float<2>(qq), m, n));
    }
  });
}

ffgsv_status ffgsv_hermite_evolve(const ffgsv_poly* p, const char* theta,
                                  ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "p");
    need_arity(pp, 1, "hermite evolution");
    if (exact(pp)) {
      *out = wrap(hermite_evolve(as_exact<1>(pp), theta_exact(theta)));
    } else {
      *out = wrap(hermite_evolve(as_float<1>(pp), theta_float(theta)));
    }
  });
}

ffgsv_status ffgsv_laguerre_evolve(const ffgsv_poly* p, const char* theta,
                                   ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "p");
    need_arity(pp, 2, "laguerre evolution");
    if (exact(pp)) {
      *out = wrap(laguerre_evolve(as_exact<2>(pp), theta_exact(theta)));
    } else {
      *out = wrap(laguerre_evolve(as_float<2>(pp), theta_float(theta)));
    }
  });
}

ffgsv_status ffgsv_gsvd_evolve(const ffgsv_poly* p, const char* theta, int k,
                               int s, int t, ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "p");
    need_arity(pp, 3, "gsvd evolution");
    const ShapeParams shape{k, s, t};
    if (exact(pp)) {
      *out = wrap(gsvd_evolve(as_exact<3>(pp), theta_exact(theta), shape));
    } else {
      *out = wrap(gsvd_evolve(as_float<3>(pp), theta_float(theta), shape));
    }
  });
}

ffgsv_status ffgsv_classical(ffgsv_family family, int a, int b, int c,
                             ffgsv_poly** out) {
  return guard([&] {
    need_out(out);
    switch (family) {
      case FFGSV_FAMILY_HERMITE: *out = wrap(hermite_poly(a)); break;
      case FFGSV_FAMILY_LAGUERRE: *out = wrap(laguerre_charpoly(a, b)); break;
      case FFGSV_FAMILY_JACOBI: *out = wrap(jacobi_charpoly(a, b, c)); break;
      default: throw Error(Errc::invalid_argument, "unknown family");
    }
  });
}

ffgsv_status ffgsv_real_roots(const ffgsv_poly* p, double* roots,
                              size_t capacity, size_t* count) {
  return guard([&] {
    const auto& pp = need(p, "p");
    need_arity(pp, 1, "real_roots");
    const PointConfig r = exact(pp) ? real_roots(as_exact<1>(pp))
                                    : real_roots(as_float<1>(pp));
    copy_out(r.values, roots, capacity, count);
  });
}

ffgsv_status ffgsv_evolve_operator(const ffgsv_poly* p, ffgsv_model model,
                                   const int* params,
                                   ffgsv_specialization spec,
                                   const char* const* thetas, size_t n_thetas,
                                   ffgsv_trace** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "p");
    if (n_thetas > 0) need(thetas, "thetas");
    const Specialization sp =
        spec == FFGSV_SPEC_SINGULAR ? Specialization::singular
                                    : Specialization::gsvd;
    std::vector<Rational> tq;
    std::vector<double> tf;
    for (std::size_t i = 0; i < n_thetas; ++i) {
      if (exact(pp)) {
        tq.push_back(theta_exact(thetas[i]));
      } else {
        tf.push_back(theta_float(thetas[i]));
      }
    }
    auto t = std::make_unique<ffgsv_trace>();
    switch (model) {
      case FFGSV_MODEL_HERMITE:
        need_arity(pp, 1, "hermite path");
        t->trace = exact(pp) ? evolve_roots_operator(as_exact<1>(pp),
                                                     std::span<const Rational>(tq))
                             : evolve_roots_operator(as_float<1>(pp),
                                                     std::span<const double>(tf));
        break;
      case FFGSV_MODEL_LAGUERRE:
        need_arity(pp, 2, "laguerre path");
        t->trace = exact(pp) ? evolve_roots_operator(as_exact<2>(pp),
                                                     std::span<const Rational>(tq))
                             : evolve_roots_operator(as_float<2>(pp),
                                                     std::span<const double>(tf));
        break;
      case FFGSV_MODEL_GSVD: {
        need_arity(pp, 3, "gsvd path");
        const ShapeParams shape = shape_from(params);
        t->trace = exact(pp)
                       ? evolve_roots_operator(as_exact<3>(pp),
                                               std::span<const Rational>(tq),
                                               shape, sp)
                       : evolve_roots_operator(as_float<3>(pp),
                                               std::span<const double>(tf),
                                               shape, sp);
        break;
      }
      default:
        throw Error(Errc::invalid_argument, "model has no operator path");
    }
    *out = t.release();
  });
}

ffgsv_status ffgsv_evolve_ode(const ffgsv_poly* p, ffgsv_model model,
                              const int* params, double theta0, double theta1,
                              int steps, ffgsv_trace** out) {
  return guard([&] {
    need_out(out);
    const auto& pp = need(p, "p");
    DriftModel dm;
    PointConfig start;
    switch (model) {
      case FFGSV_MODEL_HERMITE:
        need_arity(pp, 1, "hermite ode");
        dm = HermiteModel{};
        start = exact(pp) ? real_roots(as_exact<1>(pp))
                          : real_roots(as_float<1>(pp));
        break;
      case FFGSV_MODEL_LAGUERRE:
        need_arity(pp, 2, "laguerre ode");
        need(params, "params");
        dm = LaguerreModel{params[0], params[1]};
        start = exact(pp) ? real_roots(substitute_unit_y(as_exact<2>(pp)))
                          : real_roots(substitute_unit_y(as_float<2>(pp)));
        break;
      case FFGSV_MODEL_GSVD: {
        need_arity(pp, 3, "gsvd ode");
        const ShapeParams shape = shape_from(params);
        dm = GsvdModel{as_float<3>(pp), shape};
        const TriPoly<double> at0 = gsvd_evolve(as_float<3>(pp), theta0, shape);
        start = specialized_roots(at0, Specialization::gsvd);
        break;
      }
      default:
        throw Error(Errc::invalid_argument, "model has no ode path");
    }
    auto t = std::make_unique<ffgsv_trace>();
    t->trace = evolve_roots_ode(dm, start, theta0, theta1, steps);
    *out = t.release();
  });
}

size_t ffgsv_trace_size(const ffgsv_trace* t) {
  return t ? t->trace.thetas.size() : 0;
}

double ffgsv_trace_theta(const ffgsv_trace* t, size_t i) {
  if (!t || i >= t->trace.thetas.size()) return NAN;
  return t->trace.thetas[i];
}

ffgsv_status ffgsv_trace_roots(const ffgsv_trace* t, size_t i, double* roots,
                               size_t capacity, size_t* count) {
  return guard([&] {
    const auto& tr = need(t, "trace").trace;
    if (i >= tr.configs.size()) {
      throw Error(Errc::invalid_argument, "trace index out of range");
    }
    copy_out(tr.configs[i].values, roots, capacity, count);
  });
}

const char* ffgsv_trace_method(const ffgsv_trace* t) {
  if (!t) return "";
  return t->trace.method == TraceMethod::ode ? "ode" : "operator";
}

const char* ffgsv_trace_abort_reason(const ffgsv_trace* t) {
  return t ? t->trace.abort_reason.c_str() : "";
}

void ffgsv_trace_free(ffgsv_trace* t) { delete t; }

ffgsv_status ffgsv_drift(ffgsv_model model, const int* params,
                         const ffgsv_poly* p, double theta,
                         const double* roots, size_t n, double* velocities) {
  return guard([&] {
    if (n > 0) {
      need(roots, "roots");
      need(velocities, "velocities");
    }
    const std::span<const double> r(roots, n);
    std::vector<double> v;
    switch (model) {
      case FFGSV_MODEL_HERMITE:
        v = hermite_drift<double>(r);
        break;
      case FFGSV_MODEL_LAGUERRE:
        need(params, "params");
        v = laguerre_drift<double>(r, params[1]);
        break;
      case FFGSV_MODEL_JACOBI:
        need(params, "params");
        v = jacobi_drift(r, params[1], params[2]);
        break;
      case FFGSV_MODEL_GSVD: {
        const auto& pp = need(p, "p");
        need_arity(pp, 3, "gsvd drift");
        v = drift_velocity(GsvdModel{as_float<3>(pp), shape_from(params)},
                           theta, r);
        break;
      }
      default:
        throw Error(Errc::invalid_argument, "unknown model");
    }
    std::copy(v.begin(), v.end(), velocities);
  });
}

ffgsv_status ffgsv_experiment_default_config(char** text) {
  return guard([&] {
    need_out(text);
    *text = dup_string(std::string(default_experiment_config()));
  });
}

ffgsv_status ffgsv_experiment_spec_parse(const char* text,
                                         ffgsv_experiment_spec** out) {
  return guard([&] {
    need_out(out);
    auto s = std::make_unique<ffgsv_experiment_spec>();
    s->spec = ExperimentSpec::parse(text ? text : "");
    *out = s.release();
  });
}

ffgsv_status ffgsv_experiment_spec_mc(const ffgsv_experiment_spec* s,
                                      ffgsv_mc_config* out) {
  return guard([&] {
    const McConfig& mc = need(s, "spec").spec.mc;
    if (!out) throw Error(Errc::invalid_argument, "output is null");
    ffgsv_mc_config& o = *out;
    o.trials = mc.trials;
    o.steps = mc.steps;
    o.sigma2 = mc.sigma2;
    o.beta = mc.beta;
    o.rademacher = mc.dist == EntryDist::rademacher ? 1 : 0;
    o.master_seed = mc.master_seed;
    o.shared_increments = mc.shared_increments ? 1 : 0;
    o.threads = mc.threads;
  });
}

ffgsv_status ffgsv_experiment_spec_set_convention(ffgsv_experiment_spec* s,
                                                  const char* convention) {
  return guard([&] {
    if (!s) throw Error(Errc::invalid_argument, "spec is null");
    s->spec.convention = parse_convention(text_arg(convention, "convention"));
  });
}

const char* ffgsv_experiment_spec_convention(const ffgsv_experiment_spec* s) {
  return s ? convention_name(s->spec.convention).data() : "";
}

void ffgsv_experiment_spec_free(ffgsv_experiment_spec* s) { delete s; }

ffgsv_status ffgsv_experiment_run(const ffgsv_experiment_spec* s,
                                  const ffgsv_mc_config* mc,
                                  ffgsv_experiment** out) {
  return guard([&] {
    need_out(out);
    const auto& spec = need(s, "spec").spec;
    McConfig cfg = spec.mc;
    if (mc) {
      cfg.trials = mc->trials;
      cfg.steps = mc->steps;
      cfg.sigma2 = mc->sigma2;
      cfg.beta = mc->beta;
      cfg.dist = mc->rademacher ? EntryDist::rademacher : EntryDist::gaussian;
      cfg.master_seed = mc->master_seed;
      cfg.shared_increments = mc->shared_increments != 0;
      cfg.threads = mc->threads;
    }
    auto e = std::make_unique<ffgsv_experiment>();
    e->res = section6_experiment(spec, cfg);
    *out = e.release();
  });
}

}  // extern "C"

namespace {

struct Csv {
  std::string text;
  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text += ',';
      text += c;
      first = false;
    }
    text += '\n';
  }
};

std::string num(double v) { return format_double(v); }
std::string num(long v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }

// A missing value (dropped cells, too few roots) is written as nan.
double at(const std::vector<double>& v, std::size_t i) {
  return i < v.size() ? v[i] : NAN;
}

}  // namespace

extern "C" {

ffgsv_status ffgsv_experiment_write_csv(const ffgsv_experiment* e,
                                        const char* dir) {
  return guard([&] {
    const auto& r = need(e, "experiment").res;
    const std::filesystem::path d(text_arg(dir, "dir"));
    if (!std::filesystem::is_directory(d)) {
      throw Error(Errc::io, "output directory '" + d.string() + "' missing");
    }
    const auto k = static_cast<std::size_t>(r.spec.shape.k);
    Csv paths, moments, horizon, samples;
    paths.row({"step", "process", "root_index", "mc_mean", "mc_se", "poly_root"});
    moments.row({"step", "process", "order", "mc_beta1", "mc_beta2", "poly"});
    horizon.row({"theta", "process", "root_index", "poly_root", "asymptote"});
    samples.row({"step", "process", "beta", "sample", "root_index", "value"});
    for (const ProcessResult* p : {&r.a, &r.b}) {
      const ProcessAggregate& agg = r.primary(*p);
      for (std::size_t st = 0; st < p->predicted.size(); ++st) {
        const auto& ss = agg.steps[st];
        for (std::size_t i = 0; i < k; ++i) {
          paths.row({num(st), p->name, num(i), num(at(ss.gsv_mean, i)),
                     num(at(ss.gsv_se, i)),
                     num(at(p->predicted[st].values, i))});
        }
        for (std::size_t o = 0; o < 4; ++o) {
          moments.row({num(st), p->name, num(o + 1),
                       num(p->beta1.steps[st].moment_mean[o]),
                       num(p->beta2.steps[st].moment_mean[o]),
                       num(p->predicted_moments[st][o])});
        }
      }
      for (std::size_t j = 0; j < r.horizon_thetas.size(); ++j) {
        for (std::size_t i = 0; i < k; ++i) {
          horizon.row({num(r.horizon_thetas[j]), p->name, num(i),
                       num(at(p->horizon[j].values, i)),
                       num(at(r.asymptote.values, i))});
        }
      }
      for (int beta : {1, 2}) {
        const ProcessAggregate& a = beta == 1 ? p->beta1 : p->beta2;
        for (std::size_t si = 0; si < a.samples.size(); ++si) {
          const auto& vals = a.samples[si];
          for (std::size_t j = 0; j < vals.size(); ++j) {
            samples.row({num(static_cast<long>(r.spec.sample_steps[si])),
                         p->name, num(static_cast<long>(beta)), num(j / k),
                         num(j % k), num(vals[j])});
          }
        }
      }
    }
    write_text_file((d / "paths.csv").string(), paths.text);
    write_text_file((d / "moments.csv").string(), moments.text);
    write_text_file((d / "horizon.csv").string(), horizon.text);
    write_text_file((d / "samples.csv").string(), samples.text);
  });
}

ffgsv_status ffgsv_experiment_summary(const ffgsv_experiment* e, char** text) {
  return guard([&] {
    need_out(text);
    const auto& r = need(e, "experiment").res;
    ExperimentSpec spec = r.spec;
    std::string s;
    auto kv = [&](const std::string& k, const std::string& v) {
      s += k + " = " + v + "\n";
    };
    kv("matrix_convention", std::string(convention_name(spec.convention)));
    kv("start_values.paper-display", join(r.start_paper_display.values));
    kv("start_values.values-consistent", join(r.start_values_consistent.values));
    kv("shape", std::to_string(spec.shape.k) + "," +
                    std::to_string(spec.shape.s) + "," +
                    std::to_string(spec.shape.t));
    kv("delta2", format_rational(spec.delta2()));
    kv("epsilon2", format_rational(spec.epsilon2()));
    kv("sigma2_exact", format_rational(r.sigma2));
    kv("complex_increments", "E|z|^2 = sigma2, real and imaginary parts sigma2/2 each");
    kv("paths_beta", std::to_string(r.mc.beta));
    for (const ProcessResult* p : {&r.a, &r.b}) {
      kv("dropped." + p->name + ".beta1", std::to_string(p->beta1.dropped));
      kv("dropped." + p->name + ".beta2", std::to_string(p->beta2.dropped));
    }
    kv("asymptote", join(r.asymptote.values));
    kv("horizon_max", format_double(spec.horizon_max));
    std::string steps;
    for (int st : spec.sample_steps) {
      if (!steps.empty()) steps += ',';
      steps += std::to_string(st);
    }
    kv("sample_steps", steps);
    *text = dup_string(s);
  });
}

void ffgsv_experiment_free(ffgsv_experiment* e) { delete e; }

}  // extern "C"
