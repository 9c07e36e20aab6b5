// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/experiment.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ffgsv/ffconv.hpp"
#include "ffgsv/rootflow.hpp"
#include "ffgsv/roots.hpp"
#include "ffgsv/textio.hpp"

namespace ffgsv {

namespace {

constexpr std::string_view kDefaultConfig = R"(# Generalized singular value experiment: two processes that start at the
# same squared values but differ by the right factor (H vs K).
shape = 4,5,10
trials = 500
steps = 100
sigma2 = 1e-8
beta = 1
dist = gaussian
seed = 20240601
shared_increments = true
sample_steps = 20,100
horizon_max = 1e6
horizon_per_decade = 10

# displayed D2 = 10 I; the stated starting values need D2 = 3 I
convention = values-consistent

D1 = 4 4
  2 0 0 0
  0 2 0 0
  0 0 5 0
  0 0 0 5
D2.paper-display = 4 4
  10 0 0 0
  0 10 0 0
  0 0 10 0
  0 0 0 10
D2.values-consistent = 4 4
  3 0 0 0
  0 3 0 0
  0 0 3 0
  0 0 0 3
H = 4 4
  1 0 0 0
  0 1 0 0
  0 0 1 0
  0 0 0 500
K = 4 4
  500 0 0 0
  0 1 0 0
  0 0 1 0
  0 0 0 1
)";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

long parse_long(const std::string& key, const std::string& v) {
  const Rational q = parse_rational(v);
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) {
    throw Error(Errc::parse, key + ": expected an integer, got '" + v + "'");
  }
  return q.get_num().get_si();
}

std::vector<long> parse_long_list(const std::string& key, std::string v) {
  for (char& c : v) {
    if (c == ',') c = ' ';
  }
  std::vector<long> out;
  for (const auto& t : tokenize(v)) out.push_back(parse_long(key, t));
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(Errc::parse, key + ": expected true or false, got '" + v + "'");
}

/// [D H; 0] style product with zero rows appended up to `rows`.
Matrix<Rational> padded_product(const Matrix<Rational>& d,
                                const Matrix<Rational>& right,
                                std::size_t rows) {
  const Matrix<Rational> p = d * right;
  Matrix<Rational> out(rows, p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) out(i, j) = p(i, j);
  }
  return out;
}

Rational frobenius2(const Matrix<Rational>& m) {
  Rational s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  }
  return s;
}

Rational normalizer(const Matrix<Rational>& d1, const Matrix<Rational>& d2,
                    const Matrix<Rational>& right) {
  const Rational tr = frobenius2(d1 * right) + frobenius2(d2 * right);
  if (sgn(tr) == 0) throw Error(Errc::degenerate, "zero starting matrix");
  return Rational(1 / tr);
}

GramPair<Rational> scaled_gram(const Matrix<Rational>& d1,
                               const Matrix<Rational>& d2,
                               const Matrix<Rational>& right,
                               const Rational& scale2) {
  const Matrix<Rational> f1 = d1 * right, f2 = d2 * right;
  return {scale2 * (f1.adjoint() * f1), scale2 * (f2.adjoint() * f2)};
}

MatrixPair<double> scaled_start(const Matrix<Rational>& d1,
                                const Matrix<Rational>& d2,
                                const Matrix<Rational>& right,
                                const Rational& scale2,
                                const ShapeParams& shape) {
  const double scale = std::sqrt(to_double(scale2));
  auto block = [&](const Matrix<Rational>& d, int rows) {
    Matrix<double> m =
        to_float(padded_product(d, right, static_cast<std::size_t>(rows)));
    return scale * m;
  };
  return {block(d1, shape.s), block(d2, shape.t)};
}

}  // namespace

std::string_view convention_name(MatrixConvention c) {
  return c == MatrixConvention::paper_display ? "paper-display"
                                              : "values-consistent";
}

MatrixConvention parse_convention(std::string_view name) {
  if (name == "paper-display") return MatrixConvention::paper_display;
  if (name == "values-consistent") return MatrixConvention::values_consistent;
  throw Error(Errc::parse, "unknown matrix convention '" + std::string(name) +
                               "' (paper-display or values-consistent)");
}

std::string_view default_experiment_config() { return kDefaultConfig; }

Rational shortest_rational(double v) {
  if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "non-finite value");
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)));
}

const Matrix<Rational>& ExperimentSpec::d2() const {
  return convention == MatrixConvention::paper_display ? d2_paper_display
                                                       : d2_values_consistent;
}

void ExperimentSpec::validate() const {
  shape.validate();
  if (shape.s < shape.k || shape.t < shape.k) {
    throw Error(Errc::shape, "experiment needs s >= k and t >= k");
  }
  const auto k_ = static_cast<std::size_t>(shape.k);
  for (const auto* m : {&d1, &d2_paper_display, &d2_values_consistent, &h, &k}) {
    if (m->rows() != k_ || m->cols() != k_) {
      throw Error(Errc::shape, "D1, D2, H and K must be k x k");
    }
  }
  mc.validate();
  for (int st : sample_steps) {
    if (st < 0) throw Error(Errc::invalid_argument, "negative sample step");
  }
  if (!(horizon_max > 0) || horizon_per_decade < 1) {
    throw Error(Errc::invalid_argument, "bad horizon settings");
  }
}

Rational ExperimentSpec::delta2() const { return normalizer(d1, d2(), h); }
Rational ExperimentSpec::epsilon2() const { return normalizer(d1, d2(), k); }

GramPair<Rational> ExperimentSpec::gram_a() const {
  return scaled_gram(d1, d2(), h, delta2());
}
GramPair<Rational> ExperimentSpec::gram_b() const {
  return scaled_gram(d1, d2(), k, epsilon2());
}
MatrixPair<double> ExperimentSpec::start_a() const {
  return scaled_start(d1, d2(), h, delta2(), shape);
}
MatrixPair<double> ExperimentSpec::start_b() const {
  return scaled_start(d1, d2(), k, epsilon2(), shape);
}

ExperimentSpec ExperimentSpec::defaults() { return parse(""); }

ExperimentSpec ExperimentSpec::parse(std::string_view text) {
  ExperimentSpec spec;
  bool base = true;
  auto apply = [&](std::string_view src) {
    std::istringstream in{std::string(src)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string body = trim(line.substr(0, line.find('#')));
      if (body.empty()) continue;
      const auto eq = body.find('=');
      const std::string where =
          (base ? "default config" : "config") + std::string(" line ") +
          std::to_string(lineno) + ": ";
      if (eq == std::string::npos) {
        throw Error(Errc::parse, where + "expected key = value");
      }
      const std::string key = trim(std::string_view(body).substr(0, eq));
      const std::string value = trim(std::string_view(body).substr(eq + 1));
      try {
        if (key == "D1" || key == "H" || key == "K" || key == "D2" ||
            key == "D2.paper-display" || key == "D2.values-consistent") {
          auto tok = tokenize(value);
          // The matrix may continue over the following lines.
          while (tok.size() < 2 ||
                 tok.size() < 2 + static_cast<std::size_t>(
                                      parse_long(key, tok[0]) *
                                      parse_long(key, tok[1]))) {
            if (!std::getline(in, line)) {
              throw Error(Errc::parse, "matrix ends early");
            }
            ++lineno;
            for (auto& t : tokenize(line)) tok.push_back(std::move(t));
          }
          std::size_t used = 0;
          Matrix<Rational> m = parse_matrix_tokens(tok, &used);
          if (used != tok.size()) {
            throw Error(Errc::parse, "extra entries after matrix");
          }
          if (key == "D1") spec.d1 = m;
          if (key == "H") spec.h = m;
          if (key == "K") spec.k = m;
          if (key == "D2" || key == "D2.paper-display") spec.d2_paper_display = m;
          if (key == "D2" || key == "D2.values-consistent") {
            spec.d2_values_consistent = m;
          }
        } else if (key == "shape") {
          const auto v = parse_long_list(key, value);
          if (v.size() != 3) throw Error(Errc::parse, "expected k,s,t");
          spec.shape = {static_cast<int>(v[0]), static_cast<int>(v[1]),
                        static_cast<int>(v[2])};
        } else if (key == "trials") {
          spec.mc.trials = parse_long(key, value);
        } else if (key == "steps") {
          spec.mc.steps = static_cast<int>(parse_long(key, value));
        } else if (key == "sigma2") {
          spec.mc.sigma2 = parse_real(value);
        } else if (key == "beta") {
          spec.mc.beta = static_cast<int>(parse_long(key, value));
        } else if (key == "dist") {
          if (value == "gaussian") {
            spec.mc.dist = EntryDist::gaussian;
          } else if (value == "rademacher") {
            spec.mc.dist = EntryDist::rademacher;
          } else {
            throw Error(Errc::parse, "dist must be gaussian or rademacher");
          }
        } else if (key == "seed") {
          const Rational q = parse_rational(value);
          if (q.get_den() != 1 || sgn(q) < 0 ||
              mpz_sizeinbase(q.get_num_mpz_t(), 2) > 64) {
            throw Error(Errc::parse, "seed must be an unsigned 64-bit integer");
          }
          spec.mc.master_seed = std::stoull(q.get_num().get_str());
        } else if (key == "shared_increments") {
          spec.mc.shared_increments = parse_bool(key, value);
        } else if (key == "threads") {
          spec.mc.threads = static_cast<int>(parse_long(key, value));
        } else if (key == "sample_steps") {
          spec.sample_steps.clear();
          for (long v : parse_long_list(key, value)) {
            spec.sample_steps.push_back(static_cast<int>(v));
          }
        } else if (key == "horizon_max") {
          spec.horizon_max = parse_real(value);
        } else if (key == "horizon_per_decade") {
          spec.horizon_per_decade = static_cast<int>(parse_long(key, value));
        } else if (key == "convention") {
          spec.convention = parse_convention(value);
        } else {
          throw Error(Errc::parse, "unknown key '" + key + "'");
        }
      } catch (const Error& e) {
        throw Error(e.code(), where + e.what());
      }
    }
  };
  apply(kDefaultConfig);
  base = false;
  apply(text);
  spec.validate();
  return spec;
}

namespace {

std::array<double, 4> root_moments(const PointConfig& roots) {
  return gsv_moments(roots.values);
}

ProcessResult predict(const std::string& name, const GramPair<Rational>& g,
                      const ShapeParams& shape,
                      const std::vector<Rational>& step_thetas,
                      const std::vector<Rational>& horizon_thetas) {
  ProcessResult r;
  r.name = name;
  const TriPoly<Rational> p = tri_charpoly(g, shape);
  r.start_charpoly = gsvd_charpoly(g);
  const EvolutionTrace steps = evolve_roots_operator(
      p, std::span<const Rational>(step_thetas), shape,
      Specialization::gsvd);
  r.predicted = steps.configs;
  for (const auto& c : r.predicted) {
    r.predicted_moments.push_back(root_moments(c));
  }
  // Every horizon point is evolved exactly from theta = 0.
  const EvolutionTrace hz = evolve_roots_operator(
      p, std::span<const Rational>(horizon_thetas), shape,
      Specialization::gsvd, OperatorPathOptions{1});
  r.horizon = hz.configs;
  return r;
}

}  // namespace

Section6Result section6_experiment(const ExperimentSpec& spec_in,
                                   const McConfig& mc) {
  ExperimentSpec spec = spec_in;
  spec.mc = mc;
  spec.validate();
  Section6Result res;
  res.spec = spec;
  res.mc = mc;
  res.sigma2 = shortest_rational(mc.sigma2);

  ExperimentSpec other = spec;
  for (auto conv : {MatrixConvention::paper_display,
                    MatrixConvention::values_consistent}) {
    other.convention = conv;
    auto roots = real_roots(gsvd_charpoly(other.gram_a()));
    (conv == MatrixConvention::paper_display ? res.start_paper_display
                                             : res.start_values_consistent) =
        std::move(roots);
  }

  std::vector<Rational> step_thetas;
  for (int i = 0; i <= mc.steps; ++i) step_thetas.push_back(res.sigma2 * i);
  std::vector<Rational> horizon;
  {
    const double lo = mc.sigma2 > 0 ? mc.sigma2 : 1e-8;
    const int n = static_cast<int>(std::ceil(
        std::log10(spec.horizon_max / lo) * spec.horizon_per_decade - 1e-9));
    horizon.push_back(Rational(0));
    for (int j = 0; j <= std::max(n, 0); ++j) {
      const double th =
          j == n ? spec.horizon_max
                 : lo * std::pow(10.0, static_cast<double>(j) /
                                           spec.horizon_per_decade);
      horizon.push_back(shortest_rational(th));
      res.horizon_thetas.push_back(th);
    }
    res.horizon_thetas.insert(res.horizon_thetas.begin(), 0.0);
  }

  res.a = predict("A", spec.gram_a(), spec.shape, step_thetas, horizon);
  res.b = predict("B", spec.gram_b(), spec.shape, step_thetas, horizon);
  res.asymptote =
      real_roots(jacobi_charpoly(spec.shape.s, spec.shape.t, spec.shape.k));

  // Sample steps past the end of a shortened run are skipped.
  std::erase_if(res.spec.sample_steps, [&](int st) { return st > mc.steps; });
  const std::vector<MatrixPair<double>> starts{spec.start_a(), spec.start_b()};
  for (int beta : {1, 2}) {
    McConfig run = mc;
    run.beta = beta;
    auto agg = run_processes(starts, run, res.spec.sample_steps);
    (beta == 1 ? res.a.beta1 : res.a.beta2) = std::move(agg[0]);
    (beta == 1 ? res.b.beta1 : res.b.beta2) = std::move(agg[1]);
  }
  return res;
}

}  // namespace ffgsv
