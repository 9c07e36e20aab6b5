// SPDX-License-Identifier: Apache-2.0
#include "ffgsv/textio.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ffgsv {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  bool comment = false;
  for (char c : text) {
    if (c == '\n') comment = false;
    if (c == '#') comment = true;
    if (comment || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

bool is_complex_token(const std::string& t) {
  return !t.empty() && (t.back() == 'i' || t.back() == 'j');
}

double finite_real(std::string_view t) {
  const double v = parse_real(t);
  if (!std::isfinite(v)) {
    throw Error(Errc::parse, "non-finite entry '" + std::string(t) + "'");
  }
  return v;
}

std::size_t parse_dim(const std::string& t) {
  const Rational q = parse_rational(t);
  if (q.get_den() != 1 || sgn(q) <= 0 || q > 100000) {
    throw Error(Errc::parse, "bad matrix dimension '" + t + "'");
  }
  return q.get_num().get_ui();
}

template <class T, class F>
Matrix<T> parse_tokens(std::span<const std::string> tok, std::size_t* used,
                       F entry) {
  if (tok.size() < 2) throw Error(Errc::parse, "missing matrix dimensions");
  const std::size_t r = parse_dim(tok[0]), c = parse_dim(tok[1]);
  if (tok.size() < 2 + r * c) {
    throw Error(Errc::parse, "matrix has fewer than rows*cols entries");
  }
  Matrix<T> m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = entry(tok[2 + i * c + j]);
  }
  if (used) *used = 2 + r * c;
  return m;
}

template <class M>
M whole(std::string_view text, M (*parse)(std::span<const std::string>,
                                          std::size_t*)) {
  const auto tok = tokenize(text);
  std::size_t used = 0;
  M m = parse(tok, &used);
  if (used != tok.size()) {
    throw Error(Errc::parse, "unexpected trailing matrix entries");
  }
  return m;
}

}  // namespace

bool tokens_are_complex(std::span<const std::string> tokens) {
  for (const auto& t : tokens) {
    if (is_complex_token(t)) return true;
  }
  return false;
}

Complex parse_complex(std::string_view token) {
  std::string t(token);
  if (!is_complex_token(t)) return {finite_real(t), 0.0};
  t.pop_back();
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag = [](std::string s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return finite_real(s);
  };
  if (split == std::string::npos) return {0.0, imag(t)};
  return {finite_real(t.substr(0, split)), imag(t.substr(split))};
}

Matrix<Rational> parse_matrix_tokens(std::span<const std::string> tokens,
                                     std::size_t* used) {
  return parse_tokens<Rational>(tokens, used, [](const std::string& t) {
    if (is_complex_token(t)) {
      throw Error(Errc::mode, "complex entry '" + t + "' in a real matrix");
    }
    return parse_rational(t);
  });
}

Matrix<Complex> parse_complex_matrix_tokens(std::span<const std::string> tokens,
                                            std::size_t* used) {
  return parse_tokens<Complex>(tokens, used, [](const std::string& t) {
    return parse_complex(t);
  });
}

Matrix<Rational> parse_matrix(std::string_view text) {
  return whole<Matrix<Rational>>(text, &parse_matrix_tokens);
}

Matrix<Complex> parse_complex_matrix(std::string_view text) {
  return whole<Matrix<Complex>>(text, &parse_complex_matrix_tokens);
}

bool matrix_text_is_complex(std::string_view text) {
  return tokens_are_complex(tokenize(text));
}

namespace {

template <class T, class F>
std::string format_with(const Matrix<T>& m, F entry) {
  std::string out = std::to_string(m.rows()) + ' ' + std::to_string(m.cols());
  out += '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += entry(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_matrix(const Matrix<Rational>& m) {
  return format_with(m, [](const Rational& q) { return format_rational(q); });
}

std::string format_matrix(const Matrix<double>& m) {
  return format_with(m, [](double v) { return format_double(v); });
}

std::string format_matrix(const Matrix<Complex>& m) {
  return format_with(m, [](const Complex& z) {
    std::string im = format_double(z.imag());
    if (im.front() != '-') im = '+' + im;
    return format_double(z.real()) + im + 'i';
  });
}

PolyText parse_poly_text(std::string_view text) {
  PolyText out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    const int arity = static_cast<int>(tok.size()) - 1;
    if (arity < 1 || arity > 3) {
      throw Error(Errc::parse,
                  where + "expected a coefficient and 1 to 3 exponents");
    }
    if (out.arity != 0 && arity != out.arity) {
      throw Error(Errc::parse, where + "inconsistent number of exponents");
    }
    out.arity = arity;
    std::array<int, 3> e{};
    for (int v = 0; v < arity; ++v) {
      const auto& t = tok[static_cast<std::size_t>(v) + 1];
      int x = -1;
      try {
        std::size_t pos = 0;
        x = std::stoi(t, &pos);
        if (pos != t.size()) x = -1;
      } catch (const std::exception&) {
        x = -1;
      }
      if (x < 0 || x > 4096) {
        throw Error(Errc::parse, where + "bad exponent '" + t + "'");
      }
      e[static_cast<std::size_t>(v)] = x;
    }
    try {
      out.terms.emplace_back(e, parse_rational(tok[0]));
    } catch (const Error& err) {
      throw Error(Errc::parse, where + err.what());
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(Errc::io, "write failed for '" + path + "'");
}

}  // namespace ffgsv
