#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"

namespace eigcount {

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline bool blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

inline double parse_double(const std::string& tok, std::size_t line) {
  // strtod accepts Fortran-free forms like 1.0e+05 and "inf"; reject the latter below
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw ParseError(line, "malformed number '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + tok + "'");
  return v;
}

inline std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "malformed integer '" + tok + "'");
  return v;
}

}  // namespace detail

/// Reads a Matrix Market stream (coordinate or array; real, integer or complex
/// field). Symmetric, skew-symmetric and hermitian storage is expanded.
inline SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError(lineno, "missing %%MatrixMarket banner");
  object = detail::lower(object);
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (object != "matrix") throw UnsupportedFormat("unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array")
    throw UnsupportedFormat("unsupported format '" + format + "'");
  if (field == "pattern") throw UnsupportedFormat("pattern matrices carry no values");
  if (field != "real" && field != "integer" && field != "complex" && field != "double")
    throw UnsupportedFormat("unsupported field '" + field + "'");

  Symmetry tag = Symmetry::general;
  if (symmetry == "symmetric") tag = Symmetry::symmetric;
  else if (symmetry == "skew-symmetric") tag = Symmetry::skew_symmetric;
  else if (symmetry == "hermitian") tag = Symmetry::hermitian;
  else if (symmetry != "general") throw UnsupportedFormat("unsupported symmetry '" + symmetry + "'");
  if (tag == Symmetry::hermitian && field != "complex")
    throw UnsupportedFormat("hermitian storage requires the complex field");

  const bool is_complex = field == "complex";
  const bool coordinate = format == "coordinate";

  // size line
  do {
    if (!std::getline(in, line)) throw ParseError(lineno, "missing size line");
    ++lineno;
  } while (detail::blank_or_comment(line));

  std::vector<std::string> tok;
  auto split = [&tok](const std::string& s) {
    tok.clear();
    std::istringstream ss(s);
    std::string t;
    while (ss >> t) tok.push_back(t);
  };

  split(line);
  if (tok.size() != (coordinate ? 3u : 2u)) throw ParseError(lineno, "malformed size line");
  const std::size_t rows = detail::parse_index(tok[0], lineno);
  const std::size_t cols = detail::parse_index(tok[1], lineno);
  if (rows == 0 || cols == 0) throw ParseError(lineno, "matrix dimensions must be positive");
  if (tag != Symmetry::general && rows != cols)
    throw ParseError(lineno, "symmetric storage requires a square matrix");

  std::size_t expected = 0;
  if (coordinate) {
    expected = detail::parse_index(tok[2], lineno);
  } else if (tag == Symmetry::general) {
    expected = rows * cols;
  } else if (tag == Symmetry::skew_symmetric) {
    expected = rows * (rows - 1) / 2;
  } else {
    expected = rows * (rows + 1) / 2;
  }

  std::vector<Triplet> entries;
  entries.reserve(tag == Symmetry::general ? expected : 2 * expected);

  auto push = [&](std::size_t i, std::size_t j, cplx v) {
    entries.push_back({i, j, v});
    if (i == j) return;
    switch (tag) {
      case Symmetry::general: break;
      case Symmetry::symmetric: entries.push_back({j, i, v}); break;
      case Symmetry::skew_symmetric: entries.push_back({j, i, -v}); break;
      case Symmetry::hermitian: entries.push_back({j, i, std::conj(v)}); break;
    }
  };

  // array format walks the stored part column by column
  std::size_t ai = 0, aj = 0;
  if (!coordinate && tag == Symmetry::skew_symmetric) ai = 1;

  std::size_t seen = 0;
  const std::size_t value_tokens = is_complex ? 2 : 1;
  while (seen < expected && std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    split(line);
    if (coordinate) {
      if (tok.size() != 2 + value_tokens) throw ParseError(lineno, "malformed entry line");
      const std::size_t i = detail::parse_index(tok[0], lineno);
      const std::size_t j = detail::parse_index(tok[1], lineno);
      if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError(lineno, "index out of range");
      if (tag != Symmetry::general && i < j)
        throw ParseError(lineno, "symmetric storage must hold the lower triangle");
      if (tag == Symmetry::skew_symmetric && i == j)
        throw ParseError(lineno, "skew-symmetric storage has no diagonal entries");
      const double re = detail::parse_double(tok[2], lineno);
      const double im = is_complex ? detail::parse_double(tok[3], lineno) : 0.0;
      push(i - 1, j - 1, {re, im});
    } else {
      if (tok.size() != value_tokens) throw ParseError(lineno, "malformed entry line");
      const double re = detail::parse_double(tok[0], lineno);
      const double im = is_complex ? detail::parse_double(tok[1], lineno) : 0.0;
      if (re != 0.0 || im != 0.0) push(ai, aj, {re, im});
      if (++ai == rows) {
        ++aj;
        ai = tag == Symmetry::general ? 0 : (tag == Symmetry::skew_symmetric ? aj + 1 : aj);
      }
    }
    ++seen;
  }
  if (seen != expected)
    throw ParseError(lineno, "dimension mismatch: expected " + std::to_string(expected) +
                                 " entries, found " + std::to_string(seen));
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::blank_or_comment(line))
      throw ParseError(lineno, "dimension mismatch: more entries than declared");
  }
  return SparseMatrix(rows, cols, std::move(entries), tag);
}

inline SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_matrix_market(in);
}

/// Writes general coordinate storage; the real field is used when every entry is real.
/// Values are printed with 17 significant digits, so doubles survive a round trip.
inline void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  const bool real = m.is_real();
  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  char buf[64];
  for (const auto& t : m.entries()) {
    out << t.row + 1 << ' ' << t.col + 1;
    std::snprintf(buf, sizeof buf, " %.17g", t.value.real());
    out << buf;
    if (!real) {
      std::snprintf(buf, sizeof buf, " %.17g", t.value.imag());
      out << buf;
    }
    out << '\n';
  }
}

inline void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_matrix_market(out, m);
}

}  // namespace eigcount
