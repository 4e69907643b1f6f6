#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnumrange.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "operators.hpp"
#include "quadratic.hpp"

namespace qnr {

using json = nlohmann::ordered_json;

/// 17 significant digits, lowercase exponent, -0 printed as 0.
inline std::string format_double(double x) {
  if (!std::isfinite(x)) throw InvalidParameter("cannot serialize a non-finite value");
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_escaped(std::ostream& out, const std::string& s) {
  // nlohmann's escaping handles control characters and unicode correctly.
  out << json(s).dump();
}

inline void dump_value(std::ostream& out, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        write_escaped(out, it.key());
        out << (indent < 0 ? ":" : ": ");
        dump_value(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      out << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out << (scalars && indent >= 0 ? ", " : ",");
        first = false;
        if (!scalars) newline(depth + 1);
        dump_value(out, v, indent, depth + 1);
      }
      if (!scalars) newline(depth);
      out << ']';
      return;
    }
    case json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    case json::value_t::string:
      write_escaped(out, j.get<std::string>());
      return;
    default:
      out << j.dump();
      return;
  }
}

}  // namespace detail

/// Serializes with the library's float format; `indent` < 0 gives compact output.
inline std::string dump_json(const json& j, int indent = 2) {
  std::ostringstream out;
  detail::dump_value(out, j, indent, 0);
  if (indent >= 0) out << '\n';
  return out.str();
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

// ---- matrix files: {"n": n, "entries": [[[re, im], ...], ...]} --------------

inline json matrix_json(const ComplexMatrix& a) {
  require_operator(a);
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(complex_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"n", a.rows()}, {"entries", std::move(rows)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw ParseError("matrix file needs \"n\" and \"entries\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() <= 0)
    throw ParseError("\"n\" must be a positive integer");
  const auto n = static_cast<Eigen::Index>(j["n"].get<long long>());
  const json& rows = j["entries"];
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    throw ParseError("\"entries\" must have n rows");
  ComplexMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ParseError("row " + std::to_string(i) + " must have n entries");
    for (Eigen::Index k = 0; k < n; ++k) a(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  if (!all_finite(a)) throw ParseError("matrix has non-finite entries");
  return a;
}

inline ComplexMatrix read_matrix(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  return matrix_from_json(j);
}

inline void write_matrix(std::ostream& out, const ComplexMatrix& a) { out << dump_json(matrix_json(a)); }

// ---- boundary CSV: psi,h,re,im -----------------------------------------------

inline void write_boundary_csv(std::ostream& out, const ConvexRegion& r) {
  out << "psi,h,re,im\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    out << format_double(r.angles[i]) << ',' << format_double(r.support[i]) << ','
        << format_double(r.witnesses[i].real()) << ',' << format_double(r.witnesses[i].imag()) << '\n';
}

inline ConvexRegion read_boundary_csv(std::istream& in) {
  ConvexRegion r;
  std::string line;
  if (!std::getline(in, line) || line != "psi,h,re,im") throw ParseError("missing CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double v[4];
    for (double& x : v) {
      if (!std::getline(row, cell, ',')) throw ParseError("short CSV row: " + line);
      try {
        std::size_t used = 0;
        x = std::stod(cell, &used);
        if (used != cell.size()) throw ParseError("bad number: " + cell);
      } catch (const std::logic_error&) {
        throw ParseError("bad number: " + cell);
      }
    }
    r.angles.push_back(v[0]);
    r.support.push_back(v[1]);
    r.witnesses.emplace_back(v[2], v[3]);
  }
  return r;
}

// ---- report fragments ----------------------------------------------------------

inline json ellipse_json(const EllipseDisc& e) {
  return json{{"foci", json::array({complex_json(e.focus1()), complex_json(e.focus2())})},
              {"major", e.major_axis()},
              {"minor", e.minor_axis()},
              {"closed", e.boundary() == Closure::closed ? "yes"
                         : e.boundary() == Closure::open ? "no"
                                                         : "unknown"}};
}

inline json prediction_json(const EllipsePrediction& p) {
  json j = ellipse_json(p.ellipse);
  j["source"] = to_string(p.source);
  j["s_used"] = p.s_used;
  j["attained"] = to_string(p.attained);
  return j;
}

inline json signature_json(const QuadraticSignature& sig, double tol = kQuadraticTol) {
  return json{{"mu", complex_json(sig.mu)},
              {"nu", complex_json(sig.nu)},
              {"lambda", json::array({complex_json(sig.lambda1), complex_json(sig.lambda2)})},
              {"s", sig.s},
              {"residual", sig.residual},
              {"quadratic", sig.quadratic(tol)}};
}

inline json predictor_json(const PredictorResult& r) {
  json j;
  j["norm"] = r.norm ? json(*r.norm) : json("unknown");
  j["ess_norm"] = r.ess_norm;
  j["ellipse_W"] = r.ellipse_W ? ellipse_json(*r.ellipse_W) : json("unknown");
  j["ellipse_Wess"] = ellipse_json(r.ellipse_Wess);
  j["attained"] = to_string(r.attained);
  j["provenance"] = r.provenance;
  return j;
}

}  // namespace qnr
