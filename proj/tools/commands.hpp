#pragma once

// Subcommand implementations for the qnr command-line tool. Each command takes
// parsed options plus output/error streams and returns the process exit code:
//   0 success, 1 I/O / parse / parameter failure, 2 matrix is not quadratic,
//   3 more coefficients than the matrix dimension.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <qnr/qnr.hpp>

namespace qnr::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kNotQuadratic = 2, kTooManyCoefficients = 3 };

struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  bool timestamp = true;
};

inline json provenance_json(const Provenance& p) {
  json j{{"command", p.command}, {"seed", p.seed}, {"version", kVersion}};
  if (p.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
  return j;
}

/// Parses "0.5", "-2", "0.3i", "1-2i", "0.5+0.25i".
inline Complex parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw ParseError("empty complex number");
  auto number = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::logic_error&) {
      throw ParseError("bad number '" + text + "'");
    }
    if (used != t.size()) throw ParseError("bad number '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
      return {number(s.substr(0, k)), number(s.substr(k))};
  }
  return {0.0, number(s)};
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

inline bool write_text_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open " << path << " for writing\n";
    return false;
  }
  f << text;
  if (!f) {
    err << "error: failed writing " << path << '\n';
    return false;
  }
  return true;
}

inline std::optional<ComplexMatrix> load_matrix(const std::string& path, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open " << path << '\n';
    return std::nullopt;
  }
  try {
    return read_matrix(f);
  } catch (const Error& e) {
    err << "error: " << path << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

inline std::string csv_text(const ConvexRegion& r) {
  std::ostringstream out;
  write_boundary_csv(out, r);
  return out.str();
}

struct OracleStats {
  std::size_t trials = 0;
  double max_violation = 0.0;  // largest excess over the outer approximation
  bool contained = true;       // all samples inside-or-boundary at tol 1e-8
};

inline OracleStats oracle_stats(const ConvexRegion& r, const std::vector<Complex>& samples) {
  OracleStats s;
  s.trials = samples.size();
  s.max_violation = -std::numeric_limits<double>::infinity();
  for (const Complex& z : samples) {
    for (std::size_t i = 0; i < r.size(); ++i)
      s.max_violation = std::max(s.max_violation, std::real(std::polar(1.0, -r.angles[i]) * z) - r.support[i]);
    if (outer_contains(r, z, 1e-8) == Location::outside) s.contained = false;
  }
  return s;
}

inline json oracle_json(const OracleStats& s, std::uint64_t seed) {
  return json{{"trials", s.trials},
              {"seed", seed},
              {"max_violation", s.max_violation},
              {"contained", s.contained}};
}

// ---- analyze --------------------------------------------------------------------

struct AnalyzeOptions {
  std::string input;
  std::size_t angles = kDefaultAngles;
  std::size_t oracle = 1000;
  std::uint64_t seed = 0;
  std::string report;
  std::string boundary;
  double tol = kQuadraticTol;
  Provenance provenance;
};

/// fit_quadratic -> predict_W -> compute_range -> Hausdorff distance.
inline int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  const auto a = load_matrix(opt.input, err);
  if (!a) return kFailure;
  try {
    const QuadraticSignature sig = fit_quadratic(*a);
    const SupportTable table = compute_range(*a, opt.angles);

    json report = signature_json(sig, opt.tol);
    json computation{{"grid", opt.angles}};
    const bool quadratic = sig.quadratic(opt.tol);
    if (quadratic) {
      const EllipsePrediction pred = predict_W(sig, opt.tol);
      report["prediction"] = prediction_json(pred);
      computation["hausdorff_vs_prediction"] = hausdorff_support(table, pred.ellipse, opt.angles);
    }
    computation["witness_violation"] = std::max(0.0, max_witness_violation(table));
    if (opt.oracle > 0)
      computation["oracle"] = oracle_json(oracle_stats(table, sample_oracle(*a, opt.oracle, opt.seed)), opt.seed);
    report["computation"] = computation;
    report["provenance"] = provenance_json(opt.provenance);

    const std::string text = dump_json(report);
    if (opt.report.empty()) out << text;
    else if (!write_text_file(opt.report, text, err)) return kFailure;
    if (!opt.boundary.empty() && !write_text_file(opt.boundary, csv_text(table), err)) return kFailure;
    if (!quadratic) {
      err << "not quadratic: relative residual " << format_double(sig.residual) << '\n';
      return kNotQuadratic;
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

// ---- gen ------------------------------------------------------------------------

struct GenOptions {
  std::string family;
  std::string p = "0";
  double beta = 0.25;
  std::string lambda = "1,-1";
  std::string x = "1";
  std::string dims = "0,0";
  std::uint64_t seed = 0;
  std::size_t size = 64;
  std::string out;
};

inline json hankel_prediction_json(double beta) {
  json j{{"hankel_norm_limit", power_weight_distance(beta)}};
  if (std::abs(beta) < 0.5) {
    j["singular_norm"] = singular_norm_from_hankel(power_weight_distance(beta));
    j["predictor"] = predictor_json(power_weight_predict({beta}, true));
  }
  return j;
}

inline int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    ComplexMatrix a;
    json echo{{"family", opt.family}};
    if (opt.family == "composition") {
      const Complex p = parse_complex(opt.p);
      a = composition_matrix(p, opt.size);
      echo["p"] = complex_json(p);
      echo["prediction"] = predictor_json(composition_predict(p));
    } else if (opt.family == "hankel") {
      a = power_weight_hankel(opt.beta, opt.size).matrix();
      echo["beta"] = opt.beta;
      echo["prediction"] = hankel_prediction_json(opt.beta);
    } else if (opt.family == "cauchy-circle") {
      a = cauchy_circle(opt.size);
      PredictorResult r;
      r.norm = 1.0;
      r.ess_norm = 1.0;
      r.attained = Attainment::yes;
      r.ellipse_W = involution_ellipse(1.0, Closure::closed);
      r.ellipse_Wess = involution_ellipse(1.0, Closure::closed);
      r.provenance = "cauchy-circle";
      echo["prediction"] = predictor_json(r);
    } else if (opt.family == "canonical") {
      const auto lambdas = split_list(opt.lambda);
      if (lambdas.size() != 2) throw InvalidParameter("--lambda needs two values");
      const Complex l1 = parse_complex(lambdas[0]), l2 = parse_complex(lambdas[1]);
      std::vector<double> x;
      for (const auto& v : split_list(opt.x)) x.push_back(parse_complex(v).real());
      std::sort(x.begin(), x.end(), std::greater<>());
      const auto dims = split_list(opt.dims);
      if (dims.size() != 2) throw InvalidParameter("--dims needs two values");
      const auto d1 = static_cast<std::size_t>(std::stoul(dims[0]));
      const auto d2 = static_cast<std::size_t>(std::stoul(dims[1]));
      CounterRng rng(opt.seed);
      a = assemble_canonical(l1, l2, x, d1, d2, rng);
      const QuadraticSignature sig = fit_quadratic(a);
      echo["seed"] = opt.seed;
      echo["signature"] = signature_json(sig);
      echo["prediction"] = prediction_json(predict_W(sig));
    } else {
      throw InvalidParameter("unknown family '" + opt.family + "'");
    }
    echo["size"] = a.rows();
    if (opt.out.empty()) throw InvalidParameter("--out is required");
    std::ostringstream text;
    write_matrix(text, a);
    if (!write_text_file(opt.out, text.str(), err)) return kFailure;
    out << dump_json(echo);
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

// ---- sweep ----------------------------------------------------------------------

struct SweepOptions {
  std::string family;
  std::string p = "0.5";
  double beta = 0.25;
  std::vector<std::size_t> sizes;
  double tail_fraction = 0.5;
  std::string out;
};

struct SweepRow {
  std::size_t n = 0;
  double norm = 0.0;
  double ess_estimate = 0.0;
  double major_computed = 0.0;
  double major_predicted = 0.0;
};

inline std::vector<SweepRow> run_sweep(const SweepOptions& opt) {
  if (opt.sizes.size() < 2) throw InvalidParameter("need at least two sizes");
  if (!(opt.tail_fraction > 0.0 && opt.tail_fraction < 1.0))
    throw InvalidParameter("tail fraction must lie in (0, 1)");
  std::vector<SweepRow> rows;
  for (std::size_t n : opt.sizes) {
    SweepRow row;
    row.n = n;
    const auto k = static_cast<std::size_t>(std::floor(opt.tail_fraction * static_cast<double>(n)));
    if (opt.family == "composition") {
      const Complex p = parse_complex(opt.p);
      const ComplexMatrix a = composition_matrix(p, n);
      row.norm = spectral_norm(a);
      row.ess_estimate = tail_norm(a, k);
      // Foci at +-1: the major axis is the width along the real axis.
      row.major_computed = support_value(a, 0.0).h + support_value(a, std::numbers::pi).h;
      row.major_predicted = composition_major_axis(p);
    } else if (opt.family == "hankel") {
      if (!(std::abs(opt.beta) < 0.5)) throw InvalidParameter("hankel sweep needs |beta| < 1/2");
      const ComplexMatrix h = power_weight_hankel(opt.beta, n).matrix();
      row.norm = spectral_norm(h);
      row.ess_estimate = tail_norm(h, k);
      const double s = singular_norm_from_hankel(row.norm);
      row.major_computed = s + 1.0 / s;
      row.major_predicted = power_weight_predict({opt.beta}, true).ellipse_W->major_axis();
    } else if (opt.family == "cauchy-circle") {
      const ComplexMatrix s = cauchy_circle(n);
      row.norm = spectral_norm(s);
      row.ess_estimate = tail_norm(s, k);
      row.major_computed = support_value(s, 0.0).h + support_value(s, std::numbers::pi).h;
      row.major_predicted = 2.0;
    } else {
      throw InvalidParameter("unknown family '" + opt.family + "'");
    }
    rows.push_back(row);
  }
  return rows;
}

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto rows = run_sweep(opt);
    std::ostringstream csv;
    csv << "N,norm,ess_estimate,major_computed,major_predicted\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const SweepRow& r = rows[i];
      csv << r.n << ',' << format_double(r.norm) << ',' << format_double(r.ess_estimate) << ','
          << format_double(r.major_computed) << ',' << format_double(r.major_predicted) << '\n';
      if (i > 0 && r.norm < rows[i - 1].norm - 1e-12)
        err << "warning: norm decreased from N=" << rows[i - 1].n << " to N=" << r.n << '\n';
    }
    if (opt.out.empty()) out << csv.str();
    else if (!write_text_file(opt.out, csv.str(), err)) return kFailure;
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

// ---- cnum -----------------------------------------------------------------------

struct CnumOptions {
  std::string input;
  std::vector<double> c;
  std::size_t angles = kDefaultAngles;
  std::size_t oracle = 1000;
  std::uint64_t seed = 0;
  std::optional<double> s0;
  std::string report;
  std::string boundary;
  Provenance provenance;
};

inline int cmd_cnum(const CnumOptions& opt, std::ostream& out, std::ostream& err) {
  const auto a = load_matrix(opt.input, err);
  if (!a) return kFailure;
  try {
    const Coefficients c(opt.c);
    if (c.dropped() > 0) err << "warning: dropped " << c.dropped() << " zero coefficient(s)\n";
    if (c.k() > static_cast<std::size_t>(a->rows())) {
      err << "error: " << c.k() << " coefficients exceed dimension " << a->rows() << '\n';
      return kTooManyCoefficients;
    }
    const ConvexRegion region = compute_wc(*a, c, opt.angles);
    json report{{"c", c.values()}, {"k", c.k()}, {"norm_c", c.norm_c()}, {"m", c.m()}};
    json computation{{"grid", opt.angles}};
    if (opt.angles % 2 == 0) computation["min_width"] = std::max(0.0, min_width(region));
    if (opt.oracle > 0)
      computation["oracle"] = oracle_json(oracle_stats(region, frame_oracle(*a, c, opt.oracle, opt.seed)), opt.seed);

    const QuadraticSignature sig = fit_quadratic(*a);
    report["signature"] = signature_json(sig);
    if (sig.quadratic()) {
      const SandwichReport sw = sandwich_check(*a, sig, c, opt.s0, opt.angles);
      json sj{{"outer", ellipse_json(sw.outer)},
              {"max_outer_violation", sw.max_outer_violation},
              {"max_gap", sw.max_gap}};
      if (sw.inner) {
        sj["inner"] = ellipse_json(*sw.inner);
        sj["max_inner_violation"] = *sw.max_inner_violation;
      }
      report["sandwich"] = sj;
    }
    report["computation"] = computation;
    report["provenance"] = provenance_json(opt.provenance);

    const std::string text = dump_json(report);
    if (opt.report.empty()) out << text;
    else if (!write_text_file(opt.report, text, err)) return kFailure;
    if (!opt.boundary.empty() && !write_text_file(opt.boundary, csv_text(region), err)) return kFailure;
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace qnr::cli
