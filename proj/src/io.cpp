#include "qbell/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qbell/errors.hpp"

namespace qbell {

namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Complex pair_value(const Json& p) {
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
    throw ValidationError("matrix-format", "matrix entries must be [re, im] pairs");
  }
  return {p[0].get<double>(), p[1].get<double>()};
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real() + 0.0, m(i, j).imag() + 0.0});
  }
  return out;
}

CMatrix matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array()) throw ValidationError("matrix-format", "matrix must be a JSON array");
  CMatrix m(rows, cols);
  const bool nested = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (nested) {
    if (static_cast<int>(j.size()) != rows) {
      throw ValidationError("matrix-format", "expected " + std::to_string(rows) + " matrix rows");
    }
    for (int r = 0; r < rows; ++r) {
      if (static_cast<int>(j[r].size()) != cols) {
        throw ValidationError("matrix-format", "expected " + std::to_string(cols) + " entries per row");
      }
      for (int c = 0; c < cols; ++c) m(r, c) = pair_value(j[r][c]);
    }
  } else {
    if (static_cast<int>(j.size()) != rows * cols) {
      throw ValidationError("matrix-format", "expected " + std::to_string(rows * cols) +
                                                 " row-major entries, got " + std::to_string(j.size()));
    }
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = pair_value(j[r * cols + c]);
    }
  }
  return m;
}

Json bloch_to_json(const BlochVector& r) {
  Json out = Json::array();
  for (double x : r.coords) out.push_back(x + 0.0);
  return out;
}

Json basis_to_json(const GellMannBasis& basis) {
  Json out = Json::array();
  for (const auto& g : basis.generators()) out.push_back(matrix_to_json(g));
  return out;
}

Json observable_to_json(const QuditObservable& x) {
  return {{"dim", x.dim()}, {"matrix", matrix_to_json(x.matrix())}, {"bloch", bloch_to_json(x.bloch())}};
}

QuditObservable observable_from_json(const Json& j) {
  const int d = j.at("dim").get<int>();
  return QuditObservable::from_matrix(matrix_from_json(j.at("matrix"), d, d));
}

Json state_to_json(const TwoQuditState& state) {
  return {{"dim", state.dim()}, {"rho", matrix_to_json(state.rho())}};
}

TwoQuditState state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("rho")) {
    throw ValidationError("state-format", "state file must be an object with \"dim\" and \"rho\"");
  }
  const int d = j.at("dim").get<int>();
  if (d < 2) throw DimensionError("qudit dimension must be >= 2, got " + std::to_string(d));
  return TwoQuditState::from_density(d, matrix_from_json(j.at("rho"), d * d, d * d));
}

TwoQuditState load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("readable-file", "cannot open state file " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ValidationError("state-format", "state file " + path.string() + " is not valid JSON: " + e.what());
  }
  return state_from_json(j);
}

std::string correlation_to_csv(const CorrelationMatrix& t) {
  std::ostringstream out;
  const RMatrix& m = t.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << full(m(i, j));
    out << '\n';
  }
  return out.str();
}

Json certificate_to_json(const PerfectnessCertificate& cert) {
  Json violations = Json::array();
  for (const auto& v : cert.spectral_violations) {
    violations.push_back({{"lambda_i", v.lambda_i}, {"lambda_k", v.lambda_k}, {"probability", v.probability}});
  }
  return {{"sign", cert.sign},
          {"accepted", cert.accepted},
          {"value", cert.value},
          {"residual", cert.residual},
          {"operator_norm", cert.operator_norm},
          {"spectral_violations", violations},
          {"observable", observable_to_json(cert.observable)}};
}

Json membership_to_json(const ClassMembership& m) {
  Json signs = Json::array();
  for (const auto& s : m.signs) {
    signs.push_back({{"sign", s.sign},
                     {"eigenvalue", s.eigenvalue},
                     {"multiplicity", s.multiplicity},
                     {"certified", s.witness.has_value()},
                     {"witness", s.witness ? bloch_to_json(*s.witness) : Json(nullptr)},
                     {"source", s.source},
                     {"restarts_used", s.restarts_used},
                     {"best_residual", s.best_residual}});
  }
  return {{"in_class", m.in_class},
          {"spectral_norm", m.spectral_norm},
          {"extreme_eigenvalue", m.extreme_eigenvalue},
          {"witness_vector", m.witness_vector ? bloch_to_json(*m.witness_vector) : Json(nullptr)},
          {"signs", signs},
          {"search_diagnostics",
           {{"restarts_used", m.restarts_used},
            {"best_residual", std::isfinite(m.best_residual) ? Json(m.best_residual) : Json(nullptr)}}}};
}

Json bellmax_report_to_json(const BellMaxReport& r, bool include_timing) {
  Json restarts = Json::array();
  for (const auto& t : r.traces) {
    restarts.push_back({{"restart", t.restart},
                        {"seed", t.seed},
                        {"value", t.value},
                        {"converged", t.converged},
                        {"iterations", t.iterations}});
  }
  Json out = {{"dim", r.dim},
              {"sign", r.sign},
              {"best_value", r.best_value},
              {"best_restart", r.best_restart},
              {"bound", kQuantumBound},
              {"best_A", observable_to_json(r.best_a)},
              {"best_B", observable_to_json(r.best_b)},
              {"best_Btilde", observable_to_json(r.best_b_tilde)},
              {"b_perfect_residual", r.b_perfect_residual},
              {"restarts", r.restarts},
              {"converged_restarts", r.converged_restarts},
              {"per_restart", restarts}};
  if (include_timing) out["timing"] = {{"wall_time_seconds", r.wall_time_seconds}};
  return out;
}

std::string bellmax_trace_csv(const BellMaxReport& r) {
  std::ostringstream out;
  out << "restart,iteration,value\n";
  for (const auto& t : r.traces) {
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      out << t.restart << ',' << i + 1 << ',' << full(t.values[i]) << '\n';
    }
  }
  return out.str();
}

Json lhv_report_to_json(const LhvCheckReport& r) {
  return {{"sign", r.sign},
          {"models_sampled", r.models_sampled},
          {"max_bell_value", r.max_bell_value},
          {"constraint_residual_max", r.constraint_residual_max},
          {"classical_bound", 1.0},
          {"seed", r.seed}};
}

}  // namespace qbell
