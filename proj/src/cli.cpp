#include "qbell/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qbell/bellmax.hpp"
#include "qbell/errors.hpp"
#include "qbell/io.hpp"
#include "qbell/lhv.hpp"
#include "qbell/perfectness.hpp"
#include "qbell/states.hpp"

namespace qbell::cli {

namespace {

constexpr const char* kSchema = "1";

struct RunConfig {
  std::string state = "ghz";
  std::optional<int> dim;
  std::string sign = "+";
  int restarts = 64;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iters = 500;
  int threads = 1;
  std::string out;
  std::string format = "json";
  long models = 10000;
  int count = 4;
  int search_restarts = 32;
  bool fixed_b = false;
  bool timing = false;
};

std::optional<long long> env_integer(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const long long x = std::strtoll(v, &end, 10);
  if (*end != '\0') throw ValidationError("environment", std::string(name) + " must be an integer");
  return x;
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "+1" || s == "1" || s == "plus") return 1;
  if (s == "-" || s == "-1" || s == "minus") return -1;
  throw ValidationError("sign", "--sign must be + or -, got '" + s + "'");
}

struct LoadedState {
  TwoQuditState state;
  bool is_ghz = false;
};

LoadedState load(const RunConfig& cfg) {
  if (cfg.state == "ghz") {
    const int d = cfg.dim.value_or(2);
    if (d < 2) throw DimensionError("--dim must be >= 2");
    return {ghz(d), true};
  }
  if (cfg.state.rfind("file:", 0) == 0) {
    TwoQuditState s = load_state(cfg.state.substr(5));
    if (cfg.dim && *cfg.dim != s.dim()) {
      throw ValidationError("dim", "--dim " + std::to_string(*cfg.dim) + " does not match the state file (d=" +
                                       std::to_string(s.dim()) + ")");
    }
    return {std::move(s), false};
  }
  throw ValidationError("state-source", "--state must be 'ghz' or 'file:<path>', got '" + cfg.state + "'");
}

void require_even(int d) {
  if (d % 2 != 0) {
    throw DimensionError("odd dimension d=" + std::to_string(d) +
                         ": there are no traceless observables with eigenvalues +-1, so perfect "
                         "correlations cannot be certified");
  }
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw ValidationError("writable-output", "cannot write " + cfg.out);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json real_matrix(const RMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const auto loaded = load(cfg);
  const int d = loaded.state.dim();
  const CorrelationMatrix t = correlation_matrix(loaded.state);
  if (cfg.format == "csv") {
    emit(cfg, out, correlation_to_csv(t));
    return kSuccess;
  }
  Json j = {{"schema", kSchema}, {"command", "spectrum"}, {"state", cfg.state}, {"dim", d},
            {"symmetric", loaded.state.symmetric()}, {"correlation_matrix", real_matrix(t.matrix())}};
  if (t.asymmetry() <= 1e-10) {
    const SymmetricSpectrum spec = eig_T(t);
    j["eigenvalues"] = std::vector<double>(spec.eigenvalues.data(), spec.eigenvalues.data() + spec.eigenvalues.size());
    Json clusters = Json::array();
    for (const auto& c : spec.clusters) clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
    j["clusters"] = clusters;
    j["spectral_norm"] = spec.spectral_norm;
    if (loaded.is_ghz) {
      const int pairs = d * (d - 1) / 2;
      const double lam = 2.0 / d;
      Json expected = Json::array({{{"value", -lam}, {"multiplicity", pairs}},
                                   {{"value", lam}, {"multiplicity", pairs + d - 1}}});
      bool matches = spec.clusters.size() == 2 && spec.clusters[0].multiplicity == pairs &&
                     spec.clusters[1].multiplicity == pairs + d - 1 &&
                     std::abs(spec.clusters[0].value + lam) <= 1e-11 &&
                     std::abs(spec.clusters[1].value - lam) <= 1e-11;
      j["ghz_blocks"] = {{"symmetric_block", {{"size", pairs}, {"eigenvalue", lam}}},
                         {"antisymmetric_block", {{"size", pairs}, {"eigenvalue", -lam}}},
                         {"diagonal_block", {{"size", d - 1}, {"eigenvalue", lam}}},
                         {"expected_clusters", expected},
                         {"matches", matches}};
    }
  } else {
    Eigen::JacobiSVD<RMatrix> svd(t.matrix());
    j["spectral_norm"] = svd.singularValues()(0);
  }
  emit(cfg, out, dump(j));
  return kSuccess;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  const auto loaded = load(cfg);
  require_even(loaded.state.dim());
  const ClassMembership m =
      certify_perfect_class(loaded.state, cfg.tol, {cfg.search_restarts, cfg.seed, 200});
  Json observables = Json::object();
  for (const auto& s : m.signs) {
    if (!s.witness) continue;
    Json list = Json::array();
    for (const auto& b : find_perfect_observables(loaded.state, s.sign, cfg.count, cfg.seed, cfg.tol)) {
      list.push_back(certificate_to_json(check_bell_condition(loaded.state, b, cfg.tol)));
    }
    observables[s.sign > 0 ? "+" : "-"] = list;
  }
  Json j = {{"schema", kSchema}, {"command", "certify"}, {"state", cfg.state}, {"dim", loaded.state.dim()},
            {"certified", m.in_class}, {"membership", membership_to_json(m)},
            {"perfect_observables", observables}};
  emit(cfg, out, dump(j));
  return m.in_class ? kSuccess : kCertificationFailure;
}

int cmd_maximize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const int sign = parse_sign(cfg.sign);
  const auto loaded = load(cfg);
  require_even(loaded.state.dim());
  BellMaxOptions opts;
  opts.restarts = cfg.restarts;
  opts.seed = cfg.seed;
  opts.tol = cfg.tol;
  opts.max_iters = cfg.max_iters;
  opts.threads = cfg.threads;
  opts.perturb_b = !cfg.fixed_b;
  const BellMaxReport r = maximize_bell(loaded.state, sign, opts);
  if (r.converged_restarts < r.restarts) {
    err << "warning: " << (r.restarts - r.converged_restarts) << " of " << r.restarts
        << " restarts hit --max-iters before converging\n";
  }
  if (cfg.format == "csv") {
    emit(cfg, out, bellmax_trace_csv(r));
  } else {
    Json j = {{"schema", kSchema}, {"command", "maximize"}, {"state", cfg.state},
              {"report", bellmax_report_to_json(r, cfg.timing)},
              {"within_bound", r.within_bound(cfg.tol)}};
    emit(cfg, out, dump(j));
  }
  if (!r.within_bound(cfg.tol)) {
    err << "bound violation: best value " << r.best_value << " exceeds 3/2\n";
    return kBoundViolation;
  }
  return kSuccess;
}

int cmd_lhv(const RunConfig& cfg, std::ostream& out) {
  const int sign = parse_sign(cfg.sign);
  const LhvCheckReport r = lhv_monte_carlo(sign, cfg.models, cfg.seed);
  Json j = {{"schema", kSchema}, {"command", "lhv"}, {"report", lhv_report_to_json(r)},
            {"within_bound", r.max_bell_value <= 1.0 + 1e-9}};
  emit(cfg, out, dump(j));
  return kSuccess;
}

int cmd_basis(const RunConfig& cfg, std::ostream& out) {
  const int d = cfg.dim.value_or(2);
  const GellMannBasis basis = build_basis(d);
  emit(cfg, out, dump({{"schema", kSchema}, {"command", "basis"}, {"dim", d}, {"generators", basis_to_json(basis)}}));
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    if (auto s = env_integer("QBELL_SEED")) cfg.seed = static_cast<std::uint64_t>(*s);
    if (auto t = env_integer("QBELL_THREADS")) cfg.threads = static_cast<int>(*t);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  CLI::App app{"Original Bell inequality for two-qudit states: correlation spectra, "
               "perfect-correlation certificates and constrained maximization"};
  app.require_subcommand(1);

  auto add_state = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state, "ghz or file:<path> (JSON {dim, rho})");
    sub->add_option("--dim", cfg.dim, "single-qudit dimension d");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* spectrum = app.add_subcommand("spectrum", "correlation matrix, eigenvalues and spectral norm");
  add_state(spectrum);
  add_output(spectrum);

  auto* certify = app.add_subcommand("certify", "certify perfect correlations/anticorrelations");
  add_state(certify);
  add_output(certify);
  certify->add_option("--tol", cfg.tol, "certification tolerance");
  certify->add_option("--seed", cfg.seed, "seed for the witness search");
  certify->add_option("--restarts", cfg.search_restarts, "witness search restarts");
  certify->add_option("--count", cfg.count, "perfect observables to list per sign");

  auto* maximize = app.add_subcommand("maximize", "maximize the Bell expression under perfect correlations");
  add_state(maximize);
  add_output(maximize);
  maximize->add_option("--sign", cfg.sign, "+ (correlations) or - (anticorrelations)");
  maximize->add_option("--restarts", cfg.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  maximize->add_option("--seed", cfg.seed, "base seed");
  maximize->add_option("--tol", cfg.tol, "convergence and constraint tolerance");
  maximize->add_option("--max-iters", cfg.max_iters, "iterations per restart")->check(CLI::PositiveNumber);
  maximize->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
  maximize->add_flag("--fixed-b", cfg.fixed_b, "keep B at the certified observables");
  maximize->add_flag("--timing", cfg.timing, "include wall time in the report");

  auto* lhv = app.add_subcommand("lhv", "Monte-Carlo check of the classical bound");
  add_output(lhv);
  lhv->add_option("--models", cfg.models, "number of sampled models")->check(CLI::PositiveNumber);
  lhv->add_option("--sign", cfg.sign, "+ or -");
  lhv->add_option("--seed", cfg.seed, "seed");

  auto* basis = app.add_subcommand("basis", "dump the Gell-Mann generators as JSON");
  basis->add_option("--dim", cfg.dim, "single-qudit dimension d");
  basis->add_option("--out", cfg.out, "output path");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (certify->parsed()) return cmd_certify(cfg, out);
    if (maximize->parsed()) return cmd_maximize(cfg, out, err);
    if (lhv->parsed()) return cmd_lhv(cfg, out);
    if (basis->parsed()) return cmd_basis(cfg, out);
  } catch (const CertificationError& e) {
    err << "certification failure: " << e.what() << "\n";
    return kCertificationFailure;
  } catch (const ValidationError& e) {
    err << "invalid input (" << e.invariant() << "): " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input (json): " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace qbell::cli
