// qbench: benchmark thresholds, canonical recipes and CV setups from the command line.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "qbench/benchmark.hpp"
#include "qbench/canonical.hpp"
#include "qbench/cv.hpp"
#include "qbench/groups.hpp"
#include "qbench/random.hpp"
#include "qbench/scenarios.hpp"

using namespace qb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUncertified = 2;

struct Options {
  std::string builtin;
  std::string omega_path;
  std::string test_path;
  std::string tau_path;
  std::string device = "identity";
  std::string kind = "omega";
  int dim = 0;
  double g = 1.0;
  double lambda = 1.0;
  std::string mu = "inf";
  bool conjugate = false;
  int cutoff = 40;
  double leak_tol = 1e-8;
  int nodes = 24;
  int beta_nodes = 16;
  int restarts = 64;
  std::uint64_t seed = 20240611;
  bool grid = false;
  double mesh = 0.05;
  double alpha = 1.0;
  double oracle_tol = 1e-4;
  bool no_oracle = false;
  std::string out;
  std::string format = "json";
};

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  std::ostringstream os;
  os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const json& v = it.value();
    if (v.is_object()) {
      // operators carry "re"/"im" arrays; matrices stay JSON-only
      if (!v.contains("re")) flatten(v, key, out);
    } else if (v.is_number() || v.is_boolean() || v.is_null()) {
      out.emplace_back(key, v.dump());
    } else if (v.is_string()) {
      out.emplace_back(key, v.get<std::string>());
    }
  }
}

void emit(const json& j, const Options& o) {
  std::string text;
  if (o.format == "csv") {
    std::vector<std::pair<std::string, std::string>> cols;
    flatten(j, "", cols);
    std::ostringstream h, v;
    for (size_t i = 0; i < cols.size(); ++i) {
      h << (i ? "," : "") << cols[i].first;
      v << (i ? "," : "") << cols[i].second;
    }
    text = h.str() + "\n" + v.str() + "\n";
  } else {
    text = j.dump(2) + "\n";
  }
  if (o.out.empty())
    std::cout << text;
  else
    write_text_file(o.out, text);
}

PnrConfig pnr_config(const Options& o) {
  PnrConfig c;
  c.restarts = o.restarts;
  c.seed = o.seed;
  c.grid = false;
  c.mesh = o.mesh;
  return c;
}

// Candidate symmetry groups for the built-in examples and user files.
std::optional<GroupRep> detect_rep(const Operator& omega) {
  if (omega.n_sys() != 2 || omega.dims()[0] != omega.dims()[1]) return std::nullopt;
  const int d = omega.dims()[0];
  std::vector<GroupRep> cands;
  if (d == 2) cands.push_back(diagonal_rep(pauli_group_qubit()));
  if (d == 2 || d == 3) {
    cands.push_back(diagonal_rep(clifford_group(d)));
    cands.push_back(conjugate_rep(clifford_group(d)));
  }
  for (auto& r : cands)
    if (check_covariance(omega, r) && is_irreducible(r)) return r;
  return std::nullopt;
}

Ensemble coherent_builtin(const Options& o) {
  const int k = o.dim > 0 ? o.dim : 2;
  std::vector<cplx> alphas;
  for (int i = 0; i < k; ++i) alphas.push_back(std::polar(o.alpha, 2 * std::numbers::pi * i / k));
  return coherent_ensemble(alphas, o.cutoff, o.leak_tol);
}

struct Input {
  std::optional<Operator> omega;  // deterministic benchmark
  std::optional<ProbTest> prob;   // probabilistic benchmark
  std::string label;
};

Input resolve_input(const Options& o) {
  Input in;
  if (!o.builtin.empty() && !o.omega_path.empty()) throw ArgumentError("give either --builtin or --omega, not both");
  if (o.builtin == "teleport") {
    const int d = o.dim > 0 ? o.dim : 2;
    in.omega = teleport_omega(d);
    in.label = "teleport:" + std::to_string(d);
  } else if (o.builtin == "chsh") {
    in.omega = chsh_omega();
    in.label = "chsh";
  } else if (o.builtin == "equator") {
    const int n = o.dim > 0 ? o.dim : 3;
    in.omega = fidelity_test(equator_ensemble(n)).omega();
    in.label = "equator:" + std::to_string(n);
  } else if (o.builtin == "coherent") {
    in.prob = fidelity_test(coherent_builtin(o));
    in.label = "coherent";
  } else if (!o.builtin.empty()) {
    throw ArgumentError("unknown builtin '" + o.builtin + "' (teleport, chsh, equator, coherent)");
  } else if (!o.omega_path.empty()) {
    const json j = read_json_file(o.omega_path);
    if (j.contains("omega"))
      in.prob = prob_test_from_json(j);
    else
      in.omega = operator_from_json(j);
    in.label = o.omega_path;
  } else {
    throw ArgumentError("benchmark needs --builtin or --omega");
  }
  return in;
}

int cmd_benchmark(const Options& o) {
  const Input in = resolve_input(o);
  SearchConfig sc;
  sc.pnr = pnr_config(o);
  json rep;
  rep["input"] = in.label;
  bool certified = false;
  double value = 0, lower = 0, upper = 0, offset = 0;
  Operator conj;
  PnrMethod method = PnrMethod::seesaw;

  if (in.omega) {
    const Operator& omega = *in.omega;
    if (!omega.is_hermitian()) throw ContractViolation("omega is not Hermitian");
    Operator shifted = omega;
    if (!is_ppt(omega)) {
      const double s = spectral_norm(partial_transpose(omega, 1).mat());
      shifted = omega + Operator::identity(omega.dims()) * s;
      offset = s * omega.dims()[1];
    }
    const auto group = detect_rep(shifted);
    const DetBenchmark db = det_benchmark(shifted, sc, group ? &*group : nullptr);
    conj = conjugate_by_inverse_sqrt(shifted, db.tau_min.mat());
    method = db.method;
    if (offset > 0) {
      const PnrResult pb = prob_benchmark(ProbTest(shifted, db.tau_min), sc.pnr);
      value = pb.value - offset;
      lower = pb.lower_bound - offset;
      upper = pb.upper_bound - offset;
      if (method == PnrMethod::closed_form) value = db.value - offset;
    } else {
      value = db.value;
      lower = db.pnr.lower_bound;
      upper = db.pnr.upper_bound;
    }
    rep["tau_min"] = to_json(db.tau_min);
    rep["evaluations"] = db.evaluations;
    rep["symmetry"] = group ? json(true) : json(false);
    rep["lambda_omega"] = product_numerical_range(omega, sc.pnr).value;
    certified = method == PnrMethod::closed_form;
  } else {
    const ProbTest& t = *in.prob;
    const PnrResult pb = prob_benchmark(t, sc.pnr);
    conj = conjugate_by_inverse_sqrt(t.omega(), t.sigma_A().mat());
    value = pb.value;
    lower = pb.lower_bound;
    upper = pb.upper_bound;
    rep["tau_min"] = to_json(t.sigma_A());
  }
  if (upper - value <= 1e-9) certified = true;
  if (o.grid) {
    const GridBracket gb = pnr_grid_oracle(conj, o.mesh, sc.pnr);
    const double glo = gb.lower - offset, ghi = gb.upper - offset;
    rep["grid"] = {{"lower", glo}, {"upper", ghi}, {"points", gb.points}, {"radius", gb.radius}, {"mesh", o.mesh}};
    const bool inside = glo - 1e-9 <= value && value <= ghi + 1e-9;
    rep["grid"]["contains_value"] = inside;
    if (inside) certified = true;
    lower = std::max(lower, glo);
    upper = std::min(upper, ghi);
  }
  rep["value"] = value;
  rep["lower"] = lower;
  rep["upper"] = upper;
  rep["offset"] = offset;
  rep["method"] = to_string(method);
  rep["restarts"] = o.restarts;
  rep["seed"] = o.seed;
  rep["certified"] = certified;
  rep["timestamp"] = timestamp();
  emit(rep, o);
  return certified ? kExitOk : kExitUncertified;
}

int cmd_canonical(const Options& o) {
  json rep;
  Rng rng(o.seed);
  if (!o.test_path.empty()) {
    const json j = read_json_file(o.test_path);
    if (j.contains("omega")) {
      const ProbTest t = prob_test_from_json(j);
      const CanonicalTestRecipe r = canonical_prob_test(t);
      const int dA = t.sigma_A().dim(), dAp = t.omega().dims()[0];
      const Channel check = random_channel(dA, dAp, 2, rng, false);
      const ProbScore a = score_prob(t, check), b = recipe_score(r, check);
      rep = to_json(r);
      rep["kind"] = "probabilistic";
      rep["check"] = {{"original", {a.score, a.p_succ}},
                      {"canonical", {b.score, b.p_succ}},
                      {"max_diff", std::max(std::abs(a.score - b.score), std::abs(a.p_succ - b.p_succ))}};
    } else {
      const DetTest t = det_test_from_json(j);
      const Operator omega = performance_operator(t);
      const CanonicalTestRecipe r =
          o.tau_path.empty() ? canonical_det_test(omega) : canonical_det_test(omega, operator_from_json(read_json_file(o.tau_path)));
      const Channel check = random_channel(omega.dims()[1], omega.dims()[0], 2, rng, true);
      const double a = score_det_direct(t, check), b = score_det_direct(r.as_det_test(), check);
      rep = to_json(r);
      rep["kind"] = "deterministic";
      rep["check"] = {{"original", a}, {"canonical", b}, {"max_diff", std::abs(a - b)}};
    }
  } else if (!o.builtin.empty()) {
    const Input in = resolve_input(o);
    if (in.prob) {
      rep = to_json(canonical_prob_test(*in.prob));
    } else {
      const CanonicalTestRecipe r = o.tau_path.empty()
                                        ? canonical_det_test(*in.omega)
                                        : canonical_det_test(*in.omega, operator_from_json(read_json_file(o.tau_path)));
      rep = to_json(r);
    }
    rep["kind"] = in.prob ? "probabilistic" : "deterministic";
    rep["input"] = in.label;
  } else {
    throw ArgumentError("canonical needs --test or --builtin");
  }
  rep["timestamp"] = timestamp();
  emit(rep, o);
  return kExitOk;
}

double parse_mu(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw ArgumentError("--mu must be a positive number or 'inf'");
}

int cmd_cv(const Options& o) {
  CvParams p;
  p.g = o.g;
  p.lambda = o.lambda;
  p.mu = parse_mu(o.mu);
  p.conjugate = o.conjugate;
  const FockCutoff cut{o.cutoff, o.leak_tol};
  const CvSetup s = build_setup(p, cut);
  const bool from_file = o.device.size() > 5 && o.device.substr(o.device.size() - 5) == ".json";
  const Channel dev = from_file ? channel_from_json(read_json_file(o.device)) : make_device(o.device, p, cut);
  const SetupResult r = run_setup(s, dev);
  json rep;
  rep["setup"] = to_json(s);
  rep["device"] = o.device;
  rep["score"] = r.score;
  rep["p_succ"] = r.p_succ;
  rep["cutoff"] = cut.n_max;
  rep["leakage"] = s.leakage;
  bool ok = true;
  if (!o.no_oracle) {
    OracleConfig oc;
    oc.nodes = o.nodes;
    oc.beta_nodes = o.beta_nodes;
    const OracleResult orc = average_fidelity_oracle(dev, p, cut, oc);
    rep["oracle"] = orc.value;
    rep["oracle_p_succ"] = orc.p_succ;
    rep["oracle_leakage"] = orc.leakage;
    rep["delta"] = std::abs(r.score - orc.value);
    ok = std::abs(r.score - orc.value) <= o.oracle_tol;
    rep["certified"] = ok;
  } else {
    rep["oracle"] = nullptr;
  }
  rep["timestamp"] = timestamp();
  emit(rep, o);
  return ok ? kExitOk : kExitUncertified;
}

int cmd_export(const Options& o) {
  const Input in = resolve_input(o);
  json j;
  if (o.kind == "omega") {
    if (!in.omega) throw ArgumentError("builtin '" + o.builtin + "' is probabilistic; use --kind prob-test");
    j = to_json(*in.omega);
  } else if (o.kind == "prob-test") {
    if (in.prob) {
      j = to_json(*in.prob);
    } else {
      const int d = in.omega->dims()[1];
      j = to_json(ProbTest(*in.omega, Operator({d}, Mat::Identity(d, d) / static_cast<double>(d))));
    }
  } else if (o.kind == "det-test") {
    if (!in.omega) throw ArgumentError("builtin '" + o.builtin + "' has no deterministic form here");
    if (o.builtin == "teleport")
      j = to_json(teleport_det_test(in.omega->dims()[1]));
    else
      j = to_json(canonical_det_test(*in.omega).as_det_test());
  } else {
    throw ArgumentError("--kind must be omega, prob-test or det-test");
  }
  emit(j, o);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  Options o;
  CLI::App app{"Quantum benchmark toolkit: thresholds, canonical tests, CV setups.\nQBENCH_THREADS caps OpenMP threads."};
  app.require_subcommand(1);

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output path (stdout when omitted)");
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    c->add_option("--seed", o.seed, "Seed for multistart and check channels")->capture_default_str();
  };
  auto inputs = [&](CLI::App* c) {
    c->add_option("--builtin", o.builtin, "teleport | chsh | equator | coherent");
    c->add_option("--dim", o.dim, "teleport: qudit dimension; equator/coherent: number of states");
    c->add_option("--alpha", o.alpha, "coherent builtin: amplitude")->capture_default_str();
    c->add_option("--cutoff", o.cutoff, "Fock levels per mode")->capture_default_str();
  };

  auto* bench = app.add_subcommand("benchmark", "Classical threshold of a test");
  inputs(bench);
  bench->add_option("--omega", o.omega_path, "Omega operator JSON, or ProbTest JSON with omega and sigma_A");
  bench->add_option("--restarts", o.restarts, "Seesaw restarts")->capture_default_str();
  bench->add_flag("--grid", o.grid, "Certify with the product-grid oracle");
  bench->add_option("--mesh", o.mesh, "Grid mesh (radians)")->capture_default_str();
  common(bench);

  auto* canon = app.add_subcommand("canonical", "Canonical single-state/single-observable recipe");
  inputs(canon);
  canon->add_option("--test", o.test_path, "DetTest or ProbTest JSON");
  canon->add_option("--tau", o.tau_path, "Explicit tau_A (operator JSON)");
  common(canon);

  auto* cv = app.add_subcommand("cv", "Run a continuous-variable setup against a device");
  cv->add_option("--g", o.g, "Gain")->capture_default_str();
  cv->add_option("--lambda", o.lambda, "Prior inverse variance")->capture_default_str();
  cv->add_option("--mu", o.mu, "Input noise inverse variance, or inf")->capture_default_str();
  cv->add_flag("--conjugate", o.conjugate, "Complex-conjugation task");
  cv->add_option("--device", o.device, "identity | scale:q | attenuator:t | vacuum | heterodyne-mp | kraus.json")
      ->capture_default_str();
  cv->add_option("--cutoff", o.cutoff, "Fock levels per mode")->capture_default_str();
  cv->add_option("--leak-tol", o.leak_tol, "Allowed truncation leakage")->capture_default_str();
  cv->add_option("--nodes", o.nodes, "Oracle Gauss-Hermite nodes per axis")->capture_default_str();
  cv->add_option("--beta-nodes", o.beta_nodes, "Oracle nodes per axis over the input noise")->capture_default_str();
  cv->add_option("--oracle-tol", o.oracle_tol, "Allowed |score - oracle|")->capture_default_str();
  cv->add_flag("--no-oracle", o.no_oracle, "Skip the quadrature oracle");
  common(cv);

  auto* exp = app.add_subcommand("export", "Write a built-in test as JSON");
  inputs(exp);
  exp->add_option("--kind", o.kind, "omega | prob-test | det-test")->capture_default_str();
  common(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bench) return cmd_benchmark(o);
    if (*canon) return cmd_canonical(o);
    if (*cv) return cmd_cv(o);
    if (*exp) return cmd_export(o);
  } catch (const SearchFailure& e) {
    std::cerr << "uncertified: " << e.what() << " (best value " << e.best_value() << ")\n";
    return kExitUncertified;
  } catch (const InvertibilityError& e) {
    std::cerr << "error: " << e.what() << "\n  violating direction:";
    for (size_t i = 0; i < e.direction_re().size(); ++i)
      std::cerr << ' ' << e.direction_re()[i] << (e.direction_im()[i] < 0 ? "-" : "+") << std::abs(e.direction_im()[i]) << 'i';
    std::cerr << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
