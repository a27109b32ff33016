// dmp: command line front end for the dual Minkowski toolkit.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmp/barrier_integrals.hpp"
#include "dmp/dual_functionals.hpp"
#include "dmp/errors.hpp"
#include "dmp/io.hpp"
#include "dmp/measures.hpp"
#include "dmp/parallel.hpp"
#include "dmp/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitGate = 3;
constexpr int kExitNonConvergence = 4;

const char* const kScanColumns = R"(CSV columns (one row per schedule step):
  lambda          schedule parameter, dimensionless
  a1..a{k+1}      barrier parameters (lambda^1.2, lambda, ..., lambda), length
  W_direct        dual quermassintegral by split-grid quadrature, length^q
  W_decomposed    same from the nested (u1, theta, phi) integrals, length^q
  W_transformed   same from the unit-square forms, length^q
  bound_ratio     W_transformed / (a1...ak a{k+1}^(q-k)), dimensionless
  entropy         E_mu(Q) for mu = unit atoms at +-e_i and Q the ellipsoid
                  with semiaxes (a1, ..., a{k+1}, 1, ..., 1), nats
  entropy_bound   partition bound of E_mu(Q) with delta0 = 1/(2 sqrt n), nats
The first line is a comment carrying the manifest hash; a gnuplot script
<stem>.gp and <stem>.manifest.json are written beside the CSV.)";

std::string utc_now()
{
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string str(double v)
{
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

fs::path sidecar(const fs::path& out, const std::string& suffix)
{
  return out.parent_path() / (out.stem().string() + suffix);
}

class Run
{
public:
  explicit Run(std::string command) : start_(std::chrono::steady_clock::now())
  {
    manifest_.command = std::move(command);
    manifest_.tool_version = DMP_VERSION;
    manifest_.threads = static_cast<int>(dmp::parallel::thread_count());
  }

  void param(const std::string& key, const std::string& value) { manifest_.parameters[key] = value; }
  void param(const std::string& key, double value) { param(key, str(value)); }
  void input(const fs::path& path) { manifest_.input_hashes[path.string()] = dmp::io::file_hash(path); }
  void seed(std::uint64_t s) { manifest_.seeds.push_back(s); }

  std::string hash() const { return dmp::io::manifest_hash(manifest_); }

  void write(const fs::path& path)
  {
    manifest_.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_.timestamp = utc_now();
    dmp::io::write_file(path, dmp::io::manifest_to_json(manifest_));
  }

private:
  dmp::io::RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

dmp::CurvatureMethod pick_method(const std::string& name, const dmp::Body& body)
{
  const bool polytope = std::holds_alternative<dmp::SymmetricPolytope>(body);
  if (name == "grid")
    return dmp::CurvatureMethod::grid;
  if (name == "exact") {
    if (!polytope)
      throw dmp::ValidationError("method", "exact evaluation needs a polytope body");
    return dmp::CurvatureMethod::exact;
  }
  return polytope ? dmp::CurvatureMethod::exact : dmp::CurvatureMethod::grid;
}

// quermass -------------------------------------------------------------------

struct QuermassArgs
{
  std::string body;
  double q = 0.0;
  std::string grid = "default:128";
  std::string method = "auto";
  std::vector<long long> grassmann;
};

int cmd_quermass(const QuermassArgs& a)
{
  const dmp::Body body = dmp::io::parse_body(dmp::io::read_file(a.body));
  const int n = dmp::body_dim(body);
  const dmp::CurvatureMethod method = pick_method(a.method, body);
  const dmp::io::GridSpec spec = dmp::io::parse_grid_spec(a.grid);

  json out;
  out["q"] = a.q;
  out["n"] = n;
  out["method"] = dmp::to_string(method);
  if (method == dmp::CurvatureMethod::exact) {
    out["W"] = dmp::dual_quermass_exact(std::get<dmp::SymmetricPolytope>(body), a.q);
  } else {
    out["grid"] = spec.text;
    out["W"] = dmp::dual_quermass(body, a.q, dmp::io::make_grid(spec, n));
  }
  if (!a.grassmann.empty()) {
    if (a.grassmann[0] < 1)
      throw dmp::ValidationError("grassmann-check", "sample count must be positive");
    if (a.grassmann[1] < 0)
      throw dmp::ValidationError("grassmann-check", "seed must be nonnegative");
    const double i = std::round(a.q);
    if (i != a.q || i < 1 || i > n)
      throw dmp::ValidationError("q", "the Grassmannian check needs an integer 1 <= q <= n");
    out["grassmann"] = dmp::dual_quermass_grassmann(body, static_cast<int>(i),
                                                    static_cast<int>(a.grassmann[0]),
                                                    static_cast<std::uint64_t>(a.grassmann[1]));
    out["grassmann_samples"] = a.grassmann[0];
    out["grassmann_seed"] = a.grassmann[1];
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// curvature ------------------------------------------------------------------

struct CurvatureArgs
{
  std::string body;
  double q = 0.0;
  std::string grid = "default:128";
  std::string method = "auto";
  std::string out;
};

int cmd_curvature(const CurvatureArgs& a)
{
  Run run("curvature");
  run.input(a.body);
  const dmp::Body body = dmp::io::parse_body(dmp::io::read_file(a.body));
  const auto* P = std::get_if<dmp::SymmetricPolytope>(&body);
  if (!P)
    throw dmp::ValidationError("type", "curvature measures are computed for polytopes");
  const dmp::CurvatureMethod method = pick_method(a.method, body);
  const dmp::io::GridSpec spec = dmp::io::parse_grid_spec(a.grid);
  run.param("q", a.q);
  run.param("method", dmp::to_string(method));
  if (method == dmp::CurvatureMethod::grid) {
    run.param("grid", spec.text);
    if (spec.seed)
      run.seed(*spec.seed);
  }

  const dmp::CurvatureMeasure c = method == dmp::CurvatureMethod::exact
                                    ? dmp::dual_curvature_exact(*P, a.q)
                                    : dmp::dual_curvature(*P, a.q, dmp::io::make_grid(spec, P->dim()));
  dmp::io::write_file(a.out, dmp::io::curvature_to_json(c));
  run.write(sidecar(a.out, ".manifest.json"));

  json out;
  out["q"] = a.q;
  out["method"] = dmp::to_string(method);
  out["total"] = c.total;
  out["pairs"] = std::vector<double>(c.pair_values.data(), c.pair_values.data() + c.pair_values.size());
  out["out"] = a.out;
  std::cout << out.dump(2) << "\n";
  return 0;
}

// check-smi ------------------------------------------------------------------

void print_witness(std::ostream& os, const dmp::SmiReport& r)
{
  os << "margin: " << str(r.margin) << "\n";
  os << "witness_dim: " << r.witness.dim << "\n";
  os << "witness_ratio: " << str(r.witness.ratio) << "\n";
  os << "witness_bound: " << str(r.witness.bound) << "\n";
  os << "witness_atoms:";
  for (int i : r.witness.atoms)
    os << " " << i;
  os << "\n";
  for (Eigen::Index c = 0; c < r.witness.basis.cols(); ++c) {
    os << "witness_basis[" << c << "]:";
    for (Eigen::Index i = 0; i < r.witness.basis.rows(); ++i)
      os << " " << str(r.witness.basis(i, c));
    os << "\n";
  }
  os << "subspaces_checked: " << r.subspaces_checked << "\n";
}

int cmd_check_smi(const std::string& measure, double q)
{
  const dmp::DiscreteEvenMeasure mu = dmp::io::parse_measure(dmp::io::read_file(measure));
  const dmp::SmiReport r = dmp::smi_check(mu, q);
  std::cout << "passes: " << (r.passes ? "yes" : "no") << "\n";
  print_witness(std::cout, r);
  return r.passes ? 0 : kExitGate;
}

// solve ----------------------------------------------------------------------

struct SolveArgs
{
  std::string measure;
  double q = 0.0;
  std::string normals;
  double tol = 1e-6;
  int max_iters = 5000;
  std::string grid = "default:128";
  std::string method = "exact";
  bool force = false;
  std::string out;
};

int cmd_solve(const SolveArgs& a)
{
  Run run("solve");
  run.input(a.measure);
  const dmp::DiscreteEvenMeasure mu = dmp::io::parse_measure(dmp::io::read_file(a.measure));
  dmp::SolveConfig cfg;
  cfg.q = a.q;
  cfg.tol = a.tol;
  cfg.max_iters = a.max_iters;
  cfg.override_smi = a.force;
  if (a.method == "grid")
    cfg.method = dmp::CurvatureMethod::grid;
  else if (a.method != "exact")
    throw dmp::ValidationError("method", "expected exact or grid");
  if (!a.normals.empty()) {
    run.input(a.normals);
    cfg.extra_normals = dmp::io::parse_normals(dmp::io::read_file(a.normals));
  }
  dmp::io::GridSpec spec = dmp::io::parse_grid_spec(a.grid);
  if (spec.scheme == dmp::GridScheme::monte_carlo)
    throw dmp::ValidationError("grid", "solve uses deterministic grids (product or default)");
  cfg.grid_resolution = spec.resolution;
  if (!(a.tol > 0.0))
    throw dmp::ValidationError("tol", "must be positive");
  if (a.max_iters < 0)
    throw dmp::ValidationError("max-iters", "must be nonnegative");

  run.param("q", a.q);
  run.param("tol", a.tol);
  run.param("max_iters", std::to_string(a.max_iters));
  run.param("method", dmp::to_string(cfg.method));
  run.param("grid", spec.text);
  run.param("force", a.force ? "true" : "false");

  dmp::SolveResult r = [&] {
    try {
      return dmp::maximize(mu, cfg);
    } catch (const dmp::SmiGateError& e) {
      std::cout << "passes: no\n";
      print_witness(std::cout, e.report());
      throw;
    }
  }();

  const dmp::VerifyReport v = dmp::verify_solution(r, mu, a.q, 2 * spec.resolution);
  const fs::path out(a.out);
  dmp::io::write_file(out, dmp::io::body_to_json(dmp::Body{r.body}));
  dmp::io::write_file(sidecar(out, ".solve.json"), dmp::io::solve_result_to_json(r));
  dmp::io::write_file(sidecar(out, ".phi.csv"), dmp::io::phi_trace_csv(r));
  run.write(sidecar(out, ".manifest.json"));

  json s;
  s["status"] = dmp::to_string(r.status);
  s["iterations"] = r.iterations;
  s["residual"] = r.residual;
  s["c"] = r.c;
  s["phi"] = r.phi_trace.back();
  s["verify_resolution"] = v.resolution;
  s["verify_max_rel_error"] = v.max_rel_error;
  s["verify_total_gap"] = v.total_gap;
  s["out"] = a.out;
  std::cout << s.dump(2) << "\n";
  return r.status == dmp::SolveStatus::converged ? 0 : kExitNonConvergence;
}

// barrier-scan ---------------------------------------------------------------

struct ScanArgs
{
  int n = 0;
  int k = 0;
  double q = 0.0;
  std::string schedule;
  int resolution = 16;
  std::string out;
};

struct Schedule
{
  double start = 0.0;
  double ratio = 0.0;
  int steps = 0;
};

Schedule parse_schedule(const std::string& text)
{
  Schedule s;
  char tail = 0;
  if (std::sscanf(text.c_str(), "geometric:%lf:%lf:%d%c", &s.start, &s.ratio, &s.steps, &tail) != 3)
    throw dmp::ValidationError("schedule", "expected geometric:LAMBDA0:RATIO:STEPS");
  if (!(s.start > 0.0 && s.start < 1.0))
    throw dmp::ValidationError("schedule", "LAMBDA0 must lie in (0, 1)");
  if (!(s.ratio > 0.0 && s.ratio <= 1.0))
    throw dmp::ValidationError("schedule", "RATIO must lie in (0, 1]");
  if (s.steps < 1 || s.steps > 64)
    throw dmp::ValidationError("schedule", "STEPS must lie in [1, 64]");
  return s;
}

int cmd_barrier_scan(const ScanArgs& a)
{
  if (a.n < 3)
    throw dmp::ValidationError("n", "must be at least 3");
  if (a.k < 1 || a.k > a.n - 2)
    throw dmp::ValidationError("k", "must lie in [1, n-2]");
  if (!(a.q > a.k && a.q < a.k + 1)) {
    std::ostringstream msg;
    msg << "q=" << a.q << " is outside the barrier regime k < q < k+1 (k=" << a.k << ")";
    throw dmp::ValidationError("q", msg.str());
  }
  if (a.resolution < 4 || a.resolution > 64)
    throw dmp::ValidationError("resolution", "must lie in [4, 64]");
  const Schedule sched = parse_schedule(a.schedule);

  Run run("barrier-scan");
  run.param("n", std::to_string(a.n));
  run.param("k", std::to_string(a.k));
  run.param("q", a.q);
  run.param("schedule", a.schedule);
  run.param("resolution", std::to_string(a.resolution));

  const int n = a.n, k = a.k;
  std::vector<dmp::AtomPair> atoms;
  for (int i = 0; i < n; ++i)
    atoms.push_back({dmp::UnitVector::axis(n, i), 1.0});
  const dmp::DiscreteEvenMeasure mu(atoms);
  const double delta0 = 0.5 / std::sqrt(static_cast<double>(n));

  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "# dmp barrier-scan manifest=" << run.hash() << "\n";
  csv << "lambda[1]";
  for (int i = 1; i <= k + 1; ++i)
    csv << ",a" << i << "[length]";
  csv << ",W_direct[length^q],W_decomposed[length^q],W_transformed[length^q],bound_ratio[1],"
         "entropy[nat],entropy_bound[nat]\n";

  double lambda = sched.start;
  for (int step = 0; step < sched.steps; ++step, lambda *= sched.ratio) {
    dmp::Vec p = dmp::Vec::Constant(k + 1, lambda);
    p[0] = std::pow(lambda, 1.2);
    const dmp::BarrierBody G = dmp::BarrierBody::aligned(n, k, p);
    const double direct = dmp::barrier_quermass_direct(G, a.q, a.resolution);
    const double dec = dmp::barrier_quermass_decomposed(G, a.q, a.resolution).total;
    const double tr = dmp::barrier_quermass_transformed(G, a.q, a.resolution).total;
    const double ratio = dmp::barrier_bound_ratio({G}, a.q, a.resolution).front();
    dmp::Vec semi = dmp::Vec::Ones(n);
    semi.head(k + 1) = p;
    const dmp::Ellipsoid Q = dmp::Ellipsoid::aligned(semi);
    const double e = dmp::entropy(mu, dmp::Body{Q});
    const double eb = dmp::entropy_partition_bound(mu, Q, delta0);

    csv << lambda;
    for (int i = 0; i <= k; ++i)
      csv << "," << p[i];
    csv << "," << direct << "," << dec << "," << tr << "," << ratio << "," << e << "," << eb << "\n";
  }

  const fs::path out(a.out);
  dmp::io::write_file(out, csv.str());
  std::ostringstream gp;
  gp << "# gnuplot script for " << out.filename().string() << "\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale xy\n"
     << "set xlabel 'lambda'\n"
     << "set multiplot layout 1,2\n"
     << "plot '" << out.filename().string() << "' using 1:" << k + 3 << " with linespoints, '' using 1:"
     << k + 4 << " with linespoints, '' using 1:" << k + 5 << " with linespoints\n"
     << "unset logscale y\n"
     << "plot '" << out.filename().string() << "' using 1:" << k + 6 << " with linespoints\n"
     << "unset multiplot\n";
  dmp::io::write_file(sidecar(out, ".gp"), gp.str());
  run.write(sidecar(out, ".manifest.json"));
  std::cout << "rows: " << sched.steps << "\nmanifest: " << run.hash() << "\nout: " << a.out << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"dmp: dual curvature measures, dual quermassintegrals and the even dual "
               "Minkowski problem.\nExit codes: 0 success, 2 invalid input, 3 subspace mass "
               "inequality fails, 4 solver did not converge."};
  app.set_version_flag("--version", DMP_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0: DMP_THREADS or all cores)");

  QuermassArgs qa;
  auto* quermass = app.add_subcommand("quermass", "Dual quermassintegral of a body");
  quermass->add_option("body", qa.body, "Body JSON file")->required()->check(CLI::ExistingFile);
  quermass->add_option("--q", qa.q, "Order q")->required();
  quermass->add_option("--grid", qa.grid, "product:RES, mc:COUNT[:SEED] or default:RES")
    ->capture_default_str();
  quermass->add_option("--method", qa.method, "auto, grid or exact (polytopes)")
    ->check(CLI::IsMember({"auto", "grid", "exact"}))
    ->capture_default_str();
  quermass->add_option("--grassmann-check", qa.grassmann,
                       "SAMPLES SEED: Monte Carlo over random q-dimensional sections")
    ->expected(2);

  CurvatureArgs ca;
  auto* curvature = app.add_subcommand("curvature", "Dual curvature measure of a polytope");
  curvature->add_option("body", ca.body, "Polytope JSON file")->required()->check(CLI::ExistingFile);
  curvature->add_option("--q", ca.q, "Order q")->required();
  curvature->add_option("--grid", ca.grid, "Grid for --method grid")->capture_default_str();
  curvature->add_option("--method", ca.method, "auto, grid or exact")
    ->check(CLI::IsMember({"auto", "grid", "exact"}))
    ->capture_default_str();
  curvature->add_option("--out", ca.out, "Measure JSON output")->required();

  std::string smi_measure;
  double smi_q = 0.0;
  auto* smi = app.add_subcommand("check-smi", "Subspace mass inequality for a measure");
  smi->add_option("measure", smi_measure, "Measure JSON file")->required()->check(CLI::ExistingFile);
  smi->add_option("--q", smi_q, "Order q in (0, n)")->required();

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve the even dual Minkowski problem for a measure");
  solve->add_option("measure", sa.measure, "Measure JSON file")->required()->check(CLI::ExistingFile);
  solve->add_option("--q", sa.q, "Order q in (0, n]")->required();
  solve->add_option("--normals", sa.normals, "JSON {\"normals\": [...]} added to the atom directions")
    ->check(CLI::ExistingFile);
  solve->add_option("--tol", sa.tol, "Tolerance on the gradient sup-norm")->capture_default_str();
  solve->add_option("--max-iters", sa.max_iters, "Iteration cap")->capture_default_str();
  solve->add_option("--grid", sa.grid, "Grid for --method grid; verification uses twice its resolution")
    ->capture_default_str();
  solve->add_option("--method", sa.method, "exact (facet integrals) or grid")
    ->check(CLI::IsMember({"exact", "grid"}))
    ->capture_default_str();
  solve->add_flag("--force", sa.force, "Skip the subspace mass inequality gate");
  solve->add_option("--out", sa.out, "Body JSON output; <stem>.solve.json, <stem>.phi.csv and "
                                     "<stem>.manifest.json are written beside it")
    ->required();

  ScanArgs ba;
  auto* scan = app.add_subcommand("barrier-scan", "Barrier body integrals along a shrink schedule");
  scan->add_option("--n", ba.n, "Dimension")->required();
  scan->add_option("--k", ba.k, "Ellipsoid dimension, 1 <= k <= n-2")->required();
  scan->add_option("--q", ba.q, "Order q with k < q < k+1")->required();
  scan->add_option("--schedule", ba.schedule, "geometric:LAMBDA0:RATIO:STEPS")->required();
  scan->add_option("--resolution", ba.resolution, "Quadrature resolution")->capture_default_str();
  scan->add_option("--out", ba.out, "CSV output")->required();
  scan->footer(kScanColumns);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (threads > 0)
    dmp::parallel::set_thread_count(threads);

  try {
    if (*quermass)
      return cmd_quermass(qa);
    if (*curvature)
      return cmd_curvature(ca);
    if (*smi)
      return cmd_check_smi(smi_measure, smi_q);
    if (*solve)
      return cmd_solve(sa);
    if (*scan)
      return cmd_barrier_scan(ba);
  } catch (const dmp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const dmp::SmiGateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGate;
  } catch (const dmp::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const dmp::CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const dmp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
