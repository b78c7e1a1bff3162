// binspec command-line driver: spectrum, qeep, rqeep, tbound, benchmark.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "binspec/binspec.hpp"

namespace fs = std::filesystem;
using binspec::io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return (fs::path(dir) / name).string();
}

/// Writes `<output>.manifest.json` next to the primary output.
void write_manifest(const std::string& output, const std::string& command, const json& inputs,
                    const std::vector<std::string>& outputs, const json& extra = json::object()) {
  json m = {{"tool", "binspec"},
            {"version", kVersion},
            {"format", binspec::io::kFormatVersion},
            {"command", command},
            {"inputs", inputs},
            {"outputs", outputs}};
  for (const auto& [k, v] : extra.items()) m[k] = v;
  binspec::io::write_json(output + ".manifest.json", m);
}

// --- alpha cache --------------------------------------------------------

std::optional<std::string> alpha_cache_path(double eta) {
  const char* dir = std::getenv("BINSPEC_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return (fs::path(dir) / ("alpha_eta_" + binspec::io::format_double(eta) + ".json")).string();
}

/// Cached alpha for eta, else estimate_alpha (written back to the cache).
json resolve_alpha(double eta) {
  const auto path = alpha_cache_path(eta);
  if (path && fs::exists(*path)) {
    const json j = binspec::io::read_json(*path);
    if (j.contains("alpha") && j["alpha"].is_number() && j.value("eta", -1.0) == eta)
      return {{"alpha", j["alpha"]}, {"source", "cache"}, {"cache_file", *path}};
  }
  const auto est = binspec::estimate_alpha(eta);
  json rec = {{"eta", eta},
              {"alpha", est.alpha},
              {"verified_t_min", est.verified_t_min},
              {"verified_t_max", est.verified_t_max},
              {"horizon", est.horizon}};
  if (path) {
    fs::create_directories(fs::path(*path).parent_path());
    binspec::io::write_json(*path, rec);
  }
  rec["source"] = "estimated";
  if (path) rec["cache_file"] = *path;
  return rec;
}

// --- spectrum -----------------------------------------------------------

struct SpectrumArgs {
  bool fh = false;
  int L = 2;
  double u = 0.0;
  double v = 1.0;
  bool spinless = false;
  int particles = -1;
  std::string geometry = "chain";
  std::size_t cap = binspec::kDefaultDimensionCap;
  std::string synthetic;
  std::vector<double> gap{-0.1, 0.1};
  std::size_t dim = 64;
  int clusters = 3;
  double cluster_halfwidth = 0.02;
  double bound = 0.0;
  std::string output = "spectrum.json";
};

int run_spectrum(const SpectrumArgs& a, std::uint64_t seed, const std::string& outdir) {
  binspec::detail::require(a.fh != !a.synthetic.empty(), "choose exactly one of --fh or --synthetic");
  std::optional<binspec::Spectrum> s;
  json inputs;
  if (a.fh) {
    binspec::FermiHubbardParams p;
    p.L = a.L;
    p.u = a.u;
    p.v = a.v;
    p.spinful = !a.spinless;
    if (a.particles >= 0) p.particles = a.particles;
    if (a.geometry == "chain") p.geometry = binspec::LatticeGeometry::chain;
    else if (a.geometry == "square") p.geometry = binspec::LatticeGeometry::square;
    else throw binspec::ValidationError("unknown geometry '" + a.geometry + "'");
    p.dimension_cap = a.cap;
    const auto h = binspec::build_fermi_hubbard(p);
    s = binspec::rescale_to_promise(binspec::diagonalize(h), a.bound > 0.0 ? std::optional<double>(a.bound) : std::nullopt);
    inputs = {{"fh", true}, {"L", a.L}, {"u", a.u}, {"v", a.v}, {"spinful", !a.spinless},
              {"particles", a.particles >= 0 ? json(a.particles) : json(nullptr)}, {"geometry", a.geometry},
              {"dimension_cap", a.cap}, {"bound", a.bound > 0.0 ? json(a.bound) : json(nullptr)}};
  } else {
    binspec::SyntheticKind kind;
    if (a.synthetic == "gapped") kind = binspec::SyntheticKind::gapped;
    else if (a.synthetic == "uniform") kind = binspec::SyntheticKind::uniform;
    else if (a.synthetic == "clustered") kind = binspec::SyntheticKind::clustered;
    else throw binspec::ValidationError("unknown synthetic kind '" + a.synthetic + "'");
    binspec::detail::require(a.gap.size() == 2, "--gap takes two values");
    binspec::SyntheticParams sp;
    sp.gap_lo = a.gap[0];
    sp.gap_hi = a.gap[1];
    sp.clusters = a.clusters;
    sp.cluster_halfwidth = a.cluster_halfwidth;
    s = binspec::synthetic_spectrum(kind, a.dim, seed, sp);
    inputs = {{"synthetic", a.synthetic}, {"dim", a.dim}, {"gap", a.gap}, {"clusters", a.clusters},
              {"cluster_halfwidth", a.cluster_halfwidth}};
  }
  const std::string out = join_path(outdir, a.output);
  binspec::io::write_json(out, binspec::io::to_json(*s));
  write_manifest(out, "spectrum", inputs, {out}, {{"seed", seed}, {"dimension", s->dimension()}});
  std::cout << "wrote " << out << " (" << s->dimension() << " eigenvalues, scale " << s->scale_factor() << ")\n";
  return 0;
}

// --- qeep ---------------------------------------------------------------

struct QeepArgs {
  std::string spectrum;
  std::string indicator = "cos2";
  double eta = 0.1;
  double epsilon = 0.1;
  std::string mode = "exact";
  double confidence = 0.8;
  int T = 0;
  double alpha = 0.0;
  bool write_coefficients = false;
  std::string output = "qeep.json";
};

int run_qeep(const QeepArgs& a, std::uint64_t seed, const std::string& outdir) {
  binspec::detail::require(a.mode == "exact" || a.mode == "sampled", "--mode must be exact or sampled");
  const binspec::Spectrum s = binspec::io::spectrum_from_json(binspec::io::read_json(a.spectrum));
  const auto kind = binspec::indicator_kind_from_string(a.indicator);
  json extra = {{"seed", seed}};
  std::optional<double> alpha;
  if (kind == binspec::IndicatorKind::somma) {
    if (a.alpha > 0.0) {
      alpha = a.alpha;
      extra["alpha"] = {{"alpha", a.alpha}, {"source", "argument"}};
    } else {
      const json rec = resolve_alpha(a.eta);
      alpha = rec["alpha"].get<double>();
      extra["alpha"] = rec;
    }
  }
  const auto ind = binspec::IndicatorFunction::make(kind, a.eta, alpha);
  const int needed = binspec::truncation_time(ind, a.epsilon);
  const int T = a.T > 0 ? a.T : needed;

  std::optional<binspec::TimeSeries> g;
  if (a.mode == "exact") {
    g = binspec::exact_series(s, T);
  } else {
    const std::int64_t shots = binspec::shots_required(T, a.epsilon, a.confidence);
    extra["shots_required"] = shots;
    g = binspec::sampled_series_with_shots(s, T, shots, seed);
  }
  const binspec::BinnedEstimate q = binspec::estimate_q(*g, ind, T, a.epsilon);
  const binspec::BinnedEstimate p = binspec::exact_p(s, ind, a.epsilon);
  const double err = binspec::l1_distance(q, p);

  const std::string out = join_path(outdir, a.output);
  const std::string csv = out + ".bins.csv";
  std::vector<std::string> outputs{out, csv};
  json doc = binspec::io::to_json(q);
  doc["l1_error_vs_exact"] = err;
  binspec::io::write_json(out, doc);
  binspec::io::write_text(csv, binspec::io::bins_csv(q));
  if (a.write_coefficients) {
    const std::string coeffs = out + ".coefficients.csv";
    binspec::io::write_text(coeffs, binspec::io::coefficients_csv(ind.fourier_coeffs(T)));
    outputs.push_back(coeffs);
  }
  extra["truncation_T"] = T;
  extra["truncation_T_bound"] = needed;
  extra["l1_error_vs_exact"] = err;
  write_manifest(out, "qeep",
                 {{"spectrum", a.spectrum}, {"indicator", a.indicator}, {"eta", a.eta}, {"epsilon", a.epsilon},
                  {"mode", a.mode}, {"confidence", a.confidence}, {"T", a.T}, {"alpha", a.alpha}},
                 outputs, extra);
  std::cout << "T = " << T << ", ||q - p||_1 = " << err << " (target " << a.epsilon << ")\n";
  if (extra.contains("shots_required")) std::cout << "shots per point = " << extra["shots_required"] << "\n";
  return 0;
}

// --- rqeep --------------------------------------------------------------

struct RQeepArgs {
  std::string spectrum;
  int m = 0;
  double xi = 0.0;
  double delta = 0.0;
  double delta_over_dim = 0.0;
  double confidence = 0.5;
  std::string solver = "exact_p";
  std::string indicator = "cos2";
  int T = 0;
  std::string output = "rqeep.json";
};

int run_rqeep_cmd(const RQeepArgs& a, std::uint64_t seed, const std::string& outdir) {
  const binspec::Spectrum s = binspec::io::spectrum_from_json(binspec::io::read_json(a.spectrum));
  const double dim = static_cast<double>(s.dimension());
  binspec::detail::require((a.m > 0) != (a.xi > 0.0), "give exactly one of --m or --xi");
  binspec::detail::require((a.delta > 0.0) != (a.delta_over_dim > 0.0), "give exactly one of --delta or --delta-over-dim");
  const double delta = a.delta > 0.0 ? a.delta : a.delta_over_dim * dim;
  const binspec::RQeepParams params = a.m > 0 ? binspec::RQeepParams(a.m, delta, a.confidence, dim)
                                              : binspec::RQeepParams::from_xi(a.xi, delta, a.confidence, dim);
  binspec::RQeepSolver solver;
  solver.indicator = binspec::indicator_kind_from_string(a.indicator);
  solver.truncation_T = a.T;
  if (a.solver == "exact_p") solver.kind = binspec::SolverKind::exact_p;
  else if (a.solver == "exact") { solver.kind = binspec::SolverKind::estimated; solver.sampled = false; }
  else if (a.solver == "sampled") { solver.kind = binspec::SolverKind::estimated; solver.sampled = true; }
  else throw binspec::ValidationError("--solver must be exact_p, exact or sampled");
  json extra = {{"seed", seed}};
  if (solver.indicator == binspec::IndicatorKind::somma && solver.kind == binspec::SolverKind::estimated) {
    const json rec = resolve_alpha(binspec::derive_qeep_params(params).eta);
    solver.somma_alpha = rec["alpha"].get<double>();
    extra["alpha"] = rec;
  }
  const binspec::RQeepResult r = binspec::run_rqeep(s, params, solver, seed);

  const std::string out = join_path(outdir, a.output);
  const std::string csv = out + ".intervals.csv";
  json doc = binspec::io::to_json(r);
  doc["delta"] = delta;
  doc["m"] = params.m();
  binspec::io::write_json(out, doc);
  binspec::io::write_text(csv, binspec::io::rqeep_csv(r));
  extra["delta"] = delta;
  extra["success"] = r.success;
  extra["qeep_eta"] = r.qeep.eta;
  extra["qeep_epsilon"] = r.qeep.epsilon;
  extra["repetitions"] = r.repetitions;
  if (r.shots_per_point > 0) extra["shots_required"] = r.shots_per_point;
  write_manifest(out, "rqeep",
                 {{"spectrum", a.spectrum}, {"m", params.m()}, {"delta", delta}, {"confidence", a.confidence},
                  {"solver", a.solver}, {"indicator", a.indicator}, {"T", a.T}},
                 {out, csv}, extra);
  std::cout << "sum |y - n| = " << r.deviation << " (Delta " << delta << "), "
            << (r.success ? "success" : "failure") << "\n";
  return 0;
}

// --- tbound -------------------------------------------------------------

struct TBoundArgs {
  double eta_min = 1e-3;
  double eta_max = 0.5;
  int points = 50;
  std::vector<double> epsilon{0.1, 0.05, 0.01};
  long window = binspec::kDefaultTailWindow;
  std::string output = "tbound.csv";
};

int run_tbound(const TBoundArgs& a, const std::string& outdir) {
  binspec::detail::require(a.points >= 1, "--points must be >= 1");
  binspec::detail::require(a.eta_min > 0.0 && a.eta_min <= a.eta_max && a.eta_max <= 1.0, "need 0 < eta-min <= eta-max <= 1");
  std::vector<binspec::io::TBoundRow> rows;
  for (double eps : a.epsilon) {
    for (int k = 0; k < a.points; ++k) {
      const double frac = a.points == 1 ? 0.0 : static_cast<double>(k) / (a.points - 1);
      const double eta = a.eta_min * std::pow(a.eta_max / a.eta_min, frac);
      binspec::io::TBoundRow r;
      r.eta = eta;
      r.epsilon = eps;
      r.T_somma = binspec::min_time_somma(eta, eps);
      r.T_cos2 = binspec::min_time_cos2(eta, eps);
      r.T_numeric = binspec::numeric_min_time_cos2(eta, eps, binspec::numeric_window(eta, eps, a.window));
      rows.push_back(r);
    }
  }
  const std::string out = join_path(outdir, a.output);
  binspec::io::write_text(out, binspec::io::tbound_csv(rows));
  write_manifest(out, "tbound",
                 {{"eta_min", a.eta_min}, {"eta_max", a.eta_max}, {"points", a.points}, {"epsilon", a.epsilon},
                  {"window", a.window}},
                 {out});
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  return 0;
}

// --- benchmark ----------------------------------------------------------

struct BenchmarkArgs {
  std::string scenario;
  std::vector<int> L{3, 5, 10};
  std::vector<double> epsilon{0.1, 0.05, 0.01};
  std::vector<double> q{1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
  bool fixed_epsilon_tar = false;
  int parallel = 1;
  std::string output = "sweep.csv";
};

int run_benchmark(const BenchmarkArgs& a, const std::string& outdir) {
  binspec::SweepGrid grid;
  if (!a.scenario.empty()) grid.base = binspec::io::scenario_from_json(binspec::io::read_json(a.scenario));
  grid.L = a.L;
  grid.epsilon = a.epsilon;
  grid.q_noise = a.q;
  grid.epsilon_tar_follows_epsilon = !a.fixed_epsilon_tar;
  const auto rows = binspec::figure_sweep(grid, a.parallel);
  const std::string out = join_path(outdir, a.output);
  binspec::io::write_text(out, binspec::io::sweep_csv(rows));
  write_manifest(out, "benchmark",
                 {{"scenario", a.scenario.empty() ? json(nullptr) : json(a.scenario)}, {"base", binspec::io::to_json(grid.base)},
                  {"L", a.L}, {"epsilon", a.epsilon}, {"q_noise", a.q}, {"fixed_epsilon_tar", a.fixed_epsilon_tar}},
                 {out}, {{"rows", rows.size()}});
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binned spectral estimation: QEEP, rQEEP and gate-synthesis cost sweeps"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string outdir;
  app.add_option("--seed", seed, "Root seed for all randomness");
  app.add_option("--outdir", outdir, "Directory for outputs");
  app.set_version_flag("--version", kVersion);

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Build a promise-scaled spectrum");
  spectrum->add_flag("--fh", sa.fh, "Fermi-Hubbard model");
  spectrum->add_option("--L", sa.L, "Lattice side (sites for a chain)");
  spectrum->add_option("--u", sa.u, "On-site coupling");
  spectrum->add_option("--v", sa.v, "Hopping coupling");
  spectrum->add_flag("--spinless", sa.spinless, "Spinless fermions");
  spectrum->add_option("--particles", sa.particles, "Fixed particle number (default: full Fock space)");
  spectrum->add_option("--geometry", sa.geometry, "chain or square")->check(CLI::IsMember({"chain", "square"}));
  spectrum->add_option("--cap", sa.cap, "Dimension cap");
  spectrum->add_option("--bound", sa.bound, "Known operator-norm bound used for rescaling");
  spectrum->add_option("--synthetic", sa.synthetic, "gapped, uniform or clustered");
  spectrum->add_option("--gap", sa.gap, "Excluded interval for gapped spectra")->expected(2);
  spectrum->add_option("--dim", sa.dim, "Synthetic dimension");
  spectrum->add_option("--clusters", sa.clusters, "Number of clusters");
  spectrum->add_option("--cluster-halfwidth", sa.cluster_halfwidth, "Cluster half width");
  spectrum->add_option("-o,--output", sa.output, "Output JSON");

  QeepArgs qa;
  auto* qeep = app.add_subcommand("qeep", "Estimate binned spectral weights");
  qeep->add_option("--spectrum", qa.spectrum, "Spectrum JSON")->required();
  qeep->add_option("--indicator", qa.indicator, "somma or cos2")->check(CLI::IsMember({"somma", "cos2"}));
  qeep->add_option("--eta", qa.eta, "Bin width");
  qeep->add_option("--epsilon", qa.epsilon, "Target 1-norm precision");
  qeep->add_option("--mode", qa.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  qeep->add_option("--confidence", qa.confidence, "Confidence c");
  qeep->add_option("--T", qa.T, "Override truncation time");
  qeep->add_option("--alpha", qa.alpha, "Somma decay-onset constant (skips the cache)");
  qeep->add_flag("--coefficients", qa.write_coefficients, "Also write the Fourier coefficients");
  qeep->add_option("-o,--output", qa.output, "Output JSON");

  RQeepArgs ra;
  auto* rqeep = app.add_subcommand("rqeep", "Randomized eigenvalue counting");
  rqeep->add_option("--spectrum", ra.spectrum, "Spectrum JSON")->required();
  rqeep->add_option("--m", ra.m, "Number of segments (2/xi)");
  rqeep->add_option("--xi", ra.xi, "Maximal breakpoint spacing");
  rqeep->add_option("--delta", ra.delta, "Allowed total miscount");
  rqeep->add_option("--delta-over-dim", ra.delta_over_dim, "Allowed miscount per dimension");
  rqeep->add_option("--confidence", ra.confidence, "Confidence c");
  rqeep->add_option("--solver", ra.solver, "exact_p, exact or sampled")->check(CLI::IsMember({"exact_p", "exact", "sampled"}));
  rqeep->add_option("--indicator", ra.indicator, "somma or cos2")->check(CLI::IsMember({"somma", "cos2"}));
  rqeep->add_option("--T", ra.T, "Override truncation time");
  rqeep->add_option("-o,--output", ra.output, "Output JSON");

  TBoundArgs ta;
  auto* tbound = app.add_subcommand("tbound", "Truncation-time bounds on an eta grid");
  tbound->add_option("--eta-min", ta.eta_min, "Smallest eta");
  tbound->add_option("--eta-max", ta.eta_max, "Largest eta");
  tbound->add_option("--points", ta.points, "Log-grid points");
  tbound->add_option("--epsilon", ta.epsilon, "Precisions");
  tbound->add_option("--window", ta.window, "Minimum exact-summation window");
  tbound->add_option("-o,--output", ta.output, "Output CSV");

  BenchmarkArgs ba;
  auto* bench = app.add_subcommand("benchmark", "Achievable bin width sweep");
  bench->add_option("--scenario", ba.scenario, "Scenario JSON for the shared fields");
  bench->add_option("--L", ba.L, "Lattice sides");
  bench->add_option("--epsilon", ba.epsilon, "Precisions");
  bench->add_option("--q", ba.q, "Depolarizing rates");
  bench->add_flag("--fixed-epsilon-tar", ba.fixed_epsilon_tar, "Use the scenario's epsilon_tar instead of each row's epsilon");
  bench->add_option("--parallel", ba.parallel, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("-o,--output", ba.output, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!outdir.empty()) fs::create_directories(outdir);
    if (*spectrum) return run_spectrum(sa, seed, outdir);
    if (*qeep) return run_qeep(qa, seed, outdir);
    if (*rqeep) return run_rqeep_cmd(ra, seed, outdir);
    if (*tbound) return run_tbound(ta, outdir);
    if (*bench) return run_benchmark(ba, outdir);
  } catch (const binspec::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const binspec::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
