// Command-line front end: spectrum / gft / igft / metrics / circulant-verify /
// eulerian-sweep / denoise / generate. Every subcommand writes its outputs
// plus a report.json with input digests, residuals and pass flags.
//
// Exit codes: 0 all invariants pass, 1 usage or input error, 2 numerical
// invariant failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <dgft/dgft.hpp>

#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dgft;

namespace {

struct RunReport {
  std::string command;
  std::map<std::string, std::string> inputs;  // path -> digest
  std::vector<std::string> outputs;
  std::map<std::string, double> residuals;
  std::map<std::string, bool> pass;
  json extra = json::object();

  void add_input(const std::string& path) { inputs[path] = digest_hex(read_file(path)); }

  bool all_pass() const {
    for (const auto& [name, ok] : pass)
      if (!ok) return false;
    return true;
  }

  json to_json() const {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    json res = json::object();
    for (const auto& [k, v] : residuals) res[k] = format_double(v);
    j["residuals"] = res;
    j["pass"] = pass;
    if (!extra.empty()) j["detail"] = extra;
    return j;
  }
};

// Output paths are recorded relative to the report so that reruns into a
// different directory stay byte-identical.
int finish(RunReport& rep, const std::string& report_path) {
  rep.outputs.push_back(report_path);
  const fs::path base = fs::path(report_path).parent_path();
  for (std::string& out : rep.outputs)
    out = fs::relative(fs::path(out), base).string();
  write_file(report_path, rep.to_json().dump(2) + "\n");
  std::cout << (rep.all_pass() ? "PASS " : "FAIL ") << rep.command << " -> " << report_path
            << "\n";
  return rep.all_pass() ? 0 : 2;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::string cell;
  std::istringstream ss(csv);
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw validation_error("bad integer '" + cell + "' in list '" + csv + "'");
    }
  }
  return out;
}

int cmd_spectrum(const std::string& graph_path, const std::string& out_dir) {
  RunReport rep;
  rep.command = "spectrum";
  rep.add_input(graph_path);
  const DirectedGraph g = load_graph(graph_path);
  const Eigen::MatrixXd laplacian = build_laplacian(g);
  const SvdBasis basis = svd_basis(laplacian);
  const BasisResiduals res = basis_residuals(basis, laplacian);

  fs::create_directories(out_dir);
  const std::string sigma_path = out_dir + "/sigma.csv";
  const std::string u_path = out_dir + "/U.csv";
  const std::string v_path = out_dir + "/V.csv";
  write_file(sigma_path, save_vector(basis.sigma, "sigma"));
  write_file(u_path, save_matrix(basis.u));
  write_file(v_path, save_matrix(basis.v));
  rep.outputs = {sigma_path, u_path, v_path};

  const double sigma_max = basis.sigma(basis.order() - 1);
  rep.residuals["u_orthogonality"] = res.u_orthogonality;
  rep.residuals["v_orthogonality"] = res.v_orthogonality;
  rep.residuals["reconstruction"] = res.reconstruction;
  rep.pass["u_orthogonality"] = res.u_orthogonality <= 1e-10;
  rep.pass["v_orthogonality"] = res.v_orthogonality <= 1e-10;
  rep.pass["reconstruction"] = res.reconstruction <= 1e-9 * (1.0 + sigma_max);
  rep.extra["n"] = basis.order();
  rep.extra["kernel_rank"] = basis.kernel_rank;
  rep.extra["eulerian"] = is_eulerian(g);
  return finish(rep, out_dir + "/report.json");
}

int cmd_gft(const std::string& graph_path, const std::string& signal_path,
            const std::string& out_path, bool inverse) {
  RunReport rep;
  rep.command = inverse ? "gft --inverse" : "gft";
  rep.add_input(graph_path);
  rep.add_input(signal_path);
  const DirectedGraph g = load_graph(graph_path);
  const SvdBasis basis = svd_basis(build_laplacian(g));

  if (inverse) {
    const GftCoefficients c = parse_coefficients(read_file(signal_path));
    if (c.sum_block.size() != basis.order())
      throw validation_error("coefficient length does not match graph order");
    const Eigen::VectorXd x = igft(basis, c);
    write_file(out_path, save_signal(x));
    rep.outputs = {out_path};
    const GftCoefficients back = gft(basis, x);
    rep.residuals["projection_residual"] =
        std::sqrt((back.sum_block - c.sum_block).squaredNorm() +
                  (back.diff_block - c.diff_block).squaredNorm());
    rep.pass["finite"] = x.allFinite();
  } else {
    const Eigen::VectorXd x = load_signal(signal_path);
    if (x.size() != basis.order())
      throw validation_error("signal length does not match graph order");
    const GftCoefficients c = gft(basis, x);
    write_file(out_path, save_coefficients(c));
    rep.outputs = {out_path};
    const double parseval = std::abs(c.norm() - x.norm());
    const double roundtrip = (igft(basis, c) - x).norm();
    rep.residuals["parseval"] = parseval;
    rep.residuals["roundtrip"] = roundtrip;
    const double scale = std::max(1e-300, x.norm());
    rep.pass["parseval"] = parseval <= 1e-10 * scale;
    rep.pass["roundtrip"] = roundtrip <= 1e-10 * scale;
  }
  const fs::path report = fs::path(out_path).parent_path() / "report.json";
  return finish(rep, report.string());
}

int cmd_igft(const std::string& graph_path, const std::string& coeffs_path,
             const std::string& out_path) {
  return cmd_gft(graph_path, coeffs_path, out_path, true);
}

int cmd_metrics(const std::string& graph_path, const std::string& signal_path,
                const std::string& out_path) {
  RunReport rep;
  rep.command = "metrics";
  rep.add_input(graph_path);
  rep.add_input(signal_path);
  const DirectedGraph g = load_graph(graph_path);
  const Eigen::VectorXd x = load_signal(signal_path);
  const Eigen::MatrixXd laplacian = build_laplacian(g);
  const Eigen::MatrixXd a = g.adjacency();
  if (x.size() != g.order()) throw validation_error("signal length does not match graph order");

  std::ostringstream csv;
  csv << "metric,value\n";
  csv << "quadratic_variation," << format_double(quadratic_variation(laplacian, x)) << "\n";
  csv << "l2_variation," << format_double(l2_variation(laplacian, x)) << "\n";
  csv << "gdv," << format_double(gdv(a, x)) << "\n";
  csv << "dv," << format_double(dv(a, x)) << "\n";
  write_file(out_path, csv.str());
  rep.outputs = {out_path};
  rep.pass["finite"] = true;
  const fs::path report = fs::path(out_path).parent_path() / "report.json";
  return finish(rep, report.string());
}

int cmd_circulant_verify(int n, const std::string& q_csv, const std::string& out_path) {
  RunReport rep;
  rep.command = "circulant-verify";
  const std::vector<int> q_set = parse_int_list(q_csv);
  const CirculantFactorization f = factorized_svd(n, q_set);

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  rep.residuals["max_imag"] = f.max_imag;
  rep.residuals["u_orthogonality"] = (f.u.transpose() * f.u - eye).cwiseAbs().maxCoeff();
  rep.residuals["v_orthogonality"] = (f.v.transpose() * f.v - eye).cwiseAbs().maxCoeff();
  rep.residuals["reconstruction"] =
      (f.laplacian - f.u * f.sigma.asDiagonal() * f.v.transpose()).cwiseAbs().maxCoeff();
  rep.residuals["eigen_identity"] = eigen_identity_residual(f);
  rep.residuals["commutation"] = f.commutation_residual;

  // spectrum agreement with a general dense SVD
  Eigen::VectorXd dense = Eigen::JacobiSVD<Eigen::MatrixXd>(f.laplacian).singularValues();
  std::sort(dense.data(), dense.data() + n);
  rep.residuals["sigma_vs_dense_svd"] = (dense - f.sigma).cwiseAbs().maxCoeff();

  // DFT route vs direct transform on a seeded probe
  CounterRng rng(1u);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform(-1.0, 1.0);
  const GftCoefficients dft_route = dft_route_gft(f, x);
  const GftCoefficients direct = gft(to_basis(f), x);
  rep.residuals["dft_equivalence"] =
      std::max((dft_route.sum_block - direct.sum_block).cwiseAbs().maxCoeff(),
               (dft_route.diff_block - direct.diff_block).cwiseAbs().maxCoeff());

  const double tol_scale = 1.0 + f.sigma(n - 1);
  rep.pass["real"] = f.max_imag <= 1e-12;
  rep.pass["u_orthogonality"] = rep.residuals["u_orthogonality"] <= 1e-12;
  rep.pass["v_orthogonality"] = rep.residuals["v_orthogonality"] <= 1e-12;
  rep.pass["reconstruction"] = rep.residuals["reconstruction"] <= 1e-10 * tol_scale;
  rep.pass["eigen_identity"] = rep.residuals["eigen_identity"] <= 1e-12 * tol_scale;
  rep.pass["commutation"] = f.commutation_residual <= 1e-12;
  rep.pass["sigma_vs_dense_svd"] = rep.residuals["sigma_vs_dense_svd"] <= 1e-10;
  rep.pass["dft_equivalence"] = rep.residuals["dft_equivalence"] <= 1e-10;

  json sigma = json::array();
  for (int i = 0; i < n; ++i) sigma.push_back(format_double(f.sigma(i)));
  rep.extra["sigma"] = sigma;
  rep.extra["q_involution"] = f.perms.q_involution;
  const fs::path out(out_path);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  return finish(rep, out_path);
}

int cmd_eulerian_sweep(const std::string& graph_path, int steps, const std::string& out_dir) {
  RunReport rep;
  rep.command = "eulerian-sweep";
  rep.add_input(graph_path);
  if (steps < 3) throw validation_error("need at least 3 sweep steps");
  const DirectedGraph g = load_graph(graph_path);
  if (!is_eulerian(g)) throw validation_error("eulerian-sweep requires an Eulerian graph");
  const Eigen::MatrixXd laplacian = build_laplacian(g);
  const int n = g.order();

  std::vector<double> grid;
  for (int k = 0; k < steps; ++k) grid.push_back(double(k) / (steps - 1));
  const EulerianPath path = svd_path(laplacian, grid);
  const double asym = sigma_asym(laplacian);
  const double sigma_max = path.bases.front().sigma(n - 1);

  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << "t,i,sigma\n";
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (int i = 0; i < n; ++i)
      csv << format_double(grid[k]) << "," << i << ","
          << format_double(path.bases[k].sigma(i)) << "\n";
  const std::string sweep_path = out_dir + "/sweep.csv";
  write_file(sweep_path, csv.str());
  rep.outputs = {sweep_path};

  double symmetry = 0, lipschitz_slack = 0, sigma0 = 0;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const std::size_t b = grid.size() - 1 - a;
    symmetry = std::max(symmetry,
                        (path.bases[a].sigma - path.bases[b].sigma).cwiseAbs().maxCoeff());
    sigma0 = std::max(sigma0, std::abs(path.bases[a].sigma(0)));
    for (std::size_t c = 0; c < a; ++c)
      lipschitz_slack = std::max(
          lipschitz_slack, ((path.bases[a].sigma - path.bases[c].sigma).cwiseAbs().array() -
                            asym * (grid[a] - grid[c]))
                               .maxCoeff());
  }

  // derivative diagnostics at the most central simple grid point
  double fd_sigma_err = 0, fd_uv_err = 0;
  bool fd_done = false;
  for (std::size_t k = 0; k < grid.size() && !fd_done; ++k) {
    const std::size_t mid = (grid.size() / 2 + k) % grid.size();
    const double t = grid[mid];
    if (t <= 0.0 || t >= 1.0 || !path.simple_flags[mid]) continue;
    const double h = 1e-6;
    const EulerianPath probe = svd_path(laplacian, {t - h, t, t + h});
    if (!probe.simple_flags[1]) continue;
    for (int i = 1; i < n; ++i) {
      const double ds = d_sigma(probe.bases[1], laplacian, i);
      const double fd = (probe.bases[2].sigma(i) - probe.bases[0].sigma(i)) / (2 * h);
      fd_sigma_err = std::max(fd_sigma_err,
                              std::abs(ds - fd) / std::max(1.0, std::abs(fd)));
      const auto [du, dvv] = d_uv(probe.bases[1], laplacian, i);
      const Eigen::VectorXd fdu =
          (probe.bases[2].u.col(i) - probe.bases[0].u.col(i)) / (2 * h);
      const Eigen::VectorXd fdv =
          (probe.bases[2].v.col(i) - probe.bases[0].v.col(i)) / (2 * h);
      fd_uv_err = std::max({fd_uv_err, (du - fdu).norm() / std::max(1.0, fdu.norm()),
                            (dvv - fdv).norm() / std::max(1.0, fdv.norm())});
    }
    fd_done = true;
  }

  rep.residuals["sigma_asym"] = asym;
  rep.residuals["symmetry"] = symmetry;
  rep.residuals["lipschitz_slack"] = lipschitz_slack;
  rep.residuals["sigma0_max"] = sigma0;
  rep.residuals["fd_sigma_error"] = fd_sigma_err;
  rep.residuals["fd_uv_error"] = fd_uv_err;
  rep.pass["symmetry"] = symmetry <= 1e-9 * (1.0 + sigma_max);
  rep.pass["lipschitz"] = lipschitz_slack <= 1e-9;
  rep.pass["sigma0"] = sigma0 <= 1e-12;
  if (fd_done) {
    rep.pass["fd_sigma"] = fd_sigma_err <= 1e-5;
    rep.pass["fd_uv"] = fd_uv_err <= 1e-4;
  }
  int simple_count = 0;
  for (bool f : path.simple_flags) simple_count += f;
  rep.extra["simple_grid_points"] = simple_count;
  rep.extra["grid_points"] = static_cast<int>(grid.size());
  return finish(rep, out_dir + "/diagnostics.json");
}

GraphSpec parse_graph_spec(const json& j) {
  GraphSpec spec;
  spec.generator = j.at("generator").get<std::string>();
  spec.n = j.value("n", 0);
  if (j.contains("q_set")) spec.q_set = j["q_set"].get<std::vector<int>>();
  spec.k = j.value("k", 0);
  spec.weight_low = j.value("weight_low", 1.0);
  spec.weight_high = j.value("weight_high", 1.0);
  spec.clusters = j.value("clusters", 0);
  spec.cluster_size = j.value("cluster_size", 0);
  spec.seed = j.value("seed", 0ull);
  return spec;
}

int cmd_denoise(const std::string& config_path, const std::string& out_dir) {
  RunReport rep;
  rep.command = "denoise";
  rep.add_input(config_path);
  json j;
  try {
    j = json::parse(read_file(config_path));
  } catch (const json::exception& e) {
    throw validation_error(std::string("bad config JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    cfg.graph = parse_graph_spec(j.at("graph"));
    const json& sj = j.at("signal");
    cfg.signal.type = sj.value("type", "smooth");
    cfg.signal.components = sj.value("components", 10);
    cfg.signal.amplitude = sj.value("amplitude", 50.0);
    cfg.signal.pieces = sj.value("pieces", 2);
    if (sj.contains("levels")) cfg.signal.levels = sj["levels"].get<std::vector<double>>();
    cfg.signal.count = sj.value("count", 1);
    cfg.signal.seed = sj.value("seed", 0ull);
    cfg.noise_variances = j.at("noise_variances").get<std::vector<double>>();
    cfg.m_values = j.at("m_values").get<std::vector<int>>();
    cfg.trials = j.at("trials").get<int>();
    cfg.master_seed = j.value("master_seed", 0ull);
  } catch (const json::exception& e) {
    throw validation_error(std::string("bad config JSON: ") + e.what());
  }

  const DenoiseReport result = run_experiment(cfg);

  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << "variance,m,trial,isnr_db,snr_db\n";
  for (const TrialRow& r : result.rows)
    csv << format_double(r.variance) << "," << r.m << "," << r.trial << ","
        << format_double(r.isnr_db) << "," << format_double(r.snr_db) << "\n";
  const std::string trials_path = out_dir + "/trials.csv";
  write_file(trials_path, csv.str());
  rep.outputs = {trials_path};

  json cells = json::array();
  bool finite = true;
  for (const DenoiseCell& c : result.cells) {
    cells.push_back({{"variance", format_double(c.variance)},
                     {"m", c.m},
                     {"trials", c.trials},
                     {"mean_isnr_db", format_double(c.mean_isnr_db)},
                     {"mean_snr_db", format_double(c.mean_snr_db)}});
    finite = finite && std::isfinite(c.mean_isnr_db) && std::isfinite(c.mean_snr_db);
  }
  rep.extra["cells"] = cells;
  rep.pass["finite"] = finite;
  return finish(rep, out_dir + "/report.json");
}

int cmd_generate(const std::string& type, int n, const std::string& q_csv, int k,
                 double weight_low, double weight_high, int clusters, int cluster_size,
                 std::uint64_t seed, const std::string& out_path) {
  RunReport rep;
  rep.command = "generate";
  GraphSpec spec;
  spec.generator = type == "cluster-cycle" ? "cluster_cycle" : type;
  spec.n = n;
  spec.q_set = parse_int_list(q_csv);
  spec.k = k;
  spec.weight_low = weight_low;
  spec.weight_high = weight_high;
  spec.clusters = clusters;
  spec.cluster_size = cluster_size;
  spec.seed = seed;
  const DirectedGraph g = make_graph(spec);
  const fs::path out(out_path);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_graph(g, out_path);
  rep.outputs = {out_path};
  rep.extra["n"] = g.order();
  rep.extra["edges"] = static_cast<int>(g.edges().size());
  rep.extra["eulerian"] = is_eulerian(g);
  rep.pass["valid"] = true;
  const fs::path report = out.parent_path() / (out.stem().string() + ".report.json");
  return finish(rep, report.string());
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("DGFT_THREADS")) {
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));
  }

  CLI::App app{"SVD-based graph Fourier transform toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string graph_path, signal_path, coeffs_path, out_path, out_dir, config_path, q_csv,
      gen_type;
  int n = 0, steps = 11, k = 0, clusters = 0, cluster_size = 0;
  double weight_low = 1.0, weight_high = 1.0;
  std::uint64_t seed = 0;
  bool inverse = false;

  auto* spectrum = app.add_subcommand("spectrum", "frequencies and frequency components");
  spectrum->add_option("--graph", graph_path, "graph file")->required();
  spectrum->add_option("--out-dir", out_dir, "output directory")->required();

  auto* gft_cmd = app.add_subcommand("gft", "forward transform of a signal");
  gft_cmd->add_option("--graph", graph_path)->required();
  gft_cmd->add_option("--signal", signal_path, "signal CSV (coefficients with --inverse)")
      ->required();
  gft_cmd->add_option("--out", out_path)->required();
  gft_cmd->add_flag("--inverse", inverse, "treat input as coefficients and invert");

  auto* igft_cmd = app.add_subcommand("igft", "inverse transform of coefficients");
  igft_cmd->add_option("--graph", graph_path)->required();
  igft_cmd->add_option("--coeffs", coeffs_path)->required();
  igft_cmd->add_option("--out", out_path)->required();

  auto* metrics = app.add_subcommand("metrics", "variation measures of a signal");
  metrics->add_option("--graph", graph_path)->required();
  metrics->add_option("--signal", signal_path)->required();
  metrics->add_option("--out", out_path)->required();

  auto* circ = app.add_subcommand("circulant-verify", "factorized SVD invariants");
  circ->add_option("--n", n)->required();
  circ->add_option("--q", q_csv, "comma-separated generators")->required();
  circ->add_option("--out", out_path)->required();

  auto* sweep = app.add_subcommand("eulerian-sweep", "interpolation family diagnostics");
  sweep->add_option("--graph", graph_path)->required();
  sweep->add_option("--steps", steps, "grid points on [0,1]");
  sweep->add_option("--out-dir", out_dir)->required();

  auto* denoise = app.add_subcommand("denoise", "bandlimit denoising experiment");
  denoise->add_option("--config", config_path, "experiment config JSON")->required();
  denoise->add_option("--out-dir", out_dir)->required();

  auto* gen = app.add_subcommand("generate", "graph generators");
  gen->add_option("--type", gen_type, "circulant | knn | cluster-cycle")->required();
  gen->add_option("--n", n);
  gen->add_option("--q", q_csv);
  gen->add_option("--k", k);
  gen->add_option("--weight-low", weight_low);
  gen->add_option("--weight-high", weight_high);
  gen->add_option("--clusters", clusters);
  gen->add_option("--cluster-size", cluster_size);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1, --help/--version 0
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(graph_path, out_dir);
    if (gft_cmd->parsed()) return cmd_gft(graph_path, signal_path, out_path, inverse);
    if (igft_cmd->parsed()) return cmd_igft(graph_path, coeffs_path, out_path);
    if (metrics->parsed()) return cmd_metrics(graph_path, signal_path, out_path);
    if (circ->parsed()) return cmd_circulant_verify(n, q_csv, out_path);
    if (sweep->parsed()) return cmd_eulerian_sweep(graph_path, steps, out_dir);
    if (denoise->parsed()) return cmd_denoise(config_path, out_dir);
    if (gen->parsed())
      return cmd_generate(gen_type, n, q_csv, k, weight_low, weight_high, clusters,
                          cluster_size, seed, out_path);
  } catch (const consistency_error& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
