#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <edge34/edge34.hpp>

using json = nlohmann::json;
using namespace edge34;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFlags = 2;
constexpr int kExitNumeric = 3;
constexpr int kMaxFiniteN = 50;  // Stieltjes in double loses orthogonality past ~60

struct BadFlags : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* e = std::getenv("EDGE34_THREADS")) {
    const int v = std::atoi(e);
    if (v > 0) n = std::min(n, unsigned(v));
  }
  return n;
}

// results in index order regardless of completion order
template <class F>
auto parallel_map(std::size_t count, F f) {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(count);
  const unsigned w = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
  std::vector<std::future<void>> jobs;
  for (unsigned k = 0; k < w; ++k)
    jobs.push_back(std::async(std::launch::async, [&, k] {
      for (std::size_t i = k; i < count; i += w) out[i] = f(i);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) return {a};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

// --config: keys of the file (flat, or nested under the subcommand name) become
// flags placed before the user's own, which are skipped when the user gave them
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[++i];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
    else
      rest.push_back(args[i]);
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw BadFlags("cannot open config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw BadFlags(std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw BadFlags("config must be a JSON object");
  auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
  if (sub == rest.end()) return rest;
  std::set<std::string> given;
  for (const auto& a : rest)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  json flat = json::object();
  for (auto& [k, v] : cfg.items())
    if (!v.is_object()) flat[k] = v;
  if (cfg.contains(*sub) && cfg[*sub].is_object())
    for (auto& [k, v] : cfg[*sub].items()) flat[k] = v;
  std::vector<std::string> extra;
  for (auto& [k, v] : flat.items()) {
    if (given.count(k)) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) extra.push_back("--" + k);
    } else {
      extra.push_back("--" + k);
      extra.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  std::vector<std::string> out(rest.begin(), sub + 1);
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), sub + 1, rest.end());
  return out;
}

struct Output {
  std::string path;  // empty: stdout
  std::ofstream file;
  std::ostream& stream() { return path.empty() ? std::cout : file; }
  void open() {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw BadFlags("cannot write " + path);
  }
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// sibling manifest <out>.manifest.json; stdout runs have none
void write_manifest(const std::string& command, const CsvHeader& h, const std::vector<std::string>& outputs) {
  if (outputs.empty() || outputs.front().empty()) return;
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["parameters"] = h.params;
  m["timestamp"] = utc_now();
  m["outputs"] = outputs;
  std::ofstream(outputs.front() + ".manifest.json") << m.dump(2) << "\n";
}

void write_svg_file(const std::string& path, const std::vector<Series>& s, const std::string& xl, const std::string& yl) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw BadFlags("cannot write " + path);
  write_svg(f, s, xl, yl);
}

double p34_tol = 1e-12;

P34Solution solve_for(double alpha, double s_lo, double s_hi) {
  return solve_u(alpha, std::min(-8.0, s_lo), std::max(6.0, s_hi), 0.01, p34_tol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge kernel for unitary ensembles with a |x|^{2 alpha} factor at a soft edge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string out_path, svg_path;

  // u
  auto* cu = app.add_subcommand("u", "solve the Painleve XXXIV equation");
  double u_alpha = 1.0, s_min = -8.0, s_max = 6.0, step = 0.01;
  std::string oracle;
  cu->add_option("--alpha", u_alpha)->required();
  cu->add_option("--s-min", s_min);
  cu->add_option("--s-max", s_max);
  cu->add_option("--step", step)->check(CLI::PositiveNumber);
  cu->add_option("--tol", p34_tol);
  cu->add_option("--oracle", oracle)->check(CLI::IsMember({"closed-form"}));

  // kernel
  auto* ck = app.add_subcommand("kernel", "evaluate the edge kernel on a square grid");
  double k_alpha = 0.0, k_s = 0.0, x_min = -6.0, x_max = 4.0;
  int k_points = 21;
  std::string psi_out;
  ck->add_option("--alpha", k_alpha)->required();
  ck->add_option("--s", k_s);
  ck->add_option("--x-min", x_min);
  ck->add_option("--x-max", x_max);
  ck->add_option("--points", k_points)->check(CLI::Range(2, 2001));
  ck->add_option("--psi-out", psi_out, "also write psi1, psi2 on the grid");

  // gapdist
  auto* cg = app.add_subcommand("gapdist", "distribution of the largest eigenvalue");
  double g_alpha = 0.0, g_s = 0.0, t_min = -6.0, t_max = 3.0;
  int t_points = 37, g_m = 40;
  cg->add_option("--alpha", g_alpha)->required();
  cg->add_option("--s", g_s);
  cg->add_option("--t-min", t_min);
  cg->add_option("--t-max", t_max);
  cg->add_option("--t-points", t_points)->check(CLI::Range(1, 10000));
  cg->add_option("--m", g_m)->check(CLI::Range(10, 400));

  // finite-n
  auto* cf = app.add_subcommand("finite-n", "finite-n Christoffel-Darboux kernel against the edge limit");
  std::string ensemble_path;
  double f_min = -4.0, f_max = 2.0;
  int f_points = 13, quad_points = 40;
  cf->add_option("--ensemble", ensemble_path)->required()->check(CLI::ExistingFile);
  cf->add_option("--x-min", f_min);
  cf->add_option("--x-max", f_max);
  cf->add_option("--points", f_points)->check(CLI::Range(2, 401));
  cf->add_option("--quad-points", quad_points)->check(CLI::Range(4, 400));

  // coeffs
  auto* cc = app.add_subcommand("coeffs", "coefficients of the large-s series");
  double c_alpha = 0.0;
  int c_n = 6;
  cc->add_option("--alpha", c_alpha)->required();
  cc->add_option("--n", c_n)->check(CLI::Range(2, 200));

  // rhcheck
  auto* cr = app.add_subcommand("rhcheck", "verify the explicit model RH solutions for alpha 0 and 1");
  double r_alpha = 0.0, r_s = 0.0, r_decay_s = 1.0;
  int r_samples = 4;
  cr->add_option("--alpha", r_alpha)->required()->check(CLI::IsMember({0.0, 1.0}));
  cr->add_option("--s", r_s);
  cr->add_option("--decay-s", r_decay_s, "s used for the decay-rate fit at infinity");
  cr->add_option("--samples", r_samples)->check(CLI::Range(3, 100));

  for (auto* c : {cu, ck, cg, cf, cc, cr}) {
    c->add_option("--out", out_path, "output file (default stdout)");
    if (c != cc && c != cr) c->add_option("--svg", svg_path, "SVG line plot");
  }

  try {
    auto args = merge_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFlags;
  } catch (const BadFlags& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlags;
  }

  Output out{out_path, {}};
  try {
    out.open();
    std::ostream& os = out.stream();
    CsvHeader h;

    if (*cu) {
      if (!(s_min < s_max)) throw BadFlags("--s-min must be below --s-max");
      if (!oracle.empty() && u_alpha != 1.0) throw BadFlags("--oracle closed-form needs --alpha 1");
      const auto sol = solve_u(u_alpha, s_min, s_max, step, p34_tol);
      h = {"u", {{"alpha", fmt17(u_alpha)}, {"s_min", fmt17(s_min)}, {"s_max", fmt17(s_max)},
                 {"step", fmt17(step)}, {"tol", fmt17(p34_tol)},
                 {"valid_interval", fmt17(sol.valid_interval[0]) + ":" + fmt17(sol.valid_interval[1])}}};
      std::vector<std::string> cols{"s", "u", "u_prime"};
      if (!oracle.empty()) cols.push_back("u_closed_form");
      write_csv_header(os, h, cols);
      double worst = 0.0;
      Series su{"u", {}, {}}, sc{"closed form", {}, {}};
      for (std::size_t i = 0; i < sol.s_grid.size(); ++i) {
        std::vector<double> row{sol.s_grid[i], sol.u[i], sol.u_prime[i]};
        if (!oracle.empty()) {
          const double c = u_closed_form_alpha1(sol.s_grid[i]).u;
          row.push_back(c);
          worst = std::max(worst, std::abs(c - sol.u[i]));
          sc.x.push_back(sol.s_grid[i]);
          sc.y.push_back(c);
        }
        su.x.push_back(sol.s_grid[i]);
        su.y.push_back(sol.u[i]);
        write_csv_row(os, row);
      }
      if (!oracle.empty()) std::cerr << "max |u - closed form| = " << fmt17(worst) << "\n";
      std::vector<Series> plot{su};
      if (!oracle.empty()) plot.push_back(sc);
      write_svg_file(svg_path, plot, "s", "u(s)");
      write_manifest("u", h, {out_path, svg_path});
    } else if (*ck) {
      const auto sol = solve_for(k_alpha, k_s, k_s);
      const auto g = linspace(x_min, x_max, k_points);
      const KernelOptions ko;
      const auto K = kernel_grid(k_alpha, k_s, g, g, sol, ko);
      h = {"kernel", {{"alpha", fmt17(k_alpha)}, {"s", fmt17(k_s)}, {"diag_switch", fmt17(ko.diag_switch)},
                      {"psi_rtol", fmt17(ko.psi.rtol)}, {"p34_tol", fmt17(p34_tol)}}};
      write_csv_header(os, h, {"x", "y", "K"});
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) write_csv_row(os, {g[i], g[j], K.values[i][j]});
      if (!psi_out.empty()) {
        std::vector<double> xs;
        for (double x : g)
          if (std::abs(x) >= ko.psi.window) xs.push_back(x);
        const auto ps = psi_grid(k_alpha, k_s, xs, sol, ko.psi);
        std::ofstream pf(psi_out);
        if (!pf) throw BadFlags("cannot write " + psi_out);
        write_csv_header(pf, h, {"x", "psi1_re", "psi1_im", "psi2_re", "psi2_im"});
        for (const auto& p : ps)
          write_csv_row(pf, {p.x, p.psi1.real(), p.psi1.imag(), p.psi2.real(), p.psi2.imag()});
      }
      Series diag{"K(x,x)", g, {}};
      for (std::size_t i = 0; i < g.size(); ++i) diag.y.push_back(K.values[i][i]);
      write_svg_file(svg_path, {diag}, "x", "K(x,x;s)");
      write_manifest("kernel", h, {out_path, svg_path, psi_out});
    } else if (*cg) {
      if (t_points > 1 && !(t_min < t_max)) throw BadFlags("--t-min must be below --t-max");
      const auto sol = solve_for(g_alpha, g_s, g_s);
      const auto ts = linspace(t_min, t_max, t_points);
      const FredholmOptions fo;
      const auto res = parallel_map(ts.size(), [&](std::size_t i) { return gap_probability(g_alpha, g_s, ts[i], g_m, sol, fo); });
      h = {"gapdist", {{"alpha", fmt17(g_alpha)}, {"s", fmt17(g_s)}, {"m", std::to_string(g_m)},
                       {"det_tol", fmt17(fo.tol)}, {"m_cap", std::to_string(fo.m_cap)}, {"p34_tol", fmt17(p34_tol)}}};
      write_csv_header(os, h, {"t", "det", "est_error"});
      Series sd{"F(t)", {}, {}};
      for (const auto& r : res) {
        write_csv_row(os, {r.t, r.det_value, r.est_error});
        sd.x.push_back(r.t);
        sd.y.push_back(r.det_value);
      }
      write_svg_file(svg_path, {sd}, "t", "det(I - K) on (t, inf)");
      write_manifest("gapdist", h, {out_path, svg_path});
    } else if (*cf) {
      json e;
      try {
        e = json::parse(std::ifstream(ensemble_path));
      } catch (const json::exception& x) {
        throw BadFlags(std::string("ensemble: ") + x.what());
      }
      if (!e.contains("v") || !e.contains("n") || !e.contains("N")) throw BadFlags("ensemble needs v, n, N");
      const int n = e["n"].get<int>();
      if (n > kMaxFiniteN) throw BadFlags("n is capped at 50 (double-precision Stieltjes)");
      const auto cfg = make_ensemble(e["v"].get<std::vector<double>>(), n, e["N"].get<double>(),
                                     e.value("alpha", 0.0));
      const auto rec = build_recurrence(cfg, quad_points);
      const auto sol = solve_for(cfg.alpha, cfg.s, cfg.s);
      const auto g = linspace(f_min, f_max, f_points);
      const auto rep = edge_compare(cfg, rec, sol, g);
      h = {"finite-n", {{"alpha", fmt17(cfg.alpha)}, {"s", fmt17(cfg.s)}, {"n", std::to_string(n)},
                        {"N", fmt17(cfg.N)}, {"c1", fmt17(cfg.c1)}, {"c2", fmt17(cfg.c2)}, {"L", fmt17(cfg.L)},
                        {"quad_points", std::to_string(quad_points)}, {"recurrence_tol", fmt17(1e-10)}}};
      write_csv_header(os, h, {"x", "y", "K_n_scaled", "K_edge", "abs_error"});
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
          write_csv_row(os, {g[i], g[j], rep.finite[i][j], rep.limit[i][j], std::abs(rep.finite[i][j] - rep.limit[i][j])});
      std::cerr << "sup error = " << fmt17(rep.sup_error) << "\n";
      Series a{"n = " + std::to_string(n), g, {}}, b{"limit", g, {}};
      for (std::size_t i = 0; i < g.size(); ++i) {
        a.y.push_back(rep.finite[i][i]);
        b.y.push_back(rep.limit[i][i]);
      }
      write_svg_file(svg_path, {a, b}, "x", "K(x,x)");
      write_manifest("finite-n", h, {out_path, svg_path});
    } else if (*cc) {
      const auto c = series_coeffs(c_alpha, c_n);
      h = {"coeffs", {{"alpha", fmt17(c_alpha)}, {"nu", fmt17(c.nu)}, {"n", std::to_string(c_n)}}};
      write_csv_header(os, h, {"n", "b_n", "a_n"});
      for (int k = 0; k < c_n; ++k) write_csv_row(os, {double(k), c.b[k], c.a[k]});
      write_manifest("coeffs", h, {out_path});
    } else if (*cr) {
      const Builder b = r_alpha == 0.0 ? Builder::Psi0 : Builder::Psi1;
      const auto jr = verify_jumps(b, r_s, r_samples);
      const double dd = det_deviation(b, r_s);
      const auto fit = fit_decay(b, r_decay_s);
      json rep;
      rep["version"] = kVersion;
      rep["alpha"] = r_alpha;
      rep["s"] = r_s;
      rep["eps"] = jr.eps;
      json rays = json::array();
      for (const auto& smp : jr.samples)
        rays.push_back({{"ray", "Sigma" + std::to_string(int(smp.ray))}, {"radius", smp.radius}, {"residual", smp.residual}});
      rep["jumps"] = {{"samples", rays}, {"max_residual", jr.max_residual}, {"tol", 1e-6}, {"pass", jr.pass}};
      rep["det"] = {{"max_deviation", dd}, {"tol", 1e-10}, {"pass", dd <= 1e-10}};
      rep["decay"] = {{"s", r_decay_s}, {"radii", fit.radii}, {"residuals", fit.residuals},
                      {"exponent", fit.exponent}, {"pass", fit.exponent >= -0.7 && fit.exponent <= -0.3}};
      os << rep.dump(2) << "\n";
    }
  } catch (const BadFlags& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlags;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
