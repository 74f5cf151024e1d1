#include <cmath>
#include <cstdlib>
#include <algorithm>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dynamo/cli.hpp"
#include "dynamo/spectral.hpp"

namespace dynamo::cli {

namespace fs = std::filesystem;

namespace {

ShearProfile profile_of(const ExperimentConfig& cfg) {
  return cfg.shear == "zero" ? ShearProfile::zero() : ShearProfile::quadrant(cfg.moll_scale.front(), cfg.band);
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) { return fs::path(cfg.out_dir) / name; }

// Runs cells concurrently, returns results in submission order.
template <class R, class F>
std::vector<R> run_cells(std::size_t count, F&& fn) {
  std::vector<std::future<R>> futs;
  futs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) futs.push_back(std::async(std::launch::async, fn, k));
  std::vector<R> out;
  out.reserve(count);
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

bool near_forward_boundary(const TorusPoint& p, Alpha a) {
  constexpr double m = 1e-6;
  const RegionId r = forward_region(p, a);
  for (auto [dx, dy] : {std::pair{m, 0.0}, {-m, 0.0}, {0.0, m}, {0.0, -m}}) {
    if (!(forward_region(TorusPoint::wrapped(p.x + dx, p.y + dy), a) == r)) return true;
  }
  return false;
}

double torus_gap(const TorusPoint& a, const TorusPoint& b) {
  auto d = [](double u, double v) {
    const double t = std::abs(u - v);
    return std::min(t, 1.0 - t);
  };
  return std::max(d(a.x, b.x), d(a.y, b.y));
}

struct MapCheckRow {
  std::string check;
  int alpha = 0;
  int n = 0;
  long long count = 0;
  long long failures = 0;
  double worst = 0.0;
  bool skipped = false;
};

}  // namespace

int cmd_map_check(const ExperimentConfig& cfg) {
  std::vector<MapCheckRow> rows;
  std::mt19937_64 rng(cfg.seeds.front());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::set<int> grids{4, 8, 64, cfg.grid_n};

  for (int av : cfg.alpha) {
    const Alpha a(av);
    {
      MapCheckRow r{"det", av, 0};
      for (int l = 1; l <= 4; ++l) {
        ++r.count;
        if (branch_matrix(l, a).entries.det() != 1) ++r.failures;
      }
      rows.push_back(r);
    }
    for (int n : grids) {
      MapCheckRow r{"grid_bijection", av, n};
      const auto table = grid_pullback_table(n, a);
      std::vector<char> hit(table.size(), 0);
      for (std::size_t t = 0; t < table.size(); ++t) {
        ++r.count;
        auto& h = hit[table.source(t)];
        if (h) ++r.failures;
        h = 1;
        const GridPoint p{int(t % n), int(t / n), n};
        const GridPoint q = apply_map(apply_inverse(p, a), a);
        if (q.i != p.i || q.j != p.j) ++r.failures;
      }
      rows.push_back(r);
    }
    MapCheckRow mat{"matrix_form", av, 0}, flow{"flow_map", av, 0};
    const ShearProfile g = profile_of(cfg);
    const ScalarFn2 gfn = [&g](const TorusPoint& p) { return g.eval(p); };
    for (int k = 0; k < 10000; ++k) {
      const TorusPoint p{unit(rng), unit(rng)};
      if (near_forward_boundary(p, a)) continue;
      const TorusPoint t = apply_map(p, a);
      const double e1 = torus_gap(t, apply_branch(p, forward_region(p, a).index, a));
      ++mat.count;
      mat.worst = std::max(mat.worst, e1);
      if (e1 > 1e-12) ++mat.failures;
      const Point3 f = flow_map(1.0, {p.x, p.y, 0.0}, a, gfn);
      const double e2 = torus_gap(t, TorusPoint::wrapped(f.x, f.y));
      ++flow.count;
      flow.worst = std::max(flow.worst, e2);
      if (e2 > 1e-12) ++flow.failures;
    }
    rows.push_back(mat);
    rows.push_back(flow);

    MapCheckRow cu{"unstable_cone", av, 0}, cs{"stable_cone", av, 0}, jac{"leaf_jacobian", av, 0};
    // cone expansion and the Jacobian bound only hold from alpha = 4 on
    if (av < 4) {
      cu.skipped = cs.skipped = jac.skipped = true;
    } else {
      const double w = 2.0 / a.as_double();
      for (int k = 0; k < 10000; ++k) {
        const double s = (2.0 * unit(rng) - 1.0) * w;
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        const Vec2 vu{sign / std::hypot(1.0, s), sign * s / std::hypot(1.0, s)};
        const Vec2 vs{vu.y, vu.x};
        for (int l = 1; l <= 4; ++l) {
          const IntMatrix2 m = branch_matrix(l, a).entries;
          const Vec2 iu = m.apply(vu), is = m.inverse().apply(vs);
          ++cu.count;
          ++cs.count;
          const double lim = a.as_double() * a.as_double() / 2.0;
          if (!in_unstable_cone(iu, a) || norm(iu) < lim) ++cu.failures;
          if (!in_stable_cone(is, a) || norm(is) < lim) ++cs.failures;
        }
      }
    }
    rows.push_back(cu);
    rows.push_back(cs);
    if (!jac.skipped) {
      const double w = 2.0 / a.as_double();
      for (int k = 0; k < 1000; ++k) {
        const double s = (2.0 * unit(rng) - 1.0) * w;
        const Vec2 d{s / std::hypot(1.0, s), 1.0 / std::hypot(1.0, s)};
        for (int l = 1; l <= 4; ++l) {
          const double j = leaf_jacobian(d, {Side::Backward, l}, a);
          ++jac.count;
          jac.worst = std::max(jac.worst, j * a.as_double() * a.as_double() / 2.0);
          if (j > 2.0 / (a.as_double() * a.as_double())) ++jac.failures;
        }
      }
    }
    rows.push_back(jac);
  }

  CsvWriter csv(out_path(cfg, "map_check.csv"), cfg, "map-check");
  csv.header({"check", "alpha", "grid_n", "count", "failures", "worst", "status"});
  bool ok = true;
  for (const auto& r : rows) {
    const std::string status = r.skipped ? "skipped" : (r.failures == 0 ? "pass" : "fail");
    if (r.failures) ok = false;
    csv.cell(r.check).cell(r.alpha).cell(r.n).cell(r.count).cell(r.failures).cell(r.worst).cell(status);
    csv.end_row();
  }
  return ok ? 0 : 1;
}

int cmd_limit(const ExperimentConfig& cfg) {
  struct Cell {
    std::string name;
    double ell;
    ShearProfile g;
  };
  std::vector<Cell> cells;
  for (double l : cfg.moll_scale) cells.push_back({"quadrant", l, ShearProfile::quadrant(l, cfg.band)});
  cells.push_back({"zero", 0.0, ShearProfile::zero()});
  const auto res = run_cells<std::pair<QuadrantIntegrals, LimitMatrix>>(cells.size(), [&](std::size_t k) {
    const auto q = quadrant_integrals(cells[k].g);
    return std::pair{q, limit_matrix(q)};
  });

  CsvWriter csv(out_path(cfg, "limit.csv"), cfg, "limit");
  csv.header({"profile", "ell", "q1_re", "q1_im", "q2_re", "q2_im", "q3_re", "q3_im", "q4_re", "q4_im", "m11_re",
              "m11_im", "m12_re", "m12_im", "m21_re", "m21_im", "m22_re", "m22_im", "mu_re", "mu_im", "mu_abs",
              "trace_minus_mu", "det_abs", "richardson_err"});
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& [q, m] = res[k];
    csv.cell(cells[k].name).cell(cells[k].ell);
    for (const auto& v : q.q) csv.cell(v.real()).cell(v.imag());
    for (const auto& row : m.m) {
      for (const auto& v : row) csv.cell(v.real()).cell(v.imag());
    }
    csv.cell(m.mu.real()).cell(m.mu.imag()).cell(std::abs(m.mu)).cell(std::abs(m.trace() - m.mu));
    csv.cell(std::abs(m.det())).cell(q.max_error());
    csv.end_row();
  }
  return 0;
}

int cmd_eigen(const ExperimentConfig& cfg) {
  struct Cell {
    double eps;
    int alpha;
  };
  std::vector<Cell> cells;
  for (double e : cfg.eps) {
    for (int a : cfg.alpha) cells.push_back({e, a});
  }
  const ShearProfile g = profile_of(cfg);
  const double mu = std::abs(limit_matrix(g, 256).mu);
  struct Out {
    SpectralReport<VectorField2> rep;
    std::string error;
  };
  const auto res = run_cells<Out>(cells.size(), [&](std::size_t k) {
    Out o;
    try {
      const OperatorContext ctx(Alpha(cells[k].alpha), cfg.grid_n, g, cells[k].eps);
      o.rep = leading_eigenpair(ctx, cfg.seeds.front(), cfg.tol, cfg.max_iter);
      o.rep.vector = VectorField2();
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  CsvWriter csv(out_path(cfg, "eigen.csv"), cfg, "eigen");
  csv.header({"alpha", "eps", "lambda_re", "lambda_im", "lambda_abs", "ratio", "mu_abs", "gap", "above_threshold",
              "residual", "iters", "converged", "error"});
  bool ok = true;
  std::map<double, Series> plot;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& r = res[k].rep;
    const double a2 = double(cells[k].alpha) * cells[k].alpha;
    const double ratio = std::abs(r.lambda) / a2;
    if (!res[k].error.empty() || !r.converged) ok = false;
    csv.cell(cells[k].alpha).cell(cells[k].eps).cell(r.lambda.real()).cell(r.lambda.imag()).cell(std::abs(r.lambda));
    csv.cell(ratio).cell(mu).cell(std::abs(ratio - mu)).cell(ratio >= 0.125 ? 1 : 0).cell(r.residual).cell(r.iters);
    csv.cell(r.converged ? 1 : 0).cell(res[k].error);
    csv.end_row();
    auto& s = plot[cells[k].eps];
    s.label = "eps=" + format_double(cells[k].eps);
    s.x.push_back(cells[k].alpha);
    s.y.push_back(ratio);
  }
  if (cfg.plots) {
    std::vector<Series> series;
    for (auto& [e, s] : plot) series.push_back(s);
    write_svg_plot(out_path(cfg, "eigen.svg"), "|lambda|/alpha^2 vs alpha", "alpha", "|lambda|/alpha^2", series);
  }
  return ok ? 0 : 1;
}

int cmd_evolve(const ExperimentConfig& cfg) {
  struct Cell {
    int alpha;
    double eps;
  };
  std::vector<Cell> cells;
  for (int a : cfg.alpha) {
    for (double e : cfg.eps) cells.push_back({a, e});
  }
  const ShearProfile g = profile_of(cfg);
  const Field3 b0 = make_div_free(random_field(cfg.seeds.front(), 2.0, std::min(8, cfg.grid_n / 2 - 1), cfg.grid_n));
  struct Out {
    GrowthTrace tr;
    std::string error;
  };
  const auto res = run_cells<Out>(cells.size(), [&](std::size_t k) {
    Out o;
    try {
      const OperatorContext ctx(Alpha(cells[k].alpha), cfg.grid_n, g, cells[k].eps);
      o.tr = evolve_and_trace(b0, ctx, cfg.periods);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  CsvWriter trace(out_path(cfg, "evolve_trace.csv"), cfg, "evolve");
  trace.header({"alpha", "eps", "period", "log_norm"});
  CsvWriter summary(out_path(cfg, "evolve.csv"), cfg, "evolve");
  summary.header({"alpha", "eps", "shear", "gamma", "threshold", "initial_divergence", "error"});
  bool ok = true;
  std::vector<Series> series;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& tr = res[k].tr;
    if (!res[k].error.empty()) ok = false;
    Series s{"alpha=" + std::to_string(cells[k].alpha) + " eps=" + format_double(cells[k].eps), {}, {}};
    for (std::size_t p = 0; p < tr.log_norms.size(); ++p) {
      trace.cell(cells[k].alpha).cell(cells[k].eps).cell(static_cast<long long>(p)).cell(tr.log_norms[p]);
      trace.end_row();
      s.x.push_back(double(p));
      s.y.push_back(tr.log_norms[p]);
    }
    series.push_back(std::move(s));
    const double a2 = double(cells[k].alpha) * cells[k].alpha;
    summary.cell(cells[k].alpha).cell(cells[k].eps).cell(cfg.shear).cell(tr.gamma);
    summary.cell(0.25 * std::log(a2 / 8.0)).cell(tr.initial_divergence).cell(res[k].error);
    summary.end_row();
  }
  if (cfg.plots) write_svg_plot(out_path(cfg, "evolve.svg"), "log |B_n| vs period", "period", "log norm", series);
  return ok ? 0 : 1;
}

int cmd_converge(const ExperimentConfig& cfg) {
  const int band = std::min(8, cfg.grid_n / 2 - 1);
  const std::uint64_t seed = cfg.seeds.front();
  const VectorField2 h = random_field(seed, 2.0, band, cfg.grid_n);
  const VectorField2 phi = random_field(seed + 1, 2.0, band, cfg.grid_n);
  const auto rows = limit_convergence_experiment(cfg.alpha, h, phi, profile_of(cfg));

  CsvWriter csv(out_path(cfg, "converge.csv"), cfg, "converge");
  csv.header({"alpha", "error", "decreasing"});
  Series s{"pairing error", {}, {}};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const bool dec = k == 0 || rows[k].error < rows[k - 1].error;
    csv.cell(rows[k].alpha).cell(rows[k].error).cell(dec ? 1 : 0);
    csv.end_row();
    s.x.push_back(std::log2(double(rows[k].alpha)));
    s.y.push_back(std::log10(rows[k].error));
  }
  if (cfg.plots) write_svg_plot(out_path(cfg, "converge.svg"), "pairing error vs alpha", "log2 alpha", "log10 error", {s});
  return 0;
}

int cmd_norms(const ExperimentConfig& cfg) {
  const std::uint64_t seed = cfg.seeds.front();
  const VectorField2 h = random_field(seed, 2.0, std::min(8, cfg.grid_n / 2 - 1), cfg.grid_n);
  const ShearProfile g = profile_of(cfg);
  struct Out {
    NormReport norms;
    std::vector<std::pair<double, CheckReport>> checks;
    std::string error;
  };
  const auto res = run_cells<Out>(cfg.alpha.size(), [&](std::size_t k) {
    Out o;
    try {
      const Alpha a(cfg.alpha[k]);
      o.norms = norm_report(h, SampleSet(seed, a, cfg.norms), cfg.norms);
      const OperatorContext ctx(a, cfg.grid_n, g, 0.0);
      o.checks.emplace_back(0.0, ly_check(h, ctx, cfg.norms, cfg.c_cal, seed));
      for (double e : cfg.eps) {
        if (e > 0.0) o.checks.emplace_back(e, heat_weak_check(h, e, a, cfg.norms, seed));
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  CsvWriter csv(out_path(cfg, "norms.csv"), cfg, "norms");
  csv.header({"alpha", "eps", "check", "lhs", "rhs", "margin", "witness"});
  bool ok = true;
  for (std::size_t k = 0; k < res.size(); ++k) {
    const int a = cfg.alpha[k];
    if (!res[k].error.empty()) {
      ok = false;
      csv.cell(a).cell(0.0).cell("error").cell(0.0).cell(0.0).cell(0.0).cell(res[k].error);
      csv.end_row();
      continue;
    }
    const auto& n = res[k].norms;
    for (const auto* e : {&n.weak, &n.strong_stable, &n.strong_unstable}) {
      const char* name = e == &n.weak ? "norm_weak" : e == &n.strong_stable ? "norm_strong_stable" : "norm_strong_unstable";
      csv.cell(a).cell(0.0).cell(name).cell(e->value).cell(0.0).cell(0.0).cell(e->witness);
      csv.end_row();
    }
    for (const auto& [eps, rep] : res[k].checks) {
      for (const auto& r : rep.rows) {
        if (!r.ok()) ok = false;
        csv.cell(a).cell(eps).cell(r.name).cell(r.lhs).cell(r.rhs).cell(r.margin()).cell(r.witness);
        csv.end_row();
      }
    }
  }
  return ok ? 0 : 1;
}

int cmd_flux(const ExperimentConfig& cfg) {
  const std::uint64_t seed = cfg.seeds.front();
  const int n = cfg.grid_n;
  const VectorField2 b0 = random_field(seed, 2.0, std::min(8, n / 2 - 1), n);
  struct Out {
    FluxSeries fs;
    std::uint64_t psi_seed = 0;
    std::string error;
  };
  const auto res = run_cells<Out>(cfg.alpha.size(), [&](std::size_t k) {
    Out o;
    try {
      const OperatorContext ctx(Alpha(cfg.alpha[k]), n, profile_of(cfg), 0.0);
      // an underflowing pairing means psi missed the growing mode; redraw
      for (int attempt = 0; attempt < 4; ++attempt) {
        o.psi_seed = seed + 1 + attempt;
        o.fs = flux_experiment(b0, random_field(o.psi_seed, 2.0, std::min(4, n / 2 - 1), n), ctx, cfg.flux_steps);
        if (!o.fs.underflow) break;
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  CsvWriter series(out_path(cfg, "flux_series.csv"), cfg, "flux");
  series.header({"alpha", "k", "a_k", "log_pairing"});
  CsvWriter summary(out_path(cfg, "flux.csv"), cfg, "flux");
  summary.header({"alpha", "psi_seed", "tail_slope", "underflow", "error"});
  bool ok = true;
  std::vector<Series> plot;
  for (std::size_t k = 0; k < res.size(); ++k) {
    const auto& fs = res[k].fs;
    if (!res[k].error.empty()) ok = false;
    Series s{"alpha=" + std::to_string(cfg.alpha[k]), {}, {}};
    for (std::size_t i = 0; i < fs.a.size(); ++i) {
      series.cell(cfg.alpha[k]).cell(static_cast<long long>(i + 1)).cell(fs.a[i]).cell(fs.log_pairing[i]);
      series.end_row();
      s.x.push_back(double(i + 1));
      s.y.push_back(fs.log_pairing[i]);
    }
    plot.push_back(std::move(s));
    summary.cell(cfg.alpha[k]).cell(static_cast<long long>(res[k].psi_seed)).cell(fs.tail_slope);
    summary.cell(fs.underflow ? 1 : 0).cell(res[k].error);
    summary.end_row();
  }
  if (cfg.plots) write_svg_plot(out_path(cfg, "flux.svg"), "log |<B_k, psi>| vs k", "k", "log pairing", plot);
  return ok ? 0 : 1;
}

namespace {

const char* kSchemas =
    "CSV schemas (every file starts with '# generated <UTC time>' and '# command <name> config_hash <hex>'):\n"
    "  map-check  map_check.csv     check,alpha,grid_n,count,failures,worst,status\n"
    "  limit      limit.csv         profile,ell,q1_re..q4_im,m11_re..m22_im,mu_re,mu_im,mu_abs,trace_minus_mu,det_abs,"
    "richardson_err\n"
    "  eigen      eigen.csv         alpha,eps,lambda_re,lambda_im,lambda_abs,ratio,mu_abs,gap,above_threshold,residual,"
    "iters,converged,error\n"
    "  evolve     evolve.csv        alpha,eps,shear,gamma,threshold,initial_divergence,error\n"
    "             evolve_trace.csv  alpha,eps,period,log_norm\n"
    "  converge   converge.csv      alpha,error,decreasing\n"
    "  norms      norms.csv         alpha,eps,check,lhs,rhs,margin,witness\n"
    "  flux       flux.csv          alpha,psi_seed,tail_slope,underflow,error\n"
    "             flux_series.csv   alpha,k,a_k,log_pairing\n"
    "Exit codes: 0 ok, 1 check failure, 2 configuration error.\n"
    "DYNAMO_OUT_DIR overrides the configured output directory; --out overrides both.";

struct Overrides {
  std::map<std::string, std::vector<std::string>> raw;
  std::string config_file;
  std::string out;
  bool plots = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config_file, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("-o,--out", o.out, "output directory");
  sub->add_flag("--plots", o.plots, "also write SVG plots");
  const std::vector<std::pair<std::string, std::string>> keys{
      {"alpha", "even shear strengths"},     {"eps", "diffusivities"},
      {"grid-n", "even grid size"},          {"moll-scale", "mollifier scales"},
      {"band", "profile Fourier band"},      {"shear", "quadrant | zero"},
      {"sigma", "norm exponent sigma"},      {"beta", "norm exponent beta"},
      {"q", "test-function regularity q"},   {"n-leaves", "sampled leaves"},
      {"n-testfns", "test functions per leaf"}, {"delta-grid", "unstable-norm deltas"},
      {"seeds", "RNG seeds"},                {"periods", "evolution periods"},
      {"flux-steps", "flux iterations"},     {"tol", "solver tolerance"},
      {"max-iter", "solver iteration cap"},  {"c-cal", "calibrated LY constant"},
  };
  for (const auto& [k, help] : keys) {
    std::string key = k;
    std::replace(key.begin(), key.end(), '-', '_');
    sub->add_option("--" + k, o.raw[key], help)->expected(1, -1);
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Numerical experiments for the pulsed stretch-fold-shear dynamo"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, int (*)(const ExperimentConfig&)>> commands{
      {"map-check", cmd_map_check}, {"limit", cmd_limit},   {"eigen", cmd_eigen}, {"evolve", cmd_evolve},
      {"converge", cmd_converge},   {"norms", cmd_norms},   {"flux", cmd_flux},
  };
  const std::map<std::string, std::string> descr{
      {"map-check", "map invariants: determinants, grid bijection, matrix form, flow, cones, Jacobians"},
      {"limit", "quadrant integrals, limit matrix M and its eigenvalue per mollifier scale"},
      {"eigen", "leading eigenvalue of P_eps per (alpha, eps)"},
      {"evolve", "log-norm growth of the 3D pulsed evolution"},
      {"converge", "pairing error of L_alpha against the rank-1 limit"},
      {"norms", "sampled anisotropic norms, Lasota-Yorke and heat checks"},
      {"flux", "ideal flux pairing growth"},
  };
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name, descr.at(name));
    sub->footer(kSchemas);
    add_common(sub, o);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string chosen;
  for (const auto& [name, fn] : commands) {
    if (app.got_subcommand(name)) chosen = name;
  }
  try {
    ExperimentConfig cfg;
    if (!o.config_file.empty()) cli::apply(cfg, read_config_file(o.config_file));
    if (const char* env = std::getenv("DYNAMO_OUT_DIR"); env && *env) cfg.out_dir = env;
    KeyValues kv;
    for (const auto& [k, v] : o.raw) {
      if (v.empty()) continue;
      std::string joined;
      for (const auto& t : v) joined += (joined.empty() ? "" : ",") + t;
      kv[k] = joined;
    }
    cli::apply(cfg, kv);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.plots) cfg.plots = true;
    cfg.validate();
    for (const auto& [name, fn] : commands) {
      if (name == chosen) {
        const int rc = fn(cfg);
        std::cout << chosen << ": " << (rc == 0 ? "ok" : "check failure") << " (config_hash " << hex64(cfg.hash())
                  << ", out " << cfg.out_dir << ")\n";
        return rc;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << chosen << " failed: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace dynamo::cli
