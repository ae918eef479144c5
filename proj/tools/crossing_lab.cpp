// crossing_lab: verification and experimentation CLI for crossing numbers of
// geodesic drawings on the sphere and straight-line drawings in convex
// planar domains.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crosslab/busemann.hpp"
#include "crosslab/density.hpp"
#include "crosslab/drawing.hpp"
#include "crosslab/experiments.hpp"
#include "crosslab/functionals.hpp"
#include "crosslab/report.hpp"

using namespace crosslab;

namespace {

struct CommonFlags {
  std::uint64_t seed = 42;
  std::uint64_t samples = 1000000;
  int workers = 0;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--samples", f.samples, "Monte-Carlo sample count");
  cmd->add_option("--workers", f.workers, "worker threads (0 = auto, env CROSSING_LAB_WORKERS)");
  cmd->add_option("--format", f.format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", f.out, "output path (default: stdout)");
}

int emit(const CommonFlags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text << "\n";
    return kOk;
  }
  std::ofstream os(f.out);
  if (!os) {
    std::cerr << "cannot open output file: " << f.out << "\n";
    return kUsage;
  }
  os << text << "\n";
  return kOk;
}

int emit_records(const CommonFlags& f, const std::vector<ReportRecord>& records) {
  return emit(f, f.format == "csv" ? records_to_csv(records) : records_to_json(records));
}

CrossingReport run_engine(const Drawing& d, const std::string& engine, int workers) {
  if (engine == "brute") return count_crossings_brute(d, workers);
  if (engine == "grid") return count_crossings_grid(d, workers);
  throw CLI::ValidationError("--engine", "unknown engine " + engine);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crossing-number verification toolkit"};
  app.require_subcommand(1);

  // ---- verify-sphere -------------------------------------------------------
  CommonFlags vs_flags;
  vs_flags.samples = 10000000;
  std::string vs_density = "threshold:1.5707963267948966";
  double vs_zgate = 4.0;
  CLI::App* vs = app.add_subcommand("verify-sphere", "sharp spherical crossing inequality");
  add_common(vs, vs_flags);
  vs->add_option("--density", vs_density,
                 "density spec: threshold:t|band:t1,t2|const:p|smoothed:file,delta");
  vs->add_option("--tol-z", vs_zgate, "z-score gate for threshold equality");

  // ---- verify-planar -------------------------------------------------------
  CommonFlags vp_flags;
  vp_flags.samples = 10000000;
  std::string vp_domain = "poly:0,0;1,0;1,1;0,1";
  std::string vp_density = "const:1";
  CLI::App* vp = app.add_subcommand("verify-planar", "planar crossing inequality");
  add_common(vp, vp_flags);
  vp->add_option("--domain", vp_domain, "domain spec: disk:cx,cy,r|poly:x1,y1;...");
  vp->add_option("--density", vp_density, "density spec");

  // ---- verify-identities ---------------------------------------------------
  CommonFlags vi_flags;
  vi_flags.samples = 10000000;
  double vi_t = 1.5707963267948966;
  double vi_quad_tol = 1e-6;
  int vi_grid = 64, vi_xnodes = 32;
  double vi_identity_tol = 1e-3;
  CLI::App* vi =
      app.add_subcommand("verify-identities", "flux representation and incidence identity");
  add_common(vi, vi_flags);
  vi->add_option("--t", vi_t, "threshold radius (radians)");
  vi->add_option("--tol-quad", vi_quad_tol, "flux quadrature relative tolerance");
  vi->add_option("--grid", vi_grid, "theta grid size (even, >= 64)");
  vi->add_option("--x-nodes", vi_xnodes, "Fibonacci nodes for the outer integral");
  vi->add_option("--tol-identity", vi_identity_tol, "incidence identity gap tolerance");

  // ---- verify-busemann -----------------------------------------------------
  CommonFlags vb_flags;
  std::string vb_density = "const:1";
  std::size_t vb_grid = 2048;
  CLI::App* vb = app.add_subcommand("verify-busemann", "circle/line Busemann inequality");
  add_common(vb, vb_flags);
  vb->add_option("--density", vb_density,
                 "density spec: const:c|trig:a0,a1,b1,...|ellipse:p,q|grid:file");
  vb->add_option("--grid", vb_grid, "circle grid size (even)");

  // ---- verify-bathtub ------------------------------------------------------
  CommonFlags vt_flags;
  int vt_grid = 10000;
  CLI::App* vt =
      app.add_subcommand("verify-bathtub", "bathtub profile and convexity diagnostics");
  add_common(vt, vt_flags);
  vt->add_option("--grid", vt_grid, "diagnostic grid size");

  // ---- drawing -------------------------------------------------------------
  CLI::App* dr = app.add_subcommand("drawing", "generate, count, inspect drawings");
  dr->require_subcommand(1);

  CommonFlags dg_flags;
  std::string dg_ambient = "sphere";
  std::uint64_t dg_n = 500;
  double dg_t = 1.0471975511965976;
  std::string dg_sampler = "fibonacci";
  CLI::App* dg = dr->add_subcommand("generate", "generate a threshold drawing");
  add_common(dg, dg_flags);
  dg->add_option("--ambient", dg_ambient, "sphere or a domain spec (disk:...|poly:...)");
  dg->add_option("--n", dg_n, "vertex count")->required();
  dg->add_option("--t", dg_t, "threshold (radians on the sphere, length in the plane)");
  dg->add_option("--sampler", dg_sampler, "sphere: fibonacci|random; plane: random|grid");

  CommonFlags dc_flags;
  std::string dc_in, dc_engine = "grid";
  double dc_jitter = 0.0;
  CLI::App* dc = dr->add_subcommand("count", "count crossings exactly");
  add_common(dc, dc_flags);
  dc->add_option("--in", dc_in, "drawing JSON file")->required();
  dc->add_option("--engine", dc_engine, "brute|grid");
  dc->add_option("--jitter", dc_jitter,
                 "re-run with symmetric vertex jitter of this size (use on degenerate reports)");

  CommonFlags ds_flags;
  std::string ds_in;
  CLI::App* ds = dr->add_subcommand("stats", "edge density statistics");
  add_common(ds, ds_flags);
  ds->add_option("--in", ds_in, "drawing JSON file")->required();

  // ---- sweep ---------------------------------------------------------------
  CommonFlags sw_flags;
  sw_flags.format = "csv";
  std::string sw_var = "t";
  double sw_from = 0.05, sw_to = 0.5;
  int sw_steps = 10;
  double sw_t = 1.0471975511965976;
  std::uint64_t sw_n = 300;
  std::string sw_domain = "poly:0,0;1,0;1,1;0,1";
  CLI::App* sw = app.add_subcommand("sweep", "parameter sweeps with closed-form targets");
  add_common(sw, sw_flags);
  sw->add_option("--variable", sw_var, "t|n|r|delta")
      ->check(CLI::IsMember({"t", "n", "r", "delta"}));
  sw->add_option("--from", sw_from, "sweep start");
  sw->add_option("--to", sw_to, "sweep end");
  sw->add_option("--steps", sw_steps, "number of sweep points");
  sw->add_option("--t", sw_t, "threshold for n- and delta-sweeps");
  sw->add_option("--n", sw_n, "vertex count for delta-sweeps");
  sw->add_option("--domain", sw_domain, "domain for r-sweeps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (vs->parsed()) {
      const VerifyOutcome r =
          verify_sphere(vs_density, vs_flags.samples, vs_flags.seed, vs_flags.workers, vs_zgate);
      const int io = emit_records(vs_flags, r.records);
      return io != kOk ? io : r.exit_code;
    }
    if (vp->parsed()) {
      const VerifyOutcome r =
          verify_planar(vp_domain, vp_density, vp_flags.samples, vp_flags.seed, vp_flags.workers);
      const int io = emit_records(vp_flags, r.records);
      return io != kOk ? io : r.exit_code;
    }
    if (vi->parsed()) {
      const VerifyOutcome r =
          verify_identities(vi_t, vi_quad_tol, vi_xnodes, vi_grid, vi_flags.samples, vi_flags.seed,
                            vi_flags.workers, vi_identity_tol);
      const int io = emit_records(vi_flags, r.records);
      return io != kOk ? io : r.exit_code;
    }
    if (vb->parsed()) {
      const VerifyOutcome r = verify_busemann(vb_density, vb_grid);
      const int io = emit_records(vb_flags, r.records);
      return io != kOk ? io : r.exit_code;
    }
    if (vt->parsed()) {
      const VerifyOutcome r = verify_bathtub(vt_grid);
      const int io = emit_records(vt_flags, r.records);
      return io != kOk ? io : r.exit_code;
    }
    if (dg->parsed()) {
      Drawing d;
      if (dg_ambient == "sphere") {
        const SphereSampler sampler =
            dg_sampler == "random" ? SphereSampler::Random : SphereSampler::Fibonacci;
        d = generate_sphere_threshold(dg_n, dg_t, sampler, dg_flags.seed);
      } else {
        const ConvexDomain dom = parse_domain(dg_ambient);
        const PlanarSampler sampler =
            dg_sampler == "grid" ? PlanarSampler::PerturbedGrid : PlanarSampler::Random;
        d = generate_planar_threshold(dg_n, dg_t, dom, dg_flags.seed, sampler);
      }
      if (dg_flags.out.empty()) {
        std::cout << drawing_to_json_text(d) << "\n";
      } else {
        save_drawing(d, dg_flags.out);
        const DensityStats st = density_stats(d);
        std::cerr << "wrote " << dg_flags.out << " (n=" << st.n << ", m=" << st.m
                  << ", ordered density=" << st.ordered_density << ")\n";
      }
      return kOk;
    }
    if (dc->parsed()) {
      Drawing d = load_drawing(dc_in);
      if (dc_jitter > 0.0) d = jittered(d, dc_jitter, dc_flags.seed);
      const CrossingReport rep = run_engine(d, dc_engine, dc_flags.workers);
      const double n = static_cast<double>(d.n());
      ReportRecord rec;
      rec.quantity = "crossings[" + dc_in + "," + dc_engine + "]";
      rec.value = static_cast<double>(rep.crossings);
      rec.samples = rep.pairs_tested;
      rec.seed = dc_flags.seed;
      rec.gap = static_cast<double>(rep.crossings) / (n * n * n * n);  // cr / n^4
      rec.tolerances = nlohmann::json{{"adjacent_skipped", rep.adjacent_skipped},
                                      {"degenerate_pairs", rep.degenerate_pairs},
                                      {"jitter", dc_jitter}};
      rec.wall_time_ms = rep.wall_time_ms;
      const int io = emit_records(dc_flags, {rec});
      if (io != kOk) return io;
      if (!rep.valid()) {
        std::cerr << "degenerate pairs invalidated the count; re-run with --jitter 1e-9\n";
        return kDegenerate;
      }
      return kOk;
    }
    if (ds->parsed()) {
      const Drawing d = load_drawing(ds_in);
      const DensityStats st = density_stats(d);
      ReportRecord rec;
      rec.quantity = "density_stats[" + ds_in + "]";
      rec.value = st.ordered_density;
      rec.samples = st.m;
      rec.gap = st.half_density;
      rec.tolerances = nlohmann::json{{"n", st.n}, {"m", st.m}};
      return emit_records(ds_flags, {rec});
    }
    if (sw->parsed()) {
      std::vector<SweepRow> rows;
      if (sw_var == "t") {
        rows = sweep_t(sw_from, sw_to, sw_steps);
      } else if (sw_var == "n") {
        rows = sweep_n(static_cast<std::uint64_t>(sw_from), static_cast<std::uint64_t>(sw_to),
                       sw_steps, sw_t, sw_flags.seed, sw_flags.workers);
      } else if (sw_var == "r") {
        rows = sweep_r(sw_domain, sw_from, sw_to, sw_steps, sw_flags.samples, sw_flags.seed,
                       sw_flags.workers);
      } else {
        rows = sweep_delta(sw_n, sw_t, sw_from, sw_to, sw_steps, sw_flags.samples, sw_flags.seed,
                           sw_flags.workers);
      }
      if (sw_flags.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const SweepRow& r : rows)
          arr.push_back({{"variable", r.variable},
                         {"value", r.value},
                         {"target", r.target},
                         {"gap", r.gap},
                         {"std_error", r.std_error},
                         {"samples", r.samples},
                         {"seed", r.seed}});
        return emit(sw_flags, arr.dump(2));
      }
      return emit(sw_flags, sweep_to_csv(rows));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
