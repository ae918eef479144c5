#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crosslab/functionals.hpp"
#include "crosslab/report.hpp"

namespace crosslab {

/// Exit-code contract shared by the CLI and the acceptance suite:
/// 0 = all assertions passed, 1 = usage/IO error, 2 = inequality or identity
/// violated beyond tolerance, 3 = degenerate geometry invalidated a count.
enum ExitCode : int { kOk = 0, kUsage = 1, kViolation = 2, kDegenerate = 3 };

struct VerifyOutcome {
  std::vector<ReportRecord> records;
  int exit_code = kOk;
};

/// Sharp spherical inequality check for one density: e(w), Cr(w), the
/// theoretical bound, and (for thresholds) the equality z-score. Exits 2
/// when |z| > z_gate for a threshold density or the bound is violated.
VerifyOutcome verify_sphere(const std::string& density_spec, std::uint64_t samples,
                            std::uint64_t seed, int workers, double z_gate = 4.0);

VerifyOutcome verify_planar(const std::string& domain_spec, const std::string& density_spec,
                            std::uint64_t samples, std::uint64_t seed, int workers);

/// Flux representation vs MC, and the incidence identity, for threshold t.
VerifyOutcome verify_identities(double t, double quad_tol, int x_nodes, int theta_grid,
                                std::uint64_t samples, std::uint64_t seed, int workers,
                                double identity_tol = 1e-3);

VerifyOutcome verify_busemann(const std::string& density_spec, std::size_t grid);

VerifyOutcome verify_bathtub(int grid);

std::vector<SweepRow> sweep_t(double from, double to, int steps);

std::vector<SweepRow> sweep_n(std::uint64_t n_from, std::uint64_t n_to, int steps, double t,
                              std::uint64_t seed, int workers);

std::vector<SweepRow> sweep_r(const std::string& domain_spec, double r_from, double r_to,
                              int steps, std::uint64_t samples, std::uint64_t seed, int workers);

std::vector<SweepRow> sweep_delta(std::uint64_t n, double t, double delta_from, double delta_to,
                                  int steps, std::uint64_t samples, std::uint64_t seed,
                                  int workers);

}  // namespace crosslab
