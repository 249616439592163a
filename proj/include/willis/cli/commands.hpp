#pragma once

#include <string>
#include <vector>

#include "willis/cli/config.hpp"
#include "willis/cli/table.hpp"

namespace willis::cli {

inline constexpr const char* kToolVersion = "willis-pwe 1.0.0";

struct RunOptions {
  int threads = 1;
};

// Columns: k (k_1..k_d for d > 1), omega_1..omega_n, status_1..status_n.
ResultTable cmd_bands(const JobConfig& config, const RunOptions& options = {});

// Scalar columns: omega, k.., status, rcond, mu_jl, rho, S_j, Z_eff.
// Elastic columns: omega, k_1..k_3, status, rcond, C_IJ (Voigt 11 22 33 23 13 12,
// 6x6 row-major), rho_ij (row-major), S_Ik (Voigt row I, column k), Z_ik.
ResultTable cmd_homogenize(const JobConfig& config, const RunOptions& options = {});

// Per requested branch and k: branch, k.., omega, status, mu.., rho, S..
ResultTable cmd_branch_params(const JobConfig& config, const RunOptions& options = {});

// PWE next to MM for each y0 along the requested branches (1D scalar only).
ResultTable cmd_compare_mm(const JobConfig& config, const RunOptions& options = {});

// Full command line; returns the process exit code (0 ok, 2 config, 3 numerical).
int run_cli(int argc, char** argv);

}  // namespace willis::cli
