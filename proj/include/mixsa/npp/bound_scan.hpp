#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/mixture/grid.hpp"

namespace mixsa::npp {

/// Grid over which sup |dH_k/dpsi| is scanned for the normal
/// sufficient-statistic map with r replicates.
struct BoundScanConfig
{
    mixture::GridPtr grid;
    std::vector<Eigen::VectorXd> phis;  ///< points of the floored simplex
    std::vector<double> psis;           ///< variances inside the box
    std::vector<double> s_values;       ///< increasing sufficient-statistic values
    std::size_t r = 10;
    /// Central-difference step relative to psi.
    double relative_step = 1e-4;
};

struct BoundScanReport
{
    std::vector<double> s_values;
    /// sup over (phi, psi) of |dH_k/dpsi| at each s: rows k, columns s.
    Eigen::MatrixXd sup;
    std::vector<double> max_value;      ///< per k
    std::vector<double> argmax_s;       ///< per k
    std::vector<double> boundary_low;   ///< per k, at s_values.front()
    std::vector<double> boundary_high;  ///< per k, at s_values.back()
};

BoundScanReport np4_bound_scan(const BoundScanConfig& config);

/// Scan geometry used by the experiment runner and the acceptance suite:
/// s in [-s_max, s_max] step 0.05, psi log-spaced on [0.1, 10] (21 values),
/// phi = uniform, Bin(d-1, 1/2), each near-vertex of the floored simplex,
/// and 8 seeded random interior points.
BoundScanConfig default_scan_config(mixture::GridPtr grid, double floor, std::size_t r,
                                    double s_max);

/// u_kj(s) = theta_k^2 - theta_j^2 + 2 s (theta_j - theta_k), the term that
/// grows linearly in |s| inside the closed-form derivative.
double linear_term(double theta_k, double theta_j, double s);

}  // namespace mixsa::npp
