#pragma once

#include <vector>

#include <Eigen/Dense>

namespace wulffkit {

// Deterministic low-discrepancy sample of S^n (n = 1, 2, 3): uniform angles
// on S^1, a Fibonacci lattice on S^2, and a Kronecker lattice pushed through
// the sin^2 polar CDF on S^3. Reproducible across runs by construction.
std::vector<Eigen::VectorXd> sphere_lattice(int n, int count);

} // namespace wulffkit
