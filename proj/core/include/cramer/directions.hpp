#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cramer {

/// Unit direction set on S^{n-1}. n = 1 gives {+1, -1}; n = 2 gives equally
/// spaced angles; n >= 3 uses normalized Gaussian points from a fixed seed.
std::vector<Eigen::VectorXd> sphere_directions(int n, std::size_t count,
                                               std::uint64_t seed = 0x5EEDD1A5ULL);

/// 128 for n <= 4, 512 above.
std::size_t default_direction_count(int n);

/// Rotates `from` toward the unit tangent `tangent` by `angle` radians.
Eigen::VectorXd geodesic(const Eigen::VectorXd& from, const Eigen::VectorXd& tangent,
                         double angle);

/// Orthonormal basis of the tangent space of S^{n-1} at the unit vector u.
std::vector<Eigen::VectorXd> tangent_basis(const Eigen::VectorXd& u);

}  // namespace cramer
