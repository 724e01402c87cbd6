#include "cramer/directions.hpp"

#include <cmath>
#include <numbers>

#include "cramer/errors.hpp"
#include "cramer/rng.hpp"

namespace cramer {

std::vector<Eigen::VectorXd> sphere_directions(int n, std::size_t count,
                                               std::uint64_t seed) {
  if (n < 1) throw InputError("sphere_directions: dimension must be positive");
  std::vector<Eigen::VectorXd> out;
  if (n == 1) {
    out.push_back(Eigen::VectorXd::Constant(1, 1.0));
    out.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return out;
  }
  out.reserve(count);
  if (n == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / count;
      Eigen::VectorXd u(2);
      u << std::cos(angle), std::sin(angle);
      out.push_back(u);
    }
    return out;
  }
  RandomStream rng(seed, static_cast<std::uint64_t>(n));
  while (out.size() < count) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = rng.normal();
    const double norm = u.norm();
    if (norm < 1e-12) continue;
    out.push_back(u / norm);
  }
  return out;
}

std::size_t default_direction_count(int n) { return n <= 4 ? 128 : 512; }

Eigen::VectorXd geodesic(const Eigen::VectorXd& from, const Eigen::VectorXd& tangent,
                         double angle) {
  Eigen::VectorXd v = std::cos(angle) * from + std::sin(angle) * tangent;
  return v / v.norm();
}

std::vector<Eigen::VectorXd> tangent_basis(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  const Eigen::MatrixXd column = u;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(column);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(n - 1);
  for (int k = 1; k < n; ++k) basis.push_back(q.col(k));
  return basis;
}

}  // namespace cramer
