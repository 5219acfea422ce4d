#pragma once

// Test-only state generators and brute-force oracles. Nothing here calls
// into the library's pair kernels.

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "darwin/particles.hpp"

namespace darwin::test {

/// Dimensionless test units: q ~ 1, m ~ 1, c = 10, positions in [-1, 1]^3,
/// |v| ~ 1, so v/c ~ 0.1 and the Ampere terms are a few percent of K.
inline constexpr double kTestC = 10.0;

inline InteractionParams test_params(double softening = 0.0) {
  InteractionParams p;
  p.c = kTestC;
  p.softening = softening;
  return p;
}

inline SystemState random_state(std::uint64_t seed, std::size_t n, double min_sep = 0.3,
                                double speed = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.5, 2.0);
  std::uniform_real_distribution<double> charge(0.5, 1.5);
  SystemState s;
  while (s.particles.size() < n) {
    Particle p;
    p.id = static_cast<std::int64_t>(s.particles.size());
    p.position = Vec3(pos(gen), pos(gen), pos(gen));
    bool clear = true;
    for (const auto& q : s.particles) clear = clear && (q.position - p.position).norm() >= min_sep;
    if (!clear) continue;
    p.charge = (s.particles.size() % 2 == 0 ? 1.0 : -1.0) * charge(gen);
    p.mass = mass(gen);
    p.velocity = speed * Vec3(unit(gen), unit(gen), unit(gen)) / std::sqrt(3.0);
    s.particles.push_back(p);
  }
  return s;
}

inline double naive_coulomb(const SystemState& s, double eps) {
  double u = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b) continue;
      const auto& pa = s.particles[a];
      const auto& pb = s.particles[b];
      const double r = std::sqrt((pa.position - pb.position).squaredNorm() + eps * eps);
      u += 0.5 * pa.charge * pb.charge / r;
    }
  }
  return u;
}

inline double naive_kinetic(const SystemState& s, double eps, double c) {
  double k = 0.0;
  for (const auto& p : s.particles) k += 0.5 * p.mass * p.velocity.squaredNorm();
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      const auto& pa = s.particles[a];
      const auto& pb = s.particles[b];
      const Vec3 d = pa.position - pb.position;
      const double r = std::sqrt(d.squaredNorm() + eps * eps);
      const Vec3 n = d / r;
      k += pa.charge * pb.charge / (2.0 * c * c * r) *
           (pa.velocity.dot(pb.velocity) + n.dot(pa.velocity) * n.dot(pb.velocity));
    }
  }
  return k;
}

inline double naive_lagrangian(const SystemState& s, double eps, double c) {
  return naive_kinetic(s, eps, c) - naive_coulomb(s, eps);
}

/// Central differences of the naive Lagrangian with respect to every
/// position (which = 0) or velocity (which = 1) component.
inline Eigen::VectorXd fd_gradient(const SystemState& s, double eps, double c, int which,
                                   double h) {
  Eigen::VectorXd g(3 * static_cast<Eigen::Index>(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (int k = 0; k < 3; ++k) {
      SystemState plus = s, minus = s;
      if (which == 0) {
        plus.particles[a].position[k] += h;
        minus.particles[a].position[k] -= h;
      } else {
        plus.particles[a].velocity[k] += h;
        minus.particles[a].velocity[k] -= h;
      }
      g[3 * static_cast<Eigen::Index>(a) + k] =
          (naive_lagrangian(plus, eps, c) - naive_lagrangian(minus, eps, c)) / (2.0 * h);
    }
  }
  return g;
}

inline double rel_err(double got, double want) {
  const double scale = std::abs(want);
  return scale > 0.0 ? std::abs(got - want) / scale : std::abs(got);
}

inline double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  const double scale = want.norm();
  return scale > 0.0 ? (got - want).norm() / scale : (got - want).norm();
}

}  // namespace darwin::test
