#include "darwin/ensemble.hpp"

#include <cmath>
#include <string>

#include "darwin/errors.hpp"

namespace darwin {

Vec3 EnsembleRng::in_unit_ball() {
  while (true) {
    const Vec3 v(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    if (v.squaredNorm() <= 1.0) return v;
  }
}

void NeutralPlasmaSpec::validate() const {
  if (count == 0 || count % 2 != 0) {
    throw ValidationError("ensemble.count must be a positive even number");
  }
  if (!(charge > 0.0)) throw ValidationError("ensemble.charge must be > 0");
  if (!(mass > 0.0)) throw ValidationError("ensemble.mass must be > 0");
  if (mass_negative < 0.0) throw ValidationError("ensemble.mass_negative must be >= 0");
  if (!(box > 0.0)) throw ValidationError("ensemble.box must be > 0");
  if (!(min_separation >= 0.0) || min_separation >= box) {
    throw ValidationError("ensemble.min_separation must lie in [0, box)");
  }
  if (!(max_speed >= 0.0)) throw ValidationError("ensemble.max_speed must be >= 0");
}

void generate_neutral_plasma(const NeutralPlasmaSpec& spec, EnsembleRng& rng,
                             std::int64_t first_id, std::vector<Particle>& out) {
  spec.validate();
  constexpr int kMaxAttempts = 100000;
  const std::size_t begin = out.size();
  const double half = 0.5 * spec.box;
  for (std::size_t n = 0; n < spec.count; ++n) {
    Particle p;
    p.id = first_id + static_cast<std::int64_t>(n);
    const bool positive = n % 2 == 0;
    p.charge = positive ? spec.charge : -spec.charge;
    p.mass = (!positive && spec.mass_negative > 0.0) ? spec.mass_negative : spec.mass;
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxAttempts) {
        throw ValidationError("ensemble: could not place particle " + std::to_string(n) +
                              " at the requested minimum separation");
      }
      p.position = spec.center + Vec3(rng.uniform(-half, half), rng.uniform(-half, half),
                                      rng.uniform(-half, half));
      bool clear = true;
      for (std::size_t m = begin; m < out.size() && clear; ++m) {
        clear = (out[m].position - p.position).norm() >= spec.min_separation;
      }
      if (clear) break;
    }
    p.velocity = spec.max_speed * rng.in_unit_ball();
    out.push_back(p);
  }
}

}  // namespace darwin
