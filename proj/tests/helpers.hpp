#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mlsq/model.hpp"
#include "mlsq/transfer.hpp"

namespace mlsq::test {

inline StructureSpec structure(std::initializer_list<Layer> layers) {
  StructureSpec s;
  s.layers = layers;
  return s;
}

inline PathSpec path(std::initializer_list<Ratio> exponents) {
  PathSpec p;
  p.exponents = exponents;
  return p;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_err(const Complex& a, const Complex& b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Random stacks that keep every tangent representable: draws are rejected
// while any |cos(q l)| or |q| is small.
inline std::vector<LayerValue> random_stack(std::mt19937& rng, std::size_t n, double energy,
                                            double cos_floor = 1e-3, double q_floor = 1e-3) {
  std::uniform_real_distribution<double> pot(-10.0, 10.0);
  std::uniform_real_distribution<double> wid(0.05, 1.5);
  std::vector<LayerValue> out(n);
  for (auto& lv : out) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      lv.potential = pot(rng);
      lv.width = wid(rng);
      const Complex q = wavenumber(energy, lv.potential);
      if (std::abs(q) < q_floor) continue;
      if (std::abs(std::cos(q * lv.width)) < cos_floor) continue;
      break;
    }
  }
  return out;
}

}  // namespace mlsq::test
