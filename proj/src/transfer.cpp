#include "mlsq/transfer.hpp"

#include <cmath>

namespace mlsq {

TransferMatrix TransferMatrix::point(double theta, double alpha) {
  if (theta == 0.0) throw Error("point matrix needs theta != 0");
  return {Complex(theta, 0.0), Complex(0.0, 0.0), Complex(alpha, 0.0), Complex(1.0 / theta, 0.0)};
}

Complex wavenumber(double energy, double potential) {
  // +0.0 imaginary part keeps sqrt on the upper branch for E < V
  return std::sqrt(Complex(energy - potential, 0.0));
}

TransferMatrix layer_matrix(double energy, double potential, double width) {
  if (!(width > 0.0)) throw NonPositiveWidth("layer width must be positive");
  const Complex q = wavenumber(energy, potential);
  const Complex x = q * width;       // q*l
  const Complex x2 = x * x;          // (q*l)^2 = (E-V)*l^2, real for real inputs

  TransferMatrix m;
  if (std::abs(x2) < 1e-8) {
    // cos and sinc by truncated series; cancellation-free at q -> 0
    const Complex c = 1.0 - x2 / 2.0 + x2 * x2 / 24.0 - x2 * x2 * x2 / 720.0;
    const Complex sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
    m.l11 = c;
    m.l12 = width * sinc;
    m.l21 = -(q * q) * width * sinc;
    m.l22 = c;
    return m;
  }
  const Complex c = std::cos(x);
  const Complex s = std::sin(x);
  m.l11 = c;
  m.l12 = s / q;
  m.l21 = -q * s;
  m.l22 = c;
  return m;
}

TransferMatrix full_matrix(std::span<const LayerValue> layers, double energy) {
  TransferMatrix acc = TransferMatrix::identity();
  for (const auto& layer : layers) {
    acc = layer_matrix(energy, layer.potential, layer.width) * acc;
  }
  return acc;
}

ScatteringAmplitudes scattering(const TransferMatrix& m, double k) {
  if (!(k > 0.0)) throw Error("scattering momentum must be positive");
  const Complex ik(0.0, k);
  const Complex denom = ik * (m.l11 + m.l22) + k * k * m.l12 - m.l21;
  if (std::abs(denom) < 1e-300) {
    throw SingularMatching("matching denominator vanished");
  }
  ScatteringAmplitudes out;
  out.t = 2.0 * ik / denom;
  out.r = (m.l21 + ik * (m.l22 - m.l11) + k * k * m.l12) / denom;
  return out;
}

double bound_state_residual(const TransferMatrix& m, double kappa) {
  const Complex v = m.l11 + m.l22 + kappa * m.l12 + m.l21 / kappa;
  return v.real();
}

std::vector<double> bound_states(const std::function<TransferMatrix(double)>& matrix_of_kappa,
                                 double kappa_lo, double kappa_hi,
                                 const BoundStateOptions& opts) {
  if (!(0.0 < kappa_lo && kappa_lo < kappa_hi)) {
    throw Error("bound state bracket needs 0 < kappa_lo < kappa_hi");
  }
  auto residual = [&](double kappa) {
    return bound_state_residual(matrix_of_kappa(kappa), kappa);
  };

  std::vector<double> roots;
  const int n = opts.scan_points;
  double prev_kappa = kappa_lo;
  double prev_val = residual(prev_kappa);
  for (int i = 1; i <= n; ++i) {
    const double kappa = kappa_lo + (kappa_hi - kappa_lo) * static_cast<double>(i) / n;
    const double val = residual(kappa);
    if (prev_val == 0.0) {
      roots.push_back(prev_kappa);
    } else if (val != 0.0 && std::signbit(val) != std::signbit(prev_val)) {
      double lo = prev_kappa, hi = kappa, flo = prev_val;
      while (hi - lo > opts.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_kappa = kappa;
    prev_val = val;
  }
  return roots;
}

std::vector<double> bound_states(std::span<const LayerValue> layers, double kappa_lo,
                                 double kappa_hi, const BoundStateOptions& opts) {
  std::vector<LayerValue> copy(layers.begin(), layers.end());
  return bound_states(
      [copy](double kappa) { return full_matrix(copy, -kappa * kappa); },
      kappa_lo, kappa_hi, opts);
}

}  // namespace mlsq
