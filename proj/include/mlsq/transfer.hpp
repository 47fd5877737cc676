#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mlsq/errors.hpp"

namespace mlsq {

using Complex = std::complex<double>;

// 2x2 transmission matrix connecting (psi, psi') across a region. Unit
// determinant for any stack of real constant-potential layers.
struct TransferMatrix {
  Complex l11{1.0, 0.0};
  Complex l12{0.0, 0.0};
  Complex l21{0.0, 0.0};
  Complex l22{1.0, 0.0};

  Complex det() const { return l11 * l22 - l12 * l21; }

  TransferMatrix operator*(const TransferMatrix& rhs) const {
    return {l11 * rhs.l11 + l12 * rhs.l21, l11 * rhs.l12 + l12 * rhs.l22,
            l21 * rhs.l11 + l22 * rhs.l21, l21 * rhs.l12 + l22 * rhs.l22};
  }

  static TransferMatrix identity() { return {}; }

  // Point-interaction connection matrix diag(theta, 1/theta) with lower-left
  // entry alpha; theta = 1 gives the delta matrix.
  static TransferMatrix point(double theta, double alpha);
};

// One (V, l) slab realized at finite width.
struct LayerValue {
  double potential = 0.0;
  double width = 0.0;
};

// sqrt(E - V) on the branch with non-negative imaginary part; real and
// non-negative when E >= V.
Complex wavenumber(double energy, double potential);

// Single-layer matrix [[cos ql, sin(ql)/q], [-q sin ql, cos ql]]. Near
// q^2 l^2 = 0 the entries continue analytically (series for cos and sinc);
// the switch threshold is |q^2 l^2| < 1e-8.
TransferMatrix layer_matrix(double energy, double potential, double width);

// Ordered product over the whole stack, last layer leftmost.
TransferMatrix full_matrix(std::span<const LayerValue> layers, double energy);

struct ScatteringAmplitudes {
  Complex t;
  Complex r;
  double transmission() const { return std::norm(t); }
  double reflection() const { return std::norm(r); }
};

// Plane-wave matching across Lambda for incidence from the left at momentum
// k > 0 (time factor e^{-iEt}). |t|^2 + |r|^2 = 1 for real-entried Lambda.
ScatteringAmplitudes scattering(const TransferMatrix& m, double k);

// Bound-state condition in terms of the matrix elements at E = -kappa^2:
//   l11 + l22 + kappa*l12 + l21/kappa = 0.
double bound_state_residual(const TransferMatrix& m, double kappa);

struct BoundStateOptions {
  int scan_points = 512;
  double tolerance = 1e-10;
};

// All simple sign-change roots of the residual in (kappa_lo, kappa_hi),
// refined by bisection. Empty when the structure binds nothing.
std::vector<double> bound_states(const std::function<TransferMatrix(double)>& matrix_of_kappa,
                                 double kappa_lo, double kappa_hi,
                                 const BoundStateOptions& opts = {});

// Convenience: matrix of a realized stack evaluated at E = -kappa^2.
std::vector<double> bound_states(std::span<const LayerValue> layers, double kappa_lo,
                                 double kappa_hi, const BoundStateOptions& opts = {});

}  // namespace mlsq
