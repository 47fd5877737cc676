#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlsq/model.hpp"
#include "mlsq/transfer.hpp"

namespace mlsq {

// Realized layer values at finite eps: l_i = w_i eps^(e_i), V_i = g_i l_i^(-p_i).
std::vector<LayerValue> realize(const StructureSpec& structure, const PathSpec& path,
                                double eps);

// Default schedule: 13 logarithmically spaced points from 1e-1 down to 1e-6.
std::vector<double> default_schedule(double eps_hi = 1e-1, double eps_lo = 1e-6,
                                     std::size_t count = 13);

// What one matrix entry does along the squeezing schedule. The leading power
// of eps is fitted by log-log regression; entries whose fitted slope is below
// -0.1 with a tight fit are divergent, slopes within [-0.1, 0.1] mark a
// finite nonzero limit, slopes above +0.1 a limit of zero. The gap between
// those bands is reported as ambiguous rather than guessed.
enum class EntryState { Bounded, Vanishing, Divergent, Ambiguous };

struct EntryEstimate {
  EntryState state = EntryState::Ambiguous;
  Complex limit{0.0, 0.0};   // meaningful for Bounded/Vanishing
  double error = 0.0;        // Richardson error estimate
  double slope = 0.0;        // fitted d log|f| / d log eps
  double order = 0.0;        // fitted convergence order of f - limit (Bounded)
  double r_squared = 0.0;
};

struct LimitMatrixEstimate {
  std::array<EntryEstimate, 4> entries;  // l11, l12, l21, l22
  std::vector<double> eps_used;
  std::vector<TransferMatrix> trace;     // matrix at each eps actually evaluated
  bool hit_overflow_floor = false;       // schedule cut at |entry| > 1e12

  const EntryEstimate& l11() const { return entries[0]; }
  const EntryEstimate& l12() const { return entries[1]; }
  const EntryEstimate& l21() const { return entries[2]; }
  const EntryEstimate& l22() const { return entries[3]; }
};

// Evaluates the full matrix over a strictly decreasing eps schedule (length
// >= 4) and extrapolates each entry to eps -> 0.
LimitMatrixEstimate limit_matrix(const StructureSpec& structure, const PathSpec& path,
                                 double energy, std::span<const double> schedule);

// The point interaction realized by the squeezed structure.
struct PointInteractionClass {
  enum class Kind { Trivial, Delta, DirichletSeparated, Resonant };

  Kind kind = Kind::Trivial;
  double alpha = 0.0;  // Delta / Resonant lower-left limit
  double theta = 1.0;  // Resonant diagonal limit
  std::string name() const;
};

PointInteractionClass classify_limit(const LimitMatrixEstimate& estimate);

// Tagged value of a pencil limit: zero, a finite nonzero number, or infinite
// (the path leaves the pencil on the divergent side).
struct LimitValue {
  enum class Tag { Zero, Finite, Infinite };
  Tag tag = Tag::Zero;
  double value = 0.0;

  static LimitValue zero() { return {Tag::Zero, 0.0}; }
  static LimitValue finite(double v) { return {Tag::Finite, v}; }
  static LimitValue infinite() { return {Tag::Infinite, 0.0}; }

  double require(const std::string& symbol) const {
    if (tag == Tag::Infinite) {
      throw UnboundSymbol(symbol + " diverges on this path");
    }
    return tag == Tag::Zero ? 0.0 : value;
  }
};

// Closed-form limit parameters of a structure/path pair evaluated from
// (g, p, w, e, sigma):
//   s_i   = lim q_i l_i            (Gprime layers; imaginary for barriers)
//   tau_i = s_i tan s_i            (real in both cases)
//   chi^sigma_ij = lim l_i^(1/sigma) / l_j
//   eta^sigma_ij = lim q_i^2 l_i l_j^(1/sigma)   (zero for G0 layers)
// plus the measured single-term limits A_ij (sigma = 1) and A^sigma_ij.
class LimitParameters {
 public:
  LimitParameters(StructureSpec structure, PathSpec path, Ratio sigma);

  std::size_t size() const { return structure_.size(); }
  const Ratio& sigma() const { return sigma_; }
  const StrengthClass& strength_class(std::size_t i) const;

  std::complex<double> s(std::size_t i) const;      // Gprime only
  double tau(std::size_t i) const;                  // Gprime only
  double tau_over_s2(std::size_t i) const;          // 1 for G-set layers

  // chi with explicit exponent: lim l_i^(1/sg) / l_j
  LimitValue chi(std::size_t i, std::size_t j, const Ratio& sg) const;
  LimitValue chi(std::size_t i, std::size_t j) const { return chi(i, j, Ratio(1)); }

  // eta with explicit exponent: lim q_i^2 l_i l_j^(1/sg); i == j allowed for sg > 1
  LimitValue eta(std::size_t i, std::size_t j, const Ratio& sg) const;
  LimitValue eta(std::size_t i, std::size_t j) const { return eta(i, j, Ratio(1)); }

  // Single-term limits of q_i t_i measured by l_j (sigma = 1) or l_j^(1/sigma).
  LimitValue a_single(std::size_t i, std::size_t j) const;
  LimitValue a_single_sigma(std::size_t i, std::size_t j) const;

 private:
  void check_index(std::size_t i) const;

  StructureSpec structure_;
  PathSpec path_;
  Ratio sigma_;
  std::vector<StrengthClass> classes_;
};

LimitParameters limit_parameters(const StructureSpec& structure, const PathSpec& path,
                                 const Ratio& sigma);

}  // namespace mlsq
