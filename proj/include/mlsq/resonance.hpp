#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mlsq/model.hpp"
#include "mlsq/squeeze.hpp"

namespace mlsq {

// Resonance equations: the conditions on the limit parameters under which
// the divergent part of the lower-left matrix element cancels, leaving a
// non-zero tunneling amplitude through the squeezed structure.
//
// Construction: the divergent single terms q_m t_m and the dyad-chain
// corrections of the lower-left series are multiplied by l_j^(1/sigma) for a
// chosen measuring layer j, and every factor is replaced by its finite limit
// on the pencil that makes all divergent terms the same order. Each
// Gprime-layer factor contributes tau and 1/s^2 symbols, each G\G0 layer an
// eta, and each width ratio a chi. Chains containing a G-set middle layer
// vanish after the multiplication; that step is only valid for sigma = 1 or
// sigma >= 2, which is what the validity interval of an equation records.

struct Factor {
  enum class Kind { Tau, InvS2, Chi, Eta };
  Kind kind = Kind::Tau;
  std::size_t i = 0;
  std::size_t j = 0;   // second index for Chi/Eta
  Ratio sigma = Ratio(1);

  bool operator==(const Factor& o) const {
    return kind == o.kind && i == o.i && j == o.j && sigma == o.sigma;
  }
  std::string str() const;
};

struct Monomial {
  double sign = 1.0;
  std::vector<Factor> factors;  // kept in canonical order

  std::string str() const;
};

struct PencilTag {
  enum class Kind { GammaPrime, GammaSigma, GammaVPrime, GammaVSigma };
  Kind kind = Kind::GammaPrime;
  std::size_t i = 0;
  std::size_t j = 0;
  Ratio sigma = Ratio(1);

  bool operator==(const PencilTag& o) const {
    return kind == o.kind && i == o.i && j == o.j && sigma == o.sigma;
  }
  std::string str() const;
};

struct ResonanceEquation {
  enum class SigmaValidity { One, OpenOneToInf, TwoToInf };

  std::vector<Monomial> left;    // measured single terms
  std::vector<Monomial> right;   // chain corrections
  Ratio sigma = Ratio(1);
  std::size_t multiplier = 0;
  SigmaValidity validity = SigmaValidity::One;
  std::vector<PencilTag> paths;
  std::string source;

  std::string str() const;
};

// Assembles the resonance equation for the given strength classes, sigma and
// measuring layer. Throws InadmissibleConfiguration when no path makes all
// divergent terms the same order (the violated rule is spelled out).
ResonanceEquation build_equation(const std::vector<StrengthClass>& classes, const Ratio& sigma,
                                 std::size_t multiplier);

// Left minus right over concrete limit parameters; real-valued.
double residual(const ResonanceEquation& eq, const LimitParameters& params);

// The squeezing path on which the equation's pencil requirements hold for a
// power-law structure: unit exponents for the linear cluster, sigma_m for
// adjoint layers, sigma for the measuring layer.
PathSpec canonical_path(const StructureSpec& structure, const Ratio& sigma,
                        std::size_t multiplier);

// A structure template with a scalar degree of freedom: the strengths of the
// marked Gprime layers scale as g = sign(g0) * x^2 * |g0|, so their limit
// parameters are s_m = x * sqrt(|g0|) with signs (well/barrier) preserved.
// All other layers stay fixed.
struct ResonanceProblem {
  StructureSpec structure;
  PathSpec path;
  Ratio sigma = Ratio(1);
  std::size_t multiplier = 0;
  std::vector<std::size_t> free_layers;

  StructureSpec structure_at(double x) const;
  std::vector<StrengthClass> classes() const;

  // Problem on the canonical path for the template's classes.
  static ResonanceProblem on_canonical_path(StructureSpec structure, const Ratio& sigma,
                                            std::size_t multiplier,
                                            std::vector<std::size_t> free_layers);
};

struct SolveOptions {
  int scan_points = 1024;
  double tolerance = 1e-12;
  double pole_magnitude = 1e6;  // sign change with both flanks above this is a tan pole
  std::size_t max_roots = 64;
};

// All simple sign-change roots of the residual as a function of the free
// strength scale, skipping tangent poles.
std::vector<double> solve(const ResonanceProblem& problem, const ResonanceEquation& eq,
                          double lo, double hi, const SolveOptions& opts = {});

// Root sets of the sigma = 1 equation family for every admissible internal
// measuring layer; the sets must coincide, the report records how closely.
struct EquivalenceReport {
  std::vector<std::size_t> multipliers;
  std::vector<std::vector<double>> roots;
  bool equivalent = false;
  double max_deviation = 0.0;
};

EquivalenceReport verify_equivalence(const ResonanceProblem& problem, double lo, double hi,
                                     const SolveOptions& opts = {});

// Numerical confirmation that a resonance root produces a transparent point
// interaction: the squeezed structure classifies Resonant at the root and
// DirichletSeparated at root +- offset, with the finite-eps transmission
// dying off the root.
struct CrossValidation {
  double root = 0.0;
  PointInteractionClass at_root;
  PointInteractionClass below;
  PointInteractionClass above;
  double transmission_at_root = 0.0;    // |t|^2 at the smallest schedule eps
  double transmission_off_root = 0.0;   // max of the two offsets
  bool pass = false;
};

CrossValidation cross_validate(const ResonanceProblem& problem, double root, double energy,
                               double offset = 0.1,
                               std::span<const double> schedule = {});

}  // namespace mlsq
