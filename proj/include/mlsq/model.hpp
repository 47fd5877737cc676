#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlsq/errors.hpp"
#include "mlsq/rational.hpp"

namespace mlsq {

// A homogeneous layer whose potential strength follows the power law
// V(l) = g * l^(-p), with width scale w. g = 0 is a free-space layer.
struct Layer {
  double g = 0.0;
  Ratio p = Ratio(0);
  double w = 1.0;

  void validate() const;
};

struct StructureSpec {
  std::vector<Layer> layers;

  std::size_t size() const { return layers.size(); }
  void validate() const;
};

// Squeezing path l_i(eps) = w_i * eps^(e_i); every width must shrink.
struct PathSpec {
  std::vector<Ratio> exponents;

  std::size_t size() const { return exponents.size(); }
  void validate() const;
};

// Strength classification by the limits of V*l, |V|^(1/2)*l and
// |V|*l^(1+1/sigma). For the power-law family the class is decided by the
// exponent p alone:
//   p <= 1          -> G0 (delta-like), alpha = g at p = 1, else 0
//   1 < p < 2       -> Gsigma with sigma = 1/(p-1), c = |g|
//   p = 2           -> Gprime, |s| = sqrt(|g|)
//   p > 2           -> rejected (trigonometric arguments diverge)
// GminusG0 marks generic members of the G\G0 gap; the power-law classifier
// always produces the sharper Gsigma tag instead.
struct StrengthClass {
  enum class Kind { G0, GminusG0, Gsigma, Gprime };

  Kind kind = Kind::G0;
  double alpha = 0.0;               // G0: lim V*l
  std::complex<double> s{0.0, 0.0}; // Gprime: real for wells, imaginary for barriers
  Ratio sigma = Ratio(1);           // Gsigma: 1/(p-1)
  double c = 0.0;                   // Gsigma: lim |V|*l^(1+1/sigma)
  double half_strength_limit = 0.0; // lim |V|^(1/2)*l (0 except Gprime)

  bool singular() const { return kind != Kind::G0; }
  bool in_g_set() const { return kind != Kind::Gprime; } // member of the G-set (Eq-18 class)
  std::string name() const;
};

StrengthClass classify_strength(const Layer& layer);

// (mu, nu) regions of the two-parameter strength example. The four valid
// tags tile the triangle 1 < mu <= 2, nu >= 2(mu-1); everything else is
// Invalid, including parameters violating 1 - mu + nu > 0.
enum class Region { P, L1, L2, S, Invalid };

Region classify_region(double mu, double nu);
std::string region_name(Region r);

// Pencil projections of a squeezing path onto an (l_i, l_j) face.
//   Gamma        l_i / l_j -> 0
//   GammaPrime   l_i / l_j -> c > 0
//   GammaSigma   l_i^(1/sigma) / l_j -> c > 0
//   GammaV       V_i in G\G0, l_i/l_j -> 0 and |V_i| l_i l_j^(1/sigma) -> 0
//   GammaVPrime  as GammaV with |V_i| l_i l_j^(1/sigma) -> c > 0
struct PencilMembership {
  bool gamma = false;
  bool gamma_prime = false;
  bool gamma_sigma = false;
  bool gamma_v = false;
  bool gamma_v_prime = false;
};

PencilMembership pencil_membership(const StructureSpec& structure, const PathSpec& path,
                                   std::size_t i, std::size_t j, const Ratio& sigma);

// One (i, j) face of the admissibility table: which of the nine class-pair
// rows applies and whether the path satisfies the required pencils.
struct FaceReport {
  std::size_t i = 0;
  std::size_t j = 0;
  int rule_row = 0;       // 1..9
  std::string required;   // human-readable pencil condition
  bool pass = false;
};

struct AdmissibilityReport {
  std::vector<FaceReport> faces;
  bool admissible = false;
};

AdmissibilityReport check_squeeze_admissibility(const StructureSpec& structure,
                                                const PathSpec& path);

}  // namespace mlsq
