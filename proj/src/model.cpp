#include "mlsq/model.hpp"

#include <cmath>

namespace mlsq {

void Layer::validate() const {
  if (!std::isfinite(g)) throw InvalidLayer("layer strength coefficient must be finite");
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidLayer("layer width scale must be positive");
  if (p < Ratio(0)) throw InvalidLayer("strength exponent must be non-negative");
}

void StructureSpec::validate() const {
  if (layers.empty()) throw InvalidLayer("structure needs at least one layer");
  for (const auto& l : layers) l.validate();
}

void PathSpec::validate() const {
  if (exponents.empty()) throw InvalidLayer("path needs at least one exponent");
  for (const auto& e : exponents) {
    if (!(e > Ratio(0))) throw InvalidLayer("path exponents must be positive");
  }
}

std::string StrengthClass::name() const {
  switch (kind) {
    case Kind::G0: return "G0";
    case Kind::GminusG0: return "G\\G0";
    case Kind::Gsigma: return "Gsigma";
    case Kind::Gprime: return "Gprime";
  }
  return "?";
}

StrengthClass classify_strength(const Layer& layer) {
  layer.validate();
  StrengthClass out;
  const Ratio one(1), two(2);
  if (layer.g == 0.0 || layer.p <= one) {
    out.kind = StrengthClass::Kind::G0;
    out.alpha = (layer.p == one) ? layer.g : 0.0;
    return out;
  }
  if (layer.p < two) {
    out.kind = StrengthClass::Kind::Gsigma;
    out.sigma = one / (layer.p - one);
    out.c = std::abs(layer.g);
    return out;
  }
  if (layer.p == two) {
    out.kind = StrengthClass::Kind::Gprime;
    out.half_strength_limit = std::sqrt(std::abs(layer.g));
    // s^2 = -lim V*l^2 = -g: wells give real s, barriers imaginary
    out.s = (layer.g < 0.0) ? std::complex<double>(std::sqrt(-layer.g), 0.0)
                            : std::complex<double>(0.0, std::sqrt(layer.g));
    return out;
  }
  throw ExponentOutOfRange("strength exponent p = " + layer.p.str() +
                           " > 2: |V|^(1/2)*l diverges and no squeezed limit exists");
}

Region classify_region(double mu, double nu) {
  if (!std::isfinite(mu) || !std::isfinite(nu)) return Region::Invalid;
  if (!(1.0 - mu + nu > 0.0)) return Region::Invalid;
  const double tol = 1e-12 * std::max({1.0, std::abs(mu), std::abs(nu)});
  auto eq = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  if (eq(mu, 2.0) && eq(nu, 2.0)) return Region::P;
  if (eq(mu, 2.0) && nu > 2.0) return Region::L2;
  if (mu > 1.0 && mu < 2.0) {
    if (eq(nu, 2.0 * (mu - 1.0))) return Region::L1;
    if (nu > 2.0 * (mu - 1.0)) return Region::S;
  }
  return Region::Invalid;
}

std::string region_name(Region r) {
  switch (r) {
    case Region::P: return "P";
    case Region::L1: return "L1";
    case Region::L2: return "L2";
    case Region::S: return "S";
    case Region::Invalid: return "Invalid";
  }
  return "?";
}

PencilMembership pencil_membership(const StructureSpec& structure, const PathSpec& path,
                                   std::size_t i, std::size_t j, const Ratio& sigma) {
  structure.validate();
  path.validate();
  const std::size_t n = structure.size();
  if (path.size() != n) throw IndexError("path/structure length mismatch");
  if (i >= n || j >= n || i == j) throw IndexError("face indices out of range");
  if (sigma < Ratio(1)) throw Error("sigma must be >= 1");

  const Ratio& ei = path.exponents[i];
  const Ratio& ej = path.exponents[j];
  PencilMembership out;
  out.gamma = ei > ej;
  out.gamma_prime = ei == ej;
  out.gamma_sigma = ei == sigma * ej;

  // Adjoint pencils need V_i in G\G0 and l_i/l_j -> 0; the deciding limit is
  // the eps-exponent of |V_i| * l_i * l_j^(1/sigma).
  const StrengthClass cls = classify_strength(structure.layers[i]);
  const bool gap = cls.kind == StrengthClass::Kind::Gsigma ||
                   cls.kind == StrengthClass::Kind::GminusG0;
  if (gap && out.gamma) {
    const Ratio expnt = (Ratio(1) - structure.layers[i].p) * ei + ej / sigma;
    out.gamma_v = expnt > Ratio(0);
    out.gamma_v_prime = expnt == Ratio(0);
  }
  return out;
}

namespace {

enum class Coarse { G0, Gap, Gprime };  // G0, G\G0, G'

Coarse coarse_class(const StrengthClass& c) {
  switch (c.kind) {
    case StrengthClass::Kind::G0: return Coarse::G0;
    case StrengthClass::Kind::Gprime: return Coarse::Gprime;
    default: return Coarse::Gap;
  }
}

// gamma-bar variants: limits allowed to vanish
bool gamma_bar(const PencilMembership& m) { return m.gamma || m.gamma_prime; }
bool gamma_v_bar(const PencilMembership& m) { return m.gamma_v || m.gamma_v_prime; }

}  // namespace

AdmissibilityReport check_squeeze_admissibility(const StructureSpec& structure,
                                                const PathSpec& path) {
  structure.validate();
  path.validate();
  if (path.size() != structure.size()) throw IndexError("path/structure length mismatch");

  AdmissibilityReport report;
  report.admissible = true;
  const std::size_t n = structure.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Coarse ci = coarse_class(classify_strength(structure.layers[i]));
      const Coarse cj = coarse_class(classify_strength(structure.layers[j]));
      const PencilMembership mij = pencil_membership(structure, path, i, j, Ratio(1));
      const PencilMembership mji = pencil_membership(structure, path, j, i, Ratio(1));

      FaceReport face;
      face.i = i;
      face.j = j;
      if (ci == Coarse::Gprime && cj == Coarse::Gprime) {
        face.rule_row = 1;
        face.required = "Gamma'_ij";
        face.pass = mij.gamma_prime;
      } else if (ci == Coarse::Gap && cj == Coarse::Gprime) {
        face.rule_row = 2;
        face.required = "GammaBar_V_ij or Gamma'_ij";
        face.pass = gamma_v_bar(mij) || mij.gamma_prime;
      } else if (ci == Coarse::G0 && cj == Coarse::Gprime) {
        face.rule_row = 3;
        face.required = "GammaBar_ij";
        face.pass = gamma_bar(mij);
      } else if (ci == Coarse::Gprime && cj == Coarse::Gap) {
        face.rule_row = 4;
        face.required = "GammaBar_V_ji or Gamma'_ji";
        face.pass = gamma_v_bar(mji) || mji.gamma_prime;
      } else if (ci == Coarse::Gprime && cj == Coarse::G0) {
        face.rule_row = 5;
        face.required = "GammaBar_ji";
        face.pass = gamma_bar(mji);
      } else if (ci == Coarse::Gap && cj == Coarse::Gap) {
        face.rule_row = 6;
        face.required = "GammaBar_V_ij or GammaBar_V_ji or Gamma'_ij";
        face.pass = gamma_v_bar(mij) || gamma_v_bar(mji) || mij.gamma_prime;
      } else if (ci == Coarse::G0 && cj == Coarse::Gap) {
        face.rule_row = 7;
        face.required = "GammaBar_V_ji or GammaBar_ij";
        face.pass = gamma_v_bar(mji) || gamma_bar(mij);
      } else if (ci == Coarse::Gap && cj == Coarse::G0) {
        face.rule_row = 8;
        face.required = "GammaBar_V_ij or GammaBar_ji";
        face.pass = gamma_v_bar(mij) || gamma_bar(mji);
      } else {
        face.rule_row = 9;
        face.required = "GammaBar_ij or GammaBar_ji";
        face.pass = gamma_bar(mij) || gamma_bar(mji);
      }
      report.admissible = report.admissible && face.pass;
      report.faces.push_back(face);
    }
  }
  return report;
}

}  // namespace mlsq
