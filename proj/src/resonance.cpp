#include "mlsq/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlsq/transfer.hpp"

namespace mlsq {

namespace {

enum class Coarse { G0, Gap, Gprime };

Coarse coarse(const StrengthClass& c) {
  switch (c.kind) {
    case StrengthClass::Kind::G0: return Coarse::G0;
    case StrengthClass::Kind::Gprime: return Coarse::Gprime;
    default: return Coarse::Gap;
  }
}

bool factor_less(const Factor& a, const Factor& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.i != b.i) return a.i < b.i;
  if (a.j != b.j) return a.j < b.j;
  return a.sigma < b.sigma && !(a.sigma == b.sigma);
}

void canonicalize(Monomial& m) { std::sort(m.factors.begin(), m.factors.end(), factor_less); }

// Finite-limit factors of one divergent single term q_x t_x measured by the
// width of layer `measure` raised to 1/sg.
void append_measured(std::vector<Factor>& out, const StrengthClass& cls, std::size_t x,
                     std::size_t measure, const Ratio& sg) {
  if (cls.kind == StrengthClass::Kind::Gprime) {
    if (!(x == measure && sg == Ratio(1))) {
      out.push_back({Factor::Kind::Chi, measure, x, sg});
    }
    out.push_back({Factor::Kind::Tau, x, 0, Ratio(1)});
    return;
  }
  out.push_back({Factor::Kind::Eta, x, measure, sg});
}

std::string index_str(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

std::string Factor::str() const {
  const bool unit_sigma = sigma == Ratio(1);
  switch (kind) {
    case Kind::Tau: return "tau_" + index_str(i);
    case Kind::InvS2: return "1/s^2_" + index_str(i);
    case Kind::Chi:
      return (unit_sigma ? "chi_" : "chi^" + sigma.str() + "_") + index_str(i) + index_str(j);
    case Kind::Eta:
      return (unit_sigma ? "eta_" : "eta^" + sigma.str() + "_") + index_str(i) + index_str(j);
  }
  return "?";
}

std::string Monomial::str() const {
  std::string out = sign < 0 ? "-" : "";
  if (factors.empty()) return out + "1";
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (k) out += " ";
    out += factors[k].str();
  }
  return out;
}

std::string PencilTag::str() const {
  switch (kind) {
    case Kind::GammaPrime: return "Gamma'_" + index_str(i) + index_str(j);
    case Kind::GammaSigma:
      return "Gamma^" + sigma.str() + "_" + index_str(i) + index_str(j);
    case Kind::GammaVPrime: return "Gamma'_V" + index_str(i) + "," + index_str(j);
    case Kind::GammaVSigma:
      return "Gamma^" + sigma.str() + "_V" + index_str(i) + "," + index_str(j);
  }
  return "?";
}

std::string ResonanceEquation::str() const {
  auto side = [](const std::vector<Monomial>& ms) {
    if (ms.empty()) return std::string("0");
    std::string out;
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const bool neg = ms[k].sign < 0;
      if (k == 0) {
        out += neg ? "-" : "";
      } else {
        out += neg ? " - " : " + ";
      }
      Monomial abs = ms[k];
      abs.sign = 1.0;
      out += abs.str();
    }
    return out;
  };
  return side(left) + " = " + side(right);
}

ResonanceEquation build_equation(const std::vector<StrengthClass>& classes, const Ratio& sigma,
                                 std::size_t multiplier) {
  const std::size_t n = classes.size();
  if (n == 0) throw InadmissibleConfiguration("empty configuration");
  if (multiplier >= n) throw IndexError("multiplier index out of range");
  if (sigma < Ratio(1)) throw InadmissibleConfiguration("sigma must be >= 1");
  const bool unit_sigma = sigma == Ratio(1);
  const Ratio two(2);

  std::vector<Coarse> cls(n);
  for (std::size_t i = 0; i < n; ++i) cls[i] = coarse(classes[i]);

  std::size_t first_singular = n, last_singular = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] != Coarse::G0) {
      if (first_singular == n) first_singular = i;
      last_singular = i;
    }
  }
  if (first_singular == n) {
    throw InadmissibleConfiguration(
        "no singular strengths: the squeeze is delta-like and leaves nothing to cancel");
  }

  if (unit_sigma) {
    for (std::size_t m = first_singular + 1; m < last_singular; ++m) {
      if (cls[m] == Coarse::Gap) {
        throw InadmissibleConfiguration(
            "internal strength " + index_str(m) +
            " lies in G\\G0: at sigma = 1 no path makes all divergent terms the same order");
      }
    }
    if (cls[multiplier] == Coarse::Gap) {
      throw InadmissibleConfiguration(
          "measuring layer " + index_str(multiplier) +
          " lies in G\\G0: multiplying by its width removes its own divergence");
    }
  } else {
    if (cls[multiplier] == Coarse::Gprime) {
      throw InadmissibleConfiguration(
          "measuring layer " + index_str(multiplier) +
          " lies in G': its term diverges after multiplying by l^(1/sigma) with sigma > 1");
    }
    if (cls[multiplier] == Coarse::Gap && !(classes[multiplier].sigma == sigma)) {
      throw InadmissibleConfiguration(
          "measuring layer " + index_str(multiplier) + " lies in G^" +
          classes[multiplier].sigma.str() + " but sigma = " + sigma.str() + " was requested");
    }
  }

  ResonanceEquation eq;
  eq.sigma = sigma;
  eq.multiplier = multiplier;

  // measured single terms
  for (std::size_t m = 0; m < n; ++m) {
    if (cls[m] == Coarse::G0) continue;
    Monomial mono;
    append_measured(mono.factors, classes[m], m, multiplier, sigma);
    canonicalize(mono);
    eq.left.push_back(std::move(mono));
  }

  // dyad-chain corrections
  bool dropped_gset_middle = false;
  const std::size_t max_group = (n >= 1) ? (n - 1) / 2 : 0;
  for (std::size_t g = 1; g <= max_group; ++g) {
    const std::size_t len = 2 * g + 1;
    std::vector<std::size_t> idx(len);
    for (std::size_t i = 0; i < len; ++i) idx[i] = i;
    while (true) {
      // consumers idx[0], idx[2], ..., idx[2g]; suppliers odd positions
      bool skip = false;
      bool all_consumers_singular = true;
      for (std::size_t k = 0; k <= len - 1; k += 2) {
        if (cls[idx[k]] == Coarse::G0) {
          all_consumers_singular = false;
          break;
        }
      }
      if (!all_consumers_singular) skip = true;

      if (!skip) {
        for (std::size_t k = 1; k < len; k += 2) {
          const std::size_t b = idx[k];
          if (cls[b] == Coarse::Gap) {
            // the chain is finite after measuring; valid at sigma = 1 or >= 2
            if (!unit_sigma && sigma < two) {
              throw InadmissibleConfiguration(
                  "sigma in (1,2) is valid only when every chain middle lies in G'; layer " +
                  index_str(b) + " is in G\\G0");
            }
            dropped_gset_middle = true;
            skip = true;
            break;
          }
          if (!unit_sigma && b == multiplier) {
            // G0 measuring layer inside a chain: its width is below the
            // cluster scale and the dyad vanishes
            skip = true;
            break;
          }
        }
      }

      if (!skip) {
        Monomial mono;
        mono.sign = (g % 2 == 1) ? 1.0 : -1.0;  // right side carries (-1)^(n+1)
        for (std::size_t k = 1; k < len; k += 2) {
          const std::size_t b = idx[k];
          if (cls[b] == Coarse::Gprime) {
            mono.factors.push_back({Factor::Kind::Tau, b, 0, Ratio(1)});
            mono.factors.push_back({Factor::Kind::InvS2, b, 0, Ratio(1)});
          }
        }

        std::vector<std::size_t> consumers;
        std::vector<std::size_t> suppliers;
        for (std::size_t k = 0; k < len; k += 2) consumers.push_back(idx[k]);
        for (std::size_t k = 1; k < len; k += 2) suppliers.push_back(idx[k]);
        const std::size_t trailing = consumers.back();

        const bool j_consumes =
            !unit_sigma &&
            std::find(consumers.begin(), consumers.end(), multiplier) != consumers.end();
        if (j_consumes) {
          // the measuring width belongs to this chain; it measures its own
          // layer and the dyad widths shift to the remaining terms in order
          append_measured(mono.factors, classes[multiplier], multiplier, multiplier, sigma);
          std::size_t supplier_pos = 0;
          for (const std::size_t x : consumers) {
            if (x == multiplier) continue;
            append_measured(mono.factors, classes[x], x, suppliers[supplier_pos++], Ratio(1));
          }
        } else if (!unit_sigma && cls[trailing] == Coarse::Gap) {
          // adjoint trailing term: measured by the nearest dyad width, the
          // freed chain head is measured by the multiplier
          append_measured(mono.factors, classes[trailing], trailing, suppliers.back(), Ratio(1));
          for (std::size_t k = 0; k + 1 < consumers.size(); ++k) {
            if (k + 2 == consumers.size()) {
              append_measured(mono.factors, classes[consumers[k]], consumers[k], multiplier,
                              sigma);
            } else {
              append_measured(mono.factors, classes[consumers[k]], consumers[k], suppliers[k],
                              Ratio(1));
            }
          }
        } else {
          for (std::size_t k = 0; k + 1 < consumers.size(); ++k) {
            append_measured(mono.factors, classes[consumers[k]], consumers[k], suppliers[k],
                            Ratio(1));
          }
          append_measured(mono.factors, classes[trailing], trailing, multiplier, sigma);
        }
        canonicalize(mono);
        eq.right.push_back(std::move(mono));
      }

      // next combination
      std::size_t pos = len;
      bool done = false;
      while (pos > 0) {
        --pos;
        if (idx[pos] != pos + n - len) break;
        if (pos == 0) done = true;
      }
      if (done || idx[pos] == pos + n - len) break;
      ++idx[pos];
      for (std::size_t k = pos + 1; k < len; ++k) idx[k] = idx[k - 1] + 1;
    }
  }

  eq.validity = unit_sigma ? ResonanceEquation::SigmaValidity::One
                : dropped_gset_middle ? ResonanceEquation::SigmaValidity::TwoToInf
                                      : ResonanceEquation::SigmaValidity::OpenOneToInf;

  // pencil requirements read off the symbols actually used
  auto add_path = [&eq](PencilTag tag) {
    if (std::find(eq.paths.begin(), eq.paths.end(), tag) == eq.paths.end()) {
      eq.paths.push_back(tag);
    }
  };
  for (const auto* side : {&eq.left, &eq.right}) {
    for (const auto& mono : *side) {
      for (const auto& f : mono.factors) {
        if (f.kind == Factor::Kind::Chi) {
          if (f.sigma == Ratio(1)) {
            add_path({PencilTag::Kind::GammaPrime, std::min(f.i, f.j), std::max(f.i, f.j),
                      Ratio(1)});
          } else {
            add_path({PencilTag::Kind::GammaSigma, f.i, f.j, f.sigma});
          }
        } else if (f.kind == Factor::Kind::Eta && f.i != f.j) {
          if (f.sigma == Ratio(1)) {
            add_path({PencilTag::Kind::GammaVPrime, f.i, f.j, Ratio(1)});
          } else {
            add_path({PencilTag::Kind::GammaVSigma, f.i, f.j, f.sigma});
          }
        }
      }
    }
  }

  // source annotation for the shapes the tables spell out
  if (n == 2 && unit_sigma) {
    eq.source = (cls[0] == Coarse::Gprime && cls[1] == Coarse::Gprime) ? "pair-linear" : "pair-adjoint";
  } else if (n == 2) {
    eq.source = "pair-sigma";
  } else if (n == 3 && unit_sigma && multiplier == 1) {
    if (cls[1] == Coarse::G0) {
      eq.source = "triple-delta-middle";
    } else if (cls[0] != Coarse::G0 && cls[2] != Coarse::G0) {
      const int row = (cls[0] == Coarse::Gprime && cls[2] == Coarse::Gprime)   ? 1
                      : (cls[0] == Coarse::Gap && cls[2] == Coarse::Gprime)    ? 2
                      : (cls[0] == Coarse::Gprime && cls[2] == Coarse::Gap)    ? 3
                                                                               : 4;
      eq.source = "triple-linear-" + std::to_string(row);
    } else {
      eq.source = "chain-linear";
    }
  } else if (n == 3 && !unit_sigma && cls[1] == Coarse::Gprime && multiplier != 1) {
    const std::size_t other = multiplier == 0 ? 2 : 0;
    const int row = (multiplier == 0 && cls[other] == Coarse::Gprime) ? 1
                    : (multiplier == 2 && cls[other] == Coarse::Gprime) ? 2
                    : (multiplier == 0) ? 3 : 4;
    eq.source = "triple-sigma-lateral-" + std::to_string(row);
  } else if (n == 3 && !unit_sigma && multiplier == 1 && cls[1] == Coarse::Gap) {
    const int row = (cls[0] == Coarse::Gprime && cls[2] == Coarse::Gprime)   ? 1
                    : (cls[0] == Coarse::Gprime && cls[2] == Coarse::Gap)    ? 2
                    : (cls[0] == Coarse::Gap && cls[2] == Coarse::Gprime)    ? 3
                                                                             : 4;
    eq.source = "triple-sigma-middle-" + std::to_string(row);
  } else {
    eq.source = unit_sigma ? "chain-linear" : "chain-sigma";
  }
  return eq;
}

double residual(const ResonanceEquation& eq, const LimitParameters& params) {
  auto eval_factor = [&params](const Factor& f) -> double {
    switch (f.kind) {
      case Factor::Kind::Tau:
        return params.tau(f.i);
      case Factor::Kind::InvS2: {
        const std::complex<double> s = params.s(f.i);
        const double mag = std::abs(s);
        if (mag == 0.0) throw UnboundSymbol("s = 0 has no 1/s^2");
        return (s.imag() == 0.0) ? 1.0 / (mag * mag) : -1.0 / (mag * mag);
      }
      case Factor::Kind::Chi:
        return params.chi(f.i, f.j, f.sigma).require(f.str());
      case Factor::Kind::Eta:
        return params.eta(f.i, f.j, f.sigma).require(f.str());
    }
    throw UnboundSymbol("unknown factor kind");
  };
  auto eval_side = [&](const std::vector<Monomial>& ms) {
    double sum = 0.0;
    for (const auto& m : ms) {
      double term = m.sign;
      for (const auto& f : m.factors) term *= eval_factor(f);
      sum += term;
    }
    return sum;
  };
  return eval_side(eq.left) - eval_side(eq.right);
}

PathSpec canonical_path(const StructureSpec& structure, const Ratio& sigma,
                        std::size_t multiplier) {
  structure.validate();
  if (multiplier >= structure.size()) throw IndexError("multiplier index out of range");
  PathSpec path;
  path.exponents.reserve(structure.size());
  for (std::size_t m = 0; m < structure.size(); ++m) {
    const StrengthClass cls = classify_strength(structure.layers[m]);
    if (m == multiplier) {
      path.exponents.push_back(sigma);
    } else if (cls.kind == StrengthClass::Kind::Gsigma ||
               cls.kind == StrengthClass::Kind::GminusG0) {
      path.exponents.push_back(cls.sigma);
    } else {
      path.exponents.push_back(Ratio(1));
    }
  }
  return path;
}

StructureSpec ResonanceProblem::structure_at(double x) const {
  if (!(x > 0.0)) throw Error("free strength scale must be positive");
  StructureSpec out = structure;
  for (const std::size_t m : free_layers) {
    if (m >= out.size()) throw IndexError("free layer index out of range");
    Layer& layer = out.layers[m];
    if (!(classify_strength(layer).kind == StrengthClass::Kind::Gprime)) {
      throw ClassMismatch("free layers must be Gprime (p = 2) in the template");
    }
    layer.g = (layer.g < 0.0 ? -1.0 : 1.0) * x * x * std::abs(layer.g);
  }
  return out;
}

std::vector<StrengthClass> ResonanceProblem::classes() const {
  std::vector<StrengthClass> out;
  out.reserve(structure.size());
  for (const auto& layer : structure.layers) out.push_back(classify_strength(layer));
  return out;
}

ResonanceProblem ResonanceProblem::on_canonical_path(StructureSpec structure, const Ratio& sigma,
                                                     std::size_t multiplier,
                                                     std::vector<std::size_t> free_layers) {
  ResonanceProblem p;
  p.path = canonical_path(structure, sigma, multiplier);
  p.structure = std::move(structure);
  p.sigma = sigma;
  p.multiplier = multiplier;
  p.free_layers = std::move(free_layers);
  return p;
}

std::vector<double> solve(const ResonanceProblem& problem, const ResonanceEquation& eq,
                          double lo, double hi, const SolveOptions& opts) {
  if (!(0.0 < lo && lo < hi)) throw Error("bracket needs 0 < lo < hi");
  auto f = [&](double x) {
    return residual(eq, LimitParameters(problem.structure_at(x), problem.path, problem.sigma));
  };

  std::vector<double> roots;
  double prev_x = lo;
  double prev_v = f(lo);
  for (int i = 1; i <= opts.scan_points && roots.size() < opts.max_roots; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / opts.scan_points;
    const double v = f(x);
    const bool sign_change = (prev_v == 0.0) || (std::signbit(v) != std::signbit(prev_v));
    if (sign_change) {
      if (prev_v == 0.0) {
        roots.push_back(prev_x);
      } else if (std::min(std::abs(prev_v), std::abs(v)) > opts.pole_magnitude) {
        // tangent pole, not a root
      } else {
        double a = prev_x, b = x, fa = prev_v;
        while (b - a > opts.tolerance) {
          const double mid = 0.5 * (a + b);
          const double fm = f(mid);
          if (fm == 0.0) { a = b = mid; break; }
          if (std::signbit(fm) == std::signbit(fa)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        const double root = 0.5 * (a + b);
        // a pole also flips sign; at a root the residual has collapsed
        // relative to the scan flanks
        const double flank = std::min(std::abs(prev_v), std::abs(v));
        if (std::abs(f(root)) < flank) roots.push_back(root);
      }
    }
    prev_x = x;
    prev_v = v;
  }
  return roots;
}

EquivalenceReport verify_equivalence(const ResonanceProblem& problem, double lo, double hi,
                                     const SolveOptions& opts) {
  EquivalenceReport report;
  const auto classes = problem.classes();
  const std::size_t n = classes.size();
  if (n < 3) throw Error("equivalence check needs N >= 3");
  if (!(problem.sigma == Ratio(1))) throw Error("equivalence check is a sigma = 1 statement");
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (coarse(classes[j]) == Coarse::Gap) continue;
    ResonanceProblem pj = problem;
    pj.multiplier = j;
    pj.path = canonical_path(problem.structure, problem.sigma, j);
    const ResonanceEquation eqj = build_equation(classes, problem.sigma, j);
    report.multipliers.push_back(j);
    report.roots.push_back(solve(pj, eqj, lo, hi, opts));
  }
  report.equivalent = report.roots.size() >= 1;
  for (std::size_t a = 1; a < report.roots.size(); ++a) {
    if (report.roots[a].size() != report.roots[0].size()) {
      report.equivalent = false;
      report.max_deviation = std::numeric_limits<double>::infinity();
      return report;
    }
    for (std::size_t k = 0; k < report.roots[a].size(); ++k) {
      const double dev = std::abs(report.roots[a][k] - report.roots[0][k]);
      report.max_deviation = std::max(report.max_deviation, dev);
      if (dev > 1e-8) report.equivalent = false;
    }
  }
  return report;
}

CrossValidation cross_validate(const ResonanceProblem& problem, double root, double energy,
                               double offset, std::span<const double> schedule) {
  std::vector<double> sched;
  if (schedule.empty()) {
    sched = default_schedule(1e-1, 1e-5, 11);
    schedule = sched;
  }

  CrossValidation out;
  out.root = root;

  auto classify_at = [&](double x) {
    const StructureSpec s = problem.structure_at(x);
    return classify_limit(limit_matrix(s, problem.path, energy, schedule));
  };

  // transmission at the schedule tail; decreasing = true when the last
  // three points fall monotonically
  auto transmission_tail = [&](double x, bool& decreasing) {
    const StructureSpec s = problem.structure_at(x);
    double prev = std::numeric_limits<double>::infinity();
    decreasing = true;
    double t = 0.0;
    for (std::size_t k = schedule.size() >= 3 ? schedule.size() - 3 : 0; k < schedule.size();
         ++k) {
      const auto values = realize(s, problem.path, schedule[k]);
      t = scattering(full_matrix(values, energy), std::sqrt(energy)).transmission();
      if (t >= prev) decreasing = false;
      prev = t;
    }
    return t;
  };

  out.at_root = classify_at(root);
  out.below = classify_at(root - offset);
  out.above = classify_at(root + offset);
  bool dec_root = false, dec_below = false, dec_above = false;
  out.transmission_at_root = transmission_tail(root, dec_root);
  out.transmission_off_root = std::max(transmission_tail(root - offset, dec_below),
                                       transmission_tail(root + offset, dec_above));

  out.pass = out.at_root.kind == PointInteractionClass::Kind::Resonant &&
             out.below.kind == PointInteractionClass::Kind::DirichletSeparated &&
             out.above.kind == PointInteractionClass::Kind::DirichletSeparated &&
             out.transmission_off_root < 1e-3 && dec_below && dec_above;
  return out;
}

}  // namespace mlsq
