#include "mlsq/squeeze.hpp"

#include <algorithm>
#include <cmath>

namespace mlsq {

namespace {

constexpr double kOverflowFloor = 1e12;
constexpr double kDivergentSlope = -0.1;
constexpr double kBoundedSlope = 0.1;
constexpr double kTightFit = 0.99;
constexpr double kMagnitudeFloor = 1e-13;

struct LineFit {
  double slope = 0.0;
  double r_squared = 0.0;
  bool valid = false;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit fit;
  const std::size_t n = x.size();
  if (n < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  if (std::abs(den) < 1e-30) return fit;
  fit.slope = (dn * sxy - sx * sy) / den;
  const double ss_tot = syy - sy * sy / dn;
  const double intercept = (sy - fit.slope * sx) / dn;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + intercept);
    ss_res += r * r;
  }
  fit.r_squared = (ss_tot <= 1e-30) ? 1.0 : 1.0 - ss_res / ss_tot;
  fit.valid = true;
  return fit;
}

// Fit one matrix entry along the schedule (eps strictly decreasing).
EntryEstimate fit_entry(std::span<const double> eps, std::span<const Complex> values) {
  EntryEstimate est;
  const std::size_t n = eps.size();

  double vmax = 0.0;
  for (const auto& v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax < kMagnitudeFloor) {
    est.state = EntryState::Vanishing;
    est.limit = Complex(0.0, 0.0);
    est.error = vmax;
    est.slope = 0.0;
    est.r_squared = 1.0;
    return est;
  }

  // boundedness: slope of log|f| over the schedule tail
  const std::size_t tail = std::min<std::size_t>(n, 6);
  std::vector<double> lx, ly;
  for (std::size_t i = n - tail; i < n; ++i) {
    const double mag = std::abs(values[i]);
    if (mag < 1e-300) continue;
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(mag));
  }
  const LineFit mag_fit = fit_line(lx, ly);
  est.slope = mag_fit.slope;
  est.r_squared = mag_fit.r_squared;

  if (!mag_fit.valid) {
    est.state = EntryState::Ambiguous;
    return est;
  }

  if (mag_fit.slope < kDivergentSlope) {
    est.state = (mag_fit.r_squared > kTightFit) ? EntryState::Divergent : EntryState::Ambiguous;
    return est;
  }

  if (mag_fit.slope > kBoundedSlope) {
    // decays to zero with the fitted positive power
    est.state = EntryState::Vanishing;
    est.limit = Complex(0.0, 0.0);
    est.order = mag_fit.slope;
    est.error = std::abs(values[n - 1]);
    return est;
  }

  // bounded nonzero: fit the order of f - f0 on the successive differences
  // of the last four points, then one Richardson step at that order
  est.state = EntryState::Bounded;
  const std::size_t m = std::min<std::size_t>(n, 4);
  std::vector<double> dx, dy;
  for (std::size_t i = n - m; i + 1 < n; ++i) {
    const double diff = std::abs(values[i + 1] - values[i]);
    if (diff < 1e-250) continue;
    dx.push_back(std::log(eps[i]));
    dy.push_back(std::log(diff));
  }
  const Complex last = values[n - 1];
  if (dx.size() < 2) {
    // converged to rounding: the last value is the limit
    est.limit = last;
    est.error = (n >= 2) ? std::abs(values[n - 1] - values[n - 2]) : 0.0;
    est.order = 1.0;
    return est;
  }
  LineFit order_fit = fit_line(dx, dy);
  double p = order_fit.valid ? order_fit.slope : 1.0;
  p = std::clamp(p, 0.1, 6.0);
  est.order = p;
  const Complex prev = values[n - 2];
  const double ratio = eps[n - 2] / eps[n - 1];  // > 1
  const double denom = std::pow(ratio, p) - 1.0;
  Complex extr = last;
  if (denom > 1e-12) extr = last + (last - prev) / denom;
  est.limit = extr;
  est.error = std::max(std::abs(extr - last), 1e-16 * std::abs(extr));
  return est;
}

}  // namespace

std::vector<LayerValue> realize(const StructureSpec& structure, const PathSpec& path,
                                double eps) {
  structure.validate();
  path.validate();
  if (structure.size() != path.size()) throw IndexError("path/structure length mismatch");
  if (!(eps > 0.0)) throw Error("eps must be positive");
  std::vector<LayerValue> out(structure.size());
  for (std::size_t i = 0; i < structure.size(); ++i) {
    const Layer& layer = structure.layers[i];
    const double width = layer.w * std::pow(eps, path.exponents[i].value());
    out[i].width = width;
    out[i].potential = layer.g * std::pow(width, -layer.p.value());
  }
  return out;
}

std::vector<double> default_schedule(double eps_hi, double eps_lo, std::size_t count) {
  if (!(eps_hi > eps_lo && eps_lo > 0.0) || count < 4) {
    throw ScheduleTooShort("schedule needs eps_hi > eps_lo > 0 and at least 4 points");
  }
  std::vector<double> out(count);
  const double lh = std::log(eps_hi), ll = std::log(eps_lo);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp(lh + (ll - lh) * f);
  }
  return out;
}

LimitMatrixEstimate limit_matrix(const StructureSpec& structure, const PathSpec& path,
                                 double energy, std::span<const double> schedule) {
  if (schedule.size() < 4) throw ScheduleTooShort("schedule needs at least 4 points");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
    if (!(schedule[i] > schedule[i + 1]) || !(schedule[i + 1] > 0.0)) {
      throw ScheduleTooShort("schedule must decrease strictly toward 0");
    }
  }

  LimitMatrixEstimate est;
  for (const double eps : schedule) {
    const auto values = realize(structure, path, eps);
    const TransferMatrix m = full_matrix(values, energy);
    const double peak = std::max({std::abs(m.l11), std::abs(m.l12),
                                  std::abs(m.l21), std::abs(m.l22)});
    if (!std::isfinite(peak) || peak > kOverflowFloor) {
      est.hit_overflow_floor = true;
      break;
    }
    est.eps_used.push_back(eps);
    est.trace.push_back(m);
  }
  if (est.eps_used.size() < 4) {
    throw NumericalOverflow("entries exceeded the divergence floor before 4 usable points");
  }

  std::array<std::vector<Complex>, 4> series;
  for (const auto& m : est.trace) {
    series[0].push_back(m.l11);
    series[1].push_back(m.l12);
    series[2].push_back(m.l21);
    series[3].push_back(m.l22);
  }
  for (int k = 0; k < 4; ++k) {
    est.entries[k] = fit_entry(est.eps_used, series[k]);
  }
  return est;
}

std::string PointInteractionClass::name() const {
  switch (kind) {
    case Kind::Trivial: return "Trivial";
    case Kind::Delta: return "Delta";
    case Kind::DirichletSeparated: return "DirichletSeparated";
    case Kind::Resonant: return "Resonant";
  }
  return "?";
}

PointInteractionClass classify_limit(const LimitMatrixEstimate& est) {
  const auto& d11 = est.l11();
  const auto& d12 = est.l12();
  const auto& d21 = est.l21();
  const auto& d22 = est.l22();

  auto bounded = [](const EntryEstimate& e) {
    return e.state == EntryState::Bounded || e.state == EntryState::Vanishing;
  };
  if (!bounded(d11) || !bounded(d22)) {
    throw Unclassifiable("diagonal entry diverges: path fails the admissibility conditions");
  }
  if (d21.state == EntryState::Ambiguous) {
    throw Unclassifiable("lower-left entry fit is ambiguous (slope " +
                         std::to_string(d21.slope) + ", R^2 " +
                         std::to_string(d21.r_squared) + ")");
  }

  PointInteractionClass out;
  if (d21.state == EntryState::Divergent) {
    out.kind = PointInteractionClass::Kind::DirichletSeparated;
    return out;
  }

  if (!(d12.state == EntryState::Vanishing || std::abs(d12.limit) < 1e-6)) {
    throw Unclassifiable("upper-right entry does not vanish");
  }

  const double theta = d11.limit.real();
  const double alpha = d21.limit.real();
  const double theta_tol = 1e-6 + 10.0 * d11.error;
  if (std::abs(theta - 1.0) <= theta_tol && std::abs(d22.limit.real() - 1.0) <= theta_tol) {
    if (std::abs(alpha) <= 1e-9 + 10.0 * d21.error) {
      out.kind = PointInteractionClass::Kind::Trivial;
    } else {
      out.kind = PointInteractionClass::Kind::Delta;
      out.alpha = alpha;
    }
    return out;
  }

  // genuinely resonant: diagonal limits multiply to 1 by det preservation
  if (std::abs(theta * d22.limit.real() - 1.0) > 1e-4 + 100.0 * (d11.error + d22.error)) {
    throw Unclassifiable("diagonal limits are not reciprocal");
  }
  out.kind = PointInteractionClass::Kind::Resonant;
  out.theta = theta;
  out.alpha = alpha;
  return out;
}

LimitParameters::LimitParameters(StructureSpec structure, PathSpec path, Ratio sigma)
    : structure_(std::move(structure)), path_(std::move(path)), sigma_(std::move(sigma)) {
  structure_.validate();
  path_.validate();
  if (structure_.size() != path_.size()) throw IndexError("path/structure length mismatch");
  if (sigma_ < Ratio(1)) throw ClassMismatch("sigma must be >= 1");
  classes_.reserve(structure_.size());
  for (const auto& layer : structure_.layers) classes_.push_back(classify_strength(layer));
}

void LimitParameters::check_index(std::size_t i) const {
  if (i >= structure_.size()) throw IndexError("layer index out of range");
}

const StrengthClass& LimitParameters::strength_class(std::size_t i) const {
  check_index(i);
  return classes_[i];
}

std::complex<double> LimitParameters::s(std::size_t i) const {
  check_index(i);
  if (classes_[i].kind != StrengthClass::Kind::Gprime) {
    throw ClassMismatch("s is defined for Gprime layers only");
  }
  // q l -> sqrt(-g) exactly for the p = 2 power law, independent of w
  return classes_[i].s;
}

double LimitParameters::tau(std::size_t i) const {
  const std::complex<double> si = s(i);
  if (si.imag() == 0.0) {
    return si.real() * std::tan(si.real());
  }
  const double y = si.imag();  // barrier: s = i y, tau = -y tanh y < 0
  return -y * std::tanh(y);
}

double LimitParameters::tau_over_s2(std::size_t i) const {
  check_index(i);
  if (classes_[i].in_g_set()) return 1.0;  // substitution rule for G-set layers
  const std::complex<double> si = s(i);
  if (si.imag() == 0.0) {
    return std::tan(si.real()) / si.real();
  }
  const double y = si.imag();  // tau/s^2 = tanh(y)/y for barriers
  return std::tanh(y) / y;
}

LimitValue LimitParameters::chi(std::size_t i, std::size_t j, const Ratio& sg) const {
  check_index(i);
  check_index(j);
  const Ratio expnt = path_.exponents[i] / sg - path_.exponents[j];
  if (expnt > Ratio(0)) return LimitValue::zero();
  if (expnt < Ratio(0)) return LimitValue::infinite();
  const double value =
      std::pow(structure_.layers[i].w, 1.0 / sg.value()) / structure_.layers[j].w;
  return LimitValue::finite(value);
}

LimitValue LimitParameters::eta(std::size_t i, std::size_t j, const Ratio& sg) const {
  check_index(i);
  check_index(j);
  const StrengthClass& cls = classes_[i];
  if (cls.kind == StrengthClass::Kind::Gprime) {
    throw ClassMismatch("eta is defined for G-set layers only");
  }
  if (cls.kind == StrengthClass::Kind::G0) return LimitValue::zero();
  const Layer& layer = structure_.layers[i];
  // q_i^2 l_i l_j^(1/sg) ~ -g_i w_i^(1-p_i) w_j^(1/sg) eps^((1-p_i) e_i + e_j/sg)
  const Ratio expnt =
      (Ratio(1) - layer.p) * path_.exponents[i] + path_.exponents[j] / sg;
  if (expnt > Ratio(0)) return LimitValue::zero();
  if (expnt < Ratio(0)) return LimitValue::infinite();
  const double value = -layer.g * std::pow(layer.w, 1.0 - layer.p.value()) *
                       std::pow(structure_.layers[j].w, 1.0 / sg.value());
  return LimitValue::finite(value);
}

LimitValue LimitParameters::a_single(std::size_t i, std::size_t j) const {
  check_index(i);
  check_index(j);
  const StrengthClass& cls = classes_[i];
  if (cls.kind == StrengthClass::Kind::G0) return LimitValue::zero();
  if (cls.kind == StrengthClass::Kind::Gprime) {
    if (i == j) return LimitValue::finite(tau(i));
    const LimitValue x = chi(j, i);
    if (x.tag != LimitValue::Tag::Finite) return x;
    return LimitValue::finite(x.value * tau(i));
  }
  return eta(i, j);
}

LimitValue LimitParameters::a_single_sigma(std::size_t i, std::size_t j) const {
  check_index(i);
  check_index(j);
  const StrengthClass& cls = classes_[i];
  if (cls.kind == StrengthClass::Kind::G0) return LimitValue::zero();
  if (cls.kind == StrengthClass::Kind::Gprime) {
    if (i == j) throw ClassMismatch("a Gprime layer cannot measure itself at sigma > 1");
    const LimitValue x = chi(j, i, sigma_);
    if (x.tag != LimitValue::Tag::Finite) return x;
    return LimitValue::finite(x.value * tau(i));
  }
  return eta(i, j, sigma_);
}

LimitParameters limit_parameters(const StructureSpec& structure, const PathSpec& path,
                                 const Ratio& sigma) {
  return LimitParameters(structure, path, sigma);
}

}  // namespace mlsq
