#include "mlsq/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mlsq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok) {
  return parse_ratio(tok).value();
}

std::size_t parse_index(const std::string& tok, std::size_t limit, const std::string& what) {
  const Ratio r = parse_ratio(tok);
  if (!r.exact() || r.den() != 1 || r.num() < 1 ||
      static_cast<std::size_t>(r.num()) > limit) {
    throw ConfigError(what + " must be a 1-based layer index, got '" + tok + "'");
  }
  return static_cast<std::size_t>(r.num()) - 1;
}

bool parse_bool(const std::string& tok) {
  if (tok == "true" || tok == "1" || tok == "yes") return true;
  if (tok == "false" || tok == "0" || tok == "no") return false;
  throw ConfigError("expected a boolean, got '" + tok + "'");
}

}  // namespace

Ratio parse_ratio(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) throw ConfigError("empty numeric field");
  const auto slash = t.find('/');
  try {
    if (slash != std::string::npos) {
      const long long num = std::stoll(t.substr(0, slash));
      const long long den = std::stoll(t.substr(slash + 1));
      if (den == 0) throw ConfigError("zero denominator in '" + t + "'");
      return Ratio(num, den);
    }
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw ConfigError("trailing characters in number '" + t + "'");
    return Ratio::from_double(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric field '" + t + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {
// round-trip exact form for the config echo
std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::vector<std::string> raw_free, raw_mult;
  std::optional<std::vector<std::string>> raw_eps;

  while (std::getline(in, line)) {
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "structure" && section != "path" && section != "sweep" &&
          section != "matrix") {
        throw ConfigError("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto toks = split_ws(value);
    if (toks.empty()) throw ConfigError("empty value for key '" + key + "'");

    if (section == "structure") {
      if (key != "layer") throw ConfigError("unknown key '" + key + "' in [structure]");
      if (toks.size() != 3) throw ConfigError("layer needs: g p w");
      Layer layer;
      layer.g = parse_double(toks[0]);
      layer.p = parse_ratio(toks[1]);
      layer.w = parse_double(toks[2]);
      cfg.structure.layers.push_back(layer);
    } else if (section == "path") {
      if (key != "exponents") throw ConfigError("unknown key '" + key + "' in [path]");
      for (const auto& t : toks) cfg.path.exponents.push_back(parse_ratio(t));
      cfg.path_given = true;
    } else if (section == "sweep") {
      if (key == "energies") {
        for (const auto& t : toks) cfg.energies.push_back(parse_double(t));
      } else if (key == "energy_grid") {
        if (toks.size() != 3) throw ConfigError("energy_grid needs: lo hi count");
        const double lo = parse_double(toks[0]);
        const double hi = parse_double(toks[1]);
        const auto count = static_cast<std::size_t>(parse_double(toks[2]));
        if (!(lo > 0.0 && hi > lo && count >= 2)) throw ConfigError("bad energy_grid");
        for (std::size_t i = 0; i < count; ++i) {
          cfg.energies.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                          static_cast<double>(count - 1));
        }
      } else if (key == "epsilons") {
        if (toks.size() != 3) throw ConfigError("epsilons needs: hi lo count");
        raw_eps = toks;
      } else if (key == "epsilon") {
        cfg.epsilon = parse_double(toks[0]);
      } else if (key == "sigma") {
        cfg.sigma = parse_ratio(toks[0]);
      } else if (key == "multiplier") {
        raw_mult = toks;
      } else if (key == "free_layers") {
        raw_free = toks;
      } else if (key == "bracket") {
        if (toks.size() != 2) throw ConfigError("bracket needs: lo hi");
        cfg.bracket_lo = parse_double(toks[0]);
        cfg.bracket_hi = parse_double(toks[1]);
      } else if (key == "max_roots") {
        cfg.max_roots = static_cast<std::size_t>(parse_double(toks[0]));
      } else if (key == "mu") {
        cfg.mu = parse_double(toks[0]);
      } else if (key == "nu") {
        cfg.nu = parse_double(toks[0]);
      } else if (key == "use_limit") {
        cfg.use_limit = parse_bool(toks[0]);
      } else {
        throw ConfigError("unknown key '" + key + "' in [sweep]");
      }
    } else if (section == "matrix") {
      if (key == "theta") {
        cfg.matrix_theta = parse_double(toks[0]);
      } else if (key == "alpha") {
        cfg.matrix_alpha = parse_double(toks[0]);
      } else {
        throw ConfigError("unknown key '" + key + "' in [matrix]");
      }
    } else {
      throw ConfigError("key outside any section: " + line);
    }
  }

  if (cfg.structure.layers.empty() && !cfg.has_matrix()) {
    throw ConfigError("config needs a [structure] section or a [matrix] section");
  }

  if (!cfg.structure.layers.empty()) {
    try {
      cfg.structure.validate();
      for (const auto& layer : cfg.structure.layers) classify_strength(layer);
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid structure: ") + e.what());
    }
    if (cfg.path.exponents.empty()) {
      cfg.path.exponents.assign(cfg.structure.size(), Ratio(1));
    }
    if (cfg.path.size() != cfg.structure.size()) {
      throw ConfigError("path exponent count does not match the layer count");
    }
    try {
      cfg.path.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid path: ") + e.what());
    }
  }

  if (raw_eps) {
    const double hi = parse_double((*raw_eps)[0]);
    const double lo = parse_double((*raw_eps)[1]);
    const auto count = static_cast<std::size_t>(parse_double((*raw_eps)[2]));
    if (!(hi > lo && lo > 0.0 && count >= 4)) {
      throw ConfigError("epsilons needs hi > lo > 0 and count >= 4");
    }
    std::vector<double> sched(count);
    const double lh = std::log(hi), ll = std::log(lo);
    for (std::size_t i = 0; i < count; ++i) {
      sched[i] = std::exp(lh + (ll - lh) * static_cast<double>(i) /
                                   static_cast<double>(count - 1));
    }
    cfg.epsilons = std::move(sched);
  }
  if (!raw_mult.empty()) {
    cfg.multiplier = parse_index(raw_mult[0], cfg.structure.size(), "multiplier");
  }
  for (const auto& t : raw_free) {
    cfg.free_layers.push_back(parse_index(t, cfg.structure.size(), "free_layers"));
  }
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (cfg.sigma < Ratio(1)) throw ConfigError("sigma must be >= 1");
  for (const double e : cfg.energies) {
    if (!(e > 0.0)) throw ConfigError("energies must be positive");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string echo_config(const RunConfig& cfg) {
  std::ostringstream out;
  if (!cfg.structure.layers.empty()) {
    out << "[structure]\n";
    for (const auto& l : cfg.structure.layers) {
      out << "layer = " << format_exact(l.g) << " " << l.p.str() << " "
          << format_exact(l.w) << "\n";
    }
    out << "\n[path]\nexponents =";
    for (const auto& e : cfg.path.exponents) out << " " << e.str();
    out << "\n";
  }
  out << "\n[sweep]\n";
  if (!cfg.energies.empty()) {
    out << "energies =";
    for (const double e : cfg.energies) out << " " << format_exact(e);
    out << "\n";
  }
  if (cfg.epsilons) {
    // canonical echo re-emits the realized schedule endpoints and count
    out << "epsilons = " << format_exact(cfg.epsilons->front()) << " "
        << format_exact(cfg.epsilons->back()) << " " << cfg.epsilons->size() << "\n";
  }
  out << "epsilon = " << format_exact(cfg.epsilon) << "\n";
  out << "sigma = " << cfg.sigma.str() << "\n";
  if (!cfg.structure.layers.empty()) {
    out << "multiplier = " << cfg.multiplier + 1 << "\n";
  }
  if (!cfg.free_layers.empty()) {
    out << "free_layers =";
    for (const auto m : cfg.free_layers) out << " " << m + 1;
    out << "\n";
  }
  out << "bracket = " << format_exact(cfg.bracket_lo) << " " << format_exact(cfg.bracket_hi)
      << "\n";
  out << "max_roots = " << cfg.max_roots << "\n";
  if (cfg.mu) out << "mu = " << format_exact(*cfg.mu) << "\n";
  if (cfg.nu) out << "nu = " << format_exact(*cfg.nu) << "\n";
  out << "use_limit = " << (cfg.use_limit ? "true" : "false") << "\n";
  if (cfg.has_matrix()) {
    out << "\n[matrix]\n";
    if (cfg.matrix_theta) out << "theta = " << format_exact(*cfg.matrix_theta) << "\n";
    if (cfg.matrix_alpha) out << "alpha = " << format_exact(*cfg.matrix_alpha) << "\n";
  }
  return out.str();
}

bool config_equal(const RunConfig& a, const RunConfig& b) {
  if (a.structure.size() != b.structure.size()) return false;
  for (std::size_t i = 0; i < a.structure.size(); ++i) {
    const Layer& x = a.structure.layers[i];
    const Layer& y = b.structure.layers[i];
    if (x.g != y.g || x.w != y.w || x.p != y.p) return false;
  }
  if (a.path.size() != b.path.size()) return false;
  for (std::size_t i = 0; i < a.path.size(); ++i) {
    if (a.path.exponents[i] != b.path.exponents[i]) return false;
  }
  auto vec_eq = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i] - y[i]) > 1e-12 * std::max({1.0, std::abs(x[i]), std::abs(y[i])})) {
        return false;
      }
    }
    return true;
  };
  if (!vec_eq(a.energies, b.energies)) return false;
  if (a.epsilons.has_value() != b.epsilons.has_value()) return false;
  if (a.epsilons && !vec_eq(*a.epsilons, *b.epsilons)) return false;
  return a.epsilon == b.epsilon && a.sigma == b.sigma && a.multiplier == b.multiplier &&
         a.free_layers == b.free_layers && a.bracket_lo == b.bracket_lo &&
         a.bracket_hi == b.bracket_hi && a.max_roots == b.max_roots && a.mu == b.mu &&
         a.nu == b.nu && a.use_limit == b.use_limit && a.matrix_theta == b.matrix_theta &&
         a.matrix_alpha == b.matrix_alpha;
}

}  // namespace mlsq
