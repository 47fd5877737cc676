// mlsq: squeezing analysis of multi-layer 1-D structures.
//
// Subcommands validate a config file, run the requested computation and
// write deterministic CSV (optionally mirrored as JSON) into --out.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlsq/config.hpp"
#include "mlsq/expansion.hpp"
#include "mlsq/model.hpp"
#include "mlsq/resonance.hpp"
#include "mlsq/squeeze.hpp"
#include "mlsq/transfer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  unsigned threads = 1;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& table, const Options& opts) {
  fs::create_directories(opts.out_dir);
  const fs::path csv_path = fs::path(opts.out_dir) / (table.name + ".csv");
  std::ofstream csv(csv_path);
  if (!csv) throw mlsq::ConfigError("cannot write " + csv_path.string());
  csv << "# ";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) csv << ",";
    csv << table.columns[c];
  }
  csv << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) csv << ",";
      csv << row[c];
    }
    csv << "\n";
  }
  if (opts.format == "json") {
    json j = json::array();
    for (const auto& row : table.rows) {
      json obj;
      for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
        obj[table.columns[c]] = row[c];
      }
      j.push_back(obj);
    }
    std::ofstream js(fs::path(opts.out_dir) / (table.name + ".json"));
    js << j.dump(2) << "\n";
  }
}

void write_echo(const mlsq::RunConfig& cfg, const Options& opts) {
  fs::create_directories(opts.out_dir);
  std::ofstream out(fs::path(opts.out_dir) / "config_echo.ini");
  out << mlsq::echo_config(cfg);
}

double run_energy(const mlsq::RunConfig& cfg) {
  return cfg.energies.empty() ? 1.0 : cfg.energies.front();
}

std::vector<double> schedule_of(const mlsq::RunConfig& cfg) {
  return cfg.epsilons ? *cfg.epsilons : mlsq::default_schedule();
}

int cmd_transmit(const mlsq::RunConfig& cfg, const Options& opts) {
  if (cfg.structure.layers.empty()) throw mlsq::ConfigError("transmit needs a [structure]");
  if (cfg.energies.empty()) throw mlsq::ConfigError("transmit needs energies");
  const auto values = mlsq::realize(cfg.structure, cfg.path, cfg.epsilon);

  std::vector<std::vector<std::string>> rows(cfg.energies.size());
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double e = cfg.energies[i];
      const auto m = mlsq::full_matrix(values, e);
      const auto amp = mlsq::scattering(m, std::sqrt(e));
      const double unitarity = std::abs(amp.transmission() + amp.reflection() - 1.0);
      rows[i] = {mlsq::format_double(e), mlsq::format_double(amp.transmission()),
                 mlsq::format_double(amp.reflection()),
                 mlsq::format_double(std::arg(amp.t)), mlsq::format_double(unitarity)};
    }
  };
  const unsigned nthreads = std::max(1u, opts.threads);
  if (nthreads == 1 || cfg.energies.size() < 2 * nthreads) {
    worker(0, cfg.energies.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.energies.size() + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(cfg.energies.size(), b + chunk);
      if (b < e) pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }

  Table table{"transmit", {"E", "T", "R", "phase_t", "unitarity_defect"}, std::move(rows)};
  write_table(table, opts);
  std::cout << "transmit: " << cfg.energies.size() << " energies at eps = " << cfg.epsilon
            << "\n";
  return 0;
}

std::string entry_state_name(mlsq::EntryState s) {
  switch (s) {
    case mlsq::EntryState::Bounded: return "bounded";
    case mlsq::EntryState::Vanishing: return "vanishing";
    case mlsq::EntryState::Divergent: return "divergent";
    case mlsq::EntryState::Ambiguous: return "ambiguous";
  }
  return "?";
}

int cmd_squeeze(const mlsq::RunConfig& cfg, const Options& opts) {
  if (cfg.structure.layers.empty()) throw mlsq::ConfigError("squeeze needs a [structure]");
  const auto sched = schedule_of(cfg);
  const double energy = run_energy(cfg);
  const auto est = mlsq::limit_matrix(cfg.structure, cfg.path, energy, sched);

  Table trace{"squeeze_trace",
              {"eps", "re_l11", "im_l11", "re_l12", "im_l12", "re_l21", "im_l21", "re_l22",
               "im_l22"},
              {}};
  for (std::size_t i = 0; i < est.eps_used.size(); ++i) {
    const auto& m = est.trace[i];
    trace.rows.push_back({mlsq::format_double(est.eps_used[i]),
                          mlsq::format_double(m.l11.real()), mlsq::format_double(m.l11.imag()),
                          mlsq::format_double(m.l12.real()), mlsq::format_double(m.l12.imag()),
                          mlsq::format_double(m.l21.real()), mlsq::format_double(m.l21.imag()),
                          mlsq::format_double(m.l22.real()),
                          mlsq::format_double(m.l22.imag())});
  }
  write_table(trace, opts);

  Table summary{"squeeze_summary",
                {"entry", "state", "limit", "error", "slope", "order"},
                {}};
  const char* names[4] = {"l11", "l12", "l21", "l22"};
  for (int k = 0; k < 4; ++k) {
    const auto& e = est.entries[k];
    summary.rows.push_back({names[k], entry_state_name(e.state),
                            mlsq::format_double(e.limit.real()), mlsq::format_double(e.error),
                            mlsq::format_double(e.slope), mlsq::format_double(e.order)});
  }
  write_table(summary, opts);

  // two-column plot data, one file per entry
  for (int k = 0; k < 4; ++k) {
    std::ofstream dat(fs::path(opts.out_dir) / (std::string("trace_") + names[k] + ".dat"));
    for (std::size_t i = 0; i < est.eps_used.size(); ++i) {
      const mlsq::Complex* entries[4] = {&est.trace[i].l11, &est.trace[i].l12,
                                         &est.trace[i].l21, &est.trace[i].l22};
      dat << mlsq::format_double(est.eps_used[i]) << " "
          << mlsq::format_double(entries[k]->real()) << "\n";
    }
  }

  const auto cls = mlsq::classify_limit(est);
  std::cout << "squeeze: " << cls.name();
  if (cls.kind == mlsq::PointInteractionClass::Kind::Delta) {
    std::cout << " alpha = " << cls.alpha;
  } else if (cls.kind == mlsq::PointInteractionClass::Kind::Resonant) {
    std::cout << " theta = " << cls.theta << " alpha = " << cls.alpha;
  }
  std::cout << "\n";
  return 0;
}

int cmd_resonance(const mlsq::RunConfig& cfg, const Options& opts) {
  if (cfg.structure.layers.empty()) throw mlsq::ConfigError("resonance needs a [structure]");
  mlsq::ResonanceProblem problem;
  problem.structure = cfg.structure;
  problem.sigma = cfg.sigma;
  problem.multiplier = cfg.multiplier;
  problem.free_layers = cfg.free_layers;
  problem.path = cfg.path_given
                     ? cfg.path
                     : mlsq::canonical_path(cfg.structure, cfg.sigma, cfg.multiplier);
  if (problem.free_layers.empty()) {
    throw mlsq::ConfigError("resonance needs free_layers (the strengths swept by the root search)");
  }

  const auto eq = mlsq::build_equation(problem.classes(), problem.sigma, problem.multiplier);
  std::cout << "equation (" << eq.source << "): " << eq.str() << "\n";
  std::cout << "paths:";
  for (const auto& p : eq.paths) std::cout << " " << p.str();
  std::cout << "\n";

  mlsq::SolveOptions sopts;
  sopts.max_roots = cfg.max_roots;
  const auto roots = mlsq::solve(problem, eq, cfg.bracket_lo, cfg.bracket_hi, sopts);

  Table table{"resonance",
              {"config", "sigma", "root_index", "root", "verdict", "class_at_root",
               "class_below", "class_above"},
              {}};
  const double energy = run_energy(cfg);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    mlsq::CrossValidation cv;
    std::string verdict;
    try {
      cv = mlsq::cross_validate(problem, roots[i], energy);
      verdict = cv.pass ? "pass" : "fail";
    } catch (const mlsq::Error& e) {
      verdict = std::string("error: ") + e.what();
    }
    table.rows.push_back({eq.source, cfg.sigma.str(), std::to_string(i),
                          mlsq::format_double(roots[i]), verdict, cv.at_root.name(),
                          cv.below.name(), cv.above.name()});
  }
  write_table(table, opts);
  std::cout << "resonance: " << roots.size() << " roots in (" << cfg.bracket_lo << ", "
            << cfg.bracket_hi << ")\n";
  return 0;
}

int cmd_bound(const mlsq::RunConfig& cfg, const Options& opts) {
  std::vector<double> kappas;
  if (cfg.has_matrix()) {
    const double theta = cfg.matrix_theta.value_or(1.0);
    const double alpha = cfg.matrix_alpha.value_or(0.0);
    const auto m = mlsq::TransferMatrix::point(theta, alpha);
    kappas = mlsq::bound_states([m](double) { return m; }, cfg.bracket_lo, cfg.bracket_hi);
  } else if (cfg.use_limit) {
    const auto est =
        mlsq::limit_matrix(cfg.structure, cfg.path, run_energy(cfg), schedule_of(cfg));
    const auto cls = mlsq::classify_limit(est);
    double theta = 1.0, alpha = 0.0;
    if (cls.kind == mlsq::PointInteractionClass::Kind::Delta) {
      alpha = cls.alpha;
    } else if (cls.kind == mlsq::PointInteractionClass::Kind::Resonant) {
      theta = cls.theta;
      alpha = cls.alpha;
    } else if (cls.kind != mlsq::PointInteractionClass::Kind::Trivial) {
      throw mlsq::Unclassifiable("squeezed limit is not a connection matrix with bound states");
    }
    const auto m = mlsq::TransferMatrix::point(theta, alpha);
    kappas = mlsq::bound_states([m](double) { return m; }, cfg.bracket_lo, cfg.bracket_hi);
  } else {
    if (cfg.structure.layers.empty()) {
      throw mlsq::ConfigError("bound needs a [structure] or a [matrix]");
    }
    const auto values = mlsq::realize(cfg.structure, cfg.path, cfg.epsilon);
    kappas = mlsq::bound_states(values, cfg.bracket_lo, cfg.bracket_hi);
  }

  Table table{"bound", {"index", "kappa", "E"}, {}};
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    table.rows.push_back({std::to_string(i), mlsq::format_double(kappas[i]),
                          mlsq::format_double(-kappas[i] * kappas[i])});
  }
  write_table(table, opts);
  std::cout << "bound: " << kappas.size() << " levels\n";
  return 0;
}

int cmd_classify(const mlsq::RunConfig& cfg, const Options& opts) {
  if (cfg.structure.layers.empty()) throw mlsq::ConfigError("classify needs a [structure]");
  Table layers{"layers", {"layer", "g", "p", "w", "class", "alpha", "s_re", "s_im", "sigma", "c"},
               {}};
  for (std::size_t i = 0; i < cfg.structure.size(); ++i) {
    const auto& l = cfg.structure.layers[i];
    const auto cls = mlsq::classify_strength(l);
    layers.rows.push_back({std::to_string(i + 1), mlsq::format_double(l.g), l.p.str(),
                           mlsq::format_double(l.w), cls.name(),
                           mlsq::format_double(cls.alpha), mlsq::format_double(cls.s.real()),
                           mlsq::format_double(cls.s.imag()), cls.sigma.str(),
                           mlsq::format_double(cls.c)});
  }
  write_table(layers, opts);

  const auto report = mlsq::check_squeeze_admissibility(cfg.structure, cfg.path);
  Table faces{"faces", {"i", "j", "rule_row", "required", "pass"}, {}};
  for (const auto& f : report.faces) {
    faces.rows.push_back({std::to_string(f.i + 1), std::to_string(f.j + 1),
                          std::to_string(f.rule_row), f.required, f.pass ? "1" : "0"});
  }
  write_table(faces, opts);
  std::cout << "classify: path " << (report.admissible ? "admissible" : "inadmissible")
            << "\n";

  if (cfg.mu && cfg.nu) {
    std::cout << "region(mu=" << *cfg.mu << ", nu=" << *cfg.nu
              << ") = " << mlsq::region_name(mlsq::classify_region(*cfg.mu, *cfg.nu)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"squeezing analysis of multi-layer 1-D structures"};
  app.require_subcommand(1);

  Options opts;
  app.add_option("--config", opts.config_path, "run configuration file")->required();
  app.add_option("--out", opts.out_dir, "output directory");
  app.add_option("--format", opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", opts.threads, "worker threads for sweeps");

  auto* transmit = app.add_subcommand("transmit", "transmission/reflection over an energy grid");
  auto* squeeze = app.add_subcommand("squeeze", "extrapolate the eps -> 0 connection matrix");
  auto* resonance = app.add_subcommand("resonance", "resonance sets and cross-validation");
  auto* bound = app.add_subcommand("bound", "bound states from the matrix condition");
  auto* classify = app.add_subcommand("classify", "strength classes and path admissibility");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    const mlsq::RunConfig cfg = mlsq::load_config(opts.config_path);
    write_echo(cfg, opts);
    if (transmit->parsed()) return cmd_transmit(cfg, opts);
    if (squeeze->parsed()) return cmd_squeeze(cfg, opts);
    if (resonance->parsed()) return cmd_resonance(cfg, opts);
    if (bound->parsed()) return cmd_bound(cfg, opts);
    if (classify->parsed()) return cmd_classify(cfg, opts);
    return 2;
  } catch (const mlsq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mlsq::InadmissibleConfiguration& e) {
    std::cerr << "inadmissible configuration: " << e.what() << "\n";
    return 3;
  } catch (const mlsq::Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
