#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlsq/config.hpp"
#include "mlsq/expansion.hpp"
#include "mlsq/model.hpp"
#include "mlsq/resonance.hpp"
#include "mlsq/squeeze.hpp"
#include "mlsq/transfer.hpp"

namespace py = pybind11;
using namespace mlsq;

namespace {

Ratio to_ratio(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return parse_ratio(obj.cast<std::string>());
  if (py::isinstance<py::int_>(obj)) return Ratio(obj.cast<std::int64_t>(), 1);
  return Ratio::from_double(obj.cast<double>());
}

StructureSpec to_structure(const std::vector<std::tuple<double, py::object, double>>& layers) {
  StructureSpec s;
  for (const auto& [g, p, w] : layers) s.layers.push_back({g, to_ratio(p), w});
  s.validate();
  return s;
}

PathSpec to_path(const std::vector<py::object>& exponents) {
  PathSpec p;
  for (const auto& e : exponents) p.exponents.push_back(to_ratio(e));
  p.validate();
  return p;
}

Element to_element(const std::string& name) {
  if (name == "11") return Element::L11;
  if (name == "12") return Element::L12;
  if (name == "21") return Element::L21;
  if (name == "22") return Element::L22;
  throw Error("element must be one of 11, 12, 21, 22");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "squeezing analysis of multi-layer 1-D structures";

  // translators run newest-first: the derived class must come after the base
  py::register_exception<Error>(m, "MlsqError");
  py::register_exception<InadmissibleConfiguration>(m, "InadmissibleConfigurationError");

  py::class_<TransferMatrix>(m, "TransferMatrix")
      .def(py::init<>())
      .def_readwrite("l11", &TransferMatrix::l11)
      .def_readwrite("l12", &TransferMatrix::l12)
      .def_readwrite("l21", &TransferMatrix::l21)
      .def_readwrite("l22", &TransferMatrix::l22)
      .def("det", &TransferMatrix::det)
      .def_static("point", &TransferMatrix::point, py::arg("theta"), py::arg("alpha"))
      .def("__matmul__", &TransferMatrix::operator*)
      .def("as_list", [](const TransferMatrix& t) {
        return std::vector<std::vector<Complex>>{{t.l11, t.l12}, {t.l21, t.l22}};
      })
      .def("__repr__", [](const TransferMatrix& t) {
        return "TransferMatrix([[" + std::to_string(t.l11.real()) + ", " +
               std::to_string(t.l12.real()) + "], [" + std::to_string(t.l21.real()) + ", " +
               std::to_string(t.l22.real()) + "]])";
      });

  m.def("wavenumber", &wavenumber, py::arg("energy"), py::arg("potential"));

  m.def("layer_matrix", &layer_matrix, py::arg("energy"), py::arg("potential"),
        py::arg("width"));

  m.def(
      "full_matrix",
      [](const std::vector<std::pair<double, double>>& layers, double energy) {
        std::vector<LayerValue> values;
        values.reserve(layers.size());
        for (const auto& [v, l] : layers) values.push_back({v, l});
        return full_matrix(values, energy);
      },
      py::arg("layers"), py::arg("energy"),
      "Product matrix of [(V, l), ...] slabs, last layer leftmost.");

  m.def(
      "scattering",
      [](const TransferMatrix& t, double k) {
        const auto amp = scattering(t, k);
        return py::make_tuple(amp.t, amp.r);
      },
      py::arg("matrix"), py::arg("k"), "Returns (t, r) for incidence from the left.");

  m.def(
      "transmission",
      [](const TransferMatrix& t, double k) { return scattering(t, k).transmission(); },
      py::arg("matrix"), py::arg("k"));

  m.def(
      "bound_states",
      [](const std::vector<std::pair<double, double>>& layers, double lo, double hi) {
        std::vector<LayerValue> values;
        for (const auto& [v, l] : layers) values.push_back({v, l});
        return bound_states(values, lo, hi);
      },
      py::arg("layers"), py::arg("kappa_lo"), py::arg("kappa_hi"));

  m.def(
      "point_bound_states",
      [](double theta, double alpha, double lo, double hi) {
        const auto mat = TransferMatrix::point(theta, alpha);
        return bound_states([mat](double) { return mat; }, lo, hi);
      },
      py::arg("theta"), py::arg("alpha"), py::arg("kappa_lo"), py::arg("kappa_hi"));

  m.def(
      "classify_strength",
      [](double g, const py::object& p, double w) {
        const auto c = classify_strength({g, to_ratio(p), w});
        py::dict out;
        out["class"] = c.name();
        out["alpha"] = c.alpha;
        out["s"] = c.s;
        out["sigma"] = c.sigma.value();
        out["c"] = c.c;
        return out;
      },
      py::arg("g"), py::arg("p"), py::arg("w") = 1.0);

  m.def(
      "classify_region",
      [](double mu, double nu) { return region_name(classify_region(mu, nu)); },
      py::arg("mu"), py::arg("nu"));

  m.def(
      "check_admissibility",
      [](const std::vector<std::tuple<double, py::object, double>>& layers,
         const std::vector<py::object>& exponents) {
        const auto rep = check_squeeze_admissibility(to_structure(layers), to_path(exponents));
        py::list faces;
        for (const auto& f : rep.faces) {
          py::dict d;
          d["i"] = f.i + 1;
          d["j"] = f.j + 1;
          d["rule_row"] = f.rule_row;
          d["required"] = f.required;
          d["pass"] = f.pass;
          faces.append(d);
        }
        return py::make_tuple(rep.admissible, faces);
      },
      py::arg("layers"), py::arg("exponents"));

  m.def(
      "element_via_series",
      [](const std::string& element, const std::vector<std::pair<double, double>>& layers,
         double energy) {
        std::vector<LayerValue> values;
        for (const auto& [v, l] : layers) values.push_back({v, l});
        return element_via_series(to_element(element), TrigData::from_layers(values, energy));
      },
      py::arg("element"), py::arg("layers"), py::arg("energy"));

  m.def(
      "term_count",
      [](std::size_t n, const std::string& element) { return term_count(n, to_element(element)); },
      py::arg("n_layers"), py::arg("element"));

  m.def(
      "realize",
      [](const std::vector<std::tuple<double, py::object, double>>& layers,
         const std::vector<py::object>& exponents, double eps) {
        const auto values = realize(to_structure(layers), to_path(exponents), eps);
        std::vector<std::pair<double, double>> out;
        for (const auto& v : values) out.emplace_back(v.potential, v.width);
        return out;
      },
      py::arg("layers"), py::arg("exponents"), py::arg("eps"));

  m.def(
      "squeeze_limit",
      [](const std::vector<std::tuple<double, py::object, double>>& layers,
         const std::vector<py::object>& exponents, double energy) {
        const auto est = limit_matrix(to_structure(layers), to_path(exponents), energy,
                                      default_schedule());
        const auto cls = classify_limit(est);
        py::dict out;
        out["class"] = cls.name();
        out["theta"] = cls.theta;
        out["alpha"] = cls.alpha;
        out["l11"] = est.l11().limit;
        out["l21"] = est.l21().limit;
        out["l21_slope"] = est.l21().slope;
        return out;
      },
      py::arg("layers"), py::arg("exponents"), py::arg("energy") = 1.0);

  m.def(
      "resonance_roots",
      [](const std::vector<std::tuple<double, py::object, double>>& layers,
         const py::object& sigma, std::size_t multiplier,
         const std::vector<std::size_t>& free_layers, double lo, double hi, bool validate,
         double energy) {
        ResonanceProblem prob = ResonanceProblem::on_canonical_path(
            to_structure(layers), to_ratio(sigma), multiplier, free_layers);
        const auto eq = build_equation(prob.classes(), prob.sigma, prob.multiplier);
        const auto roots = solve(prob, eq, lo, hi);
        py::list out;
        for (const double root : roots) {
          py::dict d;
          d["root"] = root;
          if (validate) {
            const auto cv = cross_validate(prob, root, energy);
            d["pass"] = cv.pass;
            d["class_at_root"] = cv.at_root.name();
          }
          out.append(d);
        }
        return py::make_tuple(eq.str(), out);
      },
      py::arg("layers"), py::arg("sigma"), py::arg("multiplier"), py::arg("free_layers"),
      py::arg("lo"), py::arg("hi"), py::arg("validate") = false, py::arg("energy") = 1.0);

  m.attr("__version__") = "0.1.0";
}
