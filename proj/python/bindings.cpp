#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "rgw/asympt.hpp"
#include "rgw/charroots.hpp"
#include "rgw/error.hpp"
#include "rgw/mcsim.hpp"
#include "rgw/model.hpp"
#include "rgw/picard.hpp"
#include "rgw/recur.hpp"
#include "rgw/series.hpp"

namespace py = pybind11;
using namespace rgw;

namespace {

// A measure argument may be an EnvMeasure or an example name.
EnvMeasure as_measure(const py::object& o) {
  if (py::isinstance<py::str>(o)) return example_measure(o.cast<std::string>());
  return o.cast<EnvMeasure>();
}

// Numbers come in as str ("7/16", "0.4375") or as Python int/float.
Rational as_rational(const py::object& o) {
  if (py::isinstance<py::str>(o)) return parse_rational(o.cast<std::string>());
  if (py::isinstance<py::int_>(o)) return Rational(o.cast<long>());
  return parse_rational(py::str(o).cast<std::string>());
}

ExtReal as_ext(const py::object& o) {
  if (py::isinstance<py::str>(o)) return parse_ext_real(o.cast<std::string>());
  return ExtReal(o.cast<double>());
}

py::dict root_dict(const CharRoot& r) {
  py::dict d;
  d["re"] = r.alpha.re().to_double();
  d["im"] = r.alpha.im().to_double();
  d["re_str"] = to_string(r.alpha.re(), 32);
  d["im_str"] = to_string(r.alpha.im(), 32);
  d["residual"] = r.residual.to_double();
  d["class"] = to_string(r.cls);
  d["convention"] = to_string(r.convention);
  return d;
}

CharEquation equation(const EnvMeasure& mu, const std::string& form) {
  if (form == "general") return CharEquation::general(mu);
  if (form == "f") return CharEquation::f_form(mu);
  throw ValidationError("form must be 'general' or 'f'");
}

DensitySeq densities(const py::object& measure, std::size_t n_max, const std::string& mode,
                     const std::string& engine) {
  const EnvMeasure mu = as_measure(measure);
  require_admissible(mu);
  const RecurOptions opt{parse_mode(mode)};
  if (engine == "auto") return densities_auto(mu, n_max, opt);
  if (engine == "general") return densities_general(mu, n_max, opt);
  if (engine == "operator") return schroder_fixpoint(mu, n_max, 1e-30, 100000, opt.mode).seq;
  throw ValidationError("engine must be 'auto', 'general' or 'operator'");
}

}  // namespace

PYBIND11_MODULE(_rgw, m) {
  m.doc() = "Relative limit densities of Galton-Watson processes in random environments";
  m.attr("__version__") = RGW_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<EnvMeasure>(m, "Measure")
      .def_static("example", &example_measure, py::arg("name"))
      .def_static("from_json", &parse_measure_json, py::arg("text"))
      .def_static("load", &load_measure_file, py::arg("path"))
      .def_static(
          "quad_uniform",
          [](const py::object& lo, const py::object& hi, const py::object& density) {
            return EnvMeasure::quad_uniform(as_rational(lo), as_rational(hi), as_rational(density));
          },
          py::arg("lo"), py::arg("hi"), py::arg("density") = 1)
      .def_static(
          "two_poly", [](const py::object& a, const py::object& b) {
            return EnvMeasure::two_poly(as_rational(a), as_rational(b));
          },
          py::arg("a"), py::arg("b"))
      .def("to_json", &measure_to_json)
      .def("scaled", [](const EnvMeasure& mu, const py::object& c) { return mu.scaled(as_rational(c)); })
      .def_property_readonly("mass", [](const EnvMeasure& mu) { return to_fraction_string(mu.mass()); })
      .def("validate",
           [](const EnvMeasure& mu) {
             const auto r = validate_measure(mu);
             return py::make_tuple(r.ok, r.message);
           })
      .def("__repr__", [](const EnvMeasure& mu) { return "<Measure " + mu.describe() + ">"; });

  py::class_<DensitySeq>(m, "Densities")
      .def_property_readonly("mode", [](const DensitySeq& s) { return to_string(s.mode()); })
      .def_property_readonly("engine", &DensitySeq::engine)
      .def("__len__", &DensitySeq::size)
      .def("value", [](const DensitySeq& s, std::size_t n) { return s.value(n).to_double(); }, py::arg("n"))
      .def("psi", [](const DensitySeq& s, std::size_t n) { return s.psi(n).to_double(); }, py::arg("n"))
      .def(
          "decimal",
          [](const DensitySeq& s, std::size_t n, int digits) {
            return s.mode() == Mode::kRational ? to_decimal_string(s.exact_value(n), digits)
                                               : to_string(s.value(n), std::min(digits, 32));
          },
          py::arg("n"), py::arg("digits") = 32)
      .def("fraction", [](const DensitySeq& s, std::size_t n) { return to_fraction_string(s.exact_value(n)); },
           py::arg("n"))
      .def("values", [](const DensitySeq& s) {
        std::vector<double> v;
        v.reserve(s.size());
        for (const auto& x : s.values()) v.push_back(x.to_double());
        return v;
      });

  m.def("densities", &densities, py::arg("measure"), py::arg("n_max"), py::arg("mode") = "rational",
        py::arg("engine") = "auto");

  m.def(
      "primary_root",
      [](const py::object& measure, const std::string& form) {
        return root_dict(find_real_primary(equation(as_measure(measure), form)));
      },
      py::arg("measure"), py::arg("form") = "general");

  m.def(
      "roots_in_box",
      [](const py::object& measure, std::vector<double> box, const std::string& form, bool filter) {
        if (box.size() != 4) throw ValidationError("box needs re_min, re_max, im_min, im_max");
        const auto eq = equation(as_measure(measure), form);
        auto roots = find_roots_in_box(eq, {ExtReal(box[0]), ExtReal(box[1]), ExtReal(box[2]), ExtReal(box[3])});
        if (filter) roots = filter_spurious(std::move(roots), eq.reference());
        py::list out;
        for (const auto& r : roots) out.append(root_dict(r));
        return out;
      },
      py::arg("measure"), py::arg("box"), py::arg("form") = "general", py::arg("filter") = true);

  m.def(
      "fit_leading_constant",
      [](const DensitySeq& seq, const py::object& power) {
        const auto f = fit_leading_constant(seq, as_ext(power));
        py::dict d;
        d["estimate"] = f.estimate.to_double();
        d["estimate_str"] = to_string(f.estimate, 32);
        d["error"] = f.error.to_double();
        d["converged"] = f.converged;
        return d;
      },
      py::arg("seq"), py::arg("power"));

  m.def("example1_alpha", [] { return to_string(example1_alpha(), 32); });
  m.def("example2_a", [] { return to_string(example2_a(), 32); });

  m.def(
      "picard",
      [](double grid_step, int iters, const std::string& h0, const std::string& form, const std::string& rule) {
        const std::size_t cells = cells_for_step(grid_step);
        const QuadRule q = parse_quad_rule(rule);
        if (h0 != "const" && h0 != "step") throw ValidationError("h0 must be 'const' or 'step'");
        const GridFunction start = h0 == "const" ? h0_const(cells, ExtReal(1.0), q) : h0_step(cells, q);
        if (form != "backward" && form != "forward") throw ValidationError("form must be 'backward' or 'forward'");
        const auto res = form == "backward" ? picard_backward(start, iters) : picard_forward(start, iters);
        std::vector<double> z, h;
        for (std::size_t i = 0; i <= res.h.cells(); ++i) {
          z.push_back(res.h.node(i).to_double());
          h.push_back(res.h.h[i].to_double());
        }
        py::dict d;
        d["z"] = z;
        d["H"] = h;
        d["h1_estimate"] = h1_estimate(res.h).to_double();
        d["quarter_residual"] = check_quarter_integral(normalize_h0(res.h)).to_double();
        d["last_change"] = res.last_change().to_double();
        return d;
      },
      py::arg("grid_step") = 1e-4, py::arg("iters") = 100, py::arg("h0") = "const", py::arg("form") = "backward",
      py::arg("rule") = "rectangle");

  m.def(
      "simulate",
      [](const py::object& measure, std::size_t t, std::size_t trials, std::uint64_t seed, std::size_t cap,
         std::size_t threads) {
        const auto e = simulate({as_measure(measure), t, trials, seed, cap, threads});
        py::dict d;
        d["counts"] = e.counts;
        d["trials"] = e.trials;
        d["overflowed"] = e.overflowed;
        return d;
      },
      py::arg("measure"), py::arg("t"), py::arg("trials"), py::arg("seed") = 1, py::arg("cap") = 1000000,
      py::arg("threads") = 0);

  m.def(
      "exact_distribution",
      [](const py::object& measure, std::size_t t, std::size_t n_max) {
        const auto e = exact_distribution(as_measure(measure), t, n_max);
        std::vector<std::string> p;
        for (const auto& x : e.prob) p.push_back(to_fraction_string(x));
        return py::make_tuple(p, to_fraction_string(e.deficit));
      },
      py::arg("measure"), py::arg("t"), py::arg("n_max"));

  m.def(
      "chi_square",
      [](const py::object& measure, std::size_t t, std::size_t trials, std::uint64_t seed, double level,
         std::size_t n_max) {
        const EnvMeasure mu = as_measure(measure);
        const auto c = chi_square_test(simulate({mu, t, trials, seed, 1000000, 0}),
                                       exact_distribution(mu, t, n_max), level);
        py::dict d;
        d["statistic"] = c.statistic;
        d["df"] = c.df;
        d["critical"] = c.critical;
        d["pass"] = c.pass;
        return d;
      },
      py::arg("measure"), py::arg("t"), py::arg("trials"), py::arg("seed") = 1, py::arg("level") = 0.99,
      py::arg("n_max") = 64);
}
