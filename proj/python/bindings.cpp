#include "curvhom/errors.hpp"
#include "curvhom/field.hpp"
#include "curvhom/frames.hpp"
#include "curvhom/geometry.hpp"
#include "curvhom/invariant.hpp"
#include "curvhom/io.hpp"
#include "curvhom/model.hpp"
#include "curvhom/spectral.hpp"
#include "curvhom/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

namespace py = pybind11;
using namespace curvhom;

namespace {

template <std::size_t Rank>
py::array_t<double> to_array(const DenseTensor<Rank>& t) {
  std::vector<py::ssize_t> shape(Rank, t.dim());
  py::array_t<double> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

Tensor4 from_array4(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 4) throw std::invalid_argument("expected a rank-4 array");
  const auto d = a.shape(0);
  for (int k = 1; k < 4; ++k) {
    if (a.shape(k) != d) throw std::invalid_argument("expected equal extents");
  }
  Tensor4 t(static_cast<int>(d));
  std::copy(a.data(), a.data() + a.size(), t.data().begin());
  return t;
}

Point make_point(const Eigen::VectorXd& x, const std::optional<Eigen::VectorXd>& y) {
  Point P = Point::at_x(x);
  if (y) {
    if (y->size() != x.size()) throw std::invalid_argument("x and y differ in length");
    P.y = *y;
  }
  return P;
}

// JSON documents cross the boundary as text; the package decodes them.
std::string dump(const nlohmann::json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curvature homogeneity tools for the metrics g_f on the cotangent bundle.";

  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_RuntimeError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<FieldSpec>(m, "Field")
      .def(py::init([](const std::string& source, int p) { return parse_field(source, p); }),
           py::arg("source"), py::arg("p"))
      .def_static(
          "from_theta",
          [](const std::string& theta, int p) { return canonical_f(parse_field(theta, 1), p); },
          py::arg("theta"), py::arg("p"))
      .def_property_readonly("p", &FieldSpec::p)
      .def("__str__", &FieldSpec::to_string)
      .def("__repr__", [](const FieldSpec& f) {
        return "Field('" + f.to_string() + "', p=" + std::to_string(f.p()) + ")";
      })
      .def("__call__", [](const FieldSpec& f, const std::vector<double>& x) { return f.value(x); })
      .def("jet", [](const FieldSpec& f, const std::vector<double>& x) {
        const Jet3 j = jet3(f, x);
        py::dict d;
        d["value"] = j.value;
        d["grad"] = j.grad;
        d["hess"] = j.hess;
        d["third"] = to_array(j.third);
        return d;
      });

  m.def(
      "metric",
      [](const FieldSpec& f, const Eigen::VectorXd& x) { return metric_at(f, Point::at_x(x)).g; },
      py::arg("field"), py::arg("x"));
  m.def(
      "second_ff",
      [](const FieldSpec& f, const Eigen::VectorXd& x) { return second_ff(f, Point::at_x(x)).L; },
      py::arg("field"), py::arg("x"));
  m.def(
      "curvature",
      [](const FieldSpec& f, const Eigen::VectorXd& x) {
        return to_array(curvature_gauss(second_ff(f, Point::at_x(x))));
      },
      py::arg("field"), py::arg("x"), "x-block of R, shape (p, p, p, p).");
  m.def(
      "nabla_curvature",
      [](const FieldSpec& f, const Eigen::VectorXd& x) {
        return to_array(nabla_curvature(f, Point::at_x(x)));
      },
      py::arg("field"), py::arg("x"), "x-block of nabla R, shape (p, p, p, p, p).");
  m.def(
      "_tensor_dump",
      [](const FieldSpec& f, const Eigen::VectorXd& x, const std::optional<Eigen::VectorXd>& y) {
        return dump(tensor_dump(f, make_point(x, y)));
      },
      py::arg("field"), py::arg("x"), py::arg("y") = py::none());

  m.def(
      "alpha",
      [](const FieldSpec& f, const Eigen::VectorXd& x, const std::optional<Eigen::VectorXd>& y) {
        return alpha(f, make_point(x, y));
      },
      py::arg("field"), py::arg("x"), py::arg("y") = py::none());
  m.def(
      "alpha_via_phi",
      [](const FieldSpec& f, const Eigen::VectorXd& x) { return alpha_via_phi(f, Point::at_x(x)); },
      py::arg("field"), py::arg("x"));
  m.def("alpha_closed_form", &alpha_closed_form, py::arg("theta"), py::arg("x1"), py::arg("p"));
  m.def(
      "_scan_alpha",
      [](const FieldSpec& f, const std::vector<std::tuple<double, double, int>>& axes) {
        Grid g;
        for (const auto& [a, b, n] : axes) g.axes.push_back({a, b, n});
        const AlphaScan scan = scan_alpha(f, g);
        return py::make_tuple(alpha_csv(scan, f.p()), dump(alpha_summary(scan)));
      },
      py::arg("field"), py::arg("axes"));

  m.def(
      "build_R_phi", [](const Eigen::MatrixXd& phi) { return to_array(build_R_phi(phi)); },
      py::arg("phi"));
  m.def(
      "recover_phi",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& R) {
        const Recovery r = recover_phi(from_array4(R));
        return py::make_tuple(r.phi, r.residual, r.iterations);
      },
      py::arg("R"), "Returns (phi, residual, iterations).");
  m.def(
      "_model_dump", [](int p) { return dump(model_dump(model_space(p))); }, py::arg("p"));

  m.def(
      "admissible_basis",
      [](const FieldSpec& f, const Eigen::VectorXd& x, const std::optional<Eigen::VectorXd>& y) {
        return admissible_basis(f, make_point(x, y)).basis;
      },
      py::arg("field"), py::arg("x"), py::arg("y") = py::none(),
      "Columns X_1..X_p, Y_1..Y_p in coordinates (x, y).");
  m.def(
      "_basis_dump",
      [](const FieldSpec& f, const Eigen::VectorXd& x, const std::optional<Eigen::VectorXd>& y,
         double tol) {
        const Point P = make_point(x, y);
        const AdmissibleBasis B = admissible_basis(f, P);
        return dump(basis_dump(B, is_admissible(B.basis, f, P, tol)));
      },
      py::arg("field"), py::arg("x"), py::arg("y") = py::none(), py::arg("tol") = 1e-9);

  m.def(
      "_sample_constancy",
      [](const std::string& kind, const FieldSpec& f, const Eigen::VectorXd& x, int n,
         std::uint64_t seed, double tol) {
        return dump(spectral_json(sample_constancy(parse_kind(kind), f, Point::at_x(x), n, seed, tol)));
      },
      py::arg("kind"), py::arg("field"), py::arg("x"), py::arg("n") = 50, py::arg("seed") = 1729,
      py::arg("tol") = kEigenvalueTolerance);

  m.def(
      "_run_verify",
      [](const FieldSpec& f, const std::optional<FieldSpec>& theta, std::uint64_t seed,
         std::optional<double> tol, int points) {
        const VerifyReport rep = run_verify({f, theta, seed, tol, points});
        py::list out;
        for (const CheckResult& c : rep.checks) {
          py::dict d;
          d["name"] = c.name;
          d["residual"] = c.residual;
          d["tolerance"] = c.tolerance;
          d["pass"] = c.pass;
          d["skipped"] = c.skipped;
          d["note"] = c.note;
          out.append(d);
        }
        return out;
      },
      py::arg("field"), py::arg("theta") = py::none(), py::arg("seed") = 1729,
      py::arg("tol") = py::none(), py::arg("points") = 10);
}
