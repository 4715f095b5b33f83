// Python bindings. Spectral fields cross the boundary as complex numpy arrays
// of shape (components, n, ..., n) in the grid's coefficient convention;
// physical samples as real arrays of the same shape.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sobolev/calculus.hpp"
#include "sobolev/config.hpp"
#include "sobolev/conjugation.hpp"
#include "sobolev/epdiff.hpp"
#include "sobolev/initial_data.hpp"
#include "sobolev/lagrangian.hpp"
#include "sobolev/operator.hpp"
#include "sobolev/scenarios.hpp"
#include "sobolev/symbol.hpp"

namespace py = pybind11;
using namespace sobolev;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> field_shape(const TorusGrid& g, int components) {
  std::vector<py::ssize_t> shape{components};
  for (int a = 0; a < g.dim(); ++a) shape.push_back(g.points());
  return shape;
}

int components_of(const TorusGrid& g, const py::buffer_info& info) {
  if (info.ndim != g.dim() + 1) throw py::value_error("array must have shape (components, n, ..., n)");
  for (int a = 0; a < g.dim(); ++a)
    if (info.shape[a + 1] != g.points()) throw py::value_error("array does not match the grid");
  return static_cast<int>(info.shape[0]);
}

SpectralField to_field(const TorusGrid& g, const ComplexArray& a) {
  const auto info = a.request();
  const int c = components_of(g, info);
  const auto* p = static_cast<const Complex*>(info.ptr);
  return SpectralField(g, c, std::vector<Complex>(p, p + c * g.size()));
}

ComplexArray from_field(const SpectralField& f) {
  ComplexArray out(field_shape(f.grid(), f.components()));
  std::copy(f.coeffs().begin(), f.coeffs().end(), out.mutable_data());
  return out;
}

RealArray from_real(const RealField& f) {
  RealArray out(field_shape(f.grid(), f.components()));
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

Frequency to_xi(const std::vector<double>& xi) {
  Frequency f(static_cast<Eigen::Index>(xi.size()));
  for (std::size_t i = 0; i < xi.size(); ++i) f(static_cast<Eigen::Index>(i)) = xi[i];
  return f;
}

py::array_t<Complex> from_matrix(const Matrix& m) {
  py::array_t<Complex> out({m.rows(), m.cols()});
  auto r = out.mutable_unchecked<2>();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return out;
}

Matrix to_matrix(const ComplexArray& a) {
  const auto info = a.request();
  if (info.ndim != 2 || info.shape[0] != info.shape[1] || info.shape[0] < 1 || info.shape[0] > 4)
    throw py::value_error("expected a square matrix of size 1..4");
  const Eigen::Index n = info.shape[0];
  Matrix m(n, n);
  const auto* p = static_cast<const Complex*>(info.ptr);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = p[i * n + j];
  return m;
}

py::dict to_dict(const Report& r) {
  py::dict d;
  for (const auto& [k, v] : r.entries()) d[py::str(k)] = v;
  return d;
}

std::vector<SpectralField> to_fields(const TorusGrid& g, const std::vector<ComplexArray>& arrays) {
  std::vector<SpectralField> out;
  for (const auto& a : arrays) out.push_back(to_field(g, a));
  return out;
}

py::dict trajectory_dict(const Trajectory& tr) {
  py::dict d;
  d["status"] = std::string(to_string(tr.status));
  d["steps"] = tr.steps;
  d["threshold"] = tr.threshold;
  d["crossing_time"] = tr.crossing_time ? py::cast(*tr.crossing_time) : py::none();
  d["message"] = tr.message;
  const py::ssize_t rows = static_cast<py::ssize_t>(tr.rows.size());
  const py::ssize_t dim = rows ? static_cast<py::ssize_t>(tr.rows[0].momentum.size()) : 0;
  const py::ssize_t nq = rows ? static_cast<py::ssize_t>(tr.rows[0].sobolev_norms.size()) : 0;
  py::array_t<double> t(rows), e(rows), g(rows), mom({rows, dim}), norms({rows, nq});
  for (py::ssize_t i = 0; i < rows; ++i) {
    const auto& row = tr.rows[i];
    t.mutable_at(i) = row.t;
    e.mutable_at(i) = row.energy;
    g.mutable_at(i) = row.sup_grad_u;
    for (py::ssize_t c = 0; c < dim; ++c) mom.mutable_at(i, c) = row.momentum[c];
    for (py::ssize_t q = 0; q < nq; ++q) norms.mutable_at(i, q) = row.sobolev_norms[q];
  }
  d["t"] = t;
  d["energy"] = e;
  d["momentum"] = mom;
  d["sup_grad_u"] = g;
  d["sobolev_norms"] = norms;
  d["u"] = from_field(tr.last_good.u);
  d["t_final"] = tr.last_good.t;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sobolev, m) {
  m.doc() = "Sobolev metrics on the torus: spectral calculus, symbol certificates, EPDiff";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NotElliptic>(m, "NotElliptic", PyExc_ValueError);
  py::register_exception<SymbolDomainError>(m, "SymbolDomainError", PyExc_ValueError);
  py::register_exception<InvalidChart>(m, "InvalidChart", PyExc_ValueError);
  py::register_exception<InversionFailure>(m, "InversionFailure", PyExc_RuntimeError);
  py::register_exception<GridMismatch>(m, "GridMismatch", PyExc_ValueError);

  py::class_<TorusGrid>(m, "TorusGrid")
      .def(py::init<int, int, double>(), py::arg("dim"), py::arg("points"), py::arg("length") = 1.0)
      .def_property_readonly("dim", &TorusGrid::dim)
      .def_property_readonly("points", &TorusGrid::points)
      .def_property_readonly("length", &TorusGrid::length)
      .def_property_readonly("size", &TorusGrid::size)
      .def("__repr__", [](const TorusGrid& g) {
        std::ostringstream os;
        os << "TorusGrid(dim=" << g.dim() << ", points=" << g.points() << ", length=" << g.length() << ")";
        return os.str();
      });

  // grid
  m.def("forward_transform", [](const TorusGrid& g, const RealArray& samples) {
        const auto info = samples.request();
        const int c = components_of(g, info);
        const auto* p = static_cast<const double*>(info.ptr);
        return from_field(forward_transform(RealField(g, c, std::vector<double>(p, p + c * g.size()))));
      }, py::arg("grid"), py::arg("samples"));
  m.def("inverse_transform", [](const TorusGrid& g, const ComplexArray& c) {
        return from_real(inverse_transform(to_field(g, c)));
      }, py::arg("grid"), py::arg("coeffs"));
  m.def("spectral_gradient", [](const TorusGrid& g, const ComplexArray& u, int axis) {
        return from_field(spectral_gradient(to_field(g, u), axis));
      }, py::arg("grid"), py::arg("u"), py::arg("axis"));
  m.def("dealiased_product", [](const TorusGrid& g, const ComplexArray& f, const ComplexArray& h) {
        return from_field(dealiased_product(to_field(g, f), to_field(g, h)));
      }, py::arg("grid"), py::arg("f"), py::arg("g"));
  m.def("sup_gradient_norm", [](const TorusGrid& g, const ComplexArray& u) {
        return sup_gradient_norm(to_field(g, u));
      }, py::arg("grid"), py::arg("u"));

  // initial data
  m.def("gaussian_blob", [](const TorusGrid& g, double amplitude, double width, std::vector<double> center) {
        Point c{0, 0, 0};
        if (center.empty()) center.assign(g.dim(), 0.5 * g.length());
        if (static_cast<int>(center.size()) != g.dim()) throw py::value_error("center needs one entry per axis");
        for (int a = 0; a < g.dim(); ++a) c[a] = center[a];
        return from_field(gaussian_blob(g, amplitude, width, c));
      }, py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("width") = 0.1, py::arg("center") = std::vector<double>{});
  m.def("random_bandlimited", [](const TorusGrid& g, int band, double q, double norm, std::uint64_t seed) {
        return from_field(random_bandlimited(g, g.dim(), band, q, norm, seed));
      }, py::arg("grid"), py::arg("band"), py::arg("q") = 0.0, py::arg("norm") = 1.0, py::arg("seed") = 0);
  m.def("peakon_pair", [](const TorusGrid& g, double amplitude, double separation, double ell, double delta) {
        return from_field(peakon_pair(g, amplitude, separation, ell, delta));
      }, py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("separation") = 0.2, py::arg("ell") = 0.2,
      py::arg("delta") = 0.02);

  // symbols
  py::class_<MatrixSymbol>(m, "MatrixSymbol")
      .def_property_readonly("dim", &MatrixSymbol::dim)
      .def_property_readonly("order", &MatrixSymbol::order)
      .def_property_readonly("name", &MatrixSymbol::name)
      .def("__call__", [](const MatrixSymbol& a, const std::vector<double>& xi) {
        if (static_cast<int>(xi.size()) != a.dim()) throw py::value_error("xi has the wrong dimension");
        return from_matrix(a(to_xi(xi)));
      })
      .def("principal", &MatrixSymbol::principal);
  m.def("sobolev_symbol", &sobolev_symbol, py::arg("s"), py::arg("dim"));
  m.def("shear_laplacian_symbol", &shear_laplacian_symbol, py::arg("t"));
  m.def("random_hpd_symbol", &random_hpd_symbol, py::arg("dim"), py::arg("order"), py::arg("seed"));
  m.def("sqrt_symbol", [](const MatrixSymbol& a) { return sqrt_symbol(a); }, py::arg("symbol"));
  m.def("check_order_estimate", [](const MatrixSymbol& a, int max_alpha, double xi_max) {
        return to_dict(check_order_estimate(a, max_alpha, xi_max).report());
      }, py::arg("symbol"), py::arg("max_alpha") = 2, py::arg("xi_max") = 1e3);
  m.def("check_ellipticity", [](const MatrixSymbol& a, double xi_max) {
        return to_dict(check_ellipticity(a, xi_max).report());
      }, py::arg("symbol"), py::arg("xi_max") = 1e3);
  m.def("check_normal_ellipticity", [](const MatrixSymbol& p, int samples) {
        return to_dict(check_normal_ellipticity(p, samples).report());
      }, py::arg("principal"), py::arg("sphere_samples") = 10000);
  m.def("check_strong_ellipticity", [](const MatrixSymbol& p, int samples) {
        return to_dict(check_strong_ellipticity(p, samples).report());
      }, py::arg("principal"), py::arg("sphere_samples") = 10000);
  m.def("sylvester_solve", [](const ComplexArray& b, const ComplexArray& a) {
        return from_matrix(sylvester_solve(to_matrix(b), to_matrix(a)));
      }, py::arg("b"), py::arg("a"));
  m.def("sylvester_bound", [](const ComplexArray& b, const ComplexArray& a) {
        return sylvester_bound(to_matrix(b), to_matrix(a));
      }, py::arg("b"), py::arg("a"));

  // operators
  py::class_<FourierMultiplier, std::shared_ptr<FourierMultiplier>>(m, "FourierMultiplier")
      .def(py::init<TorusGrid, MatrixSymbol, double>(), py::arg("grid"), py::arg("symbol"),
           py::arg("ellipticity_xi_max") = 1e3)
      .def_property_readonly("grid", &FourierMultiplier::grid)
      .def_property_readonly("invertible", &FourierMultiplier::invertible)
      .def("apply", [](const FourierMultiplier& a, const ComplexArray& u) {
        return from_field(a.apply(to_field(a.grid(), u)));
      })
      .def("apply_inverse", [](const FourierMultiplier& a, const ComplexArray& w) {
        return from_field(a.apply_inverse(to_field(a.grid(), w)));
      })
      .def("inner_product", [](const FourierMultiplier& a, const ComplexArray& u, const ComplexArray& v) {
        return inner_product(a, to_field(a.grid(), u), to_field(a.grid(), v));
      });
  m.def("sobolev_multiplier", [](const TorusGrid& g, double s) {
        return std::make_shared<FourierMultiplier>(g, sobolev_symbol(s, g.dim()));
      }, py::arg("grid"), py::arg("s"));
  m.def("sobolev_norm", [](const TorusGrid& g, const ComplexArray& u, double q) {
        return sobolev_norm(to_field(g, u), q);
      }, py::arg("grid"), py::arg("u"), py::arg("q"));

  // conjugation
  m.def("apply_An_recursive", [](const FourierMultiplier& a, int n, const std::vector<ComplexArray>& u) {
        return from_field(apply_An_recursive(a, n, to_fields(a.grid(), u)));
      }, py::arg("multiplier"), py::arg("n"), py::arg("fields"));
  m.def("apply_An_convolution", [](const FourierMultiplier& a, int n, const std::vector<ComplexArray>& u) {
        return from_field(apply_An_convolution(a.symbol(), n, to_fields(a.grid(), u)));
      }, py::arg("multiplier"), py::arg("n"), py::arg("fields"));
  m.def("estimate_Cn", [](const MatrixSymbol& a, int n, double xi_max) {
        TupleSampling s;
        s.xi_max = xi_max;
        return estimate_Cn(a, n, s).ratio;
      }, py::arg("symbol"), py::arg("n"), py::arg("xi_max") = 1e3);
  m.def("verify_sn_identity", [](const MatrixSymbol& a, int max_n, int tuples, std::uint64_t seed) {
        return to_dict(verify_sn_identity(a, max_n, tuples, seed).report());
      }, py::arg("symbol"), py::arg("max_n") = 2, py::arg("tuples") = 100, py::arg("seed") = 0);

  // EPDiff
  m.def("euler_rhs", [](const FourierMultiplier& a, const ComplexArray& mom) {
        return from_field(euler_rhs(a, to_field(a.grid(), mom)));
      }, py::arg("multiplier"), py::arg("m"));
  m.def("ad_transpose", [](const FourierMultiplier& a, const ComplexArray& v, const ComplexArray& u) {
        return from_field(ad_transpose(a, to_field(a.grid(), v), to_field(a.grid(), u)));
      }, py::arg("multiplier"), py::arg("v"), py::arg("u"));
  m.def("arnold_B", [](const FourierMultiplier& a, const ComplexArray& u, const ComplexArray& v) {
        return from_field(arnold_B(a, to_field(a.grid(), u), to_field(a.grid(), v)));
      }, py::arg("multiplier"), py::arg("u"), py::arg("v"));
  m.def("integrate", [](const FourierMultiplier& a, const ComplexArray& u0, double dt, double t_end, int cadence,
                        std::vector<double> norms, std::optional<double> threshold, double cfl) {
        IntegratorOptions opt;
        opt.dt = dt;
        opt.t_end = t_end;
        opt.cadence = cadence;
        opt.norm_orders = std::move(norms);
        opt.blowup_threshold = threshold;
        opt.cfl = cfl;
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = integrate(a, state_from_velocity(a, to_field(a.grid(), u0)), opt);
        }
        return trajectory_dict(tr);
      }, py::arg("multiplier"), py::arg("u0"), py::arg("dt"), py::arg("t_end"), py::arg("cadence") = 1,
      py::arg("norms") = std::vector<double>{}, py::arg("blowup_threshold") = py::none(), py::arg("cfl") = 0.5);
  m.def("detect_blowup", [](const FourierMultiplier& a, const ComplexArray& u0, double dt, double t_end,
                            std::optional<double> threshold) {
        IntegratorOptions opt;
        opt.dt = dt;
        opt.t_end = t_end;
        opt.cadence = 1000000;
        opt.blowup_threshold = threshold;
        BlowupVerdict v;
        {
          const EulerState s0 = state_from_velocity(a, to_field(a.grid(), u0));
          py::gil_scoped_release release;
          v = detect_blowup(a, s0, opt);
        }
        py::dict d;
        d["blowup"] = v.blowup;
        d["confirmed"] = v.confirmed;
        d["t_star"] = v.t_star;
        d["t_star_refined"] = v.t_star_refined;
        d["relative_shift"] = v.relative_shift;
        d["summary"] = v.summary();
        return d;
      }, py::arg("multiplier"), py::arg("u0"), py::arg("dt"), py::arg("t_end"),
      py::arg("blowup_threshold") = py::none());

  // Lagrangian
  m.def("lagrangian_velocity", [](const FourierMultiplier& a, const ComplexArray& u0, double dt, double t_end) {
        const LagrangianRun run = integrate_lagrangian(a, to_field(a.grid(), u0), dt, t_end);
        return from_field(eulerian_velocity(run.final_state));
      }, py::arg("multiplier"), py::arg("u0"), py::arg("dt"), py::arg("t_end"),
      "Integrates the geodesic spray and returns the Eulerian velocity v o phi^-1 at t_end.");

  // runner
  m.def("list_scenarios", &list_scenarios_text);
  m.def("run_config", [](const std::string& path, std::optional<std::string> output_dir) {
        RunConfig c = load_config(path);
        if (output_dir) c.output_dir = *output_dir;
        std::ostringstream log;
        const ScenarioResult r = run_scenario(c, log, true);
        return py::make_tuple(r.exit_code, to_dict(r.summary));
      }, py::arg("path"), py::arg("output_dir") = py::none());
}
