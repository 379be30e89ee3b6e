#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cgoeit/diagnostics.hpp"

namespace py = pybind11;
using namespace cgoeit;

namespace {

using CArray = py::array_t<cdouble, py::array::c_style | py::array::forcecast>;

RunConfig config_from(const std::string& text) {
  const RunConfig c = RunConfig::from_json(Json::parse(text));
  c.validate();
  return c;
}

// Volume samples as an (n, n, n) array indexed [i, j, k] along x, y, z.
py::array volume_array(const VolumeField& f) {
  const auto n = static_cast<py::ssize_t>(f.grid.n);
  const auto s = static_cast<py::ssize_t>(sizeof(cdouble));
  py::array_t<cdouble> a({n, n, n}, {s, s * n, s * n * n});
  std::copy(f.values.data(), f.values.data() + f.values.size(), a.mutable_data());
  return a;
}

py::array matrix_array(const CMatrix& m) {
  py::array_t<cdouble> a({m.rows(), m.cols()});
  auto r = a.mutable_unchecked<2>();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return a;
}

BoundaryOperator operator_from(const CArray& a, int level, OperatorKind kind) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw UsageError("DtN matrix must be square");
  const auto n = static_cast<Eigen::Index>(a.shape(0));
  const int L = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))) - 1;
  if (harmonic_count(L) != n) throw UsageError("DtN matrix size is not (L+1)^2");
  BoundaryOperator op;
  op.kind = kind;
  op.matrix.resize(n, n);
  auto r = a.unchecked<2>();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) op.matrix(i, j) = r(i, j);
  op.level = level;
  op.degree_max = L;
  return op;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Complex admittivity reconstruction from DtN data on the unit ball";

  // Translators run newest first, so base classes are registered first.
  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", error.ptr());
  py::register_exception<SweepAbort>(m, "SweepAbort", error.ptr());
  auto usage = py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<IntegrityError>(m, "IntegrityError", usage.ptr());

  m.def("named_phantom", [](const std::string& name) { return phantom_to_json(named_phantom(name)).dump(); },
        py::arg("name"), "Phantom JSON for a named phantom.");

  m.def(
      "eval_phantom",
      [](const std::string& phantom, int n, double pad) {
        const PhantomSpec s = phantom_from_json(Json::parse(phantom));
        return volume_array(eval_phantom(s, VolumeGrid(n, pad)).gamma);
      },
      py::arg("phantom"), py::arg("n"), py::arg("pad") = 0.1, "gamma on the n^3 grid, indexed [x, y, z].");

  m.def(
      "radial_dtn",
      [](const std::string& phantom, int L) {
        const PhantomSpec s = phantom_from_json(Json::parse(phantom));
        if (!s.is_radial()) throw UsageError("radial_dtn needs a radial phantom");
        py::gil_scoped_release release;
        return radial_dtn(RadialProfile::from_phantom(s), L);
      },
      py::arg("phantom"), py::arg("L"), "DtN eigenvalues lambda_0..lambda_L from the radial ODE.");

  m.def(
      "zeta_frame",
      [](const std::array<double, 3>& xi, double a, int seed) {
        const FrequencyPair p = zeta_frame(Vec3(xi[0], xi[1], xi[2]), a, seed);
        return std::array<cdouble, 3>{p.zeta(0), p.zeta(1), p.zeta(2)};
      },
      py::arg("xi"), py::arg("a"), py::arg("seed") = 0, "zeta with zeta.zeta = 0 and |xi|^2 + 2 zeta.xi = 0.");

  m.def(
      "simulate",
      [](const std::string& config) {
        const RunConfig c = config_from(config);
        Simulation sim;
        {
          py::gil_scoped_release release;
          sim = simulate(c);
        }
        py::dict d;
        d["lambda_gamma"] = matrix_array(sim.lambda_gamma.matrix);
        d["lambda_1"] = matrix_array(sim.lambda_1.matrix);
        d["gamma"] = volume_array(sim.field.gamma);
        d["noise_realized"] = sim.noise_realized;
        d["raw_asymmetry"] = sim.lambda_gamma_clean.raw_asymmetry;
        d["seconds"] = sim.seconds;
        return d;
      },
      py::arg("config"), "Simulate Lambda_gamma and Lambda_1 for a JSON config.");

  m.def(
      "reconstruct",
      [](const std::string& config, const CArray& lambda_gamma, const CArray& lambda_1) {
        const RunConfig c = config_from(config);
        const BoundaryOperator lg = operator_from(lambda_gamma, c.mesh_level, OperatorKind::DtnGamma);
        const BoundaryOperator l1 = operator_from(lambda_1, c.mesh_level, OperatorKind::DtnGamma);
        Reconstruction rec;
        {
          py::gil_scoped_release release;
          rec = reconstruct(c, lg, l1);
        }
        py::dict d;
        d["gamma"] = volume_array(rec.gamma);
        d["q"] = volume_array(rec.q.q);
        d["samples"] = samples_to_json(rec.samples).dump();
        d["gaps_filled"] = rec.spectral.gaps_filled;
        d["seconds"] = rec.seconds;
        return d;
      },
      py::arg("config"), py::arg("lambda_gamma"), py::arg("lambda_1"),
      "Reconstruct gamma from DtN matrices in the real-harmonic basis.");

  m.def(
      "run_simulate",
      [](const std::string& config) {
        const RunConfig c = config_from(config);
        py::gil_scoped_release release;
        return run_simulate(c).dump();
      },
      py::arg("config"));
  m.def(
      "run_reconstruct",
      [](const std::string& config) {
        const RunConfig c = config_from(config);
        py::gil_scoped_release release;
        return run_reconstruct(c).dump();
      },
      py::arg("config"));
  m.def(
      "verify",
      [](const std::string& config) {
        const RunConfig c = config_from(config);
        py::gil_scoped_release release;
        return run_diagnostics(c).to_json().dump();
      },
      py::arg("config"));
}
