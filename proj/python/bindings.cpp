#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtf/bem/calderon2d.hpp"
#include "mtf/bounded.hpp"
#include "mtf/cli/run.hpp"
#include "mtf/errors.hpp"
#include "mtf/mtf1d.hpp"
#include "mtf/spectra.hpp"

namespace py = pybind11;
using namespace mtf;

namespace {

py::dict eig_dict(const num::EigenResult& r) {
  py::dict d;
  d["eigenvalues"] = r.eigenvalues;
  d["residual_norm"] = r.residual_norm;
  if (r.eigenvectors) d["eigenvectors"] = *r.eigenvectors;
  return d;
}

py::dict spectrum_dict(const spectra::SpectrumResult& r) {
  py::dict d;
  d["eigenvalues"] = r.eigenvalues;
  d["spectral_radius"] = r.spectral_radius;
  d["points"] = r.cluster_report.points;
  d["fractions"] = r.cluster_report.fractions;
  d["remainder"] = r.cluster_report.remainder;
  return d;
}

py::dict projector_pair(const bounded::ProjectorPair& p) {
  py::dict d;
  d["p1"] = p.p1.matrix;
  d["p2"] = p.p2.matrix;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mtf, m) {
  m.doc() = "Multitrace formulation kernels";
  py::register_exception<mtf::Error>(m, "MtfError", PyExc_RuntimeError);

  m.def("solve_dense", &num::solve_dense, py::arg("A"), py::arg("B"));
  m.def("eig_dense", [](const num::DenseMatrix& A, bool vectors) {
    return eig_dict(num::eig_dense(A, vectors));
  }, py::arg("A"), py::arg("want_vectors") = false);
  m.def("eig_generalized", [](const num::DenseMatrix& A, const num::DenseMatrix& B, bool vectors) {
    return eig_dict(num::eig_generalized(A, B, vectors));
  }, py::arg("A"), py::arg("B"), py::arg("want_vectors") = false);

  m.def("green_1d", &oned::green_1d, py::arg("a"), py::arg("x"));
  m.def("calderon_halfline", [](double a) {
    return oned::calderon_halfline(a, oned::Side::Plus).matrix;
  }, py::arg("a"));
  m.def("calderon_middle_3dom", [](double a) { return oned::calderon_middle_3dom(a).matrix; },
        py::arg("a"));
  m.def("jacobi_operator_2dom", [](double a, num::Complex s1, num::Complex s2, double alpha, double beta) {
    const auto op = oned::jacobi_operator_2dom(a, s1, s2, {alpha, beta, 0.0});
    return py::make_tuple(op.matrix, op.rhs_tilde);
  }, py::arg("a"), py::arg("sigma1"), py::arg("sigma2"), py::arg("alpha") = 0.0,
     py::arg("beta") = 0.0, "Returns (J, F) of the two-subdomain block-Jacobi iteration.");
  m.def("jacobi_operator_3dom", [](double a, num::Complex s0, num::Complex s1, num::Complex s2,
                                   std::vector<double> jumps) {
    if (jumps.size() != 4) throw InvalidArgument("mtf1d", "three-subdomain jumps need 4 values");
    const auto op = oned::jacobi_operator_3dom(a, s0, s1, s2, {jumps[0], jumps[1], jumps[2], jumps[3]});
    return py::make_tuple(op.matrix, op.rhs_tilde);
  }, py::arg("a"), py::arg("sigma0"), py::arg("sigma1"), py::arg("sigma2"),
     py::arg("jumps") = std::vector<double>{0.0, 0.0, 0.0, 0.0});
  m.def("block_jacobi_errors", [](const num::DenseMatrix& J, const num::Vector& F,
                                  const num::Vector& start, int steps) {
    oned::JacobiOperator1D op{J, F, {}};
    return oned::block_jacobi_run(op, start, steps).errors;
  }, py::arg("J"), py::arg("F"), py::arg("start"), py::arg("steps"));
  m.def("theoretical_spectrum", &oned::theoretical_spectrum, py::arg("sigmas"));

  m.def("calderon_bounded", [](double a, double gamma) {
    return projector_pair(bounded::calderon_bounded({gamma, a}));
  }, py::arg("a"), py::arg("gamma"));
  m.def("dtn_operators", [](double a, double gamma) {
    const auto d = bounded::dtn_operators({gamma, a});
    py::dict out;
    out["dtn1"] = d.dtn1;
    out["dtn2"] = d.dtn2;
    out["ntd1"] = d.ntd1;
    out["ntd2"] = d.ntd2;
    return out;
  }, py::arg("a"), py::arg("gamma"));
  m.def("calderon_from_dtn", [](double a, double gamma) {
    return projector_pair(bounded::calderon_from_dtn(bounded::dtn_operators({gamma, a})));
  }, py::arg("a"), py::arg("gamma"));
  m.def("equivalence_check", [](double a, double gamma, std::vector<double> start, int steps) {
    if (start.size() != 4) throw InvalidArgument("mtf1d_bounded", "start state needs 4 values");
    const auto r = bounded::equivalence_check({gamma, a}, {start[0], start[1], start[2], start[3]}, steps);
    py::dict out;
    out["deviations"] = r.deviations;
    out["max_deviation"] = r.max_deviation;
    out["schwarz_zero_step"] = r.schwarz_zero_step;
    out["jacobi_zero_step"] = r.jacobi_zero_step;
    return out;
  }, py::arg("a"), py::arg("gamma"), py::arg("start"), py::arg("steps") = 4);

  m.def("kernel_2d", &bem::kernel_2d, py::arg("a"), py::arg("r"));

  py::class_<bem::BoundaryMesh>(m, "BoundaryMesh")
      .def_property_readonly("nodes", [](const bem::BoundaryMesh& mesh) { return mesh.nodes; })
      .def_property_readonly("elements", [](const bem::BoundaryMesh& mesh) {
        std::vector<std::array<int, 3>> out;
        for (const auto& e : mesh.elements) out.push_back({e.n0, e.n1, e.curve});
        return out;
      })
      .def_readonly("orientation", &bem::BoundaryMesh::orientation)
      .def("total_length", &bem::BoundaryMesh::total_length)
      .def("flipped", &bem::BoundaryMesh::flipped);
  m.def("make_circle", [](int n, double r) { return bem::make_circle(n, r); }, py::arg("n"),
        py::arg("radius") = 1.0);
  m.def("make_square", [](int n, double side) { return bem::make_square(n, side); },
        py::arg("n_per_side"), py::arg("side") = 1.0);

  m.def("assemble_operators", [](const bem::BoundaryMesh& mesh, double a, int order) {
    const auto ops = bem::assemble_operators(mesh, {a, order});
    py::dict d;
    d["V"] = ops.V;
    d["K"] = ops.K;
    d["Kp"] = ops.Kp;
    d["W"] = ops.W;
    d["M"] = ops.M;
    return d;
  }, py::arg("mesh"), py::arg("a"), py::arg("quadrature_order") = 8);
  m.def("assemble_calderon_2d", [](const bem::BoundaryMesh& mesh, double a, const std::string& side,
                                   int order) {
    if (side != "interior" && side != "exterior") {
      throw InvalidArgument("bem2d", "side must be 'interior' or 'exterior'");
    }
    const auto p = bem::assemble_calderon_2d(
        mesh, {a, order}, side == "interior" ? bem::DomainSide::Interior : bem::DomainSide::Exterior);
    return py::make_tuple(p.P, p.M_block);
  }, py::arg("mesh"), py::arg("a"), py::arg("side") = "interior", py::arg("quadrature_order") = 8,
     "Returns (P, M_block).");
  m.def("spectrum_2d", [](const bem::BoundaryMesh& mesh, double a1, double a2, num::Complex s1,
                          num::Complex s2, double epsilon) {
    const auto p1 = bem::assemble_calderon_2d(mesh, {a1, 8}, bem::DomainSide::Interior);
    const auto p2 = a1 == a2 ? bem::complement_projector(p1)
                             : bem::assemble_calderon_2d(mesh.flipped(), {a2, 8},
                                                         bem::DomainSide::Exterior);
    const std::vector<num::Complex> sig = {s1, s2};
    return spectrum_dict(spectra::analyze(spectra::jacobi_2d_2dom(p1, p2, {sig}), sig, epsilon));
  }, py::arg("mesh"), py::arg("a1"), py::arg("a2"), py::arg("sigma1"), py::arg("sigma2"),
     py::arg("epsilon") = 0.05);
  m.def("cluster_report", [](const std::vector<num::Complex>& eigs,
                             const std::vector<num::Complex>& points, double eps) {
    const auto r = spectra::cluster_report(eigs, points, eps);
    return py::make_tuple(r.fractions, r.remainder);
  }, py::arg("eigenvalues"), py::arg("points"), py::arg("epsilon"));

  m.def("run", [](const py::dict& config) {
    const std::string text = py::str(py::module_::import("json").attr("dumps")(config));
    const auto cfg = cli::from_json(nlohmann::json::parse(text));
    const auto report = cli::run(cfg);
    return py::module_::import("json").attr("loads")(report.json.dump());
  }, py::arg("config"), "Runs one CLI mode from a config dict and returns the report.");
}
