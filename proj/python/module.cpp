// Python bindings for the lorentzlab core: models, isometries, the frustum
// actions and the experiment runners.

#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "lorentzlab/errors.hpp"
#include "lorentzlab/euclid.hpp"
#include "lorentzlab/experiments.hpp"
#include "lorentzlab/horoboundary.hpp"
#include "lorentzlab/isometry.hpp"
#include "lorentzlab/models.hpp"

namespace py = pybind11;
using namespace lorentzlab;

namespace {

SparseVec vec_from_dict(const py::dict& d) {
  std::vector<SparseVec::Entry> entries;
  for (const auto& item : d)
    entries.emplace_back(item.first.cast<std::size_t>(),
                         item.second.cast<double>());
  return SparseVec(entries);
}

py::dict vec_to_dict(const SparseVec& v) {
  py::dict d;
  for (const auto& [i, x] : v.entries()) d[py::int_(i)] = x;
  return d;
}

}  // namespace

PYBIND11_MODULE(lorentzlab, m) {
  m.doc() = "Computable geometry of the separable infinite dimensional "
            "hyperbolic space and its Hilbert sibling";

  py::register_exception<Error>(m, "LorentzlabError");

  py::class_<SparseVec>(m, "SparseVec")
      .def(py::init(&vec_from_dict))
      .def_static("unit", &SparseVec::unit)
      .def("to_dict", &vec_to_dict)
      .def("norm", &SparseVec::norm)
      .def("dot", &SparseVec::dot)
      .def("__getitem__",
           [](const SparseVec& v, std::size_t i) { return v[i]; })
      .def("__add__",
           [](const SparseVec& a, const SparseVec& b) { return a + b; })
      .def("__sub__",
           [](const SparseVec& a, const SparseVec& b) { return a - b; })
      .def("__neg__", [](const SparseVec& v) { return -v; })
      .def("__mul__", [](const SparseVec& v, double s) { return v * s; })
      .def("__repr__", [](const SparseVec& v) {
        std::string s = "SparseVec{";
        bool first = true;
        for (const auto& [i, x] : v.entries()) {
          if (!first) s += ", ";
          first = false;
          s += std::to_string(i) + ": " + std::to_string(x);
        }
        return s + "}";
      });

  m.def("apply_J", &apply_J);
  m.def("lorentz_form", &lorentz_form);
  m.def("q_form", &q_form);

  py::class_<HPoint>(m, "HPoint")
      .def(py::init<SparseVec>())
      .def_static("origin", &HPoint::origin)
      .def("coords", &HPoint::coords);
  py::class_<IdealPoint>(m, "IdealPoint")
      .def(py::init<const SparseVec&>())
      .def("coords", &IdealPoint::coords);
  py::class_<BallPoint>(m, "BallPoint")
      .def(py::init<SparseVec, bool>(), py::arg("coords"),
           py::arg("closed") = false)
      .def("coords", &BallPoint::coords)
      .def("norm", &BallPoint::norm);
  py::class_<Geodesic>(m, "Geodesic")
      .def(py::init<HPoint, SparseVec>())
      .def("base", &Geodesic::base)
      .def("direction", &Geodesic::direction);

  m.def("dist", &dist);
  m.def("from_klein", &from_klein);
  m.def("to_klein", &to_klein);
  m.def("to_klein_ideal", &to_klein_ideal);
  m.def("geodesic_through", &geodesic_through);
  m.def("geodesic_toward", &geodesic_toward);
  m.def("geodesic_eval", &geodesic_eval);
  m.def("midpoint", &midpoint);
  m.def("ideal_endpoint", &ideal_endpoint);
  m.def("angle",
        py::overload_cast<const HPoint&, const HPoint&, const HPoint&>(&angle));
  m.def("angle_ideal",
        py::overload_cast<const HPoint&, const IdealPoint&, const IdealPoint&>(
            &angle));
  m.def("busemann", &busemann);
  m.def("sigma_hilbert", &sigma_hilbert);
  m.def("sigma_hilbert_inverse", &sigma_hilbert_inverse);

  py::enum_<IsometryClass>(m, "IsometryClass")
      .value("Elliptic", IsometryClass::Elliptic)
      .value("Parabolic", IsometryClass::Parabolic)
      .value("Hyperbolic", IsometryClass::Hyperbolic);

  py::class_<HypIsometry>(m, "HypIsometry")
      .def(py::init<IndexSet, Eigen::MatrixXd>())
      .def_static("identity", &HypIsometry::identity)
      .def("active", &HypIsometry::active)
      .def("block", &HypIsometry::block)
      .def("orthogonality_defect", &HypIsometry::orthogonality_defect)
      .def("apply",
           py::overload_cast<const SparseVec&>(&HypIsometry::apply, py::const_))
      .def("apply",
           py::overload_cast<const HPoint&>(&HypIsometry::apply, py::const_))
      .def("apply", py::overload_cast<const IdealPoint&>(&HypIsometry::apply,
                                                         py::const_));
  m.def("compose", &compose);
  m.def("inverse", &inverse);
  m.def("renormalize", &renormalize);
  m.def("rotation_mapping", &rotation_mapping);
  m.def("transvection", &transvection);
  m.def("symmetry", &symmetry);
  m.def("match_pointwise", &match_pointwise);
  m.def("pointwise_dist", &pointwise_dist);
  m.def("classify", &classify);
  m.def("translation_length", &translation_length);
  m.def("cartan_decompose", &cartan_decompose);
  m.def("symmetry_decompose", &symmetry_decompose);
  m.def("adjust_distance_rotation", &adjust_distance_rotation);
  m.def("steinhaus_factor", &steinhaus_factor);

  py::class_<LorentzFrame>(m, "LorentzFrame")
      .def(py::init<>())
      .def_readwrite("positive", &LorentzFrame::positive)
      .def_readwrite("negatives", &LorentzFrame::negatives);
  m.def("q_orthonormalize", &q_orthonormalize);

  py::class_<FrustumPoint>(m, "FrustumPoint")
      .def(py::init<BallPoint, double>())
      .def("x", &FrustumPoint::x)
      .def("r", &FrustumPoint::r);
  m.def("horofunction_eval", &horofunction_eval);
  m.def("embed_point", &embed_point);
  m.def("horo_compare", &horo_compare);
  m.def("frustum_action", &frustum_action);
  m.def("busemann_hom", &busemann_hom);
  m.def("cocycle", &cocycle);
  m.def("cocycle_ext", &cocycle_ext);

  py::class_<EucIsometry>(m, "EucIsometry")
      .def(py::init<IndexSet, Eigen::MatrixXd, SparseVec>())
      .def(py::init<>())
      .def_static("translation", &EucIsometry::translation)
      .def_static("rotation", &EucIsometry::rotation)
      .def("active", &EucIsometry::active)
      .def("rot", &EucIsometry::rot)
      .def("translation_part", &EucIsometry::translation_part)
      .def("apply", &EucIsometry::apply);
  m.def("e_compose", &e_compose);
  m.def("e_inverse", &e_inverse);
  py::class_<ParallelSplit>(m, "ParallelSplit")
      .def_readonly("b0", &ParallelSplit::b0)
      .def_readonly("b1", &ParallelSplit::b1);
  m.def("split_parallel", &split_parallel);
  m.def("e_translation_length", &e_translation_length);
  m.def("hilbert_horofunction", &hilbert_horofunction);
  m.def("hilbert_frustum_action", &hilbert_frustum_action);
  m.def("finite_rank_match", &finite_rank_match);
  m.def("build_dense_U", &build_dense_U, py::arg("angles"),
        py::arg("block_dims"), py::arg("start_index") = 1);
  m.def("translation_by_rotation", &translation_by_rotation);
  py::class_<ApproxReport>(m, "ApproxReport")
      .def_readonly("achieved", &ApproxReport::achieved)
      .def_readonly("bound", &ApproxReport::bound)
      .def_readonly("per_point", &ApproxReport::per_point);
  m.def("approximate_by_conjugate", &approximate_by_conjugate);

  m.def("run_experiment",
        [](const std::string& name, const std::string& config_json) {
          ExperimentConfig cfg = parse_config(config_json);
          return run_experiment(name, cfg).to_json();
        },
        py::arg("name"), py::arg("config_json"),
        "Run a named experiment from a JSON config string; returns the "
        "JSON report");
  m.def("experiment_names", &experiment_names);
}
