// Copyright 2026 The Resistor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resistor/harness.hpp"

namespace py = pybind11;
using namespace resistor;

namespace {

std::vector<Eigen::MatrixXd> tensors_of(const OracleResponse& r) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& t : r.higher) {
    if (t.is_zero()) {
      out.emplace_back(0, 0);
      continue;
    }
    const auto n = static_cast<Eigen::Index>(r.frame->size());
    out.push_back(Eigen::Map<const Eigen::MatrixXd>(t.coords.data(), n,
                                                    static_cast<Eigen::Index>(t.coords.size()) / n));
  }
  return out;
}

void bind_response(py::module_& m) {
  py::class_<OracleResponse>(m, "OracleResponse")
      .def_readonly("value", &OracleResponse::value)
      .def_readonly("gradient", &OracleResponse::gradient)
      .def_readonly("regime", &OracleResponse::regime)
      .def_readonly("affine_index", &OracleResponse::affine_index)
      .def_readonly("value_stderr", &OracleResponse::value_stderr)
      .def_readonly("gradient_error", &OracleResponse::gradient_error)
      .def_property_readonly("higher", &tensors_of,
                             "Tensors of order 2..k, flattened to (r, r^(order-1)) in the "
                             "coordinates of `frame`; empty arrays are exact zeros.")
      .def_property_readonly("frame",
                             [](const OracleResponse& r) {
                               return r.frame ? r.frame->vectors() : std::vector<Vector>{};
                             })
      .def("hessian_times", &OracleResponse::hessian_times)
      .def("to_json", [](const OracleResponse& r, bool vectors) {
        return to_json(r, vectors).dump();
      }, py::arg("include_vectors") = false);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adversarial lower-bound oracle for k-th order convex optimization";

  py::enum_<Mode>(m, "Mode")
      .value("Deterministic", Mode::Deterministic)
      .value("Randomized", Mode::Randomized);
  py::enum_<Method>(m, "Method")
      .value("ProjectedSubgradient", Method::ProjectedSubgradient)
      .value("AcceleratedGradient", Method::AcceleratedGradient)
      .value("CubicNewton", Method::CubicNewton);
  py::enum_<Regime>(m, "Regime")
      .value("ExactAffine", Regime::ExactAffine)
      .value("MonteCarlo", Regime::MonteCarlo);

  py::class_<InstanceParams>(m, "InstanceParams")
      .def(py::init<>())
      .def_readwrite("T", &InstanceParams::T)
      .def_readwrite("k", &InstanceParams::k)
      .def_readwrite("m", &InstanceParams::m)
      .def_readwrite("d", &InstanceParams::d)
      .def_readwrite("gamma", &InstanceParams::gamma)
      .def_readwrite("delta", &InstanceParams::delta)
      .def_readwrite("mode", &InstanceParams::mode)
      .def_readwrite("fail_prob", &InstanceParams::fail_prob)
      .def_readwrite("norm_denom", &InstanceParams::norm_denom)
      .def("event_threshold", &InstanceParams::event_threshold)
      .def("__repr__", [](const InstanceParams& p) { return to_json(p).dump(); });

  m.def("params_deterministic", &params_deterministic, py::arg("T"), py::arg("k"),
        py::arg("d") = py::none());
  m.def("params_randomized", &params_randomized, py::arg("T"), py::arg("k"),
        py::arg("fail_prob"));
  m.def("randomized_dimension", &randomized_dimension, py::arg("T"), py::arg("fail_prob"));
  m.def("validate", &validate);
  m.def("worst_case_certificate", &worst_case_certificate);

  py::class_<MCBudget>(m, "MCBudget")
      .def(py::init([](std::size_t n, std::uint64_t seed) { return MCBudget{n, seed}; }),
           py::arg("n_samples") = 100000, py::arg("seed") = 0)
      .def_readwrite("n_samples", &MCBudget::n_samples)
      .def_readwrite("seed", &MCBudget::seed);

  py::class_<HardInstance>(m, "HardInstance")
      .def(py::init<InstanceParams, std::vector<Vector>>(), py::arg("params"),
           py::arg("directions"))
      .def_property_readonly("params", &HardInstance::params)
      .def_property_readonly("directions", [](const HardInstance& h) {
        return h.basis().vectors();
      })
      .def_property_readonly("shifts", &HardInstance::shifts)
      .def("__len__", &HardInstance::size)
      .def("complete", &HardInstance::complete)
      .def("to_json", [](const HardInstance& h) { return to_json(h).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return instance_from_json(nlohmann::json::parse(text));
      })
      .def("answer", [](const HardInstance& h, const Vector& x, const MCBudget& b,
                        std::uint32_t index) { return oracle_answer(h, x, b, index); },
           py::arg("x"), py::arg("budget") = MCBudget{}, py::arg("index") = 0)
      .def("pessimal_point", [](const HardInstance& h) { return pessimal_point(h).x; });

  bind_response(m);

  py::class_<AdaptiveOracle>(m, "AdaptiveOracle")
      .def(py::init<InstanceParams, std::uint64_t, MCBudget, bool>(), py::arg("params"),
           py::arg("seed") = 0, py::arg("budget") = MCBudget{}, py::arg("allow_invalid") = false)
      .def("query", [](AdaptiveOracle& o, const Vector& x) { return o.query(x); }, py::arg("x"))
      .def_property_readonly("queries_made", &AdaptiveOracle::queries_made)
      .def_property_readonly("dimension", &AdaptiveOracle::dimension)
      .def("transcript_jsonl", [](const AdaptiveOracle& o, bool vectors) {
        return to_jsonl(o.transcript(), vectors);
      }, py::arg("dump_vectors") = false)
      .def("finalize", [](AdaptiveOracle& o) {
        FinalizeResult fin = o.finalize();
        py::dict report;
        report["all_equal"] = fin.report.all_equal;
        report["mismatches"] = fin.report.mismatches;
        report["partial"] = fin.report.partial;
        report["max_later_inner"] = fin.report.max_later_inner;
        return py::make_tuple(std::move(fin.instance), report);
      });

  py::class_<RandomizedOracle>(m, "RandomizedOracle")
      .def(py::init<const InstanceParams&, std::uint64_t, MCBudget>(), py::arg("params"),
           py::arg("seed") = 0, py::arg("budget") = MCBudget{})
      .def("query", [](RandomizedOracle& o, const Vector& x) { return o.query(x); }, py::arg("x"))
      .def_property_readonly("instance", &RandomizedOracle::instance)
      .def_property_readonly("dimension", &RandomizedOracle::dimension)
      .def("event_e_held", [](const RandomizedOracle& o) {
        return event_e_check(o.transcript(), o.instance().params()).held;
      })
      .def("transcript_jsonl", [](const RandomizedOracle& o, bool vectors) {
        return to_jsonl(o.transcript(), vectors);
      }, py::arg("dump_vectors") = false);

  m.def("randomized_instance", &randomized_instance);
  m.def("rescale_to_smoothness", &rescale_to_smoothness, py::arg("L"), py::arg("k"),
        py::arg("T"));
  m.def("suboptimality_certificate", &suboptimality_certificate);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("T", &RunReport::T)
      .def_readonly("k", &RunReport::k)
      .def_readonly("scale", &RunReport::scale)
      .def_property_readonly("passed", [](const RunReport& r) { return r.summary.pass; })
      .def_property_readonly("certified_gaps", [](const RunReport& r) {
        std::vector<double> out;
        for (const auto& row : r.rows) out.push_back(row.certified_gap);
        return out;
      })
      .def_property_readonly("floor", [](const RunReport& r) {
        return r.rows.empty() ? 0.0 : r.rows.front().floor;
      })
      .def("to_json", [](const RunReport& r) { return to_json(r).dump(); });

  m.def("run_experiment",
        [](const std::string& mode, int T, int k, const std::string& method, std::uint64_t seed,
           double fail_prob, std::size_t mc_samples, std::optional<double> rescale_L,
           int audit_pairs) {
          RunConfig c;
          c.mode = mode_from_string(mode);
          c.T = T;
          c.k = k;
          c.method = method_from_string(method);
          c.seed = seed;
          c.fail_prob = fail_prob;
          c.mc_samples = mc_samples;
          c.rescale_L = rescale_L;
          c.audit_pairs = audit_pairs;
          return run_experiment(c);
        },
        py::arg("mode") = "det", py::arg("T") = 16, py::arg("k") = 1,
        py::arg("method") = "psg", py::arg("seed") = 0, py::arg("fail_prob") = 0.2,
        py::arg("mc_samples") = 100000, py::arg("rescale_L") = py::none(),
        py::arg("audit_pairs") = 32);
  m.def("emit_report", [](const RunReport& r, const std::string& format) {
    return emit_report(r, format_from_string(format));
  }, py::arg("report"), py::arg("format") = "csv");
}
