// Copyright 2026 The qbound Authors
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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbound/channel_metrics.hpp"
#include "qbound/channel_spec.hpp"
#include "qbound/discrimination.hpp"
#include "qbound/error.hpp"
#include "qbound/estimation.hpp"
#include "qbound/oracle.hpp"

namespace py = pybind11;
using namespace qbound;

namespace {

BoundOptions Options(double tol) {
  BoundOptions o;
  if (tol > 0.0) o.solver.tol = tol;
  return o;
}

py::dict QueryDict(const QueryBoundResult& r) {
  py::dict d;
  d["lower_bound"] = r.lower_bound.is_infinite() ? py::object(py::float_(r.lower_bound.AsDouble()))
                                                 : py::object(py::int_(r.lower_bound.count()));
  d["kind"] = r.lower_bound.ToString();
  d["mode"] = std::string(AccessModeName(r.mode));
  d["method"] = std::string(QueryMethodName(r.method));
  d["n_max"] = r.diagnostics.n_max ? py::object(py::int_(*r.diagnostics.n_max)) : py::object(py::none());
  d["probes"] = r.diagnostics.probes;
  d["note"] = r.diagnostics.note;
  d["theorem_tag"] = r.theorem_tag;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "qbound native core";

  static py::exception<Error> exc(m, "QboundError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init<std::size_t, std::size_t, std::vector<ComplexMatrix>>(), py::arg("d_in"), py::arg("d_out"),
           py::arg("kraus"))
      .def_property_readonly("d_in", &KrausChannel::d_in)
      .def_property_readonly("d_out", &KrausChannel::d_out)
      .def_property_readonly("kraus", &KrausChannel::kraus)
      .def("apply", &KrausChannel::Apply)
      .def("to_json", [](const KrausChannel& c) { return ChannelToJson(c); });

  py::class_<ChannelFamily>(m, "ChannelFamily")
      .def_property_readonly("name", &ChannelFamily::name)
      .def_property_readonly("domain", [](const ChannelFamily& f) { return py::make_tuple(f.theta_lo(), f.theta_hi()); })
      .def("kraus_at", &ChannelFamily::KrausAt)
      .def("dkraus_at", &ChannelFamily::DKrausAt);

  py::class_<ChannelPair>(m, "ChannelPair")
      .def_static("from_channels", &ChannelPair::FromChannels)
      .def_property_readonly("d_env", &ChannelPair::d_env);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("value", &BoundReport::value)
      .def_readonly("witness", &BoundReport::witness)
      .def_readonly("scalars", &BoundReport::scalars)
      .def_readonly("theorem_tag", &BoundReport::theorem_tag)
      .def_readonly("sdp_solves", &BoundReport::sdp_solves)
      .def("__repr__", [](const BoundReport& r) {
        return "<BoundReport " + r.theorem_tag + " value=" + std::to_string(r.value) + ">";
      });

  m.def("builtin_channel", [](const std::string& name, std::vector<double> params) { return BuiltinChannel(name, params); },
        py::arg("name"), py::arg("params") = std::vector<double>{});
  m.def("builtin_family", [](const std::string& name, std::vector<double> params) { return BuiltinFamily(name, params); },
        py::arg("name"), py::arg("params") = std::vector<double>{});
  m.def("parse_channel_spec", [](const std::string& s) { return ParseChannelSpec(s); });

  m.def("root_fidelity", [](const ChannelPair& p, double tol) { return RootFidelityChannels(p, Options(tol)); },
        py::arg("pair"), py::arg("tol") = 0.0);
  m.def("bures_sq", [](const ChannelPair& p, double tol) { return BuresSqChannels(p, Options(tol)); }, py::arg("pair"),
        py::arg("tol") = 0.0);
  m.def("parallel_bures_bound",
        [](const ChannelPair& p, std::size_t n, double tol) { return ParallelBuresBound(p, n, Options(tol)); },
        py::arg("pair"), py::arg("n"), py::arg("tol") = 0.0);
  m.def("adaptive_bures_bound",
        [](const ChannelPair& p, std::size_t n, double tol) { return AdaptiveBuresBound(p, n, Options(tol)); },
        py::arg("pair"), py::arg("n"), py::arg("tol") = 0.0);
  m.def("sld_fisher_channel",
        [](const ChannelFamily& f, double theta, double tol) { return SldFisherChannel(f, theta, Options(tol)); },
        py::arg("family"), py::arg("theta"), py::arg("tol") = 0.0);
  m.def("parallel_fisher_bound",
        [](const ChannelFamily& f, double theta, std::size_t n, double tol) {
          return ParallelFisherBound(f, theta, n, Options(tol));
        },
        py::arg("family"), py::arg("theta"), py::arg("n"), py::arg("tol") = 0.0);
  m.def("adaptive_fisher_bound",
        [](const ChannelFamily& f, double theta, std::size_t n, double tol) {
          return AdaptiveFisherBound(f, theta, n, Options(tol));
        },
        py::arg("family"), py::arg("theta"), py::arg("n"), py::arg("tol") = 0.0);

  m.def("error_prob_floor",
        [](const ChannelPair& pair, std::size_t n, double p, const std::string& mode) {
          return ErrorProbFloor(pair, n, p, ParseAccessMode(mode));
        },
        py::arg("pair"), py::arg("n"), py::arg("p") = 0.5, py::arg("mode") = "parallel");
  m.def("quadratic_min_n",
        [](double a, double b, double c, const std::string& mode) { return QuadraticMinN(a, b, c, ParseAccessMode(mode)); },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("mode") = "parallel");
  m.def("query_lower_bound",
        [](const ChannelPair& pair, double p, double eps, const std::string& mode) {
          return QueryDict(QueryLowerBound(DiscriminationInstance{pair, p, eps}, ParseAccessMode(mode)));
        },
        py::arg("pair"), py::arg("p"), py::arg("eps"), py::arg("mode") = "parallel");
  m.def("est_query_lower",
        [](const ChannelFamily& fam, double delta, double eps, std::size_t grid, const std::string& mode) {
          const EstimationInstance inst{fam, delta, eps, UniformGrid(fam, grid)};
          const EstimationQueryResult r = EstQueryLower(inst, ParseAccessMode(mode));
          py::dict d = QueryDict(r.result);
          d["theta"] = r.theta;
          d["theta_prime"] = r.theta_prime;
          return d;
        },
        py::arg("family"), py::arg("delta"), py::arg("eps"), py::arg("grid") = kDefaultGridPoints,
        py::arg("mode") = "parallel");
  m.def("classify_scaling",
        [](const ChannelFamily& fam, std::size_t grid) {
          const ScalingClassification s = ClassifyScaling(fam, UniformGrid(fam, grid));
          py::dict d;
          d["kind"] = std::string(ScalingKindName(s.kind));
          d["sql_denominator"] = s.sql_denominator;
          d["degenerate"] = s.degenerate;
          d["heis_coefficient"] = s.heis_coefficient;
          d["heis_coefficient_adaptive"] = s.heis_coefficient_adaptive;
          return d;
        },
        py::arg("family"), py::arg("grid") = kDefaultGridPoints);

  m.def("diamond_norm_exact",
        [](double p, const KrausChannel& a, double q, const KrausChannel& b, std::size_t n) {
          const oracle::DiamondResult r = oracle::DiamondNormExact(p, a, q, b, n);
          return py::make_tuple(r.norm, r.p_error);
        },
        py::arg("p"), py::arg("a"), py::arg("q"), py::arg("b"), py::arg("n") = 1);
  m.def("probe_fisher_max",
        [](const ChannelFamily& fam, double theta, std::size_t samples, std::uint64_t seed) {
          oracle::ProbeOptions po;
          po.samples = samples;
          po.seed = seed;
          return oracle::ProbeFisherMax(fam, theta, po).value;
        },
        py::arg("family"), py::arg("theta"), py::arg("samples") = 1000, py::arg("seed") = 7);
}
