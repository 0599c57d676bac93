// Copyright 2026 The netseg Authors.
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

// Python bindings for the analytic and simulation entry points. Results come
// back as plain Python containers; library errors map to netseg.NetsegError.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netseg/errors.hpp"
#include "netseg/estimation.hpp"
#include "netseg/fixed_node.hpp"
#include "netseg/jr_model.hpp"
#include "netseg/sbm.hpp"
#include "netseg/verify.hpp"

namespace py = pybind11;
using namespace netseg;

namespace {

JrParams make_jr(double n_s, double n_d, double n_f, double alpha, std::uint32_t k,
                 std::vector<double> type_dist) {
  JrParams p;
  p.num_types = k;
  p.type_dist = std::move(type_dist);
  p.n_s = n_s;
  p.n_d = n_d;
  p.n_f = n_f;
  p.alpha = alpha;
  p.validate(false);
  return p;
}

SbmParams make_sbm(std::vector<std::uint32_t> groups, double p, double q) {
  SbmParams s{std::move(groups), p, q};
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "integration and segregation in network formation models";

  py::register_exception<Error>(m, "NetsegError", PyExc_RuntimeError);

  // sbm
  m.def(
      "sbm_expected_counts",
      [](std::vector<std::uint32_t> groups, double p, double q, bool exact) {
        const auto s = make_sbm(std::move(groups), p, q);
        const auto c = exact ? expected_counts_exact(s) : expected_counts(s);
        return py::dict(py::arg("e_m") = c.e_m, py::arg("e_b") = c.e_b, py::arg("o_m") = c.o_m,
                        py::arg("o_b") = c.o_b, py::arg("w_m") = c.w_m, py::arg("w_b") = c.w_b);
      },
      py::arg("groups"), py::arg("p"), py::arg("q"), py::arg("exact") = false);
  m.def(
      "sbm_relative_bounds",
      [](std::vector<std::uint32_t> groups, double p, double q, double gamma) {
        const auto b = relative_bounds(make_sbm(std::move(groups), p, q), gamma);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("groups"), py::arg("p"), py::arg("q"), py::arg("gamma"));
  m.def(
      "sbm_relative_effect",
      [](std::vector<std::uint32_t> groups, double p, double q, double gamma) {
        return std::string(to_string(relative_effect_sign(make_sbm(std::move(groups), p, q), gamma)));
      },
      py::arg("groups"), py::arg("p"), py::arg("q"), py::arg("gamma"));
  m.def("moment_inequalities", &moment_inequalities, py::arg("groups"));

  // jr
  m.def(
      "jr_equilibrium",
      [](double n_s, double n_d, double n_f, double alpha, std::uint32_t k, std::vector<double> dist) {
        return equilibrium_integration(make_jr(n_s, n_d, n_f, alpha, k, std::move(dist)));
      },
      py::arg("n_s"), py::arg("n_d"), py::arg("n_f"), py::arg("alpha"), py::arg("K") = 2,
      py::arg("type_dist") = std::vector<double>{});
  m.def(
      "jr_integration_at",
      [](double n_s, double n_d, double n_f, double alpha, std::uint64_t t, std::uint32_t k) {
        return integration_at_exact(make_jr(n_s, n_d, n_f, alpha, k, {}), t);
      },
      py::arg("n_s"), py::arg("n_d"), py::arg("n_f"), py::arg("alpha"), py::arg("t"), py::arg("K") = 2);
  m.def(
      "jr_simulate",
      [](double n_s, double n_d, double n_f, double alpha, std::uint64_t t_max, std::uint64_t seed,
         std::uint32_t k) {
        const auto p = make_jr(n_s, n_d, n_f, alpha, k, {});
        JrRun run;
        {
          py::gil_scoped_release release;
          run = simulate_jr(p, t_max, seed);
        }
        return py::dict(py::arg("integration") = run.integration,
                        py::arg("arrival_integration") = run.arrival_integration,
                        py::arg("shortfall") = run.shortfall);
      },
      py::arg("n_s"), py::arg("n_d"), py::arg("n_f"), py::arg("alpha"), py::arg("t_max"),
      py::arg("seed") = 1, py::arg("K") = 2);

  // fixed-node
  m.def(
      "fixed_points",
      [](double c, double s, double s_prime, double n1) {
        FixedNodeParams fp;
        fp.c = c;
        fp.s = s;
        fp.s_prime = s_prime;
        fp.n_theta = {n1, 1.0 - n1};
        py::list out;
        for (const auto& x : find_fixed_points(fp)) {
          out.append(py::dict(py::arg("t11") = x.t11, py::arg("t22") = x.t22, py::arg("p11") = x.p11,
                              py::arg("p22") = x.p22, py::arg("integration") = x.integration,
                              py::arg("stable") = x.stable));
        }
        return out;
      },
      py::arg("c"), py::arg("s"), py::arg("s_prime") = 0.5, py::arg("n1") = 0.5);

  // estimation
  m.def(
      "predict_equilibrium",
      [](double n_s, double n_d, double n_fs, double n_fd, std::uint32_t k) {
        const auto e = predict_equilibrium(Theta{n_s, n_d, n_fs, n_fd}, k);
        return py::dict(py::arg("alpha") = e.alpha, py::arg("f_inf") = e.f_inf,
                        py::arg("f_inf_no_tc") = e.f_inf_no_tc,
                        py::arg("tc_contribution") = e.tc_contribution,
                        py::arg("alpha_valid") = e.alpha_valid);
      },
      py::arg("n_s"), py::arg("n_d"), py::arg("n_fs"), py::arg("n_fd"), py::arg("K") = 2);

  // verify
  m.def("suite_names", &suite_names);
  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, double effort) {
        VerifyOptions o;
        o.seed = seed;
        o.effort = effort;
        SuiteReport r;
        {
          py::gil_scoped_release release;
          r = run_suite(name, o);
        }
        py::list checks;
        for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.passed, c.detail));
        return py::make_tuple(r.passed(), checks);
      },
      py::arg("name"), py::arg("seed") = 7, py::arg("effort") = 1.0);
}
