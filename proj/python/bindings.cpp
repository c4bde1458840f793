// Python bindings for the main operations: instance handling, the three
// solvers, the trace verifiers, and the selection-process simulator. Exact
// rationals cross the boundary as fractions.Fraction.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "distfl/experiment.hpp"
#include "distfl/oracles.hpp"
#include "distfl/select.hpp"

namespace py = pybind11;
using namespace distfl;

namespace {

py::object to_fraction(const Rat& value) {
  static py::object fraction_type =
      py::module_::import("fractions").attr("Fraction");
  return fraction_type(format_rat(value));
}

Rat from_py(const py::object& value) {
  return parse_rat(py::str(value).cast<std::string>());
}

std::vector<std::string> violation_strings(
    const std::vector<VerifierViolation>& violations) {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(to_string(v));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "distributed facility location simulator";

  py::class_<Instance>(m, "Instance")
      .def(py::init<>())
      .def_property_readonly("num_facilities", &Instance::num_facilities)
      .def_property_readonly("num_clients", &Instance::num_clients)
      .def_property_readonly("bit_width",
                             [](const Instance& i) { return i.bit_width; })
      .def_property_readonly("opening_costs",
                             [](const Instance& inst) {
                               py::list out;
                               for (const auto& f : inst.opening_cost)
                                 out.append(to_fraction(f));
                               return out;
                             })
      .def_property_readonly("connection_costs",
                             [](const Instance& inst) {
                               py::list rows;
                               for (const auto& row : inst.connection_cost) {
                                 py::list r;
                                 for (const auto& c : row) r.append(to_fraction(c));
                                 rows.append(r);
                               }
                               return rows;
                             })
      .def(py::self == py::self)
      .def("__repr__", [](const Instance& i) {
        return "<Instance F=" + std::to_string(i.num_facilities()) +
               " C=" + std::to_string(i.num_clients()) + ">";
      });

  py::class_<Solution>(m, "Solution")
      .def(py::init<>())
      .def_property_readonly("open",
                             [](const Solution& s) {
                               return std::vector<int>(s.open.begin(), s.open.end());
                             })
      .def_readonly("assignment", &Solution::assignment)
      .def(py::self == py::self);

  py::class_<Trace>(m, "Trace")
      .def_property_readonly("num_phases",
                             [](const Trace& t) { return t.phases.size(); })
      .def_property_readonly("final_alphas",
                             [](const Trace& t) {
                               py::list out;
                               for (int j = 0; j < t.num_clients; ++j)
                                 out.append(to_fraction(t.alpha_final(j)));
                               return out;
                             })
      .def_property_readonly("connections", [](const Trace& t) {
        py::list out;
        for (const auto& c : t.connections)
          out.append(py::make_tuple(c.client, c.facility, c.phase, c.iteration,
                                    c.preconnect));
        return out;
      });

  py::class_<DistResult>(m, "DistResult")
      .def_readonly("solution", &DistResult::solution)
      .def_readonly("trace", &DistResult::trace)
      .def_readonly("phase_count", &DistResult::phase_count)
      .def_readonly("round_count", &DistResult::round_count)
      .def_readonly("max_bits", &DistResult::max_bits);

  m.def(
      "generate_instance",
      [](int facilities, int clients, int grid, long f_min, long f_max,
         uint64_t seed) {
        return generate_instance({facilities, clients, grid, f_min, f_max, seed});
      },
      py::arg("facilities"), py::arg("clients"), py::arg("grid"),
      py::arg("f_min"), py::arg("f_max"), py::arg("seed"));
  m.def(
      "make_instance",
      [](const std::vector<py::object>& opening,
         const std::vector<std::vector<py::object>>& connection, int bit_width) {
        Instance inst;
        for (const auto& f : opening) inst.opening_cost.push_back(from_py(f));
        for (const auto& row : connection) {
          inst.connection_cost.emplace_back();
          for (const auto& c : row) inst.connection_cost.back().push_back(from_py(c));
        }
        inst.bit_width =
            bit_width > 0 ? bit_width : default_bit_width(inst.num_nodes());
        return inst;
      },
      py::arg("opening_costs"), py::arg("connection_costs"),
      py::arg("bit_width") = 0);
  m.def("validate_instance", [](const Instance& inst) {
    std::vector<std::string> out;
    for (const auto& v : validate_instance(inst)) out.push_back(to_string(v));
    return out;
  });
  m.def("normalize", &normalize);
  m.def("read_instance", &read_instance, py::arg("path"));
  m.def("write_instance", &write_instance, py::arg("instance"), py::arg("path"));
  m.def("solution_cost", [](const Solution& sol, const Instance& inst) {
    return to_fraction(solution_cost(sol, inst));
  });

  m.def(
      "solve_distributed",
      [](const Instance& inst, const py::object& epsilon, uint64_t seed,
         long round_cap, bool conservative_rounds) {
        DistConfig config;
        config.epsilon = from_py(epsilon);
        config.seed = seed;
        config.round_cap = round_cap;
        config.conservative_rounds = conservative_rounds;
        return solve_distributed(inst, config);
      },
      py::arg("instance"), py::arg("epsilon"), py::arg("seed") = 0,
      py::arg("round_cap") = 0, py::arg("conservative_rounds") = false);

  m.def("greedy_sequential", [](const Instance& inst) {
    auto result = greedy_fl_sequential(inst);
    py::list alphas;
    for (const auto& a : result.alpha) alphas.append(to_fraction(a));
    return py::make_tuple(result.solution, alphas);
  });
  m.def("brute_force_opt", &brute_force_opt);
  m.def("dual_scaling_factor", [](const py::object& epsilon) {
    return to_fraction(dual_scaling_factor(from_py(epsilon)));
  });

  m.def("verify_fact1", [](const Trace& t, const Instance& i) {
    return violation_strings(verify_fact1(t, i));
  });
  m.def("verify_lemma1",
        [](const Trace& t, const Instance& i, const py::object& eps) {
          return violation_strings(verify_lemma1(t, i, from_py(eps)));
        });
  m.def("verify_lemma2",
        [](const Trace& t, const Instance& i, const py::object& eps) {
          return violation_strings(verify_lemma2(t, i, from_py(eps)));
        });
  m.def("verify_dual_fitting",
        [](const Trace& t, const Instance& i, const py::object& eps) {
          return violation_strings(verify_dual_fitting(t, i, from_py(eps)));
        });
  m.def("verify_cost_bracket",
        [](const Trace& t, const Instance& i, const py::object& eps) {
          auto report = verify_cost_bracket(t, i, from_py(eps));
          py::dict out;
          out["pass"] = report.pass;
          out["cost"] = to_fraction(report.cost);
          out["lower"] = to_fraction(report.lower);
          out["upper"] = to_fraction(report.upper);
          return out;
        });
  m.def("verify_selection_structure", [](const Trace& t, const Instance& i) {
    return violation_strings(verify_selection_structure(t, i));
  });
  m.def("write_trace", &write_trace, py::arg("trace"), py::arg("path"));
  m.def("read_trace", &read_trace, py::arg("path"));

  py::class_<ContributionGraph>(m, "ContributionGraph")
      .def(py::init([](int facilities, int clients,
                       std::vector<std::pair<int, int>> edges) {
             ContributionGraph g;
             g.num_facilities = facilities;
             g.num_clients = clients;
             g.edges = std::move(edges);
             return g;
           }),
           py::arg("facilities"), py::arg("clients"), py::arg("edges"))
      .def_readonly("num_facilities", &ContributionGraph::num_facilities)
      .def_readonly("num_clients", &ContributionGraph::num_clients)
      .def_readonly("edges", &ContributionGraph::edges);

  m.def("facility_graph", &facility_graph);
  m.def(
      "facility_select",
      [](const ContributionGraph& g, uint64_t seed) {
        py::list rows;
        for (const auto& s : facility_select(g, seed)) {
          py::dict row;
          row["iteration"] = s.iteration;
          row["n_t"] = s.n_t;
          row["F_t"] = s.f_t;
          row["C_t"] = s.c_t;
          row["E_t"] = s.e_t;
          row["heavy"] = s.heavy;
          row["removed_clients"] = s.removed_clients;
          row["removed_edges"] = s.removed_edges;
          row["removed_facilities"] = s.removed_facilities;
          rows.append(row);
        }
        return rows;
      },
      py::arg("graph"), py::arg("seed"));
  m.def("exact_expected_removals", [](const ContributionGraph& g) {
    auto e = exact_expected_removals(g);
    return py::make_tuple(to_fraction(e.clients), to_fraction(e.edges));
  });
  m.def("expected_removal_bounds", [](const ContributionGraph& g) {
    auto b = expected_removal_bounds(g);
    return py::make_tuple(to_fraction(b.clients_lb), to_fraction(b.edges_lb),
                          b.edges_sqrt_lb);
  });
  m.def("random_contribution_graph", &random_contribution_graph,
        py::arg("facilities"), py::arg("clients"), py::arg("edges"),
        py::arg("seed"));
}
