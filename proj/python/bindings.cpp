#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "sgcurv/bounds.hpp"
#include "sgcurv/curvature.hpp"
#include "sgcurv/errors.hpp"
#include "sgcurv/report.hpp"
#include "sgcurv/repelling.hpp"
#include "sgcurv/verify.hpp"

namespace py = pybind11;
using namespace sgcurv;

namespace {

// Rich payloads cross the boundary as JSON text; the Python side parses them.
std::string as_text(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Repelling Laplacian analysis of signed graphs.";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<InvalidGraph>(m, "InvalidGraph", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    py::class_<SignedGraph>(m, "SignedGraph")
        .def(py::init([](std::size_t n, const std::vector<std::tuple<Vertex, Vertex, double, int>>& edges) {
                 std::vector<Edge> list;
                 for (const auto& [u, v, w, s] : edges) {
                     if (s != 1 && s != -1) throw InvalidGraph("sign must be +1 or -1");
                     list.push_back({u, v, w, s > 0 ? Sign::positive : Sign::negative});
                 }
                 return SignedGraph(n, std::move(list));
             }),
             py::arg("n"), py::arg("edges"))
        .def_static("from_edge_list", [](const std::string& text) { return parse_edge_list(text); })
        .def("to_edge_list", [](const SignedGraph& g) { return format_edge_list(g); })
        .def_property_readonly("num_vertices", &SignedGraph::num_vertices)
        .def_property_readonly("num_edges", &SignedGraph::num_edges)
        .def_property_readonly("edges", [](const SignedGraph& g) {
            std::vector<std::tuple<Vertex, Vertex, double, int>> out;
            for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.weight, to_int(e.sign));
            return out;
        })
        .def("__repr__", [](const SignedGraph& g) {
            return "<SignedGraph n=" + std::to_string(g.num_vertices()) +
                   " edges=" + std::to_string(g.num_edges()) + ">";
        });

    py::class_<RepellingAnalysis>(m, "RepellingAnalysis")
        .def_readonly("epsilon", &RepellingAnalysis::epsilon)
        .def_property_readonly("laplacian", [](const RepellingAnalysis& a) { return a.laplacian.matrix(); })
        .def_property_readonly("pseudoinverse",
                               [](const RepellingAnalysis& a) { return a.pseudoinverse.matrix(); })
        .def_property_readonly("omega", [](const RepellingAnalysis& a) { return a.omega.matrix(); })
        .def_property_readonly("eigenvalues",
                               [](const RepellingAnalysis& a) { return a.spectrum.eigenvalues; })
        .def_readonly("resistance_sum", &RepellingAnalysis::resistance_sum)
        .def("_json", [](const RepellingAnalysis& a) { return as_text(to_json(a)); });

    m.def("repelling_laplacian",
          [](const SignedGraph& g, double eps) { return repelling_laplacian(g, eps).matrix(); });
    m.def("spectral_gap", &spectral_gap, py::arg("g"), py::arg("eps"));
    m.def(
        "consensus_index",
        [](const SignedGraph& g, double tol) {
            const ConsensusIndex c = consensus_index(g, tol);
            return c.value.value_or(std::numeric_limits<double>::infinity());
        },
        py::arg("g"), py::arg("tol") = 1e-8,
        "Sign change of the spectral gap in eps; inf when there is no negative edge.");
    m.def(
        "consensus_upper_bound",
        [](const SignedGraph& g) {
            return consensus_upper_bound(g).bound.value_or(std::numeric_limits<double>::infinity());
        },
        py::arg("g"));
    m.def(
        "analyze",
        [](const SignedGraph& g, double eps) { return repelling_cost_matrix(g, eps); },
        py::arg("g"), py::arg("eps"));

    m.def("node_curvature", [](const RepellingAnalysis& a) {
        const NodeCurvature n = node_curvature(a);
        return py::make_tuple(n.tau, n.phi);
    });
    m.def("edge_lambda", &edge_lambda, py::arg("analysis"), py::arg("i"), py::arg("j"));
    m.def(
        "edge_curvature",
        [](const RepellingAnalysis& a, Vertex i, Vertex j) {
            return edge_curvature(a, node_curvature(a).tau, i, j);
        },
        py::arg("analysis"), py::arg("i"), py::arg("j"));
    m.def(
        "lly_curvature",
        [](const RepellingAnalysis& a, Vertex i, Vertex j) {
            const LlyCurvature l = lly_curvature(a, i, j);
            return py::make_tuple(l.kappa, l.stabilized);
        },
        py::arg("analysis"), py::arg("i"), py::arg("j"));
    m.def("_curvature_json", [](const RepellingAnalysis& a, bool with_lly) {
        return as_text(to_json(curvature_report(a, with_lly)));
    });
    m.def("_bounds_json", [](const SignedGraph& g, double eps) {
        Json out = Json::array();
        for (const auto& b : check_all(g, eps)) out.push_back(to_json(b));
        return as_text(out);
    });

    m.def(
        "w1",
        [](const Matrix& cost, const Vector& mu, const Vector& nu) {
            const TransportPlan t = w1_exact(cost, mu, nu);
            return py::make_tuple(t.value, t.plan);
        },
        py::arg("cost"), py::arg("mu"), py::arg("nu"));

    m.def(
        "verify",
        [](const std::vector<std::string>& only) {
            VerifyOptions opts;
            opts.only = {only.begin(), only.end()};
            const VerifyResult r = run_verify(opts);
            std::vector<std::tuple<std::string, int, bool>> out;
            for (const auto& c : r.criteria) out.emplace_back(c.tag, c.id, c.pass);
            return out;
        },
        py::arg("only") = std::vector<std::string>{});

    m.attr("__version__") = kToolVersion;
}
