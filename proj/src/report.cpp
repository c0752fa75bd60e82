#include "sgcurv/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "sgcurv/errors.hpp"

namespace sgcurv {

namespace {

using Index = Eigen::Index;

Json edge_value(const Edge& e, double value) {
    return Json{{"u", e.u}, {"v", e.v}, {"value", number(value)}};
}

Json optional_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

}  // namespace

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "infinity" : "-infinity";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double rounded = std::strtod(buf, nullptr);
    return rounded == 0.0 ? Json(0.0) : Json(rounded);
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
    return out;
}

Json to_json(const SymMatrix& m) { return to_json(m.matrix()); }

Json to_json(const Edge& e) {
    return Json{{"u", e.u}, {"v", e.v}, {"w", number(e.weight)}, {"sign", to_int(e.sign)}};
}

Json to_json(const SignedGraph& g) {
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back(to_json(e));
    return Json{{"n", g.num_vertices()}, {"edges", std::move(edges)}};
}

Json to_json(const ConsensusIndex& c) {
    Json out;
    out["value"] = c.value ? number(*c.value) : Json("infinity");
    out["bracket"] = Json::array({number(c.bracket.first), number(c.bracket.second)});
    out["samples"] = c.lambda2_at.size();
    out["warning"] = c.warning ? Json(*c.warning) : Json(nullptr);
    return out;
}

Json to_json(const RepellingAnalysis& a) {
    Json out;
    out["epsilon"] = number(a.epsilon);
    out["below_consensus_index"] = a.below_consensus_index;
    out["lambda"] = to_json(a.spectrum.eigenvalues);
    out["laplacian"] = to_json(a.laplacian);
    out["pseudoinverse"] = to_json(a.pseudoinverse);
    out["omega"] = to_json(a.omega);
    out["W"] = number(a.resistance_sum);
    if (a.simplex) {
        const auto& s = *a.simplex;
        out["simplex"] = Json{{"vertex_matrix", to_json(s.vertex_matrix)},
                              {"circumradius", number(s.circumradius)},
                              {"barycentric_circumcenter", to_json(s.barycentric_circumcenter)},
                              {"altitudes", to_json(s.altitudes)},
                              {"block_identity_error", number(s.block_identity_error)}};
    } else {
        out["simplex"] = nullptr;
    }
    return out;
}

Json to_json(const CurvatureReport& c) {
    Json lambda = Json::array();
    Json theta = Json::array();
    Json heat = Json::array();
    Json lly = Json::array();
    for (const auto& e : c.edges) {
        lambda.push_back(edge_value(e.edge, e.lambda));
        theta.push_back(edge_value(e.edge, e.theta));
        heat.push_back(edge_value(e.edge, e.heat_rate));
        if (e.lly) {
            Json k = edge_value(e.edge, e.lly->kappa);
            k["stabilized"] = e.lly->stabilized;
            k["alpha"] = number(e.lly->alpha);
            lly.push_back(std::move(k));
        }
    }
    Json out;
    out["epsilon"] = number(c.epsilon);
    out["tau"] = to_json(c.node.tau);
    out["phi"] = number(c.node.phi);
    out["lambda"] = std::move(lambda);
    out["theta"] = std::move(theta);
    out["heat_rate"] = std::move(heat);
    out["kappa_lly"] = std::move(lly);
    out["X"] = number(c.extremal.x);
    out["N"] = number(c.extremal.n);
    out["X_bound"] = number(c.extremal.x_bound);
    out["N_bound"] = number(c.extremal.n_bound);
    out["X_bound_ok"] = optional_bool(c.extremal.x_ok);
    out["N_bound_ok"] = optional_bool(c.extremal.n_ok);
    out["extremal_bounds_ok"] = optional_bool(c.extremal.bounds_ok);
    return out;
}

Json to_json(const BoundReport& b) {
    Json out;
    out["name"] = b.name;
    out["lhs"] = number(b.lhs);
    out["rhs"] = number(b.rhs);
    out["holds"] = optional_bool(b.holds);
    out["slack"] = number(b.slack);
    out["applicability"] = b.applicability == Applicability::ok ? "ok" : "hypothesis-unmet";
    out["note"] = b.note;
    return out;
}

Json to_json(const MixingReport& m) {
    Json rows = Json::array();
    for (const auto& r : m.rows)
        rows.push_back(Json{{"step", r.step}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)}});
    return Json{{"t", number(m.t)}, {"mu2", number(m.mu2)}, {"holds", m.holds}, {"rows", rows}};
}

Json to_json(const DynamicsReport& d) {
    Json traj = Json::array();
    for (const double x : d.disagreement) traj.push_back(number(x));
    return Json{{"alpha", number(d.alpha)},
                {"beta", number(d.beta)},
                {"fitted_rate", number(d.fitted_rate)},
                {"predicted_rate", number(d.predicted_rate)},
                {"decays", d.decays},
                {"disagreement", std::move(traj)}};
}

std::string input_digest(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("input_digest: SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

Json to_json(const ReportEnvelope& e) {
    Json out;
    out["tool_version"] = e.tool_version;
    out["schema_version"] = e.schema_version;
    out["input_digest"] = e.input_digest;
    out["command"] = e.command;
    out["payload"] = e.payload;
    return out;
}

ReportEnvelope envelope_from_json(const Json& j) {
    ReportEnvelope e;
    try {
        e.tool_version = j.at("tool_version").get<std::string>();
        e.schema_version = j.at("schema_version").get<int>();
        e.input_digest = j.at("input_digest").get<std::string>();
        e.command = j.at("command").get<std::string>();
        e.payload = j.at("payload");
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("envelope_from_json: ") + ex.what());
    }
    return e;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sgcurv
