#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sgcurv/bounds.hpp"
#include "sgcurv/curvature.hpp"
#include "sgcurv/repelling.hpp"

namespace sgcurv {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// x rounded to 12 significant digits; non-finite values become strings.
Json number(double x);
Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json to_json(const SymMatrix& m);
Json to_json(const Edge& e);
Json to_json(const SignedGraph& g);
Json to_json(const ConsensusIndex& c);
Json to_json(const RepellingAnalysis& a);
Json to_json(const CurvatureReport& c);
Json to_json(const BoundReport& b);
Json to_json(const MixingReport& m);
Json to_json(const DynamicsReport& d);

/// "sha256:<hex>" of the raw input bytes.
std::string input_digest(std::string_view bytes);

struct ReportEnvelope {
    std::string tool_version = kToolVersion;
    int schema_version = kSchemaVersion;
    std::string input_digest;
    std::string command;
    Json payload;

    bool operator==(const ReportEnvelope&) const = default;
};

Json to_json(const ReportEnvelope& e);
ReportEnvelope envelope_from_json(const Json& j);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace sgcurv
