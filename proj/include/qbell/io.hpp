#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qbell/bellmax.hpp"
#include "qbell/gellmann.hpp"
#include "qbell/lhv.hpp"
#include "qbell/perfectness.hpp"
#include "qbell/states.hpp"

namespace qbell {

using Json = nlohmann::json;

/// Row-major list of [re, im] pairs.
Json matrix_to_json(const CMatrix& m);

/// Accepts the flat row-major [[re, im], ...] form or nested rows of pairs.
CMatrix matrix_from_json(const Json& j, int rows, int cols);

Json bloch_to_json(const BlochVector& r);

/// Array of generators, each in the matrix_to_json form.
Json basis_to_json(const GellMannBasis& basis);

/// {dim, matrix, bloch}.
Json observable_to_json(const QuditObservable& x);
QuditObservable observable_from_json(const Json& j);

/// {dim, rho}.
Json state_to_json(const TwoQuditState& state);
TwoQuditState state_from_json(const Json& j);
TwoQuditState load_state(const std::filesystem::path& path);

/// One row of T per line, comma separated, full precision.
std::string correlation_to_csv(const CorrelationMatrix& t);

Json certificate_to_json(const PerfectnessCertificate& cert);
Json membership_to_json(const ClassMembership& m);

/// Wall time is left out unless `include_timing` is set so reports are
/// reproducible byte for byte.
Json bellmax_report_to_json(const BellMaxReport& r, bool include_timing = false);

/// restart,iteration,value
std::string bellmax_trace_csv(const BellMaxReport& r);

Json lhv_report_to_json(const LhvCheckReport& r);

}  // namespace qbell
