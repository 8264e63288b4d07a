#ifndef LOCCONVEX_JSON_IO_HPP
#define LOCCONVEX_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "locconvex/bruhat.hpp"
#include "locconvex/convexity.hpp"
#include "locconvex/curves.hpp"
#include "locconvex/decompose.hpp"
#include "locconvex/integrate.hpp"

namespace locconvex {

using Json = nlohmann::json;

/// Frenet samples plus lifted spins on a uniform grid, with residual
/// metadata (sphere norm, frame orthogonality, closure gap).
Json curve_to_json(const AnalyticCurve& curve, int steps = 1024);

/// Rebuild a curve from its sampled speed/kappa/tau via the coefficient-path
/// solver; the sample grid becomes the interpolation grid.
AnalyticCurve curve_from_json(const Json& doc, int solve_steps = 4096);

Json pair_to_json(const CurvePair& pair, int steps = 1024);
CurvePair pair_from_json(const Json& doc, int solve_steps = 4096);

Json certificate_to_json(const NonconvexityCertificate& cert);

Json matrix_to_json(const MatX& m);
MatX matrix_from_json(const Json& doc);

Json spin_to_json(const SpinPair& z);
SpinPair spin_from_json(const Json& doc);

/// {"dim", "quasi", "c": [num or array, ...], "grid": [...] when sampled}.
CoefficientPath coefficients_from_json(const Json& doc);

std::string curve_to_csv(const AnalyticCurve& curve, int steps = 1024);

}  // namespace locconvex

#endif
