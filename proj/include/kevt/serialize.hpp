#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kevt/blocks.hpp"
#include "kevt/ei.hpp"
#include "kevt/evt.hpp"
#include "kevt/regress.hpp"
#include "kevt/scaling.hpp"

namespace kevt {

/// {mu, sigma, xi, nll, converged, n}
nlohmann::json to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& j);

/// {k, rule, mu2, sigma2, xi2, theta2, g}
nlohmann::json to_json(int k, const ScalingPrediction& p);

/// {m, b, r2, n}
nlohmann::json to_json(const LinFit& fit);

nlohmann::json to_json(const EIEstimate& e);

std::string to_string(EIEstimate::Method m);

/// Single-column CSV with header `value`.
void write_values_csv(std::ostream& os, std::span<const double> values);
/// Reads the `value` column (or the only column) of a CSV file.
std::vector<double> read_values_csv(std::istream& is);
std::vector<double> read_values_csv(const std::string& path);

void write_return_levels_csv(std::ostream& os, const ReturnLevelTable& t);

}  // namespace kevt
