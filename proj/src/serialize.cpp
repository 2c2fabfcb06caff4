#include "kevt/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kevt/error.hpp"

namespace kevt {

nlohmann::json to_json(const FitResult& fit) {
  return {{"mu", fit.params.mu},     {"sigma", fit.params.sigma},
          {"xi", fit.params.xi},     {"nll", fit.neg_log_likelihood},
          {"converged", fit.converged}, {"n", fit.n_samples}};
}

FitResult fit_from_json(const nlohmann::json& j) {
  try {
    FitResult f;
    f.params = {j.at("mu").get<double>(), j.at("sigma").get<double>(), j.at("xi").get<double>()};
    f.neg_log_likelihood = j.value("nll", 0.0);
    f.converged = j.value("converged", true);
    f.n_samples = j.value("n", std::size_t{0});
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad fit JSON: ") + e.what());
  }
}

nlohmann::json to_json(int k, const ScalingPrediction& p) {
  return {{"k", k},
          {"rule", to_string(p.rule)},
          {"mu2", p.derived.mu},
          {"sigma2", p.derived.sigma},
          {"xi2", p.derived.xi},
          {"theta2", p.theta2},
          {"g", p.g_used}};
}

nlohmann::json to_json(const LinFit& fit) {
  return {{"m", fit.m}, {"b", fit.b}, {"r2", fit.r_squared}, {"n", fit.n()}};
}

std::string to_string(EIEstimate::Method m) {
  switch (m) {
    case EIEstimate::Method::FerroSegers: return "FerroSegers";
    case EIEstimate::Method::ClusterRatio: return "ClusterRatio";
    case EIEstimate::Method::Theoretical: return "Theoretical";
  }
  return "?";
}

nlohmann::json to_json(const EIEstimate& e) {
  nlohmann::json j{{"theta", e.theta},
                   {"method", to_string(e.method)},
                   {"n_exceedances", e.n_exceedances},
                   {"threshold", e.threshold}};
  if (e.method == EIEstimate::Method::ClusterRatio) j["q"] = e.q;
  return j;
}

void write_values_csv(std::ostream& os, std::span<const double> values) {
  const auto old = os.precision(17);
  os << "value\n";
  for (double v : values) os << v << '\n';
  os.precision(old);
}

std::vector<double> read_values_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty CSV input");
  // Header: use the `value` column when present, else the only column.
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      header.push_back(cell);
    }
  }
  std::size_t col = 0;
  const auto it = std::find(header.begin(), header.end(), "value");
  if (it != header.end()) col = static_cast<std::size_t>(it - header.begin());
  else if (header.size() != 1) throw DataError("CSV has no `value` column");

  std::vector<double> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; c <= col; ++c)
      if (!std::getline(ss, cell, ',')) throw DataError("line " + std::to_string(line_no) + ": missing column");
    double v = 0.0;
    const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || p != cell.data() + cell.size())
      throw DataError("line " + std::to_string(line_no) + ": not a number: " + cell);
    out.push_back(v);
  }
  return out;
}

std::vector<double> read_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_values_csv(in);
}

void write_return_levels_csv(std::ostream& os, const ReturnLevelTable& t) {
  os << "level,return_period,z_mle,mle_lo,mle_hi,z_pred,z_emp,emp_lo,emp_hi\n";
  const auto old = os.precision(12);
  for (const auto& r : t.rows)
    os << r.level << ',' << r.return_period << ',' << r.z_mle << ',' << r.mle_lo << ',' << r.mle_hi
       << ',' << r.z_pred << ',' << r.z_emp << ',' << r.emp_lo << ',' << r.emp_hi << '\n';
  os.precision(old);
}

}  // namespace kevt
