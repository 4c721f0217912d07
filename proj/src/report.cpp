#include "dbk/report.hpp"

namespace dbk::report {

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json complex_list(const std::vector<Complex>& zs) {
  json a = json::array();
  for (Complex z : zs) a.push_back(complex_json(z));
  return a;
}

json real_parts(const std::vector<Complex>& zs) {
  json a = json::array();
  for (Complex z : zs) a.push_back(z.real());
  return a;
}

json polynomial_json(const Polynomial& p) {
  return json{{"basis", "chebyshev"}, {"center", p.center()}, {"scale", p.scale()}, {"coeffs", complex_list(p.coeffs())}};
}

json to_json(const krein::PipelineReport& r) {
  const auto& a = r.artifacts;
  json j;
  j["pass"] = r.pass;
  j["first_failure"] = r.first_failure;
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
  j["stages"] = stages;
  j["w"] = complex_json(a.w);
  j["theta"] = a.theta;
  j["dimD"] = a.dim_domain;
  j["xi"] = complex_list(a.xi_values);
  j["xi_coords"] = complex_list(std::vector<Complex>(a.xi.data(), a.xi.data() + a.xi.size()));
  json measure;
  measure["atoms"] = std::vector<double>(a.measure.atoms.data(), a.measure.atoms.data() + a.measure.atoms.size());
  measure["masses"] = std::vector<double>(a.measure.masses.data(), a.measure.masses.data() + a.measure.masses.size());
  j["measure"] = measure;
  json S = json::array();
  for (const auto& z : a.S) S.push_back({{"re", z.z.real()}, {"im", z.z.imag()}, {"mult", z.multiplicity}});
  j["S"] = S;
  if (a.R) {
    j["R_coeffs"] = complex_list(a.R->monomial_coeffs());
    j["R"] = polynomial_json(*a.R);
  }
  if (a.AB) {
    j["probes"] = {a.AB->y1, a.AB->y2};
    j["extract"] = {{"condition", a.AB->condition}, {"residual", a.AB->residual}};
  }
  if (a.symmetrized) {
    j["omega"] = complex_json(a.symmetrized->omega);
    j["A_coeffs"] = real_parts(a.symmetrized->A.monomial_coeffs());
    j["B_coeffs"] = real_parts(a.symmetrized->B.monomial_coeffs());
    j["A"] = polynomial_json(a.symmetrized->A);
    j["B"] = polynomial_json(a.symmetrized->B);
  }
  if (a.assembled) {
    j["phi"] = a.assembled->phi_values;
    j["phi_phase"] = a.assembled->phi_phase;
    j["hb"] = {{"min_gap", a.assembled->hb.min_gap}, {"pass", a.assembled->hb.pass}};
  }
  j["residuals"] = {{"parseval", a.parseval_residual}, {"factorization", a.factorization_residual}};
  return j;
}

json to_json(const FactorizationReport& r) {
  return json{{"c", r.c}, {"residual", r.max_relative_residual}, {"worst_pair", {r.worst_x, r.worst_y}}};
}

json to_json(const GaugeReport& r) {
  return json{{"grid", r.grid}, {"W", r.W}, {"residual", r.constancy_residual}, {"zero_free", r.zero_free}};
}

json to_json(const NormalityReport& r) {
  return json{{"n", r.n},
              {"pointwise_ratio_bound", r.pointwise_ratio_bound},
              {"norm_ratio", r.norm_ratio},
              {"norm_e0", r.norm_e0},
              {"norm_en", r.norm_en}};
}

json to_json(const dpp::McEstimate& r) {
  return json{{"estimate", r.mean}, {"stderr", r.std_error}, {"trials", r.trials}, {"resamples", r.resamples}};
}

json to_json(const dpp::IntensityReport& r) {
  return json{{"points", r.points}, {"frequency", r.frequency}, {"stderr", r.std_error}, {"samples", r.samples}};
}

json to_json(const dpp::PointConfiguration& c) { return json{{"seed", c.seed}, {"trial", c.trial}, {"points", c.points}}; }

krein::FiniteRankSpace space_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("space input: expected a JSON object");
  if (!j.contains("points") || !j.contains("weights")) throw DomainError("space input: needs 'points' and 'weights'");
  try {
    auto points = j.at("points").get<std::vector<double>>();
    auto weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("basis")) {
      const auto rows = j.at("basis").get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd b(static_cast<long>(rows.size()), static_cast<long>(points.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != points.size()) throw DomainError("space input: basis row length differs from points");
        for (std::size_t c = 0; c < points.size(); ++c) b(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
      }
      return krein::make_explicit_space(std::move(points), std::move(weights), b);
    }
    if (!j.contains("n")) throw DomainError("space input: needs 'n' or 'basis'");
    return krein::make_polynomial_space(std::move(points), std::move(weights), j.at("n").get<int>());
  } catch (const json::exception& e) {
    throw DomainError(std::string("space input: ") + e.what());
  }
}

json envelope(const std::string& check, const json& config, json payload) {
  payload["check"] = check;
  payload["config"] = config;
  payload["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  return payload;
}

std::string line(const json& j) { return j.dump(); }

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace dbk::report
