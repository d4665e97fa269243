#include "ghsvd/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace ghsvd {
namespace {

using nlohmann::json;

// JSON has no NaN or infinity.
json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json comparison(const std::optional<Comparison>& c) {
  if (!c) return nullptr;
  return {{"max_rel", number(c->max_rel)}, {"worst", c->worst}, {"pass", c->pass}};
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (const double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::NumericalFailure: return "numerical-failure";
    case RunStatus::UsageError: return "usage-error";
  }
  return "?";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::VP: return "VP";
    case Variant::BO: return "BO";
    case Variant::FB: return "FB";
  }
  return "?";
}

std::string to_string(StrategyClass s) { return s == StrategyClass::MM ? "MM" : "ME"; }

std::string report_json(const RunReport& r, bool with_timings) {
  json j;
  j["status"] = to_string(r.status);
  if (r.status != RunStatus::Ok) {
    j["failed_phase"] = r.failed_phase;
    j["error"] = r.error;
  }
  j["config"] = {{"source", r.source}, {"phases", r.phases},   {"variant", r.variant},
                 {"strategy", r.strategy}, {"workers", r.workers}, {"lanes", r.lanes},
                 {"seed", r.seed}};
  j["m"] = r.m;
  j["n"] = r.n;
  if (r.jqr) {
    j["jqr"] = {{"two_by_two", r.jqr->two_by_two_count},
                {"row_swaps", r.jqr->row_swaps.size()},
                {"pivot_growth", number(r.jqr->pivot_growth)}};
  }
  if (r.hz) {
    j["hz"] = {{"sweeps", r.hz->sweeps},       {"inner_sweeps", r.hz->inner_sweeps},
               {"big_count", r.hz->big_count}, {"all_count", r.hz->all_count},
               {"converged", r.hz->converged}};
  }
  j["eigen_residual"] = optional_number(r.eigen_residual);
  j["err_f"] = optional_number(r.err_f);
  j["err_g"] = optional_number(r.err_g);
  j["kappa_z"] = optional_number(r.kappa_z);
  j["perturbed_pivots"] = r.perturbed_pivots;
  j["lambda"] = numbers(r.lambda_sorted);
  j["oracle"] = comparison(r.oracle_cmp);
  if (!r.oracle_error.empty()) j["oracle_error"] = r.oracle_error;
  j["known"] = comparison(r.known_cmp);
  if (with_timings) {
    json t = json::object();
    for (const auto& p : r.timings) t[p.name] = p.seconds;
    j["timings"] = t;
  }
  return j.dump(2);
}

std::string report_text(const RunReport& r) {
  std::ostringstream out;
  const auto row = [&](const std::string& key, const auto& value) {
    out << std::left << std::setw(18) << key << value << '\n';
  };
  const auto sci = [](double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << v;
    return s.str();
  };
  row("status", to_string(r.status));
  if (r.status != RunStatus::Ok) {
    row("failed phase", r.failed_phase);
    row("error", r.error);
  }
  row("source", r.source);
  row("phases", r.phases);
  row("variant", r.variant + " / " + r.strategy);
  row("workers x lanes", std::to_string(r.workers) + " x " + std::to_string(r.lanes));
  row("seed", r.seed);
  row("size", std::to_string(r.m) + " x " + std::to_string(r.n));
  if (r.jqr) row("2x2 pivots", r.jqr->two_by_two_count);
  if (r.hz) {
    row("sweeps", std::to_string(r.hz->sweeps) + (r.hz->converged ? "" : " (not converged)"));
    row("transforms", std::to_string(r.hz->big_count) + " big / " + std::to_string(r.hz->all_count));
  }
  if (r.eigen_residual) row("eigen residual", sci(*r.eigen_residual));
  if (r.err_f) row("err F", sci(*r.err_f));
  if (r.err_g) row("err G", sci(*r.err_g));
  if (r.kappa_z) row("kappa(Z) proxy", sci(*r.kappa_z));
  if (r.perturbed_pivots) row("perturbed pivots", r.perturbed_pivots);
  if (!r.lambda_sorted.empty()) {
    row("lambda min", sci(r.lambda_sorted.front()));
    row("lambda max", sci(r.lambda_sorted.back()));
  }
  if (r.oracle_cmp) row("vs oracle", sci(r.oracle_cmp->max_rel) + (r.oracle_cmp->pass ? " pass" : " FAIL"));
  if (!r.oracle_error.empty()) row("oracle", r.oracle_error);
  if (r.known_cmp) row("vs known", sci(r.known_cmp->max_rel) + (r.known_cmp->pass ? " pass" : " FAIL"));
  for (const auto& t : r.timings) row("time " + t.name, sci(t.seconds) + " s");
  return out.str();
}

}  // namespace ghsvd
