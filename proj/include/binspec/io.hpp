#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "binspec/costmodel.hpp"
#include "binspec/errors.hpp"
#include "binspec/qeep.hpp"
#include "binspec/rqeep.hpp"
#include "binspec/spectrum.hpp"
#include "binspec/timeseries.hpp"

namespace binspec::io {

using nlohmann::json;

inline constexpr const char* kFormatVersion = "binspec-1";

/// Shortest round-trip decimal form; "nan"/"inf" spelled out.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

namespace detail {

inline double finite_number(const json& j, const std::string& what) {
  binspec::detail::require(j.is_number(), what + " must be a finite number");
  const double x = j.get<double>();
  binspec::detail::require(std::isfinite(x), what + " must be finite");
  return x;
}

inline std::vector<double> finite_array(const json& j, const std::string& what) {
  binspec::detail::require(j.is_array(), what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(finite_number(x, what));
  return out;
}

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace detail

inline json to_json(const Spectrum& s) {
  return {{"format", kFormatVersion},
          {"kind", "spectrum"},
          {"source", s.source()},
          {"scale_factor", s.scale_factor()},
          {"eigenvalues", std::vector<double>(s.eigenvalues().begin(), s.eigenvalues().end())},
          {"weights", std::vector<double>(s.weights().begin(), s.weights().end())}};
}

/// Parses and validates; NaN/Inf (null in JSON) and promise violations are
/// rejected with ValidationError.
inline Spectrum spectrum_from_json(const json& j) {
  binspec::detail::require(j.is_object(), "spectrum JSON must be an object");
  binspec::detail::require(j.contains("eigenvalues") && j.contains("weights"),
                           "spectrum JSON needs eigenvalues and weights");
  const double scale = j.contains("scale_factor") ? detail::finite_number(j["scale_factor"], "scale_factor") : 1.0;
  const std::string source = j.contains("source") && j["source"].is_string() ? j["source"].get<std::string>() : "";
  return Spectrum(detail::finite_array(j["eigenvalues"], "eigenvalues"), detail::finite_array(j["weights"], "weights"),
                  scale, source);
}

inline json to_json(const TimeSeries& g) {
  std::vector<double> re, im;
  for (const cplx& z : g.samples()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"format", kFormatVersion},
          {"kind", "time_series"},
          {"max_t", g.max_t()},
          {"mode", g.mode() == SeriesMode::exact ? "exact" : "sampled"},
          {"shots_per_point", g.shots_per_point()},
          {"seed", g.seed()},
          {"real", re},
          {"imag", im}};
}

inline TimeSeries time_series_from_json(const json& j) {
  binspec::detail::require(j.is_object() && j.contains("real") && j.contains("imag") && j.contains("max_t"),
                           "time series JSON needs max_t, real and imag");
  const auto re = detail::finite_array(j["real"], "real");
  const auto im = detail::finite_array(j["imag"], "imag");
  binspec::detail::require(re.size() == im.size(), "real and imag lengths differ");
  std::vector<cplx> samples(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) samples[i] = {re[i], im[i]};
  const std::string mode = j.value("mode", std::string("exact"));
  binspec::detail::require(mode == "exact" || mode == "sampled", "unknown series mode '" + mode + "'");
  return TimeSeries(j["max_t"].get<int>(), std::move(samples), mode == "exact" ? SeriesMode::exact : SeriesMode::sampled,
                    j.value("shots_per_point", std::int64_t{0}), j.value("seed", std::uint64_t{0}));
}

inline json to_json(const BinnedEstimate& q) {
  return {{"format", kFormatVersion},
          {"kind", "binned_estimate"},
          {"eta", q.eta},
          {"M", q.M()},
          {"indicator", to_string(q.indicator_kind)},
          {"truncation_T", q.truncation_T},
          {"epsilon_target", q.epsilon_target},
          {"provenance", to_string(q.provenance)},
          {"imag_residue", q.imag_residue},
          {"centers", q.centers()},
          {"values", q.values}};
}

inline BinnedEstimate binned_estimate_from_json(const json& j) {
  binspec::detail::require(j.is_object() && j.contains("eta") && j.contains("values"),
                           "binned estimate JSON needs eta and values");
  BinnedEstimate q;
  q.eta = detail::finite_number(j["eta"], "eta");
  q.values = detail::finite_array(j["values"], "values");
  binspec::detail::require(static_cast<int>(q.values.size()) == max_bin_index(q.eta) + 1,
                           "binned estimate has the wrong number of bins for eta");
  q.truncation_T = j.value("truncation_T", 0);
  q.indicator_kind = indicator_kind_from_string(j.value("indicator", std::string("cos2")));
  q.epsilon_target = j.value("epsilon_target", 0.0);
  q.provenance = j.value("provenance", std::string("exact_p")) == "exact_p" ? Provenance::exact_p
                                                                             : Provenance::estimated_q;
  q.imag_residue = j.value("imag_residue", 0.0);
  return q;
}

inline json to_json(const RQeepResult& r) {
  return {{"format", kFormatVersion},
          {"kind", "rqeep_result"},
          {"seed", r.seed},
          {"repetitions", r.repetitions},
          {"iteration", r.iteration},
          {"qeep_eta", r.qeep.eta},
          {"qeep_epsilon", r.qeep.epsilon},
          {"truncation_T", r.truncation_T},
          {"shots_per_point", r.shots_per_point},
          {"breakpoints", r.breakpoints},
          {"lower", r.lower},
          {"upper", r.upper},
          {"estimate", r.estimate},
          {"true_counts", r.true_counts},
          {"envelope_gap", r.envelope_gap},
          {"deviation", r.deviation},
          {"success", r.success}};
}

inline json to_json(const CostScenario& s) {
  json j = {{"L", s.L},
            {"u", s.u},
            {"v", s.v},
            {"synthesis", to_string(s.synthesis)},
            {"trotter_order", s.trotter_order},
            {"trotter_constants", {{"1", s.trotter_constants[0]}, {"2", s.trotter_constants[1]}, {"4", s.trotter_constants[2]}}},
            {"indicator", to_string(s.indicator)},
            {"epsilon", s.epsilon},
            {"q_noise", s.q_noise},
            {"epsilon_tar", s.epsilon_tar},
            {"trotter_split", s.trotter_split},
            {"extra_qubits", s.extra_qubits}};
  j["Lambda"] = s.Lambda ? json(*s.Lambda) : json(nullptr);
  return j;
}

/// Every field optional; missing ones keep the CostScenario defaults.
inline CostScenario scenario_from_json(const json& j) {
  binspec::detail::require(j.is_object(), "scenario JSON must be an object");
  CostScenario s;
  for (const auto& [key, value] : j.items()) {
    if (key == "L") s.L = value.get<int>();
    else if (key == "u") s.u = detail::finite_number(value, key);
    else if (key == "v") s.v = detail::finite_number(value, key);
    else if (key == "Lambda") { if (!value.is_null()) s.Lambda = detail::finite_number(value, key); }
    else if (key == "synthesis") s.synthesis = synthesis_from_string(value.get<std::string>());
    else if (key == "trotter_order") s.trotter_order = value.get<int>();
    else if (key == "trotter_constants") {
      binspec::detail::require(value.is_object(), "trotter_constants must map order to W_p");
      for (const auto& [order, w] : value.items())
        s.trotter_constants[static_cast<std::size_t>(trotter_order_index(std::stoi(order)))] =
            detail::finite_number(w, "W_" + order);
    }
    else if (key == "indicator") s.indicator = indicator_kind_from_string(value.get<std::string>());
    else if (key == "epsilon") s.epsilon = detail::finite_number(value, key);
    else if (key == "q_noise") s.q_noise = detail::finite_number(value, key);
    else if (key == "epsilon_tar") s.epsilon_tar = detail::finite_number(value, key);
    else if (key == "trotter_split") s.trotter_split = detail::finite_number(value, key);
    else if (key == "extra_qubits") s.extra_qubits = value.get<int>();
    else throw ValidationError("unknown scenario field '" + key + "'");
  }
  s.validate();
  return s;
}

// CSV writers

inline std::string bins_csv(const BinnedEstimate& q) {
  std::ostringstream out;
  out << "j,w_j,value\n";
  for (int j = 0; j <= q.M(); ++j)
    out << j << ',' << format_double(q.center(j)) << ',' << format_double(q.values[static_cast<std::size_t>(j)]) << '\n';
  return out.str();
}

inline std::string coefficients_csv(const std::vector<double>& coeffs) {
  std::ostringstream out;
  out << "t,F_t\n";
  for (std::size_t t = 0; t < coeffs.size(); ++t) out << t << ',' << format_double(coeffs[t]) << '\n';
  return out.str();
}

inline std::string rqeep_csv(const RQeepResult& r) {
  std::ostringstream out;
  out << "i,x_lo,x_hi,y_lwr,y_upr,y,n_true\n";
  for (std::size_t i = 0; i < r.estimate.size(); ++i)
    out << i << ',' << format_double(r.breakpoints[i]) << ',' << format_double(r.breakpoints[i + 1]) << ','
        << format_double(r.lower[i]) << ',' << format_double(r.upper[i]) << ',' << format_double(r.estimate[i])
        << ',' << format_double(r.true_counts[i]) << '\n';
  return out.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "L,epsilon,synthesis,indicator,q_noise,trotter_order,runtime_budget,eta_min,m,delta_over_dim\n";
  for (const SweepRow& r : rows)
    out << r.L << ',' << format_double(r.epsilon) << ',' << to_string(r.synthesis) << ',' << to_string(r.indicator)
        << ',' << format_double(r.q_noise) << ',' << r.trotter_order << ',' << format_double(r.runtime_budget) << ','
        << format_double(r.eta_min) << ',' << r.m << ',' << format_double(r.delta_over_dim) << '\n';
  return out.str();
}

struct TBoundRow {
  double eta = 0.0;
  double epsilon = 0.0;
  double T_somma = 0.0;
  double T_cos2 = 0.0;
  long T_numeric = 0;
};

inline std::string tbound_csv(const std::vector<TBoundRow>& rows) {
  std::ostringstream out;
  out << "eta,epsilon,T_somma,T_cos2,T_numeric\n";
  for (const TBoundRow& r : rows)
    out << format_double(r.eta) << ',' << format_double(r.epsilon) << ',' << format_double(r.T_somma) << ','
        << format_double(r.T_cos2) << ',' << r.T_numeric << '\n';
  return out.str();
}

// Files

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace binspec::io
