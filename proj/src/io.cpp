// SPDX-License-Identifier: Apache-2.0
#include "deconv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace deconv {

namespace fs = std::filesystem;

namespace {

// JSON has no inf/nan literals; those become strings.
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double parse_field(const std::string& f, const std::string& origin, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(f, &used);
    if (used != f.size()) throw std::invalid_argument(f);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("io.read_signal_csv",
                          origin + ":" + std::to_string(line) + ": bad number '" + f + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("io.write", "cannot open " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw ComputationError("io.write", "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw ComputationError("io.write", "rename to " + path.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

std::string signal_csv(const SampledSignal& s) {
  std::string out = "t,re,im\n";
  for (std::size_t k = 0; k < s.size(); ++k)
    out += format_double(s.t_at(k)) + "," + format_double(s[k].real()) + "," +
           format_double(s[k].imag()) + "\n";
  return out;
}

std::string transform_csv(const TransformSamples& ts) {
  std::string out = "lambda,re,im\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    out += format_double(ts.frequencies[i]) + "," + format_double(ts.values[i].real()) + "," +
           format_double(ts.values[i].imag()) + "\n";
  return out;
}

std::string profile_csv(const TailProfile& p) {
  std::string out = "s,p\n";
  for (std::size_t k = 0; k < p.s_grid.size(); ++k)
    out += format_double(p.s_grid[k]) + "," + format_double(p.p_values[k]) + "\n";
  return out;
}

std::string dual_csv(const DualProfile& d) {
  std::string out = "s,pstar\n";
  for (std::size_t k = 0; k < d.s_grid.size(); ++k)
    out += format_double(d.s_grid[k]) + "," + format_double(d.dual_values[k]) + "\n";
  return out;
}

std::string sweep_csv(const SweepSummary& s) {
  std::string out = "eps,s_eps,delta,r_eps,achieved_error,bound,rate_ref,c3_row\n";
  for (const auto& r : s.records) {
    if (!r.ok) {
      out += format_double(r.eps) + ",nan,nan,nan,nan,nan,nan,nan\n";
      continue;
    }
    out += format_double(r.eps) + "," + format_double(r.s_eps) + "," + format_double(r.delta) +
           "," + format_double(r.r_eps) + "," + format_double(r.achieved_error) + "," +
           format_double(r.bound) + "," + format_double(r.rate_ref) + "," +
           format_double(r.c3_row) + "\n";
  }
  return out;
}

std::string zero_csv(const ZeroCountReport& r) {
  std::string out = "R,n,density\n";
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    out += format_double(r.radii[i]) + "," + std::to_string(r.counts[i]) + "," +
           format_double(r.densities[i]) + "\n";
  return out;
}

SampledSignal parse_signal_csv(const std::string& text, const std::string& origin) {
  constexpr const char* op = "io.read_signal_csv";
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(op, origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,re,im") throw ValidationError(op, origin + ": expected header t,re,im");
  std::vector<double> t;
  std::vector<Complex> v;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 3) throw ValidationError(op, origin + ":" + std::to_string(ln) + ": need 3 fields");
    t.push_back(parse_field(f[0], origin, ln));
    v.emplace_back(parse_field(f[1], origin, ln), parse_field(f[2], origin, ln));
  }
  if (t.size() < 2) throw ValidationError(op, origin + ": need at least two samples");
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(h > 0.0)) throw ValidationError(op, origin + ": abscissae must increase");
  for (std::size_t k = 0; k < t.size(); ++k)
    if (std::abs(t[k] - (t.front() + static_cast<double>(k) * h)) > 1e-6 * h)
      throw ValidationError(op, origin + ": abscissae are not uniformly spaced");
  return {t.front(), h, std::move(v)};
}

SampledSignal read_signal_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("io.read_signal_csv", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_signal_csv(ss.str(), path.string());
}

nlohmann::json to_json(const RegularizationPlan& p) {
  return {{"eps", num(p.eps)},     {"beta", num(p.beta)},   {"q", num(p.q)},
          {"c1", num(p.c1)},       {"c2", num(p.c2)},       {"delta", num(p.delta)},
          {"s_eps", num(p.s_eps)}, {"r_eps", num(p.r_eps)}, {"g0_l2", num(p.g0_l2)},
          {"phi0_l1", num(p.phi0_l1)}};
}

nlohmann::json to_json(const ErrorDecomposition& d) {
  return {{"outer_term", num(d.outer_term)},
          {"inner_term", num(d.inner_term)},
          {"data_term", num(d.data_term)},
          {"total_bound", num(d.total_bound)},
          {"achieved_sq_error", num(d.achieved_sq_error)},
          {"outer_tail_correction", num(d.outer_tail_correction)},
          {"coverage_insufficient", d.coverage_insufficient},
          {"bound_holds", d.bound_holds}};
}

nlohmann::json to_json(const SmallSetReport& r) {
  nlohmann::json iv = nlohmann::json::array();
  for (const auto& [lo, hi] : r.intervals) iv.push_back({num(lo), num(hi)});
  return {{"eps", num(r.eps)},
          {"threshold", num(r.threshold)},
          {"r_eps", num(r.r_eps)},
          {"resolution", num(r.resolution)},
          {"measure_estimate", num(r.measure_estimate)},
          {"bound", num(r.bound)},
          {"interval_count", r.interval_count},
          {"intervals", iv},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const ZeroCountReport& r) {
  nlohmann::json j = {{"radii", r.radii},
                      {"counts", r.counts},
                      {"densities", r.densities},
                      {"winding_integrals", r.winding_integrals},
                      {"d_hat", num(r.d_hat)}};
  j["sigma_hat"] = r.sigma_hat ? num(*r.sigma_hat) : nlohmann::json();
  j["mu_hat"] = r.mu_hat ? num(*r.mu_hat) : nlohmann::json();
  j["predicted_density"] = r.predicted_density ? num(*r.predicted_density) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const GrowthEstimate& g) {
  nlohmann::json pos = nlohmann::json::array();
  nlohmann::json neg = nlohmann::json::array();
  for (std::size_t i = 0; i < g.radii.size(); ++i) {
    pos.push_back(num(g.log_ratio_pos[i]));
    neg.push_back(num(g.log_ratio_neg[i]));
  }
  return {{"radii", g.radii},
          {"log_ratio_pos", pos},
          {"log_ratio_neg", neg},
          {"excluded", g.excluded},
          {"sigma_hat", num(g.sigma_hat)},
          {"mu_hat", num(g.mu_hat)}};
}

}  // namespace deconv
