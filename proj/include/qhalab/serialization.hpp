#pragma once

// JSON / CSV serialization for all domain objects. Doubles go through
// nlohmann's shortest-round-trip printer, so reload is bit-exact; reports
// carry no volatile fields (timings stay on the console), so a fixed seed
// yields byte-identical files.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qhalab/concentration.hpp"
#include "qhalab/experiments.hpp"
#include "qhalab/window.hpp"

namespace qhalab {

using nlohmann::json;

inline std::string mode_name(GridMode m) {
  return m == GridMode::ExactCyclic ? "exact" : "continuum";
}
inline GridMode mode_from_name(const std::string& s) {
  if (s == "exact") return GridMode::ExactCyclic;
  if (s == "continuum") return GridMode::ContinuumEmulation;
  throw std::invalid_argument("unknown grid mode: " + s);
}

// --- signals -------------------------------------------------------------------

inline json to_json(const Signal& f) {
  json data = json::array();
  for (int j = 0; j < f.grid.n; ++j)
    data.push_back({f.data[j].real(), f.data[j].imag()});
  return json{{"n", f.grid.n}, {"mode", mode_name(f.grid.mode)},
              {"data", std::move(data)}};
}

inline Signal signal_from_json(const json& j) {
  GridModel g(j.at("n").get<int>(), mode_from_name(j.at("mode").get<std::string>()));
  const auto& data = j.at("data");
  if (int(data.size()) != g.n)
    throw std::invalid_argument("signal data length != n");
  VectorXcd v(g.n);
  for (int i = 0; i < g.n; ++i)
    v[i] = cplx(data[i][0].get<double>(), data[i][1].get<double>());
  return Signal(g, std::move(v));
}

// --- regions -------------------------------------------------------------------

inline json to_json(const Region& r) {
  json mask = json::array();
  for (auto b : r.mask) mask.push_back(b != 0);
  return json{{"n", r.grid.n}, {"mode", mode_name(r.grid.mode)},
              {"mask", std::move(mask)}};
}

inline Region region_from_json(const json& j) {
  GridModel g(j.at("n").get<int>(),
              mode_from_name(j.value("mode", std::string("exact"))));
  const auto& mask = j.at("mask");
  std::vector<std::uint8_t> m(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) m[i] = mask[i].get<bool>() ? 1 : 0;
  return Region(g, std::move(m));
}

// --- operator windows -------------------------------------------------------------

inline json to_json(const OperatorWindow& w) {
  json rows = json::array();
  for (int i = 0; i < w.grid.n; ++i) {
    json row = json::array();
    for (int j = 0; j < w.grid.n; ++j)
      row.push_back({w.matrix(i, j).real(), w.matrix(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return json{{"n", w.grid.n},
              {"mode", mode_name(w.grid.mode)},
              {"matrix", std::move(rows)},
              {"flags", {{"hermitian", w.flags.hermitian},
                         {"positive", w.flags.positive}}},
              {"structure", to_string(w.structure)}};
}

inline OperatorWindow window_from_json(const json& j) {
  GridModel g(j.at("n").get<int>(), mode_from_name(j.at("mode").get<std::string>()));
  const auto& rows = j.at("matrix");
  MatrixXcd M(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < g.n; ++k)
      M(i, k) = cplx(rows[i][k][0].get<double>(), rows[i][k][1].get<double>());
  OperatorWindow w(g, std::move(M));
  detail::verify_flags(w);
  return w;
}

// --- phase functions ---------------------------------------------------------------

// CSV export, row-major by (m,k): columns m,k,re,im
inline std::string to_csv(const PhaseFunction& F) {
  std::ostringstream os;
  os << "m,k,re,im\n";
  for (int m = 0; m < F.grid.n; ++m)
    for (int k = 0; k < F.grid.n; ++k)
      os << m << ',' << k << ',' << format12(F.values(m, k).real()) << ','
         << format12(F.values(m, k).imag()) << '\n';
  return os.str();
}

// --- concentration results -----------------------------------------------------------

inline json to_json(const ConcentrationResult& r,
                    const std::string& optimizer_ref) {
  json ub{{"universal", r.upper_bounds.universal}};
  if (r.upper_bounds.jensen) ub["jensen"] = *r.upper_bounds.jensen;
  if (r.upper_bounds.wigner_escape)
    ub["wigner_escape"] = *r.upper_bounds.wigner_escape;
  json trace = json::array();
  for (const auto& t : r.trace)
    trace.push_back({{"iter", t.iter}, {"J", t.value}, {"step", t.step}});
  json out{{"value", r.value},
           {"ess_lower", r.ess_lower},
           {"upper_bounds", std::move(ub)},
           {"verdict", r.verdict},
           {"optimizer", optimizer_ref},
           {"converged", r.converged},
           {"trace", std::move(trace)}};
  if (r.ess_certified_upper) {
    out["ess_certified_upper"] = *r.ess_certified_upper;
    out["ess_certificate_basis"] = r.ess_certificate_basis;
  }
  return out;
}

// --- double phase space -------------------------------------------------------

// Summary statistics by default; the full field only for small grids.
inline json to_json(const DoublePhaseFunction& F, bool full_dump = false) {
  json out{{"n", F.grid.n},
           {"mode", mode_name(F.grid.mode)},
           {"l2_norm", F.l2_norm()},
           {"max_abs", F.values.cwiseAbs().maxCoeff()}};
  if (full_dump) {
    if (F.grid.n > 16)
      throw std::invalid_argument("double-phase dump limited to n <= 16");
    json rows = json::array();
    for (long w = 0; w < F.values.rows(); ++w) {
      json row = json::array();
      for (long z = 0; z < F.values.cols(); ++z)
        row.push_back({F.values(w, z).real(), F.values(w, z).imag()});
      rows.push_back(std::move(row));
    }
    out["values"] = std::move(rows);
  }
  return out;
}

// --- experiment reports -----------------------------------------------------------

inline json to_json(const ExperimentReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"parameter", r.parameter},
                    {"measured", r.measured},
                    {"target", r.target},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass},
                    {"target_basis", r.target_basis}});
  return json{{"name", rep.name},
              {"inputs", rep.inputs},
              {"measured_sequence", rep.measured_sequence},
              {"rows", std::move(rows)},
              {"verdict", rep.verdict},
              {"tail_monotone", rep.tail_monotone},
              {"pass", rep.pass}};
}

inline std::string to_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "experiment,parameter,measured,target,tolerance,pass\n";
  for (const auto& r : rep.rows)
    os << rep.name << ',' << r.parameter << ',' << format12(r.measured) << ','
       << format12(r.target) << ',' << format12(r.tolerance) << ','
       << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

// --- files ---------------------------------------------------------------------

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

inline void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace qhalab
