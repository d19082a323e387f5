#include "netmoment/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace netmoment::io {

using nlohmann::json;

std::string format_roundtrip(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string magnetization_to_json(const operators::Magnetization& m) {
  json j;
  auto dump = [](const std::vector<operators::Piece>& pieces) {
    json arr = json::array();
    for (const auto& p : pieces)
      arr.push_back(json::array({p.support.lo, p.support.hi, p.value}));
    return arr;
  };
  j["pieces1"] = dump(m.pieces1);
  j["pieces2"] = dump(m.pieces2);
  return j.dump(2) + "\n";
}

operators::Magnetization magnetization_from_json(const std::string& text) {
  const json j = json::parse(text);
  auto load = [](const json& arr) {
    std::vector<operators::Piece> pieces;
    for (const auto& item : arr) {
      if (!item.is_array() || item.size() != 3)
        throw std::invalid_argument("magnetization piece must be [lo, hi, value]");
      pieces.push_back(
          {Interval(item[0].get<double>(), item[1].get<double>()), item[2].get<double>()});
    }
    return pieces;
  };
  operators::Magnetization m;
  m.pieces1 = load(j.at("pieces1"));
  m.pieces2 = load(j.at("pieces2"));
  return m;
}

std::string field_samples_to_json(const operators::FieldSamples& f) {
  json j;
  j["grid_lo"] = f.grid_lo;
  j["grid_hi"] = f.grid_hi;
  j["values"] = f.values;
  return j.dump() + "\n";
}

operators::FieldSamples field_samples_from_json(const std::string& text) {
  const json j = json::parse(text);
  operators::FieldSamples f;
  f.grid_lo = j.at("grid_lo").get<double>();
  f.grid_hi = j.at("grid_hi").get<double>();
  f.values = j.at("values").get<std::vector<double>>();
  if (f.values.size() < 2 || !(f.grid_lo < f.grid_hi))
    throw std::invalid_argument("field samples: invalid grid");
  return f;
}

std::string space_name(bep::Space space) {
  return space == bep::Space::L2 ? "l2" : "w012";
}

bep::Space space_by_name(const std::string& name) {
  if (name == "l2" || name == "L2") return bep::Space::L2;
  if (name == "w012" || name == "W012") return bep::Space::W012;
  throw std::invalid_argument("unknown space: " + name + " (expected l2 or w012)");
}

std::string zero_mode_name(bep::ZeroMode mode) {
  switch (mode) {
    case bep::ZeroMode::Vanish: return "vanish";
    case bep::ZeroMode::Exclude: return "exclude";
    case bep::ZeroMode::Keep: return "keep";
  }
  throw std::invalid_argument("unknown zero mode enum");
}

bep::ZeroMode zero_mode_by_name(const std::string& name) {
  if (name == "vanish") return bep::ZeroMode::Vanish;
  if (name == "exclude") return bep::ZeroMode::Exclude;
  if (name == "keep") return bep::ZeroMode::Keep;
  throw std::invalid_argument("unknown zero mode: " + name);
}

std::string solution_to_json(const bep::BepSolution& sol) {
  json j;
  j["space"] = space_name(sol.space);
  j["zero_mode"] = zero_mode_name(sol.zero_mode);
  j["lambda"] = sol.lambda;
  j["M"] = sol.M_achieved;
  j["residual"] = sol.residual;
  j["geometry"] = {{"s", sol.geom.s}, {"q", sol.geom.q}, {"h", sol.geom.h}};
  j["N"] = sol.coeffs.N;
  json coeffs = json::array();
  for (const auto& c : sol.coeffs.coeffs)
    coeffs.push_back(json::array({c.real(), c.imag()}));
  j["coeffs"] = coeffs;
  return j.dump() + "\n";
}

bep::BepSolution solution_from_json(const std::string& text) {
  const json j = json::parse(text);
  bep::BepSolution sol;
  sol.space = space_by_name(j.at("space").get<std::string>());
  sol.zero_mode = zero_mode_by_name(j.value("zero_mode", "vanish"));
  sol.lambda = j.at("lambda").get<double>();
  sol.M_achieved = j.at("M").get<double>();
  sol.residual = j.at("residual").get<double>();
  const auto& g = j.at("geometry");
  sol.geom = Geometry(g.at("s").get<double>(), g.at("q").get<double>(),
                      g.at("h").get<double>());
  const int N = j.at("N").get<int>();
  sol.coeffs = FourierVector(N);
  const auto& coeffs = j.at("coeffs");
  if (static_cast<int>(coeffs.size()) != 2 * N + 1)
    throw std::invalid_argument("solution coeffs length does not match N");
  for (int i = 0; i < 2 * N + 1; ++i) {
    const auto& c = coeffs[static_cast<size_t>(i)];
    sol.coeffs.coeffs[static_cast<size_t>(i)] =
        std::complex<double>(c[0].get<double>(), c[1].get<double>());
  }
  return sol;
}

std::string sweep_to_csv(const std::vector<bep::SweepRow>& rows) {
  std::ostringstream out;
  out << "lambda,M,residual\n";
  for (const auto& row : rows) {
    if (row.ok)
      out << format_17(row.lambda) << ',' << format_17(row.M) << ','
          << format_17(row.residual) << '\n';
    else
      out << format_17(row.lambda) << ",error,error\n";
  }
  return out.str();
}

std::string reports_to_csv(const std::vector<experiments::MomentReport>& reports) {
  std::ostringstream out;
  out << "space,lambda,m1e,m2e,eps1,eps2\n";
  for (const auto& r : reports) {
    out << space_name(r.space) << ',' << format_17(r.lambda) << ','
        << format_17(r.m1_est) << ',' << format_17(r.m2_est) << ','
        << format_17(r.eps1) << ',' << format_17(r.eps2) << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace netmoment::io
