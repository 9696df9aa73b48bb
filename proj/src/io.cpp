#include "canon/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "canon/error.hpp"

namespace canon::io {
namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw InvalidModel(std::string("model JSON: missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::vector<double> array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw InvalidModel(std::string("model JSON: missing array field '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw InvalidModel(std::string("model JSON: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string type_of(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw InvalidModel("model JSON: expected an object with a string 'type'");
  return j.at("type").get<std::string>();
}

}  // namespace

measure::SpectralMeasure parse_measure(const json& j) {
  const std::string type = type_of(j);
  if (type == "lebesgue") return measure::SpectralMeasure::lebesgue();
  if (type == "homogeneous") return measure::SpectralMeasure::homogeneous(number(j, "c1"), number(j, "c2"));
  if (type == "quasi")
    return measure::SpectralMeasure::quasi_homogeneous(number(j, "nu"), number(j, "rho_plus"),
                                                       number(j, "rho_minus"));
  if (type == "table")
    return measure::SpectralMeasure::table(array(j, "x"), array(j, "rho"), number(j, "tail_plus"),
                                           number(j, "tail_minus"));
  throw InvalidModel("unknown measure type '" + type + "'");
}

system::HamiltonianSpec parse_hamiltonian(const json& j) {
  const std::string type = type_of(j);
  if (type == "identity") return system::HamiltonianSpec(system::Identity{});
  if (type == "diagonal_power") return system::HamiltonianSpec(system::DiagonalPower{number(j, "m")});
  if (type == "homogeneous_isp")
    return system::HamiltonianSpec(
        system::HomogeneousISP{number(j, "C1"), number_or(j, "C", 0.0), number_or(j, "C2", 0.0)});
  if (type == "table")
    return system::HamiltonianSpec(system::Tabulated{array(j, "t"), array(j, "h11"), array(j, "h12"), array(j, "h22")});
  throw InvalidModel("unknown Hamiltonian type '" + type + "'");
}

json load_json_argument(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  try {
    if (first != std::string::npos && arg[first] == '{') return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw InvalidModel("cannot open model file '" + arg + "'");
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidModel(std::string("model JSON does not parse: ") + e.what());
  }
}

measure::SpectralMeasure load_measure(const std::string& arg) { return parse_measure(load_json_argument(arg)); }

system::HamiltonianSpec load_hamiltonian(const std::string& arg) {
  return parse_hamiltonian(load_json_argument(arg));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw DomainError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw DomainError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text);
  std::stringstream ss(text);
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n) || n.empty())
    throw DomainError("grid must read a:b:n");
  const double lo = parse_list(a).at(0), hi = parse_list(b).at(0);
  const double count = parse_list(n).at(0);
  if (count < 1 || count != std::floor(count)) throw DomainError("grid count must be a positive integer");
  const int k = static_cast<int>(count);
  std::vector<double> out;
  if (k == 1) return {lo};
  for (int i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * i / (k - 1));
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace canon::io
