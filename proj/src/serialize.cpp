#include "thetafock/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thetafock {

Json config_to_json(const SpaceConfig& cfg) {
  Json j;
  j["g"] = cfg.g;
  j["nu"] = cfg.nu;
  j["alpha"] = cfg.alpha;
  j["theta_tol"] = cfg.theta_tol;
  j["n_max"] = cfg.n_max;
  j["k_max"] = cfg.k_max;
  j["quad"] = Json{{"x_points", cfg.quad.x_points},
                   {"hermite_order", cfg.quad.hermite_order}};
  j["seed"] = cfg.seed;
  return j;
}

SpaceConfig config_from_json(const Json& j) {
  SpaceConfig cfg;
  try {
    cfg.g = j.at("g").get<int>();
    cfg.nu = j.at("nu").get<double>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.theta_tol = j.at("theta_tol").get<double>();
    cfg.n_max = j.at("n_max").get<int>();
    cfg.k_max = j.at("k_max").get<int>();
    const Json& q = j.at("quad");
    cfg.quad.x_points = q.at("x_points").get<int>();
    cfg.quad.hermite_order = q.at("hermite_order").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& ex) {
    throw std::invalid_argument(std::string("config: bad schema: ") + ex.what());
  }
  cfg.validate();
  return cfg;
}

SpaceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot read " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& ex) {
    throw std::invalid_argument("config: invalid JSON in " + path + ": " +
                                ex.what());
  }
  return config_from_json(j);
}

Json expansion_to_json(const Expansion& e) {
  Json arr = Json::array();
  for (const auto& [idx, a] : e.coeffs) {
    Json entry;
    entry["n"] = idx.n;
    entry["k"] = idx.k.k;
    entry["re"] = a.real();
    entry["im"] = a.imag();
    arr.push_back(std::move(entry));
  }
  return Json{{"coeffs", std::move(arr)}};
}

Expansion expansion_from_json(const SpaceConfig& cfg, const Json& j) {
  Expansion e;
  e.cfg = cfg;
  try {
    for (const Json& entry : j.at("coeffs")) {
      BasisIndex idx;
      idx.n = entry.at("n").get<long>();
      idx.k = MultiIndex(entry.at("k").get<std::vector<int>>());
      if (idx.k.size() != cfg.transverse_dim())
        throw std::invalid_argument(
            "expansion: multi-index length does not match config");
      Complex a(entry.at("re").get<double>(), entry.at("im").get<double>());
      e.coeffs[idx] = a;
    }
  } catch (const Json::exception& ex) {
    throw std::invalid_argument(std::string("expansion: bad schema: ") + ex.what());
  }
  return e;
}

Expansion load_expansion(const SpaceConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("expansion: cannot read " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& ex) {
    throw std::invalid_argument("expansion: invalid JSON in " + path + ": " +
                                ex.what());
  }
  return expansion_from_json(cfg, j);
}

std::string gram_to_csv(const GramMatrix& gm) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < gm.n; ++i) {
    for (std::size_t j = 0; j < gm.n; ++j) {
      Complex v = gm.at(i, j);
      if (j) os << ',';
      os << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << 'j';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace thetafock
