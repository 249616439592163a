#include "willis/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "willis/errors.hpp"

namespace willis::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Whitespace split that keeps (...) and [...] groups intact.
std::vector<std::string> tokens(const std::string& s, char sep = ' ') {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    const bool split = depth == 0 && (sep == ' ' ? (c == ' ' || c == '\t') : c == sep);
    if (split) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw ConfigError("unbalanced brackets in '" + s + "'");
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double parse_real_token(const std::string& token) {
  const auto slash = token.find('/');
  try {
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const std::string num = token.substr(0, slash);
      const std::string den = token.substr(slash + 1);
      const double a = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(token);
      const double b = std::stod(den, &used);
      if (used != den.size()) throw std::invalid_argument(token);
      return a / b;
    }
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("not a number: '" + token + "'");
  }
}

double parse_real(const std::string& token) {
  const cplx v = parse_number(token);
  if (v.imag() != 0.0) throw ConfigError("expected a real number, got '" + token + "'");
  return v.real();
}

int parse_int(const std::string& token) {
  const double v = parse_real(token);
  if (v != static_cast<int>(v)) throw ConfigError("expected an integer, got '" + token + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : tokens(s)) out.push_back(parse_real(t));
  return out;
}

Eigen::VectorXcd parse_vector(const std::string& s) {
  std::string body = trim(s);
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  const auto t = tokens(body);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_number(t[i]);
  return v;
}

// [a b; c d] row by row, or a bare number meaning that multiple of I.
Eigen::MatrixXcd parse_matrix(const std::string& s, int d) {
  const std::string body = trim(s);
  if (body.empty() || body.front() != '[') return parse_number(body) * Eigen::MatrixXcd::Identity(d, d);
  const auto rows = tokens(body.substr(1, body.size() - 2), ';');
  if (static_cast<int>(rows.size()) != d) throw ConfigError("matrix '" + s + "' must have " + std::to_string(d) + " rows");
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r) {
    const Eigen::VectorXcd row = parse_vector(rows[r]);
    if (row.size() != d) throw ConfigError("matrix '" + s + "' must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

std::map<std::string, std::string> key_values(const std::string& name, const std::string& s) {
  std::map<std::string, std::string> out;
  for (const auto& t : tokens(s)) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("phase '" + name + "': expected key=value, got '" + t + "'");
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

std::string require(const std::map<std::string, std::string>& kv, const std::string& phase, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError("phase '" + phase + "' is missing '" + key + "'");
  return it->second;
}

void check_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section)
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
}

std::string get(const pt::ptree& tree, const std::string& path, const std::string& fallback = "") {
  return trim(tree.get<std::string>(path, fallback));
}

Lattice read_lattice(const pt::ptree& tree, int dimension, double layered_period) {
  const pt::ptree section = tree.get_child("lattice", pt::ptree());
  check_keys(section, "lattice", {"dimension", "period", "edge", "vectors"});
  const std::string vectors = get(section, "vectors");
  if (!vectors.empty()) {
    const auto rows = tokens(vectors, ';');
    if (static_cast<int>(rows.size()) != dimension) throw ConfigError("[lattice] vectors must list one vector per dimension");
    Eigen::MatrixXd a(dimension, dimension);
    for (int j = 0; j < dimension; ++j) {
      const auto v = parse_reals(rows[j]);
      if (static_cast<int>(v.size()) != dimension) throw ConfigError("[lattice] vector length must equal the dimension");
      for (int i = 0; i < dimension; ++i) a(i, j) = v[i];
    }
    return Lattice(a);
  }
  const std::string edge = get(section, dimension == 1 ? "period" : "edge", get(section, "edge", get(section, "period")));
  if (!edge.empty()) return Lattice::cubic(dimension, parse_real(edge));
  if (dimension == 1 && layered_period > 0.0) return Lattice::line(layered_period);
  return Lattice::cubic(dimension, 1.0);
}

}  // namespace

cplx parse_number(const std::string& raw) {
  const std::string token = trim(raw);
  if (token.empty()) throw ConfigError("empty number");
  if (token.front() == '(') {
    if (token.back() != ')') throw ConfigError("bad complex number '" + token + "'");
    const std::string body = token.substr(1, token.size() - 2);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw ConfigError("complex number needs (re,im): '" + token + "'");
    return {parse_real_token(trim(body.substr(0, comma))), parse_real_token(trim(body.substr(comma + 1)))};
  }
  return parse_real_token(token);
}

int JobConfig::dimension() const {
  if (const auto* s = std::get_if<ScalarProfile>(&profile)) return s->dimension();
  if (const auto* e = std::get_if<ElasticProfile>(&profile)) return e->dimension();
  return 0;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

JobConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& [name, section] : tree)
    if (name != "lattice" && name != "phases" && name != "geometry" && name != "job")
      throw ConfigError("unknown section [" + name + "]");

  JobConfig cfg;
  cfg.text = text;
  const pt::ptree job = tree.get_child("job", pt::ptree());
  check_keys(job, "job",
             {"model", "truncation", "rule", "branches", "k_start", "k_stop", "k_count", "direction", "points",
              "branch", "y0", "log_branch", "tolerance", "polish"});
  const std::string model = get(job, "model", "scalar");
  if (model == "scalar") {
    cfg.model = WaveModel::scalar;
  } else if (model == "elastic") {
    cfg.model = WaveModel::elastic;
  } else {
    throw ConfigError("[job] model must be scalar or elastic");
  }

  const pt::ptree lattice_section = tree.get_child("lattice", pt::ptree());
  const int d = parse_int(get(lattice_section, "dimension", "1"));
  if (d < 1 || d > 3) throw ConfigError("[lattice] dimension must be 1, 2 or 3");

  // Phases, in file order.
  const auto phases_section = tree.get_child_optional("phases");
  if (!phases_section || phases_section->empty()) throw ConfigError("[phases] must define at least one phase");
  std::vector<std::string> names;
  std::vector<std::map<std::string, std::string>> specs;
  for (const auto& [name, value] : *phases_section) {
    if (std::find(names.begin(), names.end(), name) != names.end()) throw ConfigError("phase '" + name + "' defined twice");
    names.push_back(name);
    specs.push_back(key_values(name, value.data()));
  }
  auto phase_index = [&](const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError("geometry references undefined phase '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
  };

  // Geometry.
  const pt::ptree geo = tree.get_child("geometry", pt::ptree());
  check_keys(geo, "geometry", {"type", "layers", "inclusion", "matrix", "radius"});
  const std::string type = get(geo, "type", "layers");
  Geometry geometry;
  double layered_period = 0.0;
  if (type == "layers") {
    LayerStack stack;
    const auto list = tokens(get(geo, "layers"));
    if (list.empty()) throw ConfigError("[geometry] layers is empty");
    for (const auto& item : list) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("layer '" + item + "' must read PHASE:THICKNESS");
      stack.layers.push_back({phase_index(item.substr(0, colon)), parse_real(item.substr(colon + 1))});
      layered_period += stack.layers.back().thickness;
    }
    geometry = stack;
  } else if (type == "sphere") {
    geometry = SphereInclusion{phase_index(get(geo, "inclusion")), phase_index(get(geo, "matrix")),
                               parse_real(get(geo, "radius", "0"))};
  } else {
    throw ConfigError("[geometry] type must be layers or sphere");
  }

  try {
    const Lattice lattice = read_lattice(tree, d, layered_period);
    if (cfg.model == WaveModel::scalar) {
      std::vector<ScalarPhase> phases;
      for (std::size_t p = 0; p < names.size(); ++p) {
        const auto& kv = specs[p];
        for (const auto& [key, value] : kv)
          if (key != "mu" && key != "rho" && key != "s")
            throw ConfigError("phase '" + names[p] + "': unknown property '" + key + "'");
        ScalarPhase ph;
        ph.name = names[p];
        ph.mu = parse_matrix(require(kv, names[p], "mu"), d);
        ph.rho = parse_real(require(kv, names[p], "rho"));
        ph.s = Eigen::VectorXcd::Zero(d);
        if (kv.count("s")) {
          ph.s = parse_vector(kv.at("s"));
          if (ph.s.size() != d) throw ConfigError("phase '" + names[p] + "': s needs " + std::to_string(d) + " entries");
        }
        phases.push_back(ph);
      }
      cfg.profile = ScalarProfile(lattice, phases, geometry);
    } else {
      std::vector<ElasticPhase> phases;
      for (std::size_t p = 0; p < names.size(); ++p) {
        const auto& kv = specs[p];
        for (const auto& [key, value] : kv)
          if (key != "lambda" && key != "mu" && key != "rho")
            throw ConfigError("phase '" + names[p] + "': unknown property '" + key + "'");
        phases.push_back(ElasticPhase::isotropic(names[p], parse_real(require(kv, names[p], "lambda")),
                                                 parse_real(require(kv, names[p], "mu")),
                                                 parse_real(require(kv, names[p], "rho"))));
      }
      cfg.profile = ElasticProfile(lattice, phases, geometry);
    }
  } catch (const willis::Error& e) {
    throw ConfigError(e.what());
  }

  // Job options.
  cfg.truncation = parse_int(get(job, "truncation", "16"));
  if (cfg.truncation < 1) throw ConfigError("[job] truncation must be >= 1");
  const std::string rule = get(job, "rule", "automatic");
  if (rule == "automatic") {
    cfg.rule = FactorizationRule::automatic;
  } else if (rule == "laurent") {
    cfg.rule = FactorizationRule::laurent;
  } else if (rule == "inverse") {
    cfg.rule = FactorizationRule::inverse;
  } else {
    throw ConfigError("[job] rule must be automatic, laurent or inverse");
  }
  cfg.branches = parse_int(get(job, "branches", "6"));
  if (cfg.branches < 1) throw ConfigError("[job] branches must be >= 1");
  cfg.k_start = parse_real(get(job, "k_start", "0"));
  cfg.k_stop = parse_real(get(job, "k_stop", "3.141592653589793"));
  cfg.k_count = parse_int(get(job, "k_count", "50"));
  if (cfg.k_count < 1) throw ConfigError("[job] k_count must be >= 1");
  if (cfg.k_count > 1 && !(cfg.k_stop > cfg.k_start)) throw ConfigError("[job] k_stop must exceed k_start");

  const int kdim = cfg.model == WaveModel::elastic ? 3 : d;
  const std::string dir = get(job, "direction");
  cfg.direction = Eigen::VectorXd::Zero(kdim);
  if (dir.empty()) {
    cfg.direction(0) = 1.0;
  } else {
    const auto v = parse_reals(dir);
    if (static_cast<int>(v.size()) != kdim) throw ConfigError("[job] direction needs " + std::to_string(kdim) + " entries");
    for (int i = 0; i < kdim; ++i) cfg.direction(i) = v[i];
  }

  for (const auto& point : tokens(get(job, "points"), ';')) {
    const auto v = parse_reals(point);
    if (static_cast<int>(v.size()) != kdim + 1)
      throw ConfigError("[job] each point needs omega and " + std::to_string(kdim) + " k components");
    if (v[0] < 0.0) throw ConfigError("[job] omega must be nonnegative");
    cfg.points_omega.push_back(v[0]);
    Eigen::VectorXd k(kdim);
    for (int i = 0; i < kdim; ++i) k(i) = v[i + 1];
    cfg.points_k.push_back(k);
  }
  for (const auto& b : tokens(get(job, "branch"))) {
    const int n = parse_int(b);
    if (n < 1 || n > cfg.branches) throw ConfigError("[job] branch must lie in 1..branches");
    cfg.branch_list.push_back(n);
  }
  cfg.y0 = parse_reals(get(job, "y0", "0"));
  cfg.log_branch = parse_int(get(job, "log_branch", "0"));
  cfg.tolerance = parse_real(get(job, "tolerance", "1e-10"));
  if (!(cfg.tolerance > 0.0) || cfg.tolerance >= 1.0) throw ConfigError("[job] tolerance must lie in (0, 1)");
  const std::string polish = get(job, "polish", "false");
  if (polish != "true" && polish != "false") throw ConfigError("[job] polish must be true or false");
  cfg.polish = polish == "true";
  return cfg;
}

}  // namespace willis::cli
