#include "gnqc/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace gnqc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_num(const std::string& s, int line_no) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s, int line_no) {
  const double v = parse_num(s, line_no);
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9) {
    throw ConfigError("line " + std::to_string(line_no) + ": expected an integer: '" + s + "'");
  }
  return i;
}

bool parse_bool(const std::string& s, int line_no) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("line " + std::to_string(line_no) + ": expected a boolean: '" + s + "'");
}

Rect parse_rect(const std::vector<std::string>& toks, int line_no) {
  if (toks.size() != 4) {
    throw ConfigError("line " + std::to_string(line_no) + ": rectangle needs x0 y0 x1 y1");
  }
  Rect r;
  r.lo = Vec2(parse_num(toks[0], line_no), parse_num(toks[1], line_no));
  r.hi = Vec2(parse_num(toks[2], line_no), parse_num(toks[3], line_no));
  return r;
}

BcEntry parse_bc(const std::vector<std::string>& toks, bool prescribed, int line_no) {
  // fix = <selector> <axes>          (selector may be "point x y")
  // prescribe = <selector> <axis> <value>
  BcEntry e;
  size_t i = 0;
  if (toks.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty bc entry");
  e.selector = toks[i++];
  if (e.selector == "point") {
    if (toks.size() < i + 2)
      throw ConfigError("line " + std::to_string(line_no) + ": point selector needs x y");
    e.point = Vec2(parse_num(toks[i], line_no), parse_num(toks[i + 1], line_no));
    i += 2;
  } else if (e.selector != "bottom" && e.selector != "top" && e.selector != "left" &&
             e.selector != "right") {
    throw ConfigError("line " + std::to_string(line_no) + ": unknown selector '" + e.selector +
                      "'");
  }
  if (toks.size() < i + 1)
    throw ConfigError("line " + std::to_string(line_no) + ": missing axes in bc entry");
  const std::string axes = toks[i++];
  if (axes == "x") e.axis_x = true;
  else if (axes == "y") e.axis_y = true;
  else if (axes == "xy") e.axis_x = e.axis_y = true;
  else
    throw ConfigError("line " + std::to_string(line_no) + ": axes must be x, y or xy");
  if (prescribed) {
    if (toks.size() != i + 1)
      throw ConfigError("line " + std::to_string(line_no) + ": prescribe needs a value");
    e.value = parse_num(toks[i], line_no);
  } else if (toks.size() != i) {
    throw ConfigError("line " + std::to_string(line_no) + ": trailing tokens in fix entry");
  }
  return e;
}

}  // namespace

CaseConfig parse_config(const std::string& text) {
  CaseConfig cfg;
  bool saw_version = false;
  std::string section;
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;

  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "lattice" && section != "mesh" && section != "sampling" &&
          section != "bc" && section != "loading" && section != "solver" && section != "case") {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section +
                          "]");
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto toks = split_ws(value);

    if (section.empty()) {
      if (key == "version") {
        cfg.version = parse_int(value, line_no);
        if (cfg.version != 1)
          throw ConfigError("line " + std::to_string(line_no) + ": unsupported config version");
        saw_version = true;
        continue;
      }
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' outside any section");
    }

    if (section == "lattice") {
      if (key == "type") {
        if (value == "square") cfg.lattice_type = LatticeKind::square;
        else if (value == "triangular") cfg.lattice_type = LatticeKind::triangular;
        else
          throw ConfigError("line " + std::to_string(line_no) + ": unknown lattice type");
      } else if (key == "nx") cfg.nx = parse_int(value, line_no);
      else if (key == "ny") cfg.ny = parse_int(value, line_no);
      else if (key == "l0") cfg.l0 = parse_num(value, line_no);
      else if (key == "bracing") {
        if (value == "none") cfg.bracing = Bracing::none;
        else if (value == "x_braced") cfg.bracing = Bracing::x_braced;
        else
          throw ConfigError("line " + std::to_string(line_no) + ": unknown bracing");
      } else if (key == "young_modulus") cfg.material.young_modulus = parse_num(value, line_no);
      else if (key == "yield_stress") cfg.material.yield_stress = parse_num(value, line_no);
      else if (key == "cross_section") cfg.material.cross_section = parse_num(value, line_no);
      else if (key == "notch") cfg.notch = parse_rect(toks, line_no);
      else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [lattice]");
    } else if (section == "mesh") {
      if (key == "element_size") cfg.element_size_l0 = parse_num(value, line_no);
      else if (key == "fr_rect") cfg.fr_rects.push_back(parse_rect(toks, line_no));
      else if (key == "x_bounds") {
        cfg.x_bounds_mm.clear();
        for (const auto& t : toks) cfg.x_bounds_mm.push_back(parse_num(t, line_no));
      } else if (key == "y_rows") {
        cfg.y_rows.clear();
        for (const auto& t : toks) cfg.y_rows.push_back(parse_int(t, line_no));
      } else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [mesh]");
    } else if (section == "sampling") {
      if (key == "scheme") cfg.scheme = scheme_from_string(value);
      else if (key == "psn_selection") {
        if (value == "spread") cfg.psn_selection = PsnSelection::spread;
        else if (value == "perturbed") cfg.psn_selection = PsnSelection::perturbed;
        else
          throw ConfigError("line " + std::to_string(line_no) + ": unknown psn_selection");
      } else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [sampling]");
    } else if (section == "bc") {
      if (key == "fix") cfg.fixes.push_back(parse_bc(toks, false, line_no));
      else if (key == "prescribe") cfg.prescribes.push_back(parse_bc(toks, true, line_no));
      else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [bc]");
    } else if (section == "loading") {
      if (key == "mode") {
        if (value == "static") cfg.fracture = false;
        else if (value == "fracture") cfg.fracture = true;
        else
          throw ConfigError("line " + std::to_string(line_no) + ": unknown loading mode");
      } else if (key == "steps") cfg.steps = parse_int(value, line_no);
      else if (key == "batch_removal") cfg.batch_removal = parse_bool(value, line_no);
      else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [loading]");
    } else if (section == "solver") {
      if (key == "tolerance") cfg.tolerance = parse_num(value, line_no);
      else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [solver]");
    } else if (section == "case") {
      if (key == "name") cfg.name = value;
      else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in [case]");
    }
  }

  if (!saw_version) throw ConfigError("config is missing the version key");
  if (cfg.nx < 1 || cfg.ny < 1) throw ConfigError("lattice dimensions must be at least 1");
  if (!(cfg.l0 > 0.0)) throw ConfigError("l0 must be positive");
  if (cfg.steps < 1) throw ConfigError("loading steps must be at least 1");
  cfg.material.strut_length = cfg.l0;
  cfg.material.validate();
  return cfg;
}

CaseConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace gnqc
