#include "hillzone/potential_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hillzone/errors.hpp"

namespace hillzone {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

template <typename T>
T scalar_as(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError("expected a scalar", key, line_of(node));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("cannot convert '" + node.Scalar() + "'", key, line_of(node));
  }
}

std::vector<double> number_list(const YAML::Node& node, const std::string& key) {
  if (!node) return {};
  if (!node.IsSequence()) throw ConfigError("expected a list of numbers", key, line_of(node));
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(scalar_as<double>(node[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

FourierSeries parse_fourier(const YAML::Node& node) {
  if (!node || !node.IsSequence())
    throw ConfigError("expected a list of [n, re, im]", "fourier", node ? line_of(node) : 0);
  FourierSeries fs;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string key = "fourier[" + std::to_string(i) + "]";
    const auto entry = node[i];
    if (!entry.IsSequence() || entry.size() != 3)
      throw ConfigError("expected [n, re, im]", key, line_of(entry));
    const int n = scalar_as<int>(entry[0], key);
    const cplx c{scalar_as<double>(entry[1], key), scalar_as<double>(entry[2], key)};
    if (fs.coeffs.count(n)) throw ConfigError("duplicate index " + std::to_string(n), key, line_of(entry));
    fs.coeffs[n] = c;
  }
  return fs;
}

PiecewisePolynomial parse_pieces(const YAML::Node& node) {
  if (!node || !node.IsSequence())
    throw ConfigError("expected a list of pieces", "pieces", node ? line_of(node) : 0);
  PiecewisePolynomial pw;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string key = "pieces[" + std::to_string(i) + "]";
    const auto entry = node[i];
    if (!entry.IsMap()) throw ConfigError("expected a map", key, line_of(entry));
    const auto interval = number_list(entry["interval"], key + ".interval");
    if (interval.size() != 2) throw ConfigError("interval must be [a, b]", key + ".interval", line_of(entry));
    PolynomialPiece p;
    p.left = interval[0];
    p.right = interval[1];
    p.poly_re = number_list(entry["poly_re"], key + ".poly_re");
    p.poly_im = number_list(entry["poly_im"], key + ".poly_im");
    pw.pieces.push_back(std::move(p));
  }
  return pw;
}

Sampled parse_samples(const YAML::Node& node, const std::filesystem::path& base_dir) {
  const std::string rel = scalar_as<std::string>(node, "samples");
  std::filesystem::path path(rel);
  if (path.is_relative()) path = base_dir / path;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sample file " + path.string(), "samples", line_of(node));
  Sampled s;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double x = 0.0, re = 0.0, im = 0.0;
    if (!(fields >> x >> re >> im)) {
      if (row == 1) continue;  // header
      throw ConfigError("malformed CSV row " + std::to_string(row) + " in " + path.string(), "samples",
                        line_of(node));
    }
    s.values.emplace_back(re, im);
  }
  return s;
}

std::vector<JumpDeclaration> parse_jumps(const YAML::Node& node) {
  std::vector<JumpDeclaration> jumps;
  if (!node) return jumps;
  if (!node.IsSequence()) throw ConfigError("expected a list of jumps", "jumps", line_of(node));
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string key = "jumps[" + std::to_string(i) + "]";
    const auto entry = node[i];
    if (!entry.IsMap()) throw ConfigError("expected a map", key, line_of(entry));
    JumpDeclaration j;
    if (!entry["location"] || !entry["component"] || !entry["size"])
      throw ConfigError("jump needs location, component and size", key, line_of(entry));
    j.location = scalar_as<double>(entry["location"], key + ".location");
    const auto comp = scalar_as<std::string>(entry["component"], key + ".component");
    if (comp == "re") {
      j.component = Component::Re;
    } else if (comp == "im") {
      j.component = Component::Im;
    } else {
      throw ConfigError("component must be 're' or 'im'", key + ".component", line_of(entry["component"]));
    }
    j.order = entry["order"] ? scalar_as<int>(entry["order"], key + ".order") : 0;
    j.size = scalar_as<double>(entry["size"], key + ".size");
    if (j.location < 0.0 || j.location >= 1.0)
      throw ConfigError("location must lie in [0, 1)", key + ".location", line_of(entry["location"]));
    jumps.push_back(j);
  }
  return jumps;
}

}  // namespace

PotentialFile parse_potential(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, "", e.mark.line + 1);
  }
  if (!root.IsMap()) throw ConfigError("top level must be a map", "", 1);

  static const std::vector<std::string> known = {"name",     "representation", "fourier",
                                                 "pieces",   "samples",        "smoothness_s",
                                                 "jumps",    "assert_pt"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key", key, line_of(kv.first));
  }

  if (!root["representation"]) throw ConfigError("missing", "representation", 0);
  const auto rep = scalar_as<std::string>(root["representation"], "representation");
  const int s = root["smoothness_s"] ? scalar_as<int>(root["smoothness_s"], "smoothness_s") : 0;
  if (s < 0) throw ConfigError("must be non-negative", "smoothness_s", line_of(root["smoothness_s"]));
  auto jumps = parse_jumps(root["jumps"]);

  PeriodicPotential::Representation representation;
  if (rep == "fourier") {
    representation = parse_fourier(root["fourier"]);
  } else if (rep == "piecewise") {
    representation = parse_pieces(root["pieces"]);
  } else if (rep == "sampled") {
    if (!root["samples"]) throw ConfigError("missing for sampled representation", "samples", 0);
    representation = parse_samples(root["samples"], base_dir);
  } else {
    throw ConfigError("must be fourier, piecewise or sampled", "representation",
                      line_of(root["representation"]));
  }

  try {
    PotentialFile out{PeriodicPotential(std::move(representation), s, std::move(jumps)), true, ""};
    if (root["assert_pt"]) out.assert_pt = scalar_as<bool>(root["assert_pt"], "assert_pt");
    if (root["name"]) out.name = scalar_as<std::string>(root["name"], "name");
    return out;
  } catch (const InvalidPotential& e) {
    const char* key = rep == "fourier" ? "fourier" : rep == "piecewise" ? "pieces" : "samples";
    throw ConfigError(e.what(), key, line_of(root[key]));
  }
}

PotentialFile load_potential_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential file " + path.string(), "", 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto file = parse_potential(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
  if (file.name.empty()) file.name = path.stem().string();
  return file;
}

}  // namespace hillzone
