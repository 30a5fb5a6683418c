#include "siou/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "siou/error.hpp"

namespace siou {

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("could not format a double");
  return std::string(buf, end);
}

void write_csv(std::ostream& out, std::span<const std::string> header, const Eigen::MatrixXd& values) {
  if (static_cast<Eigen::Index>(header.size()) != values.cols()) {
    throw ConfigError("CSV header and column count differ");
  }
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j > 0) out << ',';
    out << header[j];
  }
  out << '\n';
  std::string line;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) line += ',';
      line += format_double(values(i, j));
    }
    line += '\n';
    out << line;
  }
}

std::string corner_label(const Corner& c) {
  std::string out = "\"(";
  for (Eigen::Index i = 0; i < c.dim(); ++i) {
    if (i > 0) out += ',';
    out += format_double(c[i]);
  }
  return out + ")\"";
}

Json to_json(const Corner& c) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < c.dim(); ++i) j.push_back(c[i]);
  return j;
}

Json to_json(const UnionSet& u) {
  Json j = Json::array();
  for (const auto& c : u.corners()) j.push_back(to_json(c));
  return j;
}

Json to_json(const Frontier& f) {
  Json j = Json::array();
  for (const auto& e : f.entries) {
    j.push_back({{"corner", to_json(e.corner)}, {"sign", e.sign()}, {"coefficient", e.coefficient}});
  }
  return j;
}

Json to_json(const TransitionParams& tp) {
  Json weights = Json::array();
  for (const auto& w : tp.weights) weights.push_back({{"corner", to_json(w.corner)}, {"weight", w.weight}});
  return {{"weights", std::move(weights)}, {"variance", tp.variance}};
}

Json to_json(const CheckReport& r) {
  // JSON has no infinity or NaN; those statistics are written as strings.
  Json statistic = r.statistic;
  if (!std::isfinite(r.statistic)) statistic = format_double(r.statistic);
  return {{"name", r.name},
          {"passed", r.passed},
          {"statistic", std::move(statistic)},
          {"tolerance", r.tolerance},
          {"details", r.details}};
}

Json to_json(const MeasureSpec& m) {
  if (m.kind() == MeasureSpec::Kind::lebesgue) return {{"kind", "lebesgue"}};
  Json alpha = Json::array();
  for (Eigen::Index i = 0; i < m.alpha().size(); ++i) alpha.push_back(m.alpha()[i]);
  return {{"kind", "axis"}, {"alpha", std::move(alpha)}};
}

Json to_json(const InitialLaw& law) {
  if (const auto* d = std::get_if<DiracLaw>(&law.law())) return {{"kind", "dirac"}, {"x0", d->x0}};
  if (const auto* n = std::get_if<NormalLaw>(&law.law())) {
    return {{"kind", "normal"}, {"mu", n->mu}, {"var", n->var}};
  }
  return {{"kind", "empirical"}, {"values", std::get<EmpiricalLaw>(law.law()).values}};
}

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return j.get<double>();
}

Eigen::VectorXd vector_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a nonempty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], what);
  return v;
}

std::uint64_t unsigned_integer(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ConfigError(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

template <typename Fn>
auto as_config_error(Fn&& fn) {
  try {
    return fn();
  } catch (const GeometryError& e) {
    throw ConfigError(e.what());
  } catch (const KernelError& e) {
    throw ConfigError(e.what());
  }
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

Corner corner_from_json(const Json& j) {
  return as_config_error([&] { return Corner(vector_from_json(j, "corner")); });
}

std::vector<Corner> corners_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("corners must be an array of arrays");
  std::vector<Corner> out;
  for (const auto& c : j) out.push_back(corner_from_json(c));
  return out;
}

MeasureSpec measure_from_json(const Json& j) {
  require_keys(j, {"kind", "alpha"}, "measure");
  const std::string kind = j.value("kind", "");
  if (kind == "lebesgue") return MeasureSpec::lebesgue();
  if (kind == "axis") {
    if (!j.contains("alpha")) throw ConfigError("axis measure needs alpha");
    return MeasureSpec::axis(vector_from_json(j["alpha"], "alpha"));
  }
  throw ConfigError("measure kind must be 'lebesgue' or 'axis'");
}

InitialLaw initial_law_from_json(const Json& j) {
  require_keys(j, {"kind", "x0", "mu", "var", "values"}, "initial");
  const std::string kind = j.value("kind", "");
  if (kind == "dirac") return DiracLaw{j.contains("x0") ? number(j["x0"], "x0") : 0.0};
  if (kind == "normal") {
    return NormalLaw{j.contains("mu") ? number(j["mu"], "mu") : 0.0, number(j.value("var", Json()), "var")};
  }
  if (kind == "empirical") {
    const Eigen::VectorXd v = vector_from_json(j.value("values", Json()), "values");
    return EmpiricalLaw{{v.data(), v.data() + v.size()}};
  }
  throw ConfigError("initial law kind must be 'dirac', 'normal' or 'empirical'");
}

Corner parse_corner(const std::string& text) {
  std::vector<double> coords;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string field = text.substr(pos, comma - pos);
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    field = first == std::string::npos ? std::string() : field.substr(first, last - first + 1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
      throw ConfigError("cannot parse corner '" + text + "'");
    }
    coords.push_back(value);
    pos = comma + 1;
  }
  return as_config_error([&] { return Corner(Eigen::Map<const Eigen::VectorXd>(coords.data(), coords.size())); });
}

std::vector<Corner> parse_corner_list(const std::string& text) {
  std::vector<Corner> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t semi = std::min(text.find(';', pos), text.size());
    out.push_back(parse_corner(text.substr(pos, semi - pos)));
    pos = semi + 1;
  }
  return out;
}

GridSpec SheetConfig::grid() const {
  const double L = truncation ? *truncation : truncation_for(alpha, truncation_target, width);
  return GridSpec::uniform(alpha.size(), L, upper, width);
}

RngSeed RunConfig::rng_seed() const {
  if (!seed) throw ConfigError("a seed is required");
  return RngSeed{*seed, stream};
}

RunConfig parse_run_config(const Json& j) {
  require_keys(j,
               {"dimension", "measure", "kernel", "corners", "initial", "replicates", "seed", "stream", "method",
                "extension", "output", "sheet"},
               "config");
  RunConfig c;
  if (j.contains("measure")) c.measure = measure_from_json(j["measure"]);
  if (j.contains("kernel")) {
    const Json& k = j["kernel"];
    require_keys(k, {"lambda", "sigma"}, "kernel");
    if (k.contains("lambda")) c.lambda = number(k["lambda"], "lambda");
    if (k.contains("sigma")) c.sigma = number(k["sigma"], "sigma");
  }
  if (j.contains("corners")) c.corners = corners_from_json(j["corners"]);
  if (j.contains("initial")) c.initial = initial_law_from_json(j["initial"]);
  if (j.contains("replicates")) c.replicates = unsigned_integer(j["replicates"], "replicates");
  if (j.contains("seed")) c.seed = unsigned_integer(j["seed"], "seed");
  if (j.contains("stream")) c.stream = unsigned_integer(j["stream"], "stream");
  if (j.contains("method")) {
    c.method = j["method"].is_string() ? j["method"].get<std::string>() : "";
  }
  if (j.contains("extension")) {
    const std::string e = j["extension"].is_string() ? j["extension"].get<std::string>() : "";
    if (e == "by_sum") {
      c.extension = LinearExtension::by_sum;
    } else if (e == "lexicographic") {
      c.extension = LinearExtension::lexicographic;
    } else {
      throw ConfigError("extension must be 'by_sum' or 'lexicographic'");
    }
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    require_keys(o, {"csv", "json"}, "output");
    c.csv_path = o.value("csv", "");
    c.json_path = o.value("json", "");
  }
  if (j.contains("sheet")) {
    const Json& s = j["sheet"];
    require_keys(s, {"alpha", "sigma", "y0", "mode", "grid", "points"}, "sheet");
    SheetConfig sheet;
    sheet.alpha = vector_from_json(s.value("alpha", Json()), "sheet alpha");
    if (s.contains("sigma")) sheet.sigma = number(s["sigma"], "sheet sigma");
    if (s.contains("y0")) sheet.y0 = number(s["y0"], "y0");
    const std::string mode = s.value("mode", "started");
    if (mode == "started") {
      sheet.model = SheetModel::started;
    } else if (mode == "stationary") {
      sheet.model = SheetModel::stationary;
    } else {
      throw ConfigError("sheet mode must be 'started' or 'stationary'");
    }
    if (s.contains("grid")) {
      const Json& g = s["grid"];
      require_keys(g, {"width", "upper", "truncation", "truncation_target"}, "sheet grid");
      if (g.contains("width")) sheet.width = number(g["width"], "grid width");
      if (g.contains("upper")) sheet.upper = number(g["upper"], "grid upper");
      if (g.contains("truncation")) sheet.truncation = number(g["truncation"], "grid truncation");
      if (g.contains("truncation_target")) {
        sheet.truncation_target = number(g["truncation_target"], "truncation target");
      }
    }
    if (s.contains("points")) sheet.points = corners_from_json(s["points"]);
    c.sheet = std::move(sheet);
  }

  if (j.contains("dimension")) {
    c.dimension = static_cast<Eigen::Index>(unsigned_integer(j["dimension"], "dimension"));
  } else if (!c.corners.empty()) {
    c.dimension = c.corners.front().dim();
  } else if (c.sheet) {
    c.dimension = c.sheet->alpha.size();
  }
  validate(c);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

void validate(const RunConfig& c) {
  if (c.dimension < 1) throw ConfigError("dimension must be >= 1");
  if (c.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (c.method != "markov" && c.method != "exact") throw ConfigError("method must be 'markov' or 'exact'");
  as_config_error([&] {
    (void)c.kernel();
    return 0;
  });
  if (c.measure.kind() == MeasureSpec::Kind::axis && c.measure.alpha().size() != c.dimension) {
    throw ConfigError("measure alpha length differs from the dimension");
  }
  for (const auto& corner : c.corners) {
    if (corner.dim() != c.dimension) throw ConfigError("corner length differs from the dimension");
  }
  if (c.sheet) {
    const auto& s = *c.sheet;
    if (s.alpha.size() != c.dimension) throw ConfigError("sheet alpha length differs from the dimension");
    if (!(s.alpha.array() > 0.0).all()) throw ConfigError("sheet alpha must be positive");
    if (!(s.sigma > 0.0)) throw ConfigError("sheet sigma must be positive");
    if (!(s.width > 0.0)) throw ConfigError("grid width must be positive");
    for (const auto& p : s.points) {
      if (p.dim() != c.dimension) throw ConfigError("sheet point length differs from the dimension");
    }
  }
}

Json to_json(const RunConfig& c) {
  Json corners = Json::array();
  for (const auto& corner : c.corners) corners.push_back(to_json(corner));
  Json j = {{"dimension", c.dimension},
            {"measure", to_json(c.measure)},
            {"kernel", {{"lambda", c.lambda}, {"sigma", c.sigma}}},
            {"corners", std::move(corners)},
            {"initial", to_json(c.initial)},
            {"replicates", c.replicates},
            {"seed", c.seed ? Json(*c.seed) : Json()},
            {"stream", c.stream},
            {"method", c.method},
            {"extension", c.extension == LinearExtension::by_sum ? "by_sum" : "lexicographic"},
            {"output", {{"csv", c.csv_path}, {"json", c.json_path}}}};
  if (c.sheet) {
    const auto& s = *c.sheet;
    Json alpha = Json::array();
    for (Eigen::Index i = 0; i < s.alpha.size(); ++i) alpha.push_back(s.alpha[i]);
    Json points = Json::array();
    for (const auto& p : s.points) points.push_back(to_json(p));
    Json grid = {{"width", s.width}, {"upper", s.upper}, {"truncation_target", s.truncation_target}};
    if (s.truncation) grid["truncation"] = *s.truncation;
    j["sheet"] = {{"alpha", std::move(alpha)},
                  {"sigma", s.sigma},
                  {"y0", s.y0},
                  {"mode", s.model == SheetModel::started ? "started" : "stationary"},
                  {"grid", std::move(grid)},
                  {"points", std::move(points)}};
  }
  return j;
}

}  // namespace siou
