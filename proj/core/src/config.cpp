#include "actuation/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "actuation/errors.hpp"
#include "actuation/text_format.hpp"

namespace actuation {

namespace {

// Parses `[a, b, ...]` into numbers. Nested lists are handled by the caller.
std::vector<double> parse_list(std::string_view text, const std::string& key) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError(key + ": expected a bracketed list");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                        : comma - pos);
    try {
      out.push_back(parse_double(item));
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

Matrix parse_matrix(std::string_view text, const std::string& key) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError(key + ": expected a bracketed list of rows");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('[', pos);
    if (open == std::string_view::npos) {
      if (!trim(text.substr(pos)).empty()) throw ConfigError(key + ": stray text after rows");
      break;
    }
    if (!trim(text.substr(pos, open - pos)).empty() && trim(text.substr(pos, open - pos)) != ",") {
      throw ConfigError(key + ": rows must be separated by commas");
    }
    const auto close = text.find(']', open);
    if (close == std::string_view::npos) throw ConfigError(key + ": unterminated row");
    rows.push_back(parse_list(text.substr(open, close - open + 1), key));
    pos = close + 1;
  }
  if (rows.empty()) throw ConfigError(key + ": matrix has no rows");
  const auto cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ConfigError(key + ": ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

int bracket_balance(std::string_view s) {
  int depth = 0;
  for (char ch : s) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
  }
  return depth;
}

std::map<std::string, std::string> split_entries(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::string pending_key;
  std::string pending_value;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (!pending_key.empty()) {
      pending_value += ' ';
      pending_value += body;
      if (bracket_balance(pending_value) == 0) {
        entries[pending_key] = pending_value;
        pending_key.clear();
      }
      continue;
    }
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (entries.count(key)) throw ConfigError("duplicate key '" + key + "'");
    if (bracket_balance(value) > 0) {
      pending_key = key;
      pending_value = value;
      continue;
    }
    entries[key] = value;
  }
  if (!pending_key.empty()) throw ConfigError(pending_key + ": unbalanced brackets");
  return entries;
}

std::string matrix_text(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i ? ",\n     [" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += format_double(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace

Model ScenarioConfig::model(double success_probability) const {
  return Model(SourceModel::validate(transitions), CostMatrix::validate(costs),
               ChannelModel::validate(success_probability), ResourceConfig::validate(c, c_max));
}

ScenarioConfig parse_config(std::string_view text) {
  auto entries = split_entries(text);
  static const std::set<std::string> required = {"schema_version", "P", "C", "p_s", "c", "c_max"};
  static const std::set<std::string> known = {
      "schema_version", "name",      "P",       "C",       "p_s",        "c",
      "c_max",          "W",         "gamma",   "eps_vi",  "eps_bisect", "lambda_hi",
      "eta_step",       "horizon",   "replications", "seed", "output",   "initial_state"};
  for (const auto& key : required) {
    if (!entries.count(key)) throw ConfigError("missing required key '" + key + "'");
  }
  for (const auto& [key, value] : entries) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "'");
  }

  ScenarioConfig cfg;
  cfg.schema_version = static_cast<int>(parse_integer(entries["schema_version"]));
  if (cfg.schema_version != kSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(cfg.schema_version));
  }
  if (entries.count("name")) cfg.name = entries["name"];
  cfg.transitions = parse_matrix(entries["P"], "P");
  cfg.costs = parse_matrix(entries["C"], "C");
  cfg.p_s = parse_list(entries["p_s"], "p_s");
  cfg.c = parse_double(entries["c"]);
  cfg.c_max = parse_double(entries["c_max"]);

  auto number = [&](const char* key, double& dst) {
    if (entries.count(key)) dst = parse_double(entries[key]);
  };
  number("W", cfg.w);
  number("gamma", cfg.solver.gamma);
  number("eps_vi", cfg.solver.eps_vi);
  number("eps_bisect", cfg.solver.eps_bisect);
  number("lambda_hi", cfg.solver.lambda_hi);
  number("eta_step", cfg.solver.eta_step);
  if (entries.count("horizon")) cfg.horizon = parse_integer(entries["horizon"]);
  if (entries.count("replications")) {
    cfg.replications = static_cast<int>(parse_integer(entries["replications"]));
  }
  if (entries.count("seed")) {
    const auto seed = parse_integer(entries["seed"]);
    if (seed < 0) throw ConfigError("seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (entries.count("output")) cfg.output = entries["output"];
  if (entries.count("initial_state") && entries["initial_state"] != "stationary") {
    cfg.initial_state = static_cast<int>(parse_integer(entries["initial_state"]));
  }

  // Model-level validation, reported with the offending key.
  try {
    const auto src = SourceModel::validate(cfg.transitions);
    const auto cost = CostMatrix::validate(cfg.costs);
    if (cost.size() != src.n_states()) throw ShapeError("P and C sizes differ");
    ResourceConfig::validate(cfg.c, cfg.c_max);
    cfg.solver.validate();
    if (cfg.initial_state && (*cfg.initial_state < 0 || *cfg.initial_state >= src.n_states())) {
      throw ModelError("initial_state out of range");
    }
  } catch (const ModelError& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  if (cfg.p_s.empty()) throw ConfigError("p_s list must be non-empty");
  for (double p : cfg.p_s) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p_s entries must lie in [0, 1]");
  }
  if (!(cfg.w > 0.0)) throw ConfigError("W must be > 0");
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (cfg.replications < 1 || cfg.replications > cfg.horizon) {
    throw ConfigError("replications must lie in [1, horizon]");
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_text(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "schema_version = " << cfg.schema_version << "\n";
  os << "name = " << cfg.name << "\n";
  os << "P = " << matrix_text(cfg.transitions) << "\n";
  os << "C = " << matrix_text(cfg.costs) << "\n";
  os << "p_s = [";
  for (std::size_t i = 0; i < cfg.p_s.size(); ++i) os << (i ? ", " : "") << format_double(cfg.p_s[i]);
  os << "]\n";
  os << "c = " << format_double(cfg.c) << "\n";
  os << "c_max = " << format_double(cfg.c_max) << "\n";
  os << "W = " << format_double(cfg.w) << "\n";
  os << "gamma = " << format_double(cfg.solver.gamma) << "\n";
  os << "eps_vi = " << format_double(cfg.solver.eps_vi) << "\n";
  os << "eps_bisect = " << format_double(cfg.solver.eps_bisect) << "\n";
  os << "lambda_hi = " << format_double(cfg.solver.lambda_hi) << "\n";
  os << "eta_step = " << format_double(cfg.solver.eta_step) << "\n";
  os << "horizon = " << cfg.horizon << "\n";
  os << "replications = " << cfg.replications << "\n";
  os << "seed = " << cfg.seed << "\n";
  if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
  os << "initial_state = "
     << (cfg.initial_state ? std::to_string(*cfg.initial_state) : std::string("stationary")) << "\n";
  return os.str();
}

}  // namespace actuation
