#include "wfpca/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wfpca/errors.hpp"

namespace wfpca::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError("bad value '" + text + "' for key " + key);
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("bad boolean '" + text + "' for key " + key);
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("empty list for key " + key);
  return out;
}

}  // namespace

std::string model_name(Model m) { return m == Model::Fourier ? "fourier" : "aliasing"; }

Model parse_model(const std::string& s) {
  if (s == "fourier") return Model::Fourier;
  if (s == "aliasing") return Model::Aliasing;
  throw ConfigError("unknown model '" + s + "' (expected fourier or aliasing)");
}

void ExperimentConfig::validate() const {
  if (alphas.empty() || ps.empty()) throw ConfigError("alpha and p lists must be nonempty");
  if (!population_only && ns.empty()) throw ConfigError("n list must be nonempty");
  for (double a : alphas) {
    if (!(a > 0.0)) throw ConfigError("alpha values must be positive");
  }
  for (long long p : ps) {
    if (!is_dyadic(p)) throw ConfigError("p = " + std::to_string(p) + " is not a power of two");
    if (model == Model::Aliasing && p < 4) throw ConfigError("aliasing model needs p >= 4");
    if (p > fine_grid / 4) throw ConfigError("p = " + std::to_string(p) + " is too coarse for the fine grid");
  }
  for (long long n : ns) {
    if (n < 1) throw ConfigError("n values must be positive");
  }
  if (!(sigma2 >= 0.0)) throw ConfigError("sigma2 must be nonnegative");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (ell < 1) throw ConfigError("ell must be at least 1");
  if (model == Model::Aliasing && ell > 2) throw ConfigError("the aliasing model has two modes");
  if (coiflet_order < 1 || coiflet_order > 5) throw ConfigError("coiflet order must lie in 1..5");
  if (cascade_depth < 4 || cascade_depth > 16) throw ConfigError("cascade depth must lie in 4..16");
  if (threads < 0) throw ConfigError("threads must be nonnegative");
  if (fine_grid < 16) throw ConfigError("fine grid too small");
}

void ExperimentConfig::apply_paper_scale() {
  ps = {8, 16, 32, 64, 128, 256, 512, 1024};
  ns = {512, 1024, 2048, 4096, 8192, 16384};
  alphas = {1.0, 1.5};
  replicates = 40;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "model") {
      cfg.model = parse_model(value);
    } else if (key == "alpha") {
      cfg.alphas = parse_list<double>(key, value);
    } else if (key == "p") {
      cfg.ps = parse_list<long long>(key, value);
    } else if (key == "n") {
      cfg.ns = parse_list<long long>(key, value);
    } else if (key == "sigma2") {
      cfg.sigma2 = parse_number<double>(key, value);
    } else if (key == "replicates") {
      cfg.replicates = parse_number<int>(key, value);
    } else if (key == "ell") {
      cfg.ell = parse_number<int>(key, value);
    } else if (key == "coiflet_order") {
      cfg.coiflet_order = parse_number<int>(key, value);
    } else if (key == "cascade_depth") {
      cfg.cascade_depth = parse_number<int>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "debias") {
      cfg.debias = parse_bool(key, value);
    } else if (key == "population_only") {
      cfg.population_only = parse_bool(key, value);
    } else if (key == "threads") {
      cfg.threads = parse_number<int>(key, value);
    } else if (key == "fine_grid") {
      cfg.fine_grid = parse_number<int>(key, value);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config");
  return parse_config(in);
}

}  // namespace wfpca::harness
