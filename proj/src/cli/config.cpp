#include <algorithm>
#include <cctype>
#include <charconv>
#include <iomanip>
#include <sstream>

#include "dynamo/cli.hpp"

namespace dynamo::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ConfigError("unterminated list: " + v);
    v = v.substr(1, v.size() - 2);
  }
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream is(v);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& tok) {
  T v{};
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      v = static_cast<T>(std::stod(tok, &used));
      if (used != tok.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("bad number for '" + key + "': " + tok);
    }
  } else {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) throw ConfigError("bad integer for '" + key + "': " + tok);
  }
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (const auto& tok : split_list(value)) out.push_back(parse_number<T>(key, tok));
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

template <class T>
T parse_scalar(const std::string& key, const std::string& value) {
  const auto v = parse_list<T>(key, value);
  if (v.size() != 1) throw ConfigError("'" + key + "' takes a single value");
  return v.front();
}

bool parse_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': " + v);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += format_double(v[k]);
    } else {
      s += std::to_string(v[k]);
    }
  }
  return s;
}

}  // namespace

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply(ExperimentConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "alpha") cfg.alpha = parse_list<int>(key, value);
    else if (key == "eps") cfg.eps = parse_list<double>(key, value);
    else if (key == "grid_n") cfg.grid_n = parse_scalar<int>(key, value);
    else if (key == "moll_scale") cfg.moll_scale = parse_list<double>(key, value);
    else if (key == "band") cfg.band = parse_scalar<int>(key, value);
    else if (key == "shear") cfg.shear = trim(value);
    else if (key == "sigma") cfg.norms.sigma = parse_scalar<double>(key, value);
    else if (key == "beta") cfg.norms.beta = parse_scalar<double>(key, value);
    else if (key == "q") cfg.norms.q = parse_scalar<double>(key, value);
    else if (key == "n_leaves") cfg.norms.n_leaves = parse_scalar<int>(key, value);
    else if (key == "n_testfns") cfg.norms.n_testfns = parse_scalar<int>(key, value);
    // empty delta_grid means the alpha-scaled default
    else if (key == "delta_grid") cfg.norms.delta_grid = split_list(value).empty() ? std::vector<double>{} : parse_list<double>(key, value);
    else if (key == "seeds") cfg.seeds = parse_list<std::uint64_t>(key, value);
    else if (key == "periods") cfg.periods = parse_scalar<int>(key, value);
    else if (key == "flux_steps") cfg.flux_steps = parse_scalar<int>(key, value);
    else if (key == "tol") cfg.tol = parse_scalar<double>(key, value);
    else if (key == "max_iter") cfg.max_iter = parse_scalar<int>(key, value);
    else if (key == "c_cal") cfg.c_cal = parse_scalar<double>(key, value);
    else if (key == "out_dir") cfg.out_dir = trim(value);
    else if (key == "plots") cfg.plots = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (alpha.empty()) throw ConfigError("alpha list is empty");
  for (int a : alpha) {
    if (a < 2 || a % 2 != 0) throw ConfigError("alpha must be a positive even integer, got " + std::to_string(a));
  }
  if (eps.empty()) throw ConfigError("eps list is empty");
  for (double e : eps) {
    if (!(e >= 0.0)) throw ConfigError("eps must be >= 0");
  }
  if (grid_n < 4 || grid_n % 2 != 0) throw ConfigError("grid_n must be an even integer >= 4, got " + std::to_string(grid_n));
  if (grid_n > 8192) throw ConfigError("grid_n above 8192 is not supported");
  for (double l : moll_scale) {
    if (!(l >= 0.0)) throw ConfigError("moll_scale must be >= 0");
  }
  if (band < 1) throw ConfigError("band must be >= 1");
  if (shear != "quadrant" && shear != "zero") throw ConfigError("shear must be 'quadrant' or 'zero'");
  try {
    for (int a : alpha) norms.validate(Alpha(a));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (seeds.empty()) throw ConfigError("seeds list is empty");
  if (periods < 2) throw ConfigError("periods must be >= 2");
  if (flux_steps < 2) throw ConfigError("flux_steps must be >= 2");
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(c_cal > 0.0)) throw ConfigError("c_cal must be > 0");
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv{
      {"alpha", join(alpha)},
      {"band", std::to_string(band)},
      {"beta", format_double(norms.beta)},
      {"c_cal", format_double(c_cal)},
      {"delta_grid", join(norms.delta_grid)},
      {"eps", join(eps)},
      {"flux_steps", std::to_string(flux_steps)},
      {"grid_n", std::to_string(grid_n)},
      {"max_iter", std::to_string(max_iter)},
      {"moll_scale", join(moll_scale)},
      {"n_leaves", std::to_string(norms.n_leaves)},
      {"n_testfns", std::to_string(norms.n_testfns)},
      {"periods", std::to_string(periods)},
      {"q", format_double(norms.q)},
      {"seeds", join(seeds)},
      {"shear", shear},
      {"sigma", format_double(norms.sigma)},
      {"tol", format_double(tol)},
  };
  std::string s;
  for (const auto& [k, v] : kv) s += k + " = " + v + "\n";
  return s;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

std::uint64_t fnv1a64(const std::string& s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace dynamo::cli
