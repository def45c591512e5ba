#include "hyplayer/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hyplayer {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
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

struct Location {
    std::string origin;
    int line;
};

[[noreturn]] void parse_fail(const Location& at, const std::string& msg) {
    throw ConfigError(ConfigErrorKind::kParse,
                      at.origin + ":" + std::to_string(at.line) + ": " + msg);
}

double to_double(const std::string& v, const Location& at) {
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) parse_fail(at, "not a number: '" + v + "'");
    return x;
}

int to_int(const std::string& v, const Location& at) {
    int x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) parse_fail(at, "not an integer: '" + v + "'");
    return x;
}

bool to_bool(const std::string& v, const Location& at) {
    std::string l = v;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    if (l == "true" || l == "yes" || l == "1" || l == "on") return true;
    if (l == "false" || l == "no" || l == "0" || l == "off") return false;
    parse_fail(at, "not a boolean: '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const Location&)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"model",
         {
             {"n", [](RunConfig& c, const std::string& v, const Location& at) { c.model.n = to_int(v, at); }},
             {"gamma", [](RunConfig& c, const std::string& v, const Location& at) { c.model.gamma = to_double(v, at); }},
             {"mu", [](RunConfig& c, const std::string& v, const Location& at) { c.model.mu = to_double(v, at); }},
             {"potential", [](RunConfig& c, const std::string& v, const Location&) { c.model.potential = v; }},
         }},
        {"grid",
         {
             {"T", [](RunConfig& c, const std::string& v, const Location& at) { c.grid.T = to_double(v, at); }},
             {"R", [](RunConfig& c, const std::string& v, const Location& at) { c.grid.R = to_double(v, at); }},
             {"Nt", [](RunConfig& c, const std::string& v, const Location& at) { c.grid.Nt = to_int(v, at); }},
             {"Ny", [](RunConfig& c, const std::string& v, const Location& at) { c.grid.Ny = to_int(v, at); }},
             {"q", [](RunConfig& c, const std::string& v, const Location& at) { c.grid.q = to_double(v, at); }},
             {"top", [](RunConfig& c, const std::string& v, const Location&) { c.grid.top = v; }},
         }},
        {"solver",
         {
             {"tol", [](RunConfig& c, const std::string& v, const Location& at) { c.solver.tol = to_double(v, at); }},
             {"max_iters", [](RunConfig& c, const std::string& v, const Location& at) { c.solver.max_iters = to_int(v, at); }},
             {"damping", [](RunConfig& c, const std::string& v, const Location& at) { c.solver.damping = to_bool(v, at); }},
         }},
        {"output",
         {
             {"directory", [](RunConfig& c, const std::string& v, const Location&) { c.output.directory = v; }},
             {"formats", [](RunConfig& c, const std::string& v, const Location&) { c.output.formats = split_list(v); }},
         }},
        {"sweep",
         {
             {"gammas", [](RunConfig& c, const std::string& v, const Location& at) {
                  c.sweep.gammas.clear();
                  for (auto& s : split_list(v)) c.sweep.gammas.push_back(to_double(s, at));
              }},
             {"ns", [](RunConfig& c, const std::string& v, const Location& at) {
                  c.sweep.ns.clear();
                  for (auto& s : split_list(v)) c.sweep.ns.push_back(to_int(s, at));
              }},
             {"Ts", [](RunConfig& c, const std::string& v, const Location& at) {
                  c.sweep.Ts.clear();
                  for (auto& s : split_list(v)) c.sweep.Ts.push_back(to_double(s, at));
              }},
         }},
    };
    return table;
}

[[noreturn]] void invalid(const std::string& msg) {
    throw ConfigError(ConfigErrorKind::kValidation, msg);
}

}  // namespace

bool OutputSection::wants(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

ModelParams RunConfig::model_params() const {
    double mu = model.mu > 0.0 ? model.mu : static_cast<double>(model.n);
    return ModelParams(model.n, model.gamma, mu, potential_by_name(model.potential));
}

LayerGridConfig RunConfig::layer_grid_config() const {
    LayerGridConfig g;
    g.T = grid.T;
    g.R = grid.R;
    g.Nt = grid.Nt;
    g.Ny = grid.Ny;
    g.q = grid.q;
    g.top = grid.top == "comparison" ? TopCondition::kComparison : TopCondition::kNatural;
    return g;
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig s;
    s.tol = solver.tol;
    s.max_iters = solver.max_iters;
    s.damping = solver.damping;
    return s;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    bool saw_model = false;
    Location at{origin, 0};
    while (std::getline(in, raw)) {
        ++at.line;
        std::string line = raw;
        auto c = line.find_first_of("#;");
        if (c != std::string::npos) line.erase(c);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(at, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!setters().count(section)) parse_fail(at, "unknown section [" + section + "]");
            if (section == "model") saw_model = true;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(at, "expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (section.empty()) parse_fail(at, "key '" + key + "' outside any section");
        const auto& keys = setters().at(section);
        auto it = keys.find(key);
        if (it == keys.end()) parse_fail(at, "unknown key '" + key + "' in [" + section + "]");
        if (value.empty()) parse_fail(at, "empty value for '" + key + "'");
        it->second(cfg, value, at);
    }
    if (!saw_model) invalid(origin + ": missing required section [model]");
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigErrorKind::kMissingFile, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void validate_config(const RunConfig& cfg) {
    try {
        (void)cfg.model_params();
    } catch (const std::exception& e) {
        invalid(std::string("[model] ") + e.what());
    }
    const GridSection& g = cfg.grid;
    if (!(g.T > 0.0) || !(g.R > 0.0)) invalid("[grid] T and R must be positive");
    if (g.Nt < 8 || g.Ny < 8) invalid("[grid] Nt and Ny must be at least 8");
    if (g.q > 0.0 && g.q < 1.0) invalid("[grid] q must be >= 1 (or 0 for the default grading)");
    if (g.top != "natural" && g.top != "comparison")
        invalid("[grid] top must be 'natural' or 'comparison'");
    if (!(cfg.solver.tol > 0.0)) invalid("[solver] tol must be positive");
    if (cfg.solver.max_iters < 1) invalid("[solver] max_iters must be >= 1");
    for (const auto& f : cfg.output.formats)
        if (f != "csv" && f != "json" && f != "field")
            invalid("[output] unknown format '" + f + "' (csv, json, field)");
    if (cfg.output.directory.empty()) invalid("[output] directory must not be empty");
    for (double gm : cfg.sweep.gammas)
        if (!(gm > 0.0 && gm < 1.0)) invalid("[sweep] gammas must lie in (0,1)");
    for (int n : cfg.sweep.ns)
        if (n < 2) invalid("[sweep] ns must be >= 2");
    for (double T : cfg.sweep.Ts)
        if (!(T > 0.0)) invalid("[sweep] Ts must be positive");
}

}  // namespace hyplayer
