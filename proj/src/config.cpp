#include "incoh/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "incoh/registry.hpp"

namespace incoh {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Split {
    double value;
    std::string unit;
};

Split split_number(const std::string& key, const std::string& text, int line) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("empty value for '" + key + "'", line);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr == first) throw ConfigError("'" + key + "' is not a number: " + t, line);
    if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite", line);
    return {v, trim(std::string(res.ptr, last))};
}

using Raw = std::map<std::string, std::pair<std::string, int>>;

}  // namespace

double parse_length(const std::string& key, const std::string& text, int line) {
    const Split s = split_number(key, text, line);
    static const std::map<std::string, double> units = {
        {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}};
    if (s.unit.empty())
        throw ConfigError("dimensional error: '" + key + "' needs a length unit (m, cm, mm, um, nm)", line);
    const auto it = units.find(s.unit);
    if (it == units.end())
        throw ConfigError("dimensional error: '" + key + "' has unknown unit '" + s.unit + "'", line);
    return s.value * it->second;
}

double parse_number(const std::string& key, const std::string& text, int line) {
    const Split s = split_number(key, text, line);
    if (!s.unit.empty())
        throw ConfigError("dimensional error: '" + key + "' is dimensionless but has unit '" + s.unit + "'", line);
    return s.value;
}

std::uint64_t parse_count(const std::string& key, const std::string& text, int line) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
        throw ConfigError("'" + key + "' must be a non-negative integer", line);
    return v;
}

std::map<std::string, double> apply_schema(const std::vector<ParamSpec>& schema, const Raw& raw,
                                           const std::string& owner) {
    std::map<std::string, double> out;
    for (const auto& [key, val] : raw) {
        const auto it = std::find_if(schema.begin(), schema.end(), [&](const ParamSpec& p) { return p.name == key; });
        if (it == schema.end()) throw ConfigError("unknown parameter '" + key + "' for " + owner, val.second);
    }
    for (const auto& p : schema) {
        const auto it = raw.find(p.name);
        if (it == raw.end()) {
            if (p.required) throw ConfigError("missing required parameter '" + p.name + "' for " + owner);
            out[p.name] = p.default_value;
            continue;
        }
        const auto& [text, line] = it->second;
        switch (p.kind) {
            case ParamKind::length: out[p.name] = parse_length(p.name, text, line); break;
            case ParamKind::number: out[p.name] = parse_number(p.name, text, line); break;
            case ParamKind::integer: out[p.name] = static_cast<double>(parse_count(p.name, text, line)); break;
        }
    }
    return out;
}

double ScenarioConfig::get(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError("parameter '" + key + "' is not defined for " + scenario);
    return it->second;
}

std::string ScenarioConfig::canonical() const {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "scenario=" << scenario << '\n'
       << "grid.n=" << grid.n << '\n'
       << "grid.dx=" << num(grid.dx) << '\n'
       << "grid.center=" << num(grid.center) << '\n'
       << "ensemble.frames=" << frames << '\n';
    for (const auto& [k, v] : params) os << "params." << k << '=' << num(v) << '\n';
    os << "outputs=";
    for (const auto& o : outputs) os << o << ',';
    os << '\n';
    return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string ScenarioConfig::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

ScenarioConfig parse_scenario(const std::string& text) {
    static const std::set<std::string> sections = {"scenario", "grid", "ensemble", "params", "outputs"};
    std::map<std::string, Raw> raw;
    std::set<std::string> seen;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("syntax error: unterminated section header", lineno);
            current = trim(line.substr(1, line.size() - 2));
            if (!sections.count(current)) throw ConfigError("unknown section [" + current + "]", lineno);
            if (!seen.insert(current).second) throw ConfigError("duplicate section [" + current + "]", lineno);
            raw[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("syntax error: expected 'key = value'", lineno);
        if (current.empty()) throw ConfigError("syntax error: key outside of a section", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("syntax error: empty key", lineno);
        if (!raw[current].emplace(key, std::make_pair(val, lineno)).second)
            throw ConfigError("duplicate key '" + key + "' in [" + current + "]", lineno);
    }
    if (!raw.count("scenario")) throw ConfigError("missing [scenario]");
    const Raw& sc = raw["scenario"];
    for (const auto& [k, v] : sc)
        if (k != "name") throw ConfigError("unknown key '" + k + "' in [scenario]", v.second);
    if (!sc.count("name")) throw ConfigError("missing scenario name in [scenario]");
    const ScenarioInfo& info = find_scenario(sc.at("name").first);

    ScenarioConfig cfg;
    cfg.scenario = info.name;
    cfg.grid = info.grid;
    cfg.frames = info.frames;
    for (const auto& [k, v] : raw["grid"]) {
        if (k == "n") {
            cfg.grid.n = static_cast<std::size_t>(parse_count(k, v.first, v.second));
            if (cfg.grid.n < 2) throw ConfigError("grid n must be at least 2", v.second);
        } else if (k == "dx") {
            cfg.grid.dx = parse_length(k, v.first, v.second);
            if (!(cfg.grid.dx > 0.0)) throw ConfigError("grid dx must be positive", v.second);
        } else if (k == "center") {
            cfg.grid.center = parse_length(k, v.first, v.second);
        } else {
            throw ConfigError("unknown key '" + k + "' in [grid]", v.second);
        }
    }
    for (const auto& [k, v] : raw["ensemble"]) {
        if (k == "frames") cfg.frames = parse_count(k, v.first, v.second);
        else if (k == "seed") cfg.seed = parse_count(k, v.first, v.second);
        else throw ConfigError("unknown key '" + k + "' in [ensemble]", v.second);
    }
    cfg.params = apply_schema(info.params, raw["params"], info.name);
    for (const auto& [k, v] : raw["outputs"]) {
        if (k != "products") throw ConfigError("unknown key '" + k + "' in [outputs]", v.second);
        std::istringstream items(v.first);
        std::string item;
        while (std::getline(items, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            if (std::find(info.products.begin(), info.products.end(), item) == info.products.end())
                throw ConfigError("unknown product '" + item + "' for " + info.name, v.second);
            cfg.outputs.push_back(item);
        }
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace incoh
