#include "incoh/calc.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "incoh/biphoton.hpp"
#include "incoh/config.hpp"
#include "incoh/correlate.hpp"
#include "incoh/outputs.hpp"

namespace incoh {

namespace {

ParamSpec L(const std::string& name, bool required, double def = 0.0) {
    return {name, ParamKind::length, required, def, ""};
}
ParamSpec N(const std::string& name, bool required, double def = 0.0) {
    return {name, ParamKind::number, required, def, ""};
}

struct Kind {
    std::string name;
    std::vector<ParamSpec> schema;
    std::function<CalcResult(const std::map<std::string, double>&)> eval;
};

void add_length(CalcResult& r, const std::string& key, const EffectiveLength& e) {
    r.rows.push_back({key, e.value, regime_name(e.regime)});
}

const std::vector<double> kGlassRodSweep = {0.310, 0.285, 0.242, 0.200, 0.106};

const std::vector<Kind>& kinds() {
    static const std::vector<Kind> k = {
        {"unequal_path", {L("z_o", true), L("z_r", true)},
         [](const auto& p) {
             CalcResult r;
             add_length(r, "Z_m", unequal_path_length(p.at("z_o"), p.at("z_r")));
             return r;
         }},
        {"lens_pair", {L("f_o", true), L("f_r", true)},
         [](const auto& p) {
             CalcResult r;
             add_length(r, "f_eff_m", lens_pair_focal(p.at("f_o"), p.at("f_r")));
             return r;
         }},
        {"ghost_en", {L("z_o1", true), L("z_o2", true), L("z_r", true)},
         [](const auto& p) {
             CalcResult r;
             add_length(r, "Z_en_m", ghost_entangled_length(p.at("z_o1"), p.at("z_o2"), p.at("z_r")));
             return r;
         }},
        {"ghost_th", {L("z_o1", true), L("z_o2", true), L("z_r", true)},
         [](const auto& p) {
             CalcResult r;
             add_length(r, "Z_th_m", ghost_thermal_length(p.at("z_o1"), p.at("z_o2"), p.at("z_r")));
             return r;
         }},
        {"glass_rod", {L("l", false, 0.155), N("n", false, 1.5163), L("z_o", false, 0.418), L("z_o1", true)},
         [](const auto& p) {
             const auto g = glass_rod_length(p.at("l"), p.at("n"), p.at("z_o"), p.at("z_o1"));
             CalcResult r;
             add_length(r, "Z_eff_m", g.z_eff);
             r.rows.push_back({"z_bar_m", g.z_bar, ""});
             r.rows.push_back({"z_r_m", g.z_r, ""});
             r.rows.push_back({"identity_residual", g.identity_residual, g.identity_ok ? "ok" : "violated"});
             return r;
         }},
        {"glass_rod_sweep", {L("l", false, 0.155), N("n", false, 1.5163), L("z_o", false, 0.418)},
         [](const auto& p) {
             CalcResult r;
             r.key_label = "z_o1_m";
             for (double z : kGlassRodSweep) {
                 const auto g = glass_rod_length(p.at("l"), p.at("n"), p.at("z_o"), z);
                 if (!g.identity_ok) throw std::invalid_argument("equal-path identity violated");
                 r.rows.push_back({format_number(z), g.z_eff.value, regime_name(g.z_eff.regime)});
             }
             return r;
         }},
        {"imaging_entangled", {L("z_o", true), L("z1", true), L("z2", true), L("f", true)},
         [](const auto& p) {
             const auto c = entangled_ghost_image_check(p.at("z_o"), p.at("z1"), p.at("z2"), p.at("f"));
             CalcResult r;
             r.rows.push_back({"residual_per_m", c.residual, c.ok ? "imaging" : "not imaging"});
             r.rows.push_back({"magnification", c.magnification, ""});
             return r;
         }},
        {"imaging_thermal", {L("z_o", true), L("z1", true), L("z2", true), L("f", true)},
         [](const auto& p) {
             const double res = 1.0 / p.at("z_o") + 1.0 / (p.at("z2") - p.at("z1")) - 1.0 / p.at("f");
             CalcResult r;
             r.rows.push_back({"residual_per_m", res, std::abs(res * p.at("f")) <= 1e-6 ? "imaging" : "not imaging"});
             r.rows.push_back({"magnification", -(p.at("z2") - p.at("z1")) / p.at("z_o"), ""});
             return r;
         }},
        {"imaging_first_order",
         {L("f1", true), L("f2", true), L("z0", true), L("z1", true), L("z2", true)},
         [](const auto& p) {
             const double u = p.at("z1") - p.at("z0");
             const double res = 1.0 / u + 1.0 / p.at("z2") - 1.0 / p.at("f2");
             const double mismatch = p.at("z0") + 2.0 * p.at("f1") - p.at("z1") - p.at("z2");
             CalcResult r;
             r.rows.push_back({"residual_per_m", res, std::abs(res * p.at("f2")) <= 1e-6 ? "imaging" : "not imaging"});
             r.rows.push_back({"path_mismatch_m", mismatch, std::abs(mismatch) <= 1e-9 ? "equal path" : "unequal path"});
             r.rows.push_back({"magnification", -p.at("z2") / u, ""});
             return r;
         }},
        {"hbt", {L("D", true), L("z", true), L("lambda", false, 632.8e-9)},
         [](const auto& p) {
             const auto c = hbt_star(p.at("D"), p.at("z"), p.at("lambda"), {});
             CalcResult r;
             r.rows.push_back({"first_zero_m", c.first_zero, ""});
             r.rows.push_back({"angular_diameter_rad", c.angular_diameter, ""});
             return r;
         }},
    };
    return k;
}

}  // namespace

const CalcRow* CalcResult::find(const std::string& key) const {
    for (const auto& r : rows)
        if (r.key == key) return &r;
    return nullptr;
}

std::vector<std::string> calc_kinds() {
    std::vector<std::string> out;
    for (const auto& k : kinds()) out.push_back(k.name);
    return out;
}

CalcResult calc(const std::string& kind, const std::map<std::string, std::string>& args) {
    const Kind* k = nullptr;
    for (const auto& c : kinds())
        if (c.name == kind) k = &c;
    if (!k) throw ConfigError("unknown calc kind '" + kind + "'");
    auto spec_of = [&](const std::string& name) -> const ParamSpec* {
        for (const auto& s : k->schema)
            if (s.name == name) return &s;
        return nullptr;
    };
    std::map<std::string, std::pair<std::string, int>> raw;
    bool symbolic = false;
    for (const auto& [key, text] : args) raw[key] = {text, 0};
    for (const auto& [key, text] : args) {
        // z_o=z_r ties one key to another, one level deep.
        const ParamSpec* target = spec_of(text);
        if (!target || text == key) continue;
        if (auto it = args.find(text); it != args.end()) {
            raw[key].first = it->second;
        } else if (!target->required) {
            raw[key].first = format_number(target->default_value) + (target->kind == ParamKind::length ? "m" : "");
        } else {
            // Both sides are unknown; any common value gives the same regime.
            raw[key].first = "1m";
            raw[text] = {"1m", 0};
            symbolic = true;
        }
    }
    const auto params = apply_schema(k->schema, raw, "calc " + kind);
    CalcResult r;
    try {
        r = k->eval(params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("calc ") + kind + ": " + e.what());
    }
    r.kind = kind;
    if (symbolic)
        for (auto& row : r.rows)
            if (row.detail.empty()) row.detail = "symbolic equality";
    return r;
}

std::map<std::string, std::string> parse_calc_args(const std::vector<std::string>& tokens) {
    std::map<std::string, std::string> out;
    for (const auto& t : tokens) {
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == t.size())
            throw ConfigError("expected key=value, got '" + t + "'");
        const std::string key = t.substr(0, eq);
        if (out.count(key)) throw ConfigError("duplicate key '" + key + "'");
        out[key] = t.substr(eq + 1);
    }
    return out;
}

std::string format_calc_csv(const CalcResult& r) {
    std::string s = r.key_label + ",value,detail\n";
    for (const auto& row : r.rows) s += row.key + "," + format_number(row.value) + "," + row.detail + "\n";
    return s;
}

}  // namespace incoh
