#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "incoh/calc.hpp"
#include "incoh/registry.hpp"
#include "incoh/scenarios.hpp"

using namespace incoh;
namespace fs = std::filesystem;

namespace {
const char* kMinimal = R"(# two-arm run
[scenario]
name = unequal_path
[grid]
n = 512
dx = 12um
[ensemble]
frames = 200
seed = 11
[params]
z_o = 16cm
z_r = 27cm
b = 125um
d = 310um
lambda = 632.8nm
)";

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("incoh_test_" + name);
    fs::remove_all(p);
    return p;
}
}  // namespace

TEST_CASE("scenario files parse with units") {
    const ScenarioConfig c = parse_scenario(kMinimal);
    CHECK(c.scenario == "unequal_path");
    CHECK(c.grid.n == 512);
    CHECK(c.grid.dx == doctest::Approx(12e-6));
    CHECK(c.frames == 200);
    CHECK(c.seed == 11);
    CHECK(c.get("z_o") == doctest::Approx(0.16));
    CHECK(c.get("lambda") == doctest::Approx(632.8e-9));
    CHECK(c.get("coherence_length") == doctest::Approx(1.0));
    CHECK(c.hash_hex() == parse_scenario(kMinimal).hash_hex());

    std::string bad = kMinimal;
    bad.replace(bad.find("z_o = 16cm"), 10, "z_o = 16");
    const std::string msg = error_of(bad);
    CHECK(msg.find("z_o") != std::string::npos);
    CHECK(msg.find("dimensional") != std::string::npos);

    CHECK(error_of("").find("missing [scenario]") != std::string::npos);
    CHECK(error_of("[scenario]\nname = nope\n").find("nope") != std::string::npos);
    CHECK_FALSE(error_of("[scenario]\nname = unequal_path\n[params]\nz_o = 16cm\n").empty());
    CHECK_FALSE(error_of(std::string(kMinimal) + "bogus = 1m\n").empty());
}

TEST_CASE("csv and pgm writers") {
    Table t;
    t.name = "cut";
    t.x = RVec::LinSpaced(1024, -1.0, 1.0);
    t.value = RVec::Ones(1024);
    const std::string csv = format_csv(t);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1025);
    CHECK(csv.rfind("x_m,value", 0) == 0);

    const Image img{"flat", Eigen::MatrixXd::Constant(4, 5, 2.5)};
    const PgmData p = format_pgm(img, "abc", 3);
    CHECK(p.min == 2.5);
    CHECK(p.max == 2.5);
    const std::string tail = p.bytes.substr(p.bytes.size() - 20);
    CHECK(std::all_of(tail.begin(), tail.end(), [](char c) { return c == 0; }));
    CHECK(p.bytes.rfind("P5\n", 0) == 0);
    CHECK(p.bytes.find("config_hash=abc") != std::string::npos);

    RunOutputs out;
    out.images.push_back(img);
    out.tables.push_back(t);
    const fs::path dir = fresh_dir("writers");
    write_outputs(out, dir.string(), "abc", 3);
    CHECK(slurp(dir / "flat.range.csv") == "min,max\n2.5,2.5\n");
    CHECK(fs::exists(dir / "manifest.csv"));
    CHECK(fs::exists(dir / "report.csv"));
    fs::remove_all(dir);
}

TEST_CASE("runs are reproducible and independent of worker count") {
    const ScenarioConfig c = parse_scenario(kMinimal);
    RunOptions one, two;
    one.workers = 1;
    two.workers = 2;
    const RunOutputs a = run_scenario(c, one);
    const RunOutputs b = run_scenario(c, two);
    const RunOutputs a2 = run_scenario(c, one);
    const fs::path da = fresh_dir("a"), db = fresh_dir("b"), dc = fresh_dir("c");
    write_outputs(a, da.string(), c.hash_hex(), c.seed);
    write_outputs(b, db.string(), c.hash_hex(), c.seed);
    write_outputs(a2, dc.string(), c.hash_hex(), c.seed);
    int files = 0;
    for (const auto& e : fs::directory_iterator(da)) {
        const auto name = e.path().filename();
        CHECK(slurp(e.path()) == slurp(db / name));
        CHECK(slurp(e.path()) == slurp(dc / name));
        ++files;
    }
    CHECK(files > 3);
    CHECK(slurp(da / "mc.csv").size() > 1000);

    ScenarioConfig other = c;
    other.seed = 12;
    const RunOutputs d = run_scenario(other, one);
    CHECK(format_csv(*d.table("mc")) != format_csv(*a.table("mc")));
    for (const auto& p : {da, db, dc}) fs::remove_all(p);
}

TEST_CASE("calc examples") {
    const auto z = calc("unequal_path", {{"z_o", "16cm"}, {"z_r", "27cm"}});
    CHECK(z.find("Z_m")->value == doctest::Approx(0.3927272727).epsilon(1e-9));
    const auto same = calc("unequal_path", {{"z_o", "z_r"}, {"z_r", "27cm"}});
    CHECK(std::isinf(same.find("Z_m")->value));
    CHECK(same.find("Z_m")->detail.find("homogeneous") != std::string::npos);
    CHECK(calc("lens_pair", {{"f_o", "7.5cm"}, {"f_r", "12cm"}}).find("f_eff_m")->value == doctest::Approx(0.2));
    const auto rod = calc("glass_rod", {{"z_o1", "20cm"}});
    CHECK(rod.find("Z_eff_m")->value * 100 == doctest::Approx(-13.9).epsilon(0.01));
    CHECK(calc("glass_rod_sweep", {}).rows.size() == 5);
    CHECK_THROWS_AS(calc("unequal_path", {{"z_o", "16"}, {"z_r", "27cm"}}), ConfigError);
    CHECK_THROWS_AS(calc("warp_drive", {}), ConfigError);
    CHECK_THROWS_AS(calc("unequal_path", {{"z_o", "16cm"}, {"z_r", "27cm"}, {"q", "1m"}}), ConfigError);
    const auto args = parse_calc_args({"z_o=16cm", "z_r=z_o"});
    CHECK(args.at("z_r") == "z_o");
    CHECK(format_calc_csv(z).rfind("quantity,value,detail\n", 0) == 0);
}

TEST_CASE("registry scenarios run cleanly from their defaults") {
    RunOptions opt;
    opt.oracle_only = true;
    for (const auto& info : registry()) {
        if (info.name == "ghost_diffraction" || info.name == "nonlocal_doubleslit") continue;
        std::string text = "[scenario]\nname = " + info.name + "\n[params]\n";
        for (const auto& p : info.params)
            if (p.required) text += p.name + " = " + (p.name == "lambda" ? "632.8nm" : "20cm") + "\n";
        if (info.name == "unequal_path") text = kMinimal;
        const ScenarioConfig c = parse_scenario(text);
        const RunOutputs out = run_scenario(c, opt);
        CAPTURE(info.name);
        CHECK_FALSE(out.gate_violation);
        for (const auto& r : out.report) {
            CAPTURE(r.key);
            CHECK(r.status != Status::fail);
        }
        CHECK((!out.tables.empty() || !out.images.empty()));
    }
}

TEST_CASE("specific scenario outcomes") {
    RunOptions opt;
    opt.oracle_only = true;
    const auto hom = run_scenario(parse_scenario("[scenario]\nname = hom\n"), opt);
    CHECK(hom.find("degenerate_dip")->value == 0.0);

    const auto rod = run_scenario(parse_scenario("[scenario]\nname = glass_rod\n"), opt);
    CHECK(rod.find("image_overlap")->value >= 0.95);
    CHECK(std::abs(rod.find("Z_eff_m")->value) < 1e-3);

    const auto fzp = run_scenario(parse_scenario("[scenario]\nname = fzp_triangular\n"), opt);
    CHECK(fzp.find("fzp_model_correlation")->status == Status::pass);
    CHECK(fzp.find("encoding_correlation")->status == Status::pass);

    const auto bad = run_scenario(
        parse_scenario("[scenario]\nname = first_order_ghost_imaging\n[params]\nz2 = 20cm\n"), opt);
    CHECK(bad.gate_violation);
}
