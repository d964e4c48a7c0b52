#include "incoh/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace incoh {

void RunOutputs::info(const std::string& key, double v, const std::string& detail) {
    report.push_back({key, v, Status::info, detail});
}

void RunOutputs::check(const std::string& key, double v, bool ok, const std::string& detail) {
    report.push_back({key, v, ok ? Status::pass : Status::fail, detail});
}

void RunOutputs::gate(const std::string& key, double residual, bool ok, const std::string& detail) {
    report.push_back({key, residual, ok ? Status::pass : Status::fail, detail});
    if (!ok) gate_violation = true;
}

const ReportRow* RunOutputs::find(const std::string& key) const {
    for (const auto& r : report)
        if (r.key == key) return &r;
    return nullptr;
}

const Table* RunOutputs::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_csv(const Table& t) {
    if (t.x.size() != t.value.size() || (t.value_im && t.value_im->size() != t.value.size()))
        throw std::invalid_argument("table '" + t.name + "' has columns of different length");
    std::string s = t.x_label + ",value";
    if (t.value_im) s += ",value_im";
    s += '\n';
    for (Eigen::Index i = 0; i < t.x.size(); ++i) {
        s += format_number(t.x[i]);
        s += ',';
        s += format_number(t.value[i]);
        if (t.value_im) {
            s += ',';
            s += format_number((*t.value_im)[i]);
        }
        s += '\n';
    }
    return s;
}

PgmData format_pgm(const Image& img, const std::string& config_hash, std::uint64_t seed) {
    if (img.data.size() == 0) throw std::invalid_argument("image '" + img.name + "' is empty");
    PgmData p;
    p.min = img.data.minCoeff();
    p.max = img.data.maxCoeff();
    const double range = p.max - p.min;
    p.bytes = "P5\n# config_hash=" + config_hash + " seed=" + std::to_string(seed) + "\n" +
              std::to_string(img.data.cols()) + " " + std::to_string(img.data.rows()) + "\n255\n";
    p.bytes.reserve(p.bytes.size() + static_cast<std::size_t>(img.data.size()));
    for (Eigen::Index r = 0; r < img.data.rows(); ++r)
        for (Eigen::Index c = 0; c < img.data.cols(); ++c) {
            const double u = range > 0.0 ? (img.data(r, c) - p.min) / range : 0.0;
            p.bytes.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(u, 0.0, 1.0) * 255.0))));
        }
    return p;
}

namespace {
void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

const char* status_name(Status s) {
    switch (s) {
        case Status::info: return "info";
        case Status::pass: return "pass";
        case Status::fail: return "fail";
    }
    return "info";
}
}  // namespace

void write_outputs(const RunOutputs& out, const std::string& dir, const std::string& config_hash,
                   std::uint64_t seed, const std::vector<std::string>& keep) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
    auto wanted = [&](const std::string& name) {
        return keep.empty() || std::find(keep.begin(), keep.end(), name) != keep.end();
    };
    const std::string tag = config_hash + "," + std::to_string(seed);
    std::string manifest = "product,file,config_hash,seed\n";
    for (const auto& t : out.tables) {
        if (!wanted(t.name)) continue;
        write_file(fs::path(dir) / (t.name + ".csv"), format_csv(t));
        manifest += t.name + "," + t.name + ".csv," + tag + "\n";
    }
    for (const auto& img : out.images) {
        if (!wanted(img.name)) continue;
        const PgmData p = format_pgm(img, config_hash, seed);
        write_file(fs::path(dir) / (img.name + ".pgm"), p.bytes);
        write_file(fs::path(dir) / (img.name + ".range.csv"),
                   "min,max\n" + format_number(p.min) + "," + format_number(p.max) + "\n");
        manifest += img.name + "," + img.name + ".pgm," + tag + "\n";
    }
    std::string report = "key,value,status,detail,config_hash,seed\n";
    for (const auto& r : out.report)
        report += csv_field(r.key) + "," + format_number(r.value) + "," + status_name(r.status) + "," +
                  csv_field(r.detail) + "," + tag + "\n";
    write_file(fs::path(dir) / "report.csv", report);
    manifest += "report,report.csv," + tag + "\n";
    write_file(fs::path(dir) / "manifest.csv", manifest);
}

}  // namespace incoh
