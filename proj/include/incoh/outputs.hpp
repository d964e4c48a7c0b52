#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "incoh/fieldgrid.hpp"

namespace incoh {

struct Table {
    std::string name;
    std::string x_label = "x_m";
    RVec x;
    RVec value;
    std::optional<RVec> value_im;
};

struct Image {
    std::string name;
    Eigen::MatrixXd data;   // row-major rendering, row 0 first
};

enum class Status { info, pass, fail };

struct ReportRow {
    std::string key;
    double value = 0.0;
    Status status = Status::info;
    std::string detail;
};

struct RunOutputs {
    std::vector<Table> tables;
    std::vector<Image> images;
    std::vector<ReportRow> report;
    bool gate_violation = false;

    void info(const std::string& key, double v, const std::string& detail = "");
    void check(const std::string& key, double v, bool ok, const std::string& detail = "");
    // A failed gate marks the run as a gate violation.
    void gate(const std::string& key, double residual, bool ok, const std::string& detail = "");
    const ReportRow* find(const std::string& key) const;
    const Table* table(const std::string& name) const;
};

std::string format_number(double v);
std::string format_csv(const Table& t);
struct PgmData {
    std::string bytes;
    double min = 0.0;
    double max = 0.0;
};
PgmData format_pgm(const Image& img, const std::string& config_hash, std::uint64_t seed);

// Writes <name>.csv, <name>.pgm + <name>.range.csv, report.csv and manifest.csv.
// Only products listed in keep are written when keep is non-empty.
void write_outputs(const RunOutputs& out, const std::string& dir, const std::string& config_hash,
                   std::uint64_t seed, const std::vector<std::string>& keep = {});

}  // namespace incoh
