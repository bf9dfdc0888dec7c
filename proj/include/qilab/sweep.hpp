#pragma once

#include <map>
#include <string>
#include <vector>

#include "qilab/math.hpp"

namespace qilab {

struct GridSpec {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log_scale = false;
};

struct SweepConfig {
    std::string subcommand;
    std::map<std::string, double> params;
    std::vector<GridSpec> grids;  // cartesian product, last grid fastest
    std::string output;           // empty = stdout
    std::string format = "csv";
    int threads = 0;              // 0 = hardware default
    std::string state_a, state_b; // JSON state files for `distinguish`
};

struct Dataset {
    std::vector<std::string> columns;        // numeric columns; "error" appended on emit
    std::vector<std::vector<double>> rows;
    std::vector<std::string> errors;         // per-row message, empty when clean
};

// Known subcommands, in CLI order.
const std::vector<std::string>& subcommand_names();

// Expand the grids, evaluate every row (row-parallel, deterministic order),
// capture per-row failures in the error column.
Dataset run(const SweepConfig& config);

// CSV (17 significant digits, LF) or JSON array of row objects; non-finite
// values become "inf"/"-inf"/"nan" tokens.
std::string emit(const Dataset& ds, const std::string& format);

std::vector<double> grid_points(const GridSpec& g);

}  // namespace qilab
