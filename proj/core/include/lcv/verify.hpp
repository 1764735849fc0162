#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "lcv/spectral_field.hpp"

namespace lcv::verify {

struct CheckConfig {
    int grid = 32;
    int band = 4;
    std::uint64_t seed = 20240601;
    double c = std::numbers::sqrt2;
    double c1 = 0.0;
    int triples = 50;       // random triples for algebra identities
    int points = 10;        // random points for ladder/limit checks
    int involution_points = 5;
    NonlocalConvention convention;
};

struct CheckResult {
    std::string check;
    int grid = 0;
    std::uint64_t seed = 0;
    double defect = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

std::vector<std::string> check_names();

/// Run the registered identity checks; `only` filters by exact name (empty:
/// all). Structured library errors are captured as failing results with the
/// error message in `note`.
std::vector<CheckResult> run_checks(const CheckConfig& config,
                                    const std::vector<std::string>& only = {});

bool all_pass(const std::vector<CheckResult>& results);

/// Smallest even grid whose 2/3-rule keep-band retains products of `depth`
/// band-limited factors exactly.
int working_grid(int band, int depth);

}  // namespace lcv::verify
