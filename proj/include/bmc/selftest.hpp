#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bmc {

struct SelftestLine {
    std::string name;
    double measured = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct SelftestReport {
    std::vector<SelftestLine> lines;
    bool all_pass() const;
    std::string to_text() const;
};

// Identity suites of the transform/weight modules at reference parameters.
// Tolerance keys: fft, identity, quadrature, closedform (overridable).
SelftestReport run_selftest(const std::map<std::string, double>& tol_overrides = {},
                            std::uint64_t seed = 1234);

}  // namespace bmc
