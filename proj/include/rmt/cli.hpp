#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rmt {

// Comma-separated list of integers, decimals or fractions p/q ("0,1/2,-3/2,2.5").
std::vector<double> parse_number_list(const std::string& text);
double parse_number(const std::string& text);

// CSV rows bin_left,bin_right,count,density_estimate over [lo, hi) with `bins` equal
// cells; density_estimate = count / (n * width) where n counts all samples. When
// `density` is given, an exact_density column holds its value at each midpoint.
std::string emit_histogram(const std::vector<double>& samples, int bins, double lo, double hi,
                           const std::optional<std::function<double(double)>>& density = std::nullopt);

// Exit codes of run().
constexpr int kExitOk = 0;
constexpr int kExitTestFailure = 1;
constexpr int kExitUsage = 2;

// Entry point of the rmt tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmt
