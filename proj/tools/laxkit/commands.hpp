#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace laxkit::cli {

enum class Format { json, csv };

struct RunConfig {
    std::string command;
    std::string input;    // system or matrix file
    std::string builtin;  // builtin name, exclusive with input
    std::optional<int> order;
    double dt = 1e-3;
    double t_end = 1.0;
    std::optional<double> tol;
    std::vector<std::string> bindings;  // NAME=rational
    std::string out_dir;                // empty: report on stdout only
    Format format = Format::json;
    std::uint64_t seed = 7;
    bool plot = false;  // also emit a gnuplot script next to the CSV

    // flow
    int size = 3;
    std::vector<double> x0;
    // jacobi
    std::vector<double> a, b;
    std::optional<double> a0;
    bool check_stieltjes = false;
    int depth = 200;
    // check
    std::vector<std::string> only;
    std::string golden_dir;

    // Throws UsageError for out-of-range values.
    void validate() const;
};

// Exit codes: 0 success, 1 usage error or failed check, 2 obstruction.
int cmd_painleve(const RunConfig& cfg);
int cmd_flow(const RunConfig& cfg);
int cmd_jacobi(const RunConfig& cfg);
int cmd_check(const RunConfig& cfg);

}  // namespace laxkit::cli
