#include "commands.hpp"

#include "laxkit/error.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

using laxkit::cli::Format;
using laxkit::cli::RunConfig;

namespace {

// Accepts the Unicode minus sign as well, since it shows up in pasted values.
std::vector<double> parse_list(std::string s) {
    for (std::size_t p; (p = s.find("−")) != std::string::npos;) s.replace(p, 3, "-");
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw laxkit::UsageError("bad number '" + item + "' in list");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void add_globals(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out_dir, "Directory for report and data files");
    sub->add_option("--format", cfg.format, "Report format on stdout")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"json", Format::json}, {"csv", Format::csv}}));
    sub->add_option("--seed", cfg.seed, "Seed for random instances and sample points");
    sub->add_option("--bind", cfg.bindings, "Constant binding NAME=rational (repeatable)");
    sub->add_option("--tol", cfg.tol, "Tolerance for floating-point checks");
    sub->add_flag("--plot", cfg.plot, "Also write a gnuplot script");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"laxkit: Painleve analysis, Lax flows and periodic Jacobi spectra"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string a_list, b_list, x0_list, only_list;

    auto* pain = app.add_subcommand("painleve", "Laurent series analysis of a polynomial vector field");
    pain->add_option("file", cfg.input, "System file");
    pain->add_option("--builtin", cfg.builtin, "Builtin system name");
    pain->add_option("--order", cfg.order, "Truncation order in t past the leading term");

    auto* flow = app.add_subcommand("flow", "Integrate a Lax pair or a vector field and measure invariant drift");
    flow->add_option("file", cfg.input, "System file");
    flow->add_option("--builtin", cfg.builtin, "Lax builtin or builtin system name");
    flow->add_option("-N", cfg.size, "Size of a Lax builtin");
    flow->add_option("--dt", cfg.dt, "Step size");
    flow->add_option("--t-end", cfg.t_end, "Final time");
    flow->add_option("--x0", x0_list, "Initial point, comma separated");

    auto* jac = app.add_subcommand("jacobi", "Spectral data of a periodic Jacobi matrix");
    jac->add_option("file", cfg.input, "JSON file with arrays a and b");
    jac->add_option("-a", a_list, "Off-diagonal a_1..a_N, comma separated")->allow_extra_args(false);
    jac->add_option("-b", b_list, "Diagonal b_1..b_N, comma separated")->allow_extra_args(false);
    jac->add_option("--a0", cfg.a0, "Leading coefficient, equal to a_N");
    jac->add_option("-N", cfg.size, "Period, checked against the lists");
    jac->add_flag("--check-stieltjes", cfg.check_stieltjes, "Compare the measure with the continued fraction");
    jac->add_option("--depth", cfg.depth, "Continued fraction depth for the check");

    auto* check = app.add_subcommand("check", "Run the acceptance suite");
    check->add_option("--only", only_list, "Comma separated groups: painleve, involution, flow, jacobi, dims, negative");
    check->add_option("--golden", cfg.golden_dir, "Directory of golden files");

    for (auto* sub : {pain, flow, jac, check}) add_globals(sub, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!x0_list.empty()) cfg.x0 = parse_list(x0_list);
        if (!a_list.empty()) cfg.a = parse_list(a_list);
        if (!b_list.empty()) cfg.b = parse_list(b_list);
        for (std::size_t start = 0; !only_list.empty() && start <= only_list.size();) {
            auto comma = only_list.find(',', start);
            cfg.only.push_back(only_list.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (*pain) return laxkit::cli::cmd_painleve(cfg);
        if (*flow) return laxkit::cli::cmd_flow(cfg);
        if (*jac) {
            if (jac->count("-N") && static_cast<std::size_t>(cfg.size) != cfg.a.size())
                throw laxkit::UsageError("-N does not match the length of -a");
            return laxkit::cli::cmd_jacobi(cfg);
        }
        return laxkit::cli::cmd_check(cfg);
    } catch (const laxkit::ObstructionError& e) {
        std::cerr << "laxkit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "laxkit: " << e.what() << "\n";
        return 1;
    }
}
