#include "commands.hpp"

#include "output.hpp"

#include "laxkit/acceptance.hpp"
#include "laxkit/error.hpp"
#include "laxkit/jacobispec.hpp"
#include "laxkit/laxflow.hpp"
#include "laxkit/painleve.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace laxkit::cli {

using json = nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string rat(const BigRational& r) { return r.get_str(); }

json rats(const std::vector<BigRational>& xs) {
    json out = json::array();
    for (const auto& x : xs) out.push_back(rat(x));
    return out;
}

json polys(const std::vector<MultiPoly>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(p.to_string());
    return out;
}

json cplx(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

BigRational parse_rational(const std::string& s) {
    BigRational r;
    if (s.empty() || r.set_str(s, 10) != 0) throw UsageError("expected a rational number, got '" + s + "'");
    if (r.get_den() == 0) throw UsageError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::map<std::string, BigRational> parse_bindings(const std::vector<std::string>& items) {
    std::map<std::string, BigRational> out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--bind expects NAME=value, got '" + item + "'");
        out[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
    }
    return out;
}

VectorFieldSystem load_vector_field(const RunConfig& cfg) {
    VectorFieldSystem sys = cfg.builtin.empty() ? load_system(cfg.input) : builtin_system(cfg.builtin);
    auto bindings = parse_bindings(cfg.bindings);
    return bindings.empty() ? sys : bind_constants(sys, bindings);
}

// Report on stdout, files only when an output directory is configured.
void emit(const RunConfig& cfg, const std::string& json_body, const std::string& csv_body,
          std::vector<OutputFile> files) {
    if (!cfg.out_dir.empty()) write_all(cfg.out_dir, files);
    std::cout << (cfg.format == Format::json ? json_body : csv_body);
}

// ---- painleve --------------------------------------------------------------

json series_json(const PuiseuxSeries& s) {
    json out = json::array();
    for (std::size_t j = 0; j < s.coeffs().size(); ++j) {
        if (s.coeffs()[j].is_zero()) continue;
        BigRational e(s.lowest() + static_cast<long>(j), s.ell());
        e.canonicalize();
        out.push_back(json::array({rat(e), s.coeffs()[j].to_string()}));
    }
    return out;
}

}  // namespace

void RunConfig::validate() const {
    if (!(dt > 0)) throw UsageError("--dt must be positive");
    if (!(t_end > 0)) throw UsageError("--t-end must be positive");
    if (tol && !(*tol > 0)) throw UsageError("--tol must be positive");
    if (order && *order < 1) throw UsageError("--order must be at least 1");
    if (depth < 1) throw UsageError("--depth must be at least 1");
    if (size < 2) throw UsageError("-N must be at least 2");
    if (!input.empty() && !builtin.empty()) throw UsageError("give either a file or --builtin, not both");
}

int cmd_painleve(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.input.empty() && cfg.builtin.empty()) throw UsageError("painleve needs a system file or --builtin");
    const auto sys = load_vector_field(cfg);
    bool obstructed = false;

    json report;
    report["laxkit_report"] = 1;
    report["command"] = "painleve";
    report["system"] = sys.name;
    report["variables"] = sys.variables;
    report["constants"] = sys.constants;
    report["order"] = cfg.order ? json(*cfg.order) : json(nullptr);
    std::ostringstream csv;
    csv << "weight_vector,balance,variable,exponent,coefficient\n";

    json weight_list = json::array();
    const auto weights = detect_weights(sys);
    for (std::size_t wi = 0; wi < weights.size(); ++wi) {
        const auto& w = weights[wi];
        json wj;
        wj["weights"] = rats(w.weights);
        auto ir = indicial_solve(sys, w);
        wj["unresolved"] = ir.unresolved;
        json balances = json::array();
        for (const auto& bal : ir.balances) {
            json bj;
            bj["label"] = bal.label;
            bj["pole_orders"] = rats(bal.exponents);
            bj["leading"] = polys(bal.leading);
            json alg = json::array();
            for (const auto& a : bal.algebraic)
                alg.push_back({{"name", a.name}, {"minimal_polynomial", a.minpoly.to_string(a.name)}});
            bj["algebraic"] = alg;

            auto k = kowalewski(sys, w, bal);
            json kj;
            json ev = json::array();
            for (const auto& [v, m] : k.rational_eigenvalues) ev.push_back({{"value", rat(v)}, {"multiplicity", m}});
            kj["eigenvalues"] = ev;
            json other = json::array();
            for (auto z : k.other_eigenvalues) other.push_back(cplx(z));
            kj["other_eigenvalues"] = other;
            kj["ell"] = k.ell;
            kj["fractional"] = k.ell > 1;
            json tau = json::array();
            for (const auto& [v, m] : k.tau_eigenvalues()) tau.push_back({{"value", rat(v)}, {"multiplicity", m}});
            kj["tau_eigenvalues"] = tau;
            json res = json::array();
            for (const auto& r : k.resonances) res.push_back({{"value", rat(r.value)}, {"multiplicity", r.multiplicity}});
            kj["resonances"] = res;
            bj["kowalewski"] = kj;

            if (!bal.is_rational()) {
                bj["series"] = nullptr;
                bj["note"] = "leading coefficients are algebraic; series not propagated";
                balances.push_back(bj);
                continue;
            }
            const int order = cfg.order.value_or(std::max(default_order(k), constraint_order(sys, w)));
            try {
                auto fam = propagate(sys, w, bal, order);
                json sj;
                for (std::size_t i = 0; i < fam.variables.size(); ++i) {
                    sj[fam.variables[i]] = series_json(fam.series[i]);
                    for (const auto& term : sj[fam.variables[i]])
                        csv << wi << ",\"" << bal.label << "\"," << fam.variables[i] << "," << term[0].get<std::string>()
                            << ",\"" << term[1].get<std::string>() << "\"\n";
                }
                bj["series"] = sj;
                bj["truncation_order"] = order;
                bj["parameters"] = fam.parameters;
                bj["parameter_levels"] = rats(fam.parameter_levels);
                bj["effective_exponents"] = rats(fam.effective_exponents());
                auto pc = count_free_parameters(fam);
                bj["parameter_count"] = {{"explicit", pc.explicit_parameters}, {"with_time_origin", pc.with_time_origin}};
                bj["notes"] = fam.notes;
                if (!sys.invariants.empty()) {
                    std::vector<std::string> names;
                    for (const auto& inv : sys.invariants) names.push_back(inv.name);
                    try {
                        auto cv = constraint_curve(sys, fam, names);
                        json cj;
                        cj["invariants"] = cv.invariants;
                        cj["value_symbols"] = cv.value_symbols;
                        cj["relations"] = polys(cv.relations);
                        cj["eliminated"] = cv.eliminated;
                        cj["reduced"] = polys(cv.reduced);
                        cj["curve"] = cv.curve ? json(cv.curve->to_string()) : json(nullptr);
                        bj["constraint"] = cj;
                    } catch (const UsageError& e) {
                        bj["constraint"] = {{"skipped", e.what()}};
                    }
                }
            } catch (const ObstructionError& e) {
                obstructed = true;
                bj["series"] = nullptr;
                bj["obstruction"] = {{"level", e.level()}, {"message", e.what()}};
            }
            balances.push_back(bj);
        }
        wj["balances"] = balances;
        weight_list.push_back(wj);
    }
    report["weight_vectors"] = weight_list;
    report["obstructed"] = obstructed;
    if (weights.empty()) report["note"] = "no weight vector makes the system quasi-homogeneous";

    const std::string stem = "painleve-" + (sys.name.empty() ? std::string("system") : sys.name);
    const std::string body = dump(report);
    emit(cfg, body, csv.str(), {{stem + ".json", body}, {stem + ".csv", csv.str()}});
    return obstructed ? 2 : 0;
}

// ---- flow ------------------------------------------------------------------

namespace {

const std::vector<double> kHSamples{1.0, -1.0, 2.0, 0.5};

std::string gnuplot_script(const std::string& csv, const std::string& title, int first_col, int last_col,
                           const std::string& ylabel) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel 't'\nset ylabel '" << ylabel << "'\n"
       << "plot for [c=" << first_col << ":" << last_col << "] '" << csv << "' using 1:c with lines\n";
    return gp.str();
}

bool is_lax_builtin(const std::string& name) {
    auto names = lax_builtin_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

int cmd_flow(const RunConfig& cfg) {
    cfg.validate();
    const double tol = cfg.tol.value_or(1e-8);
    const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    IntegrateOptions io;
    io.sample_every = static_cast<int>(std::max<std::size_t>(1, steps / 1000));

    json report;
    report["laxkit_report"] = 1;
    report["command"] = "flow";
    report["dt"] = cfg.dt;
    report["t_end"] = cfg.t_end;
    report["tol"] = tol;
    report["seed"] = cfg.seed;
    std::ostringstream csv;
    std::string name;
    json drift;
    double worst = 0;
    int columns = 0;

    try {
        if (!cfg.builtin.empty() && is_lax_builtin(cfg.builtin)) {
            name = cfg.builtin;
            std::mt19937_64 rng(cfg.seed);
            auto sys = lax_builtin(cfg.builtin, cfg.size, rng);
            const int n = static_cast<int>(sys.initial.dim());
            auto traj = integrate_lax(sys.initial, sys.b, cfg.t_end, cfg.dt, io);
            report["kind"] = "lax";
            report["builtin"] = name;
            report["size"] = n;
            // Per-power drift of tr A(h)^k over the h samples.
            std::vector<std::vector<double>> tr0(kHSamples.size(), std::vector<double>(n + 1));
            std::vector<double> per_k(n + 1, 0);
            csv << "t";
            for (int k = 1; k <= n; ++k) csv << ",tr_A^" << k;
            csv << "\n";
            for (std::size_t s = 0; s < traj.states.size(); ++s) {
                csv << num(traj.times[s]);
                for (std::size_t hi = 0; hi < kHSamples.size(); ++hi) {
                    Mat a = traj.states[s].at(kHSamples[hi]);
                    Mat pw = Mat::Identity(n, n);
                    for (int k = 1; k <= n; ++k) {
                        pw = pw * a;
                        const double tr = pw.trace();
                        if (s == 0) tr0[hi][k] = tr;
                        per_k[k] = std::max(per_k[k], std::abs(tr - tr0[hi][k]));
                        if (hi == 0) csv << "," << num(tr);
                    }
                }
                csv << "\n";
            }
            for (int k = 1; k <= n; ++k) {
                drift["tr_A^" + std::to_string(k)] = per_k[k];
                worst = std::max(worst, per_k[k]);
            }
            columns = n + 1;
            auto curve = pencil_charpoly(traj.states.front());
            json cj = json::array();
            for (const auto& [key, v] : curve.coeffs)
                if (v != 0) cj.push_back({{"z", key.first}, {"h", key.second}, {"coeff", v}});
            report["spectral_curve"] = cj;
        } else {
            if (cfg.input.empty() && cfg.builtin.empty()) throw UsageError("flow needs --builtin or a system file");
            auto sys = load_vector_field(cfg);
            name = sys.name;
            const int n = static_cast<int>(sys.dimension());
            Vec x0(n);
            if (!cfg.x0.empty()) {
                if (static_cast<int>(cfg.x0.size()) != n)
                    throw UsageError("--x0 needs " + std::to_string(n) + " values");
                for (int i = 0; i < n; ++i) x0[i] = cfg.x0[i];
            } else {
                std::mt19937_64 rng(cfg.seed);
                std::uniform_real_distribution<double> u(0.5, 1.5);
                for (int i = 0; i < n; ++i) x0[i] = u(rng);
            }
            auto traj = integrate_vector_field(sys, x0, cfg.t_end, cfg.dt, io);
            std::vector<std::string> names;
            for (const auto& inv : sys.invariants) names.push_back(inv.name);
            auto d = invariant_drift(sys, traj, names);
            report["kind"] = "vector-field";
            report["system"] = name;
            report["initial"] = std::vector<double>(x0.data(), x0.data() + n);
            for (std::size_t i = 0; i < names.size(); ++i) {
                drift[names[i]] = d[i];
                worst = std::max(worst, d[i]);
            }
            csv << "t";
            for (const auto& v : sys.variables) csv << "," << v;
            csv << "\n";
            for (std::size_t s = 0; s < traj.states.size(); ++s) {
                csv << num(traj.times[s]);
                for (int i = 0; i < n; ++i) csv << "," << num(traj.states[s][i]);
                csv << "\n";
            }
            columns = n + 1;
            if (name == "kvm") {
                std::map<std::string, double> at;
                for (int i = 0; i < n; ++i) at[sys.variables[i]] = x0[i];
                const double c1 = poly_eval_double(sys.invariant("H1"), at);
                const double c2 = poly_eval_double(sys.invariant("H2"), at);
                report["kvm_curve"] = {{"c1", c1},
                                       {"c2", c2},
                                       {"c3", poly_eval_double(sys.invariant("H3"), at)},
                                       {"w2_coefficients", kvm_curve(c1, c2)}};
            }
        }
    } catch (const BlowUpError& e) {
        throw Error("blow-up at t = " + num(e.time()) + ": " + e.what());
    }

    report["drift"] = drift;
    report["max_drift"] = worst;
    report["pass"] = worst < tol;
    const std::string stem = "flow-" + name;
    const std::string body = dump(report);
    std::vector<OutputFile> files{{stem + ".json", body}, {stem + ".csv", csv.str()}};
    if (cfg.plot) files.push_back({stem + ".gp", gnuplot_script(stem + ".csv", name, 2, columns, "value")});
    emit(cfg, body, csv.str(), files);
    if (worst >= tol) std::cerr << "drift " << worst << " exceeds tolerance " << tol << "\n";
    return worst < tol ? 0 : 1;
}

// ---- jacobi ----------------------------------------------------------------

namespace {

PeriodicJacobi jacobi_input(const RunConfig& cfg) {
    PeriodicJacobi m;
    if (!cfg.input.empty()) {
        std::ifstream in(cfg.input);
        if (!in) throw UsageError("cannot open '" + cfg.input + "'");
        json j;
        try {
            in >> j;
            m.a = j.at("a").get<std::vector<double>>();
            m.b = j.at("b").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw UsageError(cfg.input + ": expected {\"a\": [...], \"b\": [...]}: " + e.what());
        }
        if (!cfg.a.empty() || !cfg.b.empty()) throw UsageError("give either a matrix file or -a/-b, not both");
    } else {
        m.a = cfg.a;
        m.b = cfg.b;
    }
    if (m.a.empty() || m.b.empty()) throw UsageError("jacobi needs -a and -b");
    if (m.a.size() != m.b.size()) throw UsageError("-a and -b need the same length");
    if (cfg.a0 && *cfg.a0 != m.a.back())
        throw UsageError("--a0 must equal a_N = " + num(m.a.back()) + " (a_0 and a_N coincide by periodicity)");
    m.validate();
    return m;
}

}  // namespace

int cmd_jacobi(const RunConfig& cfg) {
    cfg.validate();
    const auto m = jacobi_input(cfg);
    const auto d = spectral_data(m);
    const auto mu = measure_decompose(m);

    json report;
    report["laxkit_report"] = 1;
    report["command"] = "jacobi";
    report["period"] = d.period;
    report["a"] = m.a;
    report["b"] = m.b;
    report["a0"] = m.a0();
    report["alpha"] = d.alpha;
    report["p"] = d.p;
    report["cofactor"] = d.cofactor;
    report["branch_points"] = d.branch_points;
    report["genus"] = d.genus;
    json bands = json::array();
    for (const auto& [lo, hi] : d.stable_bands) bands.push_back({lo, hi});
    report["stable_bands"] = bands;
    // One row per gap: the auxiliary point it holds and its atom.
    json table = json::array();
    for (std::size_t j = 0; j < d.gaps.size(); ++j)
        table.push_back({{"gap", {d.gaps[j].first, d.gaps[j].second}},
                         {"sigma", d.auxiliary[j]},
                         {"atom_mass", mu.candidates[j].mass}});
    report["interlacing"] = table;
    json atoms = json::array();
    for (const auto& at : mu.atoms) atoms.push_back({{"location", at.location}, {"mass", at.mass}});
    report["atoms"] = atoms;
    report["total_mass"] = mu.total_mass();

    bool ok = true;
    if (cfg.check_stieltjes) {
        const double tol = cfg.tol.value_or(1e-6);
        const double left = d.branch_points.front(), right = d.branch_points.back();
        const double mid = 0.5 * (left + right), rad = 0.5 * (right - left);
        std::vector<std::complex<double>> zs;
        for (int k = 0; k < 10; ++k) zs.push_back(mid + std::polar(rad + 1.5, 2 * std::numbers::pi * (k + 0.5) / 10));
        for (int k = 0; k < 10; ++k) zs.emplace_back(left + (right - left) * k / 9.0, k % 2 == 0 ? 1.0 : -1.0);
        auto cf = gamma_fraction_grid(m, zs, cfg.depth);
        auto st = stieltjes_grid(mu, zs);
        double residual = 0;
        for (std::size_t i = 0; i < zs.size(); ++i) residual = std::max(residual, std::abs(cf[i] - st[i]));
        const double mass_error = std::abs(mu.total_mass() - m.a0() * m.a0());
        ok = residual < tol && mass_error < 1e-8;
        report["stieltjes_check"] = {{"depth", cfg.depth},   {"points", zs.size()},     {"residual", residual},
                                     {"tol", tol},           {"mass_error", mass_error}, {"pass", ok}};
    }

    std::ostringstream csv;
    csv << "x,density\n";
    for (const auto& [lo, hi] : d.stable_bands)
        for (int s = 0; s <= 200; ++s) {
            const double x = lo + (hi - lo) * s / 200.0;
            csv << num(x) << "," << num(mu.density(x)) << "\n";
        }

    const std::string body = dump(report);
    std::vector<OutputFile> files{{"jacobi.json", body}, {"jacobi-density.csv", csv.str()}};
    if (cfg.plot) {
        std::string gp = "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\n"
                         "set ylabel 'density'\nplot 'jacobi-density.csv' using 1:2 with lines\n";
        files.push_back({"jacobi.gp", gp});
    }
    emit(cfg, body, csv.str(), files);
    return ok ? 0 : 1;
}

// ---- check -----------------------------------------------------------------

int cmd_check(const RunConfig& cfg) {
    if (cfg.tol && !(*cfg.tol > 0)) throw UsageError("--tol must be positive");
    AcceptanceOptions opt;
    opt.tol = cfg.tol;
    opt.seed = cfg.seed;
    opt.golden_dir = cfg.golden_dir;
    for (const auto& g : cfg.only) opt.only.insert(g);
    const auto results = run_acceptance(opt);

    json report;
    report["laxkit_report"] = 1;
    report["command"] = "check";
    report["tol"] = cfg.tol ? json(*cfg.tol) : json(nullptr);
    json rows = json::array();
    std::ostringstream csv;
    csv << "id,group,pass,seconds,detail\n";
    int failed = 0;
    for (const auto& r : results) {
        failed += !r.pass;
        // Timings vary between runs, so the report leaves them out.
        rows.push_back({{"id", r.id}, {"group", r.group}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
        csv << r.id << "," << r.group << "," << (r.pass ? "pass" : "fail") << "," << num(r.seconds) << ",\""
            << r.detail << "\"\n";
    }
    report["criteria"] = rows;
    report["failed"] = failed;

    if (!cfg.out_dir.empty()) write_all(cfg.out_dir, {{"check.json", dump(report)}});
    if (cfg.format == Format::csv) {
        std::cout << csv.str();
    } else {
        for (const auto& r : results) std::cout << format_result(r) << "\n";
        std::cout << results.size() << " criteria, " << failed << " failed\n";
    }
    return failed == 0 ? 0 : 1;
}

}  // namespace laxkit::cli
