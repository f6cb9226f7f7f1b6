// heunflow: command-line front end.
//
//   heunflow spectrum --u 0 --m 0 --levels 3 [--method auto|matrix|ode] [--model flow|sausage]
//   heunflow series   --m 0 --n 0 --order 10 --var lambda [--target kappa|two_q]
//   heunflow tba      --N 5 --mr-min 1e-8 --mr-max 1e3 --points 40 [--source flow|sausage]
//   heunflow match    --N 23 --points 30
//   heunflow asympt   --m 0 --n 0 --u 10 | --bound-states --m 10 | --coeffs --N 11
//
// Exit status: 0 ok, 2 usage or domain error, 3 numerical non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "heunflow/heunflow.hpp"

namespace hf = heunflow;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Appends config entries not already given as flags; flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    const auto original = args;
    for (const auto& [key, value] : read_config(path)) {
        if (key == "config" || given_on_command_line(original, key)) continue;
        if (value == "true") {
            args.push_back("--" + key);
        } else if (value != "false") {
            args.push_back("--" + key);
            args.push_back(value);
        }
    }
    return args;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw UsageError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct SpectrumArgs {
    double u = 0.0;
    int m = 0;
    int levels = 1;
    std::string method = "auto";
    std::string model = "flow";
    double tol = 1e-10;
    double h = 0.02;
    double L = 0.0;
    std::string densities;
};

hf::SpectralResult run_spectrum(const SpectrumArgs& a) {
    const bool sausage = a.model == "sausage";
    std::string method = a.method;
    if (method == "auto") method = a.u <= hf::kMatrixUvLimit ? "matrix" : "ode";
    const auto nlev = static_cast<std::size_t>(a.levels);
    if (method == "matrix")
        return sausage ? hf::spectrum_sausage_matrix(a.u, a.m, nlev, a.tol) : hf::spectrum_matrix(a.u, a.m, nlev, a.tol);
    hf::OdeOptions opt;
    opt.h = a.h;
    opt.L = a.L;
    opt.densities = !a.densities.empty();
    const hf::OdeSpectrum s =
        sausage ? hf::solve_sausage_ode_spectrum(a.u, a.m, nlev, opt) : hf::solve_ode_spectrum_full(a.u, a.m, nlev, opt);
    for (std::size_t i = 0; i < s.densities.size(); ++i) {
        const std::string path = a.densities + "_" + std::to_string(i) + ".csv";
        std::ofstream f(path);
        if (!f) throw UsageError("cannot open density file '" + path + "'");
        hf::write_density_csv(f, s.densities[i]);
    }
    return s.result;
}

struct SeriesArgs {
    int m = 0;
    int n = 0;
    int order = 10;
    std::string var = "lambda";
    std::string target;  // empty: kappa for lambda, two_q for epsilon
};

hf::RationalSeries run_series(const SeriesArgs& a) {
    const hf::Variable var = a.var == "lambda" ? hf::Variable::lambda : hf::Variable::epsilon;
    std::string target = a.target;
    if (target.empty()) target = var == hf::Variable::lambda ? "kappa" : "two_q";
    if (target == "kappa") return hf::kappa_series(a.m, a.n, a.order, var);
    hf::RationalSeries s = hf::rs_expand(a.m, a.n, a.order);
    return var == hf::Variable::lambda ? hf::reexpand_lambda(s) : s;
}

struct TbaArgs {
    int N = 5;
    double mr_min = 1e-8;
    double mr_max = 1e3;
    int points = 40;
    std::string source = "flow";
    double tol = 1e-12;
    std::string dump;  // pseudo-energies at every MR: <dump>_<index>.csv
    bool no_kernel = false;
};

void check_n(int N) {
    if (N < 4) throw UsageError("--N must be >= 4: the extended D_N diagram needs at least one interior chain node");
}

std::vector<double> mr_list(double lo, double hi, int points) {
    if (!(lo > 0.0 && hi > lo)) throw UsageError("need 0 < --mr-min < --mr-max");
    if (points < 2) throw UsageError("--points must be >= 2");
    return hf::log_spaced(lo, hi, static_cast<std::size_t>(points));
}

hf::FlowCurve run_tba(const TbaArgs& a) {
    check_n(a.N);
    const auto mrs = mr_list(a.mr_min, a.mr_max, a.points);
    const auto src = a.source == "flow" ? hf::Source::massless_flow : hf::Source::massive_sausage;
    hf::TbaOptions opt;
    opt.tol = a.tol;
    opt.kernel = !a.no_kernel;
    if (a.dump.empty()) return hf::central_charge_curve(a.N, mrs, src, opt);

    // Same sweep as central_charge_curve, keeping each solution for the dump.
    opt.grid = hf::curve_grid(a.N, mrs);
    hf::FlowCurve curve;
    curve.N = a.N;
    curve.points.resize(mrs.size());
    std::vector<std::vector<double>> warm;
    for (std::size_t k = mrs.size(); k-- > 0;) {
        hf::TbaOptions o = opt;
        if (!warm.empty()) o.initial = &warm;
        hf::TbaSolution s = hf::solve_tba(a.N, mrs[k], src, o);
        curve.points[k] = {mrs[k], s.c, s.iterations, s.residual};
        const std::string path = a.dump + "_" + std::to_string(k) + ".csv";
        std::ofstream f(path);
        if (!f) throw UsageError("cannot open dump file '" + path + "'");
        hf::write_pseudo_energies(f, s);
        warm = std::move(s.eps);
    }
    return curve;
}

struct MatchArgs {
    int N = 23;
    int points = 30;
    double mr_min = 1e-8;
    double mr_max = 1e3;
};

struct AsymptArgs {
    int m = 0;
    int n = 0;
    double u = 0.0;
    int N = 0;
    bool bound_states = false;
    bool coeffs = false;
};

json run_asympt(const AsymptArgs& a, const CLI::App& sub) {
    json j;
    if (a.bound_states) {
        j["m"] = a.m;
        j["bound_states"] = hf::bound_state_levels(a.m);
        j["units"] = "kappa/6";
        j["threshold"] = hf::continuum_threshold(a.m);
        return j;
    }
    if (a.coeffs) {
        if (sub.count("--N") == 0) throw UsageError("--coeffs needs --N");
        const int N = a.N;
        const hf::IrSeriesReport r = hf::ir_series_compare(N);
        j["N"] = N;
        j["b2"] = hf::b2(N);
        j["b3"] = hf::b3(N);
        j["b2_limit"] = 1.0 / (N + 2.0);
        j["b3_limit"] = -1.5 / (N + 2.0);
        j["scaled_b2"] = r.B2;
        j["scaled_b3"] = r.B3;
        j["lambda2"] = r.lambda2;
        j["lambda3"] = r.lambda3;
        j["kappa0_lambda2"] = r.kappa_lambda2;
        j["kappa0_lambda3"] = r.kappa_lambda3;
        j["c_ir"] = 2.0 - 6.0 / (N + 2.0);
        return j;
    }
    if (sub.count("--u") == 0) throw UsageError("asympt needs --u (or --bound-states / --coeffs)");
    j["u"] = a.u;
    j["m"] = a.m;
    j["n"] = a.n;
    j["r_m"] = hf::uv_shift(a.m);
    if (2 * a.n >= a.m - 1 && a.u + hf::uv_shift(a.m) > 0.0) j["uv_flow"] = hf::uv_level_flow(a.u, a.m, a.n);
    else j["uv_flow"] = nullptr;
    if (a.u + hf::uv_shift(a.m) > 0.0) j["uv_sausage"] = hf::uv_level_sausage(a.u, a.m, a.n);
    else j["uv_sausage"] = nullptr;
    j["ir"] = hf::ir_spectrum(a.m, a.n + 1).back();
    return j;
}

int run(std::vector<std::string> args) {
    CLI::App app{"Scaling functions, TBA central charge and their matching"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 0;
    std::string output;
    std::string config;
    app.add_option("--threads", threads, "worker threads (HEUNFLOW_THREADS overrides)");
    app.add_option("-o,--output", output, "output file (default stdout)");
    app.add_option("--config", config, "key=value file; command-line flags take precedence");

    const auto positive_int = CLI::PositiveNumber;

    SpectrumArgs sa;
    auto* spectrum = app.add_subcommand("spectrum", "levels kappa_{m,n}(u)");
    spectrum->add_option("--u", sa.u, "coupling u")->required();
    spectrum->add_option("--m", sa.m, "charge m")->check(CLI::NonNegativeNumber);
    spectrum->add_option("--levels", sa.levels, "number of levels")->check(positive_int);
    spectrum->add_option("--method", sa.method)->check(CLI::IsMember({"auto", "matrix", "ode"}));
    spectrum->add_option("--model", sa.model)->check(CLI::IsMember({"flow", "sausage"}));
    spectrum->add_option("--tol", sa.tol, "matrix: dimension-doubling tolerance")->check(CLI::PositiveNumber);
    spectrum->add_option("--step", sa.h, "ode: coarse grid step")->check(CLI::PositiveNumber);
    spectrum->add_option("--window", sa.L, "ode: half-window L (0 = automatic)")->check(CLI::NonNegativeNumber);
    spectrum->add_option("--densities", sa.densities, "ode: write <prefix>_<index>.csv density files");

    SeriesArgs se;
    auto* series = app.add_subcommand("series", "exact perturbative series");
    series->add_option("--m", se.m)->check(CLI::NonNegativeNumber);
    series->add_option("--n", se.n)->check(CLI::NonNegativeNumber);
    series->add_option("--order", se.order)->check(positive_int);
    series->add_option("--var", se.var)->check(CLI::IsMember({"lambda", "epsilon"}));
    series->add_option("--target", se.target, "kappa or two_q (2q-m-1)")->check(CLI::IsMember({"kappa", "two_q"}));

    TbaArgs ta;
    auto* tba = app.add_subcommand("tba", "effective central charge along a log-spaced MR curve");
    tba->add_option("--N", ta.N)->required();
    tba->add_option("--mr-min", ta.mr_min);
    tba->add_option("--mr-max", ta.mr_max);
    tba->add_option("--points", ta.points);
    tba->add_option("--source", ta.source)->check(CLI::IsMember({"flow", "sausage"}));
    tba->add_option("--tol", ta.tol)->check(CLI::PositiveNumber);
    tba->add_option("--dump", ta.dump, "write pseudo-energies to <prefix>_<index>.csv");
    tba->add_flag("--no-kernel", ta.no_kernel, "decouple the nodes");

    MatchArgs ma;
    auto* match = app.add_subcommand("match", "(N+2)(2-c) against kappa_0(u)");
    match->add_option("--N", ma.N)->required();
    match->add_option("--points", ma.points);
    match->add_option("--mr-min", ma.mr_min);
    match->add_option("--mr-max", ma.mr_max);

    AsymptArgs aa;
    auto* asympt = app.add_subcommand("asympt", "closed-form asymptotics as JSON");
    asympt->add_option("--m", aa.m)->check(CLI::NonNegativeNumber);
    asympt->add_option("--n", aa.n)->check(CLI::NonNegativeNumber);
    asympt->add_option("--u", aa.u);
    asympt->add_option("--N", aa.N);
    asympt->add_flag("--bound-states", aa.bound_states);
    asympt->add_flag("--coeffs", aa.coeffs);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Output out(output);
    std::ostream& os = out.stream();
    if (*spectrum) {
        hf::write_spectrum_csv(os, {run_spectrum(sa)});
    } else if (*series) {
        hf::write_series(os, run_series(se));
    } else if (*tba) {
        hf::write_tba_csv(os, run_tba(ta));
    } else if (*match) {
        check_n(ma.N);
        hf::MatchOptions opt;
        opt.threads = hf::resolve_threads(threads);
        hf::write_match_csv(os, hf::match_curve(ma.N, mr_list(ma.mr_min, ma.mr_max, ma.points), opt));
    } else if (*asympt) {
        os << run_asympt(aa, *asympt).dump(2) << '\n';
    }
    os.flush();
    if (!os) throw UsageError("write failed");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(merge_config(std::vector<std::string>(argv + 1, argv + argc)));
    } catch (const UsageError& e) {
        std::cerr << "heunflow: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hf::DomainError& e) {
        std::cerr << "heunflow: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hf::ConvergenceError& e) {
        std::cerr << "heunflow: no convergence: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "heunflow: " << e.what() << '\n';
        return 1;
    }
}
