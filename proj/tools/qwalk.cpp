// qwalk: command-line front end for the hypercube walk search.
//
//   qwalk spectrum --n 8 [--format csv|json] [--tol-eig 1e-9]
//   qwalk evolve   --n 4 --steps 10 [--target 0] [--backend full|collapsed] [--unperturbed]
//   qwalk search   --n 8 [--target 0] [--seed 0] [--trials 10000] [--backend collapsed|full]
//                  [--t-f-convention derived|stated] [--curve]
//   qwalk curve    --n 8 [--t-max 54] [--target 0] [--backend collapsed|full]
//   qwalk verify   --n-range 4..12 [--tol-eig 1e-9] [--seed 0]
//   qwalk compare  --n-range 4..12 [--format csv|json]
//
// Every subcommand also takes --out FILE and --config FILE (a JSON object whose keys are
// flag names; flags given on the command line win).
// Exit codes: 0 ok, 1 verification failure, 2 usage or capacity error, 3 numerical failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qwalk/collapsed.hpp"
#include "qwalk/format.hpp"
#include "qwalk/full_state.hpp"
#include "qwalk/search.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/verify.hpp"

namespace {

using qwalk::usage_error;

constexpr int exit_ok = 0;
constexpr int exit_verify = 1;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;

// Largest n accepted by compare; its walk column evolves 2n amplitudes for ~2^{n/2} steps.
constexpr int compare_max_n = 40;

struct NRange {
    int lo = 0;
    int hi = 0;
};

NRange parse_range(const std::string& text, int cap, bool even_only) {
    NRange r;
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            r.lo = r.hi = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
            r.lo = std::stoi(a, &used);
            if (used != a.size()) throw std::invalid_argument(text);
            r.hi = std::stoi(b, &used);
            if (used != b.size()) throw std::invalid_argument(text);
        }
    } catch (const std::logic_error&) {
        throw usage_error("--n-range: expected a..b, got '" + text + "'");
    }
    if (r.lo < 2 || r.lo > r.hi || r.hi > cap)
        throw usage_error("--n-range: need 2 <= a <= b <= " + std::to_string(cap) + ", got " + text);
    if (even_only && (r.lo % 2 != 0 || r.hi % 2 != 0))
        throw usage_error("--n-range: verify runs on even n only, got " + text);
    return r;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw usage_error("cannot open output file " + out_path);
    f << text;
    if (!f) throw usage_error("failed writing " + out_path);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Flags preloaded from --config, as argv tokens.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw usage_error("cannot read config file " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw usage_error("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw usage_error("config file " + path + ": expected a JSON object");
    std::vector<std::string> out;
    for (const auto& [key, value] : j.items()) {
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back(flag);
        } else if (value.is_number_integer() || value.is_number_unsigned()) {
            out.push_back(flag);
            out.push_back(value.dump());
        } else if (value.is_number_float()) {
            out.push_back(flag);
            out.push_back(qwalk::format_double(value.get<double>()));
        } else if (value.is_string()) {
            out.push_back(flag);
            out.push_back(value.get<std::string>());
        } else {
            throw usage_error("config file " + path + ": unsupported value for '" + key + "'");
        }
    }
    return out;
}

// Inserts config-file flags right after the subcommand name so that anything given on the
// command line comes later and wins under TakeLast. Drops --config itself.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw usage_error("--config needs a file name");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty() || rest.empty()) return rest;
    const auto extra = config_tokens(path);
    rest.insert(rest.begin() + 1, extra.begin(), extra.end());
    return rest;
}

struct Options {
    int n = 0;
    std::string n_range;
    std::string format = "csv";
    double tol_eig = qwalk::default_tol_eig;
    long long steps = 0;
    std::uint64_t target = 0;
    std::uint64_t seed = 0;
    std::size_t trials = 10000;
    qwalk::Backend backend = qwalk::Backend::Collapsed;
    qwalk::Backend evolve_backend = qwalk::Backend::Full;
    qwalk::TfConvention convention = qwalk::TfConvention::Derived;
    bool curve = false;
    bool unperturbed = false;
    long long t_max = 0;
    std::string out;
};

qwalk::WalkConfig walk_config(const Options& o) {
    qwalk::WalkConfig cfg;
    cfg.n = o.n;
    cfg.target = o.target;
    cfg.seed = o.seed;
    return cfg;
}

int cmd_spectrum(const Options& o) {
    if (o.n < 2 || o.n > qwalk::dense_operator_max_n)
        throw usage_error("spectrum: n must lie in [2, " + std::to_string(qwalk::dense_operator_max_n) + "]");
    std::ostringstream csv;
    csv << "#schema=qwalk-spectrum/1\nn,operator,re,im,residual,on_arc\n";
    auto records = nlohmann::json::array();
    for (bool perturbed : {false, true}) {
        const char* name = perturbed ? "Uprime" : "U";
        const auto op = qwalk::build_collapsed_unitary(o.n, perturbed, qwalk::OperatorStorage::Dense);
        const auto spec = qwalk::eigendecompose(op.to_dense(), o.tol_eig, std::string("collapsed ") + name);
        for (const auto& p : spec) {
            const bool arc = qwalk::on_arc(p.value, o.n);
            csv << o.n << ',' << name << ',' << qwalk::format_double(p.value.real()) << ','
                << qwalk::format_double(p.value.imag()) << ',' << qwalk::format_double(p.residual) << ','
                << (arc ? "true" : "false") << '\n';
            records.push_back({{"n", o.n},
                               {"operator", name},
                               {"re", p.value.real()},
                               {"im", p.value.imag()},
                               {"residual", p.residual},
                               {"on_arc", arc}});
        }
    }
    emit(o.format == "json" ? dump(records) : csv.str(), o.out);
    return exit_ok;
}

int cmd_evolve(const Options& o) {
    const auto cfg = walk_config(o);
    cfg.validate();
    if (o.steps < 0) throw usage_error("evolve: --steps must be >= 0");
    nlohmann::json j{{"n", o.n},
                     {"steps", o.steps},
                     {"target", o.target},
                     {"backend", qwalk::to_string(o.evolve_backend)},
                     {"perturbed", !o.unperturbed}};
    if (o.evolve_backend == qwalk::Backend::Full) {
        qwalk::require_full_capacity(o.n);
        j["state"] = qwalk::evolve(qwalk::uniform_state(o.n), cfg, o.steps, !o.unperturbed);
    } else {
        const auto op = qwalk::build_collapsed_unitary(o.n, !o.unperturbed);
        j["state"] = qwalk::collapsed_evolve(qwalk::collapsed_initial_state(o.n), op, o.steps);
    }
    emit(dump(j), o.out);
    return exit_ok;
}

int cmd_search(const Options& o) {
    const auto outcome = qwalk::run_search(walk_config(o), o.backend, o.trials, o.convention, o.curve);
    emit(dump(outcome), o.out);
    return exit_ok;
}

int cmd_curve(const Options& o) {
    const auto cfg = walk_config(o);
    const long long t_max = o.t_max > 0 ? o.t_max : 3 * qwalk::t_final(o.n);
    const auto curve = qwalk::probability_curve(cfg, t_max, o.backend);
    std::ostringstream csv;
    csv << "#schema=qwalk-curve/1\nt,p_target\n";
    for (const auto& pt : curve) csv << pt.t << ',' << qwalk::format_double(pt.p_target) << '\n';
    emit(csv.str(), o.out);
    return exit_ok;
}

int cmd_verify(const Options& o) {
    const auto range = parse_range(o.n_range, qwalk::dense_operator_max_n, true);
    qwalk::VerifyOptions vo;
    vo.tol_eig = o.tol_eig;
    vo.seed = o.seed;
    const auto report = qwalk::verify_range(range.lo, range.hi, vo);
    emit(dump(report), o.out);
    if (report.passed()) return exit_ok;
    for (const auto& r : report.results)
        for (const auto& c : r.checks)
            if (!c.ok())
                std::cerr << "verify: n = " << c.n << ": " << c.name << " failed (measured "
                          << qwalk::format_double(c.measured) << ", bound " << qwalk::format_double(c.bound) << ")\n";
    return exit_verify;
}

int cmd_compare(const Options& o) {
    const auto range = parse_range(o.n_range, compare_max_n, false);
    std::ostringstream csv;
    csv << "#schema=qwalk-compare/1\nn,t_f_walk,p_walk,iters_grover,p_grover\n";
    auto rows = nlohmann::json::array();
    for (int n = range.lo; n <= range.hi; ++n) {
        qwalk::WalkConfig cfg;
        cfg.n = n;
        const long long tf = qwalk::t_final(n);
        const double p_walk = qwalk::probability_curve(cfg, tf, qwalk::Backend::Collapsed).back().p_target;
        const auto g = qwalk::grover_reference(n);
        csv << n << ',' << tf << ',' << qwalk::format_double(p_walk) << ',' << g.iterations << ','
            << qwalk::format_double(g.p_success) << '\n';
        rows.push_back({{"n", n},
                        {"t_f_walk", tf},
                        {"p_walk", p_walk},
                        {"iters_grover", g.iterations},
                        {"p_grover", g.p_success}});
    }
    emit(o.format == "json" ? dump(rows) : csv.str(), o.out);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum random-walk search on the hypercube"};
    app.require_subcommand(1);
    app.footer("All subcommands accept --config FILE: a JSON object of flag names to values.");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Options o;
    const std::map<std::string, qwalk::Backend> backends{{"full", qwalk::Backend::Full},
                                                         {"collapsed", qwalk::Backend::Collapsed}};
    const std::map<std::string, qwalk::TfConvention> conventions{{"derived", qwalk::TfConvention::Derived},
                                                                 {"stated", qwalk::TfConvention::Stated}};

    auto add_common = [&](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--out", o.out, "Write output to this file instead of stdout");
    };
    auto add_n = [&](CLI::App* sub) { sub->add_option("--n", o.n, "Hypercube dimension")->required(); };
    auto add_backend = [&](CLI::App* sub, qwalk::Backend& target) {
        sub->add_option("--backend", target, "full or collapsed")
            ->transform(CLI::CheckedTransformer(backends, CLI::ignore_case));
    };
    auto add_flag = [](CLI::App* sub, const std::string& name, bool& target, const std::string& help) {
        sub->add_flag(name, target, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the collapsed U and U'");
    add_n(spectrum);
    spectrum->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    spectrum->add_option("--tol-eig", o.tol_eig, "Eigensolver residual tolerance");
    add_common(spectrum);

    auto* evolve = app.add_subcommand("evolve", "State after a number of walk steps");
    add_n(evolve);
    evolve->add_option("--steps", o.steps, "Number of steps")->required();
    evolve->add_option("--target", o.target, "Marked node");
    add_backend(evolve, o.evolve_backend);
    add_flag(evolve, "--unperturbed", o.unperturbed, "Use U instead of U'");
    add_common(evolve);

    auto* search = app.add_subcommand("search", "Run the search and sample measurements");
    add_n(search);
    search->add_option("--target", o.target, "Marked node");
    search->add_option("--seed", o.seed, "Sampling seed");
    search->add_option("--trials", o.trials, "Number of sampled measurements");
    add_backend(search, o.backend);
    search->add_option("--t-f-convention", o.convention, "derived or stated")
        ->transform(CLI::CheckedTransformer(conventions, CLI::ignore_case));
    add_flag(search, "--curve", o.curve, "Include P(target) for every step");
    add_common(search);

    auto* curve = app.add_subcommand("curve", "P(target) against the number of steps");
    add_n(curve);
    curve->add_option("--t-max", o.t_max, "Last step (default 3 t_f)");
    curve->add_option("--target", o.target, "Marked node");
    add_backend(curve, o.backend);
    add_common(curve);

    auto* verify = app.add_subcommand("verify", "Run the invariant checks over a range of even n");
    verify->add_option("--n-range", o.n_range, "a..b")->required();
    verify->add_option("--tol-eig", o.tol_eig, "Eigensolver residual tolerance");
    verify->add_option("--seed", o.seed, "Seed for the random states of the commutation check");
    add_common(verify);

    auto* compare = app.add_subcommand("compare", "Walk search against Grover's algorithm");
    compare->add_option("--n-range", o.n_range, "a..b")->required();
    compare->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_common(compare);

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    } catch (const usage_error& e) {
        std::cerr << "qwalk: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(o);
        if (evolve->parsed()) return cmd_evolve(o);
        if (search->parsed()) return cmd_search(o);
        if (curve->parsed()) return cmd_curve(o);
        if (verify->parsed()) return cmd_verify(o);
        if (compare->parsed()) return cmd_compare(o);
    } catch (const usage_error& e) {
        std::cerr << "qwalk: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::bad_alloc&) {
        std::cerr << "qwalk: out of memory; lower n or QWALK_MAX_N\n";
        return exit_usage;
    } catch (const qwalk::numerical_error& e) {
        std::cerr << "qwalk: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "qwalk: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}
