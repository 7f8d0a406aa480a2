// Command-line front end: build Appell systems, run the verification battery,
// and export operator-symbol grids, all driven by a single JSON config.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "appell/appell.hpp"
#include "appell/serialization.hpp"
#include "appell/verify.hpp"

namespace fs = std::filesystem;
using namespace appell;
using nlohmann::json;

namespace {

struct CliError {
    std::string message;
};

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw CliError{"cannot open file: " + path.string()};
    std::stringstream buf;
    buf << in.rdbuf();
    return jsonio::parse(buf.str());
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{"cannot write file: " + path.string()};
    out << content;
}

struct Config {
    int d = 1;
    int N = 8;
    HilbertScale scale;
    ProductMeasure measure{{ComponentMeasure::gaussian(0, 1)}};
    std::optional<ProductMeasure> measure_out;
    int p = 1;
    int q = 1;
    VectorC eta;
    unsigned seed = 20240801;
    std::map<std::string, double> tolerances;
    std::vector<std::pair<int, int>> views;
    std::string out_dir = ".";
    json raw;
};

Config parse_config(const json& j) {
    Config cfg;
    if (!j.contains("measure")) throw CliError{"config: missing required field 'measure'"};
    cfg.measure = jsonio::measure_from_json(j.at("measure"));
    cfg.d = cfg.measure.dim();
    if (j.contains("d") && j.at("d").get<int>() != cfg.d)
        throw CliError{"config: 'd' does not match the number of measure components"};
    cfg.N = j.value("N", 8);
    if (cfg.d < 1) throw CliError{"config: d must be >= 1"};
    if (cfg.N < 0) throw CliError{"config: N must be >= 0"};
    cfg.scale = j.contains("weights") ? HilbertScale(j.at("weights").get<std::vector<double>>())
                                      : HilbertScale::standard(cfg.d);
    if (cfg.scale.dim() != cfg.d) throw CliError{"config: weights length must equal d"};
    if (j.contains("measure_out")) {
        cfg.measure_out = jsonio::measure_from_json(j.at("measure_out"));
        if (cfg.measure_out->dim() != cfg.d) throw CliError{"config: measure_out dimension mismatch"};
    }
    cfg.p = j.value("p", 1);
    cfg.q = j.value("q", 1);
    cfg.seed = j.value("seed", 20240801u);
    cfg.eta.assign(static_cast<size_t>(cfg.d), Complex(0.35));
    if (j.contains("eta")) {
        const auto e = j.at("eta").get<std::vector<double>>();
        if (static_cast<int>(e.size()) != cfg.d) throw CliError{"config: eta length must equal d"};
        for (int i = 0; i < cfg.d; ++i) cfg.eta[static_cast<size_t>(i)] = e[static_cast<size_t>(i)];
    }
    if (j.contains("tolerances"))
        for (const auto& [k, v] : j.at("tolerances").items()) {
            const double tol = v.get<double>();
            if (!(tol > 0.0)) throw CliError{"config: tolerances must be positive"};
            cfg.tolerances[k] = tol;
        }
    if (j.contains("views")) {
        for (const auto& vj : j.at("views"))
            cfg.views.emplace_back(vj.at("p").get<int>(), vj.at("q").get<int>());
        if (cfg.views.empty()) throw CliError{"config: views must not be empty when given"};
    } else {
        cfg.views.emplace_back(cfg.p, cfg.q);
    }
    cfg.out_dir = j.value("out", ".");
    cfg.raw = j;
    return cfg;
}

int thread_cap() {
    const char* env = std::getenv("APPELL_THREADS");
    if (!env) return 1;
    try {
        const int n = std::stoi(env);
        if (n < 1) throw CliError{"APPELL_THREADS must be a positive integer"};
        return n;
    } catch (const CliError&) {
        throw;
    } catch (...) {
        throw CliError{"APPELL_THREADS must be a positive integer"};
    }
}

// ---------------------------------------------------------------------------
// gen: emit the P-kernel tables and the reciprocal Laplace series
// ---------------------------------------------------------------------------

int cmd_gen(const Config& cfg, const fs::path& out_dir) {
    SystemPtr sys;
    try {
        sys = AppellSystem::build(cfg.measure, cfg.N, cfg.scale);
    } catch (const DegenerateMeasureError& e) {
        std::cerr << "error: non-degeneracy check failed: " << e.what() << "\n";
        return 2;
    }

    std::string s = "{\n";
    s += "  \"d\": " + std::to_string(cfg.d) + ",\n";
    s += "  \"N\": " + std::to_string(cfg.N) + ",\n";
    s += "  \"weights\": [";
    for (int i = 0; i < cfg.d; ++i) {
        if (i) s += ", ";
        s += jsonio::fmt(cfg.scale.lambda[static_cast<size_t>(i)]);
    }
    s += "],\n";
    s += "  \"measure\": " + jsonio::measure_to_json(cfg.measure) + ",\n";

    s += "  \"reciprocal_series\": [";
    const PowerSeries& recip = sys->reciprocal_series();
    bool first = true;
    for (int f = 0; f < recip.layout().size(); ++f) {
        if (recip[f] == Complex(0.0)) continue;
        if (!first) s += ",";
        first = false;
        s += "\n    {\"alpha\": " + jsonio::fmt(recip.layout().at(f)) +
             ", \"value\": " + jsonio::fmt(recip[f]) + "}";
    }
    s += first ? "]," : "\n  ],";
    s += "\n  \"p_kernels\": [";
    for (int n = 0; n <= cfg.N; ++n) {
        if (n) s += ",";
        s += "\n    {\"n\": " + std::to_string(n) + ", \"rows\": [";
        const auto& level = sys->layout().level(n);
        for (int rg = 0; rg < level.size(); ++rg) {
            if (rg) s += ",";
            s += "\n      {\"gamma\": " + jsonio::fmt(level[rg]) + ", \"entries\": [";
            bool fe = true;
            for (int fa = 0; fa < sys->prefix_size(n); ++fa) {
                const double k = sys->kernel_entry(n, rg, fa);
                if (k == 0.0) continue;
                if (!fe) s += ", ";
                fe = false;
                s += "{\"alpha\": " + jsonio::fmt(sys->layout().at(fa)) + ", \"value\": " + jsonio::fmt(k) + "}";
            }
            s += "]}";
        }
        s += "\n    ]}";
    }
    s += "\n  ]\n}\n";

    write_file(out_dir / "appell_system.json", s);
    std::cout << "wrote " << (out_dir / "appell_system.json").string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify: run the battery per (p,q) view, emit a machine-readable report
// ---------------------------------------------------------------------------

int cmd_verify(const Config& cfg, const fs::path& out_dir) {
    std::vector<verify::VerifyConfig> vcfgs;
    for (const auto& [p, q] : cfg.views) {
        verify::VerifyConfig v(cfg.measure, cfg.N);
        v.measure_out = cfg.measure_out;
        v.scale = cfg.scale;
        v.p = p;
        v.q = q;
        v.eta = cfg.eta;
        v.seed = cfg.seed;
        v.tolerances = cfg.tolerances;
        vcfgs.push_back(std::move(v));
    }

    const int workers = std::min<int>(thread_cap(), static_cast<int>(vcfgs.size()));
    std::vector<std::vector<verify::CheckResult>> results(vcfgs.size());
    if (workers <= 1) {
        for (size_t i = 0; i < vcfgs.size(); ++i) results[i] = verify::run_verification(vcfgs[i]);
    } else {
        std::vector<std::future<std::vector<verify::CheckResult>>> futs;
        futs.reserve(vcfgs.size());
        for (const auto& v : vcfgs)
            futs.push_back(std::async(std::launch::async, [&v] { return verify::run_verification(v); }));
        for (size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
    }

    bool all_pass = true;
    std::string rep = "{\n  \"views\": [";
    for (size_t i = 0; i < results.size(); ++i) {
        if (i) rep += ",";
        rep += "\n    {\"p\": " + std::to_string(cfg.views[i].first) +
               ", \"q\": " + std::to_string(cfg.views[i].second) + ", \"checks\": [";
        bool view_pass = true;
        for (size_t k = 0; k < results[i].size(); ++k) {
            const auto& c = results[i][k];
            if (k) rep += ",";
            rep += "\n      {\"name\": \"" + c.name + "\"";
            if (c.skipped) {
                rep += ", \"status\": \"skipped\", \"note\": \"" + c.note + "\"}";
            } else {
                rep += ", \"status\": \"" + std::string(c.pass ? "pass" : "fail") + "\"";
                rep += ", \"max_deviation\": " + jsonio::fmt(c.deviation);
                rep += ", \"tolerance\": " + jsonio::fmt(c.tolerance);
                if (!c.note.empty()) rep += ", \"note\": \"" + c.note + "\"";
                rep += "}";
            }
            view_pass = view_pass && c.pass;
            const char* tag = c.skipped ? "skip" : (c.pass ? "pass" : "FAIL");
            std::cout << "[" << tag << "] p=" << cfg.views[i].first << " q=" << cfg.views[i].second << " "
                      << c.name;
            if (c.skipped)
                std::cout << " (" << c.note << ")";
            else
                std::cout << " deviation=" << jsonio::fmt(c.deviation)
                          << " tolerance=" << jsonio::fmt(c.tolerance);
            std::cout << "\n";
        }
        rep += "\n    ], \"all_pass\": " + std::string(view_pass ? "true" : "false") + "}";
        all_pass = all_pass && view_pass;
    }
    rep += "\n  ],\n  \"all_pass\": " + std::string(all_pass ? "true" : "false") + "\n}\n";

    write_file(out_dir / "verify_report.json", rep);
    std::cout << (all_pass ? "verification passed" : "verification FAILED") << "\n";
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// symbol: evaluate a CS-symbol on a grid; optionally reconstruct the kernel
// from point values and report the round-trip deviation
// ---------------------------------------------------------------------------

VectorC json_to_vector(const json& j, int d, const char* what) {
    const auto v = j.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != d) throw CliError{std::string("config: ") + what + " length must equal d"};
    VectorC out(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
    return out;
}

OperatorKernel load_operator(const Config& cfg, const json& sj, const SystemPtr& sys_in,
                             const SystemPtr& sys_out) {
    const auto& oj = sj.at("operator");
    if (oj.is_string()) {
        const std::string name = oj.get<std::string>();
        if (name == "measure_change") return measure_change_operator(sys_in, sys_out);
        if (name == "identity") return measure_change_operator(sys_in, sys_in);
        if (name == "zero") return OperatorKernel(sys_in, sys_out);
        throw CliError{"config: unknown builtin operator '" + name + "'"};
    }
    if (oj.is_object() && oj.contains("file")) {
        return jsonio::kernel_from_json(load_json_file(oj.at("file").get<std::string>()));
    }
    if (oj.is_object() && oj.contains("d_operator")) {
        const auto& dj = oj.at("d_operator");
        const int k = dj.at("degree").get<int>();
        SymTensor phi(cfg.d, k);
        for (const auto& ej : dj.at("coeffs")) {
            const MultiIndex alpha(ej.at("alpha").get<std::vector<int>>());
            if (alpha.dim() != cfg.d || alpha.degree() != k)
                throw CliError{"config: d_operator coefficient index has wrong shape"};
            phi[phi.set().rank(alpha)] = jsonio::complex_from_json(ej.at("value"));
        }
        return d_operator(sys_in, phi);
    }
    throw CliError{"config: operator must be a builtin name, {\"file\": ...} or {\"d_operator\": ...}"};
}

int cmd_symbol(const Config& cfg, const fs::path& out_dir) {
    if (!cfg.raw.contains("symbol")) throw CliError{"config: missing 'symbol' section"};
    const json& sj = cfg.raw.at("symbol");

    const SystemPtr sys_in = AppellSystem::build(cfg.measure, cfg.N, cfg.scale);
    const SystemPtr sys_out =
        cfg.measure_out ? AppellSystem::build(*cfg.measure_out, cfg.N, cfg.scale) : sys_in;
    const OperatorKernel B = load_operator(cfg, sj, sys_in, sys_out);

    VectorC xi_dir(static_cast<size_t>(cfg.d), Complex(0.0));
    VectorC eta_dir = xi_dir;
    xi_dir[0] = 1.0;
    eta_dir[0] = 1.0;
    if (sj.contains("xi_dir")) xi_dir = json_to_vector(sj.at("xi_dir"), cfg.d, "xi_dir");
    if (sj.contains("eta_dir")) eta_dir = json_to_vector(sj.at("eta_dir"), cfg.d, "eta_dir");

    auto range = [&](const char* key) {
        double lo = -1.0, hi = 1.0;
        int count = 21;
        if (sj.contains(key)) {
            lo = sj.at(key).value("min", -1.0);
            hi = sj.at(key).value("max", 1.0);
            count = sj.at(key).value("count", 21);
            if (count < 1) throw CliError{"config: grid count must be >= 1"};
        }
        std::vector<double> ts(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i)
            ts[static_cast<size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        return ts;
    };
    const auto xi_ts = range("xi_range");
    const auto eta_ts = range("eta_range");

    std::string csv = "xi_t,eta_t,re,im\n";
    for (double s : xi_ts)
        for (double t : eta_ts) {
            VectorC xi = xi_dir, eta = eta_dir;
            for (auto& c : xi) c *= s;
            for (auto& c : eta) c *= t;
            const Complex v = cs_symbol(B, xi, eta);
            csv += jsonio::fmt(s) + "," + jsonio::fmt(t) + "," + jsonio::fmt(v.real()) + "," +
                   jsonio::fmt(v.imag()) + "\n";
        }
    write_file(out_dir / "symbol_grid.csv", csv);
    std::cout << "wrote " << (out_dir / "symbol_grid.csv").string() << "\n";

    if (sj.value("reconstruct", false)) {
        BlackboxOptions opt;
        opt.max_degree = sj.value("max_degree", std::min(cfg.N, 4));
        opt.delta = sj.value("delta", 0.5);
        opt.epsilon = sj.value("epsilon", 1.0);
        if (opt.max_degree > cfg.N) throw CliError{"config: reconstruction degree exceeds N"};
        const OperatorKernel back = reconstruct_blackbox(
            [&](std::span<const Complex> xi, std::span<const Complex> eta) { return cs_symbol(B, xi, eta); },
            sys_in, sys_out, opt);

        double dev = 0.0;
        for (int m = 0; m <= opt.max_degree; ++m)
            for (int n = 0; n <= opt.max_degree; ++n) {
                const BiSymTensor* fb = B.block(m, n);
                const BiSymTensor* fr = back.block(m, n);
                if (!fb && !fr) continue;
                const auto& gset = (fb ? fb : fr)->out_set();
                const auto& dset = (fb ? fb : fr)->in_set();
                for (int rg = 0; rg < gset.size(); ++rg)
                    for (int rd = 0; rd < dset.size(); ++rd) {
                        const Complex vb = fb ? (*fb)(rg, rd) : Complex(0.0);
                        const Complex vr = fr ? (*fr)(rg, rd) : Complex(0.0);
                        dev = std::max(dev, std::abs(vb - vr) / std::max(1.0, std::abs(vb)));
                    }
            }
        std::string rj = "{\n  \"round_trip_max_rel_dev\": " + jsonio::fmt(dev) + ",\n  \"kernel\": ";
        std::string kj = jsonio::kernel_to_json(back);
        // indent the nested document by two spaces
        std::string indented;
        for (char c : kj) {
            indented += c;
            if (c == '\n') indented += "  ";
        }
        while (!indented.empty() && (indented.back() == ' ' || indented.back() == '\n')) indented.pop_back();
        rj += indented + "\n}\n";
        write_file(out_dir / "reconstructed_kernel.json", rj);
        std::cout << "wrote " << (out_dir / "reconstructed_kernel.json").string()
                  << " (round-trip max relative deviation " << jsonio::fmt(dev) << ")\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biorthogonal Appell systems, chaos norms and operator symbols"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_override, "output directory (overrides config)");
    };
    CLI::App* gen = app.add_subcommand("gen", "build an Appell system and export its kernel tables");
    CLI::App* ver = app.add_subcommand("verify", "run the verification battery");
    CLI::App* sym = app.add_subcommand("symbol", "evaluate an operator symbol on a grid");
    add_common(gen);
    add_common(ver);
    add_common(sym);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const Config cfg = parse_config(load_json_file(config_path));
        const fs::path out_dir = out_override.empty() ? fs::path(cfg.out_dir) : fs::path(out_override);
        if (gen->parsed()) return cmd_gen(cfg, out_dir);
        if (ver->parsed()) return cmd_verify(cfg, out_dir);
        if (sym->parsed()) return cmd_symbol(cfg, out_dir);
        return 2;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return 2;
    } catch (const DegenerateMeasureError& e) {
        std::cerr << "error: non-degeneracy check failed: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: invalid JSON input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
