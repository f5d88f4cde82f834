#include "zmom/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zmom/cache.hpp"
#include "zmom/errors.hpp"
#include "zmom/moments.hpp"
#include "zmom/params.hpp"
#include "zmom/primes.hpp"
#include "zmom/verify.hpp"
#include "zmom/zeta.hpp"

namespace zmom {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += fmt(v[i]);
    }
    return s;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw spec_error("cannot read config file " + path);
    json j;
    in >> j;
    if (j.contains("T")) cfg.T_list = j["T"].get<std::vector<double>>();
    if (j.contains("alphas")) cfg.alphas = j["alphas"].get<std::vector<double>>();
    if (j.contains("betas")) cfg.betas = j["betas"].get<std::vector<double>>();
    if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
    if (j.contains("step")) cfg.step = j["step"].get<double>();
    if (j.contains("weight")) cfg.weight = j["weight"].get<std::string>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("cache_dir")) cfg.cache_dir = j["cache_dir"].get<std::string>();
    if (j.contains("no_timing")) cfg.no_timing = j["no_timing"].get<bool>();
}

void finalize_cache_dir(RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return;
    if (const char* env = std::getenv("ZMOM_CACHE_DIR")) cfg.cache_dir = env;
}

// Writes to the --out path when set, stdout stream otherwise.
struct Sink {
    std::ostream& fallback;
    std::ofstream file;

    explicit Sink(const RunConfig& cfg, std::ostream& out) : fallback(out) {
        if (!cfg.out.empty()) {
            file.open(cfg.out, std::ios::trunc);
            if (!file) throw spec_error("cannot open output file " + cfg.out);
        }
    }
    std::ostream& stream() { return file.is_open() ? static_cast<std::ostream&>(file) : fallback; }
};

int cmd_moment(const RunConfig& cfg, std::ostream& out) {
    if (cfg.T_list.empty()) throw spec_error("moment requires at least one --T");
    QuadraturePlan::Weight w = QuadraturePlan::Weight::Sharp;
    if (cfg.weight == "smooth") w = QuadraturePlan::Weight::Smooth;
    else if (cfg.weight != "sharp") throw spec_error("weight must be sharp or smooth");

    Sink sink(cfg, out);
    sink.stream() << "T,m,alphas,betas,delta,moment,predicted,ratio,runtime_s\n";

    std::optional<GridStore> store;
    for (double T : cfg.T_list) {
        MomentSpec spec;
        spec.T = T;
        spec.alphas = cfg.alphas;
        spec.betas = cfg.betas;
        validate(spec);

        ZetaGridProvider provider = direct_zeta_provider(cfg.threads);
        if (!cfg.cache_dir.empty()) {
            if (!store) store.emplace(cfg.cache_dir, direct_zeta_provider(cfg.threads));
            provider = store->as_provider();
        }

        const QuadraturePlan plan = make_moment_plan(T, w, cfg.step);
        MomentReport rep = shifted_moment(spec, plan, provider, cfg.threads);
        if (cfg.delta) rep.delta_used = build_schedule(spec, cfg.delta).delta;

        sink.stream() << fmt(T) << ',' << spec.m() << ',' << join_list(spec.alphas) << ','
                      << join_list(spec.betas) << ',' << fmt(rep.delta_used) << ','
                      << fmt(rep.value) << ',' << fmt(rep.predicted) << ',' << fmt(rep.ratio)
                      << ',' << fmt(cfg.no_timing ? 0.0 : rep.runtime_seconds) << '\n';
    }
    return 0;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
    if (cfg.T_list.empty()) throw spec_error("predict requires at least one --T");
    Sink sink(cfg, out);
    sink.stream() << "T,m,alphas,betas,predicted\n";
    for (double T : cfg.T_list) {
        MomentSpec spec;
        spec.T = T;
        spec.alphas = cfg.alphas;
        spec.betas = cfg.betas;
        validate(spec);
        sink.stream() << fmt(T) << ',' << spec.m() << ',' << join_list(spec.alphas) << ','
                      << join_list(spec.betas) << ',' << fmt(predicted_main_term(spec)) << '\n';
    }
    return 0;
}

int cmd_sieve(const RunConfig& cfg, std::uint64_t limit, std::ostream& out) {
    const PrimeTable t = sieve(limit);
    if (!cfg.out.empty()) write_prime_table(t, cfg.out);
    out << "limit=" << limit << " count=" << t.primes.size() << '\n';
    return 0;
}

int cmd_zeta(double sigma, double t, double rel_tol, std::ostream& out) {
    const std::complex<double> z = zeta(ComplexPoint{sigma, t}, rel_tol);
    out << fmt(z.real()) << ' ' << fmt(z.imag()) << '\n';
    return 0;
}

int cmd_verify(const RunConfig& cfg, std::vector<std::string> suites, std::ostream& out) {
    if (suites.empty()) suites = verify_suite_names();
    for (const auto& s : suites)
        if (!is_verify_suite(s)) throw spec_error("unknown verify suite: " + s);

    json doc;
    int total_failures = 0;
    json arr = json::array();
    for (const auto& name : suites) {
        const SuiteReport rep = run_verify_suite(name, cfg.seed, cfg.threads);
        json j;
        j["suite"] = rep.suite;
        j["seed"] = rep.seed;
        j["instances"] = rep.instances;
        j["failures"] = rep.failures;
        j["max_observed_ratio"] = rep.max_observed_ratio;
        if (!rep.notes.empty()) j["notes"] = rep.notes;
        arr.push_back(j);
        total_failures += rep.failures;
    }
    if (arr.size() == 1) doc = arr[0];
    else {
        doc["suites"] = arr;
        doc["failures"] = total_failures;
        doc["seed"] = cfg.seed;
    }

    Sink sink(cfg, out);
    sink.stream() << doc.dump(2) << '\n';
    return total_failures == 0 ? 0 : 1;
}

int cmd_cache(const RunConfig& cfg, const std::string& action, std::ostream& out) {
    std::string dir = cfg.cache_dir;
    if (dir.empty()) throw spec_error("cache command requires --cache-dir or ZMOM_CACHE_DIR");
    GridStore store(dir, direct_zeta_provider(cfg.threads));
    if (action == "info") {
        const auto info = store.info();
        out << "dir=" << store.dir() << " files=" << info.files << " bytes=" << info.bytes << '\n';
        return 0;
    }
    if (action == "clear") {
        out << "removed=" << store.clear() << '\n';
        return 0;
    }
    throw spec_error("cache action must be info or clear");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"shifted-moment toolkit for the zeta function"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--T", cfg.T_list, "window scales")->delimiter(',');
        sub->add_option("--alphas", cfg.alphas, "shifts")->delimiter(',');
        sub->add_option("--betas", cfg.betas, "exponents")->delimiter(',');
        sub->add_option("--delta", cfg.delta, "schedule delta override in (0,1)");
        sub->add_option("--step", cfg.step, "quadrature step override");
        sub->add_option("--weight", cfg.weight, "sharp|smooth");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--cache-dir", cfg.cache_dir, "zeta sample cache directory");
        sub->add_flag("--no-timing", cfg.no_timing, "write 0 in runtime_s for bytewise-stable output");
    };

    CLI::App* moment = app.add_subcommand("moment", "compute shifted moments and the prediction");
    add_common(moment);

    CLI::App* predict = app.add_subcommand("predict", "evaluate the predicted main term");
    add_common(predict);

    CLI::App* sieve_cmd = app.add_subcommand("sieve", "prime sieve");
    std::uint64_t sieve_limit = 0;
    sieve_cmd->add_option("--limit", sieve_limit, "sieve limit")->required();
    add_common(sieve_cmd);

    CLI::App* zeta_cmd = app.add_subcommand("zeta", "evaluate zeta at a point");
    double zsigma = 0.5, zt = 0.0, zrel = 1e-13;
    zeta_cmd->add_option("--sigma", zsigma, "real part");
    zeta_cmd->add_option("--t", zt, "imaginary part");
    zeta_cmd->add_option("--rel-tol", zrel, "relative tolerance");

    CLI::App* verify = app.add_subcommand("verify", "run lemma verification suites");
    std::vector<std::string> suites;
    verify->add_option("--suite", suites, "suite names (default: all)")->delimiter(',');
    add_common(verify);

    CLI::App* cache_cmd = app.add_subcommand("cache", "inspect or clear the sample cache");
    std::string cache_action;
    cache_cmd->add_option("action", cache_action, "info|clear")->required();
    add_common(cache_cmd);

    std::vector<char*> argv;
    std::vector<std::string> storage;
    storage.push_back("zmom");
    for (const auto& a : args) storage.push_back(a);
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "invalid-usage: " << e.what() << '\n';
        return 2;
    }

    try {
        if (!config_path.empty()) {
            RunConfig from_file;
            load_config_file(config_path, from_file);
            // flags already parsed into cfg win over file values
            if (cfg.T_list.empty()) cfg.T_list = from_file.T_list;
            if (cfg.alphas.empty()) cfg.alphas = from_file.alphas;
            if (cfg.betas.empty()) cfg.betas = from_file.betas;
            if (!cfg.delta) cfg.delta = from_file.delta;
            if (!cfg.step) cfg.step = from_file.step;
            if (cfg.weight == "sharp") cfg.weight = from_file.weight.empty() ? "sharp" : from_file.weight;
            if (cfg.threads == 0) cfg.threads = from_file.threads;
            if (cfg.seed == 1) cfg.seed = from_file.seed;
            if (cfg.out.empty()) cfg.out = from_file.out;
            if (cfg.cache_dir.empty()) cfg.cache_dir = from_file.cache_dir;
            cfg.no_timing = cfg.no_timing || from_file.no_timing;
        }
        finalize_cache_dir(cfg);

        if (moment->parsed()) return cmd_moment(cfg, out);
        if (predict->parsed()) return cmd_predict(cfg, out);
        if (sieve_cmd->parsed()) return cmd_sieve(cfg, sieve_limit, out);
        if (zeta_cmd->parsed()) return cmd_zeta(zsigma, zt, zrel, out);
        if (verify->parsed()) return cmd_verify(cfg, suites, out);
        if (cache_cmd->parsed()) return cmd_cache(cfg, cache_action, out);
        err << "invalid-usage: no command\n";
        return 2;
    } catch (const spec_error& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace zmom
