#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "commands.hpp"
#include "susyeta/errors.hpp"

namespace {

using namespace susyeta;

struct Overrides {
    std::optional<double> d, b, a, c, xmax, kmin, kmax;
    std::optional<std::size_t> n, nk;
    std::optional<std::string> out, format;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> d_sequence;
    std::string config;
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config, "INI config file; flags override its keys");
    app->add_option("--d", o.d, "tail decay d < 0");
    app->add_option("--b", o.b, "tail wave number b");
    app->add_option("--a", o.a, "poschl_teller width a > 0");
    app->add_option("--c", o.c, "poschl_teller shift c > 0");
    app->add_option("--n", o.n, "grid nodes");
    app->add_option("--xmax", o.xmax, "truncation point X");
    app->add_option("--kmin", o.kmin, "smallest k of the state table");
    app->add_option("--kmax", o.kmax, "largest k of the state table");
    app->add_option("--nk", o.nk, "number of k values");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--seed", o.seed, "seed of the test-function family");
}

ExperimentConfig resolve(const Overrides& o, const ConfigRequirements& req = {}) {
    ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config, req);
    if (o.d) c.params.d = *o.d;
    if (o.b) {
        c.params.b = *o.b;
        c.probe_b = *o.b;
    }
    if (o.a) c.params.a = *o.a;
    if (o.c) c.params.c = *o.c;
    if (o.n) c.n = *o.n;
    if (o.xmax) c.x_max = *o.xmax;
    if (o.kmin) c.k_min = *o.kmin;
    if (o.kmax) c.k_max = *o.kmax;
    if (o.nk) c.n_k = *o.nk;
    if (o.out) c.out_dir = *o.out;
    if (o.format) c.format = *o.format;
    if (o.seed) c.seed = *o.seed;
    if (o.d_sequence) c.d_sequence = *o.d_sequence;
    validate(c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"susyeta: metric operators from a complex transformation function"};
    app.require_subcommand(1);

    Overrides ex, pr, ve;
    std::string example_name, verify_path;

    auto* example = app.add_subcommand("example", "run the full pipeline for a catalogue entry");
    example->add_option("name", example_name, "constant | poschl-teller")->required();
    add_common(example, ex);

    auto* probe = app.add_subcommand("probe", "cond(rho), r_h and resolvent agreement as d -> 0-");
    add_common(probe, pr);
    probe->add_option("--d-sequence", pr.d_sequence, "negative d values approaching 0")->delimiter(',');

    auto* verify = app.add_subcommand("verify", "run the residual suite from a config file");
    verify->add_option("config_file", verify_path, "INI config file")->required();
    add_common(verify, ve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kConfigError;
    }

    ExperimentConfig cfg;
    try {
        if (*example) {
            cfg = resolve(ex);
            cfg.entry = canonical_entry_name(example_name);
            validate(cfg);
        } else if (*probe) {
            cfg = resolve(pr);
        } else {
            ve.config = verify_path;
            cfg = resolve(ve, verify_requirements());
        }
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kConfigError;
    }

    try {
        if (*example) return cli::cmd_example(cfg.entry, cfg, std::cout);
        if (*probe) return cli::cmd_probe(cfg, std::cout);
        return cli::cmd_verify(cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kCheckFailure;
    }
}
