#include "proxyvote/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>

#include "proxyvote/decision.hpp"
#include "proxyvote/delegation.hpp"
#include "proxyvote/errors.hpp"
#include "proxyvote/network_io.hpp"
#include "proxyvote/simulation.hpp"

namespace proxyvote::cli {

namespace {

class UsageError : public Error {
  public:
    using Error::Error;
};

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct NetworkArgs {
    std::string nodes;
    std::string edges;

    void add_to(CLI::App& app) {
        app.add_option("--nodes", nodes, "Nodes file (id,opinion)")->required();
        app.add_option("--edges", edges, "Edges file (source,target,trust)")->required();
    }
};

struct PropagationArgs {
    std::string active;
    std::string active_file;
    bool exact = false;
    double tolerance = PropagationConfig{}.tolerance;
    std::size_t max_iterations = PropagationConfig{}.max_iterations;
    std::string stranded_policy = "reject";

    void add_to(CLI::App& app) {
        auto* a = app.add_option("--active", active, "Comma-separated active node ids");
        auto* f = app.add_option("--active-file", active_file, "File with one active id per line");
        a->excludes(f);
        app.add_flag("--exact", exact, "Use the linear-solve solver instead of iteration");
        app.add_option("--tolerance", tolerance, "Residual threshold for iteration");
        app.add_option("--max-iterations", max_iterations, "Iteration cap");
        app.add_option("--stranded-policy", stranded_policy, "reject | uniform")
            ->check(CLI::IsMember({"reject", "uniform", "uniform-to-active"}));
    }

    PropagationConfig config() const {
        PropagationConfig c;
        c.tolerance = tolerance;
        c.max_iterations = max_iterations;
        c.stranded_policy = *parse_stranded_policy(stranded_policy);
        c.validate();
        return c;
    }

    ActiveSet active_set(std::size_t n, bool active_given, bool file_given) const {
        if (!active_given && !file_given) throw UsageError("one of --active or --active-file is required");
        auto ids = file_given ? read_id_file(active_file) : parse_id_list(active);
        if (ids.empty()) throw UsageError("active set is empty");
        return ActiveSet(std::move(ids), n);
    }

    WeightVector weights(const TrustNetwork& net, const ActiveSet& set) const {
        const auto c = config();
        return exact ? compute_weights_exact(net, set, c.stranded_policy)
                     : compute_weights_iterative(net, set, c);
    }
};

std::vector<std::size_t> default_sizes(std::size_t n) {
    std::vector<std::size_t> sizes;
    for (std::size_t base = 1; base < n; base *= 10) {
        for (std::size_t step : {1, 2, 5}) {
            if (base * step < n) sizes.push_back(base * step);
        }
    }
    sizes.push_back(n);
    return sizes;
}

/// Writes through `write` to `path`, or to `out` when path is empty.
template <typename Write>
void emit(const std::string& path, std::ostream& out, Write write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    write(file);
    file.flush();
    if (!file) throw IoError("write to '" + path + "' failed");
}

/// Feeds key=value lines to options of `app` that were not given on the
/// command line. Blank lines and lines starting with '#' are skipped.
void apply_config_file(CLI::App& app, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(path, line_no, "expected key=value");
        std::string key = CLI::detail::trim_copy(line.substr(0, eq));
        std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        CLI::Option* opt = key == "config" ? nullptr : app.get_option_no_throw("--" + key);
        if (opt == nullptr) throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ParseError(path, line_no, "bad value for '" + key + "': " + e.what());
        }
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trust-network proxy decision making: delegation weights, decisions, experiments",
                 "proxyvote"};
    app.require_subcommand(1, 1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a random k-out trust network");
    std::size_t gen_n = 100;
    std::size_t gen_k = 3;
    std::uint64_t gen_seed = 1;
    NetworkArgs gen_files;
    gen->add_option("--n", gen_n, "Node count")->capture_default_str();
    gen->add_option("--k", gen_k, "Out-degree")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
    gen_files.add_to(*gen);

    // weights
    auto* wts = app.add_subcommand("weights", "Delegation weights for an active set");
    NetworkArgs wts_files;
    PropagationArgs wts_prop;
    std::string wts_output;
    wts_files.add_to(*wts);
    wts_prop.add_to(*wts);
    wts->add_option("--output", wts_output, "Output file (default stdout)");

    // decide
    auto* dec = app.add_subcommand("decide", "Traditional and weighted decisions with errors");
    NetworkArgs dec_files;
    PropagationArgs dec_prop;
    std::string dec_output;
    dec_files.add_to(*dec);
    dec_prop.add_to(*dec);
    dec->add_option("--output", dec_output, "Output file (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo comparison of both methods");
    ExperimentConfig sim_cfg;
    std::vector<std::size_t> sim_sizes;
    bool sim_fixed = false;
    bool sim_exact = false;
    std::string sim_policy = "uniform";
    std::string sim_output;
    sim->add_option("--n", sim_cfg.n, "Population size")->capture_default_str();
    sim->add_option("--k", sim_cfg.k, "Out-degree")->capture_default_str();
    sim->add_option("--trials", sim_cfg.trials, "Trials per active size")->capture_default_str();
    sim->add_option("--sizes", sim_sizes, "Active-set sizes, comma-separated")->delimiter(',');
    sim->add_option("--seed", sim_cfg.master_seed, "Master seed")->capture_default_str();
    sim->add_flag("--fixed-network", sim_fixed, "Reuse one network for every trial");
    sim->add_flag("--exact", sim_exact, "Use the linear-solve solver");
    sim->add_option("--tolerance", sim_cfg.propagation.tolerance, "Residual threshold");
    sim->add_option("--max-iterations", sim_cfg.propagation.max_iterations, "Iteration cap");
    sim->add_option("--stranded-policy", sim_policy, "reject | uniform")
        ->check(CLI::IsMember({"reject", "uniform", "uniform-to-active"}));
    sim->add_option("--output", sim_output, "Results CSV (default stdout)");
    std::string sim_config;
    sim->add_option("--config", sim_config, "File of key=value lines; flags override it");

    // validate
    auto* val = app.add_subcommand("validate", "List structural problems in a network");
    NetworkArgs val_files;
    val_files.add_to(*val);

    std::vector<const char*> argv;
    argv.push_back("proxyvote");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) {
            auto rng = RandomStream(gen_seed);
            save_network(generate_network(gen_n, gen_k, rng), gen_files.nodes, gen_files.edges);
            return kOk;
        }

        if (wts->parsed()) {
            const auto net = load_network(wts_files.nodes, wts_files.edges, &err);
            const auto set = wts_prop.active_set(net.size(), wts->count("--active") > 0,
                                                 wts->count("--active-file") > 0);
            const auto w = wts_prop.weights(net, set);
            emit(wts_output, out, [&](std::ostream& os) { write_weights(w, os); });
            return kOk;
        }

        if (dec->parsed()) {
            const auto net = load_network(dec_files.nodes, dec_files.edges, &err);
            const auto set = dec_prop.active_set(net.size(), dec->count("--active") > 0,
                                                 dec->count("--active-file") > 0);
            const auto w = dec_prop.weights(net, set);
            const auto r = decide(net, set, &w);
            emit(dec_output, out, [&](std::ostream& os) {
                os << "group_decision=" << shortest(r.group_decision) << '\n'
                   << "expected_decision=" << shortest(r.expected_decision) << '\n'
                   << "weighted_group_decision=" << shortest(*r.weighted_group_decision) << '\n'
                   << "error_traditional=" << shortest(r.error_traditional) << '\n'
                   << "error_weighted=" << shortest(*r.error_weighted) << '\n';
            });
            return kOk;
        }

        if (sim->parsed()) {
            if (!sim_config.empty()) apply_config_file(*sim, sim_config);
            sim_cfg.active_sizes = sim_sizes.empty() ? default_sizes(sim_cfg.n) : sim_sizes;
            sim_cfg.fresh_network_per_trial = !sim_fixed;
            sim_cfg.solver = sim_exact ? WeightSolver::exact : WeightSolver::iterative;
            sim_cfg.propagation.stranded_policy = *parse_stranded_policy(sim_policy);
            const auto result = run_experiment(sim_cfg);
            emit(sim_output, out, [&](std::ostream& os) { write_results(result.rows, os); });
            return kOk;
        }

        if (val->parsed()) {
            const auto net = read_network_unchecked(val_files.nodes, val_files.edges);
            const auto violations = validate_network(net);
            for (const auto& v : violations) out << v << '\n';
            if (!violations.empty()) return kInvalid;
            out << "ok: " << net.size() << " nodes, " << net.edge_count() << " edges\n";
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const StrandedTrustError& e) {
        err << "stranded trust: " << e.what() << '\n';
        return kPropagation;
    } catch (const NoConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kPropagation;
    } catch (const SingularSystemError& e) {
        err << "error: singular system: " << e.what() << '\n';
        return kPropagation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kUsage;
}

}  // namespace proxyvote::cli
