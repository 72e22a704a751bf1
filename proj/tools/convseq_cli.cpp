// Experiment runner: builds convex-sequence sumsets, energies, incidence
// arrangements, weight partitions, and lattice distance counts, exporting
// deterministic CSV/JSON for exponent studies.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convseq/experiment.hpp"

namespace {

struct CliState {
    convseq::ExperimentConfig config;
    std::string seq_text = "power:2";
    std::string epsilon_text;
    std::string start_text = "net-weight";
    std::string fill_text = "mass";
    std::uint64_t seed = 42;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CliState& st, bool with_sequence = true) {
    if (with_sequence)
        cmd->add_option("--seq", st.seq_text,
                        "sequence kind: power:K, sqrt:P, random, custom:FILE")
            ->capture_default_str();
    cmd->add_option("--d", st.config.d, "fold count d")->capture_default_str();
    cmd->add_option("--n", st.config.n_grid, "N grid (comma separated, ascending)")
        ->delimiter(',');
    cmd->add_option("--out", st.config.output, "output path ('-' = stdout)")
        ->capture_default_str();
    cmd->add_option("--threads", st.config.threads, "worker threads (0 = auto)")
        ->capture_default_str();
    if (with_sequence) {
        auto* seed = cmd->add_option("--seed", st.seed, "seed for random sequences");
        seed->each([&st](const std::string&) { st.seed_given = true; });
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex sequence experiment toolkit"};
    app.require_subcommand(1);
    CliState st;

    auto* sumset = app.add_subcommand("sumset", "d-fold sumset with multiplicities");
    add_common(sumset, st);
    sumset->add_flag("--dfact", st.config.dfact,
                     "add multiplicity/d! column to single-N dumps");

    auto* energy = app.add_subcommand("energy", "additive energy via multiplicities");
    add_common(energy, st);
    energy->add_flag("--oracle", st.config.oracle, "add brute-force oracle rows");
    energy->add_flag("--timings", st.config.timings, "record real seconds");

    auto* dirichlet =
        app.add_subcommand("dirichlet", "additive energy via coefficient convolution");
    add_common(dirichlet, st);
    dirichlet->add_flag("--oracle", st.config.oracle, "add multiplicity-backend rows");
    dirichlet->add_flag("--timings", st.config.timings, "record real seconds");

    auto* incidence =
        app.add_subcommand("incidence", "translate arrangement incidence counts");
    add_common(incidence, st);
    incidence->add_flag("--dump", st.config.dump, "embed the arrangement in the report");

    auto* partition = app.add_subcommand("partition", "weight-class decomposition");
    add_common(partition, st);
    partition->add_option("--epsilon", st.epsilon_text,
                          "epsilon as a fraction or decimal (default delta_0/9)");
    partition->add_option("--start", st.start_text, "mu_0 start: net-weight | andrews")
        ->capture_default_str();
    partition->add_option("--fill", st.fill_text, "class filling: mass | threshold")
        ->capture_default_str();

    auto* falconer =
        app.add_subcommand("falconer", "lattice distance counts and separated values");
    add_common(falconer, st);
    falconer->add_option("--mode", st.config.mode, "count | separated")
        ->capture_default_str();
    falconer->add_option("--q", st.config.q_grid, "lattice q grid (count mode)")
        ->delimiter(',');
    falconer->add_option("--s", st.config.s_param, "dimension parameter s in (0,d)")
        ->capture_default_str();
    falconer->add_option("--dim", st.config.dim, "ambient lattice dimension")
        ->capture_default_str();
    falconer->add_option("--f", st.config.fn_power, "rho_f power: f(x)=x^K")
        ->capture_default_str();
    falconer->add_option("--delta-exp", st.config.delta_exp,
                         "separated mode: delta = N^EXP (default -(d-1)/(d+1))");

    auto* fit = app.add_subcommand("fit", "log-log slope of a prior CSV");
    fit->add_option("input", st.config.input, "CSV produced by another subcommand")
        ->required();
    fit->add_option("--column", st.config.column, "value column (default: auto)");
    fit->add_option("--out", st.config.output, "output path ('-' = stdout)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::map<const CLI::App*, convseq::Command> commands{
            {sumset, convseq::Command::sumset},
            {energy, convseq::Command::energy},
            {dirichlet, convseq::Command::dirichlet},
            {incidence, convseq::Command::incidence},
            {partition, convseq::Command::partition},
            {falconer, convseq::Command::falconer},
            {fit, convseq::Command::fit}};
        for (const auto& [cmd, name] : commands)
            if (app.got_subcommand(cmd)) st.config.command = name;

        if (st.config.command != convseq::Command::fit) {
            st.config.sequence = convseq::SequenceKind::parse(st.seq_text);
            if (st.seed_given) st.config.sequence.seed = st.seed;
        }
        if (!st.epsilon_text.empty())
            st.config.epsilon = convseq::parse_rational(st.epsilon_text);
        if (st.start_text == "andrews")
            st.config.start = convseq::PartitionStart::andrews;
        else if (st.start_text != "net-weight")
            throw convseq::domain_error("--start must be net-weight or andrews");
        if (st.fill_text == "threshold")
            st.config.fill = convseq::PartitionFill::threshold;
        else if (st.fill_text != "mass")
            throw convseq::domain_error("--fill must be mass or threshold");

        convseq::run_experiment(st.config);
        return 0;
    } catch (const convseq::resource_error& e) {
        std::cerr << "error (resource): " << e.what() << "\n";
        return 3;
    } catch (const convseq::validation_error& e) {
        std::cerr << "error (invalid input): " << e.what() << "\n";
        return 2;
    } catch (const convseq::domain_error& e) {
        std::cerr << "error (usage): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error (internal): " << e.what() << "\n";
        return 4;
    }
}
