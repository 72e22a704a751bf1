#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "convseq/budget.hpp"
#include "convseq/energy.hpp"
#include "convseq/errors.hpp"
#include "convseq/falconer.hpp"
#include "convseq/incidence.hpp"
#include "convseq/io.hpp"
#include "convseq/partition.hpp"
#include "convseq/scalar.hpp"
#include "convseq/sequence.hpp"
#include "convseq/sumset.hpp"

namespace convseq {

enum class Command { sumset, energy, dirichlet, incidence, partition, falconer, fit };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::sumset: return "sumset";
        case Command::energy: return "energy";
        case Command::dirichlet: return "dirichlet";
        case Command::incidence: return "incidence";
        case Command::partition: return "partition";
        case Command::falconer: return "falconer";
        case Command::fit: return "fit";
    }
    return "?";
}

struct ExperimentConfig {
    Command command = Command::energy;
    SequenceKind sequence;
    unsigned d = 2;
    std::vector<std::size_t> n_grid;
    std::optional<Rational> epsilon;               // partition
    PartitionStart start = PartitionStart::net_weight;
    PartitionFill fill = PartitionFill::mass_target;
    std::string output = "-";
    std::string input;                             // fit: source CSV
    std::string column;                            // fit: y-column override
    bool oracle = false;                           // energy: add brute-force rows
    bool timings = false;                          // real seconds instead of 0.000
    bool dump = false;                             // incidence: embed arrangement
    bool dfact = false;                            // sumset: unordered-count column
    unsigned threads = 0;                          // 0 = auto
    std::string mode = "count";                    // falconer: count | separated
    std::vector<std::uint64_t> q_grid;             // falconer count
    double s_param = 1.0;                          // falconer
    unsigned dim = 2;                              // falconer
    unsigned fn_power = 2;                         // falconer rho_f exponent
    double delta_exp = 0.0;  // falconer separated: 0 = default -(d-1)/(d+1)
};

namespace detail {

template <typename T>
inline void require_ascending(const std::vector<T>& grid, const std::string& field) {
    if (grid.empty()) throw domain_error(field + " must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw domain_error(field + " must be strictly ascending");
}

struct OutputTarget {
    explicit OutputTarget(const std::string& path) {
        if (path != "-") {
            file.open(path, std::ios::binary);
            if (!file) throw domain_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file.is_open() ? file : std::cout; }
    std::ofstream file;
};

// Runs f over the grid, optionally fanning out to a worker pool; results are
// collected in grid order so the output never depends on the thread count.
template <typename T, typename F>
inline auto map_ordered(const std::vector<T>& grid, unsigned threads, F f)
    -> std::vector<decltype(f(grid.front()))> {
    using R = decltype(f(grid.front()));
    std::vector<R> out;
    out.reserve(grid.size());
    if (threads <= 1) {
        for (const T& g : grid) out.push_back(f(g));
        return out;
    }
    std::vector<std::future<R>> pending;
    pending.reserve(grid.size());
    for (const T& g : grid)
        pending.push_back(std::async(std::launch::async, [&f, g] { return f(g); }));
    for (auto& fut : pending) out.push_back(fut.get());
    return out;
}

inline std::string join_grid(const std::vector<std::size_t>& grid) {
    std::string s;
    for (std::size_t i = 0; i < grid.size(); ++i)
        s += (i ? "," : "") + std::to_string(grid[i]);
    return s;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline Scalar factorial(unsigned k) {
    Scalar f = 1;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace detail

inline void validate_config(const ExperimentConfig& c) {
    if (c.command == Command::fit) {
        if (c.input.empty()) throw domain_error("fit: input CSV path is required");
        return;
    }
    if (c.command == Command::falconer) {
        if (c.mode != "count" && c.mode != "separated")
            throw domain_error("falconer: --mode must be count or separated");
        if (c.mode == "count") {
            detail::require_ascending(c.q_grid, "falconer --q grid");
            return;
        }
    }
    detail::require_ascending(c.n_grid, "--n grid");
    if (c.d == 0) throw domain_error("--d must be >= 1");
}

inline MetaBlock base_meta(const ExperimentConfig& c) {
    MetaBlock meta;
    meta.push_back({"command", command_name(c.command)});
    if (c.command != Command::fit) meta.push_back({"seq", c.sequence.describe()});
    meta.push_back({"d", std::to_string(c.d)});
    if (!c.n_grid.empty()) meta.push_back({"n-grid", detail::join_grid(c.n_grid)});
    meta.push_back({"budget", std::to_string(Budget::from_env().work)});
    return meta;
}

inline Json config_json(const ExperimentConfig& c) {
    Json j;
    j["command"] = command_name(c.command);
    if (c.command != Command::fit) j["seq"] = c.sequence.describe();
    j["d"] = c.d;
    if (!c.n_grid.empty()) j["n_grid"] = c.n_grid;
    j["budget"] = Budget::from_env().work;
    return j;
}

namespace detail {

inline void run_sumset(const ExperimentConfig& c, std::ostream& out) {
    if (c.n_grid.size() == 1) {
        const WeightedSumset ws =
            build_weighted_sumset(make_sequence(c.sequence, c.n_grid[0]), c.d);
        std::vector<std::string> header{"value", "multiplicity"};
        if (c.dfact) header.push_back("multiplicity_over_dfact");
        std::vector<std::vector<std::string>> rows;
        const Scalar dfact = factorial(c.d);
        for (const auto& e : ws.entries()) {
            std::vector<std::string> row{e.value.str(), std::to_string(e.weight)};
            if (c.dfact) row.push_back(Rational(Scalar(e.weight), dfact).str());
            rows.push_back(std::move(row));
        }
        MetaBlock meta = base_meta(c);
        if (ws.source_meta().scale_pow10)
            meta.push_back({"scale", "10^" + std::to_string(ws.source_meta().scale_pow10)});
        write_csv(out, meta, header, rows);
        return;
    }

    struct Row {
        std::size_t n, cardinality;
        std::uint64_t max_weight;
        double andrews, majorant;
    };
    auto rows = map_ordered(c.n_grid, c.threads, [&](std::size_t n) {
        const WeightedSumset ws = build_weighted_sumset(make_sequence(c.sequence, n), c.d);
        Row r{n, ws.cardinality(), ws.max_weight(), std::nan(""), std::nan("")};
        if (c.d >= 2) {
            r.andrews = andrews_ratio(ws);
            r.majorant = majorant_ratio(ws, to_double(growth_exponents(c.d).beta));
        }
        return r;
    });
    std::vector<std::vector<std::string>> lines;
    for (const Row& r : rows)
        lines.push_back({std::to_string(r.n), std::to_string(c.d),
                         std::to_string(r.cardinality), std::to_string(r.max_weight),
                         format_double(r.andrews), format_double(r.majorant)});
    write_csv(out, base_meta(c),
              {"N", "d", "cardinality", "max_weight", "andrews_ratio", "majorant_ratio"},
              lines);
}

inline void run_energy(const ExperimentConfig& c, std::ostream& out) {
    const bool exact_backend_is_dirichlet = c.command == Command::dirichlet;
    auto rows = map_ordered(c.n_grid, c.threads, [&](std::size_t n) {
        std::vector<std::vector<std::string>> lines;
        const ConvexSequence seq = make_sequence(c.sequence, n);
        auto add = [&](EnergyBackend backend) {
            const auto t0 = std::chrono::steady_clock::now();
            EnergyReport report;
            switch (backend) {
                case EnergyBackend::weights:
                    report = energy_from_weights(build_weighted_sumset(seq, c.d));
                    break;
                case EnergyBackend::bruteforce:
                    report = energy_bruteforce(seq, c.d);
                    break;
                case EnergyBackend::dirichlet:
                    report = energy_dirichlet(seq, c.d);
                    break;
            }
            const double secs = c.timings ? seconds_since(t0) : 0.0;
            lines.push_back({std::to_string(n), std::to_string(c.d),
                             backend_name(report.backend), report.energy.str(),
                             format_double(secs, "%.3f")});
        };
        add(exact_backend_is_dirichlet ? EnergyBackend::dirichlet : EnergyBackend::weights);
        if (c.oracle) add(exact_backend_is_dirichlet ? EnergyBackend::weights
                                                     : EnergyBackend::bruteforce);
        return lines;
    });
    std::vector<std::vector<std::string>> lines;
    for (auto& group : rows)
        for (auto& line : group) lines.push_back(std::move(line));
    write_csv(out, base_meta(c), {"N", "d", "backend", "energy", "seconds"}, lines);
}

inline Json incidence_report_json(const ExperimentConfig& c, std::size_t n) {
    const Arrangement arr = build_arrangement(make_sequence(c.sequence, n), c.d);
    const IncidenceCount count = count_incidences(arr);
    const double m = to_double(arr.net_curve_weight());
    const double pn = to_double(arr.net_point_weight());
    const double bound =
        st_bound(m, pn, static_cast<double>(arr.max_curve_weight()),
                 static_cast<double>(arr.max_point_weight()));
    const SimpleIntersectionResult simple = verify_simple_intersection(arr);

    Json j;
    j["N"] = n;
    j["curves"] = arr.curves().size();
    j["points"] = arr.points().size();
    j["net_curve_weight"] = scalar_to_json(arr.net_curve_weight());
    j["net_point_weight"] = scalar_to_json(arr.net_point_weight());
    j["max_curve_weight"] = arr.max_curve_weight();
    j["max_point_weight"] = arr.max_point_weight();
    j["incidences"] = scalar_to_json(count.total);
    j["st_bound"] = bound;
    j["ratio"] = to_double(count.total) / bound;
    j["simple_intersection"] = simple.ok;
    if (!simple.ok) {
        j["witness"] = Json{{"curve_a", simple.witness->curve_a},
                            {"curve_b", simple.witness->curve_b},
                            {"point_a", simple.witness->point_a},
                            {"point_b", simple.witness->point_b}};
    }
    if (c.dump) j["arrangement"] = arrangement_to_json(arr);
    return j;
}

inline void run_incidence(const ExperimentConfig& c, std::ostream& out) {
    if (c.n_grid.size() == 1) {
        Json j;
        j["schema"] = 1;
        j["config"] = config_json(c);
        j["report"] = incidence_report_json(c, c.n_grid[0]);
        out << j.dump(2) << "\n";
        return;
    }
    auto reports = map_ordered(c.n_grid, c.threads,
                               [&](std::size_t n) { return incidence_report_json(c, n); });
    auto cell = [](const Json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    std::vector<std::vector<std::string>> lines;
    for (const Json& r : reports)
        lines.push_back({r["N"].dump(), std::to_string(c.d), r["curves"].dump(),
                         r["points"].dump(), cell(r["net_curve_weight"]),
                         cell(r["net_point_weight"]), r["max_curve_weight"].dump(),
                         r["max_point_weight"].dump(), cell(r["incidences"]),
                         format_double(r["st_bound"].get<double>()),
                         format_double(r["ratio"].get<double>()),
                         r["simple_intersection"].get<bool>() ? "1" : "0"});
    write_csv(out, base_meta(c),
              {"N", "d", "curves", "points", "m", "n", "mu", "nu", "incidences",
               "st_bound", "ratio", "simple_intersection"},
              lines);
}

inline void run_partition(const ExperimentConfig& c, std::ostream& out) {
    auto build = [&](std::size_t n) {
        return build_partition(build_weighted_sumset(make_sequence(c.sequence, n), c.d),
                               c.epsilon, c.start, c.fill);
    };
    if (c.n_grid.size() == 1) {
        Json j;
        j["schema"] = 1;
        j["config"] = config_json(c);
        j["report"] = partition_to_json(build(c.n_grid[0]));
        out << j.dump(2) << "\n";
        return;
    }
    auto reports = map_ordered(c.n_grid, c.threads, build);
    std::vector<std::vector<std::string>> lines;
    for (const PartitionReport& r : reports)
        lines.push_back({std::to_string(r.n), std::to_string(r.d), std::to_string(r.M),
                         std::to_string(r.classes.size()), stop_name(r.stop),
                         std::to_string(r.class_cap), format_double(r.mu_bar),
                         format_double(r.i_tilde), format_double(r.i_bar),
                         format_double(r.i_tilde / r.i_bar)});
    write_csv(out, base_meta(c),
              {"N", "d", "M", "classes", "stop", "class_cap", "mu_bar", "I_tilde",
               "I_bar", "ratio"},
              lines);
}

inline void run_falconer(const ExperimentConfig& c, std::ostream& out) {
    MetaBlock meta = base_meta(c);
    meta.push_back({"mode", c.mode});
    if (c.mode == "count") {
        meta.push_back({"s", format_double(c.s_param)});
        meta.push_back({"dim", std::to_string(c.dim)});
        const ScalarFn f = power_fn(c.fn_power);
        auto counts = map_ordered(c.q_grid, c.threads, [&](std::uint64_t q) {
            return distance_value_count(LatticeSet::full_box(q, c.s_param, c.dim), f);
        });
        std::vector<std::vector<std::string>> lines;
        for (std::size_t i = 0; i < c.q_grid.size(); ++i) {
            const double resolution = std::pow(static_cast<double>(c.q_grid[i]),
                                               -static_cast<double>(c.dim) / c.s_param);
            lines.push_back({std::to_string(c.q_grid[i]), format_double(c.s_param),
                             std::to_string(c.dim), "x^" + std::to_string(c.fn_power),
                             std::to_string(counts[i]), format_double(resolution)});
        }
        write_csv(out, meta, {"q", "s", "d", "f", "distinct_values", "resolution"}, lines);
        return;
    }

    const double expo =
        c.delta_exp != 0.0 ? c.delta_exp
                           : -static_cast<double>(c.d - 1) / static_cast<double>(c.d + 1);
    meta.push_back({"delta-exp", format_double(expo)});
    auto rows = map_ordered(c.n_grid, c.threads, [&](std::size_t n) {
        const WeightedSumset ws = build_weighted_sumset(make_sequence(c.sequence, n), c.d);
        std::vector<Scalar> values;
        values.reserve(ws.cardinality());
        for (const auto& e : ws.entries()) values.push_back(e.value);
        const double delta = std::pow(static_cast<double>(n), expo);
        const std::size_t count =
            separated_count(values, delta, ws.source_meta().scale_pow10);
        return std::pair(delta, count);
    });
    std::vector<std::vector<std::string>> lines;
    for (std::size_t i = 0; i < c.n_grid.size(); ++i)
        lines.push_back({std::to_string(c.n_grid[i]), format_double(rows[i].first),
                         std::to_string(rows[i].second)});
    write_csv(out, meta, {"N", "delta", "separated_count"}, lines);
}

inline void run_fit(const ExperimentConfig& c, std::ostream& out) {
    const CsvTable table = read_csv_file(c.input);
    const std::string x_name = table.has_column("N")   ? "N"
                               : table.has_column("q") ? "q"
                                                       : "";
    if (x_name.empty()) throw domain_error("fit: input has neither 'N' nor 'q' column");
    std::string y_name = c.column;
    if (y_name.empty()) {
        for (const char* candidate :
             {"energy", "cardinality", "distinct_values", "separated_count"})
            if (table.has_column(candidate)) {
                y_name = candidate;
                break;
            }
        if (y_name.empty())
            throw domain_error("fit: no known value column; use --column to pick one");
    }
    const std::size_t xi = table.column(x_name);
    const std::size_t yi = table.column(y_name);
    std::vector<std::pair<double, double>> points;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        try {
            points.emplace_back(std::stod(table.rows[r][xi]), std::stod(table.rows[r][yi]));
        } catch (const std::exception&) {
            throw validation_error("fit: non-numeric cell in input", r + 1);
        }
    }
    const ExponentFit fit = fit_exponent(points);
    Json j;
    j["schema"] = 1;
    j["config"] = config_json(c);
    j["source"] = c.input;
    j["x_column"] = x_name;
    j["y_column"] = y_name;
    const Json fit_json = fit_to_json(fit);
    for (const auto& [key, value] : fit_json.items()) j[key] = value;
    out << j.dump(2) << "\n";
}

}  // namespace detail

// Dispatch on the validated config; outputs are deterministic functions of
// (config, CE_BUDGET) and never carry timestamps unless --timings is given.
inline void run_experiment(const ExperimentConfig& c) {
    validate_config(c);
    detail::OutputTarget target(c.output);
    std::ostream& out = target.stream();
    switch (c.command) {
        case Command::sumset: detail::run_sumset(c, out); break;
        case Command::energy:
        case Command::dirichlet: detail::run_energy(c, out); break;
        case Command::incidence: detail::run_incidence(c, out); break;
        case Command::partition: detail::run_partition(c, out); break;
        case Command::falconer: detail::run_falconer(c, out); break;
        case Command::fit: detail::run_fit(c, out); break;
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing output to '" + c.output + "'");
}

}  // namespace convseq
