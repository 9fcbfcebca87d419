// Command-line front end: generate benchmark models, reduce RMDPs to games,
// solve with RPPI / RVI / RRVI / brute force, verify policy certificates, and
// run benchmark sweeps to CSV.

#include "rmdp/rmdp.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitSolver = 4;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw rmdp::validation_error("cannot open output file: " + path);
    out << text << "\n";
}

rmdp::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rmdp::validation_error("cannot open input file: " + path);
    try {
        return rmdp::json::parse(in);
    } catch (const std::exception& e) {
        throw rmdp::validation_error(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<std::pair<int, int>> parse_holes(const std::string& text) {
    std::vector<std::pair<int, int>> holes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        int row = 0, col = 0;
        if (std::sscanf(item.c_str(), "%d,%d", &row, &col) != 2)
            throw rmdp::validation_error("cannot parse hole cell: " + item);
        holes.emplace_back(row, col);
    }
    return holes;
}

rmdp::Deadline make_deadline(double timeout_seconds) {
    if (timeout_seconds <= 0) return std::nullopt;
    return rmdp::Clock::now() +
           std::chrono::duration_cast<rmdp::Clock::duration>(
               std::chrono::duration<double>(timeout_seconds));
}

struct SolveSettings {
    std::string algorithm = "rppi";
    double ppe_tol = rmdp::kDefaultPpeTol;
    std::string reference = "auto";
    double gap = 1e-3;
    double budget = 1e7;
    double timeout_seconds = 10800;
};

rmdp::SolveReport run_solver(const rmdp::Rmdp& m, const SolveSettings& s,
                             const rmdp::Deadline& deadline) {
    if (s.algorithm == "rppi") {
        rmdp::RppiOptions opt;
        opt.ppe_tol = s.ppe_tol;
        opt.deadline = deadline;
        return rmdp::rppi(m, opt);
    }
    if (s.algorithm == "brute") {
        const long cap = static_cast<long>(s.budget);
        const auto start = rmdp::Clock::now();
        auto res = rmdp::brute_force_value(m, {cap, cap});
        rmdp::SolveReport report;
        report.algorithm = rmdp::Algorithm::Brute;
        report.value_at_initial = res.maxmin;
        report.agent_policy = res.argmax_policy;
        report.wall_clock_seconds =
            std::chrono::duration<double>(rmdp::Clock::now() - start).count();
        return report;
    }
    double reference = 0.0;
    if (s.reference == "auto") {
        rmdp::RppiOptions opt;
        opt.ppe_tol = s.ppe_tol;
        opt.deadline = deadline;
        reference = rmdp::rppi(m, opt).value_at_initial;
    } else {
        reference = std::stod(s.reference);
    }
    if (s.algorithm == "rvi") return rmdp::rvi(m, reference, s.gap, 64, deadline);
    if (s.algorithm == "rrvi")
        return rmdp::rrvi(m, reference, s.gap, 100'000'000, deadline);
    throw rmdp::validation_error("unknown algorithm: " + s.algorithm);
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchRow {
    std::string family;
    int n = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    std::optional<double> value;
    double wall_clock_seconds = 0.0;
    std::string status; // Ok, Timeout, Inapplicable, Error
};

std::string format_row(const BenchRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%d,%llu,%s,%s,%.3f,%s", r.family.c_str(), r.n,
                  static_cast<unsigned long long>(r.seed), r.algorithm.c_str(),
                  r.value ? rmdp::json(*r.value).dump().c_str() : "", r.wall_clock_seconds,
                  r.status.c_str());
    return buf;
}

int run_bench(const std::string& family, const std::vector<int>& sizes,
              std::vector<std::string> algorithms, std::uint64_t seed, double timeout_seconds,
              double ppe_tol, double gap, int jobs, const std::string& output) {
    const bool unichain_lake = family == "frozen-lake-unichain";
    const bool multichain_lake = family == "frozen-lake-multichain";
    if (!unichain_lake && !multichain_lake && family != "contamination")
        throw rmdp::validation_error("unknown family: " + family);
    const std::string family_tag = family == "contamination" ? "Contamination"
                                   : unichain_lake           ? "FrozenLakeUnichain"
                                                             : "FrozenLakeMultichain";

    std::vector<BenchRow> rows;
    std::mutex rows_mutex;

    auto run_instance = [&](int n) {
        rmdp::Rmdp m;
        if (family == "contamination") {
            m = rmdp::gen_contamination({n, 0.4, seed});
        } else {
            rmdp::FrozenLakeSpec spec;
            spec.n = n;
            spec.holes = rmdp::default_frozen_lake_holes(n);
            spec.variant = unichain_lake ? rmdp::LakeVariant::Unichain
                                         : rmdp::LakeVariant::Multichain;
            spec.seed = seed;
            m = rmdp::gen_frozen_lake(spec);
        }

        std::optional<double> rppi_value;
        for (const auto& alg : algorithms) {
            BenchRow row{family_tag, n, seed, alg, std::nullopt, 0.0, "Ok"};
            const bool inapplicable = (alg == "rvi" && multichain_lake) ||
                                      (alg == "rrvi" && (unichain_lake || multichain_lake));
            if (inapplicable) {
                row.status = "Inapplicable";
            } else {
                try {
                    SolveSettings s;
                    s.algorithm = alg;
                    s.ppe_tol = ppe_tol;
                    s.gap = gap;
                    s.reference = rppi_value ? rmdp::json(*rppi_value).dump() : "auto";
                    const auto report = run_solver(m, s, make_deadline(timeout_seconds));
                    row.value = report.value_at_initial;
                    row.wall_clock_seconds = report.wall_clock_seconds;
                    if (alg == "rppi") rppi_value = report.value_at_initial;
                } catch (const rmdp::timeout_error&) {
                    row.status = "Timeout";
                    row.wall_clock_seconds = timeout_seconds;
                } catch (const std::exception& e) {
                    row.status = "Error";
                    std::cerr << family_tag << " n=" << n << " " << alg << ": " << e.what()
                              << "\n";
                }
            }
            std::lock_guard<std::mutex> lock(rows_mutex);
            rows.push_back(std::move(row));
        }
    };

    if (jobs <= 1) {
        for (int n : sizes) run_instance(n);
    } else {
        std::vector<std::thread> pool;
        std::mutex queue_mutex;
        std::size_t next = 0;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                while (true) {
                    int n;
                    {
                        std::lock_guard<std::mutex> lock(queue_mutex);
                        if (next >= sizes.size()) return;
                        n = sizes[next++];
                    }
                    run_instance(n);
                }
            });
        for (auto& t : pool) t.join();
    }

    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.family, a.n, a.algorithm) < std::tie(b.family, b.n, b.algorithm);
    });
    std::string csv = "family,n,seed,algorithm,value,wall_clock_seconds,status";
    bool any_ok = false;
    for (const auto& r : rows) {
        csv += "\n" + format_row(r);
        any_ok = any_ok || r.status == "Ok";
    }
    write_text(output, csv);
    return any_ok || rows.empty() ? kExitOk : kExitSolver;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polytopic robust MDP solver (long-run average and discounted reward)"};
    app.require_subcommand(1);

    std::string input, output, policy_path;
    std::uint64_t seed = 0;
    double timeout_seconds = 10800;
    int jobs = 1;
    app.add_option("--seed", seed, "Generator seed")->capture_default_str();
    app.add_option("--timeout", timeout_seconds, "Per-solve timeout in seconds")
        ->capture_default_str();
    app.add_option("--jobs", jobs, "Concurrent bench rows")->capture_default_str();
    app.add_option("--output", output, "Output path (default: stdout)");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a benchmark RMDP");
    auto* gen_cont = gen->add_subcommand("contamination");
    int cont_n = 3;
    double cont_r = 0.4;
    gen_cont->add_option("--n", cont_n, "Number of states")->capture_default_str();
    gen_cont->add_option("--r", cont_r, "Contamination level in [0,1]")->capture_default_str();
    auto* gen_lake = gen->add_subcommand("frozen-lake");
    int lake_n = 4;
    double lake_d = 0.2;
    std::string lake_variant = "unichain", lake_holes = "default";
    gen_lake->add_option("--n", lake_n, "Grid side")->capture_default_str();
    gen_lake->add_option("--d", lake_d, "Perturbation magnitude")->capture_default_str();
    gen_lake->add_option("--variant", lake_variant, "unichain|multichain")
        ->capture_default_str();
    gen_lake->add_option("--holes", lake_holes, "Semicolon-separated row,col cells")
        ->capture_default_str();
    auto* gen_tiny = gen->add_subcommand("tiny");
    int tiny_states = 3, tiny_actions = 2, tiny_vertices = 3;
    gen_tiny->add_option("--states", tiny_states)->capture_default_str();
    gen_tiny->add_option("--actions", tiny_actions)->capture_default_str();
    gen_tiny->add_option("--vertices", tiny_vertices)->capture_default_str();

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce an RMDP to its induced game");
    std::string objective = "avg";
    reduce_cmd->add_option("--input", input, "RMDP JSON file")->required();
    reduce_cmd->add_option("--objective", objective, "avg|disc")->capture_default_str();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve an RMDP");
    SolveSettings settings;
    solve_cmd->add_option("--input", input, "RMDP JSON file")->required();
    solve_cmd->add_option("--algorithm", settings.algorithm, "rppi|rvi|rrvi|brute")
        ->capture_default_str();
    solve_cmd->add_option("--ppe-tol", settings.ppe_tol)->capture_default_str();
    solve_cmd->add_option("--reference", settings.reference,
                          "Baseline reference value or 'auto' (runs RPPI first)")
        ->capture_default_str();
    solve_cmd->add_option("--gap", settings.gap, "Baseline stopping gap")
        ->capture_default_str();
    solve_cmd->add_option("--budget", settings.budget, "Brute-force policy budget")
        ->capture_default_str();

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "Check that a policy guarantees a threshold value");
    double threshold = 0.0;
    verify_cmd->add_option("--input", input, "RMDP JSON file")->required();
    verify_cmd->add_option("--policy", policy_path, "Policy JSON file")->required();
    verify_cmd->add_option("--threshold", threshold, "Value threshold")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep to CSV");
    std::string family = "contamination", sizes_text = "3,5,10", algs_text = "rppi,rvi,rrvi";
    double bench_gap = 1e-3;
    bench_cmd->add_option("--family", family,
                          "contamination|frozen-lake-unichain|frozen-lake-multichain")
        ->capture_default_str();
    bench_cmd->add_option("--sizes", sizes_text, "Comma-separated size list")
        ->capture_default_str();
    bench_cmd->add_option("--algorithms", algs_text, "Comma-separated algorithm list")
        ->capture_default_str();
    bench_cmd->add_option("--gap", bench_gap, "Baseline stopping gap")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            rmdp::Rmdp m;
            if (gen_cont->parsed()) {
                m = rmdp::gen_contamination({cont_n, cont_r, seed});
            } else if (gen_lake->parsed()) {
                rmdp::FrozenLakeSpec spec;
                spec.n = lake_n;
                spec.perturbation = lake_d;
                spec.holes = lake_holes == "default" ? rmdp::default_frozen_lake_holes(lake_n)
                                                     : parse_holes(lake_holes);
                spec.variant = lake_variant == "multichain" ? rmdp::LakeVariant::Multichain
                                                            : rmdp::LakeVariant::Unichain;
                spec.seed = seed;
                m = rmdp::gen_frozen_lake(spec);
            } else if (gen_tiny->parsed()) {
                m = rmdp::gen_random_tiny(tiny_states, tiny_actions, tiny_vertices, seed);
            } else {
                std::cerr << "gen: missing family subcommand\n";
                return kExitValidation;
            }
            write_text(output, rmdp::to_json(m).dump(2));
            return kExitOk;
        }

        if (reduce_cmd->parsed()) {
            const auto m = rmdp::rmdp_from_json(read_json(input));
            const auto objective_enum =
                objective == "disc" ? rmdp::Objective::Discounted : rmdp::Objective::LimAvg;
            auto [g, map] = rmdp::reduce(m, objective_enum);
            write_text(output, rmdp::to_json(g).dump(2));
            return kExitOk;
        }

        if (solve_cmd->parsed()) {
            const auto m = rmdp::rmdp_from_json(read_json(input));
            settings.timeout_seconds = timeout_seconds;
            try {
                const auto report = run_solver(m, settings, make_deadline(timeout_seconds));
                write_text(output, rmdp::to_json(report).dump(2));
                return kExitOk;
            } catch (const rmdp::timeout_error& e) {
                std::cerr << e.what() << "\n";
                return kExitTimeout;
            } catch (const std::exception& e) {
                std::cerr << e.what() << "\n";
                return kExitSolver;
            }
        }

        if (verify_cmd->parsed()) {
            const auto m = rmdp::rmdp_from_json(read_json(input));
            const auto policy = rmdp::policy_from_json(read_json(policy_path));
            if (static_cast<int>(policy.choice.size()) != m.n_states) {
                std::cerr << "policy does not cover every state\n";
                return kExitValidation;
            }
            for (int s = 0; s < m.n_states; ++s)
                if (policy(s) < 0 || policy(s) >= m.n_actions) {
                    std::cerr << "policy picks an illegal action at state " << s << "\n";
                    return kExitValidation;
                }
            const auto res = rmdp::verify_agent_policy(m, policy, threshold);
            std::cout << res.inf_value << "\n";
            return res.holds ? kExitOk : kExitVerifyFailed;
        }

        if (bench_cmd->parsed()) {
            std::vector<int> sizes;
            std::stringstream ss(sizes_text);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) sizes.push_back(std::stoi(item));
            std::vector<std::string> algorithms;
            std::stringstream as(algs_text);
            while (std::getline(as, item, ','))
                if (!item.empty()) algorithms.push_back(item);
            return run_bench(family, sizes, algorithms, seed, timeout_seconds,
                             rmdp::kDefaultPpeTol, bench_gap, jobs, output);
        }
    } catch (const rmdp::validation_error& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
