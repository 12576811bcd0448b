#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "capclust/io.hpp"
#include "capclust/kernel.hpp"
#include "capclust/metric.hpp"
#include "capclust/oracle.hpp"
#include "capclust/variants.hpp"

namespace {

using namespace capclust;

struct SolveArgs {
    std::string input;
    std::string output;
    std::string variant = "capacitated";
    int k = 1;
    long long budget = 0;
    int p = -1;
    int q = -1;
    int delta = -1;
    std::string alpha;
    std::string solver = "fpt";
    std::string coloring = "exhaustive";
    long long trials = -1;
    std::uint64_t seed = 0;
    int threads = 1;
    bool kernelize = false;
};

void add_instance_options(CLI::App* cmd, SolveArgs& a, bool required = true) {
    auto* input = cmd->add_option("input", a.input, "instance file, or '-' for stdin");
    auto* k = cmd->add_option("-k,--clusters", a.k, "number of clusters");
    auto* b = cmd->add_option("-B,--budget", a.budget, "cost budget");
    if (required) {
        input->required();
        k->required();
        b->required();
    }
    cmd->add_option("--variant", a.variant,
                    "capacitated|balanced|factor|equal|unconstrained")
        ->default_val("capacitated");
    cmd->add_option("-p,--min-size", a.p, "capacitated: minimum cluster size");
    cmd->add_option("-q,--max-size", a.q, "capacitated: maximum cluster size");
    cmd->add_option("--delta", a.delta, "balanced: maximum size difference");
    cmd->add_option("--alpha", a.alpha, "factor: ratio as N/D or N");
}

void add_solver_options(CLI::App* cmd, SolveArgs& a) {
    cmd->add_option("--coloring", a.coloring, "exhaustive|random")
        ->default_val("exhaustive");
    cmd->add_option("--trials", a.trials, "random coloring trials per cell");
    cmd->add_option("--seed", a.seed, "random coloring seed");
    cmd->add_option("--threads", a.threads, "worker threads")->default_val(1);
}

SizeConstraint build_constraint(const SolveArgs& a) {
    if (a.variant == "capacitated") {
        if (a.p < 0 || a.q < 0)
            throw InputError("the capacitated variant needs -p and -q");
        return Capacitated{a.p, a.q};
    }
    if (a.variant == "balanced") {
        if (a.delta < 0) throw InputError("the balanced variant needs --delta");
        return Balanced{a.delta};
    }
    if (a.variant == "factor") {
        if (a.alpha.empty()) throw InputError("the factor variant needs --alpha");
        long long num = 0, den = 1;
        auto slash = a.alpha.find('/');
        try {
            if (slash == std::string::npos) {
                num = std::stoll(a.alpha);
            } else {
                num = std::stoll(a.alpha.substr(0, slash));
                den = std::stoll(a.alpha.substr(slash + 1));
            }
        } catch (const std::exception&) {
            throw InputError("cannot parse --alpha value: " + a.alpha);
        }
        return FactorBalanced{num, den};
    }
    if (a.variant == "equal") return Equal{};
    if (a.variant == "unconstrained") return Unconstrained{};
    throw InputError("unknown variant: " + a.variant);
}

Instance load_instance(const SolveArgs& a) {
    Instance inst;
    Alphabet alphabet;
    inst.matrix = a.input == "-" ? read_matrix(std::cin, &alphabet)
                                 : read_matrix_file(a.input, &alphabet);
    inst.alphabet = alphabet;
    inst.k = a.k;
    inst.budget = a.budget;
    inst.constraint = build_constraint(a);
    inst.validate();
    return inst;
}

SolveOptions build_options(const SolveArgs& a) {
    SolveOptions opts;
    if (a.coloring == "random")
        opts.coloring = ColoringMode::Random;
    else if (a.coloring == "exhaustive")
        opts.coloring = ColoringMode::Exhaustive;
    else
        throw InputError("unknown coloring mode: " + a.coloring);
    opts.trials = a.trials;
    opts.seed = a.seed;
    opts.threads = a.threads;
    return opts;
}

std::optional<Clustering> dispatch(const Instance& inst, const SolveArgs& a,
                                   const SolveOptions& opts, std::string& solver_name) {
    if (a.solver == "fpt") {
        if (a.kernelize) {
            solver_name = "fpt+kernel";
            return solve_balanced_via_kernel(inst, opts);
        }
        solver_name = "fpt";
        return solve(inst, opts);
    }
    if (a.solver == "brute-partition" || a.solver == "brute-partitions") {
        solver_name = "brute-partition";
        return brute_force_partitions(inst, oracle_caps_from_env());
    }
    if (a.solver == "brute-medians") {
        if (!std::holds_alternative<Capacitated>(inst.constraint))
            throw InputError("brute-medians supports the capacitated variant only");
        solver_name = "brute-medians";
        return brute_force_medians(inst, all_vectors(inst.m(), inst.alphabet.size),
                                   oracle_caps_from_env());
    }
    throw InputError("unknown solver: " + a.solver);
}

int run_solve(const SolveArgs& a) {
    Instance inst = load_instance(a);
    SolveOptions opts = build_options(a);
    std::string solver_name;
    auto t0 = std::chrono::steady_clock::now();
    std::optional<Clustering> result = dispatch(inst, a, opts, solver_name);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (result) {
        std::string err = witness_error(inst, *result);
        if (!err.empty()) throw std::logic_error("invalid witness: " + err);
    }
    std::string json = report_json(inst, result, solver_name, opts, ms);
    if (a.output.empty()) {
        std::cout << json;
    } else {
        std::ofstream out(a.output);
        if (!out) throw InputError("cannot write file: " + a.output);
        out << json;
    }
    return result ? 0 : 1;
}

int run_generate(const GeneratorParams& gp, const std::string& output) {
    Generated gen = generate_planted(gp);
    if (output.empty() || output == "-") {
        write_matrix(std::cout, gen.matrix, gen.alphabet);
        return 0;
    }
    std::ofstream inst(output);
    if (!inst) throw InputError("cannot write file: " + output);
    write_matrix(inst, gen.matrix, gen.alphabet);
    std::ofstream side(output + ".json");
    if (!side) throw InputError("cannot write file: " + output + ".json");
    side << planted_json(gp, gen);
    return 0;
}

struct GridSpec {
    int max_n = 6;
    int max_m = 2;
    int max_sigma = 3;
    int max_k = 3;
    long long max_budget = 3;
    long long random_count = 0;
};

std::string describe_instance(const Instance& inst) {
    std::ostringstream os;
    os << "n=" << inst.n() << " m=" << inst.m() << " sigma=" << inst.alphabet.size
       << " k=" << inst.k << " B=" << inst.budget
       << " constraint=" << constraint_name(inst.constraint);
    if (const auto* cap = std::get_if<Capacitated>(&inst.constraint))
        os << " p=" << cap->p << " q=" << cap->q;
    if (const auto* bal = std::get_if<Balanced>(&inst.constraint))
        os << " delta=" << bal->delta;
    return os.str();
}

// Compares one instance between the chosen pair of solvers. Returns the number
// of disagreements found (0 or 1); `misses` counts yes-instances the one-sided
// random coloring mode failed to find, which is not a correctness violation.
int crosscheck_one(const Instance& inst, const std::string& oracle,
                   const SolveOptions& opts, long long& misses) {
    const OracleCaps caps = oracle_caps_from_env();
    std::optional<Clustering> ref;
    std::optional<Clustering> got;
    if (oracle == "kernel") {
        if (!std::holds_alternative<Balanced>(inst.constraint))
            throw InputError("the kernel pair supports the balanced variant only");
        ref = brute_force_partitions(inst, caps);
        KernelOutcome out = kernelize_balanced(inst);
        bool answer = out.kind == KernelOutcome::Kind::Resolved
                          ? out.answer
                          : brute_force_partitions(*out.instance, caps).has_value();
        if (answer != ref.has_value()) {
            std::cout << "MISMATCH: kernel route says " << (answer ? "yes" : "no")
                      << ", partition oracle says " << (ref ? "yes" : "no") << " on "
                      << describe_instance(inst) << "\n";
            return 1;
        }
        return 0;
    }
    if (oracle == "partitions") {
        ref = brute_force_partitions(inst, caps);
        got = solve(inst, opts);
    } else if (oracle == "medians") {
        if (!std::holds_alternative<Capacitated>(inst.constraint))
            throw InputError("the medians oracle supports the capacitated variant only");
        ref = brute_force_partitions(inst, caps);
        got = brute_force_medians(inst, all_vectors(inst.m(), inst.alphabet.size),
                                  caps);
    } else {
        throw InputError("unknown oracle: " + oracle);
    }
    if (got && !ref) {
        std::cout << "MISMATCH: solver says yes, oracle says no on "
                  << describe_instance(inst) << "\n";
        return 1;
    }
    if (!got && ref) {
        // The random coloring mode is one-sided: a missed yes is a statistical
        // event, not a disagreement. Exhaustive mode must never miss.
        if (oracle == "partitions" && opts.coloring == ColoringMode::Random) {
            ++misses;
            return 0;
        }
        std::cout << "MISMATCH: solver says no, oracle says yes on "
                  << describe_instance(inst) << "\n";
        return 1;
    }
    if (got) {
        std::string err = witness_error(inst, *got);
        if (!err.empty()) {
            std::cout << "MISMATCH: invalid witness (" << err << ") on "
                      << describe_instance(inst) << "\n";
            return 1;
        }
    }
    return 0;
}

int run_crosscheck_single(const SolveArgs& a, const std::string& oracle) {
    Instance inst = load_instance(a);
    SolveOptions opts = build_options(a);
    long long misses = 0;
    int bad = crosscheck_one(inst, oracle, opts, misses);
    if (bad == 0) {
        if (misses)
            std::cout << "agree: one-sided miss (oracle yes, random coloring found "
                         "no witness)\n";
        else
            std::cout << "agree\n";
    }
    return bad ? 1 : 0;
}

int run_crosscheck_grid(const GridSpec& g, const std::string& oracle,
                        const SolveOptions& opts) {
    std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    long long checked = 0, disagreements = 0, misses = 0;
    auto random_matrix = [&rng](int rows, int cols, int sigma) {
        std::vector<std::vector<Symbol>> columns(cols, std::vector<Symbol>(rows));
        for (auto& col : columns)
            for (auto& v : col) v = static_cast<Symbol>(rng() % sigma);
        return CategoricalMatrix(rows, std::move(columns));
    };
    auto run_one = [&](CategoricalMatrix matrix, int sigma, int k, Cost budget,
                       SizeConstraint constraint) {
        Instance inst;
        inst.matrix = std::move(matrix);
        inst.alphabet = Alphabet{sigma};
        inst.k = k;
        inst.budget = budget;
        inst.constraint = std::move(constraint);
        ++checked;
        disagreements += crosscheck_one(inst, oracle, opts, misses);
    };
    auto constraints_for = [&](int n) {
        std::vector<SizeConstraint> out;
        if (oracle == "kernel") {
            for (int delta = 0; delta <= 2; ++delta) out.push_back(Balanced{delta});
        } else {
            out.push_back(Capacitated{1, n});
            int p = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            int q = p + static_cast<int>(rng() % static_cast<std::uint64_t>(n - p + 1));
            out.push_back(Capacitated{p, q});
        }
        return out;
    };

    for (int n = 2; n <= g.max_n; ++n)
        for (int m = 1; m <= g.max_m; ++m)
            for (int sigma = 2; sigma <= g.max_sigma; ++sigma)
                for (int k = 1; k <= g.max_k; ++k)
                    for (Cost b = 0; b <= g.max_budget; ++b) {
                        auto matrix = random_matrix(m, n, sigma);
                        for (auto& c : constraints_for(n))
                            run_one(matrix, sigma, k, b, c);
                    }
    for (long long r = 0; r < g.random_count; ++r) {
        int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(g.max_n - 1));
        int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(g.max_m));
        int sigma =
            2 + static_cast<int>(rng() % static_cast<std::uint64_t>(g.max_sigma - 1));
        int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(g.max_k));
        Cost b = static_cast<Cost>(rng() % static_cast<std::uint64_t>(g.max_budget + 1));
        auto matrix = random_matrix(m, n, sigma);
        for (auto& c : constraints_for(n)) run_one(matrix, sigma, k, b, c);
    }

    std::cout << "checked " << checked << " instances: " << disagreements
              << " disagreements";
    if (misses) std::cout << ", " << misses << " one-sided random-coloring misses";
    std::cout << "\n";
    return disagreements ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Categorical clustering under Hamming cost with cluster size constraints"};
    app.require_subcommand(1);

    SolveArgs sa;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "decide an instance and print a JSON report");
    add_instance_options(solve_cmd, sa);
    solve_cmd->add_option("--solver", sa.solver, "fpt|brute-partitions|brute-medians")
        ->default_val("fpt");
    add_solver_options(solve_cmd, sa);
    solve_cmd->add_flag("--kernelize", sa.kernelize,
                        "balanced only: kernelize before solving");
    solve_cmd->add_option("-o,--output", sa.output, "report file (default stdout)");

    GeneratorParams gp;
    std::string gen_output;
    CLI::App* gen_cmd =
        app.add_subcommand("generate", "write a planted random instance");
    gen_cmd->add_option("-m,--rows", gp.m, "rows")->default_val(4);
    gen_cmd->add_option("-n,--cols", gp.n, "columns")->default_val(8);
    gen_cmd->add_option("--sigma", gp.sigma, "alphabet size")->default_val(2);
    gen_cmd->add_option("-k,--clusters", gp.k, "planted clusters")->default_val(2);
    gen_cmd->add_option("--edits", gp.edits, "edits per column")->default_val(1);
    gen_cmd->add_option("--seed", gp.seed, "generator seed")->default_val(0);
    gen_cmd->add_option("-o,--output", gen_output,
                        "instance file; a .json sidecar describes the plant");

    SolveArgs ca;
    GridSpec grid;
    std::string oracle = "partitions";
    CLI::App* cross_cmd = app.add_subcommand(
        "crosscheck",
        "compare solver pairs on one instance, or on a grid of random instances");
    add_instance_options(cross_cmd, ca, /*required=*/false);
    add_solver_options(cross_cmd, ca);
    cross_cmd->add_option("--oracle", oracle,
                          "reference pair: partitions (vs fpt), medians (vs "
                          "partition oracle), kernel (balanced route vs oracle)")
        ->default_val("partitions");
    cross_cmd->add_option("--max-n", grid.max_n, "grid mode: largest column count")
        ->default_val(6);
    cross_cmd->add_option("--max-m", grid.max_m, "grid mode: largest row count")
        ->default_val(2);
    cross_cmd->add_option("--max-sigma", grid.max_sigma,
                          "grid mode: largest alphabet")
        ->default_val(3);
    cross_cmd->add_option("--max-k", grid.max_k, "grid mode: largest cluster count")
        ->default_val(3);
    cross_cmd->add_option("--max-budget", grid.max_budget,
                          "grid mode: largest budget")
        ->default_val(3);
    cross_cmd->add_option("--random", grid.random_count,
                          "grid mode: extra seeded random instances")
        ->default_val(0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(sa);
        if (gen_cmd->parsed()) return run_generate(gp, gen_output);
        if (ca.input.empty())
            return run_crosscheck_grid(grid, oracle, build_options(ca));
        if (cross_cmd->count("-k") == 0 || cross_cmd->count("-B") == 0)
            throw InputError("single-instance crosscheck needs -k and -B");
        return run_crosscheck_single(ca, oracle);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
