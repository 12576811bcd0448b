#include "capclust/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "capclust/metric.hpp"

namespace capclust {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string ordinal(int lineno) { return "line " + std::to_string(lineno); }

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::vector<long long> parse_numbers(const std::string& line, int lineno) {
    std::istringstream ss(line);
    std::vector<long long> out;
    long long v;
    while (ss >> v) out.push_back(v);
    std::string trailing;
    if (ss.clear(), ss >> trailing)
        throw InputError(ordinal(lineno) + ": unexpected token '" + trailing + "'");
    return out;
}

}  // namespace

CategoricalMatrix read_matrix(std::istream& in, Alphabet* alphabet) {
    std::string line;
    int lineno = 0;
    auto next_content_line = [&]() {
        while (std::getline(in, line)) {
            ++lineno;
            if (!blank(line)) return true;
        }
        return false;
    };
    if (!next_content_line()) throw InputError("empty input: expected 'm n sigma' header");
    auto header = parse_numbers(line, lineno);
    if (header.size() != 3)
        throw InputError(ordinal(lineno) + ": header must be 'm n sigma'");
    long long m = header[0], n = header[1], sigma = header[2];
    if (m < 1 || n < 1 || sigma < 1)
        throw InputError(ordinal(lineno) + ": m, n, sigma must be positive");
    if (m > 1'000'000 || n > 1'000'000 || m * n > 100'000'000)
        throw InputError(ordinal(lineno) + ": matrix dimensions too large");
    std::vector<std::vector<Symbol>> columns(
        static_cast<std::size_t>(n), std::vector<Symbol>(static_cast<std::size_t>(m)));
    for (long long r = 0; r < m; ++r) {
        if (!next_content_line())
            throw InputError("unexpected end of input: expected " + std::to_string(m) +
                             " rows, got " + std::to_string(r));
        auto row = parse_numbers(line, lineno);
        if (static_cast<long long>(row.size()) != n)
            throw InputError(ordinal(lineno) + ": expected " + std::to_string(n) +
                             " symbols, got " + std::to_string(row.size()));
        for (long long j = 0; j < n; ++j) {
            if (row[j] < 0 || row[j] >= sigma)
                throw InputError(ordinal(lineno) + ": symbol " + std::to_string(row[j]) +
                                 " outside [0, " + std::to_string(sigma) + ")");
            columns[j][r] = static_cast<Symbol>(row[j]);
        }
    }
    if (next_content_line())
        throw InputError(ordinal(lineno) + ": trailing content after the matrix");
    if (alphabet) alphabet->size = static_cast<int>(sigma);
    return CategoricalMatrix(static_cast<int>(m), std::move(columns));
}

CategoricalMatrix read_matrix_file(const std::string& path, Alphabet* alphabet) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    return read_matrix(in, alphabet);
}

void write_matrix(std::ostream& out, const CategoricalMatrix& matrix,
                  const Alphabet& alphabet) {
    out << matrix.rows() << ' ' << matrix.cols() << ' ' << alphabet.size << '\n';
    for (int r = 0; r < matrix.rows(); ++r) {
        for (int j = 0; j < matrix.cols(); ++j) {
            if (j) out << ' ';
            out << matrix.column(j)[r];
        }
        out << '\n';
    }
}

std::string report_json(const Instance& inst,
                        const std::optional<Clustering>& result,
                        const std::string& solver_name, const SolveOptions& opts,
                        double elapsed_ms) {
    ordered_json doc;
    doc["answer"] = result.has_value() ? "yes" : "no";
    if (result) {
        doc["cost"] = result->cost;
        ordered_json clusters = ordered_json::array();
        for (const auto& cluster : result->clusters) {
            ordered_json members = ordered_json::array();
            for (int j : cluster) members.push_back(j + 1);
            clusters.push_back(std::move(members));
        }
        doc["clusters"] = std::move(clusters);
        doc["medians"] = result->medians;
    } else {
        doc["cost"] = nullptr;
        doc["clusters"] = nullptr;
        doc["medians"] = nullptr;
    }
    doc["solver"] = solver_name;
    ordered_json params;
    params["variant"] = constraint_name(inst.constraint);
    params["k"] = inst.k;
    params["budget"] = inst.budget;
    if (const auto* cap = std::get_if<Capacitated>(&inst.constraint)) {
        params["p"] = cap->p;
        params["q"] = cap->q;
    } else if (const auto* bal = std::get_if<Balanced>(&inst.constraint)) {
        params["delta"] = bal->delta;
    } else if (const auto* fac = std::get_if<FactorBalanced>(&inst.constraint)) {
        params["alpha"] = std::to_string(fac->num) + "/" + std::to_string(fac->den);
    }
    params["coloring"] =
        opts.coloring == ColoringMode::Random ? "random" : "exhaustive";
    if (opts.coloring == ColoringMode::Random) {
        params["trials"] = opts.trials;
        params["seed"] = opts.seed;
    }
    doc["params"] = std::move(params);
    doc["elapsed_ms"] = static_cast<long long>(std::llround(elapsed_ms));
    return doc.dump(2) + "\n";
}

Generated generate_planted(const GeneratorParams& gp) {
    if (gp.m < 1 || gp.n < 1 || gp.sigma < 1)
        throw InputError("generator: m, n, sigma must be positive");
    if (gp.k < 1 || gp.k > gp.n) throw InputError("generator: need 1 <= k <= n");
    if (gp.edits < 0 || gp.edits > gp.m)
        throw InputError("generator: edits must lie in [0, m]");
    if (gp.edits > 0 && gp.sigma < 2)
        throw InputError("generator: edits need at least two symbols");

    std::mt19937_64 rng(gp.seed);
    auto uniform = [&](int bound) {
        return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
    };
    Generated out;
    out.alphabet = Alphabet{gp.sigma};
    out.centers.assign(gp.k, std::vector<Symbol>(gp.m));
    for (auto& c : out.centers)
        for (auto& v : c) v = uniform(gp.sigma);
    out.planted_cluster.resize(gp.n);
    std::vector<std::vector<Symbol>> columns(gp.n);
    std::vector<int> positions(gp.m);
    std::iota(positions.begin(), positions.end(), 0);
    for (int j = 0; j < gp.n; ++j) {
        int c = j % gp.k;
        out.planted_cluster[j] = c;
        columns[j] = out.centers[c];
        // Partial Fisher-Yates picks `edits` distinct positions.
        for (int e = 0; e < gp.edits; ++e) {
            int pick = e + uniform(gp.m - e);
            std::swap(positions[e], positions[pick]);
            int r = positions[e];
            Symbol shift = 1 + uniform(gp.sigma - 1);
            columns[j][r] = static_cast<Symbol>((columns[j][r] + shift) % gp.sigma);
        }
    }
    out.matrix = CategoricalMatrix(gp.m, std::move(columns));
    for (int j = 0; j < gp.n; ++j)
        out.planted_cost +=
            hamming_distance(out.matrix.column(j), out.centers[out.planted_cluster[j]]);
    return out;
}

std::string planted_json(const GeneratorParams& gp, const Generated& gen) {
    ordered_json doc;
    doc["m"] = gp.m;
    doc["n"] = gp.n;
    doc["sigma"] = gp.sigma;
    doc["k"] = gp.k;
    doc["edits"] = gp.edits;
    doc["seed"] = gp.seed;
    doc["planted_cost"] = gen.planted_cost;
    doc["centers"] = gen.centers;
    ordered_json clusters = ordered_json::array();
    for (int c = 0; c < gp.k; ++c) {
        ordered_json members = ordered_json::array();
        for (int j = 0; j < gp.n; ++j)
            if (gen.planted_cluster[j] == c) members.push_back(j + 1);
        clusters.push_back(std::move(members));
    }
    doc["clusters"] = std::move(clusters);
    return doc.dump(2) + "\n";
}

}  // namespace capclust
