#include "nami/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "nami/generators.hpp"

namespace nami {

BenchFamily bench_family_from_string(const std::string& s) {
    if (s == "chain") return BenchFamily::Chain;
    if (s == "tree") return BenchFamily::Tree;
    if (s == "random") return BenchFamily::Random;
    throw Error("unknown bench family: " + s);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

BayesNet instance_for(BenchFamily family, int size, std::uint64_t seed) {
    switch (family) {
        case BenchFamily::Chain:
            return chain_bn(size, 1);
        case BenchFamily::Tree:
            return binary_tree_bn(size);
        case BenchFamily::Random: {
            RandomDagOptions opts;
            opts.n = size;
            opts.edge_prob = std::min(0.5, 4.0 / size);
            opts.observed_prob = 0.3;
            return random_dag(opts, seed);
        }
    }
    throw Error("unknown bench family");
}

}  // namespace

std::vector<BenchRow> run_bench(BenchFamily family, const std::vector<int>& sizes,
                                InverseMode mode, std::uint64_t seed) {
    std::vector<BenchRow> rows;
    for (int size : sizes) {
        BayesNet bn = instance_for(family, size, seed);

        auto t0 = Clock::now();
        InverseStructure inv = nami_invert(bn, mode);
        auto t1 = Clock::now();
        double once = ms_between(t0, t1);

        // repeat small instances until the window is ~50ms so the reported
        // per-inversion time is stable enough for ratio checks
        int reps = once >= 50.0 ? 1 : std::min(10000, static_cast<int>(50.0 / std::max(once, 1e-4)) + 1);
        if (reps > 1) {
            t0 = Clock::now();
            for (int r = 0; r < reps; ++r) {
                InverseStructure again = nami_invert(bn, mode);
                if (again.elim_order.size() != inv.elim_order.size())
                    throw Error("bench: nondeterministic inversion");
            }
            t1 = Clock::now();
            once = ms_between(t0, t1) / reps;
        }
        rows.push_back({bn.size(), inv.largest_clique(), once});
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "n,c,wall_ms\n";
    for (const auto& r : rows) os << r.n << "," << r.c << "," << r.wall_ms << "\n";
    return os.str();
}

}  // namespace nami
