#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nami/inversion.hpp"

namespace nami {

enum class BenchFamily { Chain, Tree, Random };

BenchFamily bench_family_from_string(const std::string& s);

struct BenchRow {
    int n = 0;        // variable count of the instance
    int c = 0;        // largest elimination clique
    double wall_ms = 0.0;
};

/// Inverts one instance per size and reports wall time per inversion.
/// Small instances are repeated until the measurement window is long
/// enough for a stable ratio. For the tree family, sizes are depths.
std::vector<BenchRow> run_bench(BenchFamily family, const std::vector<int>& sizes,
                                InverseMode mode, std::uint64_t seed);

/// Header "n,c,wall_ms" plus one row per instance.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace nami
