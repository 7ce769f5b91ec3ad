#include <doctest.h>

#include "nami/elimination.hpp"
#include "nami/rng.hpp"
#include "nami/dot.hpp"
#include "nami/generators.hpp"
#include "nami/independence.hpp"
#include "test_util.hpp"

using namespace nami;
using nami::test::ids;
using nami::test::load_fixture;
using nami::test::oracle_ve_scopes;

TEST_CASE("min-fill costs on the student example") {
    BayesNet student = load_fixture("student.json");
    auto id = [&](const char* s) { return student.index_of(s); };
    MarkedGraph j(moralize(student));

    CHECK(min_fill_cost(j, id("D")) == 0);
    // I's unmarked neighbours are {D,G,S}: both G-S and D-S are missing
    CHECK(min_fill_cost(j, id("I")) == 2);

    auto fills = eliminate(j, id("D"));
    CHECK(fills.empty());
    // with D gone, only G-S is missing around I
    CHECK(min_fill_cost(j, id("I")) == 1);
    fills = eliminate(j, id("I"));
    CHECK(fills == std::vector<Edge>{undirected(id("G"), id("S"))});

    CHECK_THROWS_AS(min_fill_cost(j, id("D")), Error);
    CHECK_THROWS_AS(eliminate(j, id("I")), Error);
}

TEST_CASE("min-fill trivial cases") {
    BayesNet iso = BayesNet::from_names({"A", "B"}, {}, {});
    MarkedGraph j(moralize(iso));
    CHECK(min_fill_cost(j, 0) == 0);

    // a node whose three neighbours already form a triangle
    BayesNet tri = BayesNet::from_names(
        {"V", "A", "B", "C"},
        {{"V", "A"}, {"V", "B"}, {"V", "C"}, {"A", "B"}, {"A", "C"}, {"B", "C"}}, {});
    MarkedGraph jt(moralize(tri));
    CHECK(min_fill_cost(jt, 0) == 0);

    // eliminating a leaf with a single unmarked neighbour adds nothing
    BayesNet chain = chain_bn(3, 0);
    MarkedGraph jc(moralize(chain));
    CHECK(eliminate(jc, 2).empty());
}

TEST_CASE("induced graph on the student example") {
    BayesNet student = load_fixture("student.json");
    auto order = ids(student, {"D", "I", "H", "G", "S", "L"});
    EliminationTrace trace;
    MarkedGraph j = induced_graph(student, order, &trace);

    // per-step cliques; the maximal ones match the worked example
    CliqueTree tree = clique_tree(student, order);
    auto clique = [&](std::vector<std::string> names) {
        auto v = ids(student, names);
        std::sort(v.begin(), v.end());
        return v;
    };
    std::vector<std::vector<VarId>> expected_maximal = {
        clique({"D", "I", "G"}), clique({"I", "S", "G"}), clique({"G", "J", "S", "L"}),
        clique({"G", "H", "J"})};
    for (const auto& m : expected_maximal)
        CHECK(std::find(tree.cliques.begin(), tree.cliques.end(), m) != tree.cliques.end());
    for (const auto& c : tree.cliques) {
        bool contained = false;
        for (const auto& m : expected_maximal)
            contained |= std::includes(m.begin(), m.end(), c.begin(), c.end());
        CHECK(contained);
    }

    // replaying the fill log over the moral graph reproduces the result
    UndirectedGraph replay = moralize(student);
    for (const Edge& e : j.fill_log()) replay.add_edge(e.first, e.second);
    CHECK(replay == j.graph());

    CHECK_THROWS_AS(induced_graph(student, ids(student, {"D", "D"}), nullptr), Error);
}

TEST_CASE("induced graph trivial cases") {
    BayesNet chain = BayesNet::from_names({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}}, {});
    MarkedGraph j = induced_graph(chain, {0, 1}, nullptr);
    CHECK(j.fill_log().empty());

    // star with the observed centre: leaves are pairwise non-adjacent but
    // each elimination sees only the centre
    BayesNet star = BayesNet::from_names(
        {"C", "L1", "L2", "L3"}, {{"C", "L1"}, {"C", "L2"}, {"C", "L3"}}, {"C"});
    MarkedGraph js = induced_graph(star, {1, 2, 3}, nullptr);
    CHECK(js.fill_log().empty());
}

TEST_CASE("student clique tree matches the worked example") {
    BayesNet student = load_fixture("student.json");
    auto id = [&](const char* s) { return student.index_of(s); };
    CliqueTree tree = clique_tree(student, ids(student, {"D", "I", "H", "G", "S", "L"}));

    REQUIRE(tree.cliques.size() == 6);
    auto sep = [&](int i) { return tree.sepsets[i]; };
    CHECK(sep(0) == std::vector<VarId>{id("I"), id("G")});  // ascending ids: I(1), G(2)
    CHECK(tree.parent[0] == 1);
    CHECK(sep(1) == std::vector<VarId>{id("G"), id("S")});
    CHECK(tree.parent[1] == 3);
    CHECK(sep(2) == std::vector<VarId>{id("G"), id("J")});
    CHECK(tree.parent[2] == 3);

    CHECK(tree.running_intersection_holds());

    // family preservation: each model factor fits inside its clique
    for (VarId v = 0; v < student.size(); ++v) {
        int c = tree.factor_assignment[v];
        REQUIRE(c >= 0);
        std::vector<VarId> scope = student.parents(v);
        scope.push_back(v);
        std::sort(scope.begin(), scope.end());
        CHECK(std::includes(tree.cliques[c].begin(), tree.cliques[c].end(), scope.begin(),
                            scope.end()));
    }
    // the worked factor assignments
    CHECK(tree.factor_assignment[id("D")] == 0);
    CHECK(tree.factor_assignment[id("G")] == 0);
    CHECK(tree.factor_assignment[id("I")] == 0);
    CHECK(tree.factor_assignment[id("S")] == 1);
}

TEST_CASE("student clique tree for the second ordering") {
    BayesNet student = load_fixture("student.json");
    CliqueTree tree = clique_tree(student, ids(student, {"D", "I", "S", "G", "L", "J", "H"}));
    REQUIRE(tree.cliques.size() == 7);
    CHECK(tree.running_intersection_holds());
    // eliminating everything yields a chain of cliques ending at {H}
    for (int i = 0; i + 1 < 7; ++i) CHECK(tree.parent[i] == i + 1);
    CHECK(tree.parent[6] == -1);
    CHECK(tree.cliques[6] == std::vector<VarId>{student.index_of("H")});
}

TEST_CASE("single latent with one observed child gives one clique") {
    BayesNet bn = BayesNet::from_names({"Z", "X"}, {{"Z", "X"}}, {"X"});
    CliqueTree tree = clique_tree(bn, {0});
    REQUIRE(tree.cliques.size() == 1);
    CHECK(tree.cliques[0] == std::vector<VarId>{0, 1});
    CHECK(tree.parent[0] == -1);
}

TEST_CASE("cliques equal symbolic variable-elimination scopes") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomDagOptions o;
        o.n = 3 + static_cast<int>(seed % 8);  // up to 10
        o.edge_prob = 0.3;
        BayesNet bn = random_dag(o, seed);
        // random order over a random subset
        SplitMix rng(seed * 31 + 7);
        std::vector<VarId> order;
        for (VarId v = 0; v < bn.size(); ++v)
            if (rng.coin(0.7)) order.push_back(v);
        for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
            std::swap(order[i], order[rng.below(i + 1)]);

        CliqueTree tree = clique_tree(bn, order);
        auto scopes = oracle_ve_scopes(bn, order);
        REQUIRE(scopes.size() == tree.cliques.size());
        for (std::size_t i = 0; i < scopes.size(); ++i) CHECK(scopes[i] == tree.cliques[i]);
        CHECK(tree.running_intersection_holds());
    }
}

TEST_CASE("sepsets d-separate upstream from downstream") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        RandomDagOptions o;
        o.n = 3 + static_cast<int>(seed % 6);  // up to 8
        o.edge_prob = 0.35;
        BayesNet bn = random_dag(o, seed);
        auto order = topological_order(bn);
        CliqueTree tree = clique_tree(bn, order);
        for (std::size_t i = 0; i < tree.cliques.size(); ++i) {
            if (tree.parent[i] == -1) continue;
            auto [up, down] = sepset_split(tree, static_cast<int>(i), bn.size());
            if (up.empty() || down.empty()) continue;
            CHECK(d_separated(bn, up, down, tree.sepsets[i]));
        }
    }
}

TEST_CASE("induced graph DOT export marks fills and eliminated nodes") {
    BayesNet student = load_fixture("student.json");
    EliminationTrace trace;
    MarkedGraph j = induced_graph(student, ids(student, {"D", "I"}), &trace);
    std::string dot = induced_to_dot(student, j);
    CHECK(dot.find("style=dotted") != std::string::npos);
    CHECK(dot.find("fillcolor=black") != std::string::npos);
    CHECK(dot.find("\"G\" -- \"S\"") != std::string::npos);
}
