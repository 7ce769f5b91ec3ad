#include <doctest.h>

#include "nami/generators.hpp"
#include "nami/graph.hpp"
#include "nami/independence.hpp"
#include "test_util.hpp"

using namespace nami;
using nami::test::fixture_path;
using nami::test::load_fixture;

namespace {

BayesNet chain3() {
    return BayesNet::from_names({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}}, {});
}

}  // namespace

TEST_CASE("constructor rejects bad input") {
    CHECK_THROWS_AS(BayesNet::from_names({"A", "B"}, {{"A", "B"}, {"B", "A"}}, {}), Error);
    CHECK_THROWS_AS(BayesNet::from_names({"A", "A"}, {}, {}), Error);
    CHECK_THROWS_AS(BayesNet::from_names({"A", "B"}, {{"A", "B"}, {"A", "B"}}, {}), Error);
    CHECK_THROWS_AS(BayesNet::from_names({"A"}, {{"A", "A"}}, {}), Error);
    CHECK_THROWS_AS(BayesNet::from_names({"A"}, {}, {"Z"}), Error);
}

TEST_CASE("topological order") {
    CHECK(topological_order(chain3()) == std::vector<VarId>{0, 1, 2});

    BayesNet edgeless = BayesNet::from_names({"X", "Y", "Z"}, {}, {});
    CHECK(topological_order(edgeless) == std::vector<VarId>{0, 1, 2});

    BayesNet student = load_fixture("student.json");
    auto order = topological_order(student);
    std::vector<int> pos(student.size());
    for (int i = 0; i < student.size(); ++i) pos[order[i]] = i;
    for (const Edge& e : student.edges()) CHECK(pos[e.first] < pos[e.second]);
}

TEST_CASE("topological order is a consistent permutation on random dags") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RandomDagOptions o;
        o.n = 2 + static_cast<int>(seed % 11);
        o.edge_prob = 0.3;
        BayesNet bn = random_dag(o, seed);
        auto order = topological_order(bn);
        REQUIRE(static_cast<int>(order.size()) == bn.size());
        std::vector<int> pos(bn.size(), -1);
        for (int i = 0; i < bn.size(); ++i) {
            REQUIRE(pos[order[i]] == -1);
            pos[order[i]] = i;
        }
        for (const Edge& e : bn.edges()) CHECK(pos[e.first] < pos[e.second]);
    }
}

TEST_CASE("skeleton") {
    BayesNet ab = BayesNet::from_names({"A", "B"}, {{"A", "B"}}, {});
    CHECK(skeleton(ab).edges() == std::vector<Edge>{{0, 1}});

    BayesNet fig1a = load_fixture("fig1a.json");
    auto edges = skeleton(fig1a).edges();
    CHECK(edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 4}});

    BayesNet empty = BayesNet::from_names({"X", "Y"}, {}, {});
    CHECK(skeleton(empty).edges().empty());
}

TEST_CASE("immoralities") {
    BayesNet v = BayesNet::from_names({"X", "Y", "Z"}, {{"X", "Z"}, {"Y", "Z"}}, {});
    CHECK(immoralities(v) == std::vector<std::tuple<VarId, VarId, VarId>>{{0, 2, 1}});

    BayesNet covered =
        BayesNet::from_names({"X", "Y", "Z"}, {{"X", "Z"}, {"Y", "Z"}, {"X", "Y"}}, {});
    CHECK(immoralities(covered).empty());

    BayesNet student = load_fixture("student.json");
    auto im = immoralities(student);
    auto has = [&](const char* a, const char* z, const char* b) {
        return std::find(im.begin(), im.end(),
                         std::tuple<VarId, VarId, VarId>{student.index_of(a),
                                                         student.index_of(z),
                                                         student.index_of(b)}) != im.end();
    };
    CHECK(has("D", "G", "I"));
    CHECK(has("S", "J", "L"));
}

TEST_CASE("moralize") {
    BayesNet student = load_fixture("student.json");
    UndirectedGraph moral = moralize(student);
    UndirectedGraph skel = skeleton(student);
    auto id = [&](const char* s) { return student.index_of(s); };
    CHECK(moral.has_edge(id("D"), id("I")));
    CHECK(moral.has_edge(id("S"), id("L")));
    CHECK(moral.has_edge(id("G"), id("J")));
    CHECK(moral.edge_count() == skel.edge_count() + 3);

    CHECK(moralize(chain3()).edges() == std::vector<Edge>{{0, 1}, {1, 2}});

    BayesNet v = BayesNet::from_names({"X", "Y", "Z"}, {{"X", "Z"}, {"Y", "Z"}}, {});
    CHECK(moralize(v).edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("skeleton is an edge subset of the moral graph; equality iff no immoralities") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        RandomDagOptions o;
        o.n = 2 + static_cast<int>(seed % 8);
        o.edge_prob = 0.15 + 0.05 * (seed % 7);
        BayesNet bn = random_dag(o, seed);
        UndirectedGraph skel = skeleton(bn);
        UndirectedGraph moral = moralize(bn);
        for (const Edge& e : skel.edges()) CHECK(moral.has_edge(e.first, e.second));
        CHECK((immoralities(bn).empty() == (moral == skel)));
    }
}

TEST_CASE("markov blanket") {
    BayesNet fig1a = load_fixture("fig1a.json");
    auto id = [&](const char* s) { return fig1a.index_of(s); };
    CHECK(markov_blanket(fig1a, id("A")) == std::vector<VarId>{id("B"), id("C")});
    CHECK(markov_blanket(fig1a, id("B")) == std::vector<VarId>{id("A"), id("D")});

    BayesNet iso = BayesNet::from_names({"X", "Y"}, {}, {});
    CHECK(markov_blanket(iso, 0).empty());
}

TEST_CASE("markov blanket d-separates the variable from everything else") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        RandomDagOptions o;
        o.n = 2 + static_cast<int>(seed % 7);
        o.edge_prob = 0.35;
        BayesNet bn = random_dag(o, seed);
        for (VarId v = 0; v < bn.size(); ++v) {
            VarSet mb = VarSet::from(bn.size(), markov_blanket(bn, v));
            VarSet rest = mb.complement();
            rest.reset(v);
            rest -= mb;
            CHECK(d_separated(bn, VarSet::of(bn.size(), {v}), rest, mb));
        }
    }
}

TEST_CASE("varset basics") {
    VarSet s(130);
    s.set(0);
    s.set(64);
    s.set(129);
    CHECK(s.count() == 3);
    CHECK(s.to_vector() == std::vector<VarId>{0, 64, 129});
    VarSet t = s.complement();
    CHECK(t.count() == 127);
    CHECK_FALSE(t.test(64));
    t &= s;
    CHECK(t.empty());
}
