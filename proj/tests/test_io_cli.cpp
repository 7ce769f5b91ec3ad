#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "nami/dot.hpp"
#include "nami/generators.hpp"
#include "nami/json_io.hpp"
#include "nami/verification.hpp"
#include "test_util.hpp"

using namespace nami;
using nami::test::fixture_path;
using nami::test::load_fixture;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(NAMI_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
        res.out.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_file(const std::string& name) {
    return std::string("/tmp/nami_test_") + name;
}

}  // namespace

TEST_CASE("bn json round trip") {
    BayesNet student = load_fixture("student.json");
    BayesNet again = bn_from_json(bn_to_json(student));
    CHECK(again.same_universe(student));
    CHECK(again.edges() == student.edges());
    CHECK(again.observed() == student.observed());

    json dup = bn_to_json(student);
    dup["edges"].push_back(json::array({"D", "G"}));
    CHECK_THROWS_AS(bn_from_json(dup), Error);

    json cyc = bn_to_json(student);
    cyc["edges"].push_back(json::array({"H", "D"}));
    CHECK_THROWS_AS(bn_from_json(cyc), Error);

    json unknown = bn_to_json(student);
    unknown["edges"].push_back(json::array({"D", "QQ"}));
    CHECK_THROWS_AS(bn_from_json(unknown), Error);
}

TEST_CASE("inverse json round trip") {
    BayesNet student = load_fixture("student.json");
    for (auto mode : {InverseMode::Forward, InverseMode::Reverse}) {
        InverseStructure inv = nami_invert(student, mode);
        InverseStructure again = inverse_from_json(inverse_to_json(inv));
        CHECK(again.graph.edges() == inv.graph.edges());
        CHECK(again.elim_order == inv.elim_order);
        CHECK(again.mode == inv.mode);
    }
    InverseStructure mf = mean_field_inverse(student);
    json j = inverse_to_json(mf);
    CHECK_FALSE(j.contains("elim_order"));
    CHECK(inverse_from_json(j).mode == InverseMode::MeanField);

    json bad = inverse_to_json(nami_invert(student, InverseMode::Forward));
    bad.erase("elim_order");
    CHECK_THROWS_AS(inverse_from_json(bad), Error);
}

TEST_CASE("discrete bn json carries tables in any parent order") {
    BayesNet student = load_fixture("student.json");
    DiscreteBN d = random_discrete_bn(student, 3, 3);
    json j = discrete_bn_to_json(d);
    DiscreteBN again = discrete_bn_from_json(j);
    for (VarId v = 0; v < student.size(); ++v) {
        CHECK(again.card(v) == d.card(v));
        CHECK(again.cpd(v).values() == d.cpd(v).values());
    }

    // permute the parent listing of G and its table accordingly
    json perm = j;
    auto& entry = perm["cpds"]["G"];
    REQUIRE(entry["parents"] == json::array({"D", "I"}));
    entry["parents"] = json::array({"I", "D"});
    const Factor& f = d.cpd(student.index_of("G"));
    int cd = d.card(student.index_of("D")), ci = d.card(student.index_of("I")),
        cg = d.card(student.index_of("G"));
    std::vector<double> swapped(f.values().size());
    for (int a = 0; a < cd; ++a)
        for (int b = 0; b < ci; ++b)
            for (int c = 0; c < cg; ++c)
                swapped[(b * cd + a) * cg + c] = f.values()[(a * ci + b) * cg + c];
    entry["table"] = swapped;
    DiscreteBN perm_bn = discrete_bn_from_json(perm);
    CHECK(perm_bn.cpd(student.index_of("G")).values() == f.values());

    json badrow = j;
    badrow["cpds"]["D"]["table"][0] = 0.9;
    CHECK_THROWS_AS(discrete_bn_from_json(badrow), Error);
}

TEST_CASE("independence set serialization") {
    BayesNet chain = BayesNet::from_names({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}}, {});
    json j = indep_set_to_json(enumerate_independencies(chain), chain);
    // (A ⟂ C | B) is the only assertion
    REQUIRE(j.size() == 1);
    CHECK(j[0] == json::array({"A", json::array({"B"}), json::array({"C"})}));
}

TEST_CASE("npy export is well formed") {
    MaskMatrix m = MaskMatrix::zeros(2, 3);
    m.at(0, 1) = 1;
    m.at(1, 2) = 1;
    std::string path = temp_file("mask.npy");
    write_npy_u8(path, m);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.size() % 64 == 6);  // header padded to 64, then 6 payload bytes
    CHECK(content.substr(1, 5) == "NUMPY");
    CHECK(content.find("'shape': (2, 3)") != std::string::npos);
    CHECK(content.substr(content.size() - 6) == std::string("\x00\x01\x00\x00\x00\x01", 6));
}

TEST_CASE("mask spec round trip") {
    MaskSpec spec = tree_made_spec(3, {8, 8}, 5);
    MaskStack stack = subset_masks(spec);
    json j = mask_bundle_to_json(stack, spec);
    MaskSpec again = mask_spec_from_json(j);
    MaskStack stack2 = subset_masks(again);
    REQUIRE(stack.masks.size() == stack2.masks.size());
    for (std::size_t i = 0; i < stack.masks.size(); ++i)
        CHECK(stack.masks[i].data == stack2.masks[i].data);
}

TEST_CASE("cli invert round trips and re-verifies") {
    std::string out = temp_file("inv.json");
    RunResult r = run_cli("invert " + fixture_path("student.json") +
                          " --mode forward --out " + out);
    CHECK(r.exit_code == 0);
    RunResult v = run_cli("verify " + fixture_path("student.json") + " " + out);
    CHECK(v.exit_code == 0);

    // dot output mirrors the inversion's parent assignments
    RunResult d = run_cli("invert " + fixture_path("student.json") + " --mode forward --format dot");
    CHECK(d.exit_code == 0);
    CHECK(d.out.find("\"G\" -> \"D\"") != std::string::npos);
    CHECK(d.out.find("\"I\" -> \"D\"") != std::string::npos);
    CHECK(d.out.find("\"G\" -> \"I\"") != std::string::npos);
    CHECK(d.out.find("\"S\" -> \"I\"") != std::string::npos);

    RunResult heur = run_cli("invert " + fixture_path("fig1a.json") + " --mode heuristic");
    CHECK(heur.exit_code == 0);
    json hj = json::parse(heur.out);
    CHECK(hj["edges"].size() == 4);

    RunResult mf = run_cli("invert " + fixture_path("fig1a.json") + " --mode mean-field");
    json mj = json::parse(mf.out);
    for (const auto& e : mj["edges"]) {
        std::string from = e[0].get<std::string>();
        CHECK((from == "D" || from == "E"));
    }
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("invert /nonexistent.json --mode forward").exit_code == 3);

    std::string garbled = temp_file("garbled.json");
    std::ofstream(garbled) << "{ not json";
    CHECK(run_cli("invert " + garbled + " --mode forward").exit_code == 2);

    std::string badname = temp_file("badname.json");
    std::ofstream(badname) << R"({"variables":[{"name":"A"}],"edges":[["A","B"]]})";
    CHECK(run_cli("invert " + badname + " --mode forward").exit_code == 3);

    CHECK(run_cli("invert " + fixture_path("fig1a.json") + " --mode nosuch").exit_code == 3);
    CHECK(run_cli("invert " + fixture_path("fig1a.json") +
                  " --mode heuristic --groups '[[\"A\"],[\"B\",\"C\"]]'")
              .exit_code == 3);

    // verify: property failure is exit 1 with the witness printed
    std::string heur = temp_file("heur.json");
    REQUIRE(run_cli("invert " + fixture_path("fig1a.json") + " --mode heuristic --out " + heur)
                .exit_code == 0);
    RunResult v = run_cli("verify " + fixture_path("fig1a.json") + " " + heur);
    CHECK(v.exit_code == 1);
    CHECK(v.out.find("(B ⊥ C | ∅)") != std::string::npos);

    // an inverse with a latent -> observed edge is rejected as input
    std::string invalid = temp_file("invalid_inverse.json");
    json inv_j = load_json_file(fixture_path("fig1a.json"));
    inv_j["mode"] = "mean-field";
    std::ofstream(invalid) << inv_j.dump();
    CHECK(run_cli("verify " + fixture_path("fig1a.json") + " " + invalid).exit_code == 3);
}

TEST_CASE("cli verify json report and independencies") {
    std::string inv = temp_file("fwd_inv.json");
    REQUIRE(run_cli("invert " + fixture_path("fig1a.json") + " --mode forward --out " + inv)
                .exit_code == 0);
    RunResult r = run_cli("verify " + fixture_path("fig1a.json") + " " + inv +
                          " --json --emit-independencies");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["is_imap"] == true);
    CHECK(j["is_minimal_imap"] == true);
    CHECK(j["is_natural"] == true);
    CHECK(j.contains("independencies"));

    // human-readable output appends the independency list on its own line
    RunResult h = run_cli("verify " + fixture_path("fig1a.json") + " " + inv +
                          " --emit-independencies");
    CHECK(h.exit_code == 0);
    CHECK(h.out.find("is_imap: true") != std::string::npos);
    auto bracket = h.out.find("\n[");
    REQUIRE(bracket != std::string::npos);
    json indep = json::parse(h.out.substr(bracket + 1));
    CHECK(indep.is_array());
}

TEST_CASE("cli kl") {
    std::string inv = temp_file("kl_inv.json");
    REQUIRE(run_cli("invert " + fixture_path("fig1a.json") + " --mode forward --out " + inv)
                .exit_code == 0);
    RunResult r = run_cli("kl " + fixture_path("fig1a_discrete.json") + " " + inv);
    CHECK(r.exit_code == 0);
    CHECK(std::abs(std::stod(r.out)) <= 1e-9);

    std::string heur = temp_file("kl_heur.json");
    REQUIRE(run_cli("invert " + fixture_path("fig1a.json") + " --mode heuristic --out " + heur)
                .exit_code == 0);
    RunResult rh = run_cli("kl " + fixture_path("fig1a_discrete.json") + " " + heur);
    CHECK(rh.exit_code == 0);
    CHECK(std::stod(rh.out) > 1e-3);

    std::string fc = temp_file("kl_fc.json");
    REQUIRE(run_cli("invert " + fixture_path("fig1a.json") + " --mode full --out " + fc)
                .exit_code == 0);
    RunResult rf = run_cli("kl " + fixture_path("fig1a_discrete.json") + " " + fc);
    CHECK(std::abs(std::stod(rf.out)) <= 1e-10);
}

TEST_CASE("cli trace") {
    RunResult single = run_cli("trace " + fixture_path("fig1a.json") + " --mode forward");
    CHECK(single.exit_code == 0);
    CHECK(single.out.find("0: moralize") == 0);

    BayesNet one = BayesNet::from_names({"z", "x"}, {{"z", "x"}}, {"x"});
    std::string path = temp_file("one.json");
    std::ofstream(path) << bn_to_json(one).dump();
    RunResult r = run_cli("trace " + path + " --mode forward");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "0: moralize fill=∅\n1: S={z} v=z fill=∅ Pa={x}\n");

    // reverse trace of the depth-3 tree ends in the compact inverse shape
    std::string tree_path = temp_file("tree3.json");
    std::ofstream(tree_path) << bn_to_json(binary_tree_bn(3)).dump();
    RunResult t = run_cli("trace " + tree_path + " --mode reverse");
    CHECK(t.exit_code == 0);
    CHECK(t.out.find("v=X1") != std::string::npos);
    CHECK(t.out.find("Pa={X0,X3,X4}") != std::string::npos);
    CHECK(t.out.find("Pa={X0,X5,X6}") != std::string::npos);
    CHECK(t.out.find("Pa={X3,X4,X5,X6}") != std::string::npos);
}

TEST_CASE("cli masks with npy output") {
    std::string out = temp_file("masks.json");
    std::string prefix = temp_file("masks");
    RunResult r = run_cli("masks --kind made --latents 3 --observed 2 --hidden 8,8 --seed 1 --out " +
                          out + " --npy-prefix " + prefix);
    CHECK(r.exit_code == 0);
    json j = load_json_file(out);
    CHECK(j["kind"] == "made");
    CHECK(j["masks"].size() == 3);
    std::ifstream npy(prefix + ".w0.npy", std::ios::binary);
    CHECK(npy.good());

    RunResult t = run_cli("masks --kind tree --depth 3 --hidden 16 --seed 0");
    CHECK(t.exit_code == 0);
    json tj = json::parse(t.out);
    CHECK(tj["kind"] == "tree");
    CHECK(tj["layer_sizes"][0] == 7);
}

TEST_CASE("cli bench csv is structurally deterministic") {
    RunResult a = run_cli("bench --family random --sizes 20,40 --seed 5");
    RunResult b = run_cli("bench --family random --sizes 20,40 --seed 5");
    CHECK(a.exit_code == 0);
    auto structure = [](const std::string& csv) {
        std::string out;
        std::stringstream ss(csv);
        std::string line;
        while (std::getline(ss, line)) {
            auto second_comma = line.find(',', line.find(',') + 1);
            out += line.substr(0, second_comma) + "\n";
        }
        return out;
    };
    CHECK(structure(a.out) == structure(b.out));
    CHECK(a.out.substr(0, 12) == "n,c,wall_ms\n");

    RunResult t = run_cli("bench --family tree --sizes 3,4,5 --mode reverse");
    CHECK(t.exit_code == 0);
    std::stringstream ss(t.out);
    std::string line;
    std::getline(ss, line);
    std::vector<int> ns;
    while (std::getline(ss, line)) ns.push_back(std::stoi(line.substr(0, line.find(','))));
    CHECK(ns == std::vector<int>{7, 15, 31});
}

TEST_CASE("enumeration cap env override") {
    BayesNet big = chain_bn(15, 1);
    std::string model = temp_file("big.json");
    std::ofstream(model) << bn_to_json(big).dump();
    std::string inv = temp_file("big_inv.json");
    REQUIRE(run_cli("invert " + model + " --mode forward --out " + inv).exit_code == 0);

    // above the default cap the report is sampled; raising the cap by env
    // var restores the exhaustive check
    RunResult sampled = run_cli("verify " + model + " " + inv + " --json");
    CHECK(sampled.exit_code == 0);
    CHECK(json::parse(sampled.out)["sampled"] == true);

    RunResult exact = run_cli(std::string("verify ") + model + " " + inv + " --cap 15 --json");
    CHECK(exact.exit_code == 0);
    CHECK(json::parse(exact.out)["sampled"] == false);

    std::string cmd = std::string("NAMI_ENUM_CAP=15 ") + NAMI_CLI_PATH + " verify " + model +
                      " " + inv + " --json 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    REQUIRE(pclose(pipe) == 0);
    CHECK(json::parse(out)["sampled"] == false);
}

TEST_CASE("dot exports shade observed nodes") {
    BayesNet student = load_fixture("student.json");
    std::string dot = to_dot(student);
    CHECK(dot.find("\"J\" [style=filled, fillcolor=gray80]") != std::string::npos);
    CHECK(dot.find("\"D\" -> \"G\"") != std::string::npos);

    CliqueTree tree = clique_tree(student, nami::test::ids(student, {"D", "I", "H", "G", "S", "L"}));
    std::string cdot = clique_tree_to_dot(student, tree);
    CHECK(cdot.find("label=\"I,G\"") != std::string::npos);
}
