#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "fixtures.hpp"
#include "retra/construction.hpp"
#include "retra/enumerate.hpp"

using namespace retra;

TEST_CASE("tree poset validation") {
    // Chain and fork are fine.
    CHECK(TreePoset::from_covers({"0", "1", "2"}, {{1, 0}, {2, 1}}).least() == 0);
    CHECK(TreePoset::from_covers({"0", "1", "2"}, {{1, 0}, {2, 0}}).least() == 0);

    // A diamond has a non-chain down-set at its top.
    CHECK_THROWS_AS(TreePoset::from_covers({"0", "1", "2", "3"},
                                           {{1, 0}, {2, 0}, {3, 1}, {3, 2}}),
                    std::invalid_argument);
    // Two minimal nodes: no least element.
    CHECK_THROWS_AS(TreePoset::from_covers({"0", "1", "2"}, {{2, 0}, {2, 1}}),
                    std::invalid_argument);
    // Cycles are rejected.
    CHECK_THROWS_AS(TreePoset::from_covers({"0", "1"}, {{1, 0}, {0, 1}}),
                    std::invalid_argument);
    // Node names carry the glued-name separator.
    CHECK_THROWS_AS(TreePoset::from_covers({"a.b"}, {}), std::invalid_argument);

    // Redundant order edges collapse to true covers.
    TreePoset chain = TreePoset::from_covers({"0", "1", "2"}, {{1, 0}, {2, 1}, {2, 0}});
    CHECK(chain.covers() == std::vector<std::pair<int, int>>{{1, 0}, {2, 1}});
    CHECK(chain.down_chain(2) == std::vector<int>{2, 1, 0});
}

TEST_CASE("ideals enumerates downward-closed subsets") {
    TreePoset single = TreePoset::from_covers({"0"}, {});
    CHECK(ideals(single).size() == 1);

    TreePoset chain = TreePoset::from_covers({"0", "1"}, {{1, 0}});
    std::vector<PosetIdeal> chain_ideals = ideals(chain);
    REQUIRE(chain_ideals.size() == 2);
    CHECK(chain_ideals[0].members == std::vector<int>{0});
    CHECK(chain_ideals[1].members == std::vector<int>{0, 1});

    TreePoset fork = TreePoset::from_covers({"0", "1", "2"}, {{1, 0}, {2, 0}});
    std::vector<PosetIdeal> fork_ideals = ideals(fork);
    REQUIRE(fork_ideals.size() == 4);
    CHECK(fork_ideals[0].members == std::vector<int>{0});
    CHECK(fork_ideals[1].members == std::vector<int>{0, 1});
    CHECK(fork_ideals[2].members == std::vector<int>{0, 2});
    CHECK(fork_ideals[3].members == std::vector<int>{0, 1, 2});
}

TEST_CASE("validate_spec accepts the chain fixture") {
    SpecValidation v = validate_spec(fixtures::s0());
    CHECK(v.ok());
    REQUIRE(v.boundary_witness.size() == 1);
    REQUIRE(v.boundary_witness[0]);
    // The exit witness is (a, y): y leaves the upper carrier and keeps the
    // image inside the lower one.
    Automaton upper = fixtures::a_one();
    CHECK(v.boundary_witness[0]->first == upper.state_index("a"));
    CHECK(v.boundary_witness[0]->second == upper.input_index("y"));
}

TEST_CASE("validate_spec rejects a least component that is not strongly connected") {
    ConstructionSpec spec = fixtures::s0();
    // Tail over the shared alphabet: not strongly connected.
    spec.components[0] = fixtures::make(
        {"s", "t"}, {"x", "y"},
        {{"s", "x", "t"}, {"t", "x", "t"}, {"s", "y", "t"}, {"t", "y", "t"}});
    spec.cover_maps[0] = {0, 0, -1};  // a, b -> s
    SpecValidation v = validate_spec(spec);
    CHECK_FALSE(v.ok());
    CHECK_FALSE(v.connectivity_ok);
}

TEST_CASE("validate_spec rejects an upper component that is not trap connected") {
    // Restrict everything to the single input x: the upper two-cycle never
    // reaches its trap.
    TreePoset tree = TreePoset::from_covers({"0", "1"}, {{1, 0}});
    std::vector<Automaton> components{
        fixtures::make({"k"}, {"x"}, {{"k", "x", "k"}}),
        fixtures::make({"a", "b", "t"}, {"x"},
                       {{"a", "x", "b"}, {"b", "x", "a"}, {"t", "x", "t"}})};
    ConstructionSpec spec{tree, {"x"}, std::move(components), {{0, 0, -1}}};
    SpecValidation v = validate_spec(spec);
    CHECK_FALSE(v.ok());
    CHECK_FALSE(v.connectivity_ok);
}

TEST_CASE("validate_spec rejects maps that break the partial-homomorphism condition") {
    // The upper x-step stays inside the carrier, but the constant map cannot
    // follow the swap in the lower component.
    TreePoset tree = TreePoset::from_covers({"0", "1"}, {{1, 0}});
    std::vector<Automaton> components{fixtures::swap_pair(), fixtures::a_one()};
    ConstructionSpec spec{tree, {"x", "y"}, std::move(components), {{0, 0, -1}}};
    SpecValidation v = validate_spec(spec);
    CHECK_FALSE(v.ok());
    CHECK_FALSE(v.partial_homs_ok);
    CHECK(v.connectivity_ok);
}

TEST_CASE("compose_phi composes along the unique cover chain") {
    ConstructionSpec spec = fixtures::s0();
    // Identity on the node itself.
    std::vector<int> self = compose_phi(spec, 1, 1);
    CHECK(self == std::vector<int>{0, 1, -1});
    // Single cover edge.
    std::vector<int> down = compose_phi(spec, 1, 0);
    CHECK(down == std::vector<int>{0, 0, -1});
    CHECK_THROWS_AS(compose_phi(spec, 0, 1), std::invalid_argument);
}

TEST_CASE("compose_phi satisfies the composition law on every corpus spec") {
    std::vector<ConstructionSpec> corpus = construction_corpus(100);
    std::size_t chains_seen = 0;
    for (std::size_t n = 0; n < corpus.size(); n += 5) {
        const ConstructionSpec& spec = corpus[n];
        const int nodes = spec.tree.num_nodes();
        if (nodes >= 3) ++chains_seen;
        for (int i = 0; i < nodes; ++i) {
            for (int j = 0; j < nodes; ++j) {
                if (!spec.tree.leq(j, i)) continue;
                for (int k = 0; k < nodes; ++k) {
                    if (!spec.tree.leq(k, j)) continue;
                    std::vector<int> direct = compose_phi(spec, i, k);
                    std::vector<int> upper = compose_phi(spec, i, j);
                    std::vector<int> lower = compose_phi(spec, j, k);
                    for (std::size_t a = 0; a < direct.size(); ++a) {
                        if (direct[a] == -1) continue;
                        CHECK(direct[a] == lower[static_cast<std::size_t>(upper[a])]);
                    }
                }
            }
        }
    }
    CHECK(chains_seen > 0);
}

TEST_CASE("build glues the chain fixture into a_glue") {
    GluedAutomaton built = build(fixtures::s0());
    REQUIRE(built.automaton.num_states() == 3);
    CHECK(find_isomorphism(built.automaton, fixtures::a_glue()));

    // x keeps the cycle inside node 1, y drops to node 0.
    int a = built.automaton.state_index("1.a");
    int b = built.automaton.state_index("1.b");
    int k = built.automaton.state_index("0.k");
    REQUIRE(a != -1);
    REQUIRE(b != -1);
    REQUIRE(k != -1);
    int x = built.automaton.input_index("x");
    int y = built.automaton.input_index("y");
    CHECK(built.automaton.step(a, x) == b);
    CHECK(built.automaton.step(a, y) == k);
    CHECK(built.automaton.step(b, y) == k);
    CHECK(built.automaton.step(k, x) == k);
}

TEST_CASE("build of a single-node spec returns the component") {
    TreePoset tree = TreePoset::from_covers({"0"}, {});
    ConstructionSpec spec{tree, {"x"}, {fixtures::two_cycle()}, {}};
    REQUIRE(validate_spec(spec).ok());
    GluedAutomaton built = build(spec);
    CHECK(find_isomorphism(built.automaton, fixtures::two_cycle()));
}

TEST_CASE("build rejects invalid specs") {
    ConstructionSpec spec = fixtures::s0();
    spec.cover_maps[0] = {0, -1, -1};
    CHECK_THROWS_AS(build(spec), std::invalid_argument);
}

TEST_CASE("canonical_family realizes every subautomaton through an ideal") {
    ConstructionSpec spec = fixtures::s0();
    GluedAutomaton built = build(spec);
    RetractFamily family = canonical_family(spec, built);
    CHECK_FALSE(family_violation(family));

    int k = built.automaton.state_index("0.k");
    const StateMap* onto_kernel = family.map_for({k});
    REQUIRE(onto_kernel);
    CHECK(onto_kernel->map == std::vector<int>(3, k));
    // Retracting onto the kernel equals the unique retract map there.
    std::vector<StateMap> unique_maps =
        retract_homomorphisms(built.automaton, make_subautomaton(built.automaton, {k}));
    REQUIRE(unique_maps.size() == 1);
    CHECK(onto_kernel->map == unique_maps.front().map);

    std::vector<int> everything{0, 1, 2};
    const StateMap* onto_all = family.map_for(everything);
    REQUIRE(onto_all);
    CHECK(onto_all->map == identity_map(built.automaton).map);
}

TEST_CASE("canonical_family on a fork routes leaves through the root") {
    std::vector<ConstructionSpec> corpus = construction_corpus(100);
    const ConstructionSpec* fork = nullptr;
    for (const ConstructionSpec& candidate : corpus) {
        if (candidate.tree.covers() == std::vector<std::pair<int, int>>{{1, 0}, {2, 0}}) {
            fork = &candidate;
            break;
        }
    }
    REQUIRE(fork);
    const ConstructionSpec& spec = *fork;
    GluedAutomaton built = build(spec);
    RetractFamily family = canonical_family(spec, built);
    CHECK_FALSE(family_violation(family));

    // The ideal {0, 1} sends node-2 states through phi into node 0.
    std::vector<int> carrier;
    for (int node : {0, 1}) {
        for (int g : built.glued_index[static_cast<std::size_t>(node)]) {
            if (g != -1) carrier.push_back(g);
        }
    }
    std::sort(carrier.begin(), carrier.end());
    const StateMap* lambda = family.map_for(carrier);
    REQUIRE(lambda);
    for (int g : built.glued_index[2]) {
        if (g == -1) continue;
        CHECK(built.origin[static_cast<std::size_t>((*lambda)(g))].first == 0);
    }
}

TEST_CASE("recover_spec inverts the construction on the fixtures") {
    RecoveredSpec glue = recover_spec(fixtures::a_glue());
    REQUIRE(glue.spec);
    CHECK(glue.spec->tree.num_nodes() == 2);
    CHECK(glue.spec->components[glue.spec->tree.least()].num_states() == 1);
    GluedAutomaton rebuilt = build(*glue.spec);
    CHECK(find_isomorphism(rebuilt.automaton, fixtures::a_glue()));

    RecoveredSpec triv = recover_spec(fixtures::a_triv());
    REQUIRE(triv.spec);
    CHECK(triv.spec->tree.num_nodes() == 1);
    CHECK(find_isomorphism(build(*triv.spec).automaton, fixtures::a_triv()));

    RecoveredSpec bad = recover_spec(fixtures::a_bad());
    CHECK_FALSE(bad.spec);
    CHECK(bad.reason == "automaton has no kernel");

    // Boolean-type but not semi-connected: the dilation fixture.
    RecoveredSpec dil = recover_spec(fixtures::a_dil());
    CHECK_FALSE(dil.spec);
    CHECK(dil.reason == "automaton is not semi-connected");
}

TEST_CASE("round trip through the corpus") {
    std::vector<ConstructionSpec> corpus = construction_corpus(100);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < corpus.size(); i += 7) {  // sample for speed
        const ConstructionSpec& spec = corpus[i];
        GluedAutomaton built = build(spec);
        RecoveredSpec recovered = recover_spec(built.automaton);
        REQUIRE(recovered.spec);
        CHECK(find_isomorphism(build(*recovered.spec).automaton, built.automaton));
        ++checked;
    }
    CHECK(checked >= 15);
}
