#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "retra/enumerate.hpp"
#include "retra/retract.hpp"

using namespace retra;

namespace {

std::set<std::vector<int>> class_set(const std::vector<Congruence>& list) {
    std::set<std::vector<int>> out;
    for (const Congruence& c : list) out.insert(c.classes());
    return out;
}

Congruence middle_of_glue() {
    Automaton glue = fixtures::a_glue();
    return Congruence(glue, {{0, 1}, {2}});
}

}  // namespace

TEST_CASE("is_congruence") {
    Automaton glue = fixtures::a_glue();
    CHECK(is_congruence(glue, {{0}, {1}, {2}}));
    CHECK(is_congruence(glue, {{0, 1}, {2}}));
    // {a,k} splits under x.
    CHECK_FALSE(is_congruence(glue, {{0, 2}, {1}}));
    CHECK_THROWS_AS(is_congruence(glue, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(is_congruence(glue, {{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("congruence stores a canonical form") {
    Automaton glue = fixtures::a_glue();
    Congruence a(glue, {{2}, {1, 0}});
    Congruence b(glue, {{0, 1}, {2}});
    CHECK(a == b);
    CHECK(a.blocks() == Partition{{0, 1}, {2}});
    CHECK(Congruence::identity(glue).num_classes() == 3);
    CHECK(Congruence::full(glue).num_classes() == 1);
    CHECK_THROWS_AS(Congruence(glue, {{0, 2}, {1}}), std::invalid_argument);
}

TEST_CASE("all_congruences matches the partition-filter oracle") {
    CHECK(all_congruences(fixtures::a_triv()).size() == 1);
    CHECK(all_congruences(fixtures::a_tail()).size() == 2);

    Automaton glue = fixtures::a_glue();
    auto oracle = oracles::congruence_classes(glue);
    REQUIRE(oracle.size() == 3);
    CongruenceLattice lattice = all_congruences(glue);
    REQUIRE(lattice.size() == 3);
    CHECK(lattice.index_of(Congruence::identity(glue)) != -1);
    CHECK(lattice.index_of(Congruence::full(glue)) != -1);
    CHECK(lattice.index_of(middle_of_glue()) != -1);
}

TEST_CASE("lattice always contains identity and full") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 30; ++round) {
        int n = 1 + static_cast<int>(rng() % 4);
        Automaton a = random_automaton(n, 1 + static_cast<int>(rng() % 2), rng());
        CongruenceLattice lattice = all_congruences(a);
        CHECK(lattice.identity_index() != -1);
        CHECK(lattice.full_index() != -1);
        CHECK((lattice.size() == 1) == (n == 1));
    }

    // Beyond six states the lattice switches to the principal-join strategy.
    Automaton big = random_automaton(8, 2, 123);
    CongruenceLattice lattice = all_congruences(big);
    CHECK(lattice.identity_index() != -1);
    CHECK(lattice.full_index() != -1);
    std::vector<Congruence> of_identity = complements(lattice, Congruence::identity(big));
    REQUIRE(of_identity.size() >= 1);
    CHECK(std::find(of_identity.begin(), of_identity.end(), Congruence::full(big)) !=
          of_identity.end());
}

TEST_CASE("meet and join satisfy the lattice laws") {
    Automaton glue = fixtures::a_glue();
    Congruence id = Congruence::identity(glue);
    Congruence full = Congruence::full(glue);
    Congruence mid = middle_of_glue();

    CHECK(meet(mid, id) == id);
    CHECK(meet(mid, full) == mid);
    CHECK(meet(mid, mid) == mid);
    CHECK(join(mid, id) == mid);
    CHECK(join(mid, full) == full);
    CHECK(join(id, mid) == mid);

    Automaton tail = fixtures::a_tail();
    CHECK_THROWS_AS(meet(mid, Congruence::identity(tail)), std::invalid_argument);
    CHECK_THROWS_AS(join(mid, Congruence::identity(tail)), std::invalid_argument);
}

TEST_CASE("lattice laws hold on small automata") {
    // Exhaustively through 3 states, sampled at 4.
    std::vector<Automaton> subjects;
    for (int n = 1; n <= 3; ++n) {
        AutomatonEnumerator source(n, 2);
        for (std::uint64_t i = 0; i < source.count(); ++i) subjects.push_back(source.at(i));
    }
    {
        AutomatonEnumerator source(4, 2);
        std::mt19937_64 rng(4242);
        for (int round = 0; round < 200; ++round) {
            subjects.push_back(source.at(rng() % source.count()));
        }
    }
    {
        for (const Automaton& a : subjects) {
            CongruenceLattice lattice = all_congruences(a);
            const auto& elems = lattice.elements();
            for (const Congruence& p : elems) {
                for (const Congruence& q : elems) {
                    Congruence pq_meet = meet(p, q);
                    Congruence pq_join = join(p, q);
                    CHECK(pq_meet == meet(q, p));
                    CHECK(pq_join == join(q, p));
                    // Results stay inside the lattice.
                    CHECK(lattice.index_of(pq_meet) != -1);
                    CHECK(lattice.index_of(pq_join) != -1);
                    // Absorption.
                    CHECK(meet(p, pq_join) == p);
                    CHECK(join(p, pq_meet) == p);
                    for (const Congruence& r : elems) {
                        CHECK(meet(meet(p, q), r) == meet(p, meet(q, r)));
                        CHECK(join(join(p, q), r) == join(p, join(q, r)));
                    }
                }
            }
        }
    }
}

TEST_CASE("rees collapses the subautomaton and nothing else") {
    Automaton glue = fixtures::a_glue();
    std::vector<Subautomaton> subs = subautomata(glue);
    CHECK(rees(subs.back()) == Congruence::full(glue));   // whole automaton
    CHECK(rees(subs.front()) == Congruence::identity(glue));  // singleton {k}

    Automaton tail = fixtures::a_tail();
    CHECK(rees(subautomata(tail).front()) == Congruence::identity(tail));

    // rees is a congruence for every subautomaton of random automata.
    std::mt19937_64 rng(5);
    for (int round = 0; round < 25; ++round) {
        Automaton a = random_automaton(1 + static_cast<int>(rng() % 5), 2, rng());
        for (const Subautomaton& sub : subautomata(a)) {
            CHECK(is_congruence(a, rees(sub).blocks()));
        }
    }
}

TEST_CASE("complements in the three-chain of a_glue") {
    Automaton glue = fixtures::a_glue();
    CongruenceLattice lattice = all_congruences(glue);
    Congruence id = Congruence::identity(glue);
    Congruence full = Congruence::full(glue);
    Congruence mid = middle_of_glue();

    std::vector<Congruence> of_identity = complements(lattice, id);
    REQUIRE(of_identity.size() == 1);
    CHECK(of_identity.front() == full);

    std::vector<Congruence> of_full = complements(lattice, full);
    REQUIRE(of_full.size() == 1);
    CHECK(of_full.front() == id);

    CHECK(complements(lattice, mid).empty());

    Congruence outsider = Congruence::identity(fixtures::a_tail());
    CHECK_THROWS_AS(complements(lattice, outsider), std::invalid_argument);
}

TEST_CASE("complement relation is symmetric") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 20; ++round) {
        Automaton a = random_automaton(1 + static_cast<int>(rng() % 4), 2, rng());
        CongruenceLattice lattice = all_congruences(a);
        for (const Congruence& alpha : lattice.elements()) {
            for (const Congruence& beta : complements(lattice, alpha)) {
                std::vector<Congruence> back = complements(lattice, beta);
                CHECK(std::find(back.begin(), back.end(), alpha) != back.end());
            }
        }
    }
}

TEST_CASE("lattice_class on the named fixtures") {
    LatticeClass triv = lattice_class(all_congruences(fixtures::a_triv()));
    CHECK(triv.complemented);
    CHECK(triv.distributive);
    CHECK(triv.boolean_algebra);

    LatticeClass tail = lattice_class(all_congruences(fixtures::a_tail()));
    CHECK(tail.complemented);
    CHECK(tail.distributive);
    CHECK(tail.boolean_algebra);

    LatticeClass glue = lattice_class(all_congruences(fixtures::a_glue()));
    CHECK_FALSE(glue.complemented);
    CHECK(glue.distributive);
    CHECK_FALSE(glue.boolean_algebra);
}

TEST_CASE("kernel_of_map") {
    Automaton glue = fixtures::a_glue();
    CHECK(kernel_of_map(identity_map(glue)) == Congruence::identity(glue));

    StateMap collapse{glue, glue, {2, 2, 2}};
    CHECK(kernel_of_map(collapse) == Congruence::full(glue));

    Congruence mid = middle_of_glue();
    Quotient q = quotient(glue, mid);
    CHECK(kernel_of_map(q.projection) == mid);

    StateMap broken{glue, glue, {2, 1, 2}};
    CHECK_THROWS_AS(kernel_of_map(broken), std::invalid_argument);
}

TEST_CASE("principal congruence saturation") {
    Automaton glue = fixtures::a_glue();
    CHECK(principal_congruence(glue, 0, 0) == Congruence::identity(glue));
    CHECK(principal_congruence(glue, 0, 1) == middle_of_glue());
    // Merging a state of the cycle with the trap forces everything together.
    CHECK(principal_congruence(glue, 0, 2) == Congruence::full(glue));
}

TEST_CASE("both enumeration strategies agree") {
    // Exhaustively on every automaton with up to 3 states.
    for (int n = 1; n <= 3; ++n) {
        for (int k = 1; k <= 2; ++k) {
            AutomatonEnumerator source(n, k);
            for (std::uint64_t i = 0; i < source.count(); ++i) {
                Automaton a = source.at(i);
                CHECK(class_set(congruences_by_filter(a)) ==
                      class_set(congruences_by_principal_joins(a)));
            }
        }
    }
    // Random samples through 6 states.
    std::mt19937_64 rng(99);
    for (int round = 0; round < 60; ++round) {
        Automaton a = random_automaton(4 + static_cast<int>(rng() % 3),
                                       1 + static_cast<int>(rng() % 2), rng());
        CHECK(class_set(congruences_by_filter(a)) ==
              class_set(congruences_by_principal_joins(a)));
    }
}

TEST_CASE("quotient projection kernel recovers the congruence") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 25; ++round) {
        Automaton a = random_automaton(1 + static_cast<int>(rng() % 5), 2, rng());
        CongruenceLattice lattice = all_congruences(a);
        for (const Congruence& c : lattice.elements()) {
            Quotient q = quotient(a, c);
            CHECK(is_homomorphism(q.projection));
            CHECK(kernel_of_map(q.projection) == c);
        }
    }
}
