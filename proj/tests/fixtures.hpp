#pragma once

#include <string>
#include <vector>

#include "retra/construction.hpp"

namespace fixtures {

using retra::Automaton;

/// Table builder over named transitions.
inline Automaton make(std::vector<std::string> states, std::vector<std::string> inputs,
                      std::vector<std::tuple<std::string, std::string, std::string>> transitions) {
    Automaton skeleton(states, inputs, std::vector<int>(states.size() * inputs.size(), 0));
    std::vector<int> table(states.size() * inputs.size(), -1);
    for (const auto& [from, input, to] : transitions) {
        table[static_cast<std::size_t>(skeleton.state_index(from)) * inputs.size() +
              static_cast<std::size_t>(skeleton.input_index(input))] = skeleton.state_index(to);
    }
    return Automaton(std::move(states), std::move(inputs), std::move(table));
}

/// One state, one looping input.
inline Automaton a_triv() { return make({"t"}, {"x"}, {{"t", "x", "t"}}); }

/// Tail into a trap: a -> t -> t.
inline Automaton a_tail() {
    return make({"a", "t"}, {"x"}, {{"a", "x", "t"}, {"t", "x", "t"}});
}

/// Two-cycle a<->b glued onto the trap k by the second input.
inline Automaton a_glue() {
    return make({"a", "b", "k"}, {"x", "y"},
                {{"a", "x", "b"},
                 {"b", "x", "a"},
                 {"k", "x", "k"},
                 {"a", "y", "k"},
                 {"b", "y", "k"},
                 {"k", "y", "k"}});
}

/// Loop state next to a two-cycle; not retractable.
inline Automaton a_bad() {
    return make({"a", "b", "c"}, {"x"}, {{"a", "x", "a"}, {"b", "x", "c"}, {"c", "x", "b"}});
}

/// Strongly trap connected: two-cycle with a trap reached by the second input.
inline Automaton a_one() {
    return make({"a", "b", "t"}, {"x", "y"},
                {{"a", "x", "b"},
                 {"b", "x", "a"},
                 {"t", "x", "t"},
                 {"a", "y", "t"},
                 {"b", "y", "t"},
                 {"t", "y", "t"}});
}

/// a_glue plus a twin d of a; a proper dilation of a_glue.
inline Automaton a_dil() {
    return make({"a", "b", "k", "d"}, {"x", "y"},
                {{"a", "x", "b"},
                 {"b", "x", "a"},
                 {"k", "x", "k"},
                 {"d", "x", "b"},
                 {"a", "y", "k"},
                 {"b", "y", "k"},
                 {"k", "y", "k"},
                 {"d", "y", "k"}});
}

/// One-state automaton over the two-letter alphabet.
inline Automaton a_zero() { return make({"k"}, {"x", "y"}, {{"k", "x", "k"}, {"k", "y", "k"}}); }

/// Strongly connected pair: both inputs swap the two states.
inline Automaton swap_pair() {
    return make({"u", "v"}, {"x", "y"},
                {{"u", "x", "v"}, {"v", "x", "u"}, {"u", "y", "v"}, {"v", "y", "u"}});
}

inline Automaton two_cycle() {
    return make({"b", "c"}, {"x"}, {{"b", "x", "c"}, {"c", "x", "b"}});
}

/// Disjoint union of two tails.
inline Automaton two_tails() {
    return make({"a", "t", "a2", "t2"}, {"x"},
                {{"a", "x", "t"}, {"t", "x", "t"}, {"a2", "x", "t2"}, {"t2", "x", "t2"}});
}

/// Chain spec: least node 0 carries a_zero, node 1 carries a_one, the cover
/// map sends a, b to k. Builds an automaton isomorphic to a_glue.
inline retra::ConstructionSpec s0() {
    retra::TreePoset tree = retra::TreePoset::from_covers({"0", "1"}, {{1, 0}});
    std::vector<Automaton> components{a_zero(), a_one()};
    // a -> k, b -> k, t off the carrier
    std::vector<std::vector<int>> cover_maps{{0, 0, -1}};
    return retra::ConstructionSpec{std::move(tree), {"x", "y"}, std::move(components),
                                   std::move(cover_maps)};
}

}  // namespace fixtures
