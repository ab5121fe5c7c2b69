#pragma once

#include <cstdint>

#include "retra/construction.hpp"

namespace retra {

/// Index-addressable enumeration of every automaton on n canonical states
/// (s0..) and k canonical inputs (x0..), in lexicographic table order.
class AutomatonEnumerator {
public:
    AutomatonEnumerator(int num_states, int num_inputs);

    std::uint64_t count() const { return count_; }
    Automaton at(std::uint64_t index) const;

private:
    int num_states_;
    int num_inputs_;
    std::uint64_t count_;
    std::vector<std::string> state_names_;
    std::vector<std::string> input_names_;
};

/// Uniform random transition table on canonical names: mt19937_64 seeded
/// with `seed`, one engine draw modulo n per table cell in row-major order.
Automaton random_automaton(int num_states, int num_inputs, std::uint64_t seed);

/// Deterministic corpus of valid construction specs: a fixed catalog of tree
/// shapes (up to 4 nodes) filled with small strongly connected and strongly
/// trap connected components (up to 4 states, 2 inputs) and the first
/// admissible cover maps. Returns at least `min_count` specs, every one
/// passing validate_spec.
std::vector<ConstructionSpec> construction_corpus(int min_count);

}  // namespace retra
