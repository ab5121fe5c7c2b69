#pragma once

#include "retra/congruence.hpp"

namespace retra {

/// All homomorphisms of the automaton onto the subautomaton that fix its
/// carrier pointwise, as endomaps with image inside the carrier. Sorted by
/// map vector; empty iff the subautomaton is not a retract.
std::vector<StateMap> retract_homomorphisms(const Automaton& a, const Subautomaton& b);

struct Retractability {
    bool retractable = false;
    std::vector<Subautomaton> subs;        // all subautomata, canonical order
    std::vector<StateMap> witnesses;       // one retract map per sub when retractable
    std::optional<Subautomaton> failure;   // first subautomaton admitting no retract map
};

Retractability is_retractable(const Automaton& a);

/// One retract homomorphism per subautomaton. A Boolean witness additionally
/// satisfies: carrier(B1) inside carrier(B2) implies Ker map(B2) refines
/// Ker map(B1).
struct RetractFamily {
    Automaton automaton;
    std::vector<Subautomaton> subs;  // canonical order (size, then lex carrier)
    std::vector<StateMap> maps;      // endomaps aligned with subs

    /// Map for the subautomaton with this carrier, nullptr when absent.
    const StateMap* map_for(const std::vector<int>& carrier) const;
};

/// A family witnessing the kernel-monotonicity condition, found by
/// backtracking over subautomata in decreasing carrier size, or nullopt when
/// the exhaustive search finds none.
std::optional<RetractFamily> boolean_family(const Automaton& a);

bool is_boolean_type(const Automaton& a);

/// nullopt when the family is a complete Boolean witness: one map per
/// subautomaton, each a retract homomorphism onto its carrier, kernels
/// monotone along inclusions. Otherwise a description of the first violation.
std::optional<std::string> family_violation(const RetractFamily& family);

struct Theorem1Entry {
    Subautomaton sub;
    bool complement_exists = false;  // rees(sub) has a complement in L(A)
    bool retract_exists = false;     // retract_homomorphisms(A, sub) nonempty
};

struct Theorem1Report {
    std::vector<Theorem1Entry> entries;
    std::vector<int> disagreements() const;
    bool ok() const { return disagreements().empty(); }
};

/// Per subautomaton: a Rees congruence has a lattice complement iff the
/// subautomaton is a retract. Disagreements are expected never to occur.
Theorem1Report check_theorem1(const Automaton& a);

struct Lemma1Violation {
    int outer_index = -1;  // B, index into family.subs
    int inner_index = -1;  // D inside B
    int state = -1;        // a with map_B(a) in D but map_B(a) != map_D(a)
};

struct Lemma1Report {
    std::vector<Lemma1Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// For every nested pair D inside B and every state a with map_B(a) landing
/// in D, asserts map_B(a) == map_D(a). Requires a valid Boolean family
/// (std::invalid_argument otherwise).
Lemma1Report check_lemma1(const RetractFamily& family);

}  // namespace retra
