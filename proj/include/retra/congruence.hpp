#pragma once

#include <utility>
#include <cstdint>

#include "retra/automaton.hpp"

namespace retra {

/// A partition given as explicit blocks of state indices.
using Partition = std::vector<std::vector<int>>;

/// An equivalence on the state set compatible with every input action.
/// Stored in canonical form: class ids are assigned in order of first
/// appearance when scanning states ascending, so equal congruences compare
/// equal directly and blocks come out sorted by minimal member.
class Congruence {
public:
    /// Validates that blocks partition the state set and that the partition
    /// is compatible with every input; throws std::invalid_argument otherwise.
    Congruence(Automaton automaton, const Partition& blocks);

    /// Same validation, from a class-id vector.
    static Congruence from_classes(Automaton automaton, const std::vector<int>& class_of);

    static Congruence identity(Automaton automaton);
    static Congruence full(Automaton automaton);

    const Automaton& automaton() const { return automaton_; }
    int num_classes() const { return num_classes_; }
    int class_of(int s) const { return class_of_[static_cast<std::size_t>(s)]; }
    const std::vector<int>& classes() const { return class_of_; }
    bool same(int a, int b) const { return class_of(a) == class_of(b); }
    Partition blocks() const;

    bool operator==(const Congruence&) const = default;

private:
    struct Unchecked {};
    Congruence(Unchecked, Automaton automaton, std::vector<int> normalized, int num_classes);

    Automaton automaton_;
    std::vector<int> class_of_;
    int num_classes_ = 0;

    friend Congruence unchecked_congruence(Automaton, std::vector<int>);
};

bool is_partition(const Automaton& a, const Partition& p);

/// True iff the partition is closed under every input action. Throws
/// std::invalid_argument when p is not a partition of the state set.
bool is_congruence(const Automaton& a, const Partition& p);

/// finer <= coarser in the refinement order (finer as a relation is
/// contained in coarser).
bool refines(const Congruence& finer, const Congruence& coarser);

/// Common refinement (intersection of the relations).
Congruence meet(const Congruence& a, const Congruence& b);

/// Smallest equivalence containing both; for unary algebras this is already
/// compatible, so no further closure is required.
Congruence join(const Congruence& a, const Congruence& b);

/// Collapses the subautomaton to one class and keeps all other states
/// singleton.
Congruence rees(const Subautomaton& b);

/// Smallest congruence merging states a and b (union-find saturation under
/// all inputs).
Congruence principal_congruence(const Automaton& aut, int a, int b);

/// Partition of the source by equal image. Throws std::invalid_argument when
/// the map is not a homomorphism.
Congruence kernel_of_map(const StateMap& m);

/// The complete congruence lattice with its refinement order precomputed.
class CongruenceLattice {
public:
    CongruenceLattice(Automaton automaton, std::vector<Congruence> elements);

    const Automaton& automaton() const { return automaton_; }
    const std::vector<Congruence>& elements() const { return elements_; }
    int size() const { return static_cast<int>(elements_.size()); }
    int index_of(const Congruence& c) const;  // -1 when absent
    bool leq(int i, int j) const;             // refinement order
    int identity_index() const { return identity_index_; }
    int full_index() const { return full_index_; }
    /// Covering pairs (i, j): j covers i.
    std::vector<std::pair<int, int>> covers() const;

private:
    Automaton automaton_;
    std::vector<Congruence> elements_;
    std::vector<std::uint8_t> leq_;
    int identity_index_ = -1;
    int full_index_ = -1;
};

/// Every congruence, by filtering all set partitions. Exact for any size;
/// meant for small state sets (Bell numbers grow fast).
std::vector<Congruence> congruences_by_filter(const Automaton& a);

/// Every congruence, as the join closure of the principal congruences.
std::vector<Congruence> congruences_by_principal_joins(const Automaton& a);

/// Complete lattice; uses the partition filter up to 6 states and the
/// principal-join closure beyond.
CongruenceLattice all_congruences(const Automaton& a);

/// All beta with alpha /\ beta = identity and alpha \/ beta = full. Throws
/// std::invalid_argument when alpha is not in the lattice.
std::vector<Congruence> complements(const CongruenceLattice& lattice, const Congruence& alpha);

struct LatticeClass {
    bool complemented = false;
    bool distributive = false;
    bool boolean_algebra = false;
};

/// Complemented by exhaustive complement search, distributive by exhaustive
/// triple check.
LatticeClass lattice_class(const CongruenceLattice& lattice);

struct Quotient {
    Automaton automaton;
    StateMap projection;  // surjective homomorphism with Ker == the congruence
};

/// Factor automaton; classes are named after their minimal member.
Quotient quotient(const Automaton& a, const Congruence& c);

}  // namespace retra
