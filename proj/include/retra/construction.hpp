#pragma once

#include <stdexcept>
#include <cstdint>

#include "retra/structure.hpp"

namespace retra {

/// A property asserted by the structure theory failed on concrete data.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite poset with a least element whose down-sets are chains, so the
/// cover path from any node down to any smaller node is unique.
class TreePoset {
public:
    /// Builds the order as the reflexive-transitive closure of the given
    /// edges (upper, lower) and validates the tree shape; true covers are
    /// derived from the closure. Throws std::invalid_argument on cycles,
    /// missing least element or a non-chain down-set.
    static TreePoset from_covers(std::vector<std::string> nodes,
                                 const std::vector<std::pair<int, int>>& edges);

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::string& node_name(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    int node_index(std::string_view name) const;  // -1 when absent
    int least() const { return least_; }
    bool leq(int i, int j) const;  // i <= j
    /// Covering pairs (upper, lower), sorted.
    const std::vector<std::pair<int, int>>& covers() const { return covers_; }
    int cover_index(int upper, int lower) const;  // -1 when not a cover
    /// The down-set of i, sorted descending from i to the least element.
    std::vector<int> down_chain(int i) const;

    bool operator==(const TreePoset&) const = default;

private:
    std::vector<std::string> nodes_;
    std::vector<std::uint8_t> leq_;
    std::vector<std::pair<int, int>> covers_;
    int least_ = -1;
};

/// Nonempty downward-closed node subset; always contains the least element.
struct PosetIdeal {
    TreePoset tree;
    std::vector<int> members;  // sorted ascending
};

/// All ideals, sorted by size then members.
std::vector<PosetIdeal> ideals(const TreePoset& tree);

/// Tree-glued construction data: one component automaton per node over a
/// shared alphabet and one partial-carrier map per cover edge.
struct ConstructionSpec {
    TreePoset tree;
    std::vector<std::string> inputs;
    std::vector<Automaton> components;  // aligned with tree nodes
    /// Per cover edge (upper, lower): indexed by upper-component states,
    /// -1 off the upper partial carrier, values inside the lower partial
    /// carrier.
    std::vector<std::vector<int>> cover_maps;

    bool operator==(const ConstructionSpec&) const = default;
};

struct SpecValidation {
    bool structure_ok = false;     // shapes, shared alphabet, map totality
    bool disjoint_ok = false;      // glued naming keeps components disjoint
    bool connectivity_ok = false;  // (i) least strongly connected, rest strongly trap connected
    bool partial_homs_ok = false;  // (ii) every cover map is a partial homomorphism
    bool boundary_ok = false;      // (iii) every cover edge has an exit witness
    std::vector<std::string> problems;
    /// Per cover edge: (upper-local state, input) witnessing condition (iii).
    std::vector<std::optional<std::pair<int, int>>> boundary_witness;

    bool ok() const {
        return structure_ok && disjoint_ok && connectivity_ok && partial_homs_ok && boundary_ok;
    }
};

SpecValidation validate_spec(const ConstructionSpec& s);

/// Composite partial-carrier map along the unique cover chain from i down to
/// j; identity when i == j. Indexed by component-i states, -1 off carrier.
/// Throws std::invalid_argument unless j <= i.
std::vector<int> compose_phi(const ConstructionSpec& s, int i, int j);

/// The glued automaton plus provenance between glued states and
/// (node, local-state) pairs.
struct GluedAutomaton {
    Automaton automaton;
    std::vector<std::pair<int, int>> origin;   // glued state -> (node, local state)
    std::vector<std::vector<int>> glued_index; // [node][local state] -> glued state or -1
};

/// Runs the construction. Requires a valid spec (std::invalid_argument
/// otherwise). States are named node.state; for a state of node i and an
/// input, the transition drops to the greatest node j <= i whose component
/// keeps the mapped state inside its partial carrier.
GluedAutomaton build(const ConstructionSpec& s);

/// The canonical retract family of a built automaton: one subautomaton per
/// tree ideal, with the retract map routing every node through the greatest
/// ideal node below it. Verifies that the ideal-induced carriers are exactly
/// the subautomata of the glued automaton; throws VerificationError when the
/// correspondence fails.
RetractFamily canonical_family(const ConstructionSpec& s, const GluedAutomaton& built);

struct RecoveredSpec {
    std::optional<ConstructionSpec> spec;
    std::string reason;  // set when spec is absent
};

/// Inverts the construction for a semi-connected Boolean-type retractable
/// automaton with a kernel: tree = generator classes ordered by inclusion of
/// their generated subautomata, components = principal factors, cover maps =
/// Boolean-family retract maps restricted to the classes.
RecoveredSpec recover_spec(const Automaton& a);

}  // namespace retra
