#pragma once

#include "retra/retract.hpp"

namespace retra {

/// Finest direct-sum decomposition: the weakly connected components of the
/// transition digraph, each a subautomaton, ordered by smallest state.
std::vector<Subautomaton> direct_sum_components(const Automaton& a);

enum class Connectivity { strongly_connected, strongly_trap_connected, neither };

const char* to_string(Connectivity c);

/// Every ordered state pair (a, b), including a == b, is joined by a
/// nonempty word.
bool is_strongly_connected(const Automaton& a);

/// Exactly one trap, and every non-trap state reaches every state (itself
/// included) by a nonempty word. The one-state automaton qualifies vacuously.
bool is_strongly_trap_connected(const Automaton& a);

/// R(a), its generator class R_a, the remainder R[a] and the principal
/// factor R{a} = R(a)/rees(R[a]) (R(a) itself when the remainder is empty).
struct PrincipalFactor {
    int generator = -1;
    Subautomaton generated_sub;             // R(a)
    std::vector<int> r_class;               // R_a, ambient indices
    std::optional<Subautomaton> remainder;  // R[a], absent when empty
    Automaton factor;                       // R{a}
    Connectivity classification = Connectivity::neither;
};

PrincipalFactor principal_factor(const Automaton& a, int state);

/// Every principal factor is strongly connected or strongly trap connected.
bool is_semi_connected(const Automaton& a);

struct Dilation {
    Subautomaton base;
    StateMap map;  // endomap fixing the base, image inside it,
                   // delta(a,x) == delta(map(a),x) for all a, x
    bool proper = false;
};

/// The minimal base the automaton is a dilation of: the one-step image
/// closed up with one representative per transition-row twin class, the
/// canonically smallest twin serving as each outside state's image.
Dilation dilation_base(const Automaton& a);

/// Boolean family on a direct sum assembled from per-component families:
/// componentwise where a subautomaton meets a component, through the kernel
/// retract and the kernel isomorphism chain where it does not. Components
/// must partition the automaton and each must supply a kernel; missing or
/// non-isomorphic kernels raise std::invalid_argument.
RetractFamily direct_sum_family(const Automaton& sum,
                                const std::vector<Subautomaton>& components,
                                const std::vector<RetractFamily>& component_families);

/// Retract maps of a dilation obtained as base map composed with the
/// dilation map; only subautomata contained in the base are covered.
struct LiftedFamily {
    Automaton automaton;
    std::vector<Subautomaton> covered;
    std::vector<StateMap> maps;  // endomaps aligned with covered
    std::vector<Subautomaton> unsupported;
};

LiftedFamily lift_family_through_dilation(const Dilation& dil, const RetractFamily& base_family);

/// Single lifted map; throws std::domain_error when the target is not
/// contained in the dilation base.
StateMap lifted_retract(const Dilation& dil, const RetractFamily& base_family,
                        const Subautomaton& target);

struct KernelChainIssue {
    int first = -1;
    int second = -1;
    std::string reason;
};

struct StructureReport {
    Automaton automaton;
    std::vector<Subautomaton> components;
    std::vector<std::optional<Subautomaton>> component_kernels;  // ambient carriers
    std::vector<StateMap> kernel_isomorphisms;  // adjacent chain when all kernels exist
    std::optional<KernelChainIssue> kernel_issue;
    Dilation dilation;
    std::vector<PrincipalFactor> factors;  // one per state
    bool semi_connected = false;
};

StructureReport analyze(const Automaton& a);

}  // namespace retra
