#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace retra {

/// A state-finite automaton without outputs: a finite state set, a finite
/// input alphabet and a total transition table. States and inputs are
/// addressed by their position in the declared order; names exist only for
/// I/O. Instances are immutable values.
class Automaton {
public:
    Automaton(std::vector<std::string> states, std::vector<std::string> inputs,
              std::vector<int> table);

    int num_states() const { return static_cast<int>(state_names_.size()); }
    int num_inputs() const { return static_cast<int>(input_names_.size()); }

    /// delta(s, x); both arguments are positional indices.
    int step(int s, int x) const {
        return table_[static_cast<std::size_t>(s) * input_names_.size() + x];
    }

    const std::vector<std::string>& state_names() const { return state_names_; }
    const std::vector<std::string>& input_names() const { return input_names_; }
    const std::string& state_name(int s) const;
    const std::string& input_name(int x) const;
    int state_index(std::string_view name) const;  // -1 when absent
    int input_index(std::string_view name) const;
    const std::vector<int>& table() const { return table_; }

    bool operator==(const Automaton&) const = default;

private:
    std::vector<std::string> state_names_;
    std::vector<std::string> input_names_;
    std::vector<int> table_;  // row-major: state * num_inputs + input
};

/// An input word; letters are positional input indices.
using Word = std::vector<int>;

/// Left fold of the transition table over a word; the empty word is the
/// identity.
int run(const Automaton& a, int start, std::span<const int> word);

/// A total map between the state sets of two automata over one shared
/// alphabet. Endomaps (source == target) double as retract and dilation
/// witnesses with their image inside a carrier.
struct StateMap {
    Automaton source;
    Automaton target;
    std::vector<int> map;  // map[s] = target state index

    int operator()(int s) const { return map[s]; }
    bool operator==(const StateMap&) const = default;
};

StateMap identity_map(const Automaton& a);

/// `first` followed by `then`; requires first.target == then.source.
StateMap compose(const StateMap& first, const StateMap& then);

/// True iff map(delta(a,x)) == delta(map(a),x) for every state and input.
/// Throws std::invalid_argument on alphabet mismatch or an ill-formed map.
bool is_homomorphism(const StateMap& m);

/// A bijective homomorphism (its inverse is then automatically a
/// homomorphism), or nullopt. Deterministic: backtracking in canonical
/// state order, candidates in ascending order.
std::optional<StateMap> find_isomorphism(const Automaton& a, const Automaton& b);

/// A nonempty subset of states closed under every input, with the parent
/// kept alongside. Carrier indices are sorted ascending.
struct Subautomaton {
    Automaton parent;
    std::vector<int> carrier;

    bool contains(int s) const;
    /// Position of an ambient state in the carrier, -1 when absent.
    int to_local(int ambient) const;
    int to_ambient(int local) const { return carrier[static_cast<std::size_t>(local)]; }
    /// Standalone automaton on the carrier; state names are preserved.
    Automaton extract() const;

    bool operator==(const Subautomaton&) const = default;
};

/// Validates nonemptiness and closure; the carrier is sorted and deduplicated.
Subautomaton make_subautomaton(Automaton parent, std::vector<int> carrier);

/// All nonempty closed subsets, sorted by size then lexicographic carrier.
std::vector<Subautomaton> subautomata(const Automaton& a);

/// Subautomaton generated by a state: everything reachable, including the
/// state itself (empty word).
Subautomaton generated(const Automaton& a, int state);

/// States fixed by every input.
std::vector<int> traps(const Automaton& a);

/// The subautomaton contained in every subautomaton, when the intersection
/// of all of them is nonempty.
std::optional<Subautomaton> kernel(const Automaton& a);

/// The base automaton restricted to a carrier; transitions are defined
/// exactly where the base transition stays inside the carrier.
struct PartialAutomaton {
    Automaton base;
    std::vector<int> carrier;  // sorted ascending

    bool in_carrier(int s) const;
    bool defined(int s, int x) const;
    int step(int s, int x) const;  // requires defined(s, x)

    bool operator==(const PartialAutomaton&) const = default;
};

/// Carrier = states minus the unique trap for a nontrivial automaton with
/// exactly one trap; otherwise all states (trivial automata keep their
/// single state; automata with zero or several traps are kept whole).
PartialAutomaton partial_derived(const Automaton& a);

/// map is indexed by src.base states; entries matter on src.carrier only and
/// must land in dst.carrier (otherwise std::invalid_argument). True iff every
/// transition defined in src is mapped to a defined transition in dst with
/// the matching value.
bool is_partial_homomorphism(const PartialAutomaton& src, const PartialAutomaton& dst,
                             const std::vector<int>& map);

// Sorted-set helpers shared across the library.
bool is_sorted_subset(std::span<const int> inner, std::span<const int> outer);
std::vector<int> sorted_intersection(std::span<const int> a, std::span<const int> b);

}  // namespace retra
