#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "retra/construction.hpp"

namespace retra {

struct ParseError : std::runtime_error {
    ParseError(const std::string& source, int line, const std::string& what);
    std::string source;
    int line = 0;  // 0 when not line-anchored
};

/// Automaton text format: '#' comments, a `states` line, an `inputs` line,
/// then one `trans <state> <input> <state>` line per pair, each pair exactly
/// once.
Automaton load_automaton(std::istream& in, const std::string& source_name = "<input>");
Automaton load_automaton_file(const std::string& path);
std::string save_automaton(const Automaton& a);
void save_automaton_file(const Automaton& a, const std::string& path);

/// Construction-spec text format: `inputs`, `node`, `least`, `cover` lines,
/// one `begin component <id>` / `end` block per node (automaton format with
/// local state names, shared alphabet), and `phi <hi> <lo> <src> <dst>`
/// lines covering every cover edge's partial carrier.
ConstructionSpec parse_spec(std::istream& in, const std::string& source_name = "<input>");
/// parse_spec plus validate_spec; throws ParseError listing every failed
/// condition.
ConstructionSpec load_spec(std::istream& in, const std::string& source_name = "<input>");
ConstructionSpec load_spec_file(const std::string& path);
std::string save_spec(const ConstructionSpec& s);
void save_spec_file(const ConstructionSpec& s, const std::string& path);

// Formatting helpers.
std::string format_state_set(const Automaton& a, const std::vector<int>& states);  // {a,b,k}
std::string format_blocks(const Congruence& c);                                    // {{a,b},{k}}
std::string format_map(const StateMap& m);  // a->b, b->a, ...

/// One node per state (kernel states double-circled), one labeled edge per
/// (state, input), direct-sum components as clusters.
std::string automaton_dot(const Automaton& a);

/// Hasse diagram of the refinement order: one node per congruence labeled by
/// its blocks, one edge per covering pair.
std::string lattice_hasse_dot(const CongruenceLattice& lattice);

std::string report_text(const StructureReport& report);

}  // namespace retra
