#include "retra/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace retra {

ParseError::ParseError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + what
                                  : source + ": " + what),
      source(source),
      line(line) {}

namespace {

/// Splits a line into tokens, dropping everything from '#' on.
std::vector<std::string> tokenize(const std::string& line) {
    std::string effective = line;
    if (auto hash = effective.find('#'); hash != std::string::npos) {
        effective.resize(hash);
    }
    std::istringstream stream(effective);
    std::vector<std::string> tokens;
    std::string token;
    while (stream >> token) tokens.push_back(std::move(token));
    return tokens;
}

struct TransLine {
    int line;
    std::string from;
    std::string input;
    std::string to;
};

Automaton assemble_automaton(const std::string& source, int states_line,
                             const std::vector<std::string>& states, int inputs_line,
                             const std::vector<std::string>& inputs,
                             const std::vector<TransLine>& transitions, int end_line) {
    if (states_line == 0) throw ParseError(source, end_line, "missing 'states' line");
    if (inputs_line == 0) throw ParseError(source, end_line, "missing 'inputs' line");
    Automaton skeleton = [&] {
        try {
            std::vector<int> zero(states.size() * inputs.size(), 0);
            return Automaton(states, inputs, zero);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, states_line, e.what());
        }
    }();
    std::vector<int> table(states.size() * inputs.size(), -1);
    for (const TransLine& t : transitions) {
        int from = skeleton.state_index(t.from);
        if (from == -1) throw ParseError(source, t.line, "unknown state '" + t.from + "'");
        int input = skeleton.input_index(t.input);
        if (input == -1) throw ParseError(source, t.line, "unknown input '" + t.input + "'");
        int to = skeleton.state_index(t.to);
        if (to == -1) throw ParseError(source, t.line, "unknown state '" + t.to + "'");
        int& slot = table[static_cast<std::size_t>(from) * inputs.size() +
                          static_cast<std::size_t>(input)];
        if (slot != -1) {
            throw ParseError(source, t.line,
                             "duplicate transition for (" + t.from + ", " + t.input + ")");
        }
        slot = to;
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i] == -1) {
            throw ParseError(source, end_line,
                             "missing transition for (" + states[i / inputs.size()] + ", " +
                                 inputs[i % inputs.size()] + ")");
        }
    }
    return Automaton(states, inputs, std::move(table));
}

}  // namespace

Automaton load_automaton(std::istream& in, const std::string& source_name) {
    int states_line = 0;
    int inputs_line = 0;
    std::vector<std::string> states;
    std::vector<std::string> inputs;
    std::vector<TransLine> transitions;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& directive = tokens.front();
        if (directive == "states") {
            if (states_line != 0) throw ParseError(source_name, line_no, "repeated 'states' line");
            states_line = line_no;
            states.assign(tokens.begin() + 1, tokens.end());
        } else if (directive == "inputs") {
            if (inputs_line != 0) throw ParseError(source_name, line_no, "repeated 'inputs' line");
            inputs_line = line_no;
            inputs.assign(tokens.begin() + 1, tokens.end());
        } else if (directive == "trans") {
            if (tokens.size() != 4) {
                throw ParseError(source_name, line_no,
                                 "expected 'trans <state> <input> <state>'");
            }
            transitions.push_back(TransLine{line_no, tokens[1], tokens[2], tokens[3]});
        } else {
            throw ParseError(source_name, line_no, "unknown directive '" + directive + "'");
        }
    }
    return assemble_automaton(source_name, states_line, states, inputs_line, inputs, transitions,
                              line_no);
}

Automaton load_automaton_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return load_automaton(in, path);
}

std::string save_automaton(const Automaton& a) {
    std::ostringstream out;
    out << "states";
    for (const std::string& s : a.state_names()) out << ' ' << s;
    out << "\ninputs";
    for (const std::string& x : a.input_names()) out << ' ' << x;
    out << '\n';
    for (int s = 0; s < a.num_states(); ++s) {
        for (int x = 0; x < a.num_inputs(); ++x) {
            out << "trans " << a.state_name(s) << ' ' << a.input_name(x) << ' '
                << a.state_name(a.step(s, x)) << '\n';
        }
    }
    return out.str();
}

void save_automaton_file(const Automaton& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << save_automaton(a);
}

namespace {

struct RawComponent {
    int line = 0;
    std::string node;
    int states_line = 0;
    std::vector<std::string> states;
    std::vector<TransLine> transitions;
    int end_line = 0;
};

struct PhiLine {
    int line;
    std::string upper;
    std::string lower;
    std::string from;
    std::string to;
};

}  // namespace

ConstructionSpec parse_spec(std::istream& in, const std::string& source_name) {
    std::vector<std::string> inputs;
    int inputs_line = 0;
    std::vector<std::string> nodes;
    std::vector<int> node_lines;
    std::string least_name;
    int least_line = 0;
    std::vector<std::pair<std::string, std::string>> cover_names;
    std::vector<int> cover_lines;
    std::vector<RawComponent> raw_components;
    std::vector<PhiLine> phi_lines;

    RawComponent* open_component = nullptr;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& directive = tokens.front();
        if (open_component != nullptr) {
            if (directive == "states") {
                if (open_component->states_line != 0) {
                    throw ParseError(source_name, line_no, "repeated 'states' line in component");
                }
                open_component->states_line = line_no;
                open_component->states.assign(tokens.begin() + 1, tokens.end());
            } else if (directive == "trans") {
                if (tokens.size() != 4) {
                    throw ParseError(source_name, line_no,
                                     "expected 'trans <state> <input> <state>'");
                }
                open_component->transitions.push_back(
                    TransLine{line_no, tokens[1], tokens[2], tokens[3]});
            } else if (directive == "end") {
                open_component->end_line = line_no;
                open_component = nullptr;
            } else {
                throw ParseError(source_name, line_no,
                                 "unexpected directive '" + directive + "' inside a component");
            }
            continue;
        }
        if (directive == "inputs") {
            if (inputs_line != 0) throw ParseError(source_name, line_no, "repeated 'inputs' line");
            inputs_line = line_no;
            inputs.assign(tokens.begin() + 1, tokens.end());
        } else if (directive == "node") {
            if (tokens.size() != 2) throw ParseError(source_name, line_no, "expected 'node <id>'");
            nodes.push_back(tokens[1]);
            node_lines.push_back(line_no);
        } else if (directive == "least") {
            if (tokens.size() != 2) throw ParseError(source_name, line_no, "expected 'least <id>'");
            if (least_line != 0) throw ParseError(source_name, line_no, "repeated 'least' line");
            least_name = tokens[1];
            least_line = line_no;
        } else if (directive == "cover") {
            if (tokens.size() != 3) {
                throw ParseError(source_name, line_no, "expected 'cover <upper> <lower>'");
            }
            cover_names.emplace_back(tokens[1], tokens[2]);
            cover_lines.push_back(line_no);
        } else if (directive == "begin") {
            if (tokens.size() != 3 || tokens[1] != "component") {
                throw ParseError(source_name, line_no, "expected 'begin component <id>'");
            }
            raw_components.push_back(RawComponent{});
            raw_components.back().line = line_no;
            raw_components.back().node = tokens[2];
            open_component = &raw_components.back();
        } else if (directive == "phi") {
            if (tokens.size() != 5) {
                throw ParseError(source_name, line_no,
                                 "expected 'phi <upper> <lower> <srcState> <dstState>'");
            }
            phi_lines.push_back(PhiLine{line_no, tokens[1], tokens[2], tokens[3], tokens[4]});
        } else {
            throw ParseError(source_name, line_no, "unknown directive '" + directive + "'");
        }
    }
    if (open_component != nullptr) {
        throw ParseError(source_name, line_no, "component block is missing its 'end'");
    }
    if (inputs_line == 0) throw ParseError(source_name, line_no, "missing 'inputs' line");
    if (nodes.empty()) throw ParseError(source_name, line_no, "missing 'node' lines");
    if (least_line == 0) throw ParseError(source_name, line_no, "missing 'least' line");

    auto node_of = [&](const std::string& name, int at_line) {
        auto it = std::find(nodes.begin(), nodes.end(), name);
        if (it == nodes.end()) {
            throw ParseError(source_name, at_line, "unknown node '" + name + "'");
        }
        return static_cast<int>(it - nodes.begin());
    };

    std::vector<std::pair<int, int>> edges;
    for (std::size_t e = 0; e < cover_names.size(); ++e) {
        edges.emplace_back(node_of(cover_names[e].first, cover_lines[e]),
                           node_of(cover_names[e].second, cover_lines[e]));
    }
    TreePoset tree = [&] {
        try {
            return TreePoset::from_covers(nodes, edges);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source_name, least_line, e.what());
        }
    }();
    if (tree.node_index(least_name) != tree.least()) {
        throw ParseError(source_name, least_line,
                         "'least " + least_name + "' does not match the cover structure");
    }

    std::vector<std::optional<Automaton>> components(nodes.size());
    for (const RawComponent& raw : raw_components) {
        int node = node_of(raw.node, raw.line);
        if (components[static_cast<std::size_t>(node)]) {
            throw ParseError(source_name, raw.line, "repeated component for node '" + raw.node + "'");
        }
        components[static_cast<std::size_t>(node)] =
            assemble_automaton(source_name, raw.states_line, raw.states, inputs_line, inputs,
                               raw.transitions, raw.end_line);
    }
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!components[i]) {
            throw ParseError(source_name, line_no, "missing component for node '" + nodes[i] + "'");
        }
    }

    std::vector<std::vector<int>> cover_maps;
    for (auto [upper, lower] : tree.covers()) {
        cover_maps.push_back(std::vector<int>(
            static_cast<std::size_t>(components[static_cast<std::size_t>(upper)]->num_states()),
            -1));
    }
    for (const PhiLine& phi : phi_lines) {
        int upper = node_of(phi.upper, phi.line);
        int lower = node_of(phi.lower, phi.line);
        int edge = tree.cover_index(upper, lower);
        if (edge == -1) {
            throw ParseError(source_name, phi.line,
                             "'" + phi.upper + "' does not cover '" + phi.lower + "'");
        }
        int from = components[static_cast<std::size_t>(upper)]->state_index(phi.from);
        if (from == -1) {
            throw ParseError(source_name, phi.line,
                             "unknown state '" + phi.from + "' in component '" + phi.upper + "'");
        }
        int to = components[static_cast<std::size_t>(lower)]->state_index(phi.to);
        if (to == -1) {
            throw ParseError(source_name, phi.line,
                             "unknown state '" + phi.to + "' in component '" + phi.lower + "'");
        }
        int& slot = cover_maps[static_cast<std::size_t>(edge)][static_cast<std::size_t>(from)];
        if (slot != -1) {
            throw ParseError(source_name, phi.line,
                             "repeated phi entry for state '" + phi.from + "'");
        }
        slot = to;
    }

    std::vector<Automaton> final_components;
    final_components.reserve(components.size());
    for (auto& component : components) final_components.push_back(std::move(*component));
    return ConstructionSpec{std::move(tree), std::move(inputs), std::move(final_components),
                            std::move(cover_maps)};
}

ConstructionSpec load_spec(std::istream& in, const std::string& source_name) {
    ConstructionSpec spec = parse_spec(in, source_name);
    SpecValidation v = validate_spec(spec);
    if (!v.ok()) {
        std::string message = "construction spec is invalid";
        for (const std::string& problem : v.problems) message += "\n  " + problem;
        throw ParseError(source_name, 0, message);
    }
    return spec;
}

ConstructionSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return load_spec(in, path);
}

std::string save_spec(const ConstructionSpec& s) {
    std::ostringstream out;
    out << "inputs";
    for (const std::string& x : s.inputs) out << ' ' << x;
    out << '\n';
    for (const std::string& node : s.tree.nodes()) out << "node " << node << '\n';
    out << "least " << s.tree.node_name(s.tree.least()) << '\n';
    for (auto [upper, lower] : s.tree.covers()) {
        out << "cover " << s.tree.node_name(upper) << ' ' << s.tree.node_name(lower) << '\n';
    }
    for (int i = 0; i < s.tree.num_nodes(); ++i) {
        const Automaton& component = s.components[static_cast<std::size_t>(i)];
        out << "begin component " << s.tree.node_name(i) << '\n';
        out << "states";
        for (const std::string& name : component.state_names()) out << ' ' << name;
        out << '\n';
        for (int st = 0; st < component.num_states(); ++st) {
            for (int x = 0; x < component.num_inputs(); ++x) {
                out << "trans " << component.state_name(st) << ' ' << component.input_name(x)
                    << ' ' << component.state_name(component.step(st, x)) << '\n';
            }
        }
        out << "end\n";
    }
    for (std::size_t e = 0; e < s.tree.covers().size(); ++e) {
        auto [upper, lower] = s.tree.covers()[e];
        const Automaton& hi = s.components[static_cast<std::size_t>(upper)];
        const Automaton& lo = s.components[static_cast<std::size_t>(lower)];
        for (int st = 0; st < hi.num_states(); ++st) {
            int to = s.cover_maps[e][static_cast<std::size_t>(st)];
            if (to == -1) continue;
            out << "phi " << s.tree.node_name(upper) << ' ' << s.tree.node_name(lower) << ' '
                << hi.state_name(st) << ' ' << lo.state_name(to) << '\n';
        }
    }
    return out.str();
}

void save_spec_file(const ConstructionSpec& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << save_spec(s);
}

std::string format_state_set(const Automaton& a, const std::vector<int>& states) {
    std::string out = "{";
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i > 0) out += ",";
        out += a.state_name(states[i]);
    }
    out += "}";
    return out;
}

std::string format_blocks(const Congruence& c) {
    std::string out = "{";
    Partition blocks = c.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i > 0) out += ",";
        out += format_state_set(c.automaton(), blocks[i]);
    }
    out += "}";
    return out;
}

std::string format_map(const StateMap& m) {
    std::string out;
    for (int s = 0; s < m.source.num_states(); ++s) {
        if (s > 0) out += ", ";
        out += m.source.state_name(s) + "->" + m.target.state_name(m(s));
    }
    return out;
}

namespace {

std::string quote(const std::string& name) {
    std::string out = "\"";
    for (char ch : name) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::string automaton_dot(const Automaton& a) {
    std::vector<Subautomaton> components = direct_sum_components(a);
    std::vector<char> in_kernel(static_cast<std::size_t>(a.num_states()), 0);
    for (const Subautomaton& component : components) {
        if (std::optional<Subautomaton> kern = kernel(component.extract())) {
            for (int local : kern->carrier) {
                in_kernel[static_cast<std::size_t>(component.to_ambient(local))] = 1;
            }
        }
    }
    std::ostringstream out;
    out << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (std::size_t c = 0; c < components.size(); ++c) {
        out << "  subgraph cluster_" << c << " {\n    label=\"component " << c + 1 << "\";\n";
        for (int s : components[c].carrier) {
            out << "    " << quote(a.state_name(s));
            if (in_kernel[static_cast<std::size_t>(s)]) out << " [shape=doublecircle]";
            out << ";\n";
        }
        out << "  }\n";
    }
    for (int s = 0; s < a.num_states(); ++s) {
        for (int x = 0; x < a.num_inputs(); ++x) {
            out << "  " << quote(a.state_name(s)) << " -> " << quote(a.state_name(a.step(s, x)))
                << " [label=" << quote(a.input_name(x)) << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string lattice_hasse_dot(const CongruenceLattice& lattice) {
    std::ostringstream out;
    out << "digraph congruence_lattice {\n  rankdir=BT;\n  node [shape=box];\n";
    for (int i = 0; i < lattice.size(); ++i) {
        out << "  n" << i << " [label="
            << quote(format_blocks(lattice.elements()[static_cast<std::size_t>(i)])) << "];\n";
    }
    for (auto [finer, coarser] : lattice.covers()) {
        out << "  n" << finer << " -> n" << coarser << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string report_text(const StructureReport& report) {
    const Automaton& a = report.automaton;
    std::ostringstream out;
    out << "automaton: " << a.num_states() << " states, " << a.num_inputs() << " inputs\n";
    out << "direct-sum components: " << report.components.size() << '\n';
    for (std::size_t i = 0; i < report.components.size(); ++i) {
        out << "  component " << i + 1 << ": "
            << format_state_set(a, report.components[i].carrier) << "  kernel: "
            << (report.component_kernels[i]
                    ? format_state_set(a, report.component_kernels[i]->carrier)
                    : std::string("none"))
            << '\n';
    }
    if (report.kernel_issue) {
        out << "kernel chain: " << report.kernel_issue->reason << " (components "
            << report.kernel_issue->first + 1 << ", " << report.kernel_issue->second + 1 << ")\n";
    } else if (report.components.size() > 1) {
        out << "kernel chain: all component kernels isomorphic\n";
    }
    out << "dilation base: " << format_state_set(a, report.dilation.base.carrier)
        << (report.dilation.proper ? " (proper)" : " (whole automaton)") << '\n';
    if (report.dilation.proper) {
        out << "  dilation map: " << format_map(report.dilation.map) << '\n';
    }
    out << "principal factors:\n";
    for (const PrincipalFactor& factor : report.factors) {
        out << "  " << a.state_name(factor.generator) << ": R="
            << format_state_set(a, factor.generated_sub.carrier) << " class="
            << format_state_set(a, factor.r_class) << " remainder="
            << (factor.remainder ? format_state_set(a, factor.remainder->carrier)
                                 : std::string("{}"))
            << " factor-states=" << factor.factor.num_states() << ' '
            << to_string(factor.classification) << '\n';
    }
    out << "semi-connected: " << (report.semi_connected ? "yes" : "no") << '\n';
    return out.str();
}

}  // namespace retra
