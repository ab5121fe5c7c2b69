#include "retra/construction.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>

namespace retra {

TreePoset TreePoset::from_covers(std::vector<std::string> nodes,
                                 const std::vector<std::pair<int, int>>& edges) {
    TreePoset tree;
    tree.nodes_ = std::move(nodes);
    const int n = tree.num_nodes();
    if (n == 0) throw std::invalid_argument("tree must have at least one node");
    std::set<std::string> seen;
    for (const std::string& name : tree.nodes_) {
        if (name.empty()) throw std::invalid_argument("tree node name must be nonempty");
        for (unsigned char ch : name) {
            // '.' is the glued-name separator between node and local state.
            if (std::isspace(ch) || ch == '#' || ch == '.') {
                throw std::invalid_argument("tree node name '" + name + "' contains '.', '#' or whitespace");
            }
        }
        if (!seen.insert(name).second) {
            throw std::invalid_argument("duplicate tree node '" + name + "'");
        }
    }

    std::vector<std::uint8_t> lt(static_cast<std::size_t>(n) * n, 0);  // strict order
    for (auto [upper, lower] : edges) {
        if (upper < 0 || upper >= n || lower < 0 || lower >= n) {
            throw std::invalid_argument("tree edge endpoint out of range");
        }
        if (upper == lower) throw std::invalid_argument("tree edge endpoints must differ");
        lt[static_cast<std::size_t>(lower) * n + upper] = 1;
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (lt[static_cast<std::size_t>(i) * n + k] && lt[static_cast<std::size_t>(k) * n + j]) {
                    lt[static_cast<std::size_t>(i) * n + j] = 1;
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (lt[static_cast<std::size_t>(i) * n + i]) {
            throw std::invalid_argument("tree order contains a cycle through '" +
                                        tree.nodes_[static_cast<std::size_t>(i)] + "'");
        }
    }
    tree.leq_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            tree.leq_[static_cast<std::size_t>(i) * n + j] = (i == j) || lt[static_cast<std::size_t>(i) * n + j];
        }
    }

    tree.least_ = -1;
    for (int i = 0; i < n; ++i) {
        bool below_all = true;
        for (int j = 0; below_all && j < n; ++j) below_all = tree.leq(i, j);
        if (below_all) {
            tree.least_ = i;
            break;
        }
    }
    if (tree.least_ == -1) throw std::invalid_argument("tree has no least element");

    for (int i = 0; i < n; ++i) {
        for (int j1 = 0; j1 < n; ++j1) {
            if (!tree.leq(j1, i)) continue;
            for (int j2 = j1 + 1; j2 < n; ++j2) {
                if (!tree.leq(j2, i)) continue;
                if (!tree.leq(j1, j2) && !tree.leq(j2, j1)) {
                    throw std::invalid_argument("down-set of tree node '" +
                                                tree.nodes_[static_cast<std::size_t>(i)] +
                                                "' is not a chain");
                }
            }
        }
    }
    // Two-element lower bounds exist because of the least element; asserted
    // for completeness.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!tree.leq(tree.least_, i) || !tree.leq(tree.least_, j)) {
                throw std::invalid_argument("tree nodes lack a common lower bound");
            }
        }
    }

    for (int upper = 0; upper < n; ++upper) {
        for (int lower = 0; lower < n; ++lower) {
            if (upper == lower || !tree.leq(lower, upper)) continue;
            bool covering = true;
            for (int k = 0; covering && k < n; ++k) {
                if (k != upper && k != lower && tree.leq(lower, k) && tree.leq(k, upper)) {
                    covering = false;
                }
            }
            if (covering) tree.covers_.emplace_back(upper, lower);
        }
    }
    std::sort(tree.covers_.begin(), tree.covers_.end());
    return tree;
}

int TreePoset::node_index(std::string_view name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] == name) return static_cast<int>(i);
    }
    return -1;
}

bool TreePoset::leq(int i, int j) const {
    return leq_[static_cast<std::size_t>(i) * num_nodes() + j] != 0;
}

int TreePoset::cover_index(int upper, int lower) const {
    for (std::size_t e = 0; e < covers_.size(); ++e) {
        if (covers_[e] == std::pair<int, int>{upper, lower}) return static_cast<int>(e);
    }
    return -1;
}

std::vector<int> TreePoset::down_chain(int i) const {
    std::vector<int> chain;
    for (int j = 0; j < num_nodes(); ++j) {
        if (leq(j, i)) chain.push_back(j);
    }
    std::sort(chain.begin(), chain.end(), [this](int a, int b) { return a != b && leq(b, a); });
    return chain;
}

std::vector<PosetIdeal> ideals(const TreePoset& tree) {
    const int n = tree.num_nodes();
    std::vector<std::vector<int>> found;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool closed = true;
        for (int i = 0; closed && i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            for (int j = 0; j < n; ++j) {
                if (tree.leq(j, i) && !(mask & (1u << j))) {
                    closed = false;
                    break;
                }
            }
        }
        if (!closed) continue;
        std::vector<int> members;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) members.push_back(i);
        }
        found.push_back(std::move(members));
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<PosetIdeal> result;
    result.reserve(found.size());
    for (auto& members : found) result.push_back(PosetIdeal{tree, std::move(members)});
    return result;
}

namespace {

std::vector<PartialAutomaton> partial_components(const ConstructionSpec& s) {
    std::vector<PartialAutomaton> result;
    result.reserve(s.components.size());
    for (const Automaton& component : s.components) result.push_back(partial_derived(component));
    return result;
}

}  // namespace

SpecValidation validate_spec(const ConstructionSpec& s) {
    SpecValidation v;
    v.boundary_witness.assign(s.tree.covers().size(), std::nullopt);

    v.structure_ok = true;
    if (static_cast<int>(s.components.size()) != s.tree.num_nodes()) {
        v.problems.push_back("expected one component per tree node");
        v.structure_ok = false;
    }
    if (s.cover_maps.size() != s.tree.covers().size()) {
        v.problems.push_back("expected one cover map per cover edge");
        v.structure_ok = false;
    }
    if (v.structure_ok) {
        for (int i = 0; i < s.tree.num_nodes(); ++i) {
            if (s.components[static_cast<std::size_t>(i)].input_names() != s.inputs) {
                v.problems.push_back("component '" + s.tree.node_name(i) +
                                     "' does not use the shared input alphabet");
                v.structure_ok = false;
            }
        }
    }
    std::vector<PartialAutomaton> partials;
    if (v.structure_ok) {
        partials = partial_components(s);
        for (std::size_t e = 0; e < s.tree.covers().size(); ++e) {
            auto [upper, lower] = s.tree.covers()[e];
            const std::vector<int>& map = s.cover_maps[e];
            if (map.size() != static_cast<std::size_t>(
                                  s.components[static_cast<std::size_t>(upper)].num_states())) {
                v.problems.push_back("cover map " + s.tree.node_name(upper) + " -> " +
                                     s.tree.node_name(lower) +
                                     " is not indexed by the upper component's states");
                v.structure_ok = false;
                continue;
            }
            for (int a = 0; a < s.components[static_cast<std::size_t>(upper)].num_states(); ++a) {
                int value = map[static_cast<std::size_t>(a)];
                bool on_carrier = partials[static_cast<std::size_t>(upper)].in_carrier(a);
                bool value_ok = on_carrier
                                    ? (value >= 0 && partials[static_cast<std::size_t>(lower)].in_carrier(value))
                                    : value == -1;
                if (!value_ok) {
                    v.problems.push_back(
                        "cover map " + s.tree.node_name(upper) + " -> " + s.tree.node_name(lower) +
                        (on_carrier ? " is not total on the upper partial carrier"
                                    : " assigns a value off the upper partial carrier"));
                    v.structure_ok = false;
                    break;
                }
            }
        }
    }
    if (!v.structure_ok) return v;

    // Components live in separate automata and glued states are named
    // node.state, so carriers cannot collide.
    v.disjoint_ok = true;

    v.connectivity_ok = true;
    for (int i = 0; i < s.tree.num_nodes(); ++i) {
        const Automaton& component = s.components[static_cast<std::size_t>(i)];
        if (i == s.tree.least()) {
            if (!is_strongly_connected(component)) {
                v.problems.push_back("(i) least component '" + s.tree.node_name(i) +
                                     "' is not strongly connected");
                v.connectivity_ok = false;
            }
        } else if (!is_strongly_trap_connected(component)) {
            v.problems.push_back("(i) component '" + s.tree.node_name(i) +
                                 "' is not strongly trap connected");
            v.connectivity_ok = false;
        }
    }

    v.partial_homs_ok = true;
    for (std::size_t e = 0; e < s.tree.covers().size(); ++e) {
        auto [upper, lower] = s.tree.covers()[e];
        if (!is_partial_homomorphism(partials[static_cast<std::size_t>(upper)],
                                     partials[static_cast<std::size_t>(lower)], s.cover_maps[e])) {
            v.problems.push_back("(ii) cover map " + s.tree.node_name(upper) + " -> " +
                                 s.tree.node_name(lower) + " is not a partial homomorphism");
            v.partial_homs_ok = false;
        }
    }

    v.boundary_ok = true;
    for (std::size_t e = 0; e < s.tree.covers().size(); ++e) {
        auto [upper, lower] = s.tree.covers()[e];
        const PartialAutomaton& hi = partials[static_cast<std::size_t>(upper)];
        const PartialAutomaton& lo = partials[static_cast<std::size_t>(lower)];
        for (int a : hi.carrier) {
            for (int x = 0; x < hi.base.num_inputs() && !v.boundary_witness[e]; ++x) {
                if (hi.in_carrier(hi.base.step(a, x))) continue;
                int image = s.cover_maps[e][static_cast<std::size_t>(a)];
                if (lo.in_carrier(lo.base.step(image, x))) {
                    v.boundary_witness[e] = std::make_pair(a, x);
                }
            }
            if (v.boundary_witness[e]) break;
        }
        if (!v.boundary_witness[e]) {
            v.problems.push_back("(iii) cover " + s.tree.node_name(upper) + " -> " +
                                 s.tree.node_name(lower) +
                                 " has no exit transition landing in the lower carrier");
            v.boundary_ok = false;
        }
    }
    return v;
}

std::vector<int> compose_phi(const ConstructionSpec& s, int i, int j) {
    if (i < 0 || i >= s.tree.num_nodes() || j < 0 || j >= s.tree.num_nodes()) {
        throw std::invalid_argument("compose_phi: node out of range");
    }
    if (!s.tree.leq(j, i)) {
        throw std::invalid_argument("compose_phi: '" + s.tree.node_name(j) +
                                    "' is not below '" + s.tree.node_name(i) + "'");
    }
    const PartialAutomaton source = partial_derived(s.components[static_cast<std::size_t>(i)]);
    std::vector<int> current(static_cast<std::size_t>(s.components[static_cast<std::size_t>(i)].num_states()), -1);
    for (int a : source.carrier) current[static_cast<std::size_t>(a)] = a;

    const std::vector<int> chain = s.tree.down_chain(i);
    for (std::size_t step = 0; step + 1 < chain.size(); ++step) {
        const int from = chain[step];
        if (from == j) break;
        const int to = chain[step + 1];
        const int edge = s.tree.cover_index(from, to);
        for (int a : source.carrier) {
            current[static_cast<std::size_t>(a)] =
                s.cover_maps[static_cast<std::size_t>(edge)]
                            [static_cast<std::size_t>(current[static_cast<std::size_t>(a)])];
        }
        if (to == j) break;
    }
    return current;
}

GluedAutomaton build(const ConstructionSpec& s) {
    SpecValidation v = validate_spec(s);
    if (!v.ok()) {
        std::string message = "build: construction spec is invalid";
        for (const std::string& problem : v.problems) message += "; " + problem;
        throw std::invalid_argument(message);
    }
    const int nodes = s.tree.num_nodes();
    std::vector<PartialAutomaton> partials = partial_components(s);

    std::vector<std::pair<int, int>> origin;
    std::vector<std::vector<int>> glued_index(static_cast<std::size_t>(nodes));
    std::vector<std::string> names;
    for (int i = 0; i < nodes; ++i) {
        glued_index[static_cast<std::size_t>(i)]
            .assign(static_cast<std::size_t>(s.components[static_cast<std::size_t>(i)].num_states()), -1);
        for (int a : partials[static_cast<std::size_t>(i)].carrier) {
            glued_index[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] =
                static_cast<int>(origin.size());
            origin.emplace_back(i, a);
            names.push_back(s.tree.node_name(i) + "." +
                            s.components[static_cast<std::size_t>(i)].state_name(a));
        }
    }

    std::vector<std::vector<std::vector<int>>> phi(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        phi[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(nodes));
        for (int j = 0; j < nodes; ++j) {
            if (s.tree.leq(j, i)) phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = compose_phi(s, i, j);
        }
    }

    const int k = static_cast<int>(s.inputs.size());
    std::vector<int> table;
    table.reserve(origin.size() * static_cast<std::size_t>(k));
    for (const auto& [node, local] : origin) {
        for (int x = 0; x < k; ++x) {
            int target = -1;
            // Greatest node below whose component keeps the step inside its
            // carrier; the least component is total, so the walk terminates.
            for (int j : s.tree.down_chain(node)) {
                int mapped = phi[static_cast<std::size_t>(node)][static_cast<std::size_t>(j)]
                                [static_cast<std::size_t>(local)];
                int stepped = s.components[static_cast<std::size_t>(j)].step(mapped, x);
                if (partials[static_cast<std::size_t>(j)].in_carrier(stepped)) {
                    target = glued_index[static_cast<std::size_t>(j)][static_cast<std::size_t>(stepped)];
                    break;
                }
            }
            table.push_back(target);
        }
    }
    Automaton glued(std::move(names), s.inputs, std::move(table));
    return GluedAutomaton{std::move(glued), std::move(origin), std::move(glued_index)};
}

RetractFamily canonical_family(const ConstructionSpec& s, const GluedAutomaton& built) {
    const std::vector<PosetIdeal> tree_ideals = ideals(s.tree);
    std::vector<Subautomaton> subs = subautomata(built.automaton);
    if (subs.size() != tree_ideals.size()) {
        throw VerificationError("canonical_family: " + std::to_string(tree_ideals.size()) +
                                " ideals against " + std::to_string(subs.size()) +
                                " subautomata");
    }

    std::map<std::vector<int>, std::vector<int>> map_by_carrier;
    for (const PosetIdeal& ideal : tree_ideals) {
        std::vector<int> carrier;
        for (int node : ideal.members) {
            for (int g : built.glued_index[static_cast<std::size_t>(node)]) {
                if (g != -1) carrier.push_back(g);
            }
        }
        std::sort(carrier.begin(), carrier.end());

        std::vector<int> lambda(static_cast<std::size_t>(built.automaton.num_states()), -1);
        for (int g = 0; g < built.automaton.num_states(); ++g) {
            const auto& [node, local] = built.origin[static_cast<std::size_t>(g)];
            int target_node = -1;
            for (int j : s.tree.down_chain(node)) {
                if (std::binary_search(ideal.members.begin(), ideal.members.end(), j)) {
                    target_node = j;  // greatest ideal node below
                    break;
                }
            }
            const std::vector<int> mapped = compose_phi(s, node, target_node);
            lambda[static_cast<std::size_t>(g)] =
                built.glued_index[static_cast<std::size_t>(target_node)]
                                 [static_cast<std::size_t>(mapped[static_cast<std::size_t>(local)])];
        }
        map_by_carrier.emplace(std::move(carrier), std::move(lambda));
    }

    std::vector<StateMap> maps;
    maps.reserve(subs.size());
    for (const Subautomaton& sub : subs) {
        auto it = map_by_carrier.find(sub.carrier);
        if (it == map_by_carrier.end()) {
            throw VerificationError("canonical_family: subautomaton " +
                                    std::to_string(sub.carrier.size()) +
                                    " states wide is not induced by any ideal");
        }
        maps.push_back(StateMap{built.automaton, built.automaton, it->second});
    }
    return RetractFamily{built.automaton, std::move(subs), std::move(maps)};
}

RecoveredSpec recover_spec(const Automaton& a) {
    std::optional<Subautomaton> kern = kernel(a);
    if (!kern) return RecoveredSpec{std::nullopt, "automaton has no kernel"};
    std::optional<RetractFamily> family = boolean_family(a);
    if (!family) {
        return RecoveredSpec{std::nullopt, "automaton is not Boolean-type retractable"};
    }
    if (!is_semi_connected(a)) return RecoveredSpec{std::nullopt, "automaton is not semi-connected"};

    // Generator classes, ordered by (generated size, smallest member).
    struct ClassData {
        std::vector<int> gen;      // R(repr), ambient carrier
        std::vector<int> members;  // the class itself
    };
    std::vector<ClassData> classes;
    {
        std::map<std::vector<int>, std::vector<int>> by_gen;
        for (int s = 0; s < a.num_states(); ++s) {
            by_gen[generated(a, s).carrier].push_back(s);
        }
        for (auto& [gen, members] : by_gen) classes.push_back(ClassData{gen, std::move(members)});
        std::sort(classes.begin(), classes.end(), [](const ClassData& l, const ClassData& r) {
            if (l.gen.size() != r.gen.size()) return l.gen.size() < r.gen.size();
            return l.members.front() < r.members.front();
        });
    }
    const int m = static_cast<int>(classes.size());

    std::vector<std::string> node_names;
    node_names.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) node_names.push_back("c" + std::to_string(i));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j && is_sorted_subset(classes[static_cast<std::size_t>(i)].gen,
                                           classes[static_cast<std::size_t>(j)].gen)) {
                edges.emplace_back(j, i);
            }
        }
    }
    TreePoset tree;
    try {
        tree = TreePoset::from_covers(std::move(node_names), edges);
    } catch (const std::invalid_argument& e) {
        return RecoveredSpec{std::nullopt,
                             std::string("generator classes do not form a tree: ") + e.what()};
    }
    if (tree.least() != 0) {
        return RecoveredSpec{std::nullopt, "kernel class is not the least generator class"};
    }

    // Component per class: the principal factor, with its quotient projection
    // kept for translating between ambient states and component states.
    std::vector<Automaton> components;
    std::vector<Subautomaton> gens;        // R(repr) as subautomaton, for to_local
    std::vector<std::vector<int>> projs;   // gen-local -> component state
    for (int i = 0; i < m; ++i) {
        Subautomaton gen = make_subautomaton(a, classes[static_cast<std::size_t>(i)].gen);
        std::vector<int> rest;
        std::set_difference(gen.carrier.begin(), gen.carrier.end(),
                            classes[static_cast<std::size_t>(i)].members.begin(),
                            classes[static_cast<std::size_t>(i)].members.end(),
                            std::back_inserter(rest));
        Automaton extracted = gen.extract();
        if (rest.empty()) {
            std::vector<int> proj(static_cast<std::size_t>(extracted.num_states()));
            for (int s = 0; s < extracted.num_states(); ++s) proj[static_cast<std::size_t>(s)] = s;
            components.push_back(std::move(extracted));
            projs.push_back(std::move(proj));
        } else {
            std::vector<int> rest_local;
            rest_local.reserve(rest.size());
            for (int s : rest) rest_local.push_back(gen.to_local(s));
            Quotient q = quotient(extracted, rees(make_subautomaton(extracted, rest_local)));
            components.push_back(std::move(q.automaton));
            projs.push_back(std::move(q.projection.map));
        }
        gens.push_back(std::move(gen));
    }

    std::vector<std::vector<int>> cover_maps;
    for (auto [upper, lower] : tree.covers()) {
        const ClassData& hi = classes[static_cast<std::size_t>(upper)];
        std::vector<int> rest;
        std::set_difference(hi.gen.begin(), hi.gen.end(), hi.members.begin(), hi.members.end(),
                            std::back_inserter(rest));
        const StateMap* lambda = family->map_for(rest);
        if (lambda == nullptr) {
            return RecoveredSpec{std::nullopt, "family misses the remainder subautomaton"};
        }
        std::vector<int> map(static_cast<std::size_t>(
                                 components[static_cast<std::size_t>(upper)].num_states()),
                             -1);
        for (int b : hi.members) {
            int image = (*lambda)(b);
            int image_local = gens[static_cast<std::size_t>(lower)].to_local(image);
            if (image_local == -1) {
                return RecoveredSpec{std::nullopt,
                                     "retract image leaves the expected generator class"};
            }
            int src = projs[static_cast<std::size_t>(upper)]
                           [static_cast<std::size_t>(gens[static_cast<std::size_t>(upper)].to_local(b))];
            map[static_cast<std::size_t>(src)] =
                projs[static_cast<std::size_t>(lower)][static_cast<std::size_t>(image_local)];
        }
        cover_maps.push_back(std::move(map));
    }

    ConstructionSpec spec{std::move(tree), a.input_names(), std::move(components),
                          std::move(cover_maps)};
    SpecValidation v = validate_spec(spec);
    if (!v.ok()) {
        std::string reason = "recovered spec fails validation";
        for (const std::string& problem : v.problems) reason += "; " + problem;
        return RecoveredSpec{std::nullopt, reason};
    }
    return RecoveredSpec{std::move(spec), ""};
}

}  // namespace retra
