#include "retra/enumerate.hpp"

#include <random>
#include <stdexcept>

namespace retra {

namespace {

std::vector<std::string> canonical_names(const char* prefix, int count) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

std::uint64_t checked_power(std::uint64_t base, int exponent) {
    std::uint64_t result = 1;
    for (int i = 0; i < exponent; ++i) {
        if (result > (std::uint64_t{1} << 62) / base) {
            throw std::invalid_argument("automaton space is too large to enumerate");
        }
        result *= base;
    }
    return result;
}

}  // namespace

AutomatonEnumerator::AutomatonEnumerator(int num_states, int num_inputs)
    : num_states_(num_states),
      num_inputs_(num_inputs),
      count_(0),
      state_names_(canonical_names("s", num_states)),
      input_names_(canonical_names("x", num_inputs)) {
    if (num_states < 1 || num_inputs < 1) {
        throw std::invalid_argument("enumeration needs at least one state and one input");
    }
    count_ = checked_power(static_cast<std::uint64_t>(num_states), num_states * num_inputs);
}

Automaton AutomatonEnumerator::at(std::uint64_t index) const {
    if (index >= count_) throw std::invalid_argument("enumeration index out of range");
    const int cells = num_states_ * num_inputs_;
    std::vector<int> table(static_cast<std::size_t>(cells));
    for (int cell = cells - 1; cell >= 0; --cell) {
        table[static_cast<std::size_t>(cell)] =
            static_cast<int>(index % static_cast<std::uint64_t>(num_states_));
        index /= static_cast<std::uint64_t>(num_states_);
    }
    return Automaton(state_names_, input_names_, std::move(table));
}

Automaton random_automaton(int num_states, int num_inputs, std::uint64_t seed) {
    if (num_states < 1 || num_inputs < 1) {
        throw std::invalid_argument("random automaton needs at least one state and one input");
    }
    std::mt19937_64 engine(seed);
    std::vector<int> table(static_cast<std::size_t>(num_states) * num_inputs);
    for (int& cell : table) {
        cell = static_cast<int>(engine() % static_cast<std::uint64_t>(num_states));
    }
    return Automaton(canonical_names("s", num_states), canonical_names("x", num_inputs),
                     std::move(table));
}

namespace {

/// Hardwired tree shapes on up to four nodes (edges as (upper, lower)).
std::vector<std::vector<std::pair<int, int>>> corpus_tree_shapes() {
    return {
        {},                                // single node
        {{1, 0}},                          // chain of two
        {{1, 0}, {2, 1}},                  // chain of three
        {{1, 0}, {2, 0}},                  // two leaves over the root
        {{1, 0}, {2, 1}, {3, 2}},          // chain of four
        {{1, 0}, {2, 0}, {3, 0}},          // three leaves over the root
        {{1, 0}, {2, 1}, {3, 0}},          // chain of three plus a root leaf
        {{1, 0}, {2, 1}, {3, 1}},          // fork above a chain of two
    };
}

/// All cover maps satisfying conditions (ii) and (iii) for one edge, ordered
/// lexicographically.
std::vector<std::vector<int>> admissible_cover_maps(const Automaton& upper,
                                                    const Automaton& lower) {
    const PartialAutomaton hi = partial_derived(upper);
    const PartialAutomaton lo = partial_derived(lower);
    std::vector<std::vector<int>> result;
    std::vector<int> map(static_cast<std::size_t>(upper.num_states()), -1);
    auto fill = [&](auto&& self, std::size_t pos) -> void {
        if (pos == hi.carrier.size()) {
            if (!is_partial_homomorphism(hi, lo, map)) return;
            bool boundary = false;
            for (int a : hi.carrier) {
                for (int x = 0; x < upper.num_inputs() && !boundary; ++x) {
                    boundary = !hi.in_carrier(upper.step(a, x)) &&
                               lo.in_carrier(lower.step(map[static_cast<std::size_t>(a)], x));
                }
            }
            if (boundary) result.push_back(map);
            return;
        }
        for (int value : lo.carrier) {
            map[static_cast<std::size_t>(hi.carrier[pos])] = value;
            self(self, pos + 1);
        }
        map[static_cast<std::size_t>(hi.carrier[pos])] = -1;
    };
    fill(fill, 0);
    return result;
}

std::vector<Automaton> strongly_connected_catalog() {
    std::vector<Automaton> catalog;
    for (int n = 1; n <= 3 && catalog.size() < 8; ++n) {
        AutomatonEnumerator source(n, 2);
        for (std::uint64_t i = 0; i < source.count() && catalog.size() < 8; ++i) {
            Automaton candidate = source.at(i);
            if (is_strongly_connected(candidate)) catalog.push_back(std::move(candidate));
        }
    }
    return catalog;
}

std::vector<Automaton> strongly_trap_connected_catalog() {
    std::vector<Automaton> catalog;
    for (int n = 2; n <= 4; ++n) {
        const std::size_t per_size = n == 4 ? 4 : 8;
        std::size_t taken = 0;
        AutomatonEnumerator source(n, 2);
        for (std::uint64_t i = 0; i < source.count() && taken < per_size; ++i) {
            Automaton candidate = source.at(i);
            if (candidate.num_states() > 1 && is_strongly_trap_connected(candidate)) {
                catalog.push_back(std::move(candidate));
                ++taken;
            }
        }
    }
    return catalog;
}

}  // namespace

std::vector<ConstructionSpec> construction_corpus(int min_count) {
    const std::vector<Automaton> connected = strongly_connected_catalog();
    const std::vector<Automaton> trap_connected = strongly_trap_connected_catalog();
    const std::vector<std::string> inputs = connected.front().input_names();

    std::vector<ConstructionSpec> corpus;
    for (const auto& shape : corpus_tree_shapes()) {
        int nodes = 1;
        for (auto [upper, lower] : shape) nodes = std::max({nodes, upper + 1, lower + 1});
        std::vector<std::string> names;
        for (int i = 0; i < nodes; ++i) names.push_back(std::to_string(i));
        const TreePoset tree = TreePoset::from_covers(names, shape);

        // Odometer over per-node catalog picks, capped per shape.
        std::vector<std::size_t> pick(static_cast<std::size_t>(nodes), 0);
        const int cap = 80;
        for (int attempt = 0; attempt < cap; ++attempt) {
            std::vector<Automaton> components;
            for (int i = 0; i < nodes; ++i) {
                const auto& catalog = i == tree.least() ? connected : trap_connected;
                components.push_back(catalog[pick[static_cast<std::size_t>(i)] % catalog.size()]);
            }
            bool all_edges_ok = true;
            std::vector<std::vector<int>> cover_maps;
            for (auto [upper, lower] : tree.covers()) {
                std::vector<std::vector<int>> options = admissible_cover_maps(
                    components[static_cast<std::size_t>(upper)],
                    components[static_cast<std::size_t>(lower)]);
                if (options.empty()) {
                    all_edges_ok = false;
                    break;
                }
                // Vary the chosen map with the attempt counter for spread.
                cover_maps.push_back(options[static_cast<std::size_t>(attempt) % options.size()]);
            }
            if (all_edges_ok) {
                ConstructionSpec spec{tree, inputs, std::move(components), std::move(cover_maps)};
                if (validate_spec(spec).ok()) corpus.push_back(std::move(spec));
            }
            // Advance the odometer; stop after a full cycle of picks.
            bool wrapped = true;
            for (std::size_t i = 0; i < pick.size(); ++i) {
                const auto& catalog = static_cast<int>(i) == tree.least() ? connected : trap_connected;
                if (++pick[i] < catalog.size()) {
                    wrapped = false;
                    break;
                }
                pick[i] = 0;
            }
            if (wrapped) break;
        }
    }
    if (static_cast<int>(corpus.size()) < min_count) {
        throw std::runtime_error("construction corpus came up short: " +
                                 std::to_string(corpus.size()) + " specs");
    }
    return corpus;
}

}  // namespace retra
