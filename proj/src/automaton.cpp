#include "retra/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <queue>
#include <set>
#include <stdexcept>

namespace retra {

namespace {

void check_tokens(const std::vector<std::string>& names, const char* what) {
    if (names.empty()) {
        throw std::invalid_argument(std::string(what) + " set must be nonempty");
    }
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) {
            throw std::invalid_argument(std::string(what) + " identifier must be nonempty");
        }
        for (unsigned char ch : name) {
            if (std::isspace(ch) || ch == '#') {
                throw std::invalid_argument(std::string(what) + " identifier '" + name +
                                            "' contains whitespace or '#'");
            }
        }
        if (!seen.insert(name).second) {
            throw std::invalid_argument(std::string("duplicate ") + what + " identifier '" +
                                        name + "'");
        }
    }
}

int find_name(const std::vector<std::string>& names, std::string_view name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

Automaton::Automaton(std::vector<std::string> states, std::vector<std::string> inputs,
                     std::vector<int> table)
    : state_names_(std::move(states)), input_names_(std::move(inputs)), table_(std::move(table)) {
    check_tokens(state_names_, "state");
    check_tokens(input_names_, "input");
    const std::size_t expected = state_names_.size() * input_names_.size();
    if (table_.size() != expected) {
        throw std::invalid_argument("transition table has " + std::to_string(table_.size()) +
                                    " entries, expected " + std::to_string(expected));
    }
    for (int target : table_) {
        if (target < 0 || target >= num_states()) {
            throw std::invalid_argument("transition target out of range");
        }
    }
}

const std::string& Automaton::state_name(int s) const {
    if (s < 0 || s >= num_states()) throw std::invalid_argument("state index out of range");
    return state_names_[static_cast<std::size_t>(s)];
}

const std::string& Automaton::input_name(int x) const {
    if (x < 0 || x >= num_inputs()) throw std::invalid_argument("input index out of range");
    return input_names_[static_cast<std::size_t>(x)];
}

int Automaton::state_index(std::string_view name) const { return find_name(state_names_, name); }

int Automaton::input_index(std::string_view name) const { return find_name(input_names_, name); }

int run(const Automaton& a, int start, std::span<const int> word) {
    if (start < 0 || start >= a.num_states()) {
        throw std::invalid_argument("run: unknown start state");
    }
    int state = start;
    for (int letter : word) {
        if (letter < 0 || letter >= a.num_inputs()) {
            throw std::invalid_argument("run: unknown input letter");
        }
        state = a.step(state, letter);
    }
    return state;
}

StateMap identity_map(const Automaton& a) {
    std::vector<int> map(static_cast<std::size_t>(a.num_states()));
    for (int s = 0; s < a.num_states(); ++s) map[static_cast<std::size_t>(s)] = s;
    return StateMap{a, a, std::move(map)};
}

StateMap compose(const StateMap& first, const StateMap& then) {
    if (!(first.target == then.source)) {
        throw std::invalid_argument("compose: inner target differs from outer source");
    }
    std::vector<int> map(first.map.size());
    for (std::size_t s = 0; s < first.map.size(); ++s) {
        map[s] = then.map[static_cast<std::size_t>(first.map[s])];
    }
    return StateMap{first.source, then.target, std::move(map)};
}

namespace {

void check_state_map(const StateMap& m) {
    if (m.source.input_names() != m.target.input_names()) {
        throw std::invalid_argument("state map: input alphabets differ");
    }
    if (m.map.size() != static_cast<std::size_t>(m.source.num_states())) {
        throw std::invalid_argument("state map: domain does not cover the source states");
    }
    for (int v : m.map) {
        if (v < 0 || v >= m.target.num_states()) {
            throw std::invalid_argument("state map: value outside the target states");
        }
    }
}

}  // namespace

bool is_homomorphism(const StateMap& m) {
    check_state_map(m);
    for (int s = 0; s < m.source.num_states(); ++s) {
        for (int x = 0; x < m.source.num_inputs(); ++x) {
            if (m.map[static_cast<std::size_t>(m.source.step(s, x))] !=
                m.target.step(m.map[static_cast<std::size_t>(s)], x)) {
                return false;
            }
        }
    }
    return true;
}

std::optional<StateMap> find_isomorphism(const Automaton& a, const Automaton& b) {
    if (a.input_names() != b.input_names()) {
        throw std::invalid_argument("find_isomorphism: input alphabets differ");
    }
    const int n = a.num_states();
    if (n != b.num_states()) return std::nullopt;
    const int k = a.num_inputs();

    std::vector<int> map(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);

    // Assign the image of one unassigned state, propagate the forced images
    // of its successors, backtrack on conflicts. Candidates in ascending
    // order keep the first solution canonical.
    auto search = [&](auto&& self) -> bool {
        int s = -1;
        for (int i = 0; i < n; ++i) {
            if (map[static_cast<std::size_t>(i)] == -1) {
                s = i;
                break;
            }
        }
        if (s == -1) return true;
        for (int v = 0; v < n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            auto saved_map = map;
            auto saved_used = used;
            map[static_cast<std::size_t>(s)] = v;
            used[static_cast<std::size_t>(v)] = 1;
            bool consistent = true;
            std::queue<int> pending;
            pending.push(s);
            while (consistent && !pending.empty()) {
                int u = pending.front();
                pending.pop();
                for (int x = 0; x < k; ++x) {
                    int su = a.step(u, x);
                    int sv = b.step(map[static_cast<std::size_t>(u)], x);
                    int cur = map[static_cast<std::size_t>(su)];
                    if (cur == -1) {
                        if (used[static_cast<std::size_t>(sv)]) {
                            consistent = false;
                            break;
                        }
                        map[static_cast<std::size_t>(su)] = sv;
                        used[static_cast<std::size_t>(sv)] = 1;
                        pending.push(su);
                    } else if (cur != sv) {
                        consistent = false;
                        break;
                    }
                }
            }
            if (consistent && self(self)) return true;
            map = std::move(saved_map);
            used = std::move(saved_used);
        }
        return false;
    };

    if (!search(search)) return std::nullopt;
    return StateMap{a, b, std::move(map)};
}

bool Subautomaton::contains(int s) const {
    return std::binary_search(carrier.begin(), carrier.end(), s);
}

int Subautomaton::to_local(int ambient) const {
    auto it = std::lower_bound(carrier.begin(), carrier.end(), ambient);
    if (it == carrier.end() || *it != ambient) return -1;
    return static_cast<int>(it - carrier.begin());
}

Automaton Subautomaton::extract() const {
    std::vector<std::string> states;
    states.reserve(carrier.size());
    for (int s : carrier) states.push_back(parent.state_name(s));
    std::vector<int> table;
    table.reserve(carrier.size() * static_cast<std::size_t>(parent.num_inputs()));
    for (int s : carrier) {
        for (int x = 0; x < parent.num_inputs(); ++x) {
            table.push_back(to_local(parent.step(s, x)));
        }
    }
    return Automaton(std::move(states), parent.input_names(), std::move(table));
}

Subautomaton make_subautomaton(Automaton parent, std::vector<int> carrier) {
    std::sort(carrier.begin(), carrier.end());
    carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
    if (carrier.empty()) throw std::invalid_argument("subautomaton carrier must be nonempty");
    if (carrier.front() < 0 || carrier.back() >= parent.num_states()) {
        throw std::invalid_argument("subautomaton carrier state out of range");
    }
    for (int s : carrier) {
        for (int x = 0; x < parent.num_inputs(); ++x) {
            if (!std::binary_search(carrier.begin(), carrier.end(), parent.step(s, x))) {
                throw std::invalid_argument("subautomaton carrier is not closed under input '" +
                                            parent.input_name(x) + "'");
            }
        }
    }
    return Subautomaton{std::move(parent), std::move(carrier)};
}

std::vector<Subautomaton> subautomata(const Automaton& a) {
    const int n = a.num_states();
    if (n > 20) {
        throw std::invalid_argument("subautomata enumeration is limited to 20 states");
    }
    const int k = a.num_inputs();
    std::vector<std::vector<int>> carriers;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool closed = true;
        for (int s = 0; closed && s < n; ++s) {
            if (!(mask & (1u << s))) continue;
            for (int x = 0; x < k; ++x) {
                if (!(mask & (1u << a.step(s, x)))) {
                    closed = false;
                    break;
                }
            }
        }
        if (!closed) continue;
        std::vector<int> carrier;
        for (int s = 0; s < n; ++s) {
            if (mask & (1u << s)) carrier.push_back(s);
        }
        carriers.push_back(std::move(carrier));
    }
    std::sort(carriers.begin(), carriers.end(), [](const auto& lhs, const auto& rhs) {
        if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
        return lhs < rhs;
    });
    std::vector<Subautomaton> result;
    result.reserve(carriers.size());
    for (auto& carrier : carriers) result.push_back(Subautomaton{a, std::move(carrier)});
    return result;
}

Subautomaton generated(const Automaton& a, int state) {
    if (state < 0 || state >= a.num_states()) {
        throw std::invalid_argument("generated: unknown state");
    }
    std::vector<char> seen(static_cast<std::size_t>(a.num_states()), 0);
    std::queue<int> pending;
    seen[static_cast<std::size_t>(state)] = 1;
    pending.push(state);
    while (!pending.empty()) {
        int s = pending.front();
        pending.pop();
        for (int x = 0; x < a.num_inputs(); ++x) {
            int t = a.step(s, x);
            if (!seen[static_cast<std::size_t>(t)]) {
                seen[static_cast<std::size_t>(t)] = 1;
                pending.push(t);
            }
        }
    }
    std::vector<int> carrier;
    for (int s = 0; s < a.num_states(); ++s) {
        if (seen[static_cast<std::size_t>(s)]) carrier.push_back(s);
    }
    return Subautomaton{a, std::move(carrier)};
}

std::vector<int> traps(const Automaton& a) {
    std::vector<int> result;
    for (int s = 0; s < a.num_states(); ++s) {
        bool fixed = true;
        for (int x = 0; x < a.num_inputs(); ++x) {
            if (a.step(s, x) != s) {
                fixed = false;
                break;
            }
        }
        if (fixed) result.push_back(s);
    }
    return result;
}

std::optional<Subautomaton> kernel(const Automaton& a) {
    // The kernel is the intersection of the generated subautomata R(s):
    // it sits inside every subautomaton, and the intersection is closed.
    std::vector<int> common = generated(a, 0).carrier;
    for (int s = 1; s < a.num_states() && !common.empty(); ++s) {
        common = sorted_intersection(common, generated(a, s).carrier);
    }
    if (common.empty()) return std::nullopt;
    return Subautomaton{a, std::move(common)};
}

bool PartialAutomaton::in_carrier(int s) const {
    return std::binary_search(carrier.begin(), carrier.end(), s);
}

bool PartialAutomaton::defined(int s, int x) const {
    return in_carrier(s) && in_carrier(base.step(s, x));
}

int PartialAutomaton::step(int s, int x) const {
    if (!defined(s, x)) throw std::invalid_argument("partial transition undefined");
    return base.step(s, x);
}

PartialAutomaton partial_derived(const Automaton& a) {
    std::vector<int> carrier;
    const std::vector<int> trap_states = traps(a);
    if (a.num_states() > 1 && trap_states.size() == 1) {
        for (int s = 0; s < a.num_states(); ++s) {
            if (s != trap_states.front()) carrier.push_back(s);
        }
    } else {
        carrier.resize(static_cast<std::size_t>(a.num_states()));
        for (int s = 0; s < a.num_states(); ++s) carrier[static_cast<std::size_t>(s)] = s;
    }
    return PartialAutomaton{a, std::move(carrier)};
}

bool is_partial_homomorphism(const PartialAutomaton& src, const PartialAutomaton& dst,
                             const std::vector<int>& map) {
    if (src.base.input_names() != dst.base.input_names()) {
        throw std::invalid_argument("partial homomorphism: input alphabets differ");
    }
    if (map.size() != static_cast<std::size_t>(src.base.num_states())) {
        throw std::invalid_argument("partial homomorphism: map must be indexed by source states");
    }
    for (int s : src.carrier) {
        int v = map[static_cast<std::size_t>(s)];
        if (v < 0 || v >= dst.base.num_states() || !dst.in_carrier(v)) {
            throw std::invalid_argument("partial homomorphism: map not total on the source carrier");
        }
    }
    for (int s : src.carrier) {
        for (int x = 0; x < src.base.num_inputs(); ++x) {
            if (!src.defined(s, x)) continue;
            int image = dst.base.step(map[static_cast<std::size_t>(s)], x);
            if (!dst.in_carrier(image)) return false;
            if (image != map[static_cast<std::size_t>(src.base.step(s, x))]) return false;
        }
    }
    return true;
}

bool is_sorted_subset(std::span<const int> inner, std::span<const int> outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

std::vector<int> sorted_intersection(std::span<const int> a, std::span<const int> b) {
    std::vector<int> result;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(result));
    return result;
}

}  // namespace retra
