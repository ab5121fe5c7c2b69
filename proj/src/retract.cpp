#include "retra/retract.hpp"

#include <algorithm>
#include <stdexcept>

namespace retra {

namespace {

/// Ker(g) refines Ker(f)? g, f as raw image vectors over the same domain.
bool kernel_refines(const std::vector<int>& g, const std::vector<int>& f, int num_targets) {
    std::vector<int> image(static_cast<std::size_t>(num_targets), -1);
    for (std::size_t s = 0; s < g.size(); ++s) {
        int& slot = image[static_cast<std::size_t>(g[s])];
        if (slot == -1) {
            slot = f[s];
        } else if (slot != f[s]) {
            return false;
        }
    }
    return true;
}

/// Backtracking enumeration of all endomaps fixing the carrier pointwise and
/// commuting with every input action. Forced images are propagated eagerly:
/// assigning map(s) pins map(delta(s,x)) for every x.
void enumerate_retracts(const Automaton& a, const std::vector<int>& carrier,
                        std::vector<std::vector<int>>& out) {
    const int n = a.num_states();
    const int k = a.num_inputs();
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    for (int s : carrier) map[static_cast<std::size_t>(s)] = s;

    auto search = [&](auto&& self) -> void {
        int s = -1;
        for (int i = 0; i < n; ++i) {
            if (map[static_cast<std::size_t>(i)] == -1) {
                s = i;
                break;
            }
        }
        if (s == -1) {
            out.push_back(map);
            return;
        }
        for (int v : carrier) {
            auto saved = map;
            map[static_cast<std::size_t>(s)] = v;
            bool consistent = true;
            std::vector<int> pending{s};
            while (consistent && !pending.empty()) {
                int u = pending.back();
                pending.pop_back();
                for (int x = 0; x < k; ++x) {
                    int succ = a.step(u, x);
                    int forced = a.step(map[static_cast<std::size_t>(u)], x);
                    int& slot = map[static_cast<std::size_t>(succ)];
                    if (slot == -1) {
                        slot = forced;  // inside the carrier: carrier is closed
                        pending.push_back(succ);
                    } else if (slot != forced) {
                        consistent = false;
                        break;
                    }
                }
            }
            if (consistent) self(self);
            map = std::move(saved);
        }
    };
    search(search);
}

}  // namespace

std::vector<StateMap> retract_homomorphisms(const Automaton& a, const Subautomaton& b) {
    if (!(b.parent == a)) {
        throw std::invalid_argument("retract_homomorphisms: subautomaton of a different automaton");
    }
    std::vector<std::vector<int>> raw;
    enumerate_retracts(a, b.carrier, raw);
    std::sort(raw.begin(), raw.end());
    std::vector<StateMap> result;
    result.reserve(raw.size());
    for (auto& map : raw) result.push_back(StateMap{a, a, std::move(map)});
    return result;
}

Retractability is_retractable(const Automaton& a) {
    Retractability result;
    result.subs = subautomata(a);
    result.retractable = true;
    for (const Subautomaton& sub : result.subs) {
        std::vector<std::vector<int>> raw;
        enumerate_retracts(a, sub.carrier, raw);
        if (raw.empty()) {
            result.retractable = false;
            result.failure = sub;
            result.witnesses.clear();
            return result;
        }
        result.witnesses.push_back(StateMap{a, a, *std::min_element(raw.begin(), raw.end())});
    }
    return result;
}

const StateMap* RetractFamily::map_for(const std::vector<int>& carrier) const {
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i].carrier == carrier) return &maps[i];
    }
    return nullptr;
}

std::optional<RetractFamily> boolean_family(const Automaton& a) {
    std::vector<Subautomaton> subs = subautomata(a);
    const int m = static_cast<int>(subs.size());
    // Search large-to-small: the kernel constraint flows from supersets to
    // subsets, so every constraint on subs[i] involves already chosen maps.
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = m - 1 - i;

    std::vector<std::vector<std::vector<int>>> candidates(static_cast<std::size_t>(m));
    std::vector<bool> computed(static_cast<std::size_t>(m), false);
    std::vector<const std::vector<int>*> chosen(static_cast<std::size_t>(m), nullptr);

    auto search = [&](auto&& self, int depth) -> bool {
        if (depth == m) return true;
        const int idx = order[static_cast<std::size_t>(depth)];
        if (!computed[static_cast<std::size_t>(idx)]) {
            enumerate_retracts(a, subs[static_cast<std::size_t>(idx)].carrier,
                               candidates[static_cast<std::size_t>(idx)]);
            std::sort(candidates[static_cast<std::size_t>(idx)].begin(),
                      candidates[static_cast<std::size_t>(idx)].end());
            computed[static_cast<std::size_t>(idx)] = true;
        }
        for (const auto& map : candidates[static_cast<std::size_t>(idx)]) {
            bool fits = true;
            for (int d = 0; fits && d < depth; ++d) {
                const int sup = order[static_cast<std::size_t>(d)];
                if (is_sorted_subset(subs[static_cast<std::size_t>(idx)].carrier,
                                     subs[static_cast<std::size_t>(sup)].carrier)) {
                    fits = kernel_refines(*chosen[static_cast<std::size_t>(sup)], map,
                                          a.num_states());
                }
            }
            if (!fits) continue;
            chosen[static_cast<std::size_t>(idx)] = &map;
            if (self(self, depth + 1)) return true;
            chosen[static_cast<std::size_t>(idx)] = nullptr;
        }
        return false;
    };

    if (!search(search, 0)) return std::nullopt;
    std::vector<StateMap> maps;
    maps.reserve(subs.size());
    for (int i = 0; i < m; ++i) {
        maps.push_back(StateMap{a, a, *chosen[static_cast<std::size_t>(i)]});
    }
    return RetractFamily{a, std::move(subs), std::move(maps)};
}

bool is_boolean_type(const Automaton& a) { return boolean_family(a).has_value(); }

std::optional<std::string> family_violation(const RetractFamily& family) {
    const Automaton& a = family.automaton;
    if (family.subs.size() != family.maps.size()) {
        return "family has " + std::to_string(family.maps.size()) + " maps for " +
               std::to_string(family.subs.size()) + " subautomata";
    }
    std::vector<Subautomaton> expected = subautomata(a);
    if (family.subs.size() != expected.size()) {
        return "family covers " + std::to_string(family.subs.size()) + " of " +
               std::to_string(expected.size()) + " subautomata";
    }
    for (const Subautomaton& sub : expected) {
        if (family.map_for(sub.carrier) == nullptr) {
            return "family misses a subautomaton";
        }
    }
    for (std::size_t i = 0; i < family.subs.size(); ++i) {
        const Subautomaton& sub = family.subs[i];
        const StateMap& map = family.maps[i];
        if (!(map.source == a) || !(map.target == a)) {
            return "map " + std::to_string(i) + " is not an endomap of the automaton";
        }
        if (!is_homomorphism(map)) {
            return "map " + std::to_string(i) + " is not a homomorphism";
        }
        for (int s : sub.carrier) {
            if (map(s) != s) return "map " + std::to_string(i) + " moves a carrier state";
        }
        for (int v : map.map) {
            if (!sub.contains(v)) {
                return "map " + std::to_string(i) + " leaves its carrier";
            }
        }
    }
    for (std::size_t i = 0; i < family.subs.size(); ++i) {
        for (std::size_t j = 0; j < family.subs.size(); ++j) {
            if (i == j) continue;
            if (!is_sorted_subset(family.subs[i].carrier, family.subs[j].carrier)) continue;
            // subs[i] inside subs[j]: Ker map(j) must refine Ker map(i)
            if (!kernel_refines(family.maps[j].map, family.maps[i].map, a.num_states())) {
                return "kernel monotonicity fails between subautomata " + std::to_string(j) +
                       " and " + std::to_string(i);
            }
        }
    }
    return std::nullopt;
}

Theorem1Report check_theorem1(const Automaton& a) {
    Theorem1Report report;
    const CongruenceLattice lattice = all_congruences(a);
    for (Subautomaton& sub : subautomata(a)) {
        Theorem1Entry entry{sub, false, false};
        entry.complement_exists = !complements(lattice, rees(sub)).empty();
        entry.retract_exists = !retract_homomorphisms(a, sub).empty();
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::vector<int> Theorem1Report::disagreements() const {
    std::vector<int> result;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].complement_exists != entries[i].retract_exists) {
            result.push_back(static_cast<int>(i));
        }
    }
    return result;
}

Lemma1Report check_lemma1(const RetractFamily& family) {
    if (auto violation = family_violation(family)) {
        throw std::invalid_argument("check_lemma1: not a Boolean family: " + *violation);
    }
    Lemma1Report report;
    for (std::size_t outer = 0; outer < family.subs.size(); ++outer) {
        for (std::size_t inner = 0; inner < family.subs.size(); ++inner) {
            if (outer == inner) continue;
            if (!is_sorted_subset(family.subs[inner].carrier, family.subs[outer].carrier)) {
                continue;
            }
            const StateMap& outer_map = family.maps[outer];
            const StateMap& inner_map = family.maps[inner];
            for (int s = 0; s < family.automaton.num_states(); ++s) {
                if (!family.subs[inner].contains(outer_map(s))) continue;
                if (outer_map(s) != inner_map(s)) {
                    report.violations.push_back(Lemma1Violation{static_cast<int>(outer),
                                                                static_cast<int>(inner), s});
                }
            }
        }
    }
    return report;
}

}  // namespace retra
