#include "retra/structure.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace retra {

namespace {

/// States reachable in at least one step.
std::vector<char> reach_plus(const Automaton& a, int from) {
    std::vector<char> seen(static_cast<std::size_t>(a.num_states()), 0);
    std::vector<int> pending;
    for (int x = 0; x < a.num_inputs(); ++x) {
        int t = a.step(from, x);
        if (!seen[static_cast<std::size_t>(t)]) {
            seen[static_cast<std::size_t>(t)] = 1;
            pending.push_back(t);
        }
    }
    while (!pending.empty()) {
        int s = pending.back();
        pending.pop_back();
        for (int x = 0; x < a.num_inputs(); ++x) {
            int t = a.step(s, x);
            if (!seen[static_cast<std::size_t>(t)]) {
                seen[static_cast<std::size_t>(t)] = 1;
                pending.push_back(t);
            }
        }
    }
    return seen;
}

bool reaches_everything(const std::vector<char>& seen) {
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

std::vector<Subautomaton> direct_sum_components(const Automaton& a) {
    const int n = a.num_states();
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int s) {
        while (parent[static_cast<std::size_t>(s)] != s) s = parent[static_cast<std::size_t>(s)];
        return s;
    };
    for (int s = 0; s < n; ++s) {
        for (int x = 0; x < a.num_inputs(); ++x) {
            int u = find(s);
            int v = find(a.step(s, x));
            if (u != v) parent[static_cast<std::size_t>(std::max(u, v))] = std::min(u, v);
        }
    }
    std::vector<std::vector<int>> carriers(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) carriers[static_cast<std::size_t>(find(s))].push_back(s);
    std::vector<Subautomaton> result;
    for (auto& carrier : carriers) {
        if (!carrier.empty()) result.push_back(Subautomaton{a, std::move(carrier)});
    }
    return result;
}

const char* to_string(Connectivity c) {
    switch (c) {
        case Connectivity::strongly_connected: return "strongly-connected";
        case Connectivity::strongly_trap_connected: return "strongly-trap-connected";
        case Connectivity::neither: return "neither";
    }
    return "neither";
}

bool is_strongly_connected(const Automaton& a) {
    for (int s = 0; s < a.num_states(); ++s) {
        if (!reaches_everything(reach_plus(a, s))) return false;
    }
    return true;
}

bool is_strongly_trap_connected(const Automaton& a) {
    const std::vector<int> trap_states = traps(a);
    if (trap_states.size() != 1) return false;
    for (int s = 0; s < a.num_states(); ++s) {
        if (s == trap_states.front()) continue;
        if (!reaches_everything(reach_plus(a, s))) return false;
    }
    return true;
}

PrincipalFactor principal_factor(const Automaton& a, int state) {
    Subautomaton gen = generated(a, state);
    std::vector<int> r_class;
    for (int s : gen.carrier) {
        if (generated(a, s).carrier == gen.carrier) r_class.push_back(s);
    }
    std::vector<int> rest;
    std::set_difference(gen.carrier.begin(), gen.carrier.end(), r_class.begin(), r_class.end(),
                        std::back_inserter(rest));

    std::optional<Subautomaton> remainder;
    Automaton factor = gen.extract();
    if (!rest.empty()) {
        remainder = Subautomaton{a, rest};
        std::vector<int> rest_local;
        rest_local.reserve(rest.size());
        for (int s : rest) rest_local.push_back(gen.to_local(s));
        factor = quotient(factor, rees(Subautomaton{factor, std::move(rest_local)})).automaton;
    }
    Connectivity cls = Connectivity::neither;
    if (is_strongly_connected(factor)) {
        cls = Connectivity::strongly_connected;
    } else if (is_strongly_trap_connected(factor)) {
        cls = Connectivity::strongly_trap_connected;
    }
    return PrincipalFactor{state, std::move(gen), std::move(r_class), std::move(remainder),
                           std::move(factor), cls};
}

bool is_semi_connected(const Automaton& a) {
    std::vector<std::vector<int>> seen_carriers;  // one factor per generator class
    for (int s = 0; s < a.num_states(); ++s) {
        std::vector<int> carrier = generated(a, s).carrier;
        if (std::find(seen_carriers.begin(), seen_carriers.end(), carrier) != seen_carriers.end()) {
            continue;
        }
        if (principal_factor(a, s).classification == Connectivity::neither) return false;
        seen_carriers.push_back(std::move(carrier));
    }
    return true;
}

Dilation dilation_base(const Automaton& a) {
    const int n = a.num_states();
    const int k = a.num_inputs();
    std::vector<char> in_base(static_cast<std::size_t>(n), 0);
    // One-step image; closed, and every transition lands inside it.
    for (int s = 0; s < n; ++s) {
        for (int x = 0; x < k; ++x) in_base[static_cast<std::size_t>(a.step(s, x))] = 1;
    }
    auto rows_equal = [&](int s, int t) {
        for (int x = 0; x < k; ++x) {
            if (a.step(s, x) != a.step(t, x)) return false;
        }
        return true;
    };
    // A state outside the image needs a transition-row twin in the base;
    // adding the first twinless state per row class keeps the base minimal.
    for (int s = 0; s < n; ++s) {
        if (in_base[static_cast<std::size_t>(s)]) continue;
        bool has_twin = false;
        for (int t = 0; t < n && !has_twin; ++t) {
            has_twin = in_base[static_cast<std::size_t>(t)] && rows_equal(s, t);
        }
        if (!has_twin) in_base[static_cast<std::size_t>(s)] = 1;
    }
    std::vector<int> carrier;
    for (int s = 0; s < n; ++s) {
        if (in_base[static_cast<std::size_t>(s)]) carrier.push_back(s);
    }
    std::vector<int> map(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        if (in_base[static_cast<std::size_t>(s)]) {
            map[static_cast<std::size_t>(s)] = s;
            continue;
        }
        for (int t = 0; t < n; ++t) {
            if (in_base[static_cast<std::size_t>(t)] && rows_equal(s, t)) {
                map[static_cast<std::size_t>(s)] = t;
                break;
            }
        }
    }
    const bool proper = static_cast<int>(carrier.size()) < n;
    return Dilation{Subautomaton{a, std::move(carrier)}, StateMap{a, a, std::move(map)}, proper};
}

namespace {

std::vector<int> invert_permutation(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    return inv;
}

}  // namespace

RetractFamily direct_sum_family(const Automaton& sum,
                                const std::vector<Subautomaton>& components,
                                const std::vector<RetractFamily>& component_families) {
    const int m = static_cast<int>(components.size());
    if (component_families.size() != components.size() || m == 0) {
        throw std::invalid_argument("direct_sum_family: one family per component required");
    }
    std::vector<char> covered(static_cast<std::size_t>(sum.num_states()), 0);
    for (const Subautomaton& comp : components) {
        if (!(comp.parent == sum)) {
            throw std::invalid_argument("direct_sum_family: component of a different automaton");
        }
        for (int s : comp.carrier) {
            if (covered[static_cast<std::size_t>(s)]) {
                throw std::invalid_argument("direct_sum_family: components overlap");
            }
            covered[static_cast<std::size_t>(s)] = 1;
        }
    }
    if (!std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; })) {
        throw std::invalid_argument("direct_sum_family: components do not cover the automaton");
    }

    std::vector<Automaton> extracts;
    std::vector<Subautomaton> kernels;  // parent = extract
    extracts.reserve(components.size());
    for (int i = 0; i < m; ++i) {
        extracts.push_back(components[static_cast<std::size_t>(i)].extract());
        if (!(component_families[static_cast<std::size_t>(i)].automaton == extracts.back())) {
            throw std::invalid_argument(
                "direct_sum_family: family does not match its component");
        }
        std::optional<Subautomaton> kern = kernel(extracts.back());
        if (!kern) {
            throw std::invalid_argument("direct_sum_family: a component has no kernel");
        }
        kernels.push_back(std::move(*kern));
    }

    // Adjacent kernel isomorphisms, composed into Phi(i, j) as kernel-local
    // permutation chains.
    std::vector<std::vector<int>> up(static_cast<std::size_t>(m == 0 ? 0 : m - 1));
    for (int i = 0; i + 1 < m; ++i) {
        std::optional<StateMap> iso = find_isomorphism(kernels[static_cast<std::size_t>(i)].extract(),
                                                       kernels[static_cast<std::size_t>(i + 1)].extract());
        if (!iso) {
            throw std::invalid_argument("direct_sum_family: component kernels are not isomorphic");
        }
        up[static_cast<std::size_t>(i)] = std::move(iso->map);
    }
    auto phi = [&](int i, int j, int kernel_local) {
        while (i < j) {
            kernel_local = up[static_cast<std::size_t>(i)][static_cast<std::size_t>(kernel_local)];
            ++i;
        }
        while (i > j) {
            kernel_local = invert_permutation(up[static_cast<std::size_t>(i - 1)])
                [static_cast<std::size_t>(kernel_local)];
            --i;
        }
        return kernel_local;
    };

    std::vector<Subautomaton> subs = subautomata(sum);
    std::vector<StateMap> maps;
    maps.reserve(subs.size());
    for (const Subautomaton& sub : subs) {
        std::vector<char> meets(static_cast<std::size_t>(m), 0);
        int min_meet = -1;
        for (int i = 0; i < m; ++i) {
            if (!sorted_intersection(sub.carrier, components[static_cast<std::size_t>(i)].carrier)
                     .empty()) {
                meets[static_cast<std::size_t>(i)] = 1;
                if (min_meet == -1) min_meet = i;
            }
        }
        std::vector<int> lambda(static_cast<std::size_t>(sum.num_states()), -1);
        for (int i = 0; i < m; ++i) {
            const Subautomaton& comp = components[static_cast<std::size_t>(i)];
            const RetractFamily& fam = component_families[static_cast<std::size_t>(i)];
            if (meets[static_cast<std::size_t>(i)]) {
                // Retract onto the intersection within this component.
                std::vector<int> local =
                    sorted_intersection(sub.carrier, comp.carrier);
                for (int& s : local) s = comp.to_local(s);
                const StateMap* part = fam.map_for(local);
                if (part == nullptr) {
                    throw std::invalid_argument(
                        "direct_sum_family: component family misses a subautomaton");
                }
                for (int s : comp.carrier) {
                    lambda[static_cast<std::size_t>(s)] =
                        comp.to_ambient((*part)(comp.to_local(s)));
                }
            } else {
                // Retract onto the kernel, then across the isomorphism chain
                // into the smallest component the subautomaton meets.
                const StateMap* onto_kernel = fam.map_for(kernels[static_cast<std::size_t>(i)].carrier);
                if (onto_kernel == nullptr) {
                    throw std::invalid_argument(
                        "direct_sum_family: component family misses its kernel");
                }
                const Subautomaton& target_comp = components[static_cast<std::size_t>(min_meet)];
                const Subautomaton& target_kernel = kernels[static_cast<std::size_t>(min_meet)];
                for (int s : comp.carrier) {
                    int kernel_local = kernels[static_cast<std::size_t>(i)].to_local(
                        (*onto_kernel)(comp.to_local(s)));
                    int image_local = phi(i, min_meet, kernel_local);
                    lambda[static_cast<std::size_t>(s)] =
                        target_comp.to_ambient(target_kernel.to_ambient(image_local));
                }
            }
        }
        maps.push_back(StateMap{sum, sum, std::move(lambda)});
    }
    return RetractFamily{sum, std::move(subs), std::move(maps)};
}

LiftedFamily lift_family_through_dilation(const Dilation& dil, const RetractFamily& base_family) {
    const Automaton& a = dil.base.parent;
    Automaton base = dil.base.extract();
    if (!(base_family.automaton == base)) {
        throw std::invalid_argument("lift_family_through_dilation: family is not on the base");
    }
    LiftedFamily result{a, {}, {}, {}};
    for (const Subautomaton& sub : subautomata(a)) {
        if (!is_sorted_subset(sub.carrier, dil.base.carrier)) {
            result.unsupported.push_back(sub);
            continue;
        }
        std::vector<int> local = sub.carrier;
        for (int& s : local) s = dil.base.to_local(s);
        const StateMap* base_map = base_family.map_for(local);
        if (base_map == nullptr) {
            throw std::invalid_argument("lift_family_through_dilation: family misses a subautomaton");
        }
        std::vector<int> lifted(static_cast<std::size_t>(a.num_states()));
        for (int s = 0; s < a.num_states(); ++s) {
            lifted[static_cast<std::size_t>(s)] =
                dil.base.to_ambient((*base_map)(dil.base.to_local(dil.map(s))));
        }
        result.covered.push_back(sub);
        result.maps.push_back(StateMap{a, a, std::move(lifted)});
    }
    return result;
}

StateMap lifted_retract(const Dilation& dil, const RetractFamily& base_family,
                        const Subautomaton& target) {
    if (!is_sorted_subset(target.carrier, dil.base.carrier)) {
        throw std::domain_error(
            "lifted_retract: subautomaton is not contained in the dilation base");
    }
    LiftedFamily lifted = lift_family_through_dilation(dil, base_family);
    for (std::size_t i = 0; i < lifted.covered.size(); ++i) {
        if (lifted.covered[i].carrier == target.carrier) return lifted.maps[i];
    }
    throw std::invalid_argument("lifted_retract: not a subautomaton of the dilation");
}

StructureReport analyze(const Automaton& a) {
    std::vector<Subautomaton> components = direct_sum_components(a);
    std::vector<std::optional<Subautomaton>> component_kernels;
    std::vector<Subautomaton> kernel_subs;  // parent = component extract
    std::optional<KernelChainIssue> issue;
    for (std::size_t i = 0; i < components.size(); ++i) {
        std::optional<Subautomaton> kern = kernel(components[i].extract());
        if (kern) {
            std::vector<int> ambient;
            ambient.reserve(kern->carrier.size());
            for (int local : kern->carrier) ambient.push_back(components[i].to_ambient(local));
            component_kernels.push_back(Subautomaton{a, std::move(ambient)});
            kernel_subs.push_back(std::move(*kern));
        } else {
            component_kernels.push_back(std::nullopt);
            if (!issue) {
                issue = KernelChainIssue{static_cast<int>(i), static_cast<int>(i),
                                         "component has no kernel"};
            }
        }
    }
    std::vector<StateMap> isos;
    if (!issue) {
        for (std::size_t i = 0; i + 1 < kernel_subs.size(); ++i) {
            std::optional<StateMap> iso =
                find_isomorphism(kernel_subs[i].extract(), kernel_subs[i + 1].extract());
            if (!iso) {
                issue = KernelChainIssue{static_cast<int>(i), static_cast<int>(i + 1),
                                         "kernels are not isomorphic"};
                isos.clear();
                break;
            }
            isos.push_back(std::move(*iso));
        }
    }
    std::vector<PrincipalFactor> factors;
    factors.reserve(static_cast<std::size_t>(a.num_states()));
    bool semi = true;
    for (int s = 0; s < a.num_states(); ++s) {
        factors.push_back(principal_factor(a, s));
        semi = semi && factors.back().classification != Connectivity::neither;
    }
    return StructureReport{a,
                           std::move(components),
                           std::move(component_kernels),
                           std::move(isos),
                           std::move(issue),
                           dilation_base(a),
                           std::move(factors),
                           semi};
}

}  // namespace retra
