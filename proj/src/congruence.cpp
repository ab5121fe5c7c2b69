#include "retra/congruence.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace retra {

namespace {

/// Relabels class ids in order of first appearance; returns the class count.
int normalize_classes(std::vector<int>& class_of) {
    int max_id = 0;
    for (int c : class_of) max_id = std::max(max_id, c);
    std::vector<int> relabel(static_cast<std::size_t>(max_id) + 1, -1);
    int next = 0;
    for (int& c : class_of) {
        if (relabel[static_cast<std::size_t>(c)] == -1) {
            relabel[static_cast<std::size_t>(c)] = next++;
        }
        c = relabel[static_cast<std::size_t>(c)];
    }
    return next;
}

bool classes_compatible(const Automaton& a, const std::vector<int>& class_of) {
    // Representative per class: states of one class must act into one class.
    int max_id = 0;
    for (int c : class_of) max_id = std::max(max_id, c);
    std::vector<int> repr(static_cast<std::size_t>(max_id) + 1, -1);
    for (int s = 0; s < a.num_states(); ++s) {
        int c = class_of[static_cast<std::size_t>(s)];
        if (repr[static_cast<std::size_t>(c)] == -1) {
            repr[static_cast<std::size_t>(c)] = s;
            continue;
        }
        for (int x = 0; x < a.num_inputs(); ++x) {
            if (class_of[static_cast<std::size_t>(a.step(s, x))] !=
                class_of[static_cast<std::size_t>(a.step(repr[static_cast<std::size_t>(c)], x))]) {
                return false;
            }
        }
    }
    return true;
}

std::vector<int> classes_of_partition(const Automaton& a, const Partition& p) {
    std::vector<int> class_of(static_cast<std::size_t>(a.num_states()), -1);
    int block_id = 0;
    for (const auto& block : p) {
        if (block.empty()) throw std::invalid_argument("partition block must be nonempty");
        for (int s : block) {
            if (s < 0 || s >= a.num_states()) {
                throw std::invalid_argument("partition member out of range");
            }
            if (class_of[static_cast<std::size_t>(s)] != -1) {
                throw std::invalid_argument("partition blocks overlap at state '" +
                                            a.state_name(s) + "'");
            }
            class_of[static_cast<std::size_t>(s)] = block_id;
        }
        ++block_id;
    }
    for (int s = 0; s < a.num_states(); ++s) {
        if (class_of[static_cast<std::size_t>(s)] == -1) {
            throw std::invalid_argument("partition misses state '" + a.state_name(s) + "'");
        }
    }
    return class_of;
}

}  // namespace

Congruence::Congruence(Unchecked, Automaton automaton, std::vector<int> normalized,
                       int num_classes)
    : automaton_(std::move(automaton)), class_of_(std::move(normalized)), num_classes_(num_classes) {}

Congruence unchecked_congruence(Automaton automaton, std::vector<int> class_of) {
    int n = normalize_classes(class_of);
    return Congruence(Congruence::Unchecked{}, std::move(automaton), std::move(class_of), n);
}

Congruence::Congruence(Automaton automaton, const Partition& blocks)
    : automaton_(std::move(automaton)) {
    std::vector<int> class_of = classes_of_partition(automaton_, blocks);
    if (!classes_compatible(automaton_, class_of)) {
        throw std::invalid_argument("partition is not a congruence");
    }
    num_classes_ = normalize_classes(class_of);
    class_of_ = std::move(class_of);
}

Congruence Congruence::from_classes(Automaton automaton, const std::vector<int>& class_of) {
    if (class_of.size() != static_cast<std::size_t>(automaton.num_states())) {
        throw std::invalid_argument("class vector must cover the state set");
    }
    for (int c : class_of) {
        if (c < 0) throw std::invalid_argument("class ids must be nonnegative");
    }
    if (!classes_compatible(automaton, class_of)) {
        throw std::invalid_argument("partition is not a congruence");
    }
    std::vector<int> normalized = class_of;
    int n = normalize_classes(normalized);
    return Congruence(Unchecked{}, std::move(automaton), std::move(normalized), n);
}

Congruence Congruence::identity(Automaton automaton) {
    std::vector<int> class_of(static_cast<std::size_t>(automaton.num_states()));
    std::iota(class_of.begin(), class_of.end(), 0);
    int n = automaton.num_states();
    return Congruence(Unchecked{}, std::move(automaton), std::move(class_of), n);
}

Congruence Congruence::full(Automaton automaton) {
    std::vector<int> class_of(static_cast<std::size_t>(automaton.num_states()), 0);
    return Congruence(Unchecked{}, std::move(automaton), std::move(class_of), 1);
}

Partition Congruence::blocks() const {
    Partition result(static_cast<std::size_t>(num_classes_));
    for (int s = 0; s < automaton_.num_states(); ++s) {
        result[static_cast<std::size_t>(class_of_[static_cast<std::size_t>(s)])].push_back(s);
    }
    return result;
}

bool is_partition(const Automaton& a, const Partition& p) {
    try {
        classes_of_partition(a, p);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

bool is_congruence(const Automaton& a, const Partition& p) {
    return classes_compatible(a, classes_of_partition(a, p));
}

bool refines(const Congruence& finer, const Congruence& coarser) {
    if (!(finer.automaton() == coarser.automaton())) {
        throw std::invalid_argument("refines: congruences of different automata");
    }
    // Every finer class must fit within one coarser class.
    std::vector<int> image(static_cast<std::size_t>(finer.num_classes()), -1);
    for (int s = 0; s < finer.automaton().num_states(); ++s) {
        int f = finer.class_of(s);
        int c = coarser.class_of(s);
        if (image[static_cast<std::size_t>(f)] == -1) {
            image[static_cast<std::size_t>(f)] = c;
        } else if (image[static_cast<std::size_t>(f)] != c) {
            return false;
        }
    }
    return true;
}

Congruence meet(const Congruence& a, const Congruence& b) {
    if (!(a.automaton() == b.automaton())) {
        throw std::invalid_argument("meet: congruences of different automata");
    }
    const int n = a.automaton().num_states();
    std::vector<int> class_of(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        class_of[static_cast<std::size_t>(s)] = a.class_of(s) * b.num_classes() + b.class_of(s);
    }
    return unchecked_congruence(a.automaton(), std::move(class_of));
}

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int s) {
        while (parent[static_cast<std::size_t>(s)] != s) {
            parent[static_cast<std::size_t>(s)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(s)])];
            s = parent[static_cast<std::size_t>(s)];
        }
        return s;
    }
    bool merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
};

}  // namespace

Congruence join(const Congruence& a, const Congruence& b) {
    if (!(a.automaton() == b.automaton())) {
        throw std::invalid_argument("join: congruences of different automata");
    }
    const int n = a.automaton().num_states();
    UnionFind uf(n);
    std::vector<int> first_a(static_cast<std::size_t>(a.num_classes()), -1);
    std::vector<int> first_b(static_cast<std::size_t>(b.num_classes()), -1);
    for (int s = 0; s < n; ++s) {
        int& fa = first_a[static_cast<std::size_t>(a.class_of(s))];
        if (fa == -1) fa = s; else uf.merge(fa, s);
        int& fb = first_b[static_cast<std::size_t>(b.class_of(s))];
        if (fb == -1) fb = s; else uf.merge(fb, s);
    }
    std::vector<int> class_of(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) class_of[static_cast<std::size_t>(s)] = uf.find(s);
    return unchecked_congruence(a.automaton(), std::move(class_of));
}

Congruence rees(const Subautomaton& b) {
    const int n = b.parent.num_states();
    std::vector<int> class_of(static_cast<std::size_t>(n));
    std::iota(class_of.begin(), class_of.end(), 0);
    for (int s : b.carrier) class_of[static_cast<std::size_t>(s)] = b.carrier.front();
    return unchecked_congruence(b.parent, std::move(class_of));
}

Congruence principal_congruence(const Automaton& aut, int a, int b) {
    if (a < 0 || a >= aut.num_states() || b < 0 || b >= aut.num_states()) {
        throw std::invalid_argument("principal_congruence: unknown state");
    }
    UnionFind uf(aut.num_states());
    std::vector<std::pair<int, int>> pending{{a, b}};
    while (!pending.empty()) {
        auto [u, v] = pending.back();
        pending.pop_back();
        if (!uf.merge(u, v)) continue;
        for (int x = 0; x < aut.num_inputs(); ++x) {
            pending.emplace_back(aut.step(u, x), aut.step(v, x));
        }
    }
    std::vector<int> class_of(static_cast<std::size_t>(aut.num_states()));
    for (int s = 0; s < aut.num_states(); ++s) class_of[static_cast<std::size_t>(s)] = uf.find(s);
    return unchecked_congruence(aut, std::move(class_of));
}

Congruence kernel_of_map(const StateMap& m) {
    if (!is_homomorphism(m)) {
        throw std::invalid_argument("kernel_of_map: the map is not a homomorphism");
    }
    return unchecked_congruence(m.source, m.map);
}

CongruenceLattice::CongruenceLattice(Automaton automaton, std::vector<Congruence> elements)
    : automaton_(std::move(automaton)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end(),
              [](const Congruence& a, const Congruence& b) { return a.classes() < b.classes(); });
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    const int m = size();
    leq_.assign(static_cast<std::size_t>(m) * m, 0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            leq_[static_cast<std::size_t>(i) * m + j] = refines(elements_[static_cast<std::size_t>(i)],
                                                                elements_[static_cast<std::size_t>(j)]);
        }
        if (elements_[static_cast<std::size_t>(i)].num_classes() == automaton_.num_states()) {
            identity_index_ = i;
        }
        if (elements_[static_cast<std::size_t>(i)].num_classes() == 1) full_index_ = i;
    }
    if (identity_index_ == -1 || full_index_ == -1) {
        throw std::invalid_argument("congruence lattice must contain identity and full");
    }
}

int CongruenceLattice::index_of(const Congruence& c) const {
    for (int i = 0; i < size(); ++i) {
        if (elements_[static_cast<std::size_t>(i)] == c) return i;
    }
    return -1;
}

bool CongruenceLattice::leq(int i, int j) const {
    return leq_[static_cast<std::size_t>(i) * size() + j] != 0;
}

std::vector<std::pair<int, int>> CongruenceLattice::covers() const {
    std::vector<std::pair<int, int>> result;
    const int m = size();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j || !leq(i, j)) continue;
            bool covering = true;
            for (int k = 0; covering && k < m; ++k) {
                if (k != i && k != j && leq(i, k) && leq(k, j)) covering = false;
            }
            if (covering) result.emplace_back(i, j);
        }
    }
    return result;
}

std::vector<Congruence> congruences_by_filter(const Automaton& a) {
    const int n = a.num_states();
    std::vector<Congruence> result;
    std::vector<int> class_of(static_cast<std::size_t>(n), 0);
    // Restricted-growth enumeration of all set partitions.
    auto emit = [&](auto&& self, int pos, int max_used) -> void {
        if (pos == n) {
            if (classes_compatible(a, class_of)) {
                result.push_back(unchecked_congruence(a, class_of));
            }
            return;
        }
        for (int c = 0; c <= max_used + 1 && c < n; ++c) {
            class_of[static_cast<std::size_t>(pos)] = c;
            self(self, pos + 1, std::max(max_used, c));
        }
    };
    emit(emit, 1, 0);  // state 0 is always in class 0
    return result;
}

std::vector<Congruence> congruences_by_principal_joins(const Automaton& a) {
    const int n = a.num_states();
    std::set<std::vector<int>> seen;
    std::vector<Congruence> result;
    std::vector<Congruence> pending;

    auto add = [&](Congruence c) {
        if (seen.insert(c.classes()).second) {
            result.push_back(c);
            pending.push_back(std::move(c));
        }
    };

    add(Congruence::identity(a));
    std::vector<Congruence> principals;
    for (int s = 0; s < n; ++s) {
        for (int t = s + 1; t < n; ++t) {
            Congruence p = principal_congruence(a, s, t);
            if (seen.insert(p.classes()).second) {
                result.push_back(p);
                pending.push_back(p);
            }
            principals.push_back(std::move(p));
        }
    }
    // Close under join; joining with principals reaches every finite join.
    while (!pending.empty()) {
        Congruence next = std::move(pending.back());
        pending.pop_back();
        for (const Congruence& p : principals) {
            Congruence joined = join(next, p);
            if (seen.insert(joined.classes()).second) {
                result.push_back(joined);
                pending.push_back(std::move(joined));
            }
        }
    }
    return result;
}

CongruenceLattice all_congruences(const Automaton& a) {
    std::vector<Congruence> elements = a.num_states() <= 6 ? congruences_by_filter(a)
                                                           : congruences_by_principal_joins(a);
    return CongruenceLattice(a, std::move(elements));
}

std::vector<Congruence> complements(const CongruenceLattice& lattice, const Congruence& alpha) {
    if (lattice.index_of(alpha) == -1) {
        throw std::invalid_argument("complements: congruence is not in the lattice");
    }
    const Congruence id = Congruence::identity(lattice.automaton());
    const Congruence top = Congruence::full(lattice.automaton());
    std::vector<Congruence> result;
    for (const Congruence& beta : lattice.elements()) {
        if (meet(alpha, beta) == id && join(alpha, beta) == top) result.push_back(beta);
    }
    return result;
}

LatticeClass lattice_class(const CongruenceLattice& lattice) {
    const int m = lattice.size();
    std::vector<int> meet_table(static_cast<std::size_t>(m) * m);
    std::vector<int> join_table(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            int mi = lattice.index_of(meet(lattice.elements()[static_cast<std::size_t>(i)],
                                           lattice.elements()[static_cast<std::size_t>(j)]));
            int ji = lattice.index_of(join(lattice.elements()[static_cast<std::size_t>(i)],
                                           lattice.elements()[static_cast<std::size_t>(j)]));
            meet_table[static_cast<std::size_t>(i) * m + j] = mi;
            meet_table[static_cast<std::size_t>(j) * m + i] = mi;
            join_table[static_cast<std::size_t>(i) * m + j] = ji;
            join_table[static_cast<std::size_t>(j) * m + i] = ji;
        }
    }
    auto meet_of = [&](int i, int j) { return meet_table[static_cast<std::size_t>(i) * m + j]; };
    auto join_of = [&](int i, int j) { return join_table[static_cast<std::size_t>(i) * m + j]; };

    LatticeClass result;
    result.complemented = true;
    for (int i = 0; i < m && result.complemented; ++i) {
        bool found = false;
        for (int j = 0; j < m && !found; ++j) {
            found = meet_of(i, j) == lattice.identity_index() && join_of(i, j) == lattice.full_index();
        }
        result.complemented = found;
    }
    result.distributive = true;
    for (int i = 0; i < m && result.distributive; ++i) {
        for (int j = 0; j < m && result.distributive; ++j) {
            for (int k = 0; k < m; ++k) {
                if (meet_of(i, join_of(j, k)) != join_of(meet_of(i, j), meet_of(i, k))) {
                    result.distributive = false;
                    break;
                }
            }
        }
    }
    result.boolean_algebra = result.complemented && result.distributive;
    return result;
}

Quotient quotient(const Automaton& a, const Congruence& c) {
    if (!(c.automaton() == a)) {
        throw std::invalid_argument("quotient: congruence belongs to a different automaton");
    }
    const int m = c.num_classes();
    std::vector<int> repr(static_cast<std::size_t>(m), -1);
    for (int s = 0; s < a.num_states(); ++s) {
        int cls = c.class_of(s);
        if (repr[static_cast<std::size_t>(cls)] == -1) repr[static_cast<std::size_t>(cls)] = s;
    }
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(m));
    for (int cls = 0; cls < m; ++cls) {
        names.push_back(a.state_name(repr[static_cast<std::size_t>(cls)]));
    }
    std::vector<int> table;
    table.reserve(static_cast<std::size_t>(m) * a.num_inputs());
    for (int cls = 0; cls < m; ++cls) {
        for (int x = 0; x < a.num_inputs(); ++x) {
            table.push_back(c.class_of(a.step(repr[static_cast<std::size_t>(cls)], x)));
        }
    }
    Automaton factor(std::move(names), a.input_names(), std::move(table));
    StateMap projection{a, factor, c.classes()};
    return Quotient{std::move(factor), std::move(projection)};
}

}  // namespace retra
