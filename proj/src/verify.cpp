#include "retra/verify.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "retra/io.hpp"

namespace retra {

namespace {

constexpr const char* kCheckNames[] = {
    "theorem1",  "theorem2", "theorem3", "theorem3-family", "theorem4",
    "theorem5",  "lemma1",   "theorem6-7", "retract-eq-boolean",
};

struct LocalRun {
    std::map<std::string, CheckTally> checks;
    std::vector<std::string> counterexamples;
    long long automata = 0;

    void record(const char* check, bool applied, bool passed, const Automaton& a) {
        CheckTally& tally = checks[check];
        if (!applied) return;
        ++tally.checked;
        if (!passed) {
            ++tally.failed;
            if (counterexamples.size() < 32) {
                counterexamples.push_back(std::string("check ") + check + "\n" + save_automaton(a));
            }
        }
    }
};

/// All statement-level checks on one automaton. Returns false when the
/// discovery-grade retractable == Boolean-type comparison failed.
bool check_automaton(const Automaton& a, LocalRun& run) {
    ++run.automata;

    // Theorem 1: Rees complement iff retract, per subautomaton.
    Theorem1Report t1 = check_theorem1(a);
    run.record("theorem1", true, t1.ok(), a);

    const Retractability retract = is_retractable(a);
    const std::optional<RetractFamily> family = boolean_family(a);
    const bool boolean = family.has_value();

    bool discovery_ok = retract.retractable == boolean;
    run.record("retract-eq-boolean", true, discovery_ok, a);

    if (family) {
        run.record("lemma1", true, check_lemma1(*family).ok(), a);
    }

    // Theorems 2 and 3: direct-sum characterization.
    const std::vector<Subautomaton> components = direct_sum_components(a);
    bool kernels_ok = true;
    bool components_retractable = true;
    bool components_boolean = true;
    std::vector<Automaton> extracts;
    std::optional<Automaton> previous_kernel;
    for (const Subautomaton& component : components) {
        extracts.push_back(component.extract());
        const Automaton& extracted = extracts.back();
        if (components_retractable) {
            components_retractable = is_retractable(extracted).retractable;
        }
        if (components_boolean) components_boolean = is_boolean_type(extracted);
        if (kernels_ok) {
            std::optional<Subautomaton> kern = kernel(extracted);
            if (!kern) {
                kernels_ok = false;
            } else {
                Automaton kernel_automaton = kern->extract();
                if (previous_kernel &&
                    !find_isomorphism(*previous_kernel, kernel_automaton)) {
                    kernels_ok = false;
                }
                previous_kernel = std::move(kernel_automaton);
            }
        }
    }
    run.record("theorem2", true,
               retract.retractable == (components_retractable && kernels_ok), a);
    run.record("theorem3", true, boolean == (components_boolean && kernels_ok), a);

    if (boolean) {
        std::vector<RetractFamily> component_families;
        bool assembled = true;
        for (const Automaton& extracted : extracts) {
            std::optional<RetractFamily> part = boolean_family(extracted);
            if (!part) {
                assembled = false;  // contradicts theorem3 above; recorded there
                break;
            }
            component_families.push_back(std::move(*part));
        }
        bool family_ok = false;
        if (assembled) {
            RetractFamily sum_family = direct_sum_family(a, components, component_families);
            family_ok = !family_violation(sum_family).has_value();
        }
        run.record("theorem3-family", true, family_ok, a);
    }

    // Theorems 4 and 5: dilation characterization.
    const Dilation dil = dilation_base(a);
    const Automaton base = dil.base.extract();
    const bool base_semi = is_semi_connected(base);
    run.record("theorem4", true,
               retract.retractable == (base_semi && is_retractable(base).retractable), a);
    run.record("theorem5", true, boolean == (base_semi && is_boolean_type(base)), a);

    // Theorems 6 and 7: construction round trip on qualifying automata.
    if (boolean && kernel(a) && is_semi_connected(a)) {
        bool roundtrip = false;
        RecoveredSpec recovered = recover_spec(a);
        if (recovered.spec) {
            GluedAutomaton rebuilt = build(*recovered.spec);
            roundtrip = find_isomorphism(rebuilt.automaton, a).has_value();
        }
        run.record("theorem6-7", true, roundtrip, a);
    }
    return discovery_ok;
}

void merge(VerificationRun& into, LocalRun& from) {
    into.automata += from.automata;
    for (auto& [name, tally] : from.checks) {
        CheckTally& target = into.checks[name];
        target.checked += tally.checked;
        target.failed += tally.failed;
    }
    into.counterexamples.insert(into.counterexamples.end(),
                                std::make_move_iterator(from.counterexamples.begin()),
                                std::make_move_iterator(from.counterexamples.end()));
}

}  // namespace

bool VerificationRun::ok() const {
    for (const auto& [name, tally] : checks) {
        if (tally.failed > 0) return false;
    }
    return !halted;
}

std::uint64_t exhaustive_count(int max_states, int max_inputs) {
    std::uint64_t total = 0;
    for (int n = 1; n <= max_states; ++n) {
        for (int k = 1; k <= max_inputs; ++k) {
            total += AutomatonEnumerator(n, k).count();
        }
    }
    return total;
}

VerificationRun verify(const VerifyConfig& config) {
    if (config.max_states < 1 || config.max_inputs < 1) {
        throw std::invalid_argument("verify: bounds must be at least 1");
    }
    if (config.exhaustive && !config.force &&
        (config.max_states > 4 || config.max_inputs > 2)) {
        throw BudgetError("exhaustive verification over " +
                          std::to_string(exhaustive_count(config.max_states, config.max_inputs)) +
                          " automata exceeds the default budget (4 states, 2 inputs); "
                          "pass force to run anyway");
    }

    // Flat index space over every (n, k) block, so workers can split ranges.
    struct Block {
        int n;
        int k;
        std::uint64_t first;
        std::uint64_t count;
    };
    std::vector<Block> blocks;
    std::uint64_t total = 0;
    if (config.exhaustive) {
        for (int n = 1; n <= config.max_states; ++n) {
            for (int k = 1; k <= config.max_inputs; ++k) {
                std::uint64_t count = AutomatonEnumerator(n, k).count();
                blocks.push_back(Block{n, k, total, count});
                total += count;
            }
        }
    } else {
        blocks.push_back(Block{config.max_states, config.max_inputs, 0, config.random_count});
        total = config.random_count;
    }

    auto automaton_at = [&](std::uint64_t index) {
        for (const Block& block : blocks) {
            if (index < block.first + block.count) {
                return config.exhaustive
                           ? AutomatonEnumerator(block.n, block.k).at(index - block.first)
                           : random_automaton(block.n, block.k, config.seed + (index - block.first));
            }
        }
        throw std::logic_error("verify: index out of range");
    };

    const int jobs = std::max(1, config.jobs);
    std::atomic<bool> halt{false};
    std::vector<LocalRun> locals(static_cast<std::size_t>(jobs));

    auto work = [&](int job) {
        LocalRun& local = locals[static_cast<std::size_t>(job)];
        const std::uint64_t begin = total * static_cast<std::uint64_t>(job) /
                                    static_cast<std::uint64_t>(jobs);
        const std::uint64_t end = total * static_cast<std::uint64_t>(job + 1) /
                                  static_cast<std::uint64_t>(jobs);
        for (std::uint64_t index = begin; index < end && !halt.load(); ++index) {
            if (!check_automaton(automaton_at(index), local)) halt.store(true);
        }
    };

    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int job = 0; job < jobs; ++job) threads.emplace_back(work, job);
        for (std::thread& thread : threads) thread.join();
    }

    VerificationRun run;
    run.config = config;
    run.halted = halt.load();
    for (const char* name : kCheckNames) run.checks[name];  // stable summary order
    for (LocalRun& local : locals) merge(run, local);
    std::sort(run.counterexamples.begin(), run.counterexamples.end());
    run.counterexamples.erase(
        std::unique(run.counterexamples.begin(), run.counterexamples.end()),
        run.counterexamples.end());
    return run;
}

std::string verification_summary(const VerificationRun& run) {
    std::ostringstream out;
    out << "automata checked: " << run.automata << '\n';
    for (const auto& [name, tally] : run.checks) {
        out << "  " << name << ": checked=" << tally.checked << " failed=" << tally.failed
            << (tally.failed == 0 ? "" : "  <-- FAIL") << '\n';
    }
    if (run.halted) out << "halted early: retract-eq-boolean counterexample found\n";
    for (const std::string& counterexample : run.counterexamples) {
        out << "counterexample:\n" << counterexample;
    }
    return out.str();
}

}  // namespace retra
