#pragma once

#include <map>

#include "retra/enumerate.hpp"

namespace retra {

/// Verification budget would be exceeded; the message carries an estimate.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifyConfig {
    int max_states = 4;
    int max_inputs = 2;
    bool exhaustive = true;      // all automata with n <= max_states, k <= max_inputs
    std::uint64_t random_count = 0;  // random mode: automata at exactly (max_states, max_inputs)
    std::uint64_t seed = 0;
    bool force = false;  // allow exhaustive bounds beyond (4, 2)
    int jobs = 1;
};

struct CheckTally {
    long long checked = 0;  // automata the check applied to
    long long failed = 0;
};

struct VerificationRun {
    VerifyConfig config;
    long long automata = 0;
    std::map<std::string, CheckTally> checks;
    std::vector<std::string> counterexamples;  // "check <name>\n" + serialized automaton
    bool halted = false;                       // stopped early on a discovery-grade failure

    bool ok() const;
};

std::uint64_t exhaustive_count(int max_states, int max_inputs);

/// Statement-level checks per automaton: Rees-complement/retract equivalence
/// per subautomaton, direct-sum and dilation characterizations of
/// retractable and Boolean-type, family coherence (check_lemma1,
/// direct_sum_family), construction round trip for semi-connected
/// Boolean-type automata with kernel, and the retractable == Boolean-type
/// comparison, which halts the run when it ever fails.
VerificationRun verify(const VerifyConfig& config);

std::string verification_summary(const VerificationRun& run);

}  // namespace retra
