#include "retra/cli.hpp"

#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "retra/io.hpp"
#include "retra/verify.hpp"

namespace retra {

namespace {

int fail(std::ostream& err, const char* code, const std::string& message) {
    err << "error[" << code << "]: " << message << '\n';
    return 2;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw ParseError(path, 0, "cannot open file for writing");
    file << text;
}

int run_check(const Automaton& a, const std::string& property, std::ostream& out) {
    if (property == "retractable") {
        Retractability result = is_retractable(a);
        if (result.retractable) {
            out << "retractable: yes\n";
            return 0;
        }
        out << "retractable: no\nwitness: " << format_state_set(a, result.failure->carrier)
            << " has no retract homomorphism\n";
        return 1;
    }
    if (property == "boolean") {
        if (is_boolean_type(a)) {
            out << "boolean-type: yes\n";
            return 0;
        }
        out << "boolean-type: no (exhaustive family search found no witness)\n";
        return 1;
    }
    if (property == "semi-connected") {
        if (is_semi_connected(a)) {
            out << "semi-connected: yes\n";
            return 0;
        }
        for (int s = 0; s < a.num_states(); ++s) {
            PrincipalFactor factor = principal_factor(a, s);
            if (factor.classification == Connectivity::neither) {
                out << "semi-connected: no\nwitness: principal factor at '" << a.state_name(s)
                    << "' is neither strongly connected nor strongly trap connected\n";
                break;
            }
        }
        return 1;
    }
    // property == "kernel"
    if (std::optional<Subautomaton> kern = kernel(a)) {
        out << "kernel: " << format_state_set(a, kern->carrier) << '\n';
        return 0;
    }
    out << "kernel: none\n";
    return 1;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"structure toolkit for state-finite automata without outputs"};
    app.require_subcommand(1);

    std::string file;
    std::string output;
    std::string property;
    std::string hasse;

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "structure report for an automaton");
    analyze_cmd->add_option("file", file, "automaton file")->required();

    CLI::App* check_cmd = app.add_subcommand("check", "decide a property (exit 0 yes / 1 no)");
    check_cmd->add_option("file", file, "automaton file")->required();
    check_cmd->add_option("--property", property, "property to decide")
        ->required()
        ->check(CLI::IsMember({"retractable", "boolean", "semi-connected", "kernel"}));

    CLI::App* congruences_cmd = app.add_subcommand("congruences", "list the congruence lattice");
    congruences_cmd->add_option("file", file, "automaton file")->required();
    congruences_cmd->add_option("--hasse", hasse, "write the Hasse diagram as DOT");

    CLI::App* decompose_cmd = app.add_subcommand("decompose", "direct-sum components and kernels");
    decompose_cmd->add_option("file", file, "automaton file")->required();

    CLI::App* construct_cmd = app.add_subcommand("construct", "build the glued automaton of a spec");
    construct_cmd->add_option("spec", file, "construction spec file")->required();
    construct_cmd->add_option("-o,--output", output, "output automaton file")->required();

    CLI::App* recover_cmd = app.add_subcommand("recover", "recover a construction spec");
    recover_cmd->add_option("file", file, "automaton file")->required();
    recover_cmd->add_option("-o,--output", output, "output spec file")->required();

    CLI::App* export_cmd = app.add_subcommand("export-dot", "emit the automaton as DOT");
    export_cmd->add_option("file", file, "automaton file")->required();
    export_cmd->add_option("-o,--output", output, "output file (default stdout)");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the statement-level check suite");
    VerifyConfig config;
    bool exhaustive_flag = false;
    std::uint64_t random_count = 0;
    verify_cmd->add_option("--states", config.max_states, "state bound")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--inputs", config.max_inputs, "input bound")->check(CLI::PositiveNumber);
    verify_cmd->add_flag("--exhaustive", exhaustive_flag, "every automaton within the bounds");
    verify_cmd->add_option("--random", random_count, "random sample of this size at the bounds");
    verify_cmd->add_option("--seed", config.seed, "seed for random mode");
    verify_cmd->add_flag("--force", config.force, "allow bounds beyond (4, 2)");
    verify_cmd->add_option("--jobs", config.jobs, "parallel workers")->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    argv.push_back("retra");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail(err, "usage", e.what());
    }

    if (app.got_subcommand(analyze_cmd)) {
        out << report_text(analyze(load_automaton_file(file)));
        return 0;
    }
    if (app.got_subcommand(check_cmd)) {
        return run_check(load_automaton_file(file), property, out);
    }
    if (app.got_subcommand(congruences_cmd)) {
        CongruenceLattice lattice = all_congruences(load_automaton_file(file));
        out << "congruences: " << lattice.size() << '\n';
        for (const Congruence& c : lattice.elements()) {
            out << "  " << format_blocks(c) << '\n';
        }
        LatticeClass cls = lattice_class(lattice);
        out << "complemented: " << (cls.complemented ? "yes" : "no")
            << "  distributive: " << (cls.distributive ? "yes" : "no")
            << "  boolean-algebra: " << (cls.boolean_algebra ? "yes" : "no") << '\n';
        if (!hasse.empty()) write_text(hasse, lattice_hasse_dot(lattice), out);
        return 0;
    }
    if (app.got_subcommand(decompose_cmd)) {
        Automaton a = load_automaton_file(file);
        std::vector<Subautomaton> components = direct_sum_components(a);
        out << "components: " << components.size() << '\n';
        for (std::size_t i = 0; i < components.size(); ++i) {
            std::optional<Subautomaton> kern = kernel(components[i].extract());
            out << "  component " << i + 1 << ": " << format_state_set(a, components[i].carrier)
                << "  kernel: ";
            if (kern) {
                std::vector<int> ambient;
                for (int local : kern->carrier) ambient.push_back(components[i].to_ambient(local));
                out << format_state_set(a, ambient);
            } else {
                out << "none";
            }
            out << '\n';
        }
        return 0;
    }
    if (app.got_subcommand(construct_cmd)) {
        ConstructionSpec spec = load_spec_file(file);
        GluedAutomaton built = build(spec);
        save_automaton_file(built.automaton, output);
        out << "built " << built.automaton.num_states() << " states from "
            << spec.tree.num_nodes() << " components into " << output << '\n';
        return 0;
    }
    if (app.got_subcommand(recover_cmd)) {
        RecoveredSpec recovered = recover_spec(load_automaton_file(file));
        if (!recovered.spec) {
            out << "not recoverable: " << recovered.reason << '\n';
            return 1;
        }
        save_spec_file(*recovered.spec, output);
        out << "recovered " << recovered.spec->tree.num_nodes() << " components into " << output
            << '\n';
        return 0;
    }
    if (app.got_subcommand(export_cmd)) {
        write_text(output, automaton_dot(load_automaton_file(file)), out);
        return 0;
    }
    // verify
    config.exhaustive = random_count == 0;
    config.random_count = random_count;
    if (exhaustive_flag && random_count > 0) {
        return fail(err, "usage", "--exhaustive and --random are mutually exclusive");
    }
    VerificationRun run = verify(config);
    out << verification_summary(run);
    return run.ok() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const BudgetError& e) {
        return fail(err, "budget", e.what());
    } catch (const ParseError& e) {
        return fail(err, "parse", e.what());
    } catch (const VerificationError& e) {
        return fail(err, "verification", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(err, "input", e.what());
    } catch (const std::exception& e) {
        return fail(err, "internal", e.what());
    }
}

}  // namespace retra
