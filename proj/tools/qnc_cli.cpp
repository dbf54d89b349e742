#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qnc/builtins.hpp"
#include "qnc/corpus.hpp"
#include "qnc/errors.hpp"
#include "qnc/report.hpp"
#include "qnc/space_io.hpp"

namespace {

// Exit-code contract.
constexpr int ok = 0;
constexpr int input_failure = 1;
constexpr int precondition_failure = 2;
constexpr int inconsistent = 3;

qnc::Instance load(const std::string& source)
{
    if (!source.empty() && source.front() == '@')
        return qnc::builtin(source.substr(1));
    return qnc::read_instance_file(source);
}

std::vector<qnc::Rational> parse_weights(const std::string& list)
{
    std::vector<qnc::Rational> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(qnc::parse_rational(item));
    if (out.empty())
        throw qnc::input_error("empty weight list");
    return out;
}

int report_exit(const qnc::AnalysisReport& r)
{
    if (!r.flags.nonsingular)
        return precondition_failure;
    return r.equivalence_consistent ? ok : inconsistent;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quasinormality checks for composition operators on atomic measure spaces"};
    app.require_subcommand(1);

    std::string source, family_path;
    unsigned n_max = 8;
    bool dump = false, json = false;
    auto* analyze = app.add_subcommand("analyze", "Full report for a space file or @builtin");
    analyze->add_option("source", source, "space file, or @name for a builtin")->required();
    analyze->add_option("--nmax", n_max, "horizon for (v), (vi) and the lemma")->check(CLI::Range(1u, 64u));
    analyze->add_flag("--oracle", dump, "dump A, A* and A*A");
    analyze->add_option("--family", family_path, "probability family file checked for (CC) and moments");
    analyze->add_flag("--json", json, "JSON output");

    auto* remark = app.add_subcommand("reproduce-remark", "Counting measure on Z+ with phi = 0");
    remark->add_option("--nmax", n_max, "horizon")->check(CLI::Range(1u, 64u));

    std::uint64_t seed = 1;
    unsigned min_atoms = 1, max_atoms = 4;
    std::string weights = "1,2,1/2,3";
    bool countable = false;
    auto* generate = app.add_subcommand("generate", "Random instance in the space-file format");
    generate->add_option("--seed", seed, "seed");
    generate->add_option("--min-atoms", min_atoms, "minimum number of atoms");
    generate->add_option("--max-atoms", max_atoms, "maximum number of atoms");
    generate->add_option("--weights", weights, "comma-separated rational weights");
    generate->add_flag("--countable", countable, "add shift or fan-in families");

    qnc::CorpusOptions copt;
    std::size_t instances = 0;
    auto* corpus = app.add_subcommand("corpus", "Exhaustive plus seeded random property run");
    corpus->add_option("--instances", instances, "random finite instances");
    corpus->add_option("--seed", seed, "seed");
    corpus->add_option("--exhaustive-atoms", copt.max_exhaustive_atoms, "exhaustive part covers 1..D atoms (0 disables)");
    corpus->add_option("--max-atoms", copt.random_max_atoms, "size bound of random instances");
    corpus->add_option("--countable", copt.random_countable, "random countable instances");
    corpus->add_option("--weights", weights, "comma-separated rational weights");
    corpus->add_option("--nmax", n_max, "horizon")->check(CLI::Range(1u, 64u));
    corpus->add_option("--tolerance", copt.tolerance, "polar cross-check tolerance");
    corpus->add_option("--threads", copt.threads, "worker threads");

    std::string name;
    auto* show = app.add_subcommand("show-builtin", "Print a builtin space file");
    show->add_option("name", name, "builtin name")->required();
    auto* list = app.add_subcommand("list-builtins", "List builtin names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_failure;
    }

    try {
        if (analyze->parsed()) {
            qnc::Instance inst = load(source);
            qnc::ReportOptions options;
            options.n_max = n_max;
            options.dump_matrices = dump;
            if (!family_path.empty())
                options.families.emplace_back("file", qnc::read_family_file(family_path, inst.space));
            const auto r = qnc::full_report(inst, options);
            std::cout << (json ? qnc::render_report_json(r) : qnc::render_report(r));
            return report_exit(r);
        }
        if (remark->parsed()) {
            qnc::ReportOptions options;
            options.n_max = n_max;
            const auto r = qnc::full_report(qnc::builtin("remark"), options);
            std::cout << qnc::render_remark(r);
            return report_exit(r);
        }
        if (generate->parsed()) {
            const auto w = parse_weights(weights);
            const auto inst = countable ? qnc::generate_countable(seed, w) : qnc::generate_instance(seed, min_atoms, max_atoms, w);
            std::cout << qnc::render_instance(inst);
            return ok;
        }
        if (corpus->parsed()) {
            copt.weights = parse_weights(weights);
            copt.random_instances = instances;
            copt.seed = seed;
            copt.n_max = n_max;
            const auto start = std::chrono::steady_clock::now();
            const auto s = qnc::run_corpus(copt);
            const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
            std::cout << qnc::render_summary(s);
            std::fprintf(stderr, "elapsed %.2fs\n", took.count());
            return s.total_violations() == 0 ? ok : inconsistent;
        }
        if (show->parsed()) {
            std::cout << qnc::builtin_text(name);
            return ok;
        }
        if (list->parsed()) {
            for (const auto& n : qnc::builtin_names())
                std::cout << n << '\n';
            return ok;
        }
    } catch (const qnc::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_failure;
    } catch (const qnc::precondition_error& e) {
        std::cerr << "precondition: " << e.what() << '\n';
        return precondition_failure;
    } catch (const qnc::representation_error& e) {
        std::cerr << "not representable: " << e.what() << '\n';
        return precondition_failure;
    } catch (const qnc::consistency_error& e) {
        std::cerr << "inconsistency: " << e.what() << '\n';
        return inconsistent;
    } catch (const qnc::arithmetic_error& e) {
        std::cerr << "arithmetic: " << e.what() << '\n';
        return input_failure;
    }
    return ok;
}
