#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnc/consistency.hpp"
#include "qnc/oracle_matrix.hpp"
#include "qnc/quasinormality.hpp"

namespace qnc {

struct HypothesisFlags {
    bool nonsingular = false;
    std::optional<AtomId> singular_at;
    bool densely_defined = false;
    std::optional<AtomId> infinite_at;
    bool bounded = false;
    ExtValue sup;
};

struct ConditionOutcome {
    Condition tag = Condition::i;
    std::optional<ConditionVerdict> verdict;
    std::string error;
};

struct OracleOutcome {
    bool quasinormal = false;
    bool adjoint_product_is_h = false;
    bool pairing = false;
    PolarCrosscheck polar;
    std::string dump;
};

struct FamilyOutcome {
    std::string name;
    std::optional<FamilyVerdict> cc;
    std::string cc_error;
    std::optional<FamilyVerdict> sms;
    std::string sms_error;
    std::optional<bool> hankel;
};

struct AnalysisReport {
    AnalysisReport(Instance inst, unsigned horizon) : instance(std::move(inst)), n_max(horizon) {}

    Instance instance;
    unsigned n_max = 8;
    HypothesisFlags flags;
    std::vector<MeasurableFn> derivatives; // h_{phi^n}, n = 0 .. n_max
    std::vector<ConditionOutcome> conditions;
    std::vector<ProbeOutcome> probes;
    std::vector<LemmaVerdict> lemma;
    std::string lemma_error;
    std::optional<OracleOutcome> oracle;
    std::string oracle_error;
    std::vector<FamilyOutcome> families;
    bool standing_hypothesis = false;
    bool equivalence_consistent = true;
    std::vector<std::string> inconsistencies;
    std::string decided_by;

    const ConditionOutcome& condition(Condition c) const;
};

struct ReportOptions {
    unsigned n_max = 8;
    double tolerance = 1e-9;
    bool dump_matrices = false;
    std::vector<std::pair<std::string, ProbabilityFamily>> families;
};

/// Runs every check whose preconditions hold; failures are recorded, never thrown.
AnalysisReport full_report(const Instance& instance, const ReportOptions& options = {});

/// `atom:1;sigma:{3};lhs:0;rhs:1;clause:...` or `none`.
std::string render_witness(const std::optional<Witness>& w, const MeasureSpace& space);
std::string render_report(const AnalysisReport& report);
std::string render_report_json(const AnalysisReport& report);

/// Remark space table and verdict summary followed by the full report.
std::string render_remark(const AnalysisReport& report);

} // namespace qnc
