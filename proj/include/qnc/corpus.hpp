#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qnc/measure_space.hpp"

namespace qnc {

/// Uniform finite instance: size in [min_atoms, max_atoms], weights and map uniform.
Instance generate_instance(std::uint64_t seed, unsigned min_atoms, unsigned max_atoms,
                           const std::vector<Rational>& weights);

/// Explicit atoms plus one or two shift or fan-in families.
Instance generate_countable(std::uint64_t seed, const std::vector<Rational>& weights);

/// Every space of 1..max_atoms atoms with weights from the set, with every self-map.
void enumerate_exhaustive(unsigned max_atoms, const std::vector<Rational>& weights,
                          const std::function<void(const Instance&)>& visit);
std::size_t exhaustive_count(unsigned max_atoms, std::size_t weight_count);

enum class Property {
    equivalence,   // (i)..(vi) agree under the standing hypothesis
    lemma,         // both halves of the lemma pair agree for n <= n_max
    oracle,        // commutation oracle equals (i)
    adjoint,       // A*A = diag(h_phi), pairing identity, involution
    consistency,   // canonical families behave as quasinormality predicts
    hankel,        // moment Hankel matrices are PSD
    structure,     // finite quasinormal <=> measure-preserving bijection
    numeric,       // polar cross-check agrees; residual < 1e-12 when quasinormal
    transport,     // integral identity for indicator probes
    witness,       // every failure witness re-evaluates to a violation
    round_trip,    // parse(render(instance)) == instance
    count_
};
inline constexpr std::size_t property_count = static_cast<std::size_t>(Property::count_);
const char* property_name(Property p);

struct InstanceOutcome {
    bool skipped = false; // singular, not densely defined or not representable
    std::string skip_reason;
    bool quasinormal = false;
    bool measure_preserving_bijection = false;
    double polar_residual = 0;
    std::vector<std::pair<Property, std::string>> violations;
};

InstanceOutcome evaluate_instance(const Instance& instance, unsigned n_max = 8, double tolerance = 1e-9);

struct CorpusOptions {
    unsigned max_exhaustive_atoms = 3;
    std::vector<Rational> weights{Rational(1), Rational(2), Rational(1, 2), Rational(3)};
    std::size_t random_instances = 0;
    unsigned random_max_atoms = 6;
    std::size_t random_countable = 0;
    std::uint64_t seed = 1;
    unsigned n_max = 8;
    double tolerance = 1e-9;
    unsigned threads = 1;
};

struct CorpusSummary {
    std::size_t instances = 0;
    std::size_t exhaustive = 0;
    std::size_t random = 0;
    std::size_t countable = 0;
    std::size_t skipped = 0;
    std::size_t quasinormal = 0;
    std::size_t quasinormal_exhaustive = 0;
    std::size_t bijections_exhaustive = 0; // measure-preserving bijections in the exhaustive part
    double max_quasinormal_residual = 0;
    double min_nonquasinormal_residual = 0; // over finite non-quasinormal instances
    std::array<std::size_t, property_count> violations{};
    std::vector<std::string> first_violations; // at most 10
    std::size_t total_violations() const;
};

/// Deterministic in the options: instance i of the random part is seeded from (seed, i).
CorpusSummary run_corpus(const CorpusOptions& options);

std::string render_summary(const CorpusSummary& summary);

} // namespace qnc
