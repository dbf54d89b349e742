#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qnc/measure_space.hpp"

namespace qnc {

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);

    static RationalMatrix identity(std::size_t d);
    static RationalMatrix diagonal(const std::vector<Rational>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RationalMatrix transpose() const;
    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// C_phi on L^2(mu) of a finite space, in the basis of positive-weight atoms.
/// The inner product is <f, g> = sum f(x) g(x) w(x).
struct OperatorMatrix {
    RationalMatrix entries;
    std::vector<Rational> weights;
    std::vector<std::size_t> atoms; // explicit slot of each basis vector

    std::size_t dim() const { return weights.size(); }
};

/// Entry (x, y) = 1 iff phi(x) = y. Null atoms are dropped. Throws input_error on countable spaces.
OperatorMatrix build_matrix(const MeasureSpace& space, const Transformation& phi);

/// W^{-1} A^T W.
OperatorMatrix weighted_adjoint(const OperatorMatrix& a);

/// <A e_i, e_j> = <e_i, B e_j> for all basis pairs.
bool is_weighted_adjoint(const OperatorMatrix& a, const OperatorMatrix& b);

/// A* A.
RationalMatrix adjoint_product(const OperatorMatrix& a);

/// A (A* A) == (A* A) A, exactly.
bool oracle_quasinormal(const OperatorMatrix& a);

struct PolarCrosscheck {
    double residual = 0;        // Frobenius norm of U|A| - |A|U in an orthonormal basis
    double reconstruction = 0;  // Frobenius norm of U|A| - A
    bool commutes = false;      // residual <= tolerance
    bool agrees = false;        // commutes == oracle_quasinormal
    bool ill_conditioned = false;
};

/// Floating-point polar decomposition; the exact commutation test stays authoritative.
PolarCrosscheck oracle_polar_crosscheck(const OperatorMatrix& a, double tolerance = 1e-9);

/// `matrix <name> <d>x<d>` followed by one line of `p/q` entries per row.
std::string dump_matrix(const std::string& name, const RationalMatrix& m);

} // namespace qnc
