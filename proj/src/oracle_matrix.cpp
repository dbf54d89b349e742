#include "qnc/oracle_matrix.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "qnc/errors.hpp"

namespace qnc {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix RationalMatrix::identity(std::size_t d)
{
    RationalMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::diagonal(const std::vector<Rational>& d)
{
    RationalMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw input_error("matrix dimensions do not match");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& aik = a(i, k);
            if (sgn(aik) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

OperatorMatrix build_matrix(const MeasureSpace& space, const Transformation& phi)
{
    if (!space.is_finite())
        throw input_error("oracle is finite-only");
    auto ns = check_nonsingular(space, phi);
    if (!ns.holds)
        throw precondition_error("oracle needs a nonsingular phi");
    OperatorMatrix out;
    std::vector<std::size_t> basis_of(space.explicit_count(), SIZE_MAX);
    for (std::size_t i = 0; i < space.explicit_count(); ++i) {
        if (sgn(space.atom(i).weight) == 0)
            continue;
        basis_of[i] = out.atoms.size();
        out.atoms.push_back(i);
        out.weights.push_back(space.atom(i).weight);
    }
    out.entries = RationalMatrix(out.dim(), out.dim());
    for (std::size_t r = 0; r < out.dim(); ++r)
        out.entries(r, basis_of[phi.apply_explicit(out.atoms[r])]) = 1;
    return out;
}

OperatorMatrix weighted_adjoint(const OperatorMatrix& a)
{
    OperatorMatrix out = a;
    const std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out.entries(i, j) = a.entries(j, i) * a.weights[j] / a.weights[i];
    return out;
}

bool is_weighted_adjoint(const OperatorMatrix& a, const OperatorMatrix& b)
{
    // <A e_i, e_j> = A(j,i) w_j and <e_i, B e_j> = w_i B(i,j).
    const std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (a.entries(j, i) * a.weights[j] != a.weights[i] * b.entries(i, j))
                return false;
    return true;
}

RationalMatrix adjoint_product(const OperatorMatrix& a)
{
    return weighted_adjoint(a).entries * a.entries;
}

bool oracle_quasinormal(const OperatorMatrix& a)
{
    const RationalMatrix g = adjoint_product(a);
    return a.entries * g == g * a.entries;
}

PolarCrosscheck oracle_polar_crosscheck(const OperatorMatrix& a, double tolerance)
{
    const auto d = static_cast<Eigen::Index>(a.dim());
    // B = W^{1/2} A W^{-1/2} is the same operator in an orthonormal basis.
    Eigen::MatrixXd b(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            b(i, j) = a.entries(i, j).get_d() * std::sqrt(a.weights[i].get_d() / a.weights[j].get_d());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.transpose() * b);
    const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
    const double cutoff = 1e-12 * std::max(1.0, lambda.maxCoeff());
    Eigen::VectorXd root = lambda.cwiseSqrt();
    Eigen::VectorXd root_inv(d);
    PolarCrosscheck out;
    for (Eigen::Index k = 0; k < d; ++k) {
        root_inv(k) = lambda(k) > cutoff ? 1.0 / root(k) : 0.0;
        if (lambda(k) > 0 && lambda(k) <= cutoff)
            out.ill_conditioned = true;
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    const Eigen::MatrixXd modulus = v * root.asDiagonal() * v.transpose();
    const Eigen::MatrixXd partial_isometry = b * (v * root_inv.asDiagonal() * v.transpose());

    const Eigen::MatrixXd left = partial_isometry * modulus;
    out.residual = (left - modulus * partial_isometry).norm();
    out.reconstruction = (left - b).norm();
    if (out.reconstruction > tolerance)
        out.ill_conditioned = true;
    out.commutes = out.residual <= tolerance;
    out.agrees = out.commutes == oracle_quasinormal(a);
    return out;
}

std::string dump_matrix(const std::string& name, const RationalMatrix& m)
{
    std::ostringstream os;
    os << "matrix " << name << ' ' << m.rows() << 'x' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << format_rational_pq(m(i, j));
        os << '\n';
    }
    return os.str();
}

} // namespace qnc
