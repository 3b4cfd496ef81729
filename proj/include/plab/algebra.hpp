#ifndef PLAB_ALGEBRA_HPP
#define PLAB_ALGEBRA_HPP

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "plab/linalg.hpp"

namespace plab {

/// A subspace of R^n given by a basis matrix whose columns span it.
struct LinearSubspace {
    int ambient_dim = 0;
    Mat basis;  // ambient_dim x dim, columns independent

    int dim() const { return static_cast<int>(basis.cols()); }
};

/// A linear map between algebras, acting as v |-> matrix * v.
struct LinearMapData {
    Mat matrix;  // codomain_dim x domain_dim
    std::string domain;
    std::string codomain;
};

/// Finite-dimensional real Lie algebra presented by structure constants.
/// c[k](i,j) is the e_k coefficient of [e_i, e_j]; antisymmetry in (i,j) is
/// validated at construction.
class LieAlgebra {
  public:
    LieAlgebra() = default;

    LieAlgebra(std::string name, std::vector<Mat> c) : name_(std::move(name)), c_(std::move(c)) {
        n_ = static_cast<int>(c_.size());
        for (const auto& ck : c_) {
            if (ck.rows() != n_ || ck.cols() != n_)
                throw DimensionMismatch("structure tensor slice is not n x n in " + name_);
            if (max_abs(Mat(ck + ck.transpose())) > 1e-13)
                throw AntisymmetryViolation("structure constants of " + name_);
        }
    }

    /// Build from sparse entries (i, j, k, v): [e_i, e_j] = v e_k + ...,
    /// with i < j; the (j, i) entry is filled by antisymmetry.
    static LieAlgebra from_entries(std::string name, int n,
                                   const std::vector<std::array<double, 4>>& entries) {
        std::vector<Mat> c(n, Mat::Zero(n, n));
        for (const auto& e : entries) {
            const int i = static_cast<int>(e[0]);
            const int j = static_cast<int>(e[1]);
            const int k = static_cast<int>(e[2]);
            if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
                throw DimensionMismatch("structure entry out of range in " + name);
            c[k](i, j) += e[3];
            c[k](j, i) -= e[3];
        }
        return LieAlgebra(std::move(name), std::move(c));
    }

    const std::string& name() const { return name_; }
    int dim() const { return n_; }
    const std::vector<Mat>& structure() const { return c_; }

    /// [x, y] in basis coordinates.
    Vec bracket(const Vec& x, const Vec& y) const {
        check_dim(x);
        check_dim(y);
        Vec out(n_);
        for (int k = 0; k < n_; ++k) out(k) = x.dot(c_[k] * y);
        return out;
    }

    /// Matrix of ad_x = [x, .] acting on the algebra.
    Mat ad_matrix(const Vec& x) const {
        check_dim(x);
        Mat m(n_, n_);
        for (int k = 0; k < n_; ++k) m.row(k) = (c_[k].transpose() * x).transpose();
        return m;
    }

    /// Linear bivector matrix at a dual point: Pi(eta)_{ij} = <eta, [e_i, e_j]>.
    Mat poisson_matrix(const Vec& eta) const {
        check_dim(eta);
        Mat p = Mat::Zero(n_, n_);
        for (int k = 0; k < n_; ++k) p += eta(k) * c_[k];
        return p;
    }

    void check_dim(const Vec& v) const {
        if (v.size() != n_) throw DimensionMismatch("vector has wrong dimension for " + name_);
    }

  private:
    std::string name_;
    int n_ = 0;
    std::vector<Mat> c_;
};

/// Jacobi defect on all basis triples.  Entries are exact when the structure
/// constants are small integers, so a valid algebra reports exactly zero.
struct JacobiReport {
    int n = 0;
    std::vector<double> table;  // index ((i*n + j)*n + l)*n + k
    double max_abs = 0.0;

    double value(int i, int j, int l, int k) const {
        return table[static_cast<size_t>(((i * n + j) * n + l) * n + k)];
    }
};

inline JacobiReport jacobiator(const LieAlgebra& lie) {
    const int n = lie.dim();
    JacobiReport rep;
    rep.n = n;
    rep.table.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    Mat id = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                Vec ei = id.col(i), ej = id.col(j), el = id.col(l);
                Vec jac = lie.bracket(lie.bracket(ei, ej), el) +
                          lie.bracket(lie.bracket(ej, el), ei) +
                          lie.bracket(lie.bracket(el, ei), ej);
                for (int k = 0; k < n; ++k) {
                    rep.table[static_cast<size_t>(((i * n + j) * n + l) * n + k)] = jac(k);
                    rep.max_abs = std::max(rep.max_abs, std::abs(jac(k)));
                }
            }
    return rep;
}

/// xi_operator(x) = sum_{k>=0} ad_x^k / (k+1)!, the derivative correction
/// with ad_x * Xi = exp(ad_x) - Id.
inline Mat xi_operator(const LieAlgebra& lie, const Vec& x) {
    Mat e, xi;
    matrix_exp_xi(lie.ad_matrix(x), e, xi);
    return xi;
}

/// Precomposition of a dual point with exp(ad_x): returns exp(ad_x)^T xi.
inline Vec coad_exp(const LieAlgebra& lie, const Vec& x, const Vec& xi) {
    lie.check_dim(xi);
    return matrix_exp(lie.ad_matrix(x)).transpose() * xi;
}

/// Annihilator of a subspace of R^n inside the dual, as a subspace of R^n*.
inline LinearSubspace annihilator(const LinearSubspace& s) {
    LinearSubspace out;
    out.ambient_dim = s.ambient_dim;
    if (s.dim() == 0) {
        out.basis = Mat::Identity(s.ambient_dim, s.ambient_dim);
    } else {
        out.basis = kernel_basis(Mat(s.basis.transpose()));
    }
    return out;
}

/// Worst defect of f([x,y]) = [f(x), f(y)] over basis pairs.
inline double morphism_residual(const LieAlgebra& dom, const LieAlgebra& cod, const Mat& f) {
    if (f.rows() != cod.dim() || f.cols() != dom.dim())
        throw DimensionMismatch("morphism matrix shape");
    double worst = 0.0;
    Mat id = Mat::Identity(dom.dim(), dom.dim());
    for (int i = 0; i < dom.dim(); ++i)
        for (int j = i + 1; j < dom.dim(); ++j) {
            Vec lhs = f * dom.bracket(id.col(i), id.col(j));
            Vec rhs = cod.bracket(f * id.col(i), f * id.col(j));
            worst = std::max(worst, max_abs(Vec(lhs - rhs)));
        }
    return worst;
}

inline bool is_morphism(const LieAlgebra& dom, const LieAlgebra& cod, const Mat& f,
                        double tol = 1e-12) {
    return morphism_residual(dom, cod, f) <= tol;
}

}

#endif
