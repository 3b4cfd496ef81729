#ifndef PLAB_FIELDS_HPP
#define PLAB_FIELDS_HPP

#include <functional>
#include <map>
#include <vector>

#include "plab/algebra.hpp"
#include "plab/rng.hpp"

namespace plab {

/// Sparse polynomial in n variables with exact coefficient arithmetic for
/// integer inputs.  Terms with coefficient exactly zero are pruned.
class Poly {
  public:
    Poly() = default;
    explicit Poly(int nvars) : n_(nvars) {}

    static Poly constant(int nvars, double c) {
        Poly p(nvars);
        if (c != 0.0) p.terms_[std::vector<int>(nvars, 0)] = c;
        return p;
    }

    static Poly variable(int nvars, int i) {
        Poly p(nvars);
        std::vector<int> e(nvars, 0);
        e[i] = 1;
        p.terms_[e] = 1.0;
        return p;
    }

    int nvars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }

    double max_coeff_abs() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    void add_term(const std::vector<int>& expo, double coeff) {
        auto it = terms_.find(expo);
        double v = (it == terms_.end() ? 0.0 : it->second) + coeff;
        if (v == 0.0) {
            if (it != terms_.end()) terms_.erase(it);
        } else {
            terms_[expo] = v;
        }
    }

    Poly operator+(const Poly& o) const {
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    Poly operator-(const Poly& o) const {
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }

    Poly operator*(const Poly& o) const {
        Poly r(n_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_) {
                std::vector<int> e(n_);
                for (int i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    Poly scaled(double s) const {
        Poly r(n_);
        if (s == 0.0) return r;
        for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
        return r;
    }

    Poly partial(int i) const {
        Poly r(n_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            std::vector<int> d = e;
            d[i] -= 1;
            r.add_term(d, c * e[i]);
        }
        return r;
    }

    double eval(const Vec& x) const {
        double v = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int i = 0; i < n_; ++i)
                for (int k = 0; k < e[i]; ++k) t *= x(i);
            v += t;
        }
        return v;
    }

  private:
    int n_ = 0;
    std::map<std::vector<int>, double> terms_;
};

/// Antisymmetric trivector values at a point: components for i < j < k.
struct TrivectorValue {
    int n = 0;
    std::vector<double> comp;  // index of (i,j,k) in lexicographic i<j<k order

    static int count(int n) { return n * (n - 1) * (n - 2) / 6; }

    static int offset(int n, int i, int j, int k) {
        // position of (i,j,k), i<j<k, in lexicographic enumeration
        int idx = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c) {
                    if (a == i && b == j && c == k) return idx;
                    ++idx;
                }
        throw DimensionMismatch("trivector index out of range");
    }

    double value(int i, int j, int k) const { return comp[offset(n, i, j, k)]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : comp) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Polynomial bivector field on R^n; entries stored for i < j.
class PolyBivectorField {
  public:
    PolyBivectorField() = default;
    explicit PolyBivectorField(int n) : n_(n) {}

    int dim() const { return n_; }

    void set_entry(int i, int j, Poly p) {
        if (i >= j) throw DimensionMismatch("bivector entries are set with i < j");
        upper_[{i, j}] = std::move(p);
    }

    /// entry(i, j) with the sign convention entry(j, i) = -entry(i, j).
    Poly entry(int i, int j) const {
        if (i == j) return Poly(n_);
        auto it = upper_.find({std::min(i, j), std::max(i, j)});
        if (it == upper_.end()) return Poly(n_);
        return i < j ? it->second : it->second.scaled(-1.0);
    }

    Mat eval(const Vec& x) const {
        Mat m = Mat::Zero(n_, n_);
        for (const auto& [ij, p] : upper_) {
            double v = p.eval(x);
            m(ij.first, ij.second) = v;
            m(ij.second, ij.first) = -v;
        }
        return m;
    }

  private:
    int n_ = 0;
    std::map<std::pair<int, int>, Poly> upper_;
};

/// Polynomial trivector field; components stored for i < j < k.
class PolyTrivectorField {
  public:
    explicit PolyTrivectorField(int n) : n_(n) {}

    int dim() const { return n_; }

    void add_component(int i, int j, int k, const Poly& p) {
        comp_[{i, j, k}] = (component(i, j, k) + p);
        if (comp_[{i, j, k}].is_zero()) comp_.erase({i, j, k});
    }

    Poly component(int i, int j, int k) const {
        auto it = comp_.find({i, j, k});
        return it == comp_.end() ? Poly(n_) : it->second;
    }

    bool is_zero() const {
        for (const auto& [ijk, p] : comp_)
            if (!p.is_zero()) return false;
        return true;
    }

    double max_coeff_abs() const {
        double m = 0.0;
        for (const auto& [ijk, p] : comp_) m = std::max(m, p.max_coeff_abs());
        return m;
    }

    TrivectorValue eval(const Vec& x) const {
        TrivectorValue t;
        t.n = n_;
        t.comp.assign(TrivectorValue::count(n_), 0.0);
        int idx = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                for (int k = j + 1; k < n_; ++k) t.comp[idx++] = component(i, j, k).eval(x);
        return t;
    }

  private:
    int n_ = 0;
    std::map<std::array<int, 3>, Poly> comp_;
};

/// The linear bivector field of a Lie algebra on its dual:
/// entry (i,j) is the polynomial xi |-> <xi, [e_i, e_j]>.
inline PolyBivectorField lie_poisson_field(const LieAlgebra& lie) {
    const int n = lie.dim();
    PolyBivectorField f(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Poly p(n);
            for (int k = 0; k < n; ++k) {
                double c = lie.structure()[k](i, j);
                if (c != 0.0) p.add_term([&] {
                    std::vector<int> e(n, 0);
                    e[k] = 1;
                    return e;
                }(), c);
            }
            f.set_entry(i, j, p);
        }
    return f;
}

namespace detail {

/// Schouten component sum for one (i,j,k): over l, cyclic in (i,j,k),
/// a^{li} d_l b^{jk} + b^{li} d_l a^{jk}.
template <class Entry, class Partial, class Acc>
void schouten_component(int n, int i, int j, int k, Entry&& ent, Partial&& part, Acc&& acc) {
    const int cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
    for (const auto& c : cyc)
        for (int l = 0; l < n; ++l) {
            acc(ent(l, c[0], 0), part(l, c[1], c[2], 1));
            acc(ent(l, c[0], 1), part(l, c[1], c[2], 0));
        }
}

}

/// Schouten bracket of two polynomial bivector fields; exact arithmetic.
inline PolyTrivectorField schouten(const PolyBivectorField& a, const PolyBivectorField& b) {
    if (a.dim() != b.dim()) throw MixedDimensions("schouten of fields on different spaces");
    const int n = a.dim();
    PolyTrivectorField t(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Poly sum(n);
                detail::schouten_component(
                    n, i, j, k,
                    [&](int p, int q, int which) { return which == 0 ? a.entry(p, q) : b.entry(p, q); },
                    [&](int l, int p, int q, int which) {
                        return which == 0 ? a.entry(p, q).partial(l) : b.entry(p, q).partial(l);
                    },
                    [&](const Poly& u, const Poly& v) { sum = sum + u * v; });
                t.add_component(i, j, k, sum);
            }
    return t;
}

/// Pointwise field given by an evaluator; `kind` selects the calculus rules.
struct PointField {
    enum class Kind { bivector, twoform, map };

    Kind kind = Kind::bivector;
    int dim = 0;      // domain dimension
    int codim = 0;    // codomain dimension for maps
    double fd_step = 1e-5;
    std::function<Mat(const Vec&)> matrix_eval;  // bivector / two-form
    std::function<Vec(const Vec&)> map_eval;     // map

    Mat matrix_at(const Vec& p) const {
        Mat m = matrix_eval(p);
        if (m.rows() != dim || m.cols() != dim)
            throw DimensionMismatch("field evaluator returned wrong shape");
        if (max_abs(Mat(m + m.transpose())) > 1e-13 * (1.0 + max_abs(m)))
            throw NotAntisymmetric("field value at evaluation point");
        return m;
    }

    double step_at(const Vec& p) const { return fd_step * (1.0 + p.norm()); }
};

inline PointField as_point_field(const PolyBivectorField& f, double fd_step = 1e-5) {
    PointField pf;
    pf.kind = PointField::Kind::bivector;
    pf.dim = f.dim();
    pf.fd_step = fd_step;
    pf.matrix_eval = [f](const Vec& x) { return f.eval(x); };
    return pf;
}

inline PointField bivector_field(int n, std::function<Mat(const Vec&)> eval,
                                 double fd_step = 1e-5) {
    PointField pf;
    pf.kind = PointField::Kind::bivector;
    pf.dim = n;
    pf.fd_step = fd_step;
    pf.matrix_eval = std::move(eval);
    return pf;
}

inline PointField twoform_field(int n, std::function<Mat(const Vec&)> eval,
                                double fd_step = 1e-5) {
    PointField pf;
    pf.kind = PointField::Kind::twoform;
    pf.dim = n;
    pf.fd_step = fd_step;
    pf.matrix_eval = std::move(eval);
    return pf;
}

inline PointField map_field(int n, int m, std::function<Vec(const Vec&)> eval,
                            double fd_step = 1e-5) {
    PointField pf;
    pf.kind = PointField::Kind::map;
    pf.dim = n;
    pf.codim = m;
    pf.map_eval = std::move(eval);
    pf.fd_step = fd_step;
    return pf;
}

namespace detail {

/// Central-difference partial of one matrix entry function.
inline double fd_partial_entry(const PointField& f, const Vec& p, int l, int r, int c, double h) {
    Vec pp = p, pm = p;
    pp(l) += h;
    pm(l) -= h;
    return (f.matrix_at(pp)(r, c) - f.matrix_at(pm)(r, c)) / (2.0 * h);
}

}

/// Schouten bracket of two pointwise bivector fields at a point, by central
/// differences.  Same component convention as the polynomial version.
inline TrivectorValue schouten(const PointField& a, const PointField& b, const Vec& p) {
    if (a.kind != PointField::Kind::bivector || b.kind != PointField::Kind::bivector)
        throw DimensionMismatch("schouten expects bivector fields");
    if (a.dim != b.dim) throw MixedDimensions("schouten of fields on different spaces");
    const int n = a.dim;
    const double ha = a.step_at(p), hb = b.step_at(p);
    Mat av = a.matrix_at(p), bv = b.matrix_at(p);
    TrivectorValue t;
    t.n = n;
    t.comp.assign(TrivectorValue::count(n), 0.0);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                double sum = 0.0;
                detail::schouten_component(
                    n, i, j, k,
                    [&](int r, int c, int which) { return which == 0 ? av(r, c) : bv(r, c); },
                    [&](int l, int r, int c, int which) {
                        return which == 0 ? detail::fd_partial_entry(a, p, l, r, c, ha)
                                          : detail::fd_partial_entry(b, p, l, r, c, hb);
                    },
                    [&](double u, double v) { sum += u * v; });
                t.comp[idx++] = sum;
            }
    return t;
}

/// Exterior derivative of a pointwise two-form at a point:
/// (d w)_{ijk} = d_i w_{jk} - d_j w_{ik} + d_k w_{ij}, central differences.
inline TrivectorValue exterior_derivative(const PointField& w, const Vec& p) {
    if (w.kind != PointField::Kind::twoform)
        throw DimensionMismatch("exterior_derivative expects a two-form field");
    const int n = w.dim;
    const double h = w.step_at(p);
    TrivectorValue t;
    t.n = n;
    t.comp.assign(TrivectorValue::count(n), 0.0);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                t.comp[idx++] = detail::fd_partial_entry(w, p, i, j, k, h) -
                                detail::fd_partial_entry(w, p, j, i, k, h) +
                                detail::fd_partial_entry(w, p, k, i, j, h);
    return t;
}

/// Pushforward of a bivector value through a map by its FD Jacobian:
/// J Pi J^T at f(p).  A square Jacobian close to singular is rejected.
inline Mat pushforward_bivector(const PointField& f, const Mat& pi_at_p, const Vec& p) {
    if (f.kind != PointField::Kind::map) throw DimensionMismatch("pushforward expects a map field");
    Mat jac = fd_jacobian(f.map_eval, p, f.step_at(p));
    if (jac.rows() == jac.cols()) {
        Eigen::JacobiSVD<Mat> svd(jac);
        const auto& s = svd.singularValues();
        if (s(0) == 0.0 || s(s.size() - 1) / s(0) < 1e-12)
            throw JacobianIllConditioned("pushforward Jacobian");
    }
    return jac * pi_at_p * jac.transpose();
}

namespace detail {

inline void monomials_up_to(int n, int deg, std::vector<int>& cur, int pos, int left,
                            std::vector<std::vector<int>>& out) {
    if (pos == n) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= left; ++e) {
        cur[pos] = e;
        monomials_up_to(n, deg, cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

inline double eval_monomial(const std::vector<int>& e, const Vec& x) {
    double v = 1.0;
    for (size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) v *= x(i);
    return v;
}

}

/// Relative residual of a total-degree-d polynomial fit to a scalar function
/// sampled on a deterministic grid in the cube [-r, r]^n.
inline double polynomial_fit_residual(const std::function<double(const Vec&)>& f, int n, double r,
                                      int degree, uint64_t seed = 42) {
    std::vector<Vec> pts;
    if (n <= 4) {
        const int per_axis = 4;
        std::vector<int> idx(n, 0);
        for (;;) {
            Vec p(n);
            for (int i = 0; i < n; ++i) p(i) = -r + 2.0 * r * idx[i] / (per_axis - 1);
            pts.push_back(p);
            int i = 0;
            while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
            if (i == n) break;
        }
    } else {
        Sampler s(seed);
        for (int i = 0; i < 200; ++i) pts.push_back(s.cube(n, r));
    }
    std::vector<std::vector<int>> monos;
    std::vector<int> cur(n, 0);
    detail::monomials_up_to(n, degree, cur, 0, degree, monos);
    Mat a(pts.size(), monos.size());
    Vec b(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        b(i) = f(pts[i]);
        for (size_t j = 0; j < monos.size(); ++j) a(i, j) = detail::eval_monomial(monos[j], pts[i]);
    }
    Vec coef = lstsq(a, b);
    double denom = std::max(1.0, b.cwiseAbs().maxCoeff());
    return max_abs(Vec(a * coef - b)) / denom;
}

/// Smallest total degree <= max_degree whose fit has relative residual below
/// `tol` on every matrix component of the field; throws NoFit otherwise.
inline int fit_polynomial_degree(const PointField& field, double radius, int max_degree,
                                 double tol = 1e-8, uint64_t seed = 42) {
    const int n = field.dim;
    for (int d = 0; d <= max_degree; ++d) {
        double worst = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) {
                auto comp = [&](const Vec& x) { return field.matrix_at(x)(r, c); };
                worst = std::max(worst, polynomial_fit_residual(comp, n, radius, d, seed));
            }
        if (worst <= tol) return d;
    }
    throw NoFit("no polynomial fit up to requested degree");
}

}

#endif
