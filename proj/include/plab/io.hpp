#ifndef PLAB_IO_HPP
#define PLAB_IO_HPP

#include <fstream>
#include <set>

#include <json.hpp>

#include "plab/frobenius.hpp"
#include "plab/groupoid.hpp"

namespace plab {

using nlohmann::json;

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
}

inline Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of numbers");
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InputError("expected an array of numbers");
        v(static_cast<long>(i)) = j[i].get<double>();
    }
    return v;
}

/// Rows of the JSON array become rows of the matrix.
inline Mat mat_from_json(const json& j, int expected_cols = -1) {
    if (!j.is_array()) throw InputError("expected an array of rows");
    const int rows = static_cast<int>(j.size());
    int cols = expected_cols;
    Mat m(rows, std::max(cols, 0));
    for (int r = 0; r < rows; ++r) {
        Vec row = vec_from_json(j[r]);
        if (cols < 0) {
            cols = static_cast<int>(row.size());
            m.resize(rows, cols);
        }
        if (row.size() != cols) throw InputError("ragged matrix rows");
        m.row(r) = row.transpose();
    }
    if (rows == 0 && expected_cols >= 0) m.resize(0, expected_cols);
    return m;
}

/// Column-stacked basis: the JSON lists basis vectors, one array per vector.
inline Mat basis_from_json(const json& j, int ambient) {
    if (!j.is_array()) throw InputError("expected an array of basis vectors");
    Mat m(ambient, static_cast<int>(j.size()));
    for (size_t c = 0; c < j.size(); ++c) {
        Vec v = vec_from_json(j[c]);
        if (v.size() != ambient) throw InputError("basis vector has wrong length");
        m.col(static_cast<long>(c)) = v;
    }
    return m;
}

/// Algebra schema: {"dim": n, "brackets": [{"i","j","k","value"}...],
/// "labels": [...], "name": "..."}; i < j required, duplicate (i,j,k) rejected.
inline LieAlgebra load_algebra(const json& j) {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw InputError("algebra needs an integer dim");
    const int n = j["dim"].get<int>();
    if (n <= 0) throw InputError("algebra dim must be positive");
    std::string name = j.value("name", std::string("algebra"));
    if (j.contains("labels")) {
        if (!j["labels"].is_array() || static_cast<int>(j["labels"].size()) != n)
            throw InputError("labels must list one name per basis vector");
    }
    std::vector<std::array<double, 4>> entries;
    std::set<std::array<int, 3>> seen;
    if (!j.contains("brackets") || !j["brackets"].is_array())
        throw InputError("algebra needs a brackets array");
    for (const auto& b : j["brackets"]) {
        if (!b.contains("i") || !b.contains("j") || !b.contains("k") || !b.contains("value"))
            throw InputError("bracket entries need i, j, k, value");
        int i = b["i"].get<int>(), jj = b["j"].get<int>(), k = b["k"].get<int>();
        double v = b["value"].get<double>();
        if (i < 0 || jj < 0 || k < 0 || i >= n || jj >= n || k >= n)
            throw InputError("bracket index out of range");
        if (i >= jj) throw InputError("bracket entries require i < j");
        if (!seen.insert({i, jj, k}).second)
            throw InputError("duplicate bracket entry");
        entries.push_back({static_cast<double>(i), static_cast<double>(jj),
                           static_cast<double>(k), v});
    }
    return LieAlgebra::from_entries(name, n, entries);
}

/// Transversal schema: {"lambda": [..], "directions": [[..]..]}.
inline AffineTransversal load_transversal(const json& j, const LieAlgebra& lie) {
    if (!j.contains("lambda")) throw InputError("transversal needs a lambda point");
    Vec base = vec_from_json(j["lambda"]);
    if (base.size() != lie.dim()) throw InputError("lambda has wrong dimension");
    Mat dirs(lie.dim(), 0);
    if (j.contains("directions")) dirs = basis_from_json(j["directions"], lie.dim());
    return make_transversal(lie, base, dirs);
}

/// Representation schema: {"N": int, "rho": [[[..]..]..]} indexed by basis.
inline MatrixRep load_rep(const json& j, const LieAlgebra& lie) {
    if (!j.contains("N") || !j["N"].is_number_integer())
        throw InputError("representation needs an integer N");
    const int N = j["N"].get<int>();
    if (!j.contains("rho") || !j["rho"].is_array() ||
        static_cast<int>(j["rho"].size()) != lie.dim())
        throw InputError("representation needs one rho matrix per basis vector");
    std::vector<Mat> rho;
    for (const auto& rj : j["rho"]) {
        Mat r = mat_from_json(rj, N);
        if (r.rows() != N) throw InputError("rho matrices must be N x N");
        rho.push_back(r);
    }
    return make_matrix_rep(lie, rho);
}

/// Frobenius schema: {"h_basis": [[..]..], "lambda_on_h": [..]}.
inline FrobeniusPair load_frobenius(const json& j, const LieAlgebra& lie) {
    if (!j.contains("h_basis") || !j.contains("lambda_on_h"))
        throw InputError("frobenius pair needs h_basis and lambda_on_h");
    Mat hb = basis_from_json(j["h_basis"], lie.dim());
    Vec lam = vec_from_json(j["lambda_on_h"]);
    if (lam.size() != hb.cols()) throw InputError("lambda_on_h has wrong length");
    return make_frobenius_pair(lie, hb, lam);
}

struct MorphismData {
    Mat matrix;  // codomain-dim x domain-dim
    LieAlgebra codomain;
};

/// Morphism schema: {"matrix": [[..]..], "codomain": {algebra schema}}.
inline MorphismData load_morphism(const json& j, const LieAlgebra& domain) {
    if (!j.contains("matrix") || !j.contains("codomain"))
        throw InputError("morphism needs a matrix and a codomain algebra");
    MorphismData d{mat_from_json(j["matrix"]), load_algebra(j["codomain"])};
    if (d.matrix.cols() != domain.dim() || d.matrix.rows() != d.codomain.dim())
        throw InputError("morphism matrix shape mismatch");
    return d;
}

}

#endif
