#pragma once

#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "pme/errors.hpp"
#include "pme/model.hpp"

namespace pme {

/// Cholesky factor of Id + A A^T.
struct GramFactor {
    Eigen::LLT<Matrix> llt;

    Matrix lower() const { return llt.matrixL(); }
};

inline GramFactor factorize_gram(const Matrix& A) {
    if (!A.allFinite()) throw NumericalError("factorize_gram: A has non-finite entries");
    Matrix G = A * A.transpose();
    G.diagonal().array() += 1.0;
    GramFactor f;
    f.llt.compute(G);
    if (f.llt.info() != Eigen::Success) throw NumericalError("factorize_gram: Cholesky factorization failed");
    return f;
}

/// A^T (Id + A A^T)^{-1} q.
inline Vector apply_Q(const GramFactor& f, const Matrix& A, const Vector& q) {
    if (q.size() != A.rows() || f.llt.rows() != A.rows())
        throw ShapeError("apply_Q: vector of length " + std::to_string(q.size()) + " for A with " +
                         std::to_string(A.rows()) + " rows");
    return A.transpose() * f.llt.solve(q);
}

/// Row range of one block inside the stacked operator.
struct BlockRange {
    Eigen::Index offset = 0;
    Eigen::Index rows = 0;
    bool is_data = true;
    int index = 0;  // position among data blocks or among penalty blocks
};

struct StackedProblem {
    Matrix A;                        // data operators first, then penalty operators
    Vector w;                        // y_i on data rows, 0 on penalty rows
    std::vector<BlockRange> blocks;  // N data ranges then P penalty ranges
    GramFactor gram;
    int N = 0;
    int P = 0;

    Eigen::Index m() const { return A.rows(); }

    /// Block that owns flat row `row`.
    const BlockRange& block_of_row(Eigen::Index row) const {
        for (const auto& b : blocks)
            if (row >= b.offset && row < b.offset + b.rows) return b;
        throw ShapeError("row " + std::to_string(row) + " outside the stacked operator");
    }
};

inline StackedProblem assemble_stacked(const ProblemSpec& spec) {
    const auto diagnostics = validate_spec(spec);
    if (!diagnostics.empty()) {
        std::string msg = "assemble_stacked: invalid problem";
        for (const auto& d : diagnostics) msg += "; " + d;
        throw DimensionError(msg);
    }
    StackedProblem sp;
    sp.N = spec.N();
    sp.P = spec.P();
    Eigen::Index m = 0;
    for (const auto& d : spec.data) m += d.X.rows();
    for (const auto& b : spec.penalties) m += b.L.rows();
    sp.A.resize(m, spec.p);
    sp.w = Vector::Zero(m);
    Eigen::Index off = 0;
    for (int i = 0; i < sp.N; ++i) {
        const auto& d = spec.data[static_cast<std::size_t>(i)];
        sp.A.middleRows(off, d.X.rows()) = d.X;
        sp.w.segment(off, d.X.rows()) = d.y;
        sp.blocks.push_back({off, d.X.rows(), true, i});
        off += d.X.rows();
    }
    for (int i = 0; i < sp.P; ++i) {
        const auto& b = spec.penalties[static_cast<std::size_t>(i)];
        sp.A.middleRows(off, b.L.rows()) = b.L.to_dense();
        sp.blocks.push_back({off, b.L.rows(), false, i});
        off += b.L.rows();
    }
    sp.gram = factorize_gram(sp.A);
    return sp;
}

}  // namespace pme
