#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pme/coupling.hpp"
#include "pme/errors.hpp"
#include "pme/penalty.hpp"
#include "pme/perspective.hpp"

namespace pme {

enum class OperatorKind {
    Dense,       // explicit matrix
    Select,      // rows e_i for i in index
    Difference,  // rows e_{i+1} - e_i for i in index
};

/// Linear map R^p -> R^rows used by a penalty block.
struct LinearOperator {
    OperatorKind kind = OperatorKind::Dense;
    Matrix dense;
    std::vector<int> index;
    int cols = 0;

    static LinearOperator from_matrix(Matrix m) {
        LinearOperator op;
        op.cols = static_cast<int>(m.cols());
        op.dense = std::move(m);
        return op;
    }
    static LinearOperator select(std::vector<int> idx, int p) { return {OperatorKind::Select, {}, std::move(idx), p}; }
    static LinearOperator difference(std::vector<int> idx, int p) {
        return {OperatorKind::Difference, {}, std::move(idx), p};
    }

    Eigen::Index rows() const {
        return kind == OperatorKind::Dense ? dense.rows() : static_cast<Eigen::Index>(index.size());
    }

    Matrix to_dense() const {
        if (kind == OperatorKind::Dense) return dense;
        Matrix m = Matrix::Zero(rows(), cols);
        for (std::size_t r = 0; r < index.size(); ++r) {
            const auto i = static_cast<Eigen::Index>(r);
            if (kind == OperatorKind::Select) {
                m(i, index[r]) = 1.0;
            } else {
                m(i, index[r]) = -1.0;
                m(i, index[r] + 1) = 1.0;
            }
        }
        return m;
    }

    Vector apply(const Vector& b) const {
        if (kind == OperatorKind::Dense) return dense * b;
        Vector out(rows());
        for (std::size_t r = 0; r < index.size(); ++r) {
            const auto i = static_cast<Eigen::Index>(r);
            out[i] = (kind == OperatorKind::Select) ? b[index[r]] : b[index[r] + 1] - b[index[r]];
        }
        return out;
    }

    std::vector<std::string> check(int p) const {
        std::vector<std::string> out;
        if (cols != p) out.push_back("operator has " + std::to_string(cols) + " columns, expected " + std::to_string(p));
        if (kind == OperatorKind::Dense && dense.cols() != cols) out.push_back("dense operator column count mismatch");
        for (int i : index) {
            const int last = (kind == OperatorKind::Difference) ? i + 1 : i;
            if (i < 0 || last >= cols) out.push_back("operator index " + std::to_string(i) + " out of range");
        }
        return out;
    }
};

struct DataBlock {
    Matrix X;
    Vector y;
    PerspectiveAtom atom;
    std::vector<int> samples;  // original row index of every row of X
};

struct PenaltyBlock {
    LinearOperator L;
    PerspectiveAtom atom;
};

/// Structured form of the perspective M-estimation objective.
struct ProblemSpec {
    std::string model;
    int p = 0;
    std::vector<DataBlock> data;
    std::vector<PenaltyBlock> penalties;
    SeparablePenalty theta;
    ScaleCoupling sigma_coupling;
    ScaleCoupling tau_coupling;

    int N() const { return static_cast<int>(data.size()); }
    int P() const { return static_cast<int>(penalties.size()); }
    Eigen::Index n() const {
        Eigen::Index total = 0;
        for (const auto& d : data) total += d.X.rows();
        return total;
    }
};

/// Keyed model parameters plus the optional group partition and weights.
struct ModelParams {
    std::map<std::string, double> values;
    std::vector<std::vector<int>> groups;  // 0-based sample indices
    std::vector<double> weights;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    double get(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) throw MissingParamError("missing model parameter '" + key + "'");
        return it->second;
    }
    double get_or(const std::string& key, double fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
    ModelParams with(const std::string& key, double v) const {
        ModelParams out = *this;
        out.values[key] = v;
        return out;
    }
};

struct ModelInfo {
    std::string name;
    std::vector<std::string> required;
    std::vector<std::string> optional;
    bool uses_groups = false;
    bool uses_weights = false;
    std::string path_key = "alpha1";
};

inline const std::vector<ModelInfo>& model_catalog() {
    static const std::vector<ModelInfo> catalog = {
        {"lasso", {"alpha1"}, {}, false, false, "alpha1"},
        {"elastic_net", {"alpha1", "alpha2"}, {}, false, false, "alpha1"},
        {"ridge", {"alpha2"}, {}, false, false, "alpha2"},
        {"bridge", {"alpha2", "r"}, {"alpha1"}, false, false, "alpha2"},
        {"lad_lasso", {"alpha1"}, {}, false, false, "alpha1"},
        {"fused_lasso", {"alpha1", "alpha2"}, {}, false, false, "alpha1"},
        {"smooth_lasso", {"alpha1", "alpha2"}, {}, false, false, "alpha1"},
        {"owen", {"alpha1"}, {"rho1", "rho2", "delta1", "delta2"}, false, false, "alpha1"},
        {"adaptive_berhu", {"alpha"}, {"rho1", "rho2", "delta1"}, false, true, "alpha"},
        {"scaled_lasso", {"alpha1"}, {"eps"}, false, false, "alpha1"},
        {"sqrt_elastic_net", {"alpha1", "alpha2"}, {"q", "eps"}, false, false, "alpha1"},
        {"natural_lasso", {"alpha1"}, {}, false, false, "alpha1"},
        {"nu_svr", {"alpha", "eps"}, {}, false, false, "alpha"},
        {"het_scaled_lasso", {"alpha1"}, {"q", "eps"}, true, false, "alpha1"},
        {"het_huber", {"alpha1"}, {"alpha2", "q", "delta", "rho1", "rho2"}, true, false, "alpha1"},
    };
    return catalog;
}

inline const ModelInfo& model_info(const std::string& name) {
    for (const auto& m : model_catalog())
        if (m.name == name) return m;
    throw UnknownModelError("unknown model '" + name + "'");
}

/// Parameter keys a model accepts.
inline std::vector<std::string> model_param_keys(const std::string& name) {
    const auto& info = model_info(name);
    std::vector<std::string> keys = info.required;
    keys.insert(keys.end(), info.optional.begin(), info.optional.end());
    return keys;
}

inline constexpr double kDefaultHuberRho = 1.345;
inline constexpr double kDefaultBerhuRho = 1.0;
inline constexpr double kDefaultHuberShift = 0.5;

namespace detail {

inline void check_partition(const std::vector<std::vector<int>>& groups, Eigen::Index n) {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& g : groups) {
        if (g.empty()) throw PartitionError("group partition contains an empty group");
        for (int i : g) {
            if (i < 0 || i >= n)
                throw PartitionError("group index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
            if (seen[static_cast<std::size_t>(i)]++) throw PartitionError("sample " + std::to_string(i) + " appears twice");
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (!seen[static_cast<std::size_t>(i)]) throw PartitionError("sample " + std::to_string(i) + " is in no group");
}

inline std::vector<std::vector<int>> groups_or_all(const ModelParams& params, Eigen::Index n) {
    if (!params.groups.empty()) {
        check_partition(params.groups, n);
        return params.groups;
    }
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    return {all};
}

inline DataBlock whole_block(const Matrix& X, const Vector& y, PerspectiveAtom atom) {
    DataBlock d{X, y, atom, {}};
    d.samples.resize(static_cast<std::size_t>(X.rows()));
    std::iota(d.samples.begin(), d.samples.end(), 0);
    return d;
}

inline std::vector<DataBlock> row_blocks(const Matrix& X, const Vector& y, const PerspectiveAtom& atom) {
    std::vector<DataBlock> out;
    out.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out.push_back({X.row(i), y.segment(i, 1), atom, {static_cast<int>(i)}});
    return out;
}

inline std::vector<PenaltyBlock> coordinate_blocks(int p, const std::vector<PerspectiveAtom>& atoms) {
    std::vector<PenaltyBlock> out;
    out.reserve(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) out.push_back({LinearOperator::select({i}, p), atoms[static_cast<std::size_t>(i)]});
    return out;
}

inline ScaleCoupling free_or_floor(const ModelParams& params) {
    if (params.has("eps")) return ScaleCoupling::lower_bound(params.get("eps"));
    return ScaleCoupling::free();
}

inline void check_nonneg(const ModelParams& params, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (params.has(k) && !(params.get(k) >= 0.0))
            throw ParameterError(std::string("model parameter '") + k + "' must be >= 0");
}

}  // namespace detail

/// Builds the named instance of the perspective M-estimation problem.
inline ProblemSpec build_model(const std::string& name, const ModelParams& params, const Matrix& X, const Vector& y) {
    const auto& info = model_info(name);
    if (X.rows() != y.size())
        throw DimensionError("X has " + std::to_string(X.rows()) + " rows but y has " + std::to_string(y.size()) +
                             " entries");
    if (X.rows() == 0 || X.cols() == 0) throw DimensionError("empty design matrix");
    {
        const auto keys = model_param_keys(name);
        for (const auto& [k, v] : params.values) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                throw ParameterError("model '" + name + "' does not take parameter '" + k + "'");
            if (!std::isfinite(v)) throw ParameterError("model parameter '" + k + "' is not finite");
        }
        for (const auto& k : info.required) params.get(k);
    }
    if (!params.groups.empty() && !info.uses_groups)
        throw ParameterError("model '" + name + "' does not take a group partition");
    if (!params.weights.empty() && !info.uses_weights)
        throw ParameterError("model '" + name + "' does not take weights");
    detail::check_nonneg(params, {"alpha", "alpha1", "alpha2"});

    const Eigen::Index n = X.rows();
    const int p = static_cast<int>(X.cols());
    const double dn = static_cast<double>(n);
    const double dp = static_cast<double>(p);

    ProblemSpec spec;
    spec.model = name;
    spec.p = p;

    auto least_squares_data = [&]() {
        spec.data.push_back(detail::whole_block(X, y, PerspectiveAtom::plain_sq_l2(1.0)));
        spec.sigma_coupling = ScaleCoupling::pinned(1.0);
    };

    if (name == "lasso") {
        least_squares_data();
        spec.theta = SeparablePenalty::l1(params.get("alpha1"));
    } else if (name == "elastic_net") {
        least_squares_data();
        spec.theta = SeparablePenalty::elastic_net(params.get("alpha1"), params.get("alpha2"));
    } else if (name == "ridge") {
        least_squares_data();
        spec.theta = SeparablePenalty::sq_l2(params.get("alpha2"));
    } else if (name == "bridge") {
        least_squares_data();
        const double r = params.get("r");
        if (!(r >= 1.0 && r <= 2.0)) throw ParameterError("bridge exponent r must lie in [1, 2]");
        spec.theta = SeparablePenalty::power_r(params.get_or("alpha1", 0.0), params.get("alpha2"), r);
    } else if (name == "lad_lasso") {
        spec.data.push_back(detail::whole_block(X, y, PerspectiveAtom::abs_sum(0.0, 1.0)));
        spec.sigma_coupling = ScaleCoupling::pinned(1.0);
        spec.theta = SeparablePenalty::l1(params.get("alpha1"));
    } else if (name == "fused_lasso" || name == "smooth_lasso") {
        least_squares_data();
        const double a2 = params.get("alpha2");
        PerspectiveAtom diff_atom;
        if (name == "fused_lasso") {
            diff_atom = PerspectiveAtom::norm(0.0, a2);
        } else {
            diff_atom = (a2 > 0.0) ? PerspectiveAtom::plain_sq_l2(a2) : PerspectiveAtom::zero();
        }
        for (int i = 0; i + 1 < p; ++i) spec.penalties.push_back({LinearOperator::difference({i}, p), diff_atom});
        spec.tau_coupling = ScaleCoupling::pinned(1.0);
        spec.theta = SeparablePenalty::l1(params.get("alpha1"));
    } else if (name == "owen") {
        const double rho1 = params.get_or("rho1", kDefaultHuberRho);
        const double rho2 = params.get_or("rho2", kDefaultBerhuRho);
        const auto huber = PerspectiveAtom::huber(params.get_or("delta1", dn), rho1, 2.0);
        spec.data = detail::row_blocks(X, y, huber);
        spec.sigma_coupling = ScaleCoupling::all_equal(static_cast<int>(n));
        const auto berhu = PerspectiveAtom::berhu_std(params.get_or("delta2", dp), rho2).times(params.get("alpha1"));
        spec.penalties = detail::coordinate_blocks(p, std::vector<PerspectiveAtom>(static_cast<std::size_t>(p), berhu));
        spec.tau_coupling = ScaleCoupling::all_equal(p);
    } else if (name == "adaptive_berhu") {
        const double rho1 = params.get_or("rho1", kDefaultHuberRho);
        const double rho2 = params.get_or("rho2", kDefaultBerhuRho);
        const double a = params.get("alpha");
        std::vector<double> omega = params.weights;
        if (omega.empty()) omega.assign(static_cast<std::size_t>(p), 1.0);
        if (static_cast<int>(omega.size()) != p)
            throw DimensionError("adaptive berhu needs " + std::to_string(p) + " weights");
        std::vector<PerspectiveAtom> atoms;
        for (double w : omega) {
            if (!(w > 0.0)) throw ParameterError("adaptive berhu weights must be > 0");
            atoms.push_back(PerspectiveAtom::berhu_std(1.0 / (w * w), rho2).times(a * w));
        }
        spec.data = detail::row_blocks(X, y, PerspectiveAtom::huber(params.get_or("delta1", dn), rho1, 2.0));
        spec.sigma_coupling = ScaleCoupling::all_equal(static_cast<int>(n));
        spec.penalties = detail::coordinate_blocks(p, atoms);
        spec.tau_coupling = ScaleCoupling::all_equal(p);
    } else if (name == "scaled_lasso" || name == "sqrt_elastic_net") {
        spec.data.push_back(detail::whole_block(X, y, PerspectiveAtom::scaled_lasso(dn / 2.0, 2.0, 2.0)));
        spec.sigma_coupling = detail::free_or_floor(params);
        if (name == "scaled_lasso") {
            spec.theta = SeparablePenalty::l1(params.get("alpha1"));
        } else {
            const double q = params.get_or("q", 2.0);
            if (q == 2.0) {
                spec.theta = SeparablePenalty::elastic_net(params.get("alpha1"), params.get("alpha2"));
            } else if (q == 1.0) {
                spec.theta = SeparablePenalty::l1_plus_l2_norm(params.get("alpha1"), params.get("alpha2"));
            } else {
                throw ParameterError("sqrt_elastic_net exponent q must be 1 or 2");
            }
        }
    } else if (name == "natural_lasso") {
        const double ynorm2 = y.squaredNorm();
        if (!(ynorm2 > 0.0)) throw ParameterError("natural lasso needs a nonzero response");
        spec.data.push_back(detail::whole_block(X, y, PerspectiveAtom::zero()));
        spec.sigma_coupling = ScaleCoupling::free();
        spec.penalties.push_back({LinearOperator::from_matrix(X), PerspectiveAtom::scaled_lasso(0.0, 2.0 * dn, 2.0)});
        spec.tau_coupling = ScaleCoupling::natural_lasso_barrier(ynorm2 / (2.0 * dn));
        spec.theta = SeparablePenalty::l1_linear_shift(params.get("alpha1"), X.transpose() * y / dn);
    } else if (name == "nu_svr") {
        spec.data = detail::row_blocks(X, y, PerspectiveAtom::vapnik(params.get("alpha"), params.get("eps")));
        spec.sigma_coupling = ScaleCoupling::all_equal(static_cast<int>(n));
        spec.theta = SeparablePenalty::sq_l2(0.5);
    } else if (name == "het_scaled_lasso") {
        const double q = params.get_or("q", 2.0);
        const auto atom = PerspectiveAtom::scaled_lasso(0.5, 1.0, q);
        for (const auto& g : detail::groups_or_all(params, n)) {
            DataBlock d;
            d.X.resize(static_cast<Eigen::Index>(g.size()), p);
            d.y.resize(static_cast<Eigen::Index>(g.size()));
            for (std::size_t r = 0; r < g.size(); ++r) {
                d.X.row(static_cast<Eigen::Index>(r)) = X.row(g[r]);
                d.y[static_cast<Eigen::Index>(r)] = y[g[r]];
            }
            d.atom = atom;
            d.samples = g;
            spec.data.push_back(std::move(d));
        }
        spec.sigma_coupling = detail::free_or_floor(params);
        spec.theta = SeparablePenalty::l1(params.get("alpha1"));
    } else if (name == "het_huber") {
        const double q = params.get_or("q", 2.0);
        const auto groups = detail::groups_or_all(params, n);
        const auto huber = PerspectiveAtom::huber(params.get_or("delta", kDefaultHuberShift),
                                                  params.get_or("rho1", kDefaultHuberRho), q);
        spec.data = detail::row_blocks(X, y, huber);
        spec.sigma_coupling = ScaleCoupling::group_average(groups);
        const double a2 = params.get_or("alpha2", 0.0);
        if (a2 > 0.0) {
            const auto berhu = PerspectiveAtom::berhu_std(dp, params.get_or("rho2", kDefaultBerhuRho)).times(a2);
            spec.penalties = detail::coordinate_blocks(p, std::vector<PerspectiveAtom>(static_cast<std::size_t>(p), berhu));
            spec.tau_coupling = ScaleCoupling::all_equal(p);
        }
        spec.theta = SeparablePenalty::l1(params.get("alpha1"));
    } else {
        throw UnknownModelError("unknown model '" + name + "'");
    }
    return spec;
}

/// Human-readable violations of the problem invariants; empty when valid.
inline std::vector<std::string> validate_spec(const ProblemSpec& spec) {
    std::vector<std::string> out;
    auto add = [&out](const std::string& prefix, const std::vector<std::string>& msgs) {
        for (const auto& m : msgs) out.push_back(prefix + m);
    };
    if (spec.p <= 0) out.push_back("p must be positive");
    if (spec.data.empty()) out.push_back("at least one data block is required");
    auto check_atom = [&](const std::string& where, const PerspectiveAtom& a) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) out.push_back(where + "atom multiplier must be >= 0");
        const bool needs_q = a.kind == AtomKind::ScaledLasso || a.kind == AtomKind::Huber || a.kind == AtomKind::Berhu;
        if (needs_q && (!(a.q > 1.0) || std::abs(a.qstar * (a.q - 1.0) - a.q) > 1e-12))
            out.push_back(where + "inconsistent exponent pair (q, q*)");
        switch (a.kind) {
            case AtomKind::ScaledLasso:
                if (!(a.alpha >= 0.0) || !(a.kappa > 0.0)) out.push_back(where + "scaled lasso needs alpha >= 0, kappa > 0");
                break;
            case AtomKind::Huber:
                if (!(a.alpha > 0.0) || !(a.rho > 0.0)) out.push_back(where + "huber needs alpha > 0, rho > 0");
                break;
            case AtomKind::Berhu:
            case AtomKind::BerhuStd:
                if (!(a.alpha > 0.0) || !(a.rho > 0.0) || !(a.kappa > 0.0))
                    out.push_back(where + "berhu needs alpha, rho, kappa > 0");
                break;
            case AtomKind::Vapnik:
                if (!(a.alpha > 0.0) || !(a.eps > 0.0)) out.push_back(where + "vapnik needs alpha > 0, eps > 0");
                break;
            case AtomKind::Norm:
            case AtomKind::AbsSum:
                if (!(a.alpha >= 0.0) || !(a.rho >= 0.0)) out.push_back(where + "norm atom needs alpha, rho >= 0");
                break;
            case AtomKind::PlainSqL2:
            case AtomKind::Zero: break;
        }
    };
    for (std::size_t i = 0; i < spec.data.size(); ++i) {
        const auto& d = spec.data[i];
        const std::string where = "data block " + std::to_string(i) + ": ";
        if (d.X.rows() == 0) out.push_back(where + "no rows");
        if (d.X.cols() != spec.p)
            out.push_back(where + "X has " + std::to_string(d.X.cols()) + " columns, expected " + std::to_string(spec.p));
        if (d.y.size() != d.X.rows())
            out.push_back(where + "X has " + std::to_string(d.X.rows()) + " rows but y has " + std::to_string(d.y.size()) +
                          " entries");
        if (!d.samples.empty() && static_cast<Eigen::Index>(d.samples.size()) != d.X.rows())
            out.push_back(where + "sample index list length differs from row count");
        if (!d.X.allFinite() || !d.y.allFinite()) out.push_back(where + "non-finite data");
        check_atom(where, d.atom);
        if (d.atom.kind == AtomKind::PlainSqL2 && spec.sigma_coupling.kind != CouplingKind::Pinned)
            out.push_back(where + "squared-norm atom requires a pinned scale");
    }
    for (std::size_t i = 0; i < spec.penalties.size(); ++i) {
        const auto& b = spec.penalties[i];
        const std::string where = "penalty block " + std::to_string(i) + ": ";
        add(where, b.L.check(spec.p));
        if (b.L.rows() == 0) out.push_back(where + "operator has no rows");
        check_atom(where, b.atom);
        if (b.atom.kind == AtomKind::PlainSqL2 && spec.tau_coupling.kind != CouplingKind::Pinned)
            out.push_back(where + "squared-norm atom requires a pinned scale");
    }
    add("theta: ", validate(spec.theta, spec.p));
    add("sigma coupling: ", validate(spec.sigma_coupling, spec.N()));
    if (!spec.penalties.empty()) add("tau coupling: ", validate(spec.tau_coupling, spec.P()));
    return out;
}

/// Objective value at (s, t, b), computed directly from the block structure.
inline double evaluate_objective(const ProblemSpec& spec, const Vector& s, const Vector& t, const Vector& b) {
    if (s.size() != spec.N() || t.size() != spec.P() || b.size() != spec.p)
        throw ShapeError("evaluate_objective: argument sizes do not match the problem");
    double total = eval_scale_coupling(spec.sigma_coupling, s) + eval_penalty(spec.theta, b);
    if (spec.P() > 0) total += eval_scale_coupling(spec.tau_coupling, t);
    for (int i = 0; i < spec.N(); ++i) {
        const auto& d = spec.data[static_cast<std::size_t>(i)];
        total += eval_perspective(d.atom, s[i], (d.X * b - d.y).eval());
    }
    for (int i = 0; i < spec.P(); ++i) {
        const auto& pb = spec.penalties[static_cast<std::size_t>(i)];
        total += eval_perspective(pb.atom, t[i], pb.L.apply(b));
    }
    return total;
}

/// Scale of every original sample under the fitted block scales.
inline Vector per_sample_scale(const ProblemSpec& spec, const Vector& s) {
    const Eigen::Index n = spec.n();
    Vector out = Vector::Zero(n);
    for (int i = 0; i < spec.N(); ++i) {
        const auto& d = spec.data[static_cast<std::size_t>(i)];
        for (int row : d.samples) out[row] = s[i];
    }
    return out;
}

}  // namespace pme
