#include <algorithm>
#include <cmath>
#include <random>

#include "schurlab/errors.hpp"
#include "schurlab/schur.hpp"

namespace schurlab {

namespace {

// Gradient of X -> ||X||_q for Re tr(A^* dX), from the SVD of X.
// Tiny singular values are clamped for q < 1 where sigma^{q-1} blows up.
Matrix norm_gradient(const Svd& f, double q, double norm) {
    const Eigen::Index r = f.sigma.size();
    const double smax = r > 0 ? f.sigma(0) : 0.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(r);
    if (std::isinf(q)) {
        if (r > 0) w(0) = 1.0;
    } else {
        const double floor = 1e-12 * smax;
        for (Eigen::Index i = 0; i < r; ++i) {
            double s = f.sigma(i);
            if (q < 1.0) {
                s = std::max(s, floor);
            } else if (s <= 1e-14 * smax) {
                continue;
            }
            w(i) = std::pow(s, q - 1.0);
        }
        w *= std::pow(norm, 1.0 - q);
    }
    return f.u * w.asDiagonal() * f.v.adjoint();
}

// argmax of Re tr(X^* M) over the unit ball of S_q.
Matrix dual_map(const Matrix& m, double q) {
    const Svd f = svd(m);
    const Eigen::Index r = f.sigma.size();
    if (r == 0 || f.sigma(0) == 0.0) return Matrix::Zero(m.rows(), m.cols());
    Eigen::VectorXd w = Eigen::VectorXd::Zero(r);
    if (q == 1.0) {
        w(0) = 1.0;
    } else if (std::isinf(q)) {
        for (Eigen::Index i = 0; i < r; ++i) w(i) = f.sigma(i) > 1e-14 * f.sigma(0) ? 1.0 : 0.0;
    } else {
        const double conj = q / (q - 1.0);
        for (Eigen::Index i = 0; i < r; ++i) w(i) = std::pow(f.sigma(i) / f.sigma(0), conj - 1.0);
    }
    return f.u * w.asDiagonal() * f.v.adjoint();
}

Matrix normalized(const Matrix& x, double q) {
    const double nrm = schatten_norm(x, q);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return x;
    return x / nrm;
}

struct Evaluation {
    double ratio = 0.0;
    Matrix y;
};

class Objective {
public:
    Objective(const std::vector<complex>& psi, const ExponentTuple& exps) : psi_(psi), exps_(exps) {}

    Evaluation evaluate(const std::vector<Matrix>& xs) const {
        Evaluation e;
        e.y = schur_contract(psi_, xs);
        double den = 1.0;
        for (std::size_t i = 0; i < xs.size(); ++i) den *= schatten_norm(xs[i], exps_[i]);
        const double num = schatten_norm(e.y, exps_.p());
        e.ratio = den > 0.0 ? num / den : 0.0;
        if (!std::isfinite(e.ratio)) e.ratio = 0.0;
        return e;
    }

    const std::vector<complex>& psi() const { return psi_; }
    const ExponentTuple& exps() const { return exps_; }

private:
    const std::vector<complex>& psi_;
    const ExponentTuple& exps_;
};

Matrix matrix_unit(Eigen::Index n, Eigen::Index a, Eigen::Index b) {
    Matrix e = Matrix::Zero(n, n);
    e(a, b) = 1.0;
    return e;
}

std::vector<Matrix> initial_point(int restart, std::size_t arity, Eigen::Index n, const std::vector<complex>& psi,
                                  const ExponentTuple& exps, std::mt19937_64& rng) {
    std::vector<Matrix> xs;
    if (restart == 0) {
        // Matrix units along the largest |psi| entry certify max|psi| at once.
        std::size_t best = 0;
        for (std::size_t i = 1; i < psi.size(); ++i)
            if (std::abs(psi[i]) > std::abs(psi[best])) best = i;
        std::vector<Eigen::Index> idx(arity + 1);
        for (std::size_t s = arity + 1; s-- > 0;) {
            idx[s] = static_cast<Eigen::Index>(best % static_cast<std::size_t>(n));
            best /= static_cast<std::size_t>(n);
        }
        for (std::size_t m = 0; m < arity; ++m) xs.push_back(matrix_unit(n, idx[m], idx[m + 1]));
        return xs;
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t m = 0; m < arity; ++m) {
        Matrix x(n, n);
        if (restart == 1) {
            x.setConstant(complex(1.0, 0.0));
        } else {
            for (Eigen::Index c = 0; c < n; ++c)
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    x(r, c) = complex(re, im);
                }
        }
        xs.push_back(normalized(x, exps[m]));
    }
    return xs;
}

struct RestartResult {
    double value = 0.0;
    std::vector<Matrix> xs;
    int iterations = 0;
    bool converged = false;
};

RestartResult run_restart(const Objective& obj, std::vector<Matrix> xs, const EstimateOptions& opts,
                          std::vector<double>& history, double& global_best) {
    const std::size_t arity = xs.size();
    const ExponentTuple& exps = obj.exps();
    Evaluation cur = obj.evaluate(xs);
    std::vector<double> step(arity, opts.step);
    RestartResult res;
    int stalled = 0;
    for (int it = 0; it < opts.max_iters; ++it) {
        const double before = cur.ratio;
        for (std::size_t j = 0; j < arity; ++j) {
            if (cur.ratio <= 0.0) break;
            const Svd fy = svd(cur.y);
            const double ny = schatten_norm_from_sigma(fy.sigma, exps.p());
            if (!(ny > 0.0)) break;
            const Matrix gy = norm_gradient(fy, exps.p(), ny);
            const Matrix back = schur_contract_adjoint(obj.psi(), xs, j, gy);

            const Svd fx = svd(xs[j]);
            const double nx = schatten_norm_from_sigma(fx.sigma, exps[j]);
            Matrix dir = back / ny - norm_gradient(fx, exps[j], nx) / nx;
            const double dn = dir.norm();

            auto try_candidate = [&](Matrix cand) {
                cand = normalized(cand, exps[j]);
                if (!cand.allFinite()) return false;
                std::swap(xs[j], cand);
                Evaluation e = obj.evaluate(xs);
                if (e.ratio > cur.ratio) {
                    cur = std::move(e);
                    return true;
                }
                std::swap(xs[j], cand);
                return false;
            };

            if (dn > 0.0 && std::isfinite(dn)) {
                const Matrix cand = xs[j] + (step[j] * xs[j].norm() / dn) * dir;
                if (try_candidate(cand))
                    step[j] = std::min(step[j] * 1.2, 4.0);
                else
                    step[j] *= 0.8;
            }
            if (exps[j] >= 1.0) try_candidate(dual_map(back, exps[j]));
        }
        res.iterations = it + 1;
        global_best = std::max(global_best, cur.ratio);
        history.push_back(global_best);
        const double gain = cur.ratio - before;
        if (gain <= opts.tol * std::max(before, 1e-300)) {
            if (++stalled >= 5) {
                res.converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
        const double max_step = *std::max_element(step.begin(), step.end());
        if (max_step < 1e-10) {
            res.converged = true;
            break;
        }
    }
    res.value = cur.ratio;
    res.xs = std::move(xs);
    return res;
}

}  // namespace

double witness_ratio(const SymbolGrid& psi, const ExponentTuple& exps, const std::vector<KernelMatrix>& witnesses) {
    if (witnesses.size() != static_cast<std::size_t>(psi.arity()) || exps.size() != witnesses.size())
        throw ArityMismatch("witness count must equal the symbol arity and exponent count");
    const SymbolGrid dense = psi.materialize();
    std::vector<Matrix> xs;
    for (const auto& w : witnesses) xs.push_back(w.entries());
    return Objective(*dense.values(), exps).evaluate(xs).ratio;
}

NormEstimate estimate_norm(const SymbolGrid& psi, const ExponentTuple& exps, const EstimateOptions& opts) {
    if (psi.arity() < 1) throw ArityMismatch("estimate_norm needs a symbol of arity >= 1");
    if (exps.size() != static_cast<std::size_t>(psi.arity()))
        throw ArityMismatch("symbol arity " + std::to_string(psi.arity()) + " but " +
                            std::to_string(exps.size()) + " exponents");
    if (opts.restarts < 1 || opts.max_iters < 0 || !(opts.step > 0.0) || !(opts.tol >= 0.0))
        throw InvalidArgument("estimate_norm: invalid options");

    const SymbolGrid dense = psi.materialize();
    const std::vector<complex>& values = *dense.values();
    const auto n = static_cast<Eigen::Index>(psi.points());
    const auto arity = static_cast<std::size_t>(psi.arity());
    const Objective obj(values, exps);

    NormEstimate out;
    out.seed = opts.seed;
    if (dense.sup_abs() == 0.0) {
        out.degenerate = true;
        out.converged = true;
        for (std::size_t m = 0; m < arity; ++m) out.witnesses.emplace_back(matrix_unit(n, 0, 0), psi.grid());
        out.value = witness_ratio(psi, exps, out.witnesses);
        return out;
    }

    double global_best = 0.0;
    std::vector<Matrix> best_xs;
    double best_value = -1.0;
    bool all_converged = true;
    for (int r = 0; r < opts.restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        auto xs = initial_point(r, arity, n, values, exps, rng);
        RestartResult res = run_restart(obj, std::move(xs), opts, out.history, global_best);
        out.iterations += res.iterations;
        all_converged = all_converged && res.converged;
        // Strict comparison keeps the earliest restart on ties, so the
        // result does not depend on anything but (seed, restart index).
        if (res.value > best_value) {
            best_value = res.value;
            best_xs = std::move(res.xs);
        }
    }
    for (std::size_t m = 0; m < arity; ++m) out.witnesses.emplace_back(best_xs[m], psi.grid());
    out.value = witness_ratio(psi, exps, out.witnesses);
    out.converged = all_converged;
    return out;
}

}  // namespace schurlab
