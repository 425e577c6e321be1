#include "schurlab/torus.hpp"

#include <algorithm>
#include <cmath>

#include "schurlab/errors.hpp"

namespace schurlab {

namespace {

complex ipow(complex z, int k) {
    if (k < 0) return 1.0 / ipow(z, -k);
    complex r(1.0, 0.0);
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

}  // namespace

FourierSeries::FourierSeries(int arity) : arity_(arity) {
    if (arity_ < 0) throw InvalidArgument("FourierSeries arity must be >= 0");
}

int FourierSeries::truncation() const noexcept {
    int k = 0;
    for (const auto& [idx, c] : coeffs_)
        for (int v : idx) k = std::max(k, std::abs(v));
    return k;
}

void FourierSeries::add(const Multi& k, complex c) {
    if (k.size() != static_cast<std::size_t>(arity_) + 1)
        throw ArityMismatch("coefficient tuple of length " + std::to_string(k.size()) + " for arity " +
                            std::to_string(arity_));
    if (c == complex{}) return;
    auto [it, inserted] = coeffs_.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second == complex{}) coeffs_.erase(it);
    }
}

complex FourierSeries::at(const Multi& k) const {
    const auto it = coeffs_.find(k);
    return it == coeffs_.end() ? complex{} : it->second;
}

complex FourierSeries::eval(std::span<const complex> z) const {
    if (z.size() != static_cast<std::size_t>(arity_) + 1) throw ArityMismatch("wrong number of torus points");
    complex acc{};
    for (const auto& [idx, c] : coeffs_) {
        complex term = c;
        for (std::size_t i = 0; i < idx.size(); ++i) term *= ipow(z[i], idx[i]);
        acc += term;
    }
    return acc;
}

double FourierSeries::lp_norm(double p) const {
    if (!(p > 0.0)) throw InvalidArgument("lp_norm needs p > 0");
    std::vector<double> mags;
    mags.reserve(coeffs_.size());
    for (const auto& [idx, c] : coeffs_) mags.push_back(std::abs(c));
    return schatten_norm_from_sigma(mags, p);
}

Eigen::VectorXcd DiagonalUnitary::power(int k) const {
    Eigen::VectorXcd d(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t i = 0; i < phases.size(); ++i)
        d(static_cast<Eigen::Index>(i)) = std::polar(1.0, static_cast<double>(k) * phases[i]);
    return d;
}

Matrix DiagonalUnitary::matrix() const { return power(1).asDiagonal(); }

Matrix moi_apply(const FourierSeries& series, const DiagonalUnitary& u, const std::vector<Matrix>& xs) {
    const auto n = static_cast<Eigen::Index>(u.size());
    if (xs.size() != static_cast<std::size_t>(series.arity()) || xs.empty())
        throw DimensionMismatch("series of arity " + std::to_string(series.arity()) + " applied to " +
                                std::to_string(xs.size()) + " matrices");
    for (const auto& x : xs)
        if (x.rows() != n || x.cols() != n) throw DimensionMismatch("matrices must match the unitary");

    // Cache U^k diagonals; the same exponents recur across tuples.
    std::map<int, Eigen::VectorXcd> powers;
    auto pw = [&](int k) -> const Eigen::VectorXcd& {
        auto it = powers.find(k);
        if (it == powers.end()) it = powers.emplace(k, u.power(k)).first;
        return it->second;
    };

    Matrix out = Matrix::Zero(n, n);
    for (const auto& [idx, c] : series.coeffs()) {
        // U^{k_0} x_1 U^{k_1}: row scaling, then column scaling after each factor.
        Matrix acc = pw(idx[0]).asDiagonal() * xs[0];
        acc = acc * pw(idx[1]).asDiagonal();
        for (std::size_t m = 1; m < xs.size(); ++m) {
            acc = acc * xs[m];
            acc = acc * pw(idx[m + 1]).asDiagonal();
        }
        out += c * acc;
    }
    return out;
}

FourierSeries monomial_divdiff_coeffs(int k, int n) {
    if (n < 0) throw InvalidArgument("divided difference order must be >= 0");
    FourierSeries s(n);
    if (k >= n) {
        for (const auto& c : enumerate_compositions(n + 1, k - n)) s.add(c.parts, complex(1.0, 0.0));
    } else if (k < 0) {
        const complex sign((n % 2 == 0) ? 1.0 : -1.0, 0.0);
        for (const auto& c : enumerate_compositions(n + 1, -k - 1)) {
            Multi t(c.parts.size());
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = -c.parts[i] - 1;
            s.add(t, sign);
        }
    }
    return s;
}

FourierSeries divdiff_fourier(const FourierSeries& phi_hat, int n) {
    if (phi_hat.arity() != 0) throw ArityMismatch("divdiff_fourier expects a one-variable series");
    FourierSeries out(n);
    for (const auto& [idx, c] : phi_hat.coeffs()) {
        const FourierSeries mono = monomial_divdiff_coeffs(idx[0], n);
        for (const auto& [t, v] : mono.coeffs()) out.add(t, c * v);
    }
    return out;
}

complex divdiff_complex(const std::function<complex(complex, int)>& f, std::span<const complex> nodes, int max_order,
                        double tol) {
    return confluent_divdiff(nodes, tol, max_order, f);
}

complex cayley(double lambda) {
    if (!std::isfinite(lambda)) throw InvalidArgument("cayley needs a finite argument");
    const complex i(0.0, 1.0);
    return (lambda + i) / (lambda - i);
}

double cayley_inv(complex z) {
    if (std::abs(z - 1.0) <= 1e-12) throw PoleAtOne("cayley_inv evaluated at z = 1");
    const complex i(0.0, 1.0);
    return (i * (z + 1.0) / (z - 1.0)).real();
}

DiagonalUnitary cayley_unitary(std::span<const double> lambdas) {
    DiagonalUnitary u;
    u.phases.reserve(lambdas.size());
    for (double l : lambdas) u.phases.push_back(std::arg(cayley(l)));
    return u;
}

CayleyCheck cayley_transfer_check(const ScalarFn& phi, std::span<const double> lambdas) {
    if (lambdas.empty()) throw OrderMismatch("cayley_transfer_check needs at least one node");
    const int n = static_cast<int>(lambdas.size()) - 1;
    std::vector<complex> z;
    for (double l : lambdas) z.push_back(cayley(l));
    for (std::size_t a = 0; a < z.size(); ++a)
        for (std::size_t b = a + 1; b < z.size(); ++b)
            if (std::abs(z[a] - z[b]) <= 1e-12 || lambdas[a] == lambdas[b])
                throw NodeCoincidence("cayley_transfer_check needs distinct nodes");

    CayleyCheck out;
    out.lhs = divdiff_eval(phi, lambdas, n);
    if (n == 0) {
        out.rhs = out.rhs_alt = phi(lambdas[0]);
        return out;
    }

    // psi = phi o cayley_inv on the circle, values only.
    auto psi = [&phi](complex w, int d) -> complex {
        if (d != 0) throw InsufficientDerivatives("psi is evaluated from values only");
        return phi(cayley_inv(w));
    };
    const complex i(0.0, 1.0);
    const complex weight = ipow(0.5 * i, n);

    // Chains 0 = i_0 < ... < i_k = n correspond to subsets of the interior {1..n-1}.
    const int interior = n - 1;
    for (unsigned mask = 0; mask < (1u << interior); ++mask) {
        std::vector<int> chain{0};
        for (int b = 0; b < interior; ++b)
            if (mask & (1u << b)) chain.push_back(b + 1);
        chain.push_back(n);
        const int k = static_cast<int>(chain.size()) - 1;

        std::vector<complex> nodes;
        for (int c : chain) nodes.push_back(z[static_cast<std::size_t>(c)]);
        complex term = divdiff_complex(psi, nodes, 0);
        std::vector<bool> inner(static_cast<std::size_t>(n) + 1, false);
        for (std::size_t j = 1; j + 1 < chain.size(); ++j) inner[static_cast<std::size_t>(chain[j])] = true;
        for (int l = 0; l <= n; ++l) {
            const complex f = z[static_cast<std::size_t>(l)] - 1.0;
            term *= inner[static_cast<std::size_t>(l)] ? f * f : f;
        }
        const complex alt = ((k + 1) % 2 == 0 ? 1.0 : -1.0) * ipow(i, n - k + 1) / std::ldexp(1.0, n - k + 1);
        out.rhs += weight * term;
        out.rhs_alt += alt * term;
    }
    return out;
}

}  // namespace schurlab
