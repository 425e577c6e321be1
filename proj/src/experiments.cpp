#include "schurlab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "schurlab/errors.hpp"
#include "schurlab/schatten.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/torus.hpp"
#include "schurlab/wavelet.hpp"

namespace schurlab {

namespace {

using Rng = std::mt19937_64;

// Shortest round-trip text, for object keys built from doubles.
std::string shortest(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, r.ptr};
}

// ---------------------------------------------------------------------------
// Parameter plumbing
// ---------------------------------------------------------------------------

Json seed_param() { return nullptr; }

const std::vector<KindSpec> kKinds = {
    {"divdiff-oracle",
     "Confluent Newton table against direct recursion and shuffled nodes on random functions.",
     true,
     {{"cases", "int", 200, "number of random (f, nodes) cases"},
      {"max_n", "int", 4, "largest divided-difference order"},
      {"range", "number", 2.0, "nodes are drawn from [-range, range]"},
      {"coincide_prob", "number", 0.3, "chance that a node repeats an earlier one"},
      {"min_gap", "number", 0.01, "smallest gap between distinct nodes"},
      {"tol", "number", 1e-9, "relative tolerance, scaled by max(1, |a|, |b|)"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
    {"torus-expansion",
     "Fourier coefficients of divided differences of z^k against direct evaluation, plus cardinalities.",
     true,
     {{"n_max", "int", 3, "orders 0..n_max"},
      {"k_max", "int", 12, "exponents -k_max..k_max"},
      {"trials", "int", 50, "random torus node tuples per (n, k)"},
      {"min_gap", "number", 0.1, "smallest angular gap between nodes"},
      {"tol", "number", 1e-8, "relative tolerance"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
    {"moi-bound",
     "||T^U_psi(x)||_p <= ||psi^||_{l^p} prod ||x_i||_{p_i} for random series, unitaries and inputs.",
     true,
     {{"N", "int", 16, "matrix size"},
      {"trials", "int", 100, "random trials per exponent tuple"},
      {"exponents", "exponent[][]", Json::array({Json::array({2, 2}), Json::array({1, 2}), Json::array({2, 1})}),
       "exponent tuples (p_1..p_n)"},
      {"K", "int", 2, "series support [-K, K]^{n+1}"},
      {"density", "number", 0.5, "chance that a coefficient is nonzero"},
      {"tol", "number", 1e-8, "additive allowance"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
    {"cayley-check",
     "Divided differences on the line against the transfer sum on the circle.",
     true,
     {{"n_list", "int[]", Json::array({1, 2, 3}), "orders"},
      {"trials", "int", 50, "random node sets per order"},
      {"radius", "number", 1.0, "radius of the C^{power-1} bump"},
      {"power", "int", 5, "bump exponent"},
      {"spread", "number", 1.2, "nodes are drawn from [-spread radius, spread radius]"},
      {"min_gap", "number", 0.05, "smallest gap between nodes"},
      {"tol", "number", 1e-6, "tolerance, scaled by 1 + |lhs|"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
    {"split-partition",
     "Off-diagonal and diagonal pieces of f^[n] sum back to f^[n] on the grid tensor.",
     false,
     {{"functions", "string[]", Json::array({"sin", "bump", "cube"}), "sin, bump, cube, gaussian"},
      {"n_list", "int[]", Json::array({2, 3}), "orders"},
      {"N", "int", 16, "grid points"},
      {"L", "number", 4.0, "grid range [0, L)"},
      {"R_list", "number[]", Json::array({0.5, 1.0, 2.0}), "cutoff radii"},
      {"tol", "number", 1e-9, "max pointwise residual"}}},
    {"scaling-law",
     "Dilation law for phi_{alpha,lambda}: pointwise and through estimate_norm.",
     true,
     {{"N", "int", 24, "grid points"},
      {"L", "number", 4.0, "base grid range [0, L)"},
      {"lambdas", "number[]", Json::array({0.5, 2.0}), "dilation factors"},
      {"alpha", "number[]", Json::array({1.0, -0.5, 0.25}), "coefficients of phi(t - k), k = 0, 1, ..."},
      {"exponents", "exponent[]", Json::array({2, 2}), "(p_1..p_n); n is the length"},
      {"restarts", "int", 16, "optimizer restarts"},
      {"max_iters", "int", 200, "optimizer iterations per restart"},
      {"node_trials", "int", 50, "random node sets for the pointwise identity"},
      {"tol", "number", 1e-9, "pointwise relative tolerance"},
      {"ratio_tol", "number", 0.02, "allowed relative deviation of the estimate ratio from lambda^n"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
    {"toeplitz-bound",
     "Toeplitz multipliers of rho_R and (1 - rho_R(t))/t against their Fourier L1 majorants.",
     true,
     {{"N", "int", 32, "grid points"},
      {"L", "number", 8.0, "grid range [0, L)"},
      {"R", "number", 1.0, "cutoff radius"},
      {"p_list", "exponent[]", Json::array({1, 2}), "Schatten exponents"},
      {"restarts", "int", 16, "optimizer restarts"},
      {"max_iters", "int", 200, "optimizer iterations per restart"},
      {"halfwidth", "number", 8.0, "sampling window for rho_R"},
      {"resolution", "int", 4096, "FFT size for rho_R"},
      {"l1_resolution", "int", 65536, "FFT size for (1 - rho_R)/t"},
      {"tol", "number", 1e-6, "additive allowance"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
    {"pinching",
     "Quasi-triangle, Hoelder and pinching inequalities on random matrices.",
     true,
     {{"cases", "int", 100, "random cases per inequality"},
      {"N", "int", 12, "matrix size"},
      {"p_quasi", "exponent[]", Json::array({0.25, 0.5, 1}), "exponents for the quasi-triangle inequality"},
      {"p_holder", "exponent[]", Json::array({0.5, 1, 2, 4, "inf"}), "exponents for Hoelder pairs"},
      {"p_pinch", "exponent[]", Json::array({1, 1.5, 2, 3, "inf"}), "exponents for pinching"},
      {"tol", "number", 1e-9, "relative allowance"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
    {"besov-scaling",
     "Besov norm of f(2^m t) against 2^{m(s - 1/p)} times that of f under level reindexing.",
     false,
     {{"M", "int", 4, "Daubechies vanishing moments"},
      {"J", "int", 12, "cascade depth"},
      {"n", "int", 2, "order; s = n - 1 + 1/p"},
      {"p", "exponent", 1, "Hoelder exponent p; the Besov triple is (n - 1 + 1/p, p#, p)"},
      {"m_list", "int[]", Json::array({-1, 1, 2}), "dyadic dilations"},
      {"j_min", "int", -4, "coarsest level for f"},
      {"j_max", "int", 6, "finest level for f"},
      {"center", "number", 0.0, "bump center"},
      {"radius", "number", 1.0, "bump radius"},
      {"tol", "number", 1e-8, "relative tolerance"},
      {"lp_halfwidth", "number", 64.0, "sampling window for the Fourier-side cross-check"},
      {"lp_resolution", "int", 1 << 18, "FFT size for the Fourier-side cross-check"}}},
    {"main-theorem-probe",
     "Lower bounds of the multiplier norm of f^[n] against ||f^(n)||_inf + ||f||_B across grid sizes.",
     true,
     {{"N_list", "int[]", Json::array({16, 32, 64}), "grid sizes"},
      {"L", "number", 4.0, "grid range [0, L)"},
      {"radius", "number", 1.5, "bump radius; the bump is centered at L/2"},
      {"exponents", "exponent[]", Json::array({2, 2}), "(p_1..p_n), must be in the main regime"},
      {"restarts", "int", 16, "optimizer restarts"},
      {"max_iters", "int", 200, "optimizer iterations per restart"},
      {"M", "int", 6, "Daubechies vanishing moments"},
      {"J", "int", 12, "cascade depth"},
      {"j_min", "int", -6, "coarsest Besov level"},
      {"j_max", "int", 8, "finest Besov level"},
      {"max_growth", "number", 2.0, "allowed ratio growth from the smallest to the largest N"},
      {"seed", "seed", seed_param(), "RNG seed"}}},
};

bool matches(const Json& v, std::string_view type) {
    if (type == "int") return v.is_number_integer();
    if (type == "seed") return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    if (type == "number") return v.is_number();
    if (type == "exponent") return (v.is_number() && v.get<double>() > 0.0) || (v.is_string() && v == "inf");
    if (type == "string") return v.is_string();
    if (type.ends_with("[]")) {
        if (!v.is_array()) return false;
        const auto inner = type.substr(0, type.size() - 2);
        for (const auto& e : v)
            if (!matches(e, inner)) return false;
        return true;
    }
    return false;
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigInvalid(msg);
}

int geti(const Json& P, const char* k) { return P.at(k).get<int>(); }
double getd(const Json& P, const char* k) { return P.at(k).get<double>(); }
double exponent(const Json& v) { return v.is_string() ? kInf : v.get<double>(); }

std::vector<double> exponents(const Json& v) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(exponent(e));
    return out;
}

ExponentTuple exponent_tuple(const Json& v) {
    const auto ps = exponents(v);
    require(!ps.empty(), "exponent tuple must not be empty");
    try {
        return ExponentTuple(ps);
    } catch (const error& e) {
        throw ConfigInvalid(std::string("bad exponent tuple: ") + e.what());
    }
}

Json exponents_json(const std::vector<double>& ps) {
    Json j = Json::array();
    for (double p : ps) j.push_back(number(p));
    return j;
}

std::vector<double> uniform_grid(int N, double L) {
    std::vector<double> g(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) g[static_cast<std::size_t>(k)] = k * L / N;
    return g;
}

double uniform(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }

complex cgauss(Rng& r) {
    std::normal_distribution<double> n;
    const double re = n(r);
    return {re, n(r)};
}

Matrix random_matrix(Rng& r, Eigen::Index N) {
    Matrix x(N, N);
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = 0; i < N; ++i) x(i, j) = cgauss(r);
    // Spread the singular values so the inequalities are not all near equality.
    for (Eigen::Index j = 0; j < N; ++j) x.col(j) *= std::exp(uniform(r, -3.0, 3.0));
    return x;
}

// Draws `count` values in [a, b] with pairwise gaps of at least `gap`.
std::vector<double> separated(Rng& r, std::size_t count, double a, double b, double gap) {
    for (;;) {
        std::vector<double> v(count);
        for (auto& x : v) x = uniform(r, a, b);
        bool ok = true;
        for (std::size_t i = 0; i < count && ok; ++i)
            for (std::size_t j = i + 1; j < count && ok; ++j) ok = std::abs(v[i] - v[j]) >= gap;
        if (ok) return v;
    }
}

double mixed_err(complex a, complex b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Collects per-case records and the running summary.
class Recorder {
public:
    explicit Recorder(Report& r) : r_(r) {}

    // Asserted inequality lhs <= rhs.
    bool check(Json rec, double lhs, double rhs) {
        const bool ok = std::isfinite(lhs) && lhs <= rhs;
        rec["lhs"] = number(lhs);
        rec["rhs"] = number(rhs);
        rec["slack"] = number(rhs - lhs);
        rec["ok"] = ok;
        ++checked_;
        if (std::isfinite(lhs) && std::isfinite(rhs)) max_violation_ = std::max(max_violation_, lhs - rhs);
        if (!ok) {
            ++violations_;
            if (first_failure_.is_null()) first_failure_ = Json{{"case", r_.cases.size()}, {"record", rec}};
        }
        r_.cases.push_back(std::move(rec));
        return ok;
    }

    void note(Json rec) { r_.cases.push_back(std::move(rec)); }

    // Case description attached to any module error raised before the next call.
    void current(Json c) { current_ = std::move(c); }
    [[nodiscard]] const Json& current() const noexcept { return current_; }

    void finish() {
        r_.summary["checked"] = checked_;
        r_.summary["violations"] = violations_;
        r_.summary["max_violation"] = number(checked_ ? max_violation_ : 0.0);
        if (!first_failure_.is_null()) r_.summary["first_failure"] = first_failure_;
        r_.passed = r_.passed && violations_ == 0;
    }

private:
    Report& r_;
    Json current_ = nullptr;
    Json first_failure_ = nullptr;
    long checked_ = 0;
    long violations_ = 0;
    double max_violation_ = -kInf;
};

// ---------------------------------------------------------------------------
// Kinds
// ---------------------------------------------------------------------------

// Divided difference straight from the recursive quotient, splitting on the
// first pair of distinct nodes; a fully coincident tuple uses f^(n)/n!.
complex recursive_divdiff(const ScalarFn& f, const std::vector<double>& t) {
    const std::size_t m = t.size();
    if (m == 1) return f(t[0]);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (t[i] != t[j]) {
                auto omit = [&t](std::size_t s) {
                    std::vector<double> u = t;
                    u.erase(u.begin() + static_cast<std::ptrdiff_t>(s));
                    return u;
                };
                return (recursive_divdiff(f, omit(j)) - recursive_divdiff(f, omit(i))) / (t[i] - t[j]);
            }
    double fact = 1.0;
    for (std::size_t d = 2; d < m; ++d) fact *= static_cast<double>(d);
    return f.eval(t[0], static_cast<int>(m) - 1) / fact;
}

void run_divdiff_oracle(const Json& P, Rng& rng, Recorder& rec, Report&) {
    const int cases = geti(P, "cases"), max_n = geti(P, "max_n");
    const double range = getd(P, "range"), prob = getd(P, "coincide_prob"), gap = getd(P, "min_gap");
    const double tol = getd(P, "tol");
    require(cases >= 0 && max_n >= 0 && range > 0.0 && prob >= 0.0 && prob <= 1.0 && gap >= 0.0,
            "divdiff-oracle: invalid parameters");

    for (int c = 0; c < cases; ++c) {
        const int family = std::uniform_int_distribution<int>(0, 2)(rng);
        const int n = std::uniform_int_distribution<int>(0, max_n)(rng);
        Json desc{{"index", c}, {"n", n}};
        ScalarFn f = fn::zero();
        if (family == 0) {
            const int deg = std::uniform_int_distribution<int>(0, 6)(rng);
            std::vector<double> coeffs(static_cast<std::size_t>(deg) + 1);
            for (auto& a : coeffs) a = uniform(rng, -1.0, 1.0);
            desc["f"] = Json{{"family", "polynomial"}, {"coeffs", coeffs}};
            f = fn::polynomial(coeffs);
        } else if (family == 1) {
            const double freq = uniform(rng, 0.5, 3.0), phase = uniform(rng, 0.0, 6.28);
            desc["f"] = Json{{"family", "sin"}, {"freq", freq}, {"phase", phase}};
            f = fn::sine(freq, phase);
        } else {
            const double center = uniform(rng, -0.5, 0.5), radius = uniform(rng, 1.0, 2.5);
            desc["f"] = Json{{"family", "bump"}, {"center", center}, {"radius", radius}};
            f = fn::smooth_bump(center, radius);
        }

        // Distinct nodes first, then some of them repeated exactly.
        std::vector<double> nodes = separated(rng, static_cast<std::size_t>(n) + 1, -range, range, gap);
        std::bernoulli_distribution repeat(prob);
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (repeat(rng)) nodes[i] = nodes[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
        std::vector<double> shuffled = nodes;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        desc["nodes"] = nodes;
        rec.current(desc);

        const complex table = divdiff_eval(f, nodes, n);
        const complex direct = recursive_divdiff(f, nodes);
        const complex perm = divdiff_eval(f, shuffled, n);
        desc["table"] = to_json(table);
        desc["recursion"] = to_json(direct);
        desc["shuffled"] = to_json(perm);
        rec.check(desc, std::max(mixed_err(table, direct), mixed_err(table, perm)), tol);
    }
}

void run_torus_expansion(const Json& P, Rng& rng, Recorder& rec, Report&) {
    const int n_max = geti(P, "n_max"), k_max = geti(P, "k_max"), trials = geti(P, "trials");
    const double gap = getd(P, "min_gap"), tol = getd(P, "tol");
    require(n_max >= 0 && k_max >= 0 && trials >= 0 && gap >= 0.0, "torus-expansion: invalid parameters");
    require(gap * (n_max + 1) < 2.0 * std::numbers::pi, "torus-expansion: min_gap too large");

    for (int n = 0; n <= n_max; ++n) {
        for (int k = -k_max; k <= k_max; ++k) {
            rec.current(Json{{"n", n}, {"k", k}});
            const FourierSeries s = monomial_divdiff_coeffs(k, n);
            const double expected = k >= n ? binomial(k, n) : (k < 0 ? binomial(n - k - 1, -k - 1) : 0.0);
            auto zk = [k](complex z, int d) -> complex {
                if (d != 0) throw InsufficientDerivatives("z^k is evaluated from values only");
                complex r(1.0, 0.0);
                const complex b = k >= 0 ? z : 1.0 / z;
                for (int i = 0; i < std::abs(k); ++i) r *= b;
                return r;
            };
            double worst = 0.0;
            for (int t = 0; t < trials; ++t) {
                const auto theta = separated(rng, static_cast<std::size_t>(n) + 1, 0.0, 2.0 * std::numbers::pi, gap);
                std::vector<complex> z;
                for (double th : theta) z.push_back(std::polar(1.0, th));
                worst = std::max(worst, mixed_err(s.eval(z), divdiff_complex(zk, z, 0)));
            }
            Json r{{"n", n}, {"k", k}, {"terms", s.size()}, {"expected_terms", expected}};
            r["cardinality_ok"] = static_cast<double>(s.size()) == expected;
            // A cardinality mismatch counts as an infinite error.
            rec.check(r, static_cast<double>(s.size()) == expected ? worst : kInf, tol);
        }
    }
}

void run_moi_bound(const Json& P, Rng& rng, Recorder& rec, Report&) {
    const int N = geti(P, "N"), trials = geti(P, "trials"), K = geti(P, "K");
    const double density = getd(P, "density"), tol = getd(P, "tol");
    require(N >= 1 && trials >= 0 && K >= 0 && density >= 0.0 && density <= 1.0, "moi-bound: invalid parameters");
    std::vector<ExponentTuple> tuples;
    for (const auto& e : P.at("exponents")) tuples.push_back(exponent_tuple(e));

    std::bernoulli_distribution keep(density);
    for (const auto& exps : tuples) {
        const int n = static_cast<int>(exps.size());
        for (int t = 0; t < trials; ++t) {
            rec.current(Json{{"exponents", exponents_json(exps.p_list())}, {"trial", t}});
            FourierSeries s(n);
            Multi idx(static_cast<std::size_t>(n) + 1, -K);
            for (;;) {
                if (keep(rng)) s.add(idx, cgauss(rng));
                std::size_t pos = 0;
                while (pos < idx.size() && ++idx[pos] > K) idx[pos++] = -K;
                if (pos == idx.size()) break;
            }
            DiagonalUnitary u;
            for (int i = 0; i < N; ++i) u.phases.push_back(uniform(rng, -std::numbers::pi, std::numbers::pi));
            std::vector<Matrix> xs;
            double prod = 1.0;
            for (int i = 0; i < n; ++i) {
                xs.push_back(random_matrix(rng, N));
                prod *= schatten_norm(xs.back(), exps[static_cast<std::size_t>(i)]);
            }
            const double lhs = schatten_norm(moi_apply(s, u, xs), exps.p());
            const double coef = s.empty() ? 0.0 : s.lp_norm(exps.p());
            Json r{{"exponents", exponents_json(exps.p_list())}, {"trial", t}, {"terms", s.size()}, {"coeff_lp", coef}};
            rec.check(r, lhs, coef * prod + tol);
        }
    }
}

void run_cayley_check(const Json& P, Rng& rng, Recorder& rec, Report& rep) {
    const auto n_list = P.at("n_list").get<std::vector<int>>();
    const int trials = geti(P, "trials"), power = geti(P, "power");
    const double radius = getd(P, "radius"), spread = getd(P, "spread"), gap = getd(P, "min_gap");
    const double tol = getd(P, "tol");
    require(trials >= 0 && radius > 0.0 && spread > 0.0 && gap >= 0.0 && power >= 1, "cayley-check: invalid parameters");
    for (int n : n_list) require(n >= 0 && n <= 12, "cayley-check: orders must be in 0..12");

    const ScalarFn phi = fn::poly_bump(0.0, radius, power);
    double worst_alt = 0.0;
    for (int n : n_list) {
        for (int t = 0; t < trials; ++t) {
            const auto lambdas =
                separated(rng, static_cast<std::size_t>(n) + 1, -spread * radius, spread * radius, gap);
            rec.current(Json{{"n", n}, {"trial", t}, {"lambdas", lambdas}});
            const CayleyCheck c = cayley_transfer_check(phi, lambdas);
            const double alt = std::abs(c.lhs - c.rhs_alt) / (1.0 + std::abs(c.lhs));
            worst_alt = std::max(worst_alt, alt);
            Json r{{"n", n},
                   {"trial", t},
                   {"lambdas", lambdas},
                   {"identity", Json{{"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)}, {"rhs_alt", to_json(c.rhs_alt)}}},
                   {"alt_error", alt}};
            rec.check(r, std::abs(c.lhs - c.rhs), tol * (1.0 + std::abs(c.lhs)));
        }
    }
    rep.summary["max_alt_error"] = worst_alt;
}

ScalarFn named_function(const std::string& name, double L) {
    if (name == "sin") return fn::sine();
    if (name == "bump") return fn::smooth_bump(0.5 * L, 0.5 * L);
    if (name == "cube") return fn::monomial(3);
    if (name == "gaussian") return fn::translate(fn::gaussian(0.5), 0.5 * L);
    throw ConfigInvalid("unknown function '" + name + "'");
}

void run_split_partition(const Json& P, Rng&, Recorder& rec, Report&) {
    const auto names = P.at("functions").get<std::vector<std::string>>();
    const auto n_list = P.at("n_list").get<std::vector<int>>();
    const auto R_list = P.at("R_list").get<std::vector<double>>();
    const int N = geti(P, "N");
    const double L = getd(P, "L"), tol = getd(P, "tol");
    require(N >= 1 && L > 0.0, "split-partition: invalid grid");
    for (int n : n_list) require(n >= 1, "split-partition: orders must be >= 1");
    for (double R : R_list) require(R > 0.0, "split-partition: radii must be > 0");
    for (const auto& name : names) static_cast<void>(named_function(name, L));

    const auto grid = uniform_grid(N, L);
    for (const auto& name : names) {
        const ScalarFn f = named_function(name, L);
        for (int n : n_list) {
            const SymbolGrid full = divdiff_grid(f, grid, n).materialize();
            for (double R : R_list) {
                Json desc{{"f", name}, {"n", n}, {"R", R}, {"N", N}};
                rec.current(desc);
                const auto pieces = split_symbol(f, n, R, grid);
                std::vector<complex> sum(full.tensor_size());
                for (const auto& piece : pieces) {
                    const SymbolGrid d = piece.materialize();
                    const auto& v = *d.values();
                    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
                }
                double worst = 0.0;
                const auto& ref = *full.values();
                for (std::size_t i = 0; i < sum.size(); ++i) worst = std::max(worst, std::abs(sum[i] - ref[i]));
                desc["pieces"] = pieces.size();
                rec.check(desc, worst, tol);
            }
        }
    }
}

EstimateOptions estimate_options(const Json& P, std::uint64_t seed) {
    EstimateOptions o;
    o.restarts = geti(P, "restarts");
    o.max_iters = geti(P, "max_iters");
    o.seed = seed;
    require(o.restarts >= 1 && o.max_iters >= 0, "restarts must be >= 1 and max_iters >= 0");
    return o;
}

void run_scaling_law(const Json& P, Rng& rng, std::uint64_t seed, Recorder& rec, Report& rep) {
    const int N = geti(P, "N"), node_trials = geti(P, "node_trials");
    const double L = getd(P, "L"), tol = getd(P, "tol"), ratio_tol = getd(P, "ratio_tol");
    const auto lambdas = P.at("lambdas").get<std::vector<double>>();
    const auto alpha_r = P.at("alpha").get<std::vector<double>>();
    const ExponentTuple exps = exponent_tuple(P.at("exponents"));
    const EstimateOptions opts = estimate_options(P, seed);
    const int n = static_cast<int>(exps.size());
    require(N >= 1 && L > 0.0 && node_trials >= 0, "scaling-law: invalid parameters");
    for (double l : lambdas) require(l > 0.0, "scaling-law: lambdas must be > 0");

    const std::vector<complex> alpha(alpha_r.begin(), alpha_r.end());
    const ScalarFn phi = fn::smooth_bump(1.0, 1.0);
    const ScalarFn base = phi_alpha_lambda(phi, alpha, 0, 1.0);
    const auto grid = uniform_grid(N, L);

    rec.current(Json{{"lambda", 1.0}});
    const NormEstimate e1 = estimate_norm(divdiff_grid(base, grid, n), exps, opts);
    rep.csv.header = {"lambda", "estimate", "ratio_to_lambda_n"};
    rep.csv.rows.push_back({1.0, e1.value, 1.0});
    rec.note(Json{{"lambda", 1.0}, {"estimate", to_json(e1)}});

    Json factors = Json::object();
    for (double lambda : lambdas) {
        const ScalarFn scaled = phi_alpha_lambda(phi, alpha, 0, lambda);
        const double ln = std::pow(lambda, n);

        double worst = 0.0;
        for (int t = 0; t < node_trials; ++t) {
            const auto nodes = separated(rng, static_cast<std::size_t>(n) + 1, -1.0, L + 1.0, 0.01);
            std::vector<double> stretched;
            for (double x : nodes) stretched.push_back(lambda * x);
            rec.current(Json{{"lambda", lambda}, {"nodes", nodes}});
            worst = std::max(worst, mixed_err(divdiff_eval(scaled, nodes, n), ln * divdiff_eval(base, stretched, n)));
        }
        rec.check(Json{{"lambda", lambda}, {"test", "pointwise"}, {"trials", node_trials}}, worst, tol);

        // The finite section of phi_{alpha,lambda}^[n] on grid/lambda is
        // lambda^n times that of phi_alpha^[n] on the base grid.
        std::vector<double> g;
        for (double x : grid) g.push_back(x / lambda);
        rec.current(Json{{"lambda", lambda}, {"test", "estimate"}});
        const NormEstimate e = estimate_norm(divdiff_grid(scaled, g, n), exps, opts);
        const double factor = e.value / e1.value;
        // Same grid for both, which mixes the dilation with a change of sampling.
        const NormEstimate same = estimate_norm(divdiff_grid(scaled, grid, n), exps, opts);
        rep.csv.rows.push_back({lambda, e.value, factor / ln});
        factors[shortest(lambda)] = factor;
        rec.check(Json{{"lambda", lambda},
                       {"test", "estimate"},
                       {"factor", factor},
                       {"lambda_n", ln},
                       {"same_grid_factor", same.value / e1.value},
                       {"estimate", to_json(e)}},
                  std::abs(factor / ln - 1.0), ratio_tol);
    }
    rep.summary["factors"] = factors;
}

void run_toeplitz_bound(const Json& P, std::uint64_t seed, Recorder& rec, Report& rep) {
    const int N = geti(P, "N"), resolution = geti(P, "resolution"), l1_res = geti(P, "l1_resolution");
    const double L = getd(P, "L"), R = getd(P, "R"), hw = getd(P, "halfwidth"), tol = getd(P, "tol");
    const auto ps = exponents(P.at("p_list"));
    const EstimateOptions opts = estimate_options(P, seed);
    require(N >= 1 && L > 0.0 && R > 0.0 && hw >= 2.0 * R, "toeplitz-bound: invalid parameters");
    for (double p : ps) require(p >= 1.0, "toeplitz-bound: exponents must be >= 1");

    const auto grid = uniform_grid(N, L);
    rec.current(Json{{"stage", "fourier-l1"}});
    const FourierL1 rho_l1 = fourier_l1_bound(rho_fn(R), hw, resolution);
    const FourierL1 g_l1 = one_minus_rho_over_t_l1(R, l1_res);
    rep.provenance["tails"] = Json{{"rho", Json{{"l1", rho_l1.value}, {"tail", rho_l1.tail}}},
                                   {"one_minus_rho_over_t", Json{{"l1", g_l1.value}, {"tail", g_l1.tail}}}};

    const std::pair<const char*, ScalarFn> symbols[] = {{"rho", rho_fn(R)},
                                                        {"one_minus_rho_over_t", one_minus_rho_over_t(R)}};
    const FourierL1 bounds[] = {rho_l1, g_l1};
    // symbol 0 is rho_R, 1 is (1 - rho_R(t))/t.
    rep.csv.header = {"p", "symbol", "estimate", "bound"};
    for (double p : ps) {
        for (std::size_t s = 0; s < 2; ++s) {
            rec.current(Json{{"p", number(p)}, {"symbol", symbols[s].first}});
            const NormEstimate e = estimate_norm(toeplitz_symbol(symbols[s].second, grid), ExponentTuple{p}, opts);
            const double bound = bounds[s].value + bounds[s].tail;
            rep.csv.rows.push_back({p, static_cast<double>(s), e.value, bound});
            rec.check(Json{{"p", number(p)},
                           {"symbol", symbols[s].first},
                           {"l1", bounds[s].value},
                           {"tail", bounds[s].tail},
                           {"estimate", to_json(e)}},
                      e.value, bound + tol);
        }
    }
}

void run_pinching(const Json& P, Rng& rng, Recorder& rec, Report&) {
    const int cases = geti(P, "cases"), N = geti(P, "N");
    const double tol = getd(P, "tol");
    const auto pq = exponents(P.at("p_quasi")), ph = exponents(P.at("p_holder")), pp = exponents(P.at("p_pinch"));
    require(cases >= 0 && N >= 1, "pinching: invalid parameters");
    require(!pq.empty() && !ph.empty() && !pp.empty(), "pinching: exponent lists must be nonempty");
    for (double p : pq) require(p <= 1.0, "pinching: quasi-triangle exponents must be <= 1");
    for (double p : pp) require(p >= 1.0, "pinching: pinching exponents must be >= 1");
    auto allow = [tol](double rhs) { return rhs + tol * std::max(1.0, rhs); };
    auto pick = [&rng](const std::vector<double>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };

    for (int c = 0; c < cases; ++c) {
        for (double p : pq) {
            rec.current(Json{{"test", "quasi-triangle"}, {"case", c}, {"p", p}});
            const Matrix x = random_matrix(rng, N), y = random_matrix(rng, N);
            const double nx = schatten_norm(x, p), ny = schatten_norm(y, p), nxy = schatten_norm(x + y, p);
            // p-triangle ||x+y||^p <= ||x||^p + ||y||^p, and the 2^{1/p-1} form it implies.
            rec.check(Json{{"test", "p-triangle"}, {"case", c}, {"p", p}}, std::pow(nxy, p),
                      allow(std::pow(nx, p) + std::pow(ny, p)));
            rec.check(Json{{"test", "quasi-triangle"}, {"case", c}, {"p", p}}, nxy,
                      allow(std::pow(2.0, 1.0 / p - 1.0) * (nx + ny)));
        }

        const double p = pick(ph), q = pick(ph);
        const double r = holder_combine({p, q});
        rec.current(Json{{"test", "hoelder"}, {"case", c}, {"p", number(p)}, {"q", number(q)}});
        const Matrix x = random_matrix(rng, N), y = random_matrix(rng, N);
        rec.check(Json{{"test", "hoelder"}, {"case", c}, {"p", number(p)}, {"q", number(q)}, {"r", number(r)}},
                  schatten_norm(x * y, r), allow(schatten_norm(x, p) * schatten_norm(y, q)));

        const double pz = pick(pp);
        std::vector<BlockPartition::Range> blocks;
        std::vector<int> widths;
        for (std::size_t b = 0; b < static_cast<std::size_t>(N);) {
            const auto w = std::min<std::size_t>(std::uniform_int_distribution<std::size_t>(1, 4)(rng),
                                                 static_cast<std::size_t>(N) - b);
            blocks.push_back({b, b + w});
            widths.push_back(static_cast<int>(w));
            b += w;
        }
        rec.current(Json{{"test", "pinching"}, {"case", c}, {"p", number(pz)}, {"widths", widths}});
        const Matrix z = random_matrix(rng, N);
        rec.check(Json{{"test", "pinching"}, {"case", c}, {"p", number(pz)}, {"widths", widths}},
                  schatten_norm(block_expectation(z, BlockPartition(blocks)), pz), allow(schatten_norm(z, pz)));
    }
}

struct BesovTriple {
    double s, p, q;
};

// (n - 1 + 1/p, p#, p) for Hoelder exponent p <= 1.
BesovTriple besov_triple(int n, double p) {
    const auto sharp = sharp_exponent(p);
    require(sharp.has_value(), "Besov triple needs p <= 1");
    return {n - 1 + 1.0 / p, *sharp, p};
}

void run_besov_scaling(const Json& P, Rng&, Recorder& rec, Report& rep) {
    const int M = geti(P, "M"), J = geti(P, "J"), n = geti(P, "n"), j_min = geti(P, "j_min"), j_max = geti(P, "j_max");
    const double p = exponent(P.at("p")), tol = getd(P, "tol");
    const auto m_list = P.at("m_list").get<std::vector<int>>();
    require(n >= 1 && j_min <= j_max, "besov-scaling: invalid parameters");
    const BesovTriple b = besov_triple(n, p);

    rec.current(Json{{"stage", "wavelet system"}});
    const WaveletSystem W(M, J);
    const ScalarFn f = fn::smooth_bump(getd(P, "center"), getd(P, "radius"));
    rec.current(Json{{"m", 0}});
    const BesovResult base = besov_norm(f, {b.s, b.p, b.q, j_min, j_max}, W, {});
    rep.summary["besov"] = Json{{"s", b.s}, {"p", number(b.p)}, {"q", number(b.q)}, {"value", base.value}};
    // Fourier-side norm, comparable only up to constants: report the band.
    const double lp_hw = getd(P, "lp_halfwidth");
    const int lp_res = geti(P, "lp_resolution");
    const auto lp_ratio = [&](const ScalarFn& g, int lo, int hi, double wavelet_value) {
        const double v = littlewood_paley_besov(g, {b.s, b.p, b.q, lo, hi}, lp_hw, lp_res).value;
        return v > 0.0 ? wavelet_value / v : kInf;
    };
    std::vector<double> ratios{lp_ratio(f, j_min, j_max, base.value)};
    rep.csv.header = {"m", "value", "expected"};
    rep.csv.rows.push_back({0.0, base.value, base.value});

    for (int m : m_list) {
        rec.current(Json{{"m", m}});
        // f(2^m t) has level j where f has level j - m.
        const ScalarFn fm = fn::dilate(f, std::ldexp(1.0, m));
        const BesovResult r = besov_norm(fm, {b.s, b.p, b.q, j_min + m, j_max + m}, W, {});
        const double expected = std::pow(2.0, m * (b.s - 1.0 / b.p)) * base.value;
        rep.csv.rows.push_back({static_cast<double>(m), r.value, expected});
        rec.check(Json{{"m", m}, {"value", r.value}, {"expected", expected},
                       {"boundary_low", r.boundary_low}, {"boundary_high", r.boundary_high}},
                  std::abs(r.value - expected) / std::max(expected, 1e-300), tol);
        ratios.push_back(lp_ratio(fm, j_min + m, j_max + m, r.value));
    }
    rep.summary["littlewood_paley_ratio"] =
        Json{{"min", number(*std::min_element(ratios.begin(), ratios.end()))},
             {"max", number(*std::max_element(ratios.begin(), ratios.end()))}};
}

void run_main_probe(const Json& P, std::uint64_t seed, Recorder& rec, Report& rep) {
    const auto N_list = P.at("N_list").get<std::vector<int>>();
    const double L = getd(P, "L"), radius = getd(P, "radius"), growth = getd(P, "max_growth");
    const ExponentTuple exps = exponent_tuple(P.at("exponents"));
    const EstimateOptions opts = estimate_options(P, seed);
    const int M = geti(P, "M"), J = geti(P, "J"), j_min = geti(P, "j_min"), j_max = geti(P, "j_max");
    require(!N_list.empty() && L > 0.0 && radius > 0.0 && radius <= 0.5 * L, "main-theorem-probe: invalid parameters");
    for (int N : N_list) require(N >= 2, "main-theorem-probe: grid sizes must be >= 2");
    require(exps.in_main_regime(), "main-theorem-probe: exponents must be in the main regime");
    const int n = static_cast<int>(exps.size());
    const BesovTriple b = besov_triple(n, exps.p());

    const ScalarFn f = fn::smooth_bump(0.5 * L, radius);
    double dsup = 0.0;
    for (int i = 0; i <= 20000; ++i) dsup = std::max(dsup, std::abs(f.eval(0.5 * L - radius + i * radius / 10000.0, n)));
    rec.current(Json{{"stage", "besov"}});
    const WaveletSystem W(M, J);
    const BesovResult bn = besov_norm(f, {b.s, b.p, b.q, j_min, j_max}, W, {});
    const double denom = dsup + bn.value;
    rep.summary["denominator"] = Json{{"derivative_sup", dsup},
                                      {"besov", bn.value},
                                      {"besov_s", b.s},
                                      {"besov_p", number(b.p)},
                                      {"besov_q", number(b.q)},
                                      {"boundary_low", bn.boundary_low},
                                      {"boundary_high", bn.boundary_high}};

    rep.csv.header = {"N", "estimate", "denominator", "ratio"};
    Json ratios = Json::object();
    std::vector<double> rs;
    for (int N : N_list) {
        rec.current(Json{{"N", N}});
        const NormEstimate e = estimate_norm(divdiff_grid(f, uniform_grid(N, L), n), exps, opts);
        const double ratio = e.value / denom;
        rs.push_back(ratio);
        ratios[std::to_string(N)] = ratio;
        rep.csv.rows.push_back({static_cast<double>(N), e.value, denom, ratio});
        rec.check(Json{{"N", N}, {"test", "finite"}, {"ratio", number(ratio)}, {"estimate", to_json(e)}},
                  std::isfinite(ratio) ? 0.0 : kInf, 0.0);
    }
    rep.summary["ratios"] = ratios;
    const double g = rs.back() / rs.front();
    rep.summary["growth"] = number(g);
    rec.check(Json{{"test", "growth"}, {"from_N", N_list.front()}, {"to_N", N_list.back()}}, g, growth);
}

}  // namespace

const std::vector<KindSpec>& experiment_kinds() { return kKinds; }

const KindSpec& kind_spec(const std::string& kind) {
    for (const auto& k : kKinds)
        if (k.kind == kind) return k;
    throw ConfigInvalid("unknown kind '" + kind + "'");
}

Json describe(const std::string& kind) {
    const KindSpec& k = kind_spec(kind);
    Json j;
    j["kind"] = k.kind;
    j["summary"] = k.summary;
    j["randomized"] = k.randomized;
    Json params = Json::array();
    for (const auto& p : k.params) {
        Json e{{"name", p.name}, {"type", p.type}};
        if (p.default_value.is_null())
            e["required"] = true;
        else
            e["default"] = p.default_value;
        e["help"] = p.help;
        params.push_back(std::move(e));
    }
    j["parameters"] = std::move(params);
    return j;
}

ExperimentConfig parse_config(const Json& doc) {
    require(doc.is_object(), "config must be a JSON object");
    for (const auto& [key, v] : doc.items())
        require(key == "schema_version" || key == "name" || key == "kind" || key == "parameters" ||
                    key == "output_path",
                "unknown top-level key '" + key + "'");
    require(doc.contains("schema_version") && doc["schema_version"].is_number_integer(),
            "schema_version must be an integer");
    require(doc["schema_version"].get<int>() == kSchemaVersion,
            "unsupported schema_version " + doc["schema_version"].dump());
    require(doc.contains("name") && doc["name"].is_string() && !doc["name"].get<std::string>().empty(),
            "name must be a nonempty string");
    require(doc.contains("kind") && doc["kind"].is_string(), "kind must be a string");

    ExperimentConfig c;
    c.name = doc["name"].get<std::string>();
    c.kind = doc["kind"].get<std::string>();
    const KindSpec& spec = kind_spec(c.kind);

    Json given = doc.value("parameters", Json::object());
    require(given.is_object(), "parameters must be an object");
    for (const auto& [key, v] : given.items()) {
        const auto it = std::find_if(spec.params.begin(), spec.params.end(),
                                     [&key](const ParamSpec& p) { return p.name == key; });
        require(it != spec.params.end(), "unknown parameter '" + key + "' for kind " + c.kind);
        require(matches(v, it->type), "parameter '" + key + "' must be of type " + it->type);
    }
    for (const auto& p : spec.params) {
        if (given.contains(p.name))
            c.parameters[p.name] = given[p.name];
        else if (p.default_value.is_null())
            throw ConfigInvalid("missing required parameter '" + p.name + "' for kind " + c.kind);
        else
            c.parameters[p.name] = p.default_value;
    }
    if (spec.randomized) require(c.parameters.contains("seed"), "seed is required for kind " + c.kind);
    for (const auto& p : spec.params) {
        if (p.type == "exponent[][]") {
            for (const auto& e : c.parameters[p.name]) static_cast<void>(exponent_tuple(e));
        } else if (p.name == "exponents") {
            static_cast<void>(exponent_tuple(c.parameters[p.name]));
        }
    }

    if (doc.contains("output_path")) {
        require(doc["output_path"].is_string(), "output_path must be a string");
        c.output_path = doc["output_path"].get<std::string>();
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigInvalid("cannot read " + path.string());
    Json doc;
    try {
        doc = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ConfigInvalid(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

std::filesystem::path report_path(const ExperimentConfig& config) {
    std::filesystem::path p = config.output_path.empty() ? std::filesystem::path(config.name + ".json")
                                                         : std::filesystem::path(config.output_path);
    if (p.is_relative()) p = output_dir(".") / p;
    return p;
}

Report run(const ExperimentConfig& config) {
    Report rep;
    rep.config = Json{{"schema_version", config.schema_version},
                      {"name", config.name},
                      {"kind", config.kind},
                      {"parameters", config.parameters}};
    if (!config.output_path.empty()) rep.config["output_path"] = config.output_path;
    rep.provenance = Json{{"version", kVersion},
                          {"fourier_convention", "g^(xi) = int g(t) exp(-2 pi i t xi) dt"},
                          {"grid", "t_k = k L / N, k = 0..N-1"},
                          {"rng", "mt19937_64"}};

    Recorder rec(rep);
    try {
        const Json& P = config.parameters;
        const std::uint64_t seed = P.contains("seed") ? P["seed"].get<std::uint64_t>() : 0;
        Rng rng(seed);
        const std::string& k = config.kind;
        if (k == "divdiff-oracle")
            run_divdiff_oracle(P, rng, rec, rep);
        else if (k == "torus-expansion")
            run_torus_expansion(P, rng, rec, rep);
        else if (k == "moi-bound")
            run_moi_bound(P, rng, rec, rep);
        else if (k == "cayley-check")
            run_cayley_check(P, rng, rec, rep);
        else if (k == "split-partition")
            run_split_partition(P, rng, rec, rep);
        else if (k == "scaling-law")
            run_scaling_law(P, rng, seed, rec, rep);
        else if (k == "toeplitz-bound")
            run_toeplitz_bound(P, seed, rec, rep);
        else if (k == "pinching")
            run_pinching(P, rng, rec, rep);
        else if (k == "besov-scaling")
            run_besov_scaling(P, rng, rec, rep);
        else if (k == "main-theorem-probe")
            run_main_probe(P, seed, rec, rep);
        else
            throw ConfigInvalid("unknown kind '" + k + "'");
    } catch (const error& e) {
        rep.error = Json{{"kind", e.kind()}, {"message", e.what()}, {"case", rec.current()}};
        rep.cases.push_back(Json{{"error", e.kind()}, {"case", rec.current()}});
        rep.passed = false;
    }
    rec.finish();
    return rep;
}

int exit_code(const Report& r) noexcept {
    if (!r.error.is_null()) return 2;
    return r.passed ? 0 : 1;
}

}  // namespace schurlab
