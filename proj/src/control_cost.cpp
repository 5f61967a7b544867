#include "bmc/control_cost.hpp"

#include "bmc/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace bmc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// cyclic Jacobi for a real symmetric matrix (row-major), eigenvalues only
std::vector<double> jacobi_eigenvalues(std::vector<double> A, std::size_t n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A[p * n + q] * A[p * n + q];
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (A[q * n + q] - A[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = A[i * n + p], aiq = A[i * n + q];
                    A[i * n + p] = c * aip - s * aiq;
                    A[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = A[p * n + i], aqi = A[q * n + i];
                    A[p * n + i] = c * api - s * aqi;
                    A[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = A[i * n + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Gram matrix G_lm = <psi_l, psi_m> / (b_l b_m), trapezoid on [0, T]
std::vector<cplx> gram_matrix(const BiorthogonalFamily& fam, std::size_t K) {
    const std::size_t nt = fam.time_grid.count;
    const double dt = fam.time_grid.step;
    std::vector<cplx> G(K * K);
    const long long kk = static_cast<long long>(K);
#pragma omp parallel for schedule(static) if (par::enabled())
    for (long long l = 0; l < kk; ++l) {
        for (std::size_t m2 = 0; m2 <= static_cast<std::size_t>(l); ++m2) {
            cplx acc = 0.0;
            const cplx* pl = fam.psi[static_cast<std::size_t>(l)].data();
            const cplx* pm = fam.psi[m2].data();
            for (std::size_t j = 0; j < nt; ++j) {
                const double w = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
                acc += w * pl[j] * std::conj(pm[j]);
            }
            acc *= dt / (b_coefficient(static_cast<std::size_t>(l) + 1) * b_coefficient(m2 + 1));
            G[static_cast<std::size_t>(l) * K + m2] = acc;
            G[m2 * K + static_cast<std::size_t>(l)] = std::conj(acc);
        }
    }
    return G;
}

double lambda_max_hermitian(const std::vector<cplx>& G, std::size_t K) {
    // real symmetric embedding [[Re, -Im], [Im, Re]]: same spectrum, doubled
    const std::size_t n = 2 * K;
    std::vector<double> A(n * n, 0.0);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            const cplx z = G[i * K + j];
            A[i * n + j] = z.real();
            A[i * n + (K + j)] = -z.imag();
            A[(K + i) * n + j] = z.imag();
            A[(K + i) * n + (K + j)] = z.real();
        }
    const auto ev = jacobi_eigenvalues(std::move(A), n);
    const double lmax = ev.back();
    if (ev.front() < -1e-10 * std::max(1.0, lmax))
        throw std::runtime_error("empirical_cost: Gram matrix not numerically PSD");
    return lmax;
}
}  // namespace

double b_coefficient(std::size_t k) {
    if (k == 0) throw std::invalid_argument("b_coefficient: k >= 1");
    return std::sqrt(2.0);
}

double InitialData::norm() const {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
}

std::vector<cplx> moment_residuals(const std::vector<cplx>& u, const InitialData& a,
                                   const BiorthogonalFamily& fam, std::size_t K_check) {
    const std::size_t nt = fam.time_grid.count;
    const double dt = fam.time_grid.step;
    const double T = fam.T;
    std::vector<cplx> r(K_check);
    const long long kk = static_cast<long long>(K_check);
#pragma omp parallel for schedule(static) if (par::enabled())
    for (long long k = 1; k <= kk; ++k) {
        const double lam = lambda_of(static_cast<std::size_t>(k));
        cplx I = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            const double w = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
            I += w * std::polar(1.0, lam * fam.time_grid.point(j)) * u[j];
        }
        I *= dt;
        const cplx ak = static_cast<std::size_t>(k) <= a.a.size() ? a.a[static_cast<std::size_t>(k) - 1]
                                                                  : cplx(0.0, 0.0);
        r[static_cast<std::size_t>(k) - 1] =
            std::polar(1.0, -lam * T) * (ak + b_coefficient(static_cast<std::size_t>(k)) * I);
    }
    return r;
}

ControlResult synthesize_control(const InitialData& a, const BiorthogonalFamily& fam,
                                 std::size_t K_check) {
    if (a.a.size() > fam.K)
        throw std::invalid_argument("synthesize_control: more modes than the family carries");
    if (K_check == 0) K_check = std::max(a.a.size(), fam.K);
    ControlResult res;
    res.time_grid = fam.time_grid;
    const std::size_t nt = fam.time_grid.count;
    res.u.assign(nt, cplx(0.0, 0.0));
    for (std::size_t l = 1; l <= a.a.size(); ++l) {
        const cplx c = -a.a[l - 1] / b_coefficient(l);
        const cplx* pl = fam.psi[l - 1].data();
        for (std::size_t j = 0; j < nt; ++j) res.u[j] += c * pl[j];
    }
    res.residuals = moment_residuals(res.u, a, fam, K_check);
    const double an = a.norm();
    double un = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
        const double w = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
        un += w * std::norm(res.u[j]);
    }
    un = std::sqrt(un * fam.time_grid.step);
    res.cost_defined = an > 0.0;
    res.cost = res.cost_defined ? un / an : 0.0;
    res.certified_exponent = std::pow(3.0, 0.75) * (1.0 + fam.eps) /
                             (4.0 * fam.T * (1.0 - fam.eps) * (1.0 - fam.eps));
    return res;
}

double empirical_cost(const BiorthogonalFamily& fam, std::size_t K) {
    if (K > fam.K) throw std::invalid_argument("empirical_cost: K > family size");
    return std::sqrt(lambda_max_hermitian(gram_matrix(fam, K), K));
}

double empirical_cost_power(const BiorthogonalFamily& fam, std::size_t K, std::uint64_t seed,
                            int iters) {
    const auto G = gram_matrix(fam, K);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01(0.0, 1.0);
    std::vector<cplx> v(K);
    for (auto& z : v) z = cplx(N01(rng), N01(rng));
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<cplx> w(K, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j) w[i] += G[i * K + j] * v[j];
        double nn = 0.0;
        for (const auto& z : w) nn += std::norm(z);
        nn = std::sqrt(nn);
        if (nn == 0.0) return 0.0;
        for (std::size_t i = 0; i < K; ++i) v[i] = w[i] / nn;
        if (std::abs(nn - lam) < 1e-14 * nn && it > 8) { lam = nn; break; }
        lam = nn;
    }
    return std::sqrt(lam);
}

CostCurve cost_sweep(const std::vector<double>& T_list, double eps, std::size_t K,
                     const SweepOptions& opts) {
    if (T_list.empty()) throw std::invalid_argument("cost_sweep: empty T list");
    for (std::size_t i = 1; i < T_list.size(); ++i)
        if (!(T_list[i] < T_list[i - 1]))
            throw std::invalid_argument("cost_sweep: T list must be strictly decreasing");
    CostCurve curve;
    for (const double T : T_list) {
        CostRow row;
        row.T = T;
        row.epsilon = eps;
        row.K = K;
        row.certified_ceiling =
            std::pow(3.0, 0.75) * (1.0 + eps) / (4.0 * (1.0 - eps) * (1.0 - eps));
        bool skip = false;
        for (const double s : opts.skip_T)
            if (std::abs(s - T) < 1e-12) skip = true;
        if (skip) continue;
        try {
            ParticularOptions mo = opts.multiplier;
            mo.variant = true;
            // the left spectral window scales with A ~ 1/(T eps^2); widen the
            // multiplier grid for the small-T rows
            const double A = 6.0 / (kPi * T * eps * eps * (1.0 - eps));
            FamilyOptions fo = opts.family;
            const double WL = std::max(fo.wl_min, fo.wl_A * A);
            const double need = WL + mu_of(K) + 64.0;
            while (mo.x_half < need) {
                mo.x_half *= 2.0;
                mo.count *= 2;
            }
            MultiplierResult mult = build_multiplier_particular(T, eps, mo);
            BiorthogonalFamily fam = build_family(T, eps, K, mult, fo);
            const double cost = empirical_cost(fam, K);
            row.cost = cost;
            row.T_log_cost = T * std::log(cost);
            row.biorth_dev = biorth_matrix(fam, K).max_deviation;
            row.support_leakage = *std::max_element(fam.support_leakage.begin(),
                                                    fam.support_leakage.end());
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        curve.rows.push_back(row);
        if (opts.row_sink) opts.row_sink(row);
    }
    return curve;
}

std::string CostCurve::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "T,epsilon,K,cost,T_log_cost,certified_ceiling,biorth_dev,support_leakage,error\n";
    for (const auto& r : rows) {
        os << std::scientific << r.T << "," << r.epsilon << "," << r.K << "," << r.cost << ","
           << r.T_log_cost << "," << r.certified_ceiling << "," << r.biorth_dev << ","
           << r.support_leakage << "," << r.error << "\n";
    }
    return os.str();
}

std::string CostCurve::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows) {
        rs.push_back({{"T", r.T},
                      {"epsilon", r.epsilon},
                      {"K", r.K},
                      {"cost", r.cost},
                      {"T_log_cost", r.T_log_cost},
                      {"certified_ceiling", r.certified_ceiling},
                      {"biorth_dev", r.biorth_dev},
                      {"support_leakage", r.support_leakage},
                      {"error", r.error}});
    }
    j["rows"] = std::move(rs);
    return j.dump(2);
}

double hilbert_form_check(std::size_t N) {
    if (N < 2) throw std::invalid_argument("hilbert_form_check: N >= 2");
    std::vector<double> v(N, 1.0 / std::sqrt(static_cast<double>(N))), w(N);
    double lam = 0.0;
    for (int it = 0; it < 600; ++it) {
        const long long nn = static_cast<long long>(N);
#pragma omp parallel for schedule(static) if (par::enabled())
        for (long long i = 0; i < nn; ++i) {
            double acc = 0.0;
            for (long long j = 0; j < nn; ++j)
                acc += v[static_cast<std::size_t>(j)] / (1.0 + static_cast<double>(std::abs(i - j)));
            w[static_cast<std::size_t>(i)] = acc;
        }
        double nn2 = 0.0;
        for (const double x : w) nn2 += x * x;
        nn2 = std::sqrt(nn2);
        for (std::size_t i = 0; i < N; ++i) v[i] = w[i] / nn2;
        if (std::abs(nn2 - lam) < 1e-12 * nn2 && it > 4) return nn2;
        lam = nn2;
    }
    return lam;
}

}  // namespace bmc
