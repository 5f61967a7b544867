#include <doctest.h>

#include "bmc/control_cost.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace bmc;

namespace {
constexpr double kPi = std::numbers::pi;

const BiorthogonalFamily& ref_family() {
    static BiorthogonalFamily fam = [] {
        ParticularOptions po;
        po.variant = true;
        MultiplierResult r = build_multiplier_particular(0.5, 0.2, po);
        return build_family(0.5, 0.2, 15, r);
    }();
    return fam;
}
}  // namespace

TEST_CASE("b coefficient is sqrt(2) for every mode") {
    CHECK(b_coefficient(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(b_coefficient(100) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    // pre-build symbolic oracle: b_k = -(Delta^-1 e_k)'(0), Delta^-1 e_k = -e_k/lambda_k,
    // e_k'(0) = sqrt(2) k pi * k pi; finite-difference check of e_k'(0)/lambda_k
    for (const std::size_t k : {1ul, 7ul, 100ul}) {
        const double kk = static_cast<double>(k);
        auto ek = [kk](double x) { return std::sqrt(2.0) * kk * kPi * std::sin(kk * kPi * x); };
        const double h = 1e-7 / (kk * kPi);
        const double deriv0 = (ek(h) - ek(-h)) / (2.0 * h);
        CHECK(deriv0 / lambda_of(k) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(b_coefficient(0), std::invalid_argument);
}

TEST_CASE("single-mode control: u = -psi_1/sqrt(2), tiny residuals") {
    const BiorthogonalFamily& fam = ref_family();
    InitialData a;
    a.a = {cplx(1.0, 0.0)};
    const ControlResult res = synthesize_control(a, fam, 15);
    CHECK(res.cost_defined);
    for (std::size_t j = 0; j < res.u.size(); j += 499)
        CHECK(std::abs(res.u[j] + fam.psi[0][j] / std::sqrt(2.0)) <= 1e-14);
    for (const auto& r : res.residuals) CHECK(std::abs(r) <= 1e-3);
    CHECK(res.certified_exponent ==
          doctest::Approx(std::pow(3.0, 0.75) * 1.2 / (4.0 * 0.5 * 0.64)).epsilon(1e-12));
}

TEST_CASE("zero data is flagged, superposition is exact") {
    const BiorthogonalFamily& fam = ref_family();
    InitialData zero;
    zero.a = {cplx(0.0, 0.0), cplx(0.0, 0.0)};
    const ControlResult rz = synthesize_control(zero, fam);
    CHECK(!rz.cost_defined);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> N01(0.0, 1.0);
    InitialData a, b, ab;
    for (int i = 0; i < 6; ++i) {
        a.a.push_back(cplx(N01(rng), N01(rng)));
        b.a.push_back(cplx(N01(rng), N01(rng)));
        ab.a.push_back(a.a.back() + b.a.back());
    }
    const ControlResult ra = synthesize_control(a, fam);
    const ControlResult rb = synthesize_control(b, fam);
    const ControlResult rab = synthesize_control(ab, fam);
    double gap = 0.0;
    for (std::size_t j = 0; j < ra.u.size(); j += 97)
        gap = std::max(gap, std::abs(rab.u[j] - ra.u[j] - rb.u[j]));
    CHECK(gap <= 1e-12 * (1.0 + std::abs(rab.u[0])));
}

TEST_CASE("moment residuals on ten random modes stay below 1e-2 (target 1e-3)") {
    const BiorthogonalFamily& fam = ref_family();
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N01(0.0, 1.0);
    InitialData a;
    for (int i = 0; i < 10; ++i) a.a.push_back(cplx(N01(rng), N01(rng)));
    const ControlResult res = synthesize_control(a, fam, 10);
    double rn = 0.0;
    for (const auto& r : res.residuals) rn += std::norm(r);
    rn = std::sqrt(rn);
    CHECK(rn <= 1e-2 * a.norm());
    CHECK(rn <= 1e-3 * a.norm());  // the sharper target holds at reference parameters
    // spillover report on inactive modes stays bounded by |a_k| + quadrature terms
    const std::vector<cplx> spill = moment_residuals(res.u, a, fam, 15);
    for (std::size_t k = 10; k < 15; ++k) CHECK(std::abs(spill[k]) <= 1.0);
}

TEST_CASE("phase-factoring identity of the residual") {
    // r_k = e^{-i lambda_k T}(a_k + b_k int e^{i lambda_k s} u ds): zero exactly
    // when the moment equation holds; verified against a hand quadrature
    const BiorthogonalFamily& fam = ref_family();
    InitialData a;
    a.a = {cplx(0.3, -0.4), cplx(-0.1, 0.9)};
    const ControlResult res = synthesize_control(a, fam, 2);
    for (std::size_t k = 1; k <= 2; ++k) {
        cplx I = 0.0;
        const auto& tg = fam.time_grid;
        for (std::size_t j = 0; j < tg.count; ++j) {
            const double w = (j == 0 || j + 1 == tg.count) ? 0.5 : 1.0;
            I += w * std::polar(1.0, lambda_of(k) * tg.point(j)) * res.u[j];
        }
        I *= tg.step;
        const cplx rk = std::polar(1.0, -lambda_of(k) * fam.T) *
                        (a.a[k - 1] + b_coefficient(k) * I);
        CHECK(std::abs(rk - res.residuals[k - 1]) <= 1e-12);
    }
}

TEST_CASE("empirical cost: rank-one case, independent maximizer, monotone in K") {
    const BiorthogonalFamily& fam = ref_family();
    // K = 1: cost = ||psi_1||_2 / sqrt(2)
    double n1 = 0.0;
    const auto& tg = fam.time_grid;
    for (std::size_t j = 0; j < tg.count; ++j) {
        const double w = (j == 0 || j + 1 == tg.count) ? 0.5 : 1.0;
        n1 += w * std::norm(fam.psi[0][j]);
    }
    n1 = std::sqrt(n1 * tg.step);
    CHECK(empirical_cost(fam, 1) == doctest::Approx(n1 / std::sqrt(2.0)).epsilon(1e-10));

    const double c15 = empirical_cost(fam, 15);
    const double p15 = empirical_cost_power(fam, 15, 11);
    CHECK(std::abs(c15 - p15) <= 1e-6 * c15);

    double prev = 0.0;
    for (const std::size_t K : {1ul, 4ul, 8ul, 15ul}) {
        const double c = empirical_cost(fam, K);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
}

TEST_CASE("Parseval consistency of the control norm") {
    const BiorthogonalFamily& fam = ref_family();
    std::mt19937_64 rng(13);
    std::normal_distribution<double> N01(0.0, 1.0);
    InitialData a;
    for (int i = 0; i < 15; ++i) a.a.push_back(cplx(N01(rng), N01(rng)));
    const ControlResult res = synthesize_control(a, fam);
    // Gram form: ||u||^2 = sum (a_l/b_l) conj(a_m/b_m) <psi_l, psi_m>
    cplx q = 0.0;
    for (std::size_t l = 0; l < 15; ++l)
        for (std::size_t m = 0; m < 15; ++m) {
            cplx ip = 0.0;
            for (std::size_t j = 0; j < fam.time_grid.count; ++j) {
                const double w = (j == 0 || j + 1 == fam.time_grid.count) ? 0.5 : 1.0;
                ip += w * fam.psi[l][j] * std::conj(fam.psi[m][j]);
            }
            ip *= fam.time_grid.step;
            q += (a.a[l] / std::sqrt(2.0)) * std::conj(a.a[m] / std::sqrt(2.0)) * ip;
        }
    const double u2 = res.cost * a.norm();
    CHECK(std::abs(std::sqrt(q.real()) - u2) <= 1e-6 * u2);
}

TEST_CASE("hilbert form eigenvalues against the brute-force oracle") {
    CHECK(hilbert_form_check(2) == doctest::Approx(1.5).epsilon(1e-9));
    // frozen pre-build values (power iteration on the dense matrix)
    CHECK(hilbert_form_check(64) == doctest::Approx(6.734705062).epsilon(1e-6));
    CHECK(hilbert_form_check(256) == doctest::Approx(9.423798748).epsilon(1e-6));
    CHECK(hilbert_form_check(1024) == doctest::Approx(12.173092360).epsilon(1e-6));
    // growth envelope 1 + 2 ln N (measured: the pi+1 guess fails well before 4096)
    for (const std::size_t N : {64ul, 256ul, 1024ul}) {
        const double lam = hilbert_form_check(N);
        CHECK(lam <= 1.0 + 2.0 * std::log(static_cast<double>(N)));
        CHECK(lam >= 1.5);
    }
    CHECK_THROWS_AS(hilbert_form_check(1), std::invalid_argument);
}

TEST_CASE("cost sweep input validation") {
    CHECK_THROWS_AS(cost_sweep({}, 0.2, 4), std::invalid_argument);
    CHECK_THROWS_AS(cost_sweep({0.2, 0.3}, 0.2, 4), std::invalid_argument);  // not decreasing
}

TEST_CASE("cost curve serialization schema") {
    CostCurve c;
    CostRow r;
    r.T = 0.5;
    r.epsilon = 0.2;
    r.K = 4;
    r.cost = 2.0;
    r.T_log_cost = 0.5 * std::log(2.0);
    r.certified_ceiling = 1.0685;
    c.rows.push_back(r);
    const std::string csv = c.to_csv();
    CHECK(csv.find("T,epsilon,K,cost,T_log_cost,certified_ceiling,biorth_dev,support_leakage,error") == 0);
    const std::string js = c.to_json();
    CHECK(js.find("schema_version") != std::string::npos);
    // determinism: identical calls produce identical bytes
    CHECK(csv == c.to_csv());
    CHECK(js == c.to_json());
}
