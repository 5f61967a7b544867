#include <doctest.h>

#include "bmc/transforms.hpp"
#include "bmc/weights.hpp"

#include <cmath>
#include <numbers>

using namespace bmc;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("Hoelder certificate of the particular weight") {
    const LogHolderWeight w = particular_weight();
    CHECK(w.K0 == doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-15));
    const auto rep = verify_holder(w, 100000, 50.0);
    CHECK(rep.pass);
}

TEST_CASE("flat weight passes trivially; linear log-weight fails with the expected ratio") {
    LogHolderWeight flat;
    flat.Omega = [](double) { return 0.0; };
    flat.K0 = 0.0;
    flat.alpha = 0.5;
    CHECK(verify_holder(flat, 1000, 10.0).pass);

    LogHolderWeight lin;
    lin.Omega = [](double x) { return x; };
    lin.K0 = 1.0;
    lin.alpha = 0.5;
    const auto rep = verify_holder(lin, 200000, 10.0);
    CHECK(!rep.pass);
    // max ratio = sqrt(max |x-y|) ~ sqrt(2 span) over dense random pairs
    CHECK(rep.max_ratio > 3.0);
    CHECK(rep.max_ratio == doctest::Approx(std::sqrt(20.0)).epsilon(0.05));
}

TEST_CASE("smoothing_time arithmetic") {
    // K0 = sqrt(2 pi), alpha = 1/2, sigma' = 0.08 -> 4/(pi 0.08^2 ... ) = 198.94
    const double t = smoothing_time(std::sqrt(kTwoPi), 0.5, 0.08);
    CHECK(t == doctest::Approx(4.0 / (kPi * 0.08 * 0.08)).epsilon(1e-12));
    CHECK(t == doctest::Approx(198.9436788648692).epsilon(1e-12));
    CHECK(smoothing_time(0.0, 0.5, 0.1) == 0.0);  // degenerate, flagged by zero
    // unit base: alpha = 2/3, K0/(pi sigma' cos(pi/3)) = 1 -> t = 1
    const double alpha = 2.0 / 3.0;
    const double sguess = 1.0 / (kPi * std::cos(kPi * alpha / 2.0));
    CHECK(smoothing_time(1.0, alpha, sguess) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(smoothing_time(1.0, 1.5, 0.1), std::invalid_argument);
}

TEST_CASE("smooth: constant log-weight is reproduced exactly") {
    LogHolderWeight c;
    c.Omega = [](double) { return 3.25; };
    c.K0 = 1e-3;  // loose certificate, quadrature error stays below it
    c.alpha = 0.5;
    c.growth_right = [](double) { return 3.25; };
    c.growth_left = [](double) { return 3.25; };
    const Grid g(-64.0, 128.0 / 8192.0, 8192);
    SmoothedWeight sm = smooth(c, 0.5, g);
    double gap = 0.0;
    for (std::size_t j = g.count / 4; j < 3 * g.count / 4; ++j)
        gap = std::max(gap, std::abs(sm.POmega.values[j].real() - 3.25));
    CHECK(gap <= 1e-9);
}

TEST_CASE("sandwich of the particular weight: sup P_t O - O = sqrt(pi t) at 0") {
    const LogHolderWeight w = particular_weight();
    for (const double t : {0.25, 1.0}) {
        const Grid g(-256.0, 512.0 / 32768.0, 32768);
        SmoothedWeight sm = smooth(w, t, g);
        double sup = 0.0, at = 0.0;
        bool nonneg = true;
        for (std::size_t j = 0; j < g.count; ++j) {
            const double x = g.point(j);
            const double d = sm.POmega.values[j].real() - w.Omega(x);
            if (d < -1e-12) nonneg = false;
            if (d > sup) { sup = d; at = x; }
        }
        CHECK(nonneg);
        CHECK(std::abs(sup - std::sqrt(kPi * t)) <= 1e-4);
        CHECK(std::abs(at) <= g.step);
        // generic certificate is exactly twice the sharp sup here
        CHECK(sm.error_bound == doctest::Approx(2.0 * std::sqrt(kPi * t)).epsilon(1e-12));
    }
}

TEST_CASE("particular closed forms: values and sup of the derivative") {
    const LogHolderWeight w = particular_weight();
    const auto& cf = *w.closed_forms;
    CHECK(cf.poisson_of_Omega(1.0, 0.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(cf.H_poisson_derivative(1.0, 0.0) ==
          doctest::Approx(-std::sqrt(kPi) / 2.0).epsilon(1e-12));
    for (const double t : {0.25, 1.0, 4.0}) {
        // scan for the sup of |H(P_t Omega)'|; oracle: sqrt(pi) 3^{3/4}/(4 sqrt t) at -t/sqrt 3
        double sup = 0.0, at = 0.0;
        for (double x = -4.0 * t; x <= 4.0 * t; x += t / 4096.0) {
            const double v = std::abs(cf.H_poisson_derivative(t, x));
            if (v > sup) { sup = v; at = x; }
        }
        const double pred = std::sqrt(kPi) * std::pow(3.0, 0.75) / (4.0 * std::sqrt(t));
        CHECK(std::abs(sup - pred) / pred <= 1e-6);
        CHECK(std::abs(at - (-t / std::sqrt(3.0))) <= t / 2048.0);
    }
    // frozen value at t = 1: 1.0100805 (scanned oracle, matches the formula)
    CHECK(std::sqrt(kPi) * std::pow(3.0, 0.75) / 4.0 == doctest::Approx(1.0100802653).epsilon(1e-9));
}

TEST_CASE("P_t Omega approaches sqrt(2 pi x) on the right") {
    const LogHolderWeight w = particular_weight();
    const auto& cf = *w.closed_forms;
    for (const double t : {0.5, 1.0}) {
        const double x = 100.0 * t;
        const double rel = cf.poisson_of_Omega(t, x) / std::sqrt(kTwoPi * x) - 1.0;
        CHECK(rel > 0.0);
        CHECK(rel <= 1.5 * t * t / (8.0 * x * x));
    }
}

TEST_CASE("quadrature route matches the closed forms of the particular weight") {
    const LogHolderWeight w = particular_weight();
    LogHolderWeight table = w;
    table.closed_forms.reset();  // force the transform path
    const double t = 1.0;
    const Grid g(-256.0, 512.0 / 65536.0, 65536);
    SmoothedWeight sm = smooth(table, t, g);
    const auto& cf = *w.closed_forms;
    double gap_p = 0.0, gap_d = 0.0;
    for (double x = -64.0; x <= 64.0; x += 0.37) {
        const double p = cf.poisson_of_Omega(t, x);
        gap_p = std::max(gap_p, std::abs(sm.POmega_fn(x) - p) / (1.0 + p));
        gap_d = std::max(gap_d, std::abs(sm.HPOmega_deriv_fn(x) - cf.H_poisson_derivative(t, x)));
    }
    CHECK(gap_p <= 1e-4);
    CHECK(gap_d <= 1e-3);
}

TEST_CASE("particular smoothing time and its scaling") {
    const double t = particular_smoothing_time(0.5, 0.2);
    CHECK(t == doctest::Approx(3.0 * std::sqrt(3.0) / (16.0 * kPi * 0.16)).epsilon(1e-15));
    // sup-norm equation of the construction
    const double lhs = std::sqrt(kPi) * std::pow(3.0, 0.75) / (4.0 * std::sqrt(t));
    CHECK(lhs == doctest::Approx(kPi * 0.4).epsilon(1e-12));
    // doubling T(1-eps) quarters t
    CHECK(particular_smoothing_time(1.0, 0.2) == doctest::Approx(t / 4.0).epsilon(1e-12));
}

TEST_CASE("epsilon weight scaling") {
    const LogHolderWeight base = particular_weight();
    const LogHolderWeight w0 = epsilon_weight(0.0);
    for (double x = -3.0; x < 10.0; x += 0.7)
        CHECK(w0.Omega(x) == doctest::Approx(base.Omega(x)).epsilon(1e-14));
    const LogHolderWeight we = epsilon_weight(0.2);
    CHECK(we.K0 == doctest::Approx(1.2 * std::sqrt(kTwoPi)).epsilon(1e-14));
    for (double x = 0.5; x < 20.0; x += 0.9) {
        CHECK(we.omega(x) <= base.omega(x));
        CHECK(we.Omega(x) / base.Omega(x) == doctest::Approx(1.2).epsilon(1e-12));
    }
}

TEST_CASE("Poisson positivity and monotonicity in the weight") {
    const Grid g(-32.0, 64.0 / 4096.0, 4096);
    TransformInput a, b;
    a.f = sample_real(g, [](double x) { return 1.0 / (1.0 + x * x); });
    b.f = sample_real(g, [](double x) { return 1.0 / (1.0 + x * x) + 0.3 * std::exp(-x * x); });
    a.growth = b.growth = GrowthClass::integrable_x2;
    SampledFunction pa = poisson(a, 0.8), pb = poisson(b, 0.8);
    for (std::size_t j = 0; j < g.count; ++j) {
        CHECK(pa.values[j].real() >= 0.0);
        CHECK(pb.values[j].real() >= pa.values[j].real() - 1e-14);
    }
}

TEST_CASE("weight descriptors load from JSON") {
    const LogHolderWeight p = weight_from_json(R"({"kind":"particular"})");
    CHECK(p.Omega(2.0) == doctest::Approx(std::sqrt(kTwoPi * 2.0)));
    const LogHolderWeight pe = weight_from_json(R"({"kind":"particular_eps","epsilon":0.25})");
    CHECK(pe.Omega(2.0) == doctest::Approx(1.25 * std::sqrt(kTwoPi * 2.0)));
    const LogHolderWeight tw = weight_from_json(
        R"({"kind":"table","K0":1.0,"alpha":0.5,"table":[[-1.0,0.0],[0.0,1.0],[2.0,2.0]]})");
    CHECK(tw.Omega(-0.5) == doctest::Approx(0.5));
    CHECK(tw.Omega(1.0) == doctest::Approx(1.5));
    CHECK(tw.Omega(5.0) == doctest::Approx(2.0));  // constant extension
    CHECK_THROWS_AS(weight_from_json(R"({"kind":"unknown"})"), std::invalid_argument);
}

TEST_CASE("smooth rejects an impossible certificate") {
    LogHolderWeight lying = particular_weight();
    lying.K0 = 0.01;  // claims far more regularity than the weight has
    const Grid g(-64.0, 128.0 / 8192.0, 8192);
    CHECK_THROWS_AS(smooth(lying, 1.0, g), std::runtime_error);
}
