#include "bmc/weights.hpp"

#include "bmc/transforms.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace bmc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

HolderReport verify_holder(const LogHolderWeight& w, std::size_t pairs, double span,
                           std::uint64_t seed) {
    if (pairs < 100) throw std::invalid_argument("verify_holder: pairs must be >= 100");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-span, span);
    HolderReport rep;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double x = U(rng), y = U(rng);
        if (x == y) continue;
        const double lhs = std::abs(w.Omega(x) - w.Omega(y));
        const double rhs = w.K0 * std::pow(std::abs(x - y), w.alpha) + 1e-9;
        const double ratio = lhs / rhs;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst_x = x;
            rep.worst_y = y;
        }
    }
    rep.pass = rep.max_ratio <= 1.0 + 1e-9;
    return rep;
}

double smoothing_time(double K0, double alpha, double sigma_prime) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("smoothing_time: alpha must lie in (0,1)");
    if (!(sigma_prime > 0.0))
        throw std::invalid_argument("smoothing_time: sigma' must be > 0");
    if (K0 == 0.0) return 0.0;  // degenerate: flat weight, nothing to smooth
    const double base = K0 / (kPi * sigma_prime * std::cos(kPi * alpha / 2.0));
    return std::pow(base, 1.0 / (1.0 - alpha));
}

SmoothedWeight smooth(const LogHolderWeight& w, double t, const Grid& grid) {
    if (!(t > 0.0)) throw std::invalid_argument("smooth: t must be > 0");
    SmoothedWeight out;
    out.t = t;
    const double cosa = std::cos(kPi * w.alpha / 2.0);
    out.error_bound = w.K0 * std::pow(t, w.alpha) / cosa;
    out.deriv_bound = w.K0 * std::pow(t, w.alpha - 1.0) / cosa;

    // C_t(Omega): used by H(P_t Omega) = tilde Q_t Omega + C_t(Omega)
    {
        TransformInput ti;
        ti.f = sample_real(grid, w.Omega);
        ti.growth = GrowthClass::integrable_x2;
        ti.envelope_right = w.growth_right;
        ti.envelope_left = w.growth_left;
        out.ct = ct_constant(ti, t).value;
    }

    if (w.closed_forms) {
        const auto cf = *w.closed_forms;
        const double ct = out.ct;
        out.POmega_fn = [cf, t](double x) { return cf.poisson_of_Omega(t, x); };
        out.HPOmega_fn = [cf, t, ct](double x) {
            return cf.conj_poisson_kober_of_Omega(t, x) + ct;
        };
        out.HPOmega_deriv_fn = [cf, t](double x) { return cf.H_poisson_derivative(t, x); };
        out.POmega = sample_real(grid, out.POmega_fn);
    } else {
        TransformInput ti;
        ti.f = sample_real(grid, w.Omega);
        ti.growth = GrowthClass::integrable_x2;
        ti.envelope_right = w.growth_right;
        ti.envelope_left = w.growth_left;
        out.POmega = poisson(ti, t);
        SampledFunction hp = conj_poisson_kober(ti, t);
        const double ct = out.ct;
        // cubic interpolation handles of the sampled transforms
        auto interp = [grid](std::vector<double> vals) {
            return [grid, vals = std::move(vals)](double x) {
                const double pos = (x - grid.x_min) / grid.step;
                const auto n = static_cast<long long>(vals.size());
                long long j = static_cast<long long>(std::floor(pos));
                j = std::clamp<long long>(j, 1, n - 3);
                const double u = pos - static_cast<double>(j);
                const double p0 = vals[j - 1], p1 = vals[j], p2 = vals[j + 1], p3 = vals[j + 2];
                return (-u * (u - 1) * (u - 2) / 6.0) * p0 + ((u + 1) * (u - 1) * (u - 2) / 2.0) * p1 +
                       (-(u + 1) * u * (u - 2) / 2.0) * p2 + ((u + 1) * u * (u - 1) / 6.0) * p3;
            };
        };
        std::vector<double> pv(grid.count), hv(grid.count), dv(grid.count);
        for (std::size_t j = 0; j < grid.count; ++j) {
            pv[j] = out.POmega.values[j].real();
            hv[j] = hp.values[j].real() + ct;
        }
        for (std::size_t j = 0; j < grid.count; ++j) {
            const std::size_t jm = j == 0 ? 0 : j - 1;
            const std::size_t jp = j + 1 >= grid.count ? grid.count - 1 : j + 1;
            dv[j] = (hv[jp] - hv[jm]) / (grid.step * static_cast<double>(jp - jm));
        }
        out.POmega_fn = interp(std::move(pv));
        out.HPOmega_fn = interp(std::move(hv));
        out.HPOmega_deriv_fn = interp(std::move(dv));
    }

    // verify the certified error bound against the sampled sup
    double sup_err = 0.0, sup_deriv = 0.0;
    for (std::size_t j = 0; j < grid.count; ++j) {
        const double x = grid.point(j);
        sup_err = std::max(sup_err, std::abs(out.POmega.values[j].real() - w.Omega(x)));
        sup_deriv = std::max(sup_deriv, std::abs(out.HPOmega_deriv_fn(x)));
    }
    if (sup_err > out.error_bound * (1.0 + 1e-3))
        throw std::runtime_error("smooth: sampled sup |P_t O - O| exceeds the certificate");
    out.deriv_sup = w.closed_forms ? sup_deriv : std::min(sup_deriv, out.deriv_bound);
    if (sup_deriv > out.deriv_bound * (1.0 + 1e-3))
        throw std::runtime_error("smooth: sampled sup |H(P_t O)'| exceeds the certificate");
    return out;
}

LogHolderWeight particular_weight() {
    LogHolderWeight w;
    w.Omega = [](double x) { return x > 0.0 ? std::sqrt(kTwoPi * x) : 0.0; };
    w.K0 = std::sqrt(kTwoPi);
    w.alpha = 0.5;
    w.omega_bound = 1.0;
    w.growth_right = [](double y) { return y > 0.0 ? std::sqrt(kTwoPi * y) : 0.0; };
    w.growth_left = nullptr;  // Omega vanishes on the left
    LogHolderWeight::ClosedForms cf;
    cf.poisson_of_Omega = [](double t, double x) {
        return std::sqrt(kPi * (std::hypot(x, t) + x));
    };
    cf.conj_poisson_kober_of_Omega = [](double t, double x) {
        return -std::sqrt(kPi) + std::sqrt(kPi * (std::hypot(x, t) - x));
    };
    cf.H_poisson_derivative = [](double t, double x) {
        const double r = std::hypot(x, t);
        return -std::sqrt(kPi * (r - x)) / (2.0 * r);
    };
    w.closed_forms = cf;
    return w;
}

LogHolderWeight epsilon_weight(double eps) {
    if (!(eps >= 0.0 && eps < 1.0))
        throw std::invalid_argument("epsilon_weight: eps must lie in [0,1)");
    LogHolderWeight w = particular_weight();
    const double s = 1.0 + eps;
    auto base = particular_weight();
    w.Omega = [base, s](double x) { return s * base.Omega(x); };
    w.K0 = s * std::sqrt(kTwoPi);
    w.growth_right = [s](double y) { return y > 0.0 ? s * std::sqrt(kTwoPi * y) : 0.0; };
    LogHolderWeight::ClosedForms cf = *base.closed_forms;
    w.closed_forms = LogHolderWeight::ClosedForms{
        [cf, s](double t, double x) { return s * cf.poisson_of_Omega(t, x); },
        [cf, s](double t, double x) { return s * cf.conj_poisson_kober_of_Omega(t, x); },
        [cf, s](double t, double x) { return s * cf.H_poisson_derivative(t, x); }};
    return w;
}

double particular_smoothing_time(double T, double eps) {
    if (!(T > 0.0)) throw std::invalid_argument("particular_smoothing_time: T must be > 0");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("particular_smoothing_time: eps must lie in (0,1)");
    const double d = T * (1.0 - eps);
    return 3.0 * std::sqrt(3.0) / (16.0 * kPi * d * d);
}

LogHolderWeight weight_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "particular") return particular_weight();
    if (kind == "particular_eps") return epsilon_weight(j.at("epsilon").get<double>());
    if (kind != "table") throw std::invalid_argument("weight_from_json: unknown kind " + kind);
    auto table = j.at("table").get<std::vector<std::pair<double, double>>>();
    if (table.size() < 2) throw std::invalid_argument("weight_from_json: table too short");
    std::sort(table.begin(), table.end());
    LogHolderWeight w;
    w.K0 = j.at("K0").get<double>();
    w.alpha = j.at("alpha").get<double>();
    w.Omega = [table](double x) {
        if (x <= table.front().first) return table.front().second;
        if (x >= table.back().first) return table.back().second;
        auto it = std::upper_bound(table.begin(), table.end(), std::make_pair(x, -1e300));
        const auto [x1, y1] = *it;
        const auto [x0, y0] = *(it - 1);
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    };
    // constant extension beyond the table
    const double cr = std::abs(table.back().second), cl = std::abs(table.front().second);
    w.growth_right = [cr](double) { return cr; };
    w.growth_left = [cl](double) { return cl; };
    return w;
}

}  // namespace bmc
