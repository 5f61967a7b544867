#include "bmc/multiplier.hpp"

#include "bmc/fft.hpp"
#include "bmc/interp.hpp"
#include "bmc/kernels.hpp"
#include "bmc/parallel.hpp"
#include "bmc/quadrature.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bmc {

namespace {
constexpr double kPi = std::numbers::pi;

ConvRoute parse_route(const std::string& s) {
    if (s == "serial") return ConvRoute::serial;
    if (s == "omp") return ConvRoute::omp;
    if (s == "fft") return ConvRoute::fft;
    return ConvRoute::automatic;
}

struct ExtendedGrid {
    Grid inner;
    Grid ext;
    std::size_t pad_cells = 0;
};

ExtendedGrid make_grids(const BuildOptions& opts) {
    if (!is_pow2(opts.count)) throw std::invalid_argument("BuildOptions: count must be a power of two");
    ExtendedGrid eg;
    const double h = 2.0 * opts.x_half / static_cast<double>(opts.count);
    eg.pad_cells = static_cast<std::size_t>(std::llround(opts.pad / h));
    eg.inner = Grid(-opts.x_half, h, opts.count);
    eg.ext = Grid(-opts.x_half - static_cast<double>(eg.pad_cells) * h, h,
                  opts.count + 2 * eg.pad_cells);
    return eg;
}

}  // namespace

namespace detail {

// Atomization sum: out_i += sum_J -log|x_i - x_J|. The per-point loop is the
// hot kernel of the build; serial flavour kept for the benchmark/tests.
void atom_log_sum(const Grid& g, const std::vector<double>& jumps, std::vector<double>& out,
                  bool use_omp) {
    const long long n = static_cast<long long>(g.count);
#pragma omp parallel for schedule(static) if (use_omp && par::enabled())
    for (long long i = 0; i < n; ++i) {
        const double x = g.point(static_cast<std::size_t>(i));
        double acc = 0.0;
        for (const double xj : jumps) acc -= std::log(std::abs(x - xj) + 1e-300);
        out[static_cast<std::size_t>(i)] += acc;
    }
}

// H(s) on the grid via integration by parts:
//   H(s)(x) = (1/pi)[ s K_x |_{ends} - int s0'(y) K_x(y) dy ] + sum_J K_x(x_J),
//   K_x(y) = -log|x-y| + log(1+y^2)/2,
// which turns the -pi jumps of s into exact log atoms and leaves a smooth
// convolution integrand.
std::vector<double> hilbert_of_atomized(const Grid& g, const std::vector<double>& s,
                                        const std::vector<double>& s0p,
                                        const std::vector<double>& jumps, ConvRoute route) {
    const std::size_t n = g.count;
    const double h = g.step;
    const double xlo = g.x_min, xhi = g.x_max();

    // smooth part: sum_j s0p_j * cell integral of -log|x-y|
    const KernelTable nl = neglog_cells(h, n);
    std::vector<double> int_neglog = convolve(s0p, nl, route);
    // remove the outer half-cells the cell rule covers beyond [xlo, xhi];
    // int_a^b -log|x-y| dy = F(b-x) - F(a-x) with F(u) = u - u log|u|
    auto F = [](double u) { return u == 0.0 ? 0.0 : u - u * std::log(std::abs(u)); };
    auto seg = [&](double a, double b, double x) { return F(b - x) - F(a - x); };
    double second = 0.0;  // 0.5 * int s0p log(1+y^2) dy (trapezoid)
    for (std::size_t j = 0; j < n; ++j) {
        const double y = g.point(j);
        const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        second += w * s0p[j] * 0.5 * std::log1p(y * y);
    }
    second *= h;

    double atoms_const = 0.0;
    for (const double xj : jumps) atoms_const += 0.5 * std::log1p(xj * xj);

    std::vector<double> M(n, 0.0);
    atom_log_sum(g, jumps, M, true);

    const double sx = s[n - 1], smx = s[0];
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (par::enabled())
    for (long long i = 0; i < nn; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const double x = g.point(iu);
        double neglog = int_neglog[iu];
        neglog -= s0p[0] * seg(xlo - 0.5 * h, xlo, x);
        neglog -= s0p[n - 1] * seg(xhi, xhi + 0.5 * h, x);
        const double Khi = -std::log(std::abs(x - xhi) + 1e-300) + 0.5 * std::log1p(xhi * xhi);
        const double Klo = -std::log(std::abs(x - xlo) + 1e-300) + 0.5 * std::log1p(xlo * xlo);
        M[iu] += atoms_const + (sx * Khi - smx * Klo - (neglog + second)) / kPi;
    }
    return M;
}

}  // namespace detail

WellPreparedWeight prepare(const MultiplierRequest& req, const SmoothedWeight& sm,
                           const BuildOptions& opts) {
    if (!(req.sigma_prime > 0.0 && req.sigma_prime < req.sigma))
        throw std::invalid_argument("prepare: need 0 < sigma' < sigma");
    if (sm.deriv_sup > kPi * req.sigma_prime * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "prepare: measured sup |H(P_t Omega)'| = " << sm.deriv_sup
           << " exceeds pi sigma' = " << kPi * req.sigma_prime;
        throw std::invalid_argument(os.str());
    }
    const ConvRoute route = parse_route(opts.conv);
    const ExtendedGrid eg = make_grids(opts);
    const Grid& ge = eg.ext;
    const double sigma = req.sigma, A = 6.0 / (kPi * (sigma - req.sigma_prime));

    auto s0_of = [&](double y) {
        return kPi * sigma * y + sm.HPOmega_fn(y) - 6.0 * std::atan(y / A);
    };
    auto s0p_of = [&](double y) {
        return kPi * sigma + sm.HPOmega_deriv_fn(y) - 6.0 * A / (y * y + A * A);
    };

    const std::size_t ne = ge.count;
    std::vector<double> s0e(ne), spe(ne), se(ne);
    std::vector<long long> ke(ne);
    double min_inc = 1e300;
    for (std::size_t j = 0; j < ne; ++j) {
        s0e[j] = s0_of(ge.point(j));
        spe[j] = s0p_of(ge.point(j));
        if (j > 0) min_inc = std::min(min_inc, s0e[j] - s0e[j - 1]);
    }
    if (min_inc < 0.0)
        throw std::runtime_error("prepare: s0 is not monotone on the grid (grid too coarse)");
    long long prev_k = std::numeric_limits<long long>::min();
    for (std::size_t j = 0; j < ne; ++j) {
        // half-step hysteresis: never let rounding pull k back down
        auto kj = static_cast<long long>(std::floor(s0e[j] / kPi));
        prev_k = std::max(prev_k, kj);
        ke[j] = prev_k;
        se[j] = s0e[j] - kPi * static_cast<double>(prev_k) - kPi / 2.0;
    }

    // jump abscissas: bisect s0(x) = n pi between samples where k increments
    std::vector<double> jumps;
    jumps.reserve(static_cast<std::size_t>(sigma * ge.span()) + 8);
    for (std::size_t j = 0; j + 1 < ne; ++j) {
        const long long dk = ke[j + 1] - ke[j];
        if (dk == 0) continue;
        if (dk > 1)
            throw std::runtime_error("prepare: multiple atomization jumps per cell (grid too coarse)");
        const double target = kPi * static_cast<double>(ke[j + 1]);
        double a = ge.point(j), b = ge.point(j + 1);
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            (s0_of(m) > target ? b : a) = m;
        }
        jumps.push_back(0.5 * (a + b));
    }

    std::vector<double> Me = detail::hilbert_of_atomized(ge, se, spe, jumps, route);

    // c = P_1(s)(0)
    double c = 0.0;
    for (std::size_t j = 0; j < ne; ++j) {
        const double y = ge.point(j);
        const double w = (j == 0 || j + 1 == ne) ? 0.5 : 1.0;
        c += w * se[j] / (kPi * (1.0 + y * y));
    }
    c *= ge.step;

    WellPreparedWeight wp;
    wp.A = A;
    wp.sigma = sigma;
    wp.sigma_prime = req.sigma_prime;
    wp.grid = eg.inner;
    wp.c_const = c;
    wp.jump_x = std::move(jumps);
    const std::size_t P = eg.pad_cells, n = eg.inner.count;
    wp.s0.assign(s0e.begin() + P, s0e.begin() + P + n);
    wp.s.assign(se.begin() + P, se.begin() + P + n);
    wp.M.assign(Me.begin() + P, Me.begin() + P + n);
    wp.k.assign(ke.begin() + P, ke.begin() + P + n);
    wp.omega0.resize(n);
    wp.log_omega_tilde.resize(n);
    wp.omega_tilde.resize(n);
    wp.diag.s0_min_increment = min_inc;
    double mbd1 = 1e300, mbd2r = 0.0, mbd2l = 0.0, ratio = 0.0, hsup = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = wp.grid.point(j);
        const double obar = sm.POmega_fn(x);
        const double logden = 3.0 * std::log(x * x + A * A);
        wp.omega0[j] = std::exp(-obar - logden);
        wp.log_omega_tilde[j] = -wp.M[j] - obar - logden;
        wp.omega_tilde[j] = std::exp(wp.log_omega_tilde[j]);
        mbd1 = std::min(mbd1, wp.M[j] + 0.5 + 3.0 * std::log(std::abs(x) + 2.0));
        if (x > 0.5 && x < 1.0) mbd2r = std::max(mbd2r, std::abs(wp.M[j]));
        if (x > -1.0 && x < -0.5) mbd2l = std::max(mbd2l, std::abs(wp.M[j]));
        ratio = std::max(ratio, wp.omega_tilde[j] * (x * x + A * A) * std::exp(obar));
        hsup = std::max(hsup, std::abs(s0p_of(x) - kPi * sigma));
    }
    wp.diag.mbd1_margin = mbd1;
    wp.diag.mbd2_right = mbd2r;
    wp.diag.mbd2_left = mbd2l;
    wp.diag.omega_tilde_ratio = ratio;
    wp.h_omega0_sup = hsup + 6.0 / A;  // sup |H(Omega)'| + 6/A >= sup |H(Omega0)'|
    if (mbd1 < -1e-3)
        throw std::runtime_error("prepare: M violates the -1/2 - 3log(|x|+2) bound");
    if (ratio > 1.0 + 1e-6)
        throw std::runtime_error("prepare: omega_tilde exceeds omega/(x^2+A^2)");
    return wp;
}

MultiplierResult synthesize_psi(const WellPreparedWeight& wp, double sigma,
                                const LogHolderWeight& target, const SmoothedWeight& sm) {
    const Grid& g = wp.grid;
    const std::size_t n = g.count;
    MultiplierResult r;
    r.sigma = sigma;
    r.sigma_prime = wp.sigma_prime;
    r.t = sm.t;
    r.A = wp.A;
    r.grid = g;
    r.phase_c = wp.c_const;
    r.hfun.resize(n);
    double hmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = wp.omega_tilde[j];
        r.hfun[j] = (wp.k[j] % 2 == 0) ? w : -w;
        hmax = std::max(hmax, w);
    }
    r.renorm_scale = hmax;

    // G_+ = omega_tilde e^{i theta}, theta = H(Omega_tilde) = -pi sigma x + pi k
    //       + pi/2 + c (inversion identity applied to M = H(s))
    std::vector<cplx> Gp(n);
    const cplx cphase = std::polar(1.0, kPi / 2.0 + wp.c_const);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.point(j);
        Gp[j] = r.hfun[j] * std::polar(1.0, -kPi * sigma * x) * cphase;
    }
    SampledFunction G(g, std::move(Gp));
    SampledFunction psi = inverse_fourier(G);
    auto window_mass = [&](const SampledFunction& f, double lo, double hi) {
        double inside = 0.0, total = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double tau = f.grid.point(j);
            const double m = std::norm(f.values[j]);
            total += m;
            if (tau >= lo && tau <= hi) inside += m;
        }
        return (total - inside) / (total + 1e-300);
    };
    const double leak_plus = window_mass(psi, 0.0, sigma);
    const double leak_minus = window_mass(psi, -sigma, 0.0);
    r.conjugated = leak_minus < leak_plus;
    r.support_leakage = r.conjugated ? leak_minus : leak_plus;
    if (r.support_leakage > 0.10) {
        std::ostringstream os;
        os << "synthesize_psi: both Fourier directions leak (" << leak_plus << ", " << leak_minus
           << "); construction failed";
        throw std::runtime_error(os.str());
    }
    if (r.conjugated) {
        // psi(tau) <- conj(psi(-tau)), F psi <- conj(G)
        std::vector<cplx> v(psi.size());
        const Grid tg = psi.grid;
        // reflected grid: tau'_j = -tau_{N-1-j}; uniform again
        Grid rg(-tg.x_max(), tg.step, tg.count);
        for (std::size_t j = 0; j < psi.size(); ++j)
            v[j] = std::conj(psi.values[psi.size() - 1 - j]);
        r.psi = SampledFunction(rg, std::move(v));
        for (auto& z : G.values) z = std::conj(z);
        r.spectrum = std::move(G);
    } else {
        r.psi = std::move(psi);
        r.spectrum = std::move(G);
    }

    // upper bound and per-interval lower constants against the target weight
    double upper = 0.0, low_r = 1e300, low_l = 1e300;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.point(j);
        const double w = target.omega(x);
        upper = std::max(upper, wp.omega_tilde[j] / w);
        if (x > 0.5 && x < 1.0) low_r = std::min(low_r, wp.omega_tilde[j] / w);
        if (x > -1.0 && x < -0.5) low_l = std::min(low_l, wp.omega_tilde[j] / w);
    }
    r.upper_margin = upper;
    r.upper_ok = upper <= 1.0 + 1e-9;
    if (low_r >= low_l) {
        r.lower_interval = LowerInterval::right;
        r.lower_constant = low_r;
        r.lower_constant_other = low_l;
    } else {
        r.lower_interval = LowerInterval::left;
        r.lower_constant = low_l;
        r.lower_constant_other = low_r;
    }
    if (!(r.lower_constant > 0.0)) r.lower_interval = LowerInterval::none;
    return r;
}

MultiplierResult build_multiplier(const MultiplierRequest& req, const BuildOptions& opts) {
    const LogHolderWeight& w = req.weight;
    if (!(w.K0 > 0.0) || !(w.alpha > 0.0 && w.alpha < 1.0))
        throw std::invalid_argument("build_multiplier: weight needs a valid (K0, alpha)");
    const bool warn = req.sigma >= 0.1;
    if (warn && req.strict_regime)
        throw std::invalid_argument("build_multiplier: sigma >= 1/10 with strict regime enforcement");
    const double t = smoothing_time(w.K0, w.alpha, req.sigma_prime);
    const ExtendedGrid eg = make_grids(opts);
    SmoothedWeight sm = smooth(w, t, eg.ext);
    WellPreparedWeight wp = prepare(req, sm, opts);
    MultiplierResult r = synthesize_psi(wp, req.sigma, w, sm);
    r.regime_warning = warn;
    const double cosa = std::cos(kPi * w.alpha / 2.0);
    const double expo = std::pow(w.K0 / cosa, 1.0 / (1.0 - w.alpha)) *
                        std::pow(1.0 / (kPi * req.sigma_prime), w.alpha / (1.0 - w.alpha));
    r.certified_factor = std::exp(expo);
    // the sandwich transfers the upper bound only up to the certified factor
    r.upper_ok = r.upper_margin <= r.certified_factor * (1.0 + 1e-9);
    const double pow6 = std::pow(req.sigma - req.sigma_prime, 6.0);
    r.lower_constant = r.lower_constant * r.certified_factor / pow6;
    r.lower_constant_other = r.lower_constant_other * r.certified_factor / pow6;
    return r;
}

MultiplierResult build_multiplier_particular(double T, double eps, const ParticularOptions& opts) {
    if (!(T > 0.0)) throw std::invalid_argument("build_multiplier_particular: T must be > 0");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("build_multiplier_particular: eps must lie in (0,1)");
    MultiplierRequest req;
    double t = 0.0;
    if (opts.variant) {
        req.weight = epsilon_weight(eps);
        req.sigma = T * (1.0 - eps);
        req.sigma_prime = (1.0 + eps) * (1.0 - eps) * (1.0 - eps) * T;
        t = particular_smoothing_time(T * (1.0 - eps), eps);
    } else {
        req.weight = particular_weight();
        req.sigma = T;
        req.sigma_prime = T * (1.0 - eps);
        t = particular_smoothing_time(T, eps);
    }
    const ExtendedGrid eg = make_grids(opts);
    SmoothedWeight sm = smooth(req.weight, t, eg.ext);
    WellPreparedWeight wp = prepare(req, sm, opts);
    MultiplierResult r = synthesize_psi(wp, req.sigma, req.weight, sm);
    r.regime_warning = req.sigma >= 0.1;
    // sharp sandwich factor: exp((1+eps) sqrt(pi t)) on the eps-variant
    const double scale = opts.variant ? 1.0 + eps : 1.0;
    r.certified_factor = std::exp(scale * std::sqrt(kPi * t));
    const double pow6 = std::pow(req.sigma - req.sigma_prime, 6.0);
    r.lower_constant = r.lower_constant * r.certified_factor / pow6;
    r.lower_constant_other = r.lower_constant_other * r.certified_factor / pow6;
    return r;
}

SpectrumEvaluator::SpectrumEvaluator(const MultiplierResult& r, std::function<double(double)> envelope)
    : r_(r), env_(std::move(envelope)) {
    edge_lo_ = r_.grid.x_min + 2.0 * r_.grid.step;
    edge_hi_ = r_.grid.x_max() - 2.0 * r_.grid.step;
}

cplx SpectrumEvaluator::operator()(double x) const {
    const double xq = std::clamp(x, edge_lo_, edge_hi_);
    const double hv = cubic_interp(r_.grid, r_.hfun, xq);
    cplx G = hv * std::polar(1.0, -kPi * r_.sigma * xq) * std::polar(1.0, kPi / 2.0 + r_.phase_c);
    if (r_.conjugated) G = std::conj(G);
    if (xq != x) {
        // out of range: envelope magnitude, boundary phase frozen
        const double mag = env_ ? env_(x) : 0.0;
        const double gm = std::abs(G);
        G = gm > 0.0 ? G / gm * mag : cplx(mag, 0.0);
    }
    return G;
}

double SpectrumEvaluator::modulus(double x) const { return std::abs((*this)(x)); }

std::string MultiplierResult::to_json() const {
    nlohmann::json j;
    j["sigma"] = sigma;
    j["sigma_prime"] = sigma_prime;
    j["t"] = t;
    j["A"] = A;
    j["support_leakage"] = support_leakage;
    j["upper_ok"] = upper_ok;
    j["upper_margin"] = upper_margin;
    j["lower_interval"] = lower_interval == LowerInterval::right
                              ? "right"
                              : (lower_interval == LowerInterval::left ? "left" : "none");
    j["lower_constant"] = lower_constant;
    j["certified_factor"] = certified_factor;
    j["conjugated"] = conjugated;
    if (regime_warning) j["regime_warning"] = "sigma >= 1/10: outside the theorem regime";
    j["grid"] = {{"x_min", grid.x_min}, {"step", grid.step}, {"count", grid.count}};
    return j.dump(2);
}

}  // namespace bmc
