#include "bmc/moment_method.hpp"

#include "bmc/fft.hpp"
#include "bmc/interp.hpp"
#include "bmc/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bmc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// sinh(u) overflows past u ~ 710; keep a margin
constexpr double kSinhOverflow = 700.0;
}

ModeLadder make_ladder(std::size_t K) {
    ModeLadder m;
    m.count = K;
    m.lambdas.resize(K);
    m.mus.resize(K);
    for (std::size_t k = 1; k <= K; ++k) {
        m.lambdas[k - 1] = lambda_of(k);
        m.mus[k - 1] = mu_of(k);
    }
    return m;
}

double eval_pl(std::size_t l, double x) {
    if (l == 0) throw std::invalid_argument("eval_pl: l >= 1");
    const double ml = mu_of(l);
    const double w2 = kTwoPi * x;
    if (x > 0.0 && std::sqrt(w2) > kSinhOverflow)
        throw std::overflow_error("eval_pl: sinh overflow; use eval_pl_log");
    // removable singularity at x = -mu_l: with u = sqrt(2 pi |x|), u_l = l pi,
    // P_l = 4 pi mu_l sinc(u - u_l) / (u (u + u_l))
    if (std::abs(x + ml) < 0.5) {
        const double u = std::sqrt(kTwoPi * std::abs(x));
        const double ul = static_cast<double>(l) * kPi;
        // du = u - ul without subtractive cancellation: u^2 - ul^2 = 2 pi (|x| - mu_l)
        const double du = kTwoPi * (std::abs(x) - ml) / (u + ul);
        const double sinc = std::abs(du) < 1e-8 ? 1.0 - du * du / 6.0 : std::sin(du) / du;
        return 4.0 * kPi * ml * sinc / (u * (u + ul));
    }
    double S;
    if (std::abs(w2) < 1e-4) {
        S = 1.0 + w2 / 6.0 + w2 * w2 / 120.0;  // sinh(w)/w series in w^2 = 2 pi x
    } else if (x > 0.0) {
        const double u = std::sqrt(w2);
        S = std::sinh(u) / u;
    } else {
        const double u = std::sqrt(-w2);
        S = std::sin(u) / u;
    }
    const double sign = (l % 2 == 0) ? -1.0 : 1.0;  // (-1)^{l+1}
    return 2.0 * sign * ml * S / (x + ml);
}

PlLogValue eval_pl_log(std::size_t l, double x) {
    PlLogValue out;
    const double ml = mu_of(l);
    const double w2 = kTwoPi * x;
    if (!(x > 0.0) || std::sqrt(std::max(w2, 0.0)) <= kSinhOverflow) {
        const double v = eval_pl(l, x);
        out.log_abs = std::log(std::abs(v) + 1e-300);
        out.sign = v >= 0.0 ? 1 : -1;
        return out;
    }
    const double u = std::sqrt(w2);
    // sinh(u) ~ e^u/2 in this regime
    out.log_scale = true;
    out.log_abs = u - std::log(2.0) - std::log(u) + std::log(2.0 * ml / (x + ml));
    out.sign = (l % 2 == 0) ? -1 : 1;
    return out;
}

cplx eval_gl(std::size_t l, double x, const SpectrumEvaluator& spec, double m_shift,
             double eps, double T) {
    const double ml = mu_of(l);
    const cplx denom = spec(m_shift);
    const cplx num = spec(x - m_shift + ml);
    const double a = eps * T;
    const double v = x + ml;
    cplx sincf;
    if (std::abs(kTwoPi * a * v) < 1e-8) {
        sincf = cplx(1.0, -kPi * a * v);  // first-order expansion of the removable limit
    } else {
        const cplx z = std::exp(cplx(0.0, -kTwoPi * a * v)) - 1.0;
        sincf = cplx(0.0, 1.0) * z / (kTwoPi * a * v);
    }
    return num / denom * sincf;
}

BiorthogonalFamily build_family(double T, double eps, std::size_t K,
                                const MultiplierResult& mult, const FamilyOptions& opts) {
    if (K == 0) throw std::invalid_argument("build_family: K >= 1");
    BiorthogonalFamily fam;
    fam.T = T;
    fam.eps = eps;
    fam.K = K;

    // m-selection: the interval carrying the lower bound
    fam.m_shift = (mult.lower_interval == LowerInterval::left) ? -0.25 : 0.25;

    const LogHolderWeight w_eps = epsilon_weight(eps);
    SpectrumEvaluator spec(mult, [w_eps](double x) { return w_eps.omega(x); });
    const cplx Fm = spec(fam.m_shift);
    if (std::abs(Fm) < 1e-12 * mult.renorm_scale)
        throw std::runtime_error("build_family: |Fpsi(m)| ~ 0; failed multiplier");

    const double WL = std::max(opts.wl_min, opts.wl_A * mult.A);
    const double xi0 = -mu_of(K) - WL;
    const std::size_t npad = std::size_t{1} << opts.pad_exp;
    const auto nlive = static_cast<std::size_t>(std::ceil((opts.wr - xi0) / opts.dxi));
    if (nlive + 2 > npad)
        throw std::runtime_error("build_family: spectral window exceeds the FFT budget");
    fam.xi_grid = Grid(xi0, opts.dxi, nlive);

    // common time grid on [0, T]
    const double dt = 1.0 / (opts.dxi * static_cast<double>(npad));
    const auto nt = static_cast<std::size_t>(std::floor(T / dt)) + 1;
    fam.time_grid = Grid(0.0, dt, nt);

    fam.psi.resize(K);
    fam.spectra.resize(K);
    fam.support_leakage.assign(K, 0.0);
    fam.renorm.assign(K, cplx(0.0, 0.0));

    const cplx Fmm = spec(-fam.m_shift);
    for (std::size_t l = 1; l <= K; ++l) {
        // sampled spectrum S_l = g_l P_l / g_l(-mu_l); the measured
        // renormalization keeps the diagonal target exactly 1
        const cplx gll = Fmm / Fm;  // g_l(-mu_l) = Fpsi(-m)/Fpsi(m), sinc factor = 1
        fam.renorm[l - 1] = gll;
        std::vector<cplx> S(nlive);
        const long long nn = static_cast<long long>(nlive);
#pragma omp parallel for schedule(static) if (par::enabled())
        for (long long j = 0; j < nn; ++j) {
            const double xi = fam.xi_grid.point(static_cast<std::size_t>(j));
            S[static_cast<std::size_t>(j)] =
                eval_gl(l, xi, spec, fam.m_shift, eps, T) * eval_pl(l, xi) / gll;
        }
        fam.spectra[l - 1] = S;

        // zero-pad and invert; envelope check at the live-window edges
        const double peak = [&] {
            double p = 0.0;
            for (const auto& z : S) p = std::max(p, std::abs(z));
            return p;
        }();
        const double edge = std::max(std::abs(S.front()), std::abs(S.back()));
        if (edge > 1e-4 * peak)
            throw std::runtime_error("build_family: spectral envelope not reached at the window edge");
        std::vector<cplx> padded(npad, cplx(0.0, 0.0));
        std::copy(S.begin(), S.end(), padded.begin());
        SampledFunction Sp(Grid(xi0, opts.dxi, npad), std::move(padded));
        SampledFunction psi_l = inverse_fourier(Sp);

        double inside = 0.0, total = 0.0;
        for (std::size_t j = 0; j < psi_l.size(); ++j) {
            const double tau = psi_l.grid.point(j);
            const double m2 = std::norm(psi_l.values[j]);
            total += m2;
            if (tau >= 0.0 && tau <= T) inside += m2;
        }
        fam.support_leakage[l - 1] = (total - inside) / (total + 1e-300);

        std::vector<cplx> keep(nt);
        for (std::size_t j = 0; j < nt; ++j) {
            const double tau = fam.time_grid.point(j);
            const auto src = static_cast<std::size_t>(std::llround((tau - psi_l.grid.x_min) / dt));
            keep[j] = psi_l.values[src];
            fam.psi_scale_max = std::max(fam.psi_scale_max, std::abs(keep[j]));
        }
        fam.psi[l - 1] = std::move(keep);
    }
    return fam;
}

BiorthReport biorth_matrix(const BiorthogonalFamily& fam, std::size_t K_check) {
    if (K_check > fam.K) throw std::invalid_argument("biorth_matrix: K_check > family size");
    BiorthReport rep;
    rep.matrix.assign(K_check * K_check, cplx(0.0, 0.0));
    const std::size_t nt = fam.time_grid.count;
    const double dt = fam.time_grid.step;
    // phasor rows e^{2 pi i mu_k t_j} (trapezoid weights folded in)
    std::vector<cplx> phas(K_check * nt);
    const long long kk_n = static_cast<long long>(K_check);
#pragma omp parallel for schedule(static) if (par::enabled())
    for (long long k = 1; k <= kk_n; ++k) {
        const double mk = mu_of(static_cast<std::size_t>(k));
        for (std::size_t j = 0; j < nt; ++j) {
            const double w = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
            phas[static_cast<std::size_t>(k - 1) * nt + j] =
                w * std::polar(1.0, kTwoPi * mk * fam.time_grid.point(j));
        }
    }
#pragma omp parallel for schedule(static) if (par::enabled())
    for (long long k = 0; k < kk_n; ++k) {
        for (std::size_t l = 0; l < K_check; ++l) {
            cplx acc = 0.0;
            const cplx* ph = &phas[static_cast<std::size_t>(k) * nt];
            const cplx* ps = fam.psi[l].data();
            for (std::size_t j = 0; j < nt; ++j) acc += ph[j] * ps[j];
            rep.matrix[static_cast<std::size_t>(k) * K_check + l] = acc * dt;
        }
    }
    for (std::size_t k = 0; k < K_check; ++k)
        for (std::size_t l = 0; l < K_check; ++l) {
            const double dev =
                std::abs(rep.matrix[k * K_check + l] - (k == l ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
            rep.max_deviation = std::max(rep.max_deviation, dev);
            if (k == l) rep.diag_deviation = std::max(rep.diag_deviation, dev);
        }
    return rep;
}

BiorthReport biorth_matrix_freq_oracle(const BiorthogonalFamily& fam, std::size_t K_check) {
    if (K_check > fam.K) throw std::invalid_argument("biorth oracle: K_check > family size");
    BiorthReport rep;
    rep.matrix.assign(K_check * K_check, cplx(0.0, 0.0));
    const std::size_t n = fam.xi_grid.count;
    std::vector<double> re(n), im(n);
    for (std::size_t l = 0; l < K_check; ++l) {
        for (std::size_t j = 0; j < n; ++j) {
            re[j] = fam.spectra[l][j].real();
            im[j] = fam.spectra[l][j].imag();
        }
        for (std::size_t k = 1; k <= K_check; ++k) {
            const double q = -mu_of(k);
            rep.matrix[(k - 1) * K_check + l] =
                cplx(cubic_interp(fam.xi_grid, re, q), cubic_interp(fam.xi_grid, im, q));
        }
    }
    for (std::size_t k = 0; k < K_check; ++k)
        for (std::size_t l = 0; l < K_check; ++l) {
            const double dev =
                std::abs(rep.matrix[k * K_check + l] - (k == l ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
            rep.max_deviation = std::max(rep.max_deviation, dev);
            if (k == l) rep.diag_deviation = std::max(rep.diag_deviation, dev);
        }
    return rep;
}

std::string biorth_matrix_csv(const BiorthReport& rep, std::size_t K_check) {
    std::ostringstream os;
    os.precision(17);
    os << "k,l,re,im\n";
    for (std::size_t k = 0; k < K_check; ++k)
        for (std::size_t l = 0; l < K_check; ++l) {
            const cplx z = rep.matrix[k * K_check + l];
            os << k + 1 << "," << l + 1 << "," << std::scientific << z.real() << "," << z.imag()
               << "\n";
        }
    return os.str();
}

std::string BiorthogonalFamily::to_json(std::size_t max_rows) const {
    nlohmann::json j;
    j["T"] = T;
    j["epsilon"] = eps;
    j["K"] = K;
    j["m_shift"] = m_shift;
    j["time_grid"] = {{"x_min", time_grid.x_min}, {"step", time_grid.step}, {"count", time_grid.count}};
    j["support_leakage"] = support_leakage;
    const std::size_t stride = max_rows == 0 ? 1 : std::max<std::size_t>(1, time_grid.count / max_rows);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t l = 0; l < K; ++l) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t idx = 0; idx < time_grid.count; idx += stride)
            row.push_back({psi[l][idx].real(), psi[l][idx].imag()});
        rows.push_back(std::move(row));
    }
    j["psi_rows"] = std::move(rows);
    return j.dump();
}

}  // namespace bmc
