#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "lacex/convolve.hpp"
#include "lacex/field.hpp"
#include "lacex/fft.hpp"
#include "lacex/kernel.hpp"

namespace lacex {

// a_d = d Gamma(d/2 - 1) / (2 pi^{d/2}); the random-walk Green's function
// amplitude in S_1(x) ~ a_d / (sigma^2 |x|^{d-2}).
inline double green_amplitude(int d) {
    if (d <= 2) throw std::invalid_argument("green_amplitude: need d > 2");
    return d * std::tgamma(d / 2.0 - 1.0) / (2.0 * std::pow(M_PI, d / 2.0));
}

// a_d / (sigma^2 (|x|+1)^{d-2})
inline double greens_asymptote(const StepKernel& k, const Site& x) {
    double ad = green_amplitude(k.d);
    return ad / (k.sigma2_d() * std::pow(norm(x, k.d) + 1.0, k.d - 2.0));
}

// closed form of int_T^infty p_t(x) dt with p_t the heat kernel matched to
// sigma^2; equals a_d/(sigma^2 |x|^{d-2}) at T = 0 for x != 0.
inline double gaussian_tail_integral(int d, double sigma2, double r, double T) {
    if (d <= 2) throw std::invalid_argument("gaussian_tail_integral: need d > 2");
    double pref = std::pow(d / (2.0 * M_PI * sigma2), d / 2.0);
    double a = d * r * r / (2.0 * sigma2);
    double s = d / 2.0 - 1.0;
    if (a == 0.0) return pref * std::pow(T, -s) / s;
    return pref * std::pow(a, -s) * boost::math::tgamma_lower(s, a / T);
}

// Per-mode data for a kernel on a torus: Dhat over all Fourier modes,
// computed with one FFT of the embedded kernel.
class ModeTable {
  public:
    ModeTable(const StepKernel& k, const Torus& t) : torus_(t) {
        if (t.side() < 2 * k.L + 1)
            throw std::invalid_argument("ModeTable: torus too small for kernel support");
        ScalarField dk(t);
        for (const auto& e : k.support) dk.at(e.x) = e.wd;
        Fft fft(t);
        std::vector<std::complex<double>> buf(dk.data(), dk.data() + dk.size());
        fft.forward(buf);
        dhat_.resize(buf.size());
        for (std::size_t i = 0; i < buf.size(); ++i) dhat_[i] = buf[i].real();
    }

    const Torus& torus() const { return torus_; }
    const std::vector<double>& dhat() const { return dhat_; }

    // sum over modes of w(Dhat(k)) cos(k.x) / V, the generic spectral sum
    // evaluated at one site via per-axis phase tables.
    double mode_sum(const Site& x, const std::function<double(double)>& w,
                    bool skip_zero_mode = false) const {
        const int d = torus_.dim();
        const int n = torus_.side();
        std::vector<std::complex<double>> phase(static_cast<std::size_t>(d) * n);
        for (int axis = 0; axis < d; ++axis) {
            for (int m = 0; m < n; ++m) {
                int mm = (2 * m > n) ? m - n : m;
                double kk = 2.0 * M_PI * mm / n;
                phase[static_cast<std::size_t>(axis) * n + m] =
                    std::polar(1.0, -kk * x[axis]);
            }
        }
        double acc = 0;
        std::vector<int> idx(d, 0);
        std::vector<std::complex<double>> partial(static_cast<std::size_t>(d) + 1);
        partial[0] = 1.0;
        std::int64_t flat = 0;
        int level = 0;
        // iterate the d-dim mode lattice in row-major order, maintaining
        // prefix phase products
        while (true) {
            for (; level < d; ++level)
                partial[level + 1] = partial[level] * phase[static_cast<std::size_t>(level) * n + idx[level]];
            if (!(skip_zero_mode && flat == 0))
                acc += partial[d].real() * w(dhat_[static_cast<std::size_t>(flat)]);
            ++flat;
            int axis = d - 1;
            for (; axis >= 0; --axis) {
                if (++idx[axis] < n) break;
                idx[axis] = 0;
            }
            if (axis < 0) break;
            level = axis;
        }
        return acc / static_cast<double>(torus_.volume());
    }

  private:
    Torus torus_;
    std::vector<double> dhat_;
};

struct GreensResult {
    ScalarField field;            // torus S_mu; zero mode excluded at mu = 1
    double mu = 0;
    bool image_corrected = false;
    double zero_mode_shift = 0;   // additive constant restored by correction
    ScalarField corrected;        // estimate of the Z^d function (if requested)
};

// Torus random-walk two-point function via the inverse discrete transform
// of 1/(1 - mu Dhat).  At mu = 1 the k = 0 mode is excluded, which fixes
// the otherwise divergent constant by forcing a mean-zero field.  With
// image_correct, nearby periodic images are subtracted using the asymptote
// and the dropped constant is restored as the torus mean of the periodized
// asymptote.
inline GreensResult greens_torus(const StepKernel& k, double mu, const Torus& t,
                                 bool image_correct = false, int image_range = 3) {
    if (mu < 0 || mu > 1) throw std::invalid_argument("greens_torus: mu must be in [0,1]");
    if (mu == 1.0 && k.d <= 2)
        throw std::invalid_argument("greens_torus: mu = 1 needs d > 2");
    ModeTable modes(k, t);
    GreensResult res{ScalarField(t), mu, false, 0.0, ScalarField(t)};
    {
        Fft fft(t);
        std::vector<std::complex<double>> buf(static_cast<std::size_t>(t.volume()));
        const auto& dh = modes.dhat();
        for (std::size_t i = 0; i < buf.size(); ++i) {
            double denom = 1.0 - mu * dh[i];
            buf[i] = (i == 0 && mu == 1.0) ? 0.0 : 1.0 / denom;
        }
        fft.backward(buf);
        const double inv = 1.0 / static_cast<double>(t.volume());
        for (std::size_t i = 0; i < buf.size(); ++i)
            res.field[static_cast<std::int64_t>(i)] = buf[i].real() * inv;
        res.field.set_symmetric_flag(true);
    }
    if (image_correct) {
        if (mu != 1.0)
            throw std::invalid_argument("greens_torus: image correction applies at mu = 1");
        res.image_corrected = true;
        const int d = k.d, N = t.side();
        const double ad = green_amplitude(d);
        const double s2 = k.sigma2_d();
        auto phi = [&](const Site& y) {
            return ad / (s2 * std::pow(norm(y, d) + 1.0, d - 2.0));
        };
        auto images = box_sites(d, image_range);
        // torus mean of the periodized asymptote = (1/V) sum over the big box
        double mean = 0;
        for (std::int64_t i = 0; i < t.volume(); ++i) {
            Site x = t.site_of(i);
            for (const Site& n : images) {
                Site y{};
                for (int j = 0; j < d; ++j) y[j] = x[j] + N * n[j];
                mean += phi(y);
            }
        }
        mean /= static_cast<double>(t.volume());
        res.zero_mode_shift = mean;
        for (std::int64_t i = 0; i < t.volume(); ++i) {
            Site x = t.site_of(i);
            double img = 0;
            for (const Site& n : images) {
                if (norm_inf(n, d) == 0) continue;
                Site y{};
                for (int j = 0; j < d; ++j) y[j] = x[j] + N * n[j];
                img += phi(y);
            }
            res.corrected[i] = res.field[i] + mean - img;
        }
        res.corrected.set_symmetric_flag(true);
    }
    return res;
}

struct HeatSlice {
    double t = 0;
    double mu = 0;
    ScalarField field;
    double tail_mass = 0;  // e^{-t} sum_{n > truncation} (t mu)^n / n!
    bool tail_ok = true;   // tail_mass <= 1e-10
};

// Poissonized walk I_{t,mu} = e^{-t} sum_{n <= truncation} (t mu)^n/n! D^{*n},
// assembled in k-space (the truncated exponential series per mode).
inline HeatSlice poisson_kernel(const StepKernel& k, double t, double mu, const Torus& torus,
                                int truncation) {
    if (t < 0) throw std::invalid_argument("poisson_kernel: t >= 0 required");
    if (truncation < static_cast<int>(t + 10.0 * std::sqrt(t)))
        throw std::invalid_argument("poisson_kernel: truncation below t + 10 sqrt(t)");
    HeatSlice out{t, mu, ScalarField(torus), 0.0, true};
    ModeTable modes(k, torus);
    Fft fft(torus);
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(torus.volume()));
    const auto& dh = modes.dhat();
    for (std::size_t i = 0; i < buf.size(); ++i) {
        double z = t * mu * dh[i];
        // e^{-t} * sum_{n<=N} z^n / n!, forward recurrence
        double term = 1.0, sum = 1.0;
        for (int n = 1; n <= truncation; ++n) {
            term *= z / n;
            sum += term;
        }
        buf[i] = std::exp(-t) * sum;
    }
    fft.backward(buf);
    const double inv = 1.0 / static_cast<double>(torus.volume());
    for (std::size_t i = 0; i < buf.size(); ++i)
        out.field[static_cast<std::int64_t>(i)] = buf[i].real() * inv;
    out.field.set_symmetric_flag(true);
    // audit of the dropped Poisson tail at |Dhat| <= 1
    {
        double term = std::exp(-t), cum = term;
        for (int n = 1; n <= truncation; ++n) {
            term *= t * mu / n;
            cum += term;
        }
        double full = std::exp(-t * (1.0 - mu));
        out.tail_mass = std::max(0.0, full - cum);
        out.tail_ok = out.tail_mass <= 1e-10;
    }
    return out;
}

// Adaptive Simpson on [a,b] to a relative tolerance, with recursion depth
// capped; integrands here are smooth.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-8, int depth = 24) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
            int level) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = f(lm), frm = f(rm);
        double left = (mid - lo) / 6.0 * (flo + 4 * flm + fmid);
        double right = (hi - mid) / 6.0 * (fmid + 4 * frm + fhi);
        double err = left + right - whole;
        if (level <= 0 || std::abs(err) <= 15.0 * rel_tol * (std::abs(left + right) + 1e-300))
            return left + right + err / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, level - 1) +
               rec(mid, hi, fmid, frm, fhi, right, level - 1);
    };
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

// Integrate f over [a, b] using log-spaced panels (the integrands span many
// time scales), adaptive Simpson within each panel.
inline double panel_integrate(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-8) {
    if (b <= a) return 0.0;
    double total = 0.0;
    double lo = a;
    double first = std::max(1e-3, a);
    if (a < first && first < b) {
        total += adaptive_simpson(f, a, first, rel_tol);
        lo = first;
    }
    while (lo < b) {
        double hi = std::min(b, lo * 2.0);
        total += adaptive_simpson(f, lo, hi, rel_tol);
        lo = hi;
    }
    return total;
}

struct GaussianSplitReport {
    double T = 0;           // the time split T_x
    double S_less = 0;      // int_0^T I_t(x) dt       (Z^d estimate)
    double S_greater = 0;   // int_T^inf I_t(x) dt     (Z^d estimate)
    double p_t_integral = 0;  // int_T^inf p_t(x) dt, closed form
    double residual = 0;      // S_greater - p_t_integral
    double fitted_c = 0;      // |residual| L^d T^{d/2}
    double S_less_raw = 0;    // zero-mode-excluded variants; their sum equals
    double S_greater_raw = 0; // the raw torus greens value
};

// Time decomposition of S_1(x) at the Gaussian scale T_x = (|x|/sigma)^{2-2a/d}.
// Mode sums give the exact t-integrals of the torus I_t in closed form; the
// far tail beyond t_big uses the Gaussian closed form.
inline GaussianSplitReport gaussian_split(const StepKernel& k, const Site& x, const Torus& t,
                                          double alpha = 0.1, double t_big = 0.0) {
    if (k.d <= 2) throw std::invalid_argument("gaussian_split: need d > 2");
    if (norm_inf(x, k.d) == 0) throw std::invalid_argument("gaussian_split: x = 0 excluded");
    if (norm(x, k.d) < k.L) throw std::invalid_argument("gaussian_split: need |x| >= L");
    GaussianSplitReport rep;
    const double r = norm(x, k.d);
    const double s2 = k.sigma2_d();
    rep.T = std::pow(r / std::sqrt(s2), 2.0 - 2.0 * alpha / k.d);
    const double T = rep.T;
    if (t_big <= 0) {
        // The torus I_t approximates the Z^d one while diffusion has not
        // reached the periodic images; cap t_big so the image mass within
        // [0, t_big] stays negligible.
        double dist = t.side() - r;
        double cap = k.d * dist * dist / (16.0 * s2);
        t_big = std::max(2.0 * T, 50.0);
        if (t_big > cap)
            throw std::invalid_argument("gaussian_split: torus too small for this x");
    }

    ModeTable modes(k, t);
    const double V = static_cast<double>(t.volume());
    // int_0^T e^{-t lam} dt and int_T^{t_big} of the same, per mode
    auto wless = [T](double dh) {
        double lam = 1.0 - dh;
        if (std::abs(lam) < 1e-14) return T;
        return (1.0 - std::exp(-T * lam)) / lam;
    };
    const double TB = t_big;
    auto wmid = [T, TB](double dh) {
        double lam = 1.0 - dh;
        if (std::abs(lam) < 1e-14) return TB - T;
        return (std::exp(-T * lam) - std::exp(-TB * lam)) / lam;
    };
    // int_T^infty over nonzero modes only (converges; slowest mode decays)
    auto wtail_raw = [T](double dh) {
        double lam = 1.0 - dh;
        return std::exp(-T * lam) / lam;
    };

    double less_full = modes.mode_sum(x, wless, false);
    double mid_full = modes.mode_sum(x, wmid, false);
    double gauss_beyond = gaussian_tail_integral(k.d, s2, r, t_big);

    rep.S_less = less_full;
    rep.S_greater = mid_full + gauss_beyond;
    rep.S_less_raw = less_full - T / V;
    rep.S_greater_raw = modes.mode_sum(x, wtail_raw, true);
    rep.p_t_integral = gaussian_tail_integral(k.d, s2, r, T);
    rep.residual = rep.S_greater - rep.p_t_integral;
    rep.fitted_c = std::abs(rep.residual) * std::pow(k.L, k.d) * std::pow(T, k.d / 2.0);
    return rep;
}

struct LargeDeviationReport {
    struct Violation {
        double t;
        Site x;
        int which;  // 1 = exponential bound, 2 = Gaussian bound
        double lhs, rhs;
    };
    std::vector<Violation> violations;
    int points_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Check I_{t,1}(x) <= exp[-|x|_inf/L + sigma^2 t/(d L^2)] for all t, and
// I_{t,1}(x) <= exp[-d |x|_inf^2/(4 sigma^2 t)] for t >= t0, with slack.
inline LargeDeviationReport large_deviation_check(const StepKernel& k, const Torus& torus,
                                                  const std::vector<double>& t_grid,
                                                  const std::vector<Site>& x_grid,
                                                  double slack = 1e-10) {
    LargeDeviationReport rep;
    ModeTable modes(k, torus);
    const double s2 = k.sigma2_d();
    for (double t : t_grid) {
        auto w = [t](double dh) { return std::exp(-t * (1.0 - dh)); };
        for (const Site& x : x_grid) {
            double I = modes.mode_sum(x, w, false);
            double xn = norm_inf(x, k.d);
            double bound1 = std::exp(-xn / k.L + s2 * t / (k.d * k.L * k.L));
            ++rep.points_checked;
            if (I > bound1 + slack)
                rep.violations.push_back({t, x, 1, I, bound1});
            double t0 = k.d * k.L * xn / (2.0 * s2);
            if (t >= t0 && xn > 0) {
                double bound2 = std::exp(-k.d * xn * xn / (4.0 * s2 * t));
                if (I > bound2 + slack)
                    rep.violations.push_back({t, x, 2, I, bound2});
            }
        }
    }
    return rep;
}

}  // namespace lacex
