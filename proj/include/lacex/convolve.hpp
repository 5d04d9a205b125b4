#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "lacex/fft.hpp"
#include "lacex/field.hpp"

namespace lacex {

enum class ConvMethod { Direct, Spectral };

// Periodic convolution (f*g)(x) = sum_y f(x-y) g(y) on the shared torus.
inline ScalarField convolve(const ScalarField& f, const ScalarField& g,
                            ConvMethod method = ConvMethod::Spectral) {
    if (f.torus() != g.torus()) throw std::invalid_argument("convolve: mismatched tori");
    const Torus& t = f.torus();
    ScalarField out(t);
    if (method == ConvMethod::Direct) {
        const std::int64_t v = t.volume();
        const bool mirror = f.symmetric_flag() && g.symmetric_flag();
        for (std::int64_t ix = 0; ix < v; ++ix) {
            Site x = t.site_of(ix);
            if (mirror) {
                // (f*g)(x) = (f*g)(-x) holds term-by-term after reindexing;
                // compute one representative per +-orbit so the equality is
                // exact in floating point as well.
                std::int64_t im = t.index(negate(x, t.dim()));
                if (im < ix) {
                    out[ix] = out[im];
                    continue;
                }
            }
            double acc = 0;
            for (std::int64_t iy = 0; iy < v; ++iy) {
                Site y = t.site_of(iy);
                acc += f.at(sub(x, y, t.dim())) * g[iy];
            }
            out[ix] = acc;
        }
    } else {
        Fft fft(t);
        std::vector<std::complex<double>> a(f.data(), f.data() + f.size());
        std::vector<std::complex<double>> b(g.data(), g.data() + g.size());
        fft.forward(a);
        fft.forward(b);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
        fft.backward(a);
        const double inv = 1.0 / static_cast<double>(t.volume());
        for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<std::int64_t>(i)] = a[i].real() * inv;
    }
    out.set_symmetric_flag(f.symmetric_flag() && g.symmetric_flag());
    return out;
}

struct DecayCheckReport {
    double exponent = 0;           // predicted decay exponent e of (f*g)
    double measured_constant = 0;  // sup_x |(f*g)(x)| (|x|+1)^e
    bool regime_first = false;     // a > d case of the convolution bound
};

// Prop-style convolution decay probe: f = (|x|+1)^{-a}, g = (|x|+1)^{-b},
// a >= b > 0, in one of the two admissible exponent regimes.
//
// The sup is taken over |x|_inf <= window (default side/4).  Box-doubling
// stability comparisons must pass the same window for both boxes, so the
// doubling varies only the wrap-around truncation and not the measurement
// region.
inline DecayCheckReport decay_convolution_check(double a, double b, const Torus& box,
                                                int window = 0) {
    if (!(a >= b && b > 0)) throw std::invalid_argument("decay check needs a >= b > 0");
    const int d = box.dim();
    DecayCheckReport rep;
    if (a > d) {
        rep.exponent = std::min(a, b);
        rep.regime_first = true;
    } else if (a < d && a + b > d) {
        rep.exponent = a + b - d;
        rep.regime_first = false;
    } else {
        throw std::invalid_argument("decay check: exponents outside both admissible regimes");
    }
    if (window <= 0) window = box.side() / 4;
    if (window > box.side() / 2) throw std::invalid_argument("decay check: window exceeds box");
    ScalarField f = power_law_field(box, a);
    ScalarField g = power_law_field(box, b);
    ScalarField conv = convolve(f, g, ConvMethod::Spectral);
    double sup = 0;
    for (std::int64_t i = 0; i < box.volume(); ++i) {
        Site x = box.site_of(i);
        if (norm_inf(x, d) > window) continue;
        double w = std::abs(conv[i]) * std::pow(norm(x, d) + 1.0, rep.exponent);
        sup = std::max(sup, w);
    }
    rep.measured_constant = sup;
    return rep;
}

struct MainTermSplitReport {
    double fitted_exponent = 0;   // decay exponent of the residual
    double expected_exponent = 0; // d - 2 + min(s, 2)
    double sum_g = 0;
};

namespace detail {

// Least-squares slope of log|y| vs log(r) over supplied samples.
inline double fit_log_slope(const std::vector<double>& r, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (y[i] <= 0) continue;
        double lx = std::log(r[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// Second part of the convolution bound: with f = A (|x|+1)^{-(d-2)} and g
// symmetric decaying as (|x|+1)^{-(d+s)}, the convolution splits into
// A (sum g) (|x|+1)^{-(d-2)} plus a residual decaying with exponent
// d - 2 + min(s,2).  Returns the fitted residual exponent over the middle
// decade of the box.
inline MainTermSplitReport main_term_split_check(double A, double s, const Torus& box) {
    const int d = box.dim();
    if (d <= 2) throw std::invalid_argument("main term split needs d > 2");
    ScalarField f = power_law_field(box, static_cast<double>(d - 2));
    for (std::int64_t i = 0; i < box.volume(); ++i) f[i] *= A;
    ScalarField g = power_law_field(box, d + s);
    ScalarField conv = convolve(f, g, ConvMethod::Spectral);

    MainTermSplitReport rep;
    rep.sum_g = g.sum();
    rep.expected_exponent = d - 2 + std::min(s, 2.0);

    std::vector<double> rr, res;
    int rmax = box.side() / 4;
    int rmin = std::max(2, rmax / 10);
    for (std::int64_t i = 0; i < box.volume(); ++i) {
        Site x = box.site_of(i);
        double r = norm(x, d);
        if (r < rmin || r > rmax) continue;
        double main = A * rep.sum_g * std::pow(r + 1.0, -(d - 2.0));
        rr.push_back(r + 1.0);
        res.push_back(std::abs(conv[i] - main));
    }
    rep.fitted_exponent = -detail::fit_log_slope(rr, res);
    return rep;
}

}  // namespace lacex
