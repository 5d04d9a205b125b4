#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lacex/rational.hpp"
#include "lacex/torus.hpp"

namespace lacex {

// Spread-out step distribution D on [-L, L]^d, normalized and symmetric
// under coordinate permutations and sign flips.  Weights are exact
// rationals; a double mirror is kept for spectral work.
class StepKernel {
  public:
    struct Entry {
        Site x;
        Rat w;
        double wd;
    };

    int d = 0;
    int L = 0;
    std::string profile = "uniform";
    bool exclude_origin = false;
    std::vector<Entry> support;  // nonzero weights only
    Rat sigma2;                  // sum |x|^2 D(x)

    const Rat& weight(const Site& x) const {
        if (norm_inf(x, d) > L) return zero_;
        return table_[box_index(x)];
    }

    double weight_d(const Site& x) const {
        if (norm_inf(x, d) > L) return 0.0;
        return table_d_[box_index(x)];
    }

    double max_weight() const {
        double m = 0;
        for (const auto& e : support) m = std::max(m, e.wd);
        return m;
    }

    double sigma2_d() const { return to_double(sigma2); }
    double sigma() const { return std::sqrt(sigma2_d()); }

    // D-hat(k) = sum_x D(x) cos(k.x); real by symmetry, 1 at k = 0.
    double fourier(const double* k) const {
        double s = 0;
        for (const auto& e : support) {
            double kx = 0;
            for (int i = 0; i < d; ++i) kx += k[i] * e.x[i];
            s += e.wd * std::cos(kx);
        }
        return s;
    }

    void finalize() {
        std::int64_t w = 2 * L + 1;
        std::int64_t vol = 1;
        for (int i = 0; i < d; ++i) vol *= w;
        table_.assign(vol, Rat(0));
        table_d_.assign(vol, 0.0);
        sigma2 = 0;
        Rat total(0);
        for (auto& e : support) {
            e.wd = to_double(e.w);
            table_[box_index(e.x)] = e.w;
            table_d_[box_index(e.x)] = e.wd;
            sigma2 += Rat(norm2(e.x, d)) * e.w;
            total += e.w;
        }
        if (total != 1) throw std::logic_error("kernel weights do not sum to 1");
    }

  private:
    std::int64_t box_index(const Site& x) const {
        std::int64_t idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * (2 * L + 1) + (x[i] + L);
        return idx;
    }

    std::vector<Rat> table_;
    std::vector<double> table_d_;
    inline static const Rat zero_{0};
};

namespace detail {

// Apply all lattice symmetries (2^d sign flips x d! permutations) to x.
inline std::vector<Site> symmetry_orbit(const Site& x, int d) {
    std::array<int, kMaxDim> perm{};
    for (int i = 0; i < d; ++i) perm[i] = i;
    std::vector<Site> orbit;
    do {
        for (int signs = 0; signs < (1 << d); ++signs) {
            Site y{};
            for (int i = 0; i < d; ++i) {
                int v = x[perm[i]];
                y[i] = (signs >> i) & 1 ? -v : v;
            }
            orbit.push_back(y);
        }
    } while (std::next_permutation(perm.begin(), perm.begin() + d));
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    return orbit;
}

}  // namespace detail

// Build a kernel from a profile.  `h` gives the profile samples on
// [-L, L]^d in box_sites order and is required only for profile
// "tabulated"; the uniform box profile is h = const on the whole cube.
inline StepKernel build_kernel(const std::string& profile, int L, int d,
                               bool exclude_origin = false,
                               const std::vector<Rat>& h = {}) {
    if (L < 1 || d < 1 || d > kMaxDim)
        throw std::invalid_argument("build_kernel: need L >= 1 and 1 <= d <= " +
                                    std::to_string(kMaxDim));

    auto sites = box_sites(d, L);
    std::vector<Rat> raw(sites.size());
    if (profile == "uniform") {
        for (auto& r : raw) r = 1;
    } else if (profile == "tabulated") {
        if (h.size() != sites.size())
            throw std::invalid_argument("build_kernel: tabulated profile needs (2L+1)^d samples");
        raw = h;
        for (const auto& v : raw)
            if (v < 0) throw std::invalid_argument("build_kernel: negative profile sample");
        // lattice symmetry of the samples
        for (std::size_t i = 0; i < sites.size(); ++i) {
            for (const auto& y : detail::symmetry_orbit(sites[i], d)) {
                std::int64_t idx = 0;
                for (int j = 0; j < d; ++j) idx = idx * (2 * L + 1) + (y[j] + L);
                if (raw[idx] != raw[i])
                    throw std::invalid_argument("build_kernel: profile not lattice-symmetric");
            }
        }
    } else {
        throw std::invalid_argument("build_kernel: unknown profile " + profile);
    }

    if (exclude_origin) {
        std::int64_t idx0 = 0;
        for (int j = 0; j < d; ++j) idx0 = idx0 * (2 * L + 1) + L;
        raw[idx0] = 0;
    }

    Rat total(0);
    for (const auto& v : raw) total += v;
    if (total == 0) throw std::invalid_argument("build_kernel: zero normalizing sum");

    StepKernel k;
    k.d = d;
    k.L = L;
    k.profile = profile;
    k.exclude_origin = exclude_origin;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (raw[i] == 0) continue;
        StepKernel::Entry e;
        e.x = sites[i];
        e.w = raw[i] / total;
        k.support.push_back(e);
    }
    k.finalize();
    return k;
}

struct KernelBoundsReport {
    double delta2_est = 0;  // inf over 0 < |k| <= 1/L of (1 - Dhat)/(L^2 |k|^2)
    double delta3_est = 0;  // inf over |k| >= 1/L of 1 - Dhat
    std::vector<std::array<double, kMaxDim>> violations;
    bool ok() const { return violations.empty() && delta2_est > 0 && delta3_est > 0; }
};

// Numeric scan of the small-k and large-k lower bounds on 1 - Dhat over a
// uniform grid with `res` points per axis on [-pi, pi]^d.
inline KernelBoundsReport verify_kernel_bounds(const StepKernel& k, int res) {
    KernelBoundsReport rep;
    rep.delta2_est = std::numeric_limits<double>::infinity();
    rep.delta3_est = std::numeric_limits<double>::infinity();
    const double invL = 1.0 / k.L;
    std::vector<int> idx(k.d, 0);
    bool done = false;
    bool seen2 = false, seen3 = false;
    while (!done) {
        std::array<double, kMaxDim> kk{};
        double k2 = 0;
        for (int i = 0; i < k.d; ++i) {
            kk[i] = -M_PI + 2.0 * M_PI * idx[i] / (res - 1);
            k2 += kk[i] * kk[i];
        }
        double kn = std::sqrt(k2);
        if (kn > 0) {
            double one_minus = 1.0 - k.fourier(kk.data());
            if (kn <= invL) {
                double v = one_minus / (k.L * static_cast<double>(k.L) * k2);
                rep.delta2_est = std::min(rep.delta2_est, v);
                seen2 = true;
                if (v <= 0) rep.violations.push_back(kk);
            } else {
                rep.delta3_est = std::min(rep.delta3_est, one_minus);
                seen3 = true;
                if (one_minus <= 0) rep.violations.push_back(kk);
            }
        }
        int i = 0;
        for (; i < k.d; ++i) {
            if (++idx[i] < res) break;
            idx[i] = 0;
        }
        done = (i == k.d);
    }
    // A coarse grid may miss one of the regions entirely; report 0 rather
    // than +inf so the caller sees "not established".
    if (!seen2) rep.delta2_est = 0;
    if (!seen3) rep.delta3_est = 0;
    return rep;
}

}  // namespace lacex
