#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lacex {

constexpr int kMaxDim = 6;

// Lattice site, fixed capacity, first `d` entries meaningful.
using Site = std::array<int, kMaxDim>;

inline Site make_site(std::initializer_list<int> cs) {
    Site s{};
    int i = 0;
    for (int c : cs) s[i++] = c;
    return s;
}

inline Site negate(const Site& s, int d) {
    Site r{};
    for (int i = 0; i < d; ++i) r[i] = -s[i];
    return r;
}

inline Site add(const Site& a, const Site& b, int d) {
    Site r{};
    for (int i = 0; i < d; ++i) r[i] = a[i] + b[i];
    return r;
}

inline Site sub(const Site& a, const Site& b, int d) {
    Site r{};
    for (int i = 0; i < d; ++i) r[i] = a[i] - b[i];
    return r;
}

inline long norm2(const Site& s, int d) {
    long n = 0;
    for (int i = 0; i < d; ++i) n += static_cast<long>(s[i]) * s[i];
    return n;
}

inline double norm(const Site& s, int d) { return std::sqrt(static_cast<double>(norm2(s, d))); }

inline int norm_inf(const Site& s, int d) {
    int n = 0;
    for (int i = 0; i < d; ++i) n = std::max(n, std::abs(s[i]));
    return n;
}

// Finite periodic box Z^d / N Z^d with representatives in (-N/2, N/2].
class Torus {
  public:
    Torus(int d, int side) : d_(d), side_(side) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("torus dimension out of range");
        if (side < 1) throw std::invalid_argument("torus side must be positive");
        volume_ = 1;
        for (int i = 0; i < d; ++i) volume_ *= static_cast<std::int64_t>(side);
    }

    int dim() const { return d_; }
    int side() const { return side_; }
    std::int64_t volume() const { return volume_; }

    // Reduce one coordinate into (-N/2, N/2].
    int reduce(int c) const {
        int m = c % side_;
        if (m < 0) m += side_;          // now in [0, N)
        if (2 * m > side_) m -= side_;  // into (-N/2, N/2]
        return m;
    }

    Site representative(const Site& s) const {
        Site r{};
        for (int i = 0; i < d_; ++i) r[i] = reduce(s[i]);
        return r;
    }

    std::int64_t index(const Site& s) const {
        std::int64_t idx = 0;
        for (int i = 0; i < d_; ++i) {
            int m = s[i] % side_;
            if (m < 0) m += side_;
            idx = idx * side_ + m;
        }
        return idx;
    }

    Site site_of(std::int64_t idx) const {
        Site s{};
        for (int i = d_ - 1; i >= 0; --i) {
            int m = static_cast<int>(idx % side_);
            idx /= side_;
            s[i] = reduce(m);
        }
        return s;
    }

    // Fourier mode k = 2*pi*m/N per axis, m the unreduced index digits.
    std::array<double, kMaxDim> mode(std::int64_t idx) const {
        std::array<double, kMaxDim> k{};
        for (int i = d_ - 1; i >= 0; --i) {
            int m = static_cast<int>(idx % side_);
            idx /= side_;
            if (2 * m > side_) m -= side_;
            k[i] = 2.0 * M_PI * m / side_;
        }
        return k;
    }

    bool operator==(const Torus& o) const { return d_ == o.d_ && side_ == o.side_; }
    bool operator!=(const Torus& o) const { return !(*this == o); }

  private:
    int d_;
    int side_;
    std::int64_t volume_;
};

// Enumerate the box [-r, r]^d (used for kernel supports and series radii).
inline std::vector<Site> box_sites(int d, int r) {
    std::vector<Site> out;
    Site s{};
    for (int i = 0; i < d; ++i) s[i] = -r;
    while (true) {
        out.push_back(s);
        int i = 0;
        for (; i < d; ++i) {
            if (s[i] < r) {
                ++s[i];
                break;
            }
            s[i] = -r;
        }
        if (i == d) break;
    }
    return out;
}

}  // namespace lacex
