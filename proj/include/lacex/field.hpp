#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lacex/torus.hpp"

namespace lacex {

enum class Provenance { Analytic, SeriesEvaluated, MonteCarlo };

inline std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Analytic: return "analytic";
        case Provenance::SeriesEvaluated: return "series";
        case Provenance::MonteCarlo: return "mc";
    }
    return "?";
}

inline Provenance provenance_from(const std::string& s) {
    if (s == "analytic") return Provenance::Analytic;
    if (s == "series") return Provenance::SeriesEvaluated;
    if (s == "mc") return Provenance::MonteCarlo;
    throw std::invalid_argument("unknown provenance tag: " + s);
}

// Real values on a torus, one per site.
class ScalarField {
  public:
    ScalarField(Torus t, double fill = 0.0, Provenance prov = Provenance::Analytic)
        : torus_(t), values_(static_cast<std::size_t>(t.volume()), fill), prov_(prov) {}

    const Torus& torus() const { return torus_; }
    Provenance provenance() const { return prov_; }
    void set_provenance(Provenance p) { prov_ = p; }
    bool symmetric_flag() const { return symmetric_; }
    void set_symmetric_flag(bool s) { symmetric_ = s; }

    std::size_t size() const { return values_.size(); }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double& operator[](std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }

    double& at(const Site& x) { return values_[static_cast<std::size_t>(torus_.index(x))]; }
    double at(const Site& x) const { return values_[static_cast<std::size_t>(torus_.index(x))]; }

    double sum() const {
        double s = 0;
        for (double v : values_) s += v;
        return s;
    }

    double max_abs() const {
        double m = 0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    // Largest |f(x) - f(-x)|; zero for fields honouring the symmetric flag.
    double asymmetry() const {
        double m = 0;
        for (std::int64_t i = 0; i < torus_.volume(); ++i) {
            Site x = torus_.site_of(i);
            m = std::max(m, std::abs(values_[static_cast<std::size_t>(i)] -
                                     at(negate(x, torus_.dim()))));
        }
        return m;
    }

  private:
    Torus torus_;
    std::vector<double> values_;
    Provenance prov_;
    bool symmetric_ = false;
};

inline ScalarField delta_field(const Torus& t) {
    ScalarField f(t);
    Site origin{};
    f.at(origin) = 1.0;
    f.set_symmetric_flag(true);
    return f;
}

// (|x|+1)^{-q} with x the torus representative; the regularized power-law
// test line used by the convolution and diagram bound checks.
inline ScalarField power_law_field(const Torus& t, double q) {
    ScalarField f(t);
    for (std::int64_t i = 0; i < t.volume(); ++i) {
        Site x = t.site_of(i);
        f[i] = std::pow(norm(x, t.dim()) + 1.0, -q);
    }
    f.set_symmetric_flag(true);
    f.set_provenance(Provenance::Analytic);
    return f;
}

}  // namespace lacex
