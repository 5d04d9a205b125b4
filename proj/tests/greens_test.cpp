#include <catch2/catch_amalgamated.hpp>

#include "lacex/greens.hpp"

using namespace lacex;

TEST_CASE("green amplitude values") {
    REQUIRE(green_amplitude(3) == Catch::Approx(3.0 / (2.0 * M_PI)).epsilon(1e-12));
    REQUIRE(green_amplitude(3) == Catch::Approx(0.477465).margin(1e-6));
    REQUIRE(green_amplitude(5) == Catch::Approx(5.0 / (4.0 * M_PI * M_PI)).epsilon(1e-12));
    REQUIRE(green_amplitude(5) == Catch::Approx(0.126651).margin(1e-6));
    REQUIRE_THROWS_AS(green_amplitude(2), std::invalid_argument);
}

TEST_CASE("asymptote at the origin") {
    StepKernel k = build_kernel("uniform", 1, 3);  // sigma^2 = 2
    REQUIRE(k.sigma2 == Rat(2));
    Site x{};
    REQUIRE(greens_asymptote(k, x) ==
            Catch::Approx(green_amplitude(3) / 2.0).epsilon(1e-12));
}

TEST_CASE("greens_torus basics") {
    StepKernel k = build_kernel("uniform", 1, 2);
    Torus t(2, 16);
    SECTION("mu out of range rejected") {
        REQUIRE_THROWS_AS(greens_torus(k, 1.5, t), std::invalid_argument);
    }
    SECTION("mu = 1 with d <= 2 rejected") {
        REQUIRE_THROWS_AS(greens_torus(k, 1.0, t), std::invalid_argument);
    }
    SECTION("mu = 0 gives the delta") {
        GreensResult g = greens_torus(k, 0.0, t);
        Site o{};
        REQUIRE(g.field.at(o) == Catch::Approx(1.0).margin(1e-12));
        Site e1 = make_site({1, 0});
        REQUIRE(g.field.at(e1) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("generating identity S = delta + mu D * S for mu < 1") {
        double mu = 0.7;
        GreensResult g = greens_torus(k, mu, t);
        ScalarField dfield(t);
        for (const auto& e : k.support) dfield.at(e.x) = e.wd;
        ScalarField conv = convolve(dfield, g.field);
        double scale = g.field.max_abs();
        for (std::int64_t i = 0; i < t.volume(); ++i) {
            double expect = (i == 0 ? 1.0 : 0.0) + mu * conv[i];
            REQUIRE(std::abs(g.field[i] - expect) <= 1e-9 * scale);
        }
    }
    SECTION("S_mu nondecreasing in mu pointwise") {
        GreensResult a = greens_torus(k, 0.3, t);
        GreensResult b = greens_torus(k, 0.6, t);
        for (std::int64_t i = 0; i < t.volume(); ++i)
            REQUIRE(b.field[i] >= a.field[i] - 1e-12);
    }
}

TEST_CASE("poissonized time representation") {
    SECTION("t = 0 is the delta") {
        StepKernel k = build_kernel("uniform", 1, 2);
        Torus t(2, 8);
        HeatSlice h = poisson_kernel(k, 0.0, 0.5, t, 5);
        Site o{};
        REQUIRE(h.field.at(o) == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(h.field.sum() == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("total mass e^{-t(1-mu)}") {
        StepKernel k = build_kernel("uniform", 1, 2);
        Torus t(2, 16);
        HeatSlice h = poisson_kernel(k, 5.0, 0.7, t, 40);
        REQUIRE(h.tail_ok);
        REQUIRE(h.field.sum() == Catch::Approx(std::exp(-5.0 * 0.3)).margin(1e-8));
    }
    SECTION("too small truncation rejected, tail audited otherwise") {
        StepKernel k = build_kernel("uniform", 1, 1);
        Torus t(1, 16);
        REQUIRE_THROWS_AS(poisson_kernel(k, 9.0, 1.0, t, 10), std::invalid_argument);
        HeatSlice h = poisson_kernel(k, 9.0, 1.0, t, 40);
        REQUIRE(h.tail_ok);
        REQUIRE(h.tail_mass <= 1e-10);
    }
    SECTION("monotone in mu pointwise and nonnegative") {
        StepKernel k = build_kernel("uniform", 1, 1);
        Torus t(1, 32);
        HeatSlice a = poisson_kernel(k, 3.0, 0.4, t, 40);
        HeatSlice b = poisson_kernel(k, 3.0, 0.9, t, 40);
        for (std::int64_t i = 0; i < t.volume(); ++i) {
            REQUIRE(a.field[i] >= -1e-14);
            REQUIRE(b.field[i] >= a.field[i] - 1e-12);
        }
    }
    SECTION("d=1 quadrature oracle for the k-integral") {
        StepKernel k = build_kernel("uniform", 1, 1);
        Torus t(1, 64);
        double tt = 4.0, mu = 1.0;
        HeatSlice h = poisson_kernel(k, tt, mu, t, 50);
        for (int xi : {0, 1, 3, 6}) {
            auto integrand = [&](double kk) {
                double dh = (1.0 + 2.0 * std::cos(kk)) / 3.0;
                return std::cos(kk * xi) * std::exp(-tt * (1.0 - mu * dh)) / (2.0 * M_PI);
            };
            double direct = adaptive_simpson(integrand, -M_PI, M_PI, 1e-12);
            REQUIRE(h.field.at(make_site({xi})) == Catch::Approx(direct).margin(1e-8));
        }
    }
}

TEST_CASE("poissonized oracle for S at mu = 1/2") {
    StepKernel k = build_kernel("uniform", 1, 1);
    Torus t(1, 64);
    GreensResult g = greens_torus(k, 0.5, t);
    ModeTable modes(k, t);
    Site o{};
    auto integrand = [&](double tt) {
        return modes.mode_sum(o, [tt](double dh) { return std::exp(-tt * (1.0 - 0.5 * dh)); });
    };
    double byTime = panel_integrate(integrand, 0.0, 80.0, 1e-10);
    REQUIRE(byTime == Catch::Approx(g.field.at(o)).margin(1e-6));
}

TEST_CASE("gaussian tail closed form vs quadrature") {
    // int_0^inf p_t(x) dt = a_d / (sigma^2 |x|^{d-2}) and the incomplete
    // version matches direct quadrature
    int d = 3;
    double s2 = 6.0, r = 9.0;
    auto pt = [&](double t) {
        return std::pow(d / (2.0 * M_PI * s2 * t), d / 2.0) *
               std::exp(-d * r * r / (2.0 * t * s2));
    };
    double full = gaussian_tail_integral(d, s2, r, 1e-9);
    REQUIRE(full == Catch::Approx(green_amplitude(d) / (s2 * r)).epsilon(1e-9));
    // windows [T1, T2] avoid truncating the slowly decaying far tail
    for (auto [T1, T2] : {std::pair{5.0, 60.0}, std::pair{20.0, 500.0}, std::pair{1.0, 20.0}}) {
        double closed = gaussian_tail_integral(d, s2, r, T1) - gaussian_tail_integral(d, s2, r, T2);
        double quad = panel_integrate(pt, T1, T2, 1e-11);
        REQUIRE(closed == Catch::Approx(quad).margin(1e-8));
    }
}

TEST_CASE("moment generating identity for I_t") {
    StepKernel k = build_kernel("uniform", 2, 1);
    Torus t(1, 48);
    double tt = 3.0;
    ModeTable modes(k, t);
    for (double s : {0.2, 0.5 / 2.0}) {
        double lhs = 0;
        for (std::int64_t i = 0; i < t.volume(); ++i) {
            Site x = t.site_of(i);
            double I = modes.mode_sum(x, [tt](double dh) { return std::exp(-tt * (1.0 - dh)); });
            lhs += std::exp(s * x[0]) * I;
        }
        double arg = 0;
        for (const auto& e : k.support) arg += e.wd * (std::cosh(s * e.x[0]) - 1.0);
        REQUIRE(lhs == Catch::Approx(std::exp(tt * arg)).margin(1e-6));
    }
}

TEST_CASE("large deviation bounds") {
    SECTION("x = 0 trivially satisfied") {
        StepKernel k = build_kernel("uniform", 1, 1);
        Torus t(1, 32);
        auto rep = large_deviation_check(k, t, {0.5, 2.0}, {make_site({0})});
        REQUIRE(rep.ok());
    }
    SECTION("d=1 L=1 exponential bound at x=6 t=2") {
        StepKernel k = build_kernel("uniform", 1, 1);
        Torus t(1, 64);
        auto rep = large_deviation_check(k, t, {2.0}, {make_site({6})});
        REQUIRE(rep.ok());
    }
    SECTION("d=2 L=1 gaussian bound at x=(8,0) t=20") {
        StepKernel k = build_kernel("uniform", 1, 2);
        Torus t(2, 64);
        double s2 = k.sigma2_d();
        double t0 = 2.0 * 1 * 8 / (2.0 * s2);
        REQUIRE(20.0 >= t0);
        auto rep = large_deviation_check(k, t, {20.0}, {make_site({8, 0})});
        REQUIRE(rep.ok());
    }
    SECTION("grid sweep over d in {1,2}, L in {1,2}") {
        for (int d = 1; d <= 2; ++d) {
            for (int L = 1; L <= 2; ++L) {
                StepKernel k = build_kernel("uniform", L, d);
                Torus t(d, d == 1 ? 128 : 48);
                std::vector<double> ts{0.25, 1.0, 4.0, 9.0};
                std::vector<Site> xs;
                for (int r : {0, 2, 5, 9}) {
                    Site x{};
                    x[0] = r;
                    xs.push_back(x);
                }
                auto rep = large_deviation_check(k, t, ts, xs);
                INFO("d=" << d << " L=" << L);
                REQUIRE(rep.ok());
            }
        }
    }
}

TEST_CASE("gaussian split consistency on a moderate torus") {
    StepKernel k = build_kernel("uniform", 2, 3);
    Torus t(3, 64);
    Site x = make_site({10, 0, 0});
    auto rep = gaussian_split(k, x, t, 0.1);
    GreensResult g = greens_torus(k, 1.0, t);

    SECTION("raw split halves sum to the raw spectral value") {
        REQUIRE(rep.S_less_raw + rep.S_greater_raw ==
                Catch::Approx(g.field.at(x)).margin(1e-5));
    }
    SECTION("quadrature cross-check of S_less") {
        ModeTable modes(k, t);
        auto integrand = [&](double tt) {
            return modes.mode_sum(
                x, [tt](double dh) { return std::exp(-tt * (1.0 - dh)); }, true);
        };
        double quad = panel_integrate(integrand, 0.0, rep.T, 1e-9);
        REQUIRE(quad == Catch::Approx(rep.S_less_raw).margin(1e-7));
    }
    SECTION("x = 0 rejected") {
        REQUIRE_THROWS_AS(gaussian_split(k, Site{}, t), std::invalid_argument);
    }
}
