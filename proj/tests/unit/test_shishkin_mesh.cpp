#include "doctest.h"
#include "oracles.hpp"

#include "sprd/errors.hpp"
#include "sprd/shishkin_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace sprd;

TEST_CASE("L* at n = e is 1") {
    CHECK(solve_l_star(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("L* for 64 and 1024 lies in its bracket and matches Newton") {
    const double l64 = solve_l_star(64.0);
    CHECK(l64 == doctest::Approx(3.0455).epsilon(1e-4));
    CHECK(l64 > std::log(std::log(64.0)));
    CHECK(l64 <= std::log(64.0));
    CHECK(std::abs(l64 - oracle::newton_l_star(64.0)) <= 1e-12);
    const double l1024 = solve_l_star(1024.0);
    CHECK(l1024 == doctest::Approx(5.2697).epsilon(1e-4));
    CHECK(std::abs(l1024 - oracle::newton_l_star(1024.0)) <= 1e-12);
}

TEST_CASE("L* residual stays below 1e-9 n") {
    for (double n : {3.0, 8.0, 16.0, 64.0, 100.0, 512.0, 1024.0, 4096.0, 1e6}) {
        const double l = solve_l_star(n);
        CHECK(std::abs(l * std::exp(l) - n) <= 1e-9 * n);
    }
}

TEST_CASE("L* rejects arguments below e") {
    CHECK_THROWS_AS((void)solve_l_star(2.0), ConfigError);
    CHECK_THROWS_AS((void)solve_l_star(0.5), ConfigError);
}

TEST_CASE("transition parameter clamps and follows the formula") {
    CHECK(transition_parameter(std::ldexp(1.0, -4), 3.0455, 4.0) == 0.25);
    CHECK(transition_parameter(std::ldexp(1.0, -12), 3.0455, 4.0) ==
          doctest::Approx(0.19034).epsilon(1e-4));
    double previous = 0.0;
    for (int k = 40; k >= 0; --k) {
        const double s = transition_parameter(std::ldexp(1.0, -k), 3.0455, 4.0);
        CHECK(s >= previous);
        previous = s;
    }
}

TEST_CASE("K hits its endpoint values") {
    for (double sigma : {0.01, 0.1, 0.19034, 0.25}) {
        CHECK(mesh_generating_function(0.0, sigma) == 0.0);
        CHECK(mesh_generating_function(0.25, sigma) == doctest::Approx(sigma).epsilon(1e-15));
        CHECK(mesh_generating_function(0.5, sigma) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("cubic coefficient examples") {
    CHECK(cubic_coefficient(0.19034) == doctest::Approx(7.636).epsilon(1e-3));
    CHECK(cubic_coefficient(0.25) == 0.0);
    for (double t : {0.0, 0.1, 0.3, 0.42, 0.5}) {
        CHECK(mesh_generating_function(t, 0.25) == doctest::Approx(t).epsilon(1e-15));
    }
}

TEST_CASE("K rejects out-of-range arguments") {
    CHECK_THROWS_AS((void)mesh_generating_function(-0.1, 0.2), ConfigError);
    CHECK_THROWS_AS((void)mesh_generating_function(0.6, 0.2), ConfigError);
    CHECK_THROWS_AS((void)mesh_generating_function(0.3, 0.0), ConfigError);
    CHECK_THROWS_AS((void)mesh_generating_function(0.3, 0.3), ConfigError);
}

TEST_CASE("K has no jump in its second difference across t = 1/4") {
    const double sigma = 0.05;
    const double step = 1e-3;
    const auto second = [&](double t) {
        return (mesh_generating_function(t - step, sigma) - 2.0 * mesh_generating_function(t, sigma) +
                mesh_generating_function(t + step, sigma)) / (step * step);
    };
    double interior_variation = 0.0;
    for (double t = 0.25 + 2 * step; t + 2 * step < 0.5; t += step) {
        interior_variation = std::max(interior_variation, std::abs(second(t + step) - second(t)));
    }
    const double jump = std::abs(second(0.25 + step) - second(0.25 - step));
    CHECK(jump <= 10.0 * interior_variation);
    double previous = -1.0;
    for (double t = 0.0; t <= 0.5; t += step) {
        const double value = mesh_generating_function(t, sigma);
        CHECK(value > previous);
        previous = value;
    }
}

TEST_CASE("layer widths at eps = 2^-12, N = 64") {
    const auto mesh = build_mesh({64, 4.0, LStar{}}, std::ldexp(1.0, -12));
    for (std::size_t j = 1; j <= 16; ++j) {
        CHECK(mesh.widths[j - 1] == doctest::Approx(0.011896).epsilon(1e-4));
        CHECK(mesh.widths[64 - j] == doctest::Approx(0.011896).epsilon(1e-4));
    }
    CHECK(mesh.sigma == doctest::Approx(0.19034).epsilon(1e-4));
    CHECK(mesh.p_coeff == doctest::Approx(7.636).epsilon(1e-3));
}

TEST_CASE("eps = 2^-4 gives the uniform mesh") {
    const auto mesh = build_mesh({64, 4.0, LStar{}}, std::ldexp(1.0, -4));
    for (double h : mesh.widths) {
        CHECK(h == doctest::Approx(1.0 / 64.0).epsilon(1e-14));
    }
}

TEST_CASE("mesh invariants across eps and N") {
    for (int n : {8, 16, 64, 256, 1024}) {
        for (int k = 4; k <= 32; k += 4) {
            const auto mesh = build_mesh({n, 4.0, LStar{}}, std::ldexp(1.0, -k));
            const std::size_t nn = static_cast<std::size_t>(n);
            REQUIRE(mesh.nodes.size() == nn + 1);
            CHECK(mesh.nodes.front() == 0.0);
            CHECK(mesh.nodes.back() == 1.0);
            bool mirrored = true;
            bool increasing = true;
            for (std::size_t j = 0; j <= nn; ++j) {
                if (j <= nn / 2) {
                    mirrored = mirrored && mesh.nodes[nn - j] == 1.0 - mesh.nodes[j];
                }
                if (j > 0) {
                    increasing = increasing && mesh.nodes[j] > mesh.nodes[j - 1];
                }
            }
            CHECK(mirrored);
            CHECK(increasing);
            const double total = std::accumulate(mesh.widths.begin(), mesh.widths.end(), 0.0);
            CHECK(std::abs(total - 1.0) <= 1e-14);
            CHECK(mesh.sigma > 0.0);
            CHECK(mesh.sigma <= 0.25);
            const double layer = 4.0 * mesh.sigma / n;
            for (std::size_t j = 1; j <= nn / 4; ++j) {
                CHECK(std::abs(mesh.widths[j - 1] - layer) <= 1e-15);
                CHECK(std::abs(mesh.widths[nn - j] - layer) <= 1e-15);
            }
            const double widest = *std::max_element(mesh.widths.begin(), mesh.widths.end());
            CHECK(mesh.h_max == widest);
            CHECK(std::abs(mesh.widths[nn / 2 - 1] - mesh.widths[nn / 2]) <= 1e-15);
            CHECK(std::abs(mesh.widths[nn / 2 - 1] - widest) <= 1e-15);
        }
    }
}

TEST_CASE("width steps in the regular part scale like 1/N^2 uniformly in eps") {
    double worst = 0.0;
    for (int n : {64, 128, 256, 512, 1024}) {
        for (int k = 4; k <= 32; k += 4) {
            const auto mesh = build_mesh({n, 4.0, LStar{}}, std::ldexp(1.0, -k));
            double local = 0.0;
            for (int j = n / 4; j < 3 * n / 4; ++j) {
                local = std::max(local, std::abs(mesh.widths[j] - mesh.widths[j - 1]));
            }
            local *= static_cast<double>(n) * n;
            CHECK(local <= 1.5 * std::abs(mesh.p_coeff) + 1.0);
            worst = std::max(worst, local);
        }
    }
    CHECK(worst <= 49.0);
}

TEST_CASE("mesh config validation") {
    CHECK_THROWS_AS((void)build_mesh({30, 4.0, LStar{}}, 0.01), ConfigError);
    CHECK_THROWS_AS((void)build_mesh({4, 4.0, LStar{}}, 0.01), ConfigError);
    CHECK_THROWS_AS((void)build_mesh({64, 0.0, LStar{}}, 0.01), ConfigError);
    CHECK_THROWS_AS((void)build_mesh({64, 4.0, LExplicit{1.0}}, 0.01), ConfigError);
    CHECK_THROWS_AS((void)build_mesh({64, 4.0, LExplicit{5.0}}, 0.01), ConfigError);
    CHECK_NOTHROW((void)build_mesh({64, 4.0, LExplicit{3.0}}, 0.01));
    CHECK_THROWS_AS((void)build_mesh({64, 4.0, LStar{}}, 0.0), ConfigError);
}

TEST_CASE("L modes resolve as configured") {
    CHECK(resolve_l_value({64, 4.0, LLogN{}}) == doctest::Approx(std::log(64.0)));
    CHECK(resolve_l_value({64, 4.0, LExplicit{2.5}}) == 2.5);
    CHECK(resolve_l_value({64, 4.0, LStar{}}) == solve_l_star(64.0));
}

TEST_CASE("midpoint refinement keeps coarse nodes and halves every width") {
    const auto coarse = build_mesh({64, 4.0, LStar{}}, std::ldexp(1.0, -20));
    const auto fine = refine_midpoints(coarse);
    REQUIRE(fine.nodes.size() == 129);
    for (std::size_t j = 0; j <= 64; ++j) {
        CHECK(fine.nodes[2 * j] == coarse.nodes[j]);
    }
    for (std::size_t j = 0; j < 64; ++j) {
        CHECK(fine.widths[2 * j] == doctest::Approx(coarse.widths[j] / 2.0).epsilon(1e-12));
    }
    CHECK(fine.sigma == coarse.sigma);
    CHECK(fine.regular_begin == 2 * coarse.regular_begin);
    CHECK(fine.regular_end == 2 * coarse.regular_end);
    for (std::size_t j = 0; j <= 64; j += 2) {
        CHECK(fine.nodes[128 - j] == 1.0 - fine.nodes[j]);
    }
}
