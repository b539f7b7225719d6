#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ringrec/corruption.hpp"
#include "ringrec/fbp.hpp"
#include "ringrec/geometry.hpp"
#include "ringrec/phantom.hpp"
#include "ringrec/projector.hpp"
#include "ringrec/synthesis.hpp"
#include "test_util.hpp"

using namespace ringrec;

TEST_CASE("sample_response draws the specified corruption pattern") {
    SUBCASE("degenerate fractions give the ideal response") {
        SeededRng rng(1, 0);
        DetectorResponse r = sample_response(rng, 64, 0.0, 0.0, 0.75, 1.25);
        for (double e : r.eta_ir) CHECK(e == 1.0);
        for (double m : r.mask_im) CHECK(m == 1.0);
    }

    SUBCASE("counts are exact floors and values stay in range") {
        SeededRng rng(2, 0);
        DetectorResponse r = sample_response(rng, 1000, 0.75, 0.02, 0.75, 1.25);
        int n_perturbed = 0, n_dead = 0;
        for (double e : r.eta_ir) {
            CHECK(e >= 0.75);
            CHECK(e <= 1.25);
            if (e != 1.0) ++n_perturbed;
        }
        for (double m : r.mask_im) {
            if (m == 0.0) ++n_dead;
        }
        CHECK(n_perturbed == 750);
        CHECK(n_dead == 20);
        r.validate();
    }

    SUBCASE("perturbed-eta mean approaches 1.0 over many draws") {
        double acc = 0.0;
        int count = 0;
        for (int trial = 0; trial < 100; ++trial) {
            SeededRng rng(3, static_cast<uint64_t>(trial));
            DetectorResponse r = sample_response(rng, 1000, 0.75, 0.02, 0.75, 1.25);
            int dead = 0;
            for (double m : r.mask_im)
                if (m == 0.0) ++dead;
            CHECK(dead == 20);
            for (double e : r.eta_ir) {
                if (e != 1.0) {
                    acc += e;
                    ++count;
                }
            }
        }
        CHECK(count == doctest::Approx(75000).epsilon(0.001));
        CHECK(acc / count == doctest::Approx(1.0).epsilon(0.01));
    }

    SUBCASE("invalid parameters are rejected") {
        SeededRng rng(4, 0);
        CHECK_THROWS_AS(sample_response(rng, 10, -0.1, 0.0, 0.75, 1.25), Error);
        CHECK_THROWS_AS(sample_response(rng, 10, 0.5, 0.0, 0.5, 1.25), Error);
        CHECK_THROWS_AS(sample_response(rng, 10, 0.5, 0.0, 1.2, 1.0), Error);
    }
}

TEST_CASE("apply_corruption implements the log-domain response model") {
    Grid2D sino(4, 6, 1.0);
    for (int v = 0; v < 4; ++v)
        for (int d = 0; d < 6; ++d) sino(v, d) = 0.5 + v + 0.1 * d;

    SUBCASE("ideal response is the identity") {
        Grid2D out = apply_corruption(sino, DetectorResponse::ideal(6));
        CHECK(testutil::max_abs_diff(out, sino) == 0.0);
    }

    SUBCASE("a single gain shifts its column by -ln(eta)") {
        DetectorResponse r = DetectorResponse::ideal(6);
        r.eta_ir[2] = 0.8;
        Grid2D out = apply_corruption(sino, r);
        for (int v = 0; v < 4; ++v) {
            CHECK(out(v, 2) == doctest::Approx(sino(v, 2) + 0.2231435513).epsilon(1e-9));
            CHECK(out(v, 3) == sino(v, 3));
        }
    }

    SUBCASE("masked detectors read exactly zero whatever their eta") {
        DetectorResponse r = DetectorResponse::ideal(6);
        r.mask_im[4] = 0.0;
        r.eta_ir[4] = 1.17;
        Grid2D out = apply_corruption(sino, r);
        for (int v = 0; v < 4; ++v) CHECK(out(v, 4) == 0.0);
    }

    SUBCASE("eta <= 0 on a live detector is an error") {
        DetectorResponse r = DetectorResponse::ideal(6);
        r.eta_ir[1] = 0.0;
        CHECK_THROWS_AS(apply_corruption(sino, r), Error);
    }

    SUBCASE("detector count mismatch is an error") {
        CHECK_THROWS_AS(apply_corruption(sino, DetectorResponse::ideal(5)), Error);
    }
}

TEST_CASE("corruption is affine in the sinogram for a fixed response") {
    SeededRng rng(5, 0);
    DetectorResponse r = sample_response(rng, 12, 0.5, 0.25, 0.8, 1.2);
    Grid2D a = testutil::random_grid(6, 12, rng, 0.0, 3.0);
    Grid2D b = testutil::random_grid(6, 12, rng, 0.0, 3.0);
    Grid2D zero(6, 12, 0.0);

    Grid2D c = apply_corruption(zero, r);
    Grid2D ca = apply_corruption(a, r);
    Grid2D cb = apply_corruption(b, r);
    Grid2D sum(6, 12);
    for (size_t i = 0; i < sum.size(); ++i) sum.data()[i] = a.data()[i] + b.data()[i];
    Grid2D csum = apply_corruption(sum, r);

    // superposition of the linear part: (c(a)-c0) + (c(b)-c0) == c(a+b)-c0
    for (size_t i = 0; i < sum.size(); ++i) {
        const double lhs = (ca.data()[i] - c.data()[i]) + (cb.data()[i] - c.data()[i]);
        const double rhs = csum.data()[i] - c.data()[i];
        REQUIRE(std::abs(lhs - rhs) < 1e-12);
    }

    // the additive part is -mask * ln(eta)
    for (int d = 0; d < 12; ++d) {
        const double expect = r.mask_im[d] == 0.0 ? 0.0 : -r.mask_im[d] * std::log(r.eta_ir[d]);
        CHECK(c(0, d) == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("corruption commutes with view permutations") {
        Grid2D perm(6, 12);
        const int order[6] = {3, 1, 5, 0, 2, 4};
        for (int v = 0; v < 6; ++v)
            for (int d = 0; d < 12; ++d) perm(v, d) = a(order[v], d);
        Grid2D corrupt_then_perm(6, 12);
        for (int v = 0; v < 6; ++v)
            for (int d = 0; d < 12; ++d) corrupt_then_perm(v, d) = ca(order[v], d);
        Grid2D perm_then_corrupt = apply_corruption(perm, r);
        CHECK(testutil::max_abs_diff(corrupt_then_perm, perm_then_corrupt) == 0.0);
    }
}

TEST_CASE("make_ct_like produces circle-masked attenuation maps") {
    SUBCASE("constant input becomes a disk at the drawn mu_max") {
        Grid2D ones(10, 10, 1.0);
        SeededRng rng(6, 1);
        Grid2D img = make_ct_like(ones, 64, rng);
        const double mx = img.max();
        CHECK(mx >= 0.5);
        CHECK(mx <= 0.7);
        CHECK(img(32, 32) == doctest::Approx(mx));
        CHECK(img(0, 0) == 0.0);
        CHECK(img(0, 63) == 0.0);
        CHECK(img(63, 0) == 0.0);
        CHECK(img(63, 63) == 0.0);
    }

    SUBCASE("all-zero input stays zero") {
        Grid2D z(8, 8, 0.0);
        SeededRng rng(6, 2);
        Grid2D img = make_ct_like(z, 32, rng);
        CHECK(img.max() == 0.0);
    }

    SUBCASE("max lands in [0.5, 0.7] and corners stay 0 over 100 seeded sources") {
        for (int trial = 0; trial < 100; ++trial) {
            SeededRng src_rng(7, static_cast<uint64_t>(trial));
            Grid2D src = random_soft_phantom(48, src_rng);
            if (src.max() <= 0.0) continue;
            SeededRng rng(8, static_cast<uint64_t>(trial));
            Grid2D img = make_ct_like(src, 64, rng);
            REQUIRE(img.max() >= 0.5);
            REQUIRE(img.max() <= 0.7);
            REQUIRE(img(0, 0) == 0.0);
            REQUIRE(img(63, 63) == 0.0);
        }
    }
}

TEST_CASE("generate_pair is deterministic and composes the pipeline") {
    FanBeamGeometry g = geometry_preset("desk");
    SeededRng src_rng(9, 0);
    Grid2D source = random_soft_phantom(48, src_rng);

    TrainingSample s1 = generate_pair(source, g, "desk", 7, 3, {});
    TrainingSample s2 = generate_pair(source, g, "desk", 7, 3, {});

    SUBCASE("same (source, seed, stream) twice is bit-identical") {
        REQUIRE(testutil::max_abs_diff(s1.x_clean, s2.x_clean) == 0.0);
        REQUIRE(testutil::max_abs_diff(s1.y_corrupt, s2.y_corrupt) == 0.0);
        for (int d = 0; d < g.n_detectors; ++d) {
            REQUIRE(s1.response.eta_ir[d] == s2.response.eta_ir[d]);
            REQUIRE(s1.response.mask_im[d] == s2.response.mask_im[d]);
        }
    }

    SUBCASE("different streams differ") {
        TrainingSample s3 = generate_pair(source, g, "desk", 7, 4, {});
        CHECK(testutil::max_abs_diff(s1.y_corrupt, s3.y_corrupt) > 0.0);
    }

    SUBCASE("y equals apply_corruption(forward_project(x)) bit for bit") {
        Grid2D expect = apply_corruption(forward_project(s1.x_clean, g), s1.response);
        REQUIRE(testutil::max_abs_diff(expect, s1.y_corrupt) == 0.0);
    }
}

TEST_CASE("FBP of a corrupted uniform disk shows rings at masked radii") {
    FanBeamGeometry g = geometry_preset("desk");
    Grid2D disk = disk_phantom(g.image_size, g.pixel_size, 24.0, 0.6, 8);
    Grid2D sino = forward_project(disk, g);

    DetectorResponse r = DetectorResponse::ideal(g.n_detectors);
    const int dead = 38;  // iso distance ~ 11.9 mm, well inside the disk
    r.mask_im[dead] = 0.0;
    Grid2D rec = fbp(apply_corruption(sino, r), g);

    auto circle_variance = [&](double radius) {
        const double half = 0.5 * (g.image_size - 1);
        const int n = 720;
        double mean = 0.0;
        std::vector<double> vals;
        vals.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double a = 2 * std::numbers::pi * i / n;
            const double x = radius * std::cos(a) / g.pixel_size + half;
            const double y = half - radius * std::sin(a) / g.pixel_size;
            const int c0 = static_cast<int>(std::floor(x));
            const int r0 = static_cast<int>(std::floor(y));
            const double wc = x - c0, wr = y - r0;
            const double v = (1 - wr) * ((1 - wc) * rec(r0, c0) + wc * rec(r0, c0 + 1)) +
                             wr * ((1 - wc) * rec(r0 + 1, c0) + wc * rec(r0 + 1, c0 + 1));
            vals.push_back(v);
            mean += v;
        }
        mean /= n;
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        return var / n;
    };

    const double ring_radius = detector_iso_distance(g, dead);
    const double v_ring = circle_variance(ring_radius);
    const double v_ctrl = circle_variance(ring_radius + 6.0);
    CHECK(v_ring >= 5.0 * v_ctrl);
}

TEST_CASE("shepp_phantom scaling and structure") {
    SUBCASE("size 64: max exactly 0.5, background 0") {
        Grid2D p = shepp_phantom(64);
        CHECK(p.max() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(p(0, 0) == 0.0);
        CHECK(p(63, 63) == 0.0);
        CHECK(p.min() >= 0.0);
    }

    SUBCASE("size below 16 is rejected") {
        CHECK_THROWS_AS(shepp_phantom(8), Error);
    }

    SUBCASE("the symmetric ellipse subset renders mirror-symmetrically") {
        const Ellipse sym[] = {
            {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
            {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
            {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
            {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        };
        Grid2D img = render_ellipses(sym, 128, 1);
        for (int r = 0; r < 128; ++r) {
            for (int c = 0; c < 64; ++c) {
                REQUIRE(img(r, c) == img(r, 127 - c));
            }
        }
    }

    SUBCASE("pixel sums scale with area between sizes 64 and 128") {
        const double s64 = shepp_phantom(64).sum();
        const double s128 = shepp_phantom(128).sum();
        CHECK(s128 / s64 == doctest::Approx(4.0).epsilon(0.02));
    }
}
