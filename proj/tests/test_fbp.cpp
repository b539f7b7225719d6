#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ringrec/fbp.hpp"
#include "ringrec/geometry.hpp"
#include "ringrec/metrics.hpp"
#include "ringrec/phantom.hpp"
#include "ringrec/projector.hpp"
#include "ringrec/rng.hpp"
#include "test_util.hpp"

using namespace ringrec;

TEST_CASE("ramp filter kills constant rows") {
    Grid2D rows(3, 96, 0.0);
    for (int r = 0; r < 3; ++r) {
        for (int d = 0; d < 96; ++d) rows(r, d) = 2.5 * (r + 1);
    }
    ramp_filter_rows(rows, 2.0);
    for (int r = 0; r < 3; ++r) {
        for (int d = 0; d < 96; ++d) {
            REQUIRE(std::abs(rows(r, d)) <= 1e-6 * 2.5 * (r + 1));
        }
    }
}

TEST_CASE("ramp filter has the Ram-Lak impulse response") {
    Grid2D rows(1, 64, 0.0);
    rows(0, 32) = 1.0;
    ramp_filter_rows(rows, 1.0);
    CHECK(rows(0, 32) > 0.2);    // h[0] = 1/4 at tau=1
    CHECK(rows(0, 33) < 0.0);    // odd neighbors negative
    CHECK(std::abs(rows(0, 34)) < 1e-2);  // even lags near zero
}

TEST_CASE("fbp basics") {
    FanBeamGeometry g = geometry_preset("desk");

    SUBCASE("zero sinogram reconstructs to the zero image") {
        Grid2D x = fbp(Grid2D(g.n_views, g.n_detectors, 0.0), g);
        CHECK(x.max() == 0.0);
        CHECK(x.min() == 0.0);
    }

    SUBCASE("short-scan geometries are rejected") {
        FanBeamGeometry s = g;
        s.view_extent = std::numbers::pi;  // 180 degrees
        CHECK_THROWS_WITH_AS(fbp(Grid2D(s.n_views, s.n_detectors, 0.0), s),
                             doctest::Contains("short-scan"), Error);
    }

    SUBCASE("dimension mismatch is an error") {
        CHECK_THROWS_AS(fbp(Grid2D(3, 3, 0.0), g), Error);
    }
}

TEST_CASE("fbp round-trip restores a smooth phantom") {
    FanBeamGeometry g = geometry_preset("desk");
    Grid2D blob = gaussian_blob(g.image_size, g.pixel_size, 6.0, 0.6);
    Grid2D sino = forward_project(blob, g);
    Grid2D rec = fbp(sino, g);

    const auto mask = inscribed_circle_mask(g.image_size);
    const double range = blob.max() - blob.min();
    const double p = psnr(rec, blob, range, mask);
    CHECK(p >= 30.0);

    // absolute scale: the reconstructed peak matches the phantom peak
    CHECK(rec(32, 32) == doctest::Approx(blob(32, 32)).epsilon(0.05));
}

TEST_CASE("fbp round-trip on a disk keeps the plateau level") {
    FanBeamGeometry g = geometry_preset("desk");
    Grid2D disk = disk_phantom(g.image_size, g.pixel_size, 18.0, 0.5, 8);
    Grid2D rec = fbp(forward_project(disk, g), g);
    // average over the interior plateau (r < 10 mm)
    double acc = 0.0;
    int n = 0;
    const double half = 0.5 * (g.image_size - 1);
    for (int r = 0; r < g.image_size; ++r) {
        for (int c = 0; c < g.image_size; ++c) {
            const double dy = (half - r), dx = (c - half);
            if (dx * dx + dy * dy < 100.0) {
                acc += rec(r, c);
                ++n;
            }
        }
    }
    CHECK(acc / n == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("fbp_adjoint passes the dot-product test") {
    FanBeamGeometry g = geometry_preset("desk");
    SeededRng rng(31, 2);
    for (int trial = 0; trial < 20; ++trial) {
        Grid2D s = testutil::random_grid(g.n_views, g.n_detectors, rng);
        Grid2D x = testutil::random_grid(g.image_size, g.image_size, rng);
        Grid2D fs = fbp(s, g);
        Grid2D ftx = fbp_adjoint(x, g);
        const double lhs = testutil::dot(fs, x);
        const double rhs = testutil::dot(s, ftx);
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * testutil::norm2(fs) * testutil::norm2(x));
    }
}
