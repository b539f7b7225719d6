#include <doctest.h>

#include <cstdint>
#include <fstream>

#include "ringrec/grid.hpp"
#include "ringrec/manifest.hpp"
#include "ringrec/raster_io.hpp"
#include "ringrec/rng.hpp"
#include "test_util.hpp"

using namespace ringrec;
using testutil::TempDir;

TEST_CASE("write_raster emits the SRF1 header and f32 payload") {
    TempDir tmp("raster");

    SUBCASE("1x1 zero grid") {
        Grid2D g(1, 1, 0.0);
        write_raster(g, tmp.path("a.srf"));
        const std::string bytes = testutil::slurp(tmp.path("a.srf"));
        const std::string header = "SRF1 f32 2 1 1\n";
        REQUIRE(bytes.size() == header.size() + 4);
        CHECK(bytes.substr(0, header.size()) == header);
        for (size_t i = header.size(); i < bytes.size(); ++i) CHECK(bytes[i] == 0);
    }

    SUBCASE("2x3 grid payload size") {
        Grid2D g(2, 3, 1.5);
        write_raster(g, tmp.path("b.srf"));
        const std::string bytes = testutil::slurp(tmp.path("b.srf"));
        const std::string header = "SRF1 f32 2 2 3\n";
        CHECK(bytes.substr(0, header.size()) == header);
        CHECK(bytes.size() - header.size() == 24);
    }
}

TEST_CASE("raster round-trip is exact for f32-representable values") {
    TempDir tmp("roundtrip");
    SeededRng rng(42, 7);
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = 1 + static_cast<int>(rng.bounded(6));
        const int cols = 1 + static_cast<int>(rng.bounded(6));
        Grid2D g(rows, cols);
        // draw values already representable in f32 so write->read is identity
        for (double& v : g.values())
            v = static_cast<double>(static_cast<float>(rng.uniform(-1e3, 1e3)));
        write_raster(g, tmp.path("t.srf"));
        Grid2D back = read_raster(tmp.path("t.srf"));
        REQUIRE(back.rows() == rows);
        REQUIRE(back.cols() == cols);
        for (size_t i = 0; i < g.size(); ++i) REQUIRE(back.data()[i] == g.data()[i]);
    }
}

TEST_CASE("read_raster rejects malformed files") {
    TempDir tmp("bad");

    SUBCASE("truncated payload") {
        std::ofstream f(tmp.path("t.srf"), std::ios::binary);
        f << "SRF1 f32 2 2 2\n";
        f << "\x00\x00\x00";  // 3 bytes instead of 16
        f.close();
        CHECK_THROWS_WITH_AS(read_raster(tmp.path("t.srf")),
                             doctest::Contains("payload shorter than header dims"), Error);
    }

    SUBCASE("zero dimension") {
        std::ofstream f(tmp.path("z.srf"), std::ios::binary);
        f << "SRF1 f32 2 0 5\n";
        f.close();
        CHECK_THROWS_WITH_AS(read_raster(tmp.path("z.srf")), doctest::Contains("bad dims"),
                             Error);
    }

    SUBCASE("bad magic") {
        std::ofstream f(tmp.path("m.srf"), std::ios::binary);
        f << "SRF2 f32 2 1 1\nxxxx";
        f.close();
        CHECK_THROWS_WITH_AS(read_raster(tmp.path("m.srf")), doctest::Contains("bad magic"),
                             Error);
    }

    SUBCASE("trailing bytes") {
        Grid2D g(1, 1, 2.0);
        write_raster(g, tmp.path("x.srf"));
        std::ofstream f(tmp.path("x.srf"), std::ios::binary | std::ios::app);
        f << "junk";
        f.close();
        CHECK_THROWS_WITH_AS(read_raster(tmp.path("x.srf")), doctest::Contains("trailing"),
                             Error);
    }
}

TEST_CASE("read_pgm scales by maxval") {
    TempDir tmp("pgm");

    SUBCASE("all pixels at maxval give an all-ones grid") {
        std::ofstream f(tmp.path("ones.pgm"), std::ios::binary);
        f << "P5\n3 2\n255\n";
        for (int i = 0; i < 6; ++i) f.put(static_cast<char>(255));
        f.close();
        Grid2D g = read_pgm(tmp.path("ones.pgm"));
        REQUIRE(g.rows() == 2);
        REQUIRE(g.cols() == 3);
        for (double v : g.values()) CHECK(v == 1.0);
    }

    SUBCASE("pixel 128 of maxval 255") {
        std::ofstream f(tmp.path("mid.pgm"), std::ios::binary);
        f << "P5\n1 1\n255\n";
        f.put(static_cast<char>(128));
        f.close();
        Grid2D g = read_pgm(tmp.path("mid.pgm"));
        CHECK(g(0, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
    }

    SUBCASE("hand-written 4x4 gradient fixture") {
        // values 0,17,34,...,255 row-major; maxval 255, with a comment line
        std::ofstream f(tmp.path("grad.pgm"), std::ios::binary);
        f << "P5\n# gradient fixture\n4 4\n255\n";
        for (int i = 0; i < 16; ++i) f.put(static_cast<char>(i * 17));
        f.close();
        Grid2D g = read_pgm(tmp.path("grad.pgm"));
        for (int i = 0; i < 16; ++i)
            CHECK(g.data()[i] == doctest::Approx(i * 17 / 255.0).epsilon(1e-12));
    }

    SUBCASE("16-bit samples are big-endian") {
        std::ofstream f(tmp.path("wide.pgm"), std::ios::binary);
        f << "P5\n1 1\n65535\n";
        f.put(static_cast<char>(0x12));
        f.put(static_cast<char>(0x34));
        f.close();
        Grid2D g = read_pgm(tmp.path("wide.pgm"));
        CHECK(g(0, 0) == doctest::Approx(0x1234 / 65535.0).epsilon(1e-12));
    }

    SUBCASE("rejects non-P5 and zero maxval") {
        std::ofstream f(tmp.path("p2.pgm"), std::ios::binary);
        f << "P2\n1 1\n255\n0";
        f.close();
        CHECK_THROWS_AS(read_pgm(tmp.path("p2.pgm")), Error);
        std::ofstream f2(tmp.path("mv.pgm"), std::ios::binary);
        f2 << "P5\n1 1\n0\n";
        f2.put('\0');
        f2.close();
        CHECK_THROWS_AS(read_pgm(tmp.path("mv.pgm")), Error);
    }
}

TEST_CASE("SeededRng reproduces and separates streams") {
    SUBCASE("equal (seed, stream) pairs agree for 10^4 draws") {
        SeededRng a(123, 9), b(123, 9);
        for (int i = 0; i < 10000; ++i) REQUIRE(a.next_u32() == b.next_u32());
    }

    SUBCASE("different streams diverge within 16 draws") {
        SeededRng a(123, 9), b(123, 10);
        bool differ = false;
        for (int i = 0; i < 16 && !differ; ++i) differ = a.next_u32() != b.next_u32();
        CHECK(differ);
    }

    SUBCASE("different seeds diverge within 16 draws") {
        SeededRng a(123, 9), b(124, 9);
        bool differ = false;
        for (int i = 0; i < 16 && !differ; ++i) differ = a.next_u32() != b.next_u32();
        CHECK(differ);
    }

    SUBCASE("split streams are reproducible and distinct") {
        SeededRng parent(5, 1);
        SeededRng c1 = parent.split(0);
        SeededRng c2 = parent.split(1);
        SeededRng c1b = SeededRng(5, 1).split(0);
        CHECK(c1.next_u64() == c1b.next_u64());
        SeededRng c1c = SeededRng(5, 1).split(0);
        c1c.next_u64();
        CHECK(c1c.next_u64() != c2.next_u64());
    }

    SUBCASE("uniform01 stays in [0,1)") {
        SeededRng a(77, 3);
        for (int i = 0; i < 1000; ++i) {
            const double u = a.uniform01();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
        }
    }
}

TEST_CASE("manifest JSON round-trip and unknown-field tolerance") {
    TempDir tmp("manifest");
    DatasetManifest m;
    m.geometry_id = "desk";
    m.base_seed = 7;
    m.ir_fraction = 0.75;
    m.im_fraction = 0.02;
    m.augment = 10;
    m.samples.push_back({"phantom:0", 1, "s0_x.srf", "s0_y.srf", "s0_ir.srf", "s0_im.srf"});
    m.samples.push_back({"phantom:1", 2, "s1_x.srf", "s1_y.srf", "s1_ir.srf", "s1_im.srf"});
    m.save(tmp.path("m.json"));

    DatasetManifest back = DatasetManifest::load(tmp.path("m.json"));
    CHECK(back.geometry_id == "desk");
    CHECK(back.base_seed == 7);
    REQUIRE(back.samples.size() == 2);
    CHECK(back.samples[1].seed == 2);
    CHECK(back.samples[1].y_path == "s1_y.srf");

    SUBCASE("unknown fields are ignored") {
        std::ofstream f(tmp.path("extra.json"));
        f << R"({"geometry_id":"desk","future_field":42,"samples":[]})";
        f.close();
        DatasetManifest e = DatasetManifest::load(tmp.path("extra.json"));
        CHECK(e.geometry_id == "desk");
        CHECK(e.samples.empty());
    }

    SUBCASE("missing required field is an error") {
        std::ofstream f(tmp.path("bad.json"));
        f << R"({"samples":[]})";
        f.close();
        CHECK_THROWS_AS(DatasetManifest::load(tmp.path("bad.json")), Error);
    }
}
