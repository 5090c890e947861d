#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "wz/grid.hpp"

using namespace wz;

TEST_CASE("lattice validation") {
    Lattice lat;
    lat.d = 2;
    lat.n = 48;  // not a power of two
    CHECK_THROWS(lat.validate());
    lat.n = 64;
    CHECK_NOTHROW(lat.validate());
    CHECK(lat.ncells() == 4096);
    CHECK(lat.dx() == doctest::Approx(1.0 / 64));
}

TEST_CASE("torus coordinates and parabolic norm") {
    Lattice lat;
    lat.d = 1;
    lat.n = 8;
    CHECK(torus_coord(lat, 0) == 0.0);
    CHECK(torus_coord(lat, 1) == doctest::Approx(0.125));
    CHECK(torus_coord(lat, 7) == doctest::Approx(-0.125));
    CHECK(torus_coord(lat, 4) == doctest::Approx(-0.5));
    CHECK(parabolic_norm(lat, 0.25, 1) == doctest::Approx(0.5 + 0.125));
}

TEST_CASE("field binary round trip") {
    Lattice lat;
    lat.d = 2;
    lat.n = 16;
    lat.dt = 1.0 / 128;
    GridField f(lat, -5, 7);
    for (size_t i = 0; i < f.v.size(); ++i) f.v[i] = double(i) * 0.25 - 3;
    std::string path = "/tmp/wz_test_field.wzf";
    save_field(f, path);
    GridField g = load_field(path);
    CHECK(g.lat.d == 2);
    CHECK(g.lat.n == 16);
    CHECK(g.j0 == -5);
    CHECK(g.nt == 7);
    CHECK(g.lat.dt == f.lat.dt);
    CHECK(g.v == f.v);
    std::remove(path.c_str());
}

TEST_CASE("slice norms") {
    Lattice lat;
    lat.d = 1;
    lat.n = 4;
    GridField f(lat, 0, 1);
    f.v = {1, 1, 1, 1};
    CHECK(f.slice_l2(0) == doctest::Approx(1.0));  // sqrt(4 * 1 * 1/4)
    CHECK(f.slice_mean(0) == doctest::Approx(1.0));
    f.v = {3, -4, 0, 0};
    CHECK(f.max_abs() == 4.0);
}
