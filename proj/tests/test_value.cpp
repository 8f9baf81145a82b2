#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "ringspice/value.hpp"

using namespace ringspice;

TEST_CASE("parse_value handles SI suffixes") {
    CHECK(parse_value("1.5k") == 1500.0);
    CHECK(parse_value("100n") == 1.0e-7);
    CHECK(parse_value("2meg") == 2.0e6);
    CHECK(parse_value("2m") == 2.0e-3);
    CHECK(parse_value("2MEG") == 2.0e6);
    CHECK(parse_value("2M") == 2.0e-3);
    CHECK(parse_value("0.35u") == 0.35e-6);
    CHECK(parse_value("1e3k") == 1.0e6);
    CHECK(parse_value("3.3") == 3.3);
    CHECK(parse_value("-4.7p") == -4.7e-12);
    CHECK(parse_value("1f") == 1e-15);
    CHECK(parse_value("5g") == 5e9);
}

TEST_CASE("parse_value tolerates unit letters") {
    CHECK(parse_value("1kohm") == 1000.0);
    CHECK(parse_value("100nf") == 1.0e-7);
    CHECK(parse_value("2mega") == 2.0e6);
    CHECK(parse_value("5v") == 5.0);
}

TEST_CASE("parse_value rejects malformed tokens") {
    CHECK_THROWS_AS(parse_value(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_value("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_value("1.5x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_value("1..5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_value("--3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_value("inf"), std::invalid_argument);
    CHECK_THROWS_AS(parse_value("nan"), std::invalid_argument);
    CHECK_THROWS_AS(parse_value("0x10"), std::invalid_argument);
}

TEST_CASE("format_value picks engineering suffixes") {
    CHECK(format_value(0.0) == "0");
    CHECK(format_value(1500.0) == "1.5k");
    CHECK(format_value(1e-7) == "100n");
    CHECK(format_value(2e6) == "2meg");
    CHECK(format_value(2.5e-6) == "2.5u");
    CHECK(format_value(-0.45) == "-450m");
    CHECK(format_value(3.0) == "3");
}

TEST_CASE("parse_value after format_value is the identity") {
    std::vector<double> values = {
        0.0,     1.0,         -1.0,      1500.0,   1e-7,     2e6,
        2e-3,    0.35e-6,     2.5e-6,    1.0 / 3.0, 547e6,   1e12,
        1e-20,   123456.789,  9.99e15,   -3.3,     0.4,      -0.45,
        1.0353581667059927, 6.283185307179586e-9,  2.16e-4,  1e30,
    };
    for (double v : values) {
        CAPTURE(v);
        CHECK(parse_value(format_value(v)) == v);
        CHECK(parse_value(format_double(v)) == v);
    }
}
