#include "doctest.h"

#include <limits>

#include "uppex/extreal.hpp"

using namespace uppex;

namespace {
const ExtReal pinf = ExtReal::pos_inf();
const ExtReal ninf = ExtReal::neg_inf();
} // namespace

TEST_CASE("addition conventions: +inf dominates") {
    CHECK(ext_add(pinf, ninf) == pinf);
    CHECK(ext_add(ninf, pinf) == pinf);
    CHECK(ext_add(pinf, pinf) == pinf);
    CHECK(ext_add(ninf, ninf) == ninf);
    CHECK(ext_add(ExtReal(3.0), pinf) == pinf);
    CHECK(ext_add(pinf, ExtReal(-7.5)) == pinf);
    CHECK(ext_add(ExtReal(3.0), ninf) == ninf);
    CHECK(ext_add(ninf, ExtReal(3.0)) == ninf);
    CHECK(ext_add(ExtReal(2.0), ExtReal(0.5)) == ExtReal(2.5));
}

TEST_CASE("multiplication conventions: 0 absorbs, otherwise signs multiply") {
    CHECK(ext_mul(ExtReal(0.0), pinf) == ExtReal(0.0));
    CHECK(ext_mul(ExtReal(0.0), ninf) == ExtReal(0.0));
    CHECK(ext_mul(pinf, ExtReal(0.0)) == ExtReal(0.0));
    CHECK(ext_mul(ExtReal(2.0), pinf) == pinf);
    CHECK(ext_mul(pinf, pinf) == pinf);
    CHECK(ext_mul(ExtReal(-2.0), pinf) == ninf);
    CHECK(ext_mul(ExtReal(2.0), ninf) == ninf);
    CHECK(ext_mul(ExtReal(-2.0), ninf) == pinf);
    CHECK(ext_mul(ninf, ninf) == pinf);
    CHECK(ext_mul(ExtReal(1.5), ExtReal(-2.0)) == ExtReal(-3.0));
}

TEST_CASE("NaN is rejected at construction") {
    CHECK_THROWS_AS(ExtReal(std::numeric_limits<double>::quiet_NaN()), contract_error);
}

TEST_CASE("total order") {
    CHECK(ninf < ExtReal(-1e300));
    CHECK(ExtReal(-1e300) < ExtReal(0.0));
    CHECK(ExtReal(1e300) < pinf);
    CHECK(ninf < pinf);
    CHECK(ext_min(pinf, ExtReal(1.0)) == ExtReal(1.0));
    CHECK(ext_max(ninf, ExtReal(1.0)) == ExtReal(1.0));
}

TEST_CASE("negation flips infinities") {
    CHECK(-pinf == ninf);
    CHECK(-ninf == pinf);
    CHECK(-ExtReal(2.0) == ExtReal(-2.0));
}

TEST_CASE("text form: 12 significant digits, inf strings") {
    CHECK(to_text(pinf) == "inf");
    CHECK(to_text(ninf) == "-inf");
    CHECK(to_text(ExtReal(0.5)) == "0.5");
    CHECK(to_text(ExtReal(1.0 / 3.0)) == "0.333333333333");
}

TEST_CASE("finite() guards infinities") {
    CHECK(ExtReal(4.25).finite() == 4.25);
    CHECK_THROWS_AS(pinf.finite(), contract_error);
}
