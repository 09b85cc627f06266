#include "doctest.h"
#include "taxgraph/lei.hpp"

using namespace taxgraph;

TEST_CASE("well-formed LEI with valid mod-97 checksum") {
    // Checksum verified against an independent mod-97 script before freezing.
    LeiValidity v = validate_lei("529900D6BF99LW9R2E68");
    CHECK(v.well_formed);
    REQUIRE(v.checksum_ok.has_value());
    CHECK(*v.checksum_ok);
}

TEST_CASE("wrong length is not well formed") {
    LeiValidity v = validate_lei("ABC");
    CHECK_FALSE(v.well_formed);
    CHECK_FALSE(v.checksum_ok.has_value());
}

TEST_CASE("non-digit check positions are not well formed") {
    LeiValidity v = validate_lei("AAAAAAAAAAAAAAAAAAXX");
    CHECK_FALSE(v.well_formed);
}

TEST_CASE("lowercase and punctuation rejected") {
    CHECK_FALSE(validate_lei("529900d6bf99lw9r2e68").well_formed);
    CHECK_FALSE(validate_lei("529900D6BF99LW9R2E-8").well_formed);
}

TEST_CASE("well-formed but wrong checksum is reported, not fatal") {
    // Same identifier with the check digits bumped.
    LeiValidity v = validate_lei("529900D6BF99LW9R2E69");
    CHECK(v.well_formed);
    REQUIRE(v.checksum_ok.has_value());
    CHECK_FALSE(*v.checksum_ok);
}
