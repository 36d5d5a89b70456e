#include <doctest.h>

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/model.hpp"

using namespace posturebench;

TEST_CASE("built-in model anthropometry") {
    const AnthropometricModel m = default_model();
    m.validate();
    REQUIRE(m.segments.size() == 2);
    CHECK(m.total_mass() == doctest::Approx(16.5).epsilon(1e-12));
    // m1 z1 + m2 z2 = 9.075*0.44 + 7.425*(0.85+0.39) = 13.2 kg m
    CHECK(m.segment_com_height(0) == doctest::Approx(0.44).epsilon(1e-12));
    CHECK(m.segment_com_height(1) == doctest::Approx(1.24).epsilon(1e-12));
    CHECK(m.joint_height(0) == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(m.com_height() == doctest::Approx(0.80).epsilon(1e-12));
    CHECK(m.mgh() == doctest::Approx(129.492).epsilon(1e-9));
}

TEST_CASE("composition against hand-computed first principles") {
    AnthropometricModel m = default_model();
    // nominal: no load attached
    CHECK(m.combined_mass() == doctest::Approx(16.5).epsilon(1e-12));
    CHECK(m.combined_com_height() == doctest::Approx(0.80).epsilon(1e-12));
    const double j0 = 0.55 + 9.075 * 0.44 * 0.44 + 0.26 + 7.425 * 1.24 * 1.24;
    CHECK(m.combined_inertia_about_ankle() == doctest::Approx(j0).epsilon(1e-12));

    m.added.mass_kg = 2.0;
    m.added.height_m = 0.15;
    m.added.eccentricity_m = 0.05;
    CHECK(m.combined_mass() == doctest::Approx(18.5).epsilon(1e-12));
    CHECK(m.combined_first_moment() == doctest::Approx(13.2 + 2.0 * 0.15).epsilon(1e-12));
    CHECK(m.combined_com_height() == doctest::Approx(13.5 / 18.5).epsilon(1e-12));
    CHECK(m.combined_inertia_about_ankle() ==
          doctest::Approx(j0 + 2.0 * (0.15 * 0.15 + 0.05 * 0.05)).epsilon(1e-12));
    // nominal quantities ignore the load
    CHECK(m.total_mass() == doctest::Approx(16.5).epsilon(1e-12));
    CHECK(m.mgh() == doctest::Approx(129.492).epsilon(1e-9));
}

TEST_CASE("model json round trip") {
    AnthropometricModel m = default_model();
    m.added.mass_kg = 1.5;
    m.added.height_m = 0.2;
    const std::string text = model_to_json_text(m);
    const AnthropometricModel back = model_from_json_text(text, "<test>");
    CHECK(back.name == m.name);
    CHECK(back.gravity == m.gravity);
    REQUIRE(back.segments.size() == m.segments.size());
    for (std::size_t i = 0; i < m.segments.size(); ++i) {
        CHECK(back.segments[i].name == m.segments[i].name);
        CHECK(back.segments[i].mass_kg == m.segments[i].mass_kg);
        CHECK(back.segments[i].length_m == m.segments[i].length_m);
        CHECK(back.segments[i].com_offset_m == m.segments[i].com_offset_m);
        CHECK(back.segments[i].inertia_kgm2 == m.segments[i].inertia_kgm2);
    }
    CHECK(back.added.mass_kg == m.added.mass_kg);
    CHECK(back.added.height_m == m.added.height_m);
    CHECK(back.added.eccentricity_m == m.added.eccentricity_m);
    // echo is stable: emitting the parsed model reproduces the text
    CHECK(model_to_json_text(back) == text);
}

TEST_CASE("model parse failures carry the origin") {
    CHECK_THROWS_AS(model_from_json_text("{not json", "bad.json"), ParseError);
    try {
        model_from_json_text("{\"name\": \"x\"}", "bad.json");  // no segments
        FAIL("expected a parse failure");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
    }
}

TEST_CASE("model validation bounds") {
    AnthropometricModel m = default_model();
    m.segments[0].mass_kg = -1.0;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);

    m = default_model();
    m.segments[1].com_offset_m = m.segments[1].length_m + 0.2;  // CoM beyond the segment
    CHECK_THROWS_AS(m.validate(), InvalidArgument);

    m = default_model();
    m.gravity = 0.0;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);

    m = default_model();
    m.added.mass_kg = -0.5;
    CHECK_THROWS_AS(m.validate(), InvalidArgument);

    m = default_model();
    m.segments.clear();
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("bundled model file matches the built-in body") {
    const AnthropometricModel m = load_model_file(std::string(PB_CONFIG_DIR) +
                                                  "/models/lucy-default.json");
    CHECK(m.total_mass() == doctest::Approx(16.5).epsilon(1e-12));
    CHECK(m.mgh() == doctest::Approx(129.492).epsilon(1e-9));
    CHECK_THROWS_AS(load_model_file("/nonexistent/nowhere.json"), IoError);
}
