#include <doctest.h>

#include <cmath>
#include <sstream>

#include "solitons/io.hpp"
#include "solitons/singular.hpp"

using namespace solitons;

TEST_CASE("g17 formatting round-trips binary64") {
    Rng rng(kDefaultSeed);
    for (int k = 0; k < 2000; ++k) {
        const double v = (rng.next_double() - 0.5) * std::pow(10.0, rng.uniform(-12, 12));
        const std::string text = format_g17(v);
        CHECK(std::stod(text) == v);
    }
}

TEST_CASE("trajectory CSV round trip is exact") {
    const auto traj = bowl_launch(2, 0.0, 2.0);
    const std::string csv = trajectory_csv(traj);
    CHECK(csv.rfind("s,f,w\n", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos);  // LF only
    const auto back = trajectory_from_csv(csv, ProfileFamily::rotation);
    REQUIRE(back.samples.size() == traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        CHECK(back.samples[i].s == traj.samples[i].s);
        CHECK(back.samples[i].f == traj.samples[i].f);
        CHECK(back.samples[i].w == traj.samples[i].w);
    }
}

TEST_CASE("trajectory CSV rejects malformed input") {
    CHECK_THROWS_AS(trajectory_from_csv("a,b,c\n1,2,3\n", ProfileFamily::rotation),
                    ValidationError);
    CHECK_THROWS_AS(trajectory_from_csv("s,f,w\n1,2\n", ProfileFamily::rotation),
                    ValidationError);
    CHECK_THROWS_AS(trajectory_from_csv("s,f,w\n1,2,zzz\n", ProfileFamily::rotation),
                    ValidationError);
    CHECK_THROWS_AS(trajectory_from_csv("s,f,w\n1,2,3\n", ProfileFamily::rotation),
                    ValidationError);  // fewer than 2 samples
}

TEST_CASE("wing CSV tags the traversal") {
    const auto curve = wing_launch(2, 1.0, 0.0, 3.0);
    const auto glued = glue_wing(curve);
    const auto csv = wing_csv(glued);
    CHECK(csv.rfind("s,f,branch\n", 0) == 0);
    std::size_t minus = 0, vertex = 0, plus = 0, pos = 0;
    std::string line;
    std::istringstream in(csv);
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.find(",minus") != std::string::npos) ++minus;
        if (line.find(",vertex") != std::string::npos) ++vertex;
        if (line.find(",plus") != std::string::npos) ++plus;
        ++pos;
    }
    CHECK(vertex == 1);
    CHECK(minus > 10);
    CHECK(plus > 10);
    CHECK(minus + vertex + plus == glued.points.size());
}

TEST_CASE("residual report JSON carries the schema") {
    ResidualReport rep;
    rep.points = {0.5, 1.0};
    rep.steps = {4e-3, 2e-3, 1e-3};
    rep.residuals = {{1e-3, 2e-3}, {2.5e-4, 5e-4}, {6.25e-5, 1.25e-4}};
    rep.finalize(1e-3);
    CHECK(rep.order.has_value());
    CHECK(*rep.order == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(rep.max_abs == doctest::Approx(1.25e-4));
    CHECK(rep.max_abs >= rep.rms);
    const auto json = residual_report_json(rep);
    for (const char* key : {"\"points\"", "\"steps\"", "\"residuals\"", "\"max\"", "\"rms\"",
                            "\"order\"", "\"pass\""})
        CHECK(json.find(key) != std::string::npos);
    CHECK(json == residual_report_json(rep));
}

TEST_CASE("trajectory meta JSON names the termination") {
    const auto traj = bowl_launch(2, 0.0, 1.0);
    const auto meta = trajectory_meta_json(traj);
    CHECK(meta.find("\"reached_end\"") != std::string::npos);
    CHECK(meta.find("\"series\"") != std::string::npos);
    CHECK(meta.find("\"rotation\"") != std::string::npos);
}
