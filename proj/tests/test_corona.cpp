#include <catch_amalgamated.hpp>

#include <cmath>

#include <json.hpp>

#include "heislab/corona.hpp"
#include "heislab/errors.hpp"
#include "heislab/ilg.hpp"

using namespace heislab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("dyadic intervals", "[corona]") {
    const DyadicInterval a{1, 1}, b{3, 5}, c{3, 2};
    CHECK(a.length() == 0.5);
    CHECK(a.contains(b));
    CHECK_FALSE(a.contains(c));
    CHECK(a.contains(a));
    CHECK(b.parent() == DyadicInterval{2, 2});
}

TEST_CASE("Carleson sums on a hand-built family", "[corona]") {
    const std::vector<DyadicInterval> fam{{1, 0}, {2, 0}, {2, 1}, {2, 3}};
    CHECK(carleson_sum(fam, {0, 0}) == 1.25);
    CHECK(carleson_sum(fam, {1, 0}) == 2.0);
    CHECK(carleson_sum(fam, {1, 1}) == 0.5);
    CHECK(max_carleson(fam, 2) == 2.0);
}

TEST_CASE("tree axioms", "[corona]") {
    DyadicTree t;
    t.top = {1, 0};
    t.members = {{1, 0}, {2, 0}, {2, 1}};
    CHECK(t.check_axioms().empty());
    t.members = {{1, 0}, {2, 0}};
    CHECK_FALSE(t.check_axioms().empty());
    t.members = {{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}};
    CHECK(t.check_axioms().empty());
    CHECK(t.minimal().size() == 3);
    t.members.push_back({3, 6});
    CHECK_FALSE(t.check_axioms().empty());
}

TEST_CASE("mollified slope is exact on affine data", "[corona]") {
    const auto g = UniformGrid::over(0.0, 1.0, 257);
    const auto phi = SampledFn::from(g, [](double x) { return 0.7 * x - 0.1; });
    CHECK_THAT(mollified_slope(phi, 128, 16), WithinRel(0.7, 1e-12));
    CHECK_THROWS_AS(mollified_slope(phi, 128, 0), DomainError);
}

TEST_CASE("beta of |x| over a symmetric window", "[corona]") {
    const auto g = UniformGrid::over(-1.0, 1.0, 201);
    const auto phi = SampledFn::from(g, [](double x) { return std::abs(x); });
    // Best line is the constant 1/2 with error 1/2.
    CHECK_THAT(beta_nodes(phi, 0, 200, 1.0), WithinAbs(0.5, 1e-12));
    CHECK_THAT(beta_nodes(phi, 100, 200, 1.0), WithinAbs(0.0, 1e-12));
}

TEST_CASE("affine graphs form a single tree", "[corona]") {
    const auto f = ilg_fixture("slope", 1.0, 0.0, 1.0, 257);
    const auto dec = lipschitz_corona(f.phi1, 0.5, 6);
    CHECK(dec.bad.empty());
    REQUIRE(dec.trees.size() == 1);
    CHECK(dec.trees[0].tree.top == DyadicInterval{0, 0});
    const auto au = audit_corona(dec, f.phi1);
    CHECK(au.ok());
    CHECK(au.bad_carleson == 0.0);
}

TEST_CASE("corona audits pass on the fixtures", "[corona]") {
    for (const char* name : {"zigzag", "wave"})
        for (double eta : {0.5, 0.25}) {
            const auto f = ilg_fixture(name, 1.0, 0.0, 1.0, 257);
            const auto dec = lipschitz_corona(f.phi1, eta, 6);
            const auto au = audit_corona(dec, f.phi1);
            INFO(name << " eta " << eta << ": " << au.failure);
            CHECK(au.ok());
            CHECK(std::isfinite(au.bad_carleson));
            CHECK(au.max_approx_ratio <= 1.0);
            for (int j = 0; j <= dec.depth; ++j)
                for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) CHECK(dec.owner({j, k}) != -2);

            const auto B = TameMapSampled::from_b1(f.phi1.grid, f.phi1.v, 0.0, 1.0);
            const auto tdec = tame_corona(B, eta, 6);
            const auto tau = audit_corona(tdec, B);
            INFO("tame: " << tau.failure);
            CHECK(tau.ok());
            CHECK(tau.max_exactness_error <= 1e-12);
        }
}

TEST_CASE("decomposition serializes to JSON", "[corona]") {
    const auto f = ilg_fixture("wave", 1.0, 0.0, 1.0, 257);
    const auto dec = lipschitz_corona(f.phi1, 0.5, 6);
    const auto j = nlohmann::json::parse(corona_to_json(dec));
    CHECK(j.is_object());
    CHECK(j.contains("bad"));
    CHECK(j.contains("trees"));
    CHECK(j["bad"].size() == dec.bad.size());
}
