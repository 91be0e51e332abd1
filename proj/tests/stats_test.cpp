#include <doctest.h>

#include <cmath>
#include <vector>

#include "scengen/errors.hpp"
#include "scengen/rng.hpp"
#include "scengen/stats.hpp"

using namespace scengen;

namespace {

// x values against y = {0,...,9} realizing a requested U in steps of 0.5.
// Wins come from values just below an integer, the half point from a tie.
std::vector<double> x_with_u(double u) {
    std::vector<double> x;
    while (u >= 10.0) {
        x.push_back(9.5);
        u -= 10.0;
    }
    const int whole = static_cast<int>(u);
    if (u > static_cast<double>(whole)) {
        x.push_back(whole);  // ties one y value, beats the smaller ones
    } else if (whole > 0) {
        x.push_back(whole - 0.5);
    }
    while (x.size() < 10) x.push_back(-0.5);
    return x;
}

const std::vector<double> y_ladder = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

}  // namespace

TEST_CASE("three-versus-three separation gives p = 0.1") {
    const std::vector<double> x = {1, 2, 3};
    const std::vector<double> y = {4, 5, 6};
    MannWhitneyResult r = mann_whitney_u(x, y);
    CHECK(r.u == 0.0);
    CHECK(r.method == PValueMethod::exact);
    CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("a12 counts ties as half wins") {
    const std::vector<double> x = {1, 2};
    const std::vector<double> y = {1, 3};
    A12Result r = vargha_delaney_a12(x, y);
    CHECK(r.a12 == 0.375);
}

TEST_CASE("identical samples are maximally unsurprising") {
    const std::vector<double> x = {2, 2, 5, 7};
    MannWhitneyResult r = mann_whitney_u(x, x);
    CHECK(r.p_value == 1.0);
    CHECK(r.u == 8.0);
    A12Result a = vargha_delaney_a12(x, x);
    CHECK(a.a12 == 0.5);
    CHECK(a.magnitude == EffectMagnitude::negligible);
}

TEST_CASE("hand-checked exact p-values") {
    SUBCASE("single observations") {
        const std::vector<double> x = {1};
        const std::vector<double> y = {2};
        CHECK(mann_whitney_exact_p(x, y) == 1.0);
    }
    SUBCASE("two against two, full separation") {
        const std::vector<double> x = {1, 2};
        const std::vector<double> y = {3, 4};
        CHECK(mann_whitney_exact_p(x, y) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("eight against five") {
        const std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
        const std::vector<double> y = {2.5, 4.5, 9, 10, 11};
        MannWhitneyResult r = mann_whitney_u(x, y);
        CHECK(r.u == 10.0);
        CHECK(r.p_value == doctest::Approx(0.170940170940171).epsilon(1e-12));
    }
    SUBCASE("ties in the pool") {
        const std::vector<double> x = {1, 2, 2, 3};
        const std::vector<double> y = {2, 4, 5};
        MannWhitneyResult r = mann_whitney_u(x, y);
        CHECK(r.u == 2.0);
        CHECK(r.p_value == doctest::Approx(0.228571428571429).epsilon(1e-12));
    }
}

TEST_CASE("normal approximation matches the reference value") {
    const std::vector<double> x = {3.1, 4.7, 2.2, 5.9, 6.1, 3.3, 4.4, 5.5, 2.8, 3.9, 4.1,
                                   5.2, 6.3, 2.5, 3.7, 4.9, 5.1, 2.9, 3.5, 4.6, 5.8};
    const std::vector<double> y = {4.2, 5.6, 3.8, 6.7, 7.1, 4.9, 5.3, 6.2, 3.4, 4.8, 5.0,
                                   6.1, 7.3, 3.6, 4.5, 5.7, 6.0, 3.9, 4.3, 5.4, 6.6};
    MannWhitneyResult r = mann_whitney_u(x, y);
    CHECK(r.method == PValueMethod::normal_approx);
    CHECK(r.u == 131.5);
    CHECK(r.p_value == doctest::Approx(0.025977119518249).epsilon(1e-9));
}

TEST_CASE("method switches at four hundred pairs") {
    std::vector<double> x(20), y(20);
    Rng rng(derive_seed({3, seed_tag("dispatch")}));
    for (auto& v : x) v = rng.next_unit();
    for (auto& v : y) v = rng.next_unit();
    CHECK(mann_whitney_u(x, y).method == PValueMethod::exact);

    y.push_back(rng.next_unit());
    CHECK(mann_whitney_u(x, y).method == PValueMethod::normal_approx);
}

TEST_CASE("both methods agree on moderate samples") {
    Rng rng(derive_seed({3, seed_tag("agreement")}));
    for (int round = 0; round < 20; ++round) {
        std::vector<double> x(12), y(14);
        const double shift = rng.next_in(-1, 1);
        for (auto& v : x) v = rng.next_unit();
        for (auto& v : y) v = rng.next_unit() + shift;
        const double exact = mann_whitney_exact_p(x, y);
        const double approx = mann_whitney_normal_p(x, y);
        CAPTURE(round);
        CHECK(std::fabs(exact - approx) < 0.03);
    }
}

TEST_CASE("swapping the samples mirrors every statistic") {
    Rng rng(derive_seed({3, seed_tag("symmetry")}));
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 2 + rng.next_below(10);
        const std::size_t m = 2 + rng.next_below(10);
        std::vector<double> x(n), y(m);
        // coarse grid so ties actually occur
        for (auto& v : x) v = static_cast<double>(rng.next_below(6));
        for (auto& v : y) v = static_cast<double>(rng.next_below(6));

        MannWhitneyResult xy = mann_whitney_u(x, y);
        MannWhitneyResult yx = mann_whitney_u(y, x);
        CAPTURE(round);
        CHECK(xy.u + yx.u == static_cast<double>(n * m));
        CHECK(xy.p_value == doctest::Approx(yx.p_value).epsilon(1e-12));

        A12Result a = vargha_delaney_a12(x, y);
        A12Result b = vargha_delaney_a12(y, x);
        CHECK(a.a12 + b.a12 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(a.magnitude == b.magnitude);
    }
}

TEST_CASE("magnitude bands switch at the documented thresholds") {
    auto magnitude_at = [](double u) {
        return vargha_delaney_a12(x_with_u(u), y_ladder).magnitude;
    };
    CHECK(magnitude_at(50.0) == EffectMagnitude::negligible);
    CHECK(magnitude_at(55.5) == EffectMagnitude::negligible);  // d = 0.055
    CHECK(magnitude_at(56.0) == EffectMagnitude::small);       // d = 0.06
    CHECK(magnitude_at(64.0) == EffectMagnitude::small);       // d = 0.14
    CHECK(magnitude_at(64.5) == EffectMagnitude::medium);      // d = 0.145
    CHECK(magnitude_at(71.0) == EffectMagnitude::medium);      // d = 0.21
    CHECK(magnitude_at(71.5) == EffectMagnitude::large);       // d = 0.215
    CHECK(magnitude_at(100.0) == EffectMagnitude::large);
    // mirrored below one half
    CHECK(magnitude_at(44.5) == EffectMagnitude::negligible);
    CHECK(magnitude_at(44.0) == EffectMagnitude::small);
    CHECK(magnitude_at(28.5) == EffectMagnitude::large);
}

TEST_CASE("the helper ladder hits the requested u") {
    for (double u : {0.0, 0.5, 10.0, 55.5, 64.0, 71.5, 100.0})
        CHECK(vargha_delaney_a12(x_with_u(u), y_ladder).a12 * 100.0 ==
              doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("null p-values are honest at the five percent level") {
    Rng rng(derive_seed({3, seed_tag("calibration")}));
    const int rounds = 2000;
    int rejections = 0;
    for (int round = 0; round < rounds; ++round) {
        std::vector<double> x(10), y(10);
        for (auto& v : x) v = rng.next_unit();
        for (auto& v : y) v = rng.next_unit();
        if (mann_whitney_u(x, y).p_value <= 0.05) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / rounds;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
}

TEST_CASE("compare_samples bundles the pieces unchanged") {
    const std::vector<double> x = {1, 2, 3, 9};
    const std::vector<double> y = {4, 5, 6};
    ComparisonResult c = compare_samples(x, y);
    MannWhitneyResult mw = mann_whitney_u(x, y);
    A12Result a = vargha_delaney_a12(x, y);
    CHECK(c.u_statistic == mw.u);
    CHECK(c.p_value == mw.p_value);
    CHECK(c.a12 == a.a12);
    CHECK(c.magnitude == a.magnitude);
    CHECK(c.method == mw.method);
}

TEST_CASE("empty samples are rejected") {
    const std::vector<double> x = {1.0};
    const std::vector<double> none;
    CHECK_THROWS_AS(mann_whitney_u(none, x), ValidationError);
    CHECK_THROWS_AS(mann_whitney_u(x, none), ValidationError);
    CHECK_THROWS_AS(vargha_delaney_a12(none, x), ValidationError);
    CHECK_THROWS_AS(mann_whitney_exact_p(x, none), ValidationError);
    CHECK_THROWS_AS(mann_whitney_normal_p(none, x), ValidationError);
}

TEST_CASE("labels name the bands and methods") {
    CHECK(to_string(EffectMagnitude::negligible) == "negligible");
    CHECK(to_string(EffectMagnitude::small) == "small");
    CHECK(to_string(EffectMagnitude::medium) == "medium");
    CHECK(to_string(EffectMagnitude::large) == "large");
    CHECK(to_string(PValueMethod::exact) == "exact");
    CHECK(to_string(PValueMethod::normal_approx) == "normal_approx");
}
