// Copyright 2026 qdyne authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qdyne/compat.hpp"

using namespace qdyne;

namespace {

const Eigen::Vector3d kX(1, 0, 0);
const Eigen::Vector3d kY(0, 1, 0);
const Eigen::Vector3d kZ(0, 0, 1);

// Uniformly random effect inside the positivity window.
QubitFourVector random_effect(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal;
    QubitFourVector v;
    v.mu = 2.0 * uni(rng);
    Eigen::Vector3d dir(normal(rng), normal(rng), normal(rng));
    dir.normalize();
    v.bloch = dir * std::min(v.mu, 2.0 - v.mu) * uni(rng);
    return v;
}

}  // namespace

TEST_CASE("minkowski product unit values") {
    CHECK(minkowski(QubitFourVector{}, QubitFourVector{}) == 1.0);
    CHECK(minkowski({1.0, kZ}, {1.0, kZ}) == 0.0);
    CHECK(minkowski({1.0, kX}, {1.0, kZ}) == 1.0);
}

TEST_CASE("sharpness unit values") {
    CHECK(sharpness(QubitFourVector{}) == 0.0);
    CHECK(sharpness({1.0, kZ}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sharpness({1.0, 0.5 * kZ}) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("unbiased sharpness equals |a|^2") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::Vector3d dir(normal(rng), normal(rng), normal(rng));
        dir.normalize();
        const double a = uni(rng);
        CHECK(sharpness({1.0, a * dir}) == doctest::Approx(a * a).epsilon(1e-12));
    }
}

TEST_CASE("compatibility unit values") {
    SUBCASE("orthogonal projectors") {
        CHECK(compatibility({1.0, kX}, {1.0, kZ}) == doctest::Approx(-2.0).epsilon(1e-14));
    }
    SUBCASE("unbiased pair crosses zero at 1/sqrt(2)") {
        for (double lambda : {0.1, 0.3, 0.5, 1.0 / std::sqrt(2.0), 0.8, 0.95}) {
            const double c = compatibility({1.0, lambda * kX}, {1.0, lambda * kZ});
            CHECK(c == doctest::Approx(2.0 - 4.0 * lambda * lambda).epsilon(1e-12));
        }
    }
    SUBCASE("trivial coin is compatible with everything") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 100; ++rep) {
            const QubitFourVector v = random_effect(rng);
            CHECK(compatibility(v, QubitFourVector{}) >= -1e-12);
        }
    }
}

TEST_CASE("compatibility symmetries") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const QubitFourVector v = random_effect(rng);
        const QubitFourVector w = random_effect(rng);
        const double c = compatibility(v, w);
        CHECK(c == doctest::Approx(compatibility(w, v)).epsilon(1e-12));
        CHECK(c == doctest::Approx(compatibility(v.perp(), w.perp())).epsilon(1e-12));
    }
}

TEST_CASE("lower-boundary pairs reduce to the rank-one closed form") {
    // For null effects (mu = |a|) the quantifier collapses to
    // 2 d (2 - 2 mu - 2 mu' + d) with d = mu mu' (1 - cos theta): it vanishes
    // when the Bloch directions align and for the bias combinations with
    // 2 - 2 mu - 2 mu' + d = 0.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 200; ++rep) {
        const double m1 = uni(rng), m2 = uni(rng);
        Eigen::Vector3d d1(normal(rng), normal(rng), normal(rng));
        Eigen::Vector3d d2(normal(rng), normal(rng), normal(rng));
        d1.normalize();
        d2.normalize();
        const QubitFourVector v{m1, m1 * d1};
        const QubitFourVector w{m2, m2 * d2};
        const double d = m1 * m2 * (1.0 - d1.dot(d2));
        const double expected = 2.0 * d * (2.0 - 2.0 * m1 - 2.0 * m2 + d);
        CHECK(compatibility(v, w) == doctest::Approx(expected).epsilon(1e-10));
        // aligned saturating pairs are exactly at the boundary
        const QubitFourVector aligned{m2, m2 * d1};
        CHECK(std::abs(compatibility(v, aligned)) < 1e-12);
    }
}

TEST_CASE("compatibility sign matches brute-force joint-effect search") {
    std::mt19937_64 rng(42);
    int checked = 0;
    for (int rep = 0; rep < 400 && checked < 200; ++rep) {
        const QubitFourVector v = random_effect(rng);
        const QubitFourVector w = random_effect(rng);
        const double c = compatibility(v, w);
        if (std::abs(c) < 1e-3) continue;  // margin cases, below oracle resolution
        ++checked;
        const double margin = oracles::joint_povm_margin(v, w);
        if (c > 0)
            CHECK(margin >= -1e-3);
        else
            CHECK(margin < 1e-3);
    }
    CHECK(checked >= 200);
}

TEST_CASE("bias bounds") {
    const auto b1 = bias_bounds(QubitFourVector{});
    CHECK(b1.lower == 0.0);
    CHECK(b1.upper == 2.0);
    CHECK(b1.in_window);

    const auto b2 = bias_bounds({0.5, 0.5 * kZ});
    CHECK(b2.lower == doctest::Approx(0.5));
    CHECK(b2.upper == doctest::Approx(1.5));
    CHECK(b2.in_window);  // boundary counts as inside (saturation)

    const auto b3 = bias_bounds({0.3, 0.5 * kZ});
    CHECK_FALSE(b3.in_window);
}

TEST_CASE("invalid effects are rejected") {
    CHECK_THROWS_AS(sharpness({0.3, kZ}), NumericError);
    CHECK_THROWS_AS(compatibility({0.3, kZ}, QubitFourVector{}), NumericError);
}

TEST_CASE("trace rescaling") {
    const QubitFourVector v{0.5, 0.25 * kX};
    const auto r = trace_rescaled(v);
    CHECK(r.mu == 1.0);
    CHECK(r.bloch.x() == doctest::Approx(0.5));
}
