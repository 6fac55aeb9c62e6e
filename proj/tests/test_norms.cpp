#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "minper/norms.hpp"

using namespace minper;

TEST_CASE("norm_eval closed-form values") {
    CHECK(norm_eval(VectorNorm::l2(), rv({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(norm_eval(VectorNorm::linf(), rv({1, -2, 0})) == 2.0);
    CHECK(norm_eval(VectorNorm::lp(1), rv({1, 1, 1, 1})) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(norm_eval(VectorNorm::lp(3), rv({1, 1})) ==
          doctest::Approx(std::cbrt(2.0)).epsilon(1e-15));
    // complex entries enter through their modulus
    CHECK(norm_eval(VectorNorm::l2(), cv({{3, 4}})) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(norm_eval(VectorNorm::linf(), cv({{0, -2}, {1, 0}})) ==
          doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("weighted norm is a weighted euclidean combination of moduli") {
    VectorNorm w = VectorNorm::weighted({1, 2});
    CHECK(norm_eval(w, rv({1, 0})) == doctest::Approx(1.0));
    CHECK(norm_eval(w, rv({0, 1})) == doctest::Approx(2.0));
    CHECK(norm_eval(w, rv({3, 4})) == doctest::Approx(std::sqrt(9.0 + 64.0)));
    CHECK(norm_eval(w, cv({{3, 4}, {0, 0}})) == doctest::Approx(5.0));
}

TEST_CASE("norm axioms survive extreme scales") {
    // scaled evaluation must not overflow or underflow
    CHECK(norm_eval(VectorNorm::l2(), rv({1e300, 1e300})) ==
          doctest::Approx(std::sqrt(2.0) * 1e300).epsilon(1e-14));
    CHECK(norm_eval(VectorNorm::l2(), rv({1e-300, 1e-300})) ==
          doctest::Approx(std::sqrt(2.0) * 1e-300).epsilon(1e-14));
    CHECK(norm_eval(VectorNorm::lp(64), rv({1e200, 1e200})) > 1e200);
    // absolute homogeneity
    double n1 = norm_eval(VectorNorm::lp(3), rv({1, -2, 0.5}));
    double n2 = norm_eval(VectorNorm::lp(3), rv({7e5, -14e5, 3.5e5}));
    CHECK(n2 == doctest::Approx(7e5 * n1).epsilon(1e-13));
}

TEST_CASE("large p routes to the max-magnitude formula") {
    // p > 64 would overflow pow even after scaling; the documented threshold
    // falls back to the sup norm, which those p are within 1e-9 of anyway.
    CHECK(norm_eval(VectorNorm::lp(65), rv({3, 4})) == 4.0);
    CHECK(norm_eval(VectorNorm::lp(1e6), rv({1e300, -2e300})) == 2e300);
    VectorNorm pinf = VectorNorm::lp(std::numeric_limits<double>::infinity());
    CHECK(pinf.kind == VectorNorm::Kind::LInf);
    CHECK(pinf.name == "linf");
}

TEST_CASE("norm factory names") {
    CHECK(VectorNorm::l2().name == "l2");
    CHECK(VectorNorm::lp(1.5).name == "l1.5");
    CHECK(VectorNorm::linf().name == "linf");
    CHECK(VectorNorm::weighted({1, 2}).name == "weighted");
}

TEST_CASE("malformed norms are rejected") {
    CHECK_THROWS_AS(VectorNorm::lp(0.5), MalformedNorm);
    CHECK_THROWS_AS(VectorNorm::lp(0.0), MalformedNorm);
    CHECK_THROWS_AS(VectorNorm::weighted({1, -2}), MalformedNorm);
    CHECK_THROWS_AS(VectorNorm::weighted({0}), MalformedNorm);
    CHECK_THROWS_AS(norm_eval(VectorNorm::weighted({1, 2}), rv({1, 2, 3})),
                    DimensionMismatch);
}

TEST_CASE("custom norms evaluate through the callback") {
    VectorNorm n = VectorNorm::custom_norm(
        [](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t j = 0; j * 2 < x.size(); ++j)
                s += std::hypot(x[2 * j], x[2 * j + 1]);
            return s;
        },
        "abs-sum");
    CHECK(norm_eval(n, rv({1, -2, 3})) == doctest::Approx(6.0));
    CHECK(n.name == "abs-sum");
}

TEST_CASE("induced norm exact routes") {
    Matrix a = rmat(2, {1, -2, 3, 4});
    auto l1 = induced_norm(a, VectorNorm::lp(1));
    CHECK(l1.exact);
    CHECK(l1.value == doctest::Approx(6.0).epsilon(1e-15)); // worst column
    auto li = induced_norm(a, VectorNorm::linf());
    CHECK(li.exact);
    CHECK(li.value == doctest::Approx(7.0).epsilon(1e-15)); // worst row

    auto l2 = induced_norm(rmat(2, {0, 1, -4, 0}), VectorNorm::l2());
    CHECK(l2.exact);
    CHECK(l2.value == doctest::Approx(4.0).epsilon(1e-12));

    auto rot = induced_norm(rmat(2, {0, 2, -2, 0}), VectorNorm::l2());
    CHECK(rot.exact);
    CHECK(rot.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("induced norm witnesses achieve the reported value") {
    Matrix a = rmat(3, {2, -1, 0, 0.5, 3, 1, -2, 0, 1});
    for (VectorNorm norm :
         {VectorNorm::lp(1), VectorNorm::l2(), VectorNorm::linf(), VectorNorm::lp(1.7)}) {
        norm.scalar_field = Scalar::Real;
        auto r = induced_norm(a, norm);
        REQUIRE(dim_of(r.witness) == 3);
        CHECK(norm_eval(norm, r.witness) == doctest::Approx(1.0).epsilon(1e-9));
        Storage out(6, 0.0);
        a.apply(r.witness, out);
        CHECK(norm_eval(norm, out) == doctest::Approx(r.value).epsilon(1e-9));
    }
}

TEST_CASE("multistart agrees with exact routes and reports inexactness") {
    Matrix id = Matrix::identity(3, Scalar::Real);
    VectorNorm n17 = VectorNorm::lp(1.7);
    n17.scalar_field = Scalar::Real;
    auto r = induced_norm(id, n17);
    CHECK_FALSE(r.exact);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));

    Matrix a = rmat(2, {0, 1, -4, 0});
    OptimizerConfig force;
    force.force_multistart = true;
    VectorNorm l2r = VectorNorm::l2();
    l2r.scalar_field = Scalar::Real;
    auto ms = induced_norm(a, l2r, force);
    CHECK_FALSE(ms.exact);
    CHECK(ms.value == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(ms.value <= 4.0 + 1e-9); // certified lower bound
}

TEST_CASE("zero matrix stalls every restart") {
    Matrix z = rmat(2, {0, 0, 0, 0});
    OptimizerConfig force;
    force.force_multistart = true;
    VectorNorm l2r = VectorNorm::l2();
    l2r.scalar_field = Scalar::Real;
    auto r = induced_norm(z, l2r, force);
    CHECK(r.value == 0.0);
    CHECK(r.stalled);
    auto exact = induced_norm(z, VectorNorm::l2());
    CHECK(exact.value == 0.0);
}

TEST_CASE("field mismatch: complex matrix under a real-only norm") {
    Matrix a = cmat(2, {{0, 1}, {0, 0}, {0, 0}, {0, 1}});
    VectorNorm real_only = VectorNorm::l2();
    real_only.scalar_field = Scalar::Real;
    CHECK_THROWS_AS(induced_norm(a, real_only), ScalarFieldMismatch);
}

TEST_CASE("multistart is deterministic for a fixed seed") {
    Matrix a = rmat(3, {1, 2, 0, -1, 0.5, 3, 2, 2, -2});
    VectorNorm n = VectorNorm::lp(3);
    n.scalar_field = Scalar::Real;
    OptimizerConfig cfg;
    cfg.seed = 77;
    auto r1 = induced_norm(a, n, cfg);
    auto r2 = induced_norm(a, n, cfg);
    CHECK(r1.value == r2.value); // bitwise
    CHECK(r1.witness == r2.witness);
    cfg.seed = 78;
    auto r3 = induced_norm(a, n, cfg);
    CHECK(r3.value == doctest::Approx(r1.value).epsilon(1e-6)); // same optimum either way
}

TEST_CASE("planar rotation invariance distinguishes lp from weighted norms") {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        auto r = check_rotation_invariance(VectorNorm::lp(p), 4);
        CHECK(r.invariant);
        CHECK(r.max_deviation <= 1e-9);
    }
    CHECK(check_rotation_invariance(VectorNorm::linf(), 4).invariant);
    auto w = check_rotation_invariance(VectorNorm::weighted({1, 2}), 2);
    CHECK_FALSE(w.invariant);
    CHECK(w.max_deviation > 0.1);
    CHECK_THROWS_AS(check_rotation_invariance(VectorNorm::l2(), 1), DimensionTooSmall);
}
