#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace yconv;
using testutil::TestRng;

TEST_CASE("sparse storage never keeps zeros") {
    RealFn f(GroupDescriptor::lattice(1));
    f.set({0}, 2.0);
    f.set({1}, 3.0);
    CHECK(f.support_size() == 2);

    f.set({0}, 0.0); // storing zero erases
    CHECK(f.support_size() == 1);
    CHECK(f.at({0}) == 0.0);

    f.add_at({1}, -3.0); // cancellation erases too
    CHECK(f.empty());

    CHECK_THROWS_AS(f.set({0, 0}, 1.0), invalid_input); // wrong dimension
}

TEST_CASE("indicator, delta and support") {
    const FiniteSubset seg = lattice_box(1, 1);
    const RealFn f = indicator(seg);
    CHECK(f.support_size() == 3);
    CHECK(f.at({-1}) == 1.0);
    CHECK(f.support().elements == seg.elements);

    const RealFn d = delta(GroupDescriptor::cyclic(4), {2}, 5.0);
    CHECK(d.at({2}) == 5.0);
    CHECK(d.support_size() == 1);
}

TEST_CASE("lp norms") {
    const auto z = GroupDescriptor::lattice(1);
    CHECK(lp_norm(delta(z, {3}), 1.7) == 1.0);
    CHECK(testutil::close_rel(lp_norm(indicator(lattice_box(1, 1)), 2.0), std::sqrt(3.0), 1e-15));

    RealFn f(z);
    f.set({0}, 3.0);
    f.set({1}, 4.0);
    CHECK(lp_norm(f, kInfExponent) == 4.0);
    CHECK(lp_norm(f, 1.0) == 7.0);

    CHECK(lp_norm(RealFn(z), 2.0) == 0.0);
    CHECK_THROWS_AS(lp_norm(f, 0.9), invalid_input);
}

TEST_CASE("translation moves support and preserves norms") {
    const auto z = GroupDescriptor::lattice(1);
    const RealFn d = delta(z, {0});
    CHECK(translate(d, {3}).at({3}) == 1.0);

    const auto f2 = GroupDescriptor::free_group(2);
    const RealFn w = delta(f2, {2});
    const RealFn moved = translate(w, {1});
    CHECK(moved.at({2, 1}) == 1.0);
    CHECK(moved.support_size() == 1);

    TestRng rng(0x1234);
    for (const auto& g : {GroupDescriptor::lattice(2), GroupDescriptor::free_group(2),
                          GroupDescriptor::cyclic(9)}) {
        for (int i = 0; i < 60; ++i) {
            const RealFn f = testutil::random_real_fn(g, rng, 3, 8, testutil::ValueKind::dyadic_spread);
            const GroupElement u = testutil::random_element(g, rng, 3);
            CHECK(translate(f, identity(g)) == f);
            const RealFn t = translate(f, u);
            for (double p : {1.0, 1.5, 2.0}) CHECK(testutil::close_rel(lp_norm(t, p), lp_norm(f, p), 1e-12));
            CHECK(testutil::close_rel(lp_norm(t, kInfExponent), lp_norm(f, kInfExponent), 1e-12));
        }
    }
}

TEST_CASE("pointwise arithmetic") {
    const auto z = GroupDescriptor::lattice(1);
    RealFn f(z), g(z);
    f.set({0}, 1.0);
    f.set({1}, 2.0);
    g.set({1}, 3.0);
    g.set({2}, -1.0);

    const RealFn s = add(f, g);
    CHECK(s.at({0}) == 1.0);
    CHECK(s.at({1}) == 5.0);
    CHECK(s.at({2}) == -1.0);

    const RealFn d = sub(f, g);
    CHECK(d.at({1}) == -1.0);
    CHECK(d.at({2}) == 1.0);

    CHECK(scaled(f, 2.0).at({1}) == 4.0);
    CHECK_THROWS_AS(add(f, RealFn(GroupDescriptor::lattice(2))), invalid_input);
}

TEST_CASE("pointwise powers") {
    const auto z = GroupDescriptor::lattice(1);
    RealFn f(z);
    f.set({0}, 4.0);
    CHECK(pointwise_power(f, 1.0) == f);
    CHECK(pointwise_power(f, 0.5).at({0}) == 2.0);

    RealFn neg(z);
    neg.set({0}, -1.0);
    CHECK_THROWS_AS(pointwise_power(neg, 0.5), invalid_input);
    CHECK_THROWS_AS(pointwise_power(f, 0.0), invalid_input);

    // || f^a ||_{p/a} = || f ||_p^a
    TestRng rng(0xa5a5);
    for (int i = 0; i < 100; ++i) {
        const RealFn h = testutil::random_real_fn(z, rng, 10, 12, testutil::ValueKind::dyadic_spread);
        const double p = 1.2 + 2.0 * rng.uniform();
        const double a = p * (0.2 + 0.7 * rng.uniform());
        CHECK(testutil::close_rel(lp_norm(pointwise_power(h, a), p / a), std::pow(lp_norm(h, p), a),
                                  1e-11));
    }
}

TEST_CASE("window restriction") {
    const auto z = GroupDescriptor::lattice(1);
    const RealFn f = indicator(lattice_box(1, 5));
    const RealFn r = restrict_to(f, lattice_box(1, 2));
    CHECK(r.support_size() == 5);
    CHECK(r.at({3}) == 0.0);
}

TEST_CASE("exponent triples enforce the conjugacy constraint") {
    const ExponentTriple a(1.5, 1.5, 1.5);
    CHECK(a.p3 == 1.5);
    CHECK_NOTHROW(ExponentTriple(4.0 / 3.0, 4.0 / 3.0, 2.0));
    CHECK_THROWS_AS(ExponentTriple(2.0, 2.0, 2.0), invalid_input);
    CHECK_THROWS_AS(ExponentTriple(1.0, 2.0, 2.0), invalid_input);

    CHECK(testutil::close_rel(conjugate_exponent(1.5), 3.0, 1e-15));
    CHECK(conjugate_exponent(2.0) == 2.0);
    CHECK_THROWS_AS(conjugate_exponent(1.0), invalid_input);

    CHECK(testutil::close_rel(third_exponent(1.5, 1.5), 1.5, 1e-12));
    CHECK(testutil::close_rel(third_exponent(4.0 / 3.0, 4.0 / 3.0), 2.0, 1e-12));
    CHECK_THROWS_AS(third_exponent(4.0, 4.0), invalid_input); // would need p3 < 1
    // near-1 inputs push p3 far out but stay legal
    const double p3_big = third_exponent(1.01, 1.01);
    CHECK(testutil::close_rel(p3_big, 1.0 / (2.0 - 2.0 / 1.01), 1e-12));
    CHECK_NOTHROW(ExponentTriple(1.01, 1.01, p3_big));

    // 1/p1 + 1/p2 in (1, 2) always completes to a valid triple
    TestRng rng(0xbeef);
    for (int i = 0; i < 200; ++i) {
        const double inv1 = 0.55 + 0.44 * rng.uniform();
        const double inv2_lo = std::max(0.011, 1.0 - inv1 + 0.01);
        const double inv2 = inv2_lo + (0.99 - inv2_lo) * rng.uniform();
        const double p1 = 1.0 / inv1, p2 = 1.0 / inv2;
        const double p3 = third_exponent(p1, p2);
        CHECK_NOTHROW(ExponentTriple(p1, p2, p3));
    }
}
