#include "support.hpp"

#include <doctest.h>

using namespace dmflag;
using dmflag::testing::P;

TEST_CASE("field construction") {
    CHECK_THROWS_AS(Field::prime(4), RingError);
    CHECK_THROWS_AS(Field::prime(1), RingError);
    CHECK(Field::prime(101).characteristic() == 101);
    CHECK(Field::rationals().characteristic() == 0);
    Field F = Field::prime(7);
    CHECK(F.from_rational(mpq_class(1, 2)) == 4);
    CHECK(F.mul(F.inv(F.from_int(3)), F.from_int(3)) == 1);
    CHECK_THROWS_AS(F.inv(F.from_int(0)), RingError);
    CHECK(F.to_string(F.from_int(-1)) == "-1");
}

TEST_CASE("addition cancels") {
    auto R = make_ring(Field::rationals(), 2, MonoOrder::grevlex, {"x", "y"});
    CHECK(P(R, "x + y") + P(R, "x - y") == P(R, "2*x"));
    CHECK((P(R, "x + y") - P(R, "x + y")).is_zero());
}

TEST_CASE("product of variables over F_101") {
    auto R = make_ring(Field::prime(101), 2, MonoOrder::grevlex, {"x", "y"});
    Poly xy = P(R, "x") * P(R, "y");
    REQUIRE(xy.terms().size() == 1);
    CHECK(xy.lead().m.e[0] == 1);
    CHECK(xy.lead().m.e[1] == 1);
    CHECK(xy.lead().c == 1);
}

TEST_CASE("squaring over F_2 drops the cross term") {
    auto R = make_ring(Field::prime(2), 1, MonoOrder::grevlex, {"x"});
    Poly a = P(R, "x + 1");
    // term-by-term Frobenius expansion: x -> x^2, 1 -> 1
    Poly expected = Poly::var(R, 0, 2) + Poly::constant(R, 1);
    CHECK(a * a == expected);
    CHECK(a.frobenius(1) == expected);
}

TEST_CASE("degree and homogeneity") {
    auto R = make_ring(Field::rationals(), 2, MonoOrder::grevlex, {"x", "y"});
    CHECK_FALSE(Poly(R).degree().has_value());
    CHECK(P(R, "x^2*y").degree() == 3);
    CHECK(P(R, "x^2*y").is_homogeneous());
    CHECK(P(R, "x^2 + y").degree() == 2);
    CHECK_FALSE(P(R, "x^2 + y").is_homogeneous());
}

TEST_CASE("frobenius power") {
    auto R3 = make_ring(Field::prime(3), 2, MonoOrder::grevlex, {"x", "y"});
    Poly a = P(R3, "x + y");
    // repeated multiplication, reduced mod 3
    Poly cubed = a * a * a;
    CHECK(a.frobenius(1) == cubed);
    CHECK(cubed == P(R3, "x^3 + y^3"));
    CHECK(a.frobenius(0) == a);
    Poly b = P(R3, "x*y - y^2 + 1");
    CHECK(b.frobenius(2) == b.pow(9));

    auto R5 = make_ring(Field::prime(5), 1);
    Poly c = Poly::constant(R5, 3);
    CHECK(c.frobenius(1) == c);
    CHECK(c.frobenius(1) == c.pow(5));

    auto Q = make_ring(Field::rationals(), 1);
    CHECK_THROWS_AS(Poly::var(Q, 0).frobenius(1), RingError);
}

TEST_CASE("parse and print round trip") {
    auto R = make_ring(Field::rationals(), 3);
    const std::string s = "3*x0^2*x1 - 1/2*x2";
    Poly p = Poly::parse(R, s);
    CHECK(p.to_string() == s);
    CHECK(Poly::parse(R, p.to_string()) == p);
    CHECK(Poly::parse(R, "0").is_zero());
    CHECK(Poly::parse(R, "-x0 + 1").to_string() == "-x0 + 1");
    CHECK(Poly::parse(R, "x1*x0*2").to_string() == "2*x0*x1");
    CHECK_THROWS_AS(Poly::parse(R, "x3"), RingError);
    CHECK_THROWS_AS(Poly::parse(R, "x0 x1"), RingError);
    CHECK_THROWS_AS(Poly::parse(R, ""), RingError);
    CHECK_THROWS_AS(Poly::parse(R, "1/0"), RingError);

    auto F = make_ring(Field::prime(101), 2);
    Poly q = Poly::parse(F, "x0 - 3*x1^5 + 100");
    CHECK(q.to_string() == "-3*x1^5 + x0 - 1");
    CHECK(Poly::parse(F, q.to_string()) == q);
}

TEST_CASE("exponent overflow is an error") {
    auto R = make_ring(Field::rationals(), 1);
    Poly big = Poly::var(R, 0, 2'000'000'000);
    CHECK_THROWS_AS(big * big, RingError);
    CHECK_THROWS_AS(Poly::parse(R, "x0^99999999999"), RingError);
}

TEST_CASE("monomial orders") {
    auto G = make_ring(Field::rationals(), 3, MonoOrder::grevlex);
    auto L = make_ring(Field::rationals(), 3, MonoOrder::lex);
    // grevlex: x1^2 > x0*x2 ; lex: x0*x2 > x1^2
    CHECK(Poly::parse(G, "x0*x2 + x1^2").to_string() == "x1^2 + x0*x2");
    CHECK(Poly::parse(L, "x0*x2 + x1^2").to_string() == "x0*x2 + x1^2");
    CHECK(Poly::parse(G, "x0 + x1^2").to_string() == "x1^2 + x0");
    CHECK(Poly::parse(L, "x0 + x1^2").to_string() == "x0 + x1^2");
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 rng(7);
    for (auto field : {Field::rationals(), Field::prime(101), Field::prime(3)}) {
        auto R = make_ring(field, 3);
        for (int it = 0; it < 150; ++it) {
            Poly a = testing::random_poly(R, rng), b = testing::random_poly(R, rng),
                 c = testing::random_poly(R, rng);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a + b) + c == a + (b + c));
            CHECK(a * b == b * a);
            CHECK((a - a).is_zero());
            CHECK(Poly::parse(R, a.to_string()) == a);
        }
    }
}

TEST_CASE("frobenius is a ring homomorphism") {
    std::mt19937_64 rng(11);
    for (unsigned p : {2u, 3u, 5u}) {
        auto R = make_ring(Field::prime(p), 2);
        for (int it = 0; it < 100; ++it) {
            Poly a = testing::random_poly(R, rng), b = testing::random_poly(R, rng);
            for (unsigned e : {1u, 2u}) {
                CHECK((a * b).frobenius(e) == a.frobenius(e) * b.frobenius(e));
                CHECK((a + b).frobenius(e) == a.frobenius(e) + b.frobenius(e));
            }
        }
    }
}

TEST_CASE("matrix basics") {
    auto R = make_ring(Field::rationals(), 2, MonoOrder::grevlex, {"x", "y"});
    Matrix D = Matrix::parse(R, {{"-x*y", "-y^2"}, {"x^2", "x*y"}});
    CHECK((D * D).is_zero());
    CHECK(D.transpose().at(0, 1) == P(R, "x^2"));
    Matrix I = Matrix::identity(R, 2);
    CHECK(I * D == D);
    CHECK(D - D == Matrix(R, 2, 2));
    Matrix H = Matrix::hstack(D, I);
    CHECK(H.cols() == 4);
    CHECK(H.block(0, 2, 2, 2) == I);
    CHECK(Matrix::blockdiag(D, I).block(2, 2, 2, 2) == I);
    CHECK(Matrix::vstack(D, I).rows() == 4);
    CHECK(I.has_unit_entry());
    CHECK_FALSE(D.has_unit_entry());
    Vec v{P(R, "1"), P(R, "x")};
    CHECK(D * v == Vec{P(R, "-x*y^2 - x*y"), P(R, "x^2*y + x^2")});
    Matrix E(R, 1, 3);
    CHECK_THROWS_AS(E * E, RingError);
}
