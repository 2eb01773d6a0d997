#include "kd/linalg.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <random>

using namespace kd;

TEST_CASE("gf101 examples")
{
    Field f = Field::prime(101);
    CHECK(f.from_int(2).inv() == f.from_int(51));
    CHECK((f.from_int(2) * f.from_int(51)).is_one());
    CHECK((f.from_int(-1) * f.from_int(-1)).is_one());
    CHECK(f.from_int(-1).str() == "100");
    CHECK(f.from_int(205).str() == "3");
}

TEST_CASE("rational examples")
{
    Field q = Field::rationals();
    Scalar x = q.from_int(3) / q.from_int(4);
    CHECK(x.inv() == q.from_int(4) / q.from_int(3));
    CHECK(x.str() == "3/4");
    CHECK((q.from_int(-6) / q.from_int(4)).str() == "-3/2");
    CHECK((q.from_int(6) / q.from_int(-4)).str() == "-3/2");
}

TEST_CASE("field spec parsing")
{
    CHECK(Field::parse("gf:7").characteristic() == 7);
    CHECK(Field::parse("q").kind() == Field::Kind::rationals);
    CHECK_THROWS_AS(Field::parse("gf:100"), FieldError);
    CHECK_THROWS_AS(Field::parse("gf:1"), FieldError);
    CHECK_THROWS_AS(Field::parse("gf:x"), FieldError);
    CHECK_THROWS_AS(Field::parse("r"), FieldError);
    CHECK_THROWS_AS(Field::prime(91), FieldError);
}

TEST_CASE("field axioms on random triples")
{
    std::mt19937 rng(7);
    for (Field f : {Field::prime(101), Field::prime(2), Field::rationals()}) {
        std::uniform_int_distribution<int> d(-50, 50);
        auto draw = [&] {
            if (f.kind() == Field::Kind::rationals) {
                int den = d(rng);
                return f.from_int(d(rng)) / f.from_int(den == 0 ? 1 : den);
            }
            return f.from_int(d(rng));
        };
        for (int t = 0; t < 1000; ++t) {
            Scalar a = draw(), b = draw(), c = draw();
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a + b == b + a);
            REQUIRE(a * b == b * a);
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE(a - a == f.zero());
            if (!a.is_zero())
                REQUIRE((a * a.inv()).is_one());
        }
    }
}

TEST_CASE("reducer: rank, kernel and solve against the dense oracle")
{
    Field f = Field::prime(101);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int t = 0; t < 200; ++t) {
        int rows = 1 + t % 9, cols = 1 + (t * 7) % 11;
        Mat m(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r)
                if (u01(rng) < 0.4)
                    m.add(r, c, f.from_int(coef(rng)));
        int rk = rank(m, f);
        REQUIRE(rk == oracle::rank(oracle::dense(m), 101));
        auto ker = kernel(m, f);
        REQUIRE(static_cast<int>(ker.size()) == cols - rk);
        for (const auto& z : ker)
            REQUIRE((m * z).empty());
        // a random element of the image is solvable, and the solution maps back
        VecBuilder x;
        for (int c = 0; c < cols; ++c)
            x.add(c, f.from_int(coef(rng)));
        SVec b = m * x.build();
        auto sol = solve(m, b, f);
        REQUIRE(sol);
        REQUIRE(m * *sol == b);
    }
}

TEST_CASE("matrix transpose and product")
{
    Field f = Field::prime(101);
    Mat a(2, 3);
    a.add(0, 0, f.from_int(1));
    a.add(1, 2, f.from_int(5));
    a.add(0, 2, f.from_int(3));
    Mat t = a.transposed();
    CHECK(t.rows() == 3);
    CHECK(t.at(2, 1) == f.from_int(5));
    CHECK(t.transposed() == a);
    Mat p = a * t;
    CHECK(p.at(0, 0) == f.from_int(10));
    CHECK(p.at(1, 1) == f.from_int(25));
    CHECK(p.at(0, 1) == f.from_int(15));
}
