#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plab/sympoly.hpp"
#include "testrng.hpp"

using namespace plab;

namespace {

HomPoly random_poly(const Frame& fr, TestRng& rng) {
    HomPoly f(fr);
    for (const auto& [delta, lambda] : fr.all_pairs()) {
        for (uint32_t h = 0; h < fr.m; ++h) {
            if (rng.next_u64() % 3 == 0) continue;  // keep it sparse
            f.set_coeff(delta, lambda, h, rng.rational());
        }
    }
    return f;
}

PlaneCoords random_plane(const Frame& fr, TestRng& rng) {
    PlaneCoords A(fr.d(), fr.l);
    for (auto& c : A.a) c = rng.rational();
    return A;
}

// Independent expansion oracle: u-coefficients of (y_1 - sum_j A_{1,j} x_j)^{k+1}
// for d = 1, built from the multinomial theorem, not via from_adapted.
HomPoly power_of_annihilator(const Frame& fr, const PlaneCoords& A) {
    REQUIRE(fr.d() == 1);
    HomPoly f(fr);
    uint32_t deg = fr.degree();
    for (uint32_t c = 0; c <= deg; ++c) {
        // term C(deg,c) y^c (-sum A x)^(deg-c)
        for (const MultiIndex& mu : enumerate_multiindices(fr.l, deg - c)) {
            Rational coeff((long long)(binomial(deg, c) * factorial(deg - c) / mu.factorial()));
            if ((deg - c) % 2 == 1) coeff = -coeff;
            for (uint32_t j = 0; j < fr.l; ++j)
                for (uint32_t t = 0; t < mu[j]; ++t) coeff *= A.at(0, j);
            // divided-power coefficient = monomial coefficient * delta! * lambda!
            Rational u = coeff * Rational((long long)(factorial(c) * mu.factorial()));
            f.add_coeff(MultiIndex({c}), mu, 0, u);
        }
    }
    return f;
}

}  // namespace

TEST_CASE("frame validation") {
    CHECK_THROWS(Frame(2, 1, 1, 2));  // l >= n
    CHECK_THROWS(Frame(2, 1, 0, 1));  // k < 1
    Frame fr(3, 2, 2, 1);
    CHECK(fr.d() == 2);
    CHECK(fr.degree() == 3);
}

TEST_CASE("to_adapted: y*x example") {
    Frame fr(2, 1, 1, 1);
    // f = y*x has divided-power coefficient u_{(1),(1)} = 1!*1! * 1 = 1
    HomPoly f(fr);
    f.set_coeff(MultiIndex({1}), MultiIndex({1}), 0, Rational(1));
    for (long long anum : {0LL, 1LL, -2LL, 5LL}) {
        PlaneCoords A(1, 1);
        A.at(0, 0) = Rational(anum, 3);
        CoeffMap v = to_adapted(f, A);
        // by hand: y*x = (y - a x) x + a x^2
        CHECK(v[HKey{MultiIndex({1}), MultiIndex({1}), 0}] == Rational(1));
        if (anum != 0) {
            CHECK(v[HKey{MultiIndex({0}), MultiIndex({2}), 0}] == Rational(anum, 3));
        } else {
            CHECK(v.count(HKey{MultiIndex({0}), MultiIndex({2}), 0}) == 0);
        }
        CHECK(v.count(HKey{MultiIndex({2}), MultiIndex({0}), 0}) == 0);
    }
}

TEST_CASE("to_adapted: annihilator power collapses to a single coefficient") {
    TestRng rng(5);
    for (auto [n, l, k] : {std::tuple<int, int, int>{2, 1, 1}, {3, 2, 2}, {2, 1, 3}}) {
        Frame fr(n, 1, k, l);
        PlaneCoords A = random_plane(fr, rng);
        HomPoly f = power_of_annihilator(fr, A);
        CoeffMap v = to_adapted(f, A);
        REQUIRE(v.size() == 1);
        HKey key{MultiIndex({fr.degree()}), MultiIndex::zeros(fr.l), 0};
        CHECK(v[key] == Rational((long long)factorial(fr.degree())));
    }
}

TEST_CASE("to_adapted of zero is empty") {
    Frame fr(3, 2, 2, 2);
    TestRng rng(9);
    CHECK(to_adapted(HomPoly(fr), random_plane(fr, rng)).empty());
}

TEST_CASE("from_adapted: pure x power does not involve A") {
    Frame fr(2, 1, 2, 1);
    TestRng rng(13);
    CoeffMap v;
    v[HKey{MultiIndex({0}), MultiIndex({3}), 0}] = Rational(1);
    for (int t = 0; t < 4; ++t) {
        PlaneCoords A = random_plane(fr, rng);
        HomPoly f = from_adapted(fr, v, A);
        // x^{k+1} = (k+1)! * divided-power basis element
        REQUIRE(f.coeffs().size() == 1);
        CHECK(f.coeff(MultiIndex({0}), MultiIndex({3}), 0) == Rational(6));
    }
    CHECK(from_adapted(fr, CoeffMap{}, random_plane(fr, rng)).is_zero());
}

TEST_CASE("to_adapted/from_adapted are mutually inverse") {
    TestRng rng(17);
    for (auto [n, m, k, l] : {std::tuple<int, int, int, int>{2, 1, 1, 1},
                              {3, 2, 2, 2},
                              {3, 1, 2, 1},
                              {3, 2, 1, 2}}) {
        Frame fr(n, m, k, l);
        for (int t = 0; t < 10; ++t) {
            HomPoly f = random_poly(fr, rng);
            PlaneCoords A = random_plane(fr, rng);
            CoeffMap v = to_adapted(f, A);
            CHECK(from_adapted(fr, v, A) == f);
            // and the other direction, starting from adapted data
            HomPoly g = from_adapted(fr, v, A);
            CHECK(to_adapted(g, A) == v);
        }
    }
}

TEST_CASE("filtration level: stated examples") {
    TestRng rng(29);
    for (int k : {1, 2, 3}) {
        Frame fr(2, 1, k, 1);
        HomPoly xpow(fr);
        xpow.set_coeff(MultiIndex({0}), MultiIndex({(uint32_t)k + 1}), 0, Rational(1));
        for (int t = 0; t < 3; ++t) {
            CHECK(filtration_level(xpow, random_plane(fr, rng)) == (uint32_t)k + 2);
        }
        PlaneCoords A = random_plane(fr, rng);
        CHECK(filtration_level(power_of_annihilator(fr, A), A) == 1);
    }
    // y*x at A=0 has level 2
    Frame fr(2, 1, 1, 1);
    HomPoly f(fr);
    f.set_coeff(MultiIndex({1}), MultiIndex({1}), 0, Rational(1));
    PlaneCoords zero(1, 1);
    CHECK(filtration_level(f, zero) == 2);
    CHECK(filtration_level(HomPoly(fr), zero) == 0);
}

TEST_CASE("restrict_to_plane: stated examples") {
    Frame fr(2, 1, 1, 1);
    HomPoly f(fr);
    f.set_coeff(MultiIndex({1}), MultiIndex({1}), 0, Rational(1));  // y*x
    PlaneCoords A(1, 1);
    A.at(0, 0) = Rational(7, 2);
    auto r = restrict_to_plane(f, A);
    REQUIRE(r.size() == 1);
    CHECK(r[{MultiIndex({2}), 0}] == Rational(7, 2));

    // anything of filtration level <= k+1 restricts to zero
    HomPoly g = power_of_annihilator(fr, A);
    CHECK(restrict_to_plane(g, A).empty());

    // x^{k+1} restricts to itself
    HomPoly xx(fr);
    xx.set_coeff(MultiIndex({0}), MultiIndex({2}), 0, Rational(2));  // = x^2
    auto rx = restrict_to_plane(xx, A);
    REQUIRE(rx.size() == 1);
    CHECK(rx[{MultiIndex({2}), 0}] == Rational(1));
}

TEST_CASE("iterated derivative: examples and symmetry") {
    Frame fr(2, 1, 1, 1);
    HomPoly x2(fr);
    x2.set_coeff(MultiIndex({0}), MultiIndex({2}), 0, Rational(2));  // x^2 in monomials
    RVector xdir{{Rational(0)}, {Rational(1)}};
    auto dd = iterated_derivative(x2, {xdir, xdir});
    REQUIRE(dd.degree == 0);
    CHECK(dd.mono.at(HKey{MultiIndex({0}), MultiIndex({0}), 0}) == Rational(2));

    RVector zero{{Rational(0)}, {Rational(0)}};
    CHECK(iterated_derivative(x2, {zero}).is_zero());

    TestRng rng(31);
    Frame fr2(3, 2, 2, 2);
    for (int t = 0; t < 100; ++t) {
        HomPoly f = random_poly(fr2, rng);
        RVector w1{{rng.rational()}, {rng.rational(), rng.rational()}};
        RVector w2{{rng.rational()}, {rng.rational(), rng.rational()}};
        CHECK(iterated_derivative(f, {w1, w2}) == iterated_derivative(f, {w2, w1}));
    }
}

TEST_CASE("filtration: derivative characterization matches the adapted-basis one") {
    // exhaustive over basis monomials for small frames, plus random polynomials
    TestRng rng(37);
    for (auto [n, m, k, l] :
         {std::tuple<int, int, int, int>{2, 1, 1, 1}, {3, 1, 2, 2}, {3, 2, 2, 1}}) {
        Frame fr(n, m, k, l);
        std::vector<HomPoly> cases;
        for (const auto& [delta, lambda] : fr.all_pairs()) {
            HomPoly f(fr);
            f.set_coeff(delta, lambda, 0, Rational(1));
            cases.push_back(f);
        }
        for (int t = 0; t < 5; ++t) cases.push_back(random_poly(fr, rng));
        for (int t = 0; t < 3; ++t) {
            PlaneCoords A = random_plane(fr, rng);
            auto basis = plane_basis(fr, A);
            for (const HomPoly& f : cases) {
                uint32_t p = filtration_level(f, A);
                if (f.is_zero()) {
                    CHECK(p == 0);
                    continue;
                }
                // all p-fold derivatives along the plane vanish (trivially so
                // when p exceeds the degree, which the operation rejects)
                if (p <= fr.degree()) {
                std::vector<size_t> tuple(p, 0);
                bool all_zero = true;
                auto sweep = [&](auto&& self, size_t pos) -> void {
                    if (!all_zero) return;
                    if (pos == p) {
                        std::vector<RVector> vs;
                        for (size_t idx : tuple) vs.push_back(basis[idx]);
                        if (!iterated_derivative(f, vs).is_zero()) all_zero = false;
                        return;
                    }
                    for (size_t i = 0; i < basis.size(); ++i) {
                        tuple[pos] = i;
                        self(self, pos + 1);
                    }
                };
                sweep(sweep, 0);
                CHECK(all_zero);
                }
                // but some (p-1)-fold derivative survives
                if (p >= 1) {
                    std::vector<size_t> tup(p - 1, 0);
                    bool some_nonzero = false;
                    auto sweep2 = [&](auto&& self, size_t pos) -> void {
                        if (some_nonzero) return;
                        if (pos + 1 == p) {
                            std::vector<RVector> vs;
                            for (size_t idx : tup) vs.push_back(basis[idx]);
                            if (!iterated_derivative(f, vs).is_zero()) some_nonzero = true;
                            return;
                        }
                        for (size_t i = 0; i < basis.size(); ++i) {
                            tup[pos] = i;
                            self(self, pos + 1);
                        }
                    };
                    sweep2(sweep2, 0);
                    CHECK(some_nonzero);
                }
            }
        }
    }
}

TEST_CASE("filtration monotonicity under addition") {
    TestRng rng(41);
    Frame fr(3, 2, 2, 2);
    for (int t = 0; t < 40; ++t) {
        HomPoly f = random_poly(fr, rng);
        HomPoly g = random_poly(fr, rng);
        PlaneCoords A = random_plane(fr, rng);
        uint32_t pf = filtration_level(f, A);
        uint32_t pg = filtration_level(g, A);
        CHECK(filtration_level(f + g, A) <= std::max(pf, pg));
        CHECK(pf <= fr.degree() + 1);
    }
}

TEST_CASE("dim mu^p is A-independent and matches the closed form") {
    TestRng rng(43);
    for (auto [n, m, k, l] : {std::tuple<int, int, int, int>{2, 1, 1, 1}, {3, 2, 2, 2}}) {
        Frame fr(n, m, k, l);
        for (uint32_t p = 0; p <= fr.degree() + 1; ++p) {
            uint64_t expected = mu_dim(fr, p);
            for (int t = 0; t < 2; ++t) {
                PlaneCoords A = random_plane(fr, rng);
                // span of all adapted basis elements with |lambda| < p
                std::vector<RationalVector> vecs;
                auto pairs = fr.all_pairs();
                // column index over the u-coefficient grid
                std::map<HKey, size_t, HKeyLess> col;
                for (const auto& [delta, lambda] : pairs)
                    for (uint32_t h = 0; h < fr.m; ++h)
                        col[HKey{delta, lambda, h}] = col.size();
                for (const auto& [delta, lambda] : pairs) {
                    if (lambda.total() >= p) continue;
                    for (uint32_t h = 0; h < fr.m; ++h) {
                        CoeffMap v;
                        v[HKey{delta, lambda, h}] = Rational(1);
                        HomPoly b = from_adapted(fr, v, A);
                        RationalVector row(col.size());
                        for (const auto& [key, c] : b.coeffs()) row[col[key]] = c;
                        vecs.push_back(std::move(row));
                    }
                }
                CHECK(span_rank(vecs, col.size()) == expected);
            }
        }
    }
}

TEST_CASE("hompoly rejects keys outside the frame grid") {
    Frame fr(2, 1, 1, 1);
    HomPoly f(fr);
    CHECK_THROWS(f.set_coeff(MultiIndex({1}), MultiIndex({1, 0}), 0, Rational(1)));
    CHECK_THROWS(f.set_coeff(MultiIndex({1}), MultiIndex({2}), 0, Rational(1)));
    CHECK_THROWS(f.set_coeff(MultiIndex({1}), MultiIndex({1}), 5, Rational(1)));
}
