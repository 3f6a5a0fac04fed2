#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plab/pasting.hpp"
#include "testrng.hpp"

using namespace plab;
using namespace plab::pasting;

namespace {

HomPoly random_poly(const Frame& fr, TestRng& rng) {
    HomPoly f(fr);
    for (const auto& [delta, lambda] : fr.all_pairs())
        for (uint32_t h = 0; h < fr.m; ++h)
            if (rng.next_u64() % 3 != 0) f.set_coeff(delta, lambda, h, rng.rational());
    return f;
}

PlaneCoords random_plane(const Frame& fr, TestRng& rng) {
    PlaneCoords A(fr.d(), fr.l);
    for (auto& c : A.a) c = rng.rational();
    return A;
}

}  // namespace

TEST_CASE("section_from_jet: y*x_1 instance") {
    Frame fr(3, 1, 1, 2);  // d = 1
    HomPoly f(fr);
    f.set_coeff(MultiIndex({1}), MultiIndex({1, 0}), 0, Rational(1));  // y * x_1
    Section s = section_from_jet(f);

    // v_{(2,0)} = A_{1,1}, v_{(1,1)} = A_{1,2}, v_{(0,2)} = 0
    CHECK(s.value(MultiIndex({2, 0}), 0) == Poly::variable(0));
    CHECK(s.value(MultiIndex({1, 1}), 0) == Poly::variable(1));
    CHECK(s.value(MultiIndex({0, 2}), 0).is_zero());

    // no y-dependence: constant section
    HomPoly g(fr);
    g.set_coeff(MultiIndex({0}), MultiIndex({2, 0}), 0, Rational(3));
    Section sg = section_from_jet(g);
    for (const auto& [key, poly] : sg.values) CHECK(poly.is_constant());
    CHECK(sg.value(MultiIndex({2, 0}), 0) == Poly(Rational(3, 2)));  // divided-power scale

    CHECK(section_from_jet(HomPoly(fr)).values.empty());
}

TEST_CASE("section from jet agrees with pointwise restriction") {
    TestRng rng(301);
    for (auto [n, m, k, l] : {std::tuple<int, int, int, int>{3, 2, 2, 2}, {3, 1, 2, 1}}) {
        Frame fr(n, m, k, l);
        for (int t = 0; t < 10; ++t) {
            HomPoly f = random_poly(fr, rng);
            Section s = section_from_jet(f);
            PlaneCoords A = random_plane(fr, rng);
            auto restricted = restrict_to_plane(f, A);
            for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
                for (uint32_t h = 0; h < fr.m; ++h) {
                    Rational direct = s.value(lambda, h).eval([&](uint32_t v) { return A.a[v]; });
                    auto it = restricted.find({lambda, h});
                    CHECK(direct == (it == restricted.end() ? Rational(0) : it->second));
                }
            }
        }
    }
}

TEST_CASE("check_infinitesimal: jet sections pass, the stated violation fails") {
    Frame fr(3, 1, 1, 2);
    HomPoly f(fr);
    f.set_coeff(MultiIndex({1}), MultiIndex({1, 0}), 0, Rational(1));
    CHECK(check_infinitesimal(section_from_jet(f)).empty());

    // v_{(2,0)} = A_{1,2}: the cross direction derivative must vanish but is 1
    Section bad;
    bad.frame = fr;
    bad.set_value(MultiIndex({2, 0}), 0, Poly::variable(1));
    auto violations = check_infinitesimal(bad);
    bool found = false;
    for (const auto& v : violations) {
        if (v.kind == 2 && v.i == 0 && v.j == 1 && v.lambda == MultiIndex({2, 0})) found = true;
    }
    CHECK(found);

    // l = 1: both condition families are without instances
    Frame fl1(3, 2, 3, 1);
    TestRng rng(303);
    Section odd;
    odd.frame = fl1;
    for (uint32_t h = 0; h < fl1.m; ++h) {
        Poly p(rng.rational());
        for (uint32_t i = 0; i < fl1.d(); ++i)
            p += Poly::variable(i).scaled(rng.rational()) * Poly::variable(i);  // arbitrary
        odd.set_value(MultiIndex({fl1.degree()}), h, p);
    }
    CHECK(check_infinitesimal(odd).empty());
}

TEST_CASE("check_global: examples") {
    TestRng rng(307);
    Frame fr(3, 1, 1, 2);

    // A = A2: the full intersection carries identical values
    Section arbitrary;
    arbitrary.frame = fr;
    arbitrary.set_value(MultiIndex({2, 0}), 0, Poly::variable(1) * Poly::variable(0));
    PlaneCoords A = random_plane(fr, rng);
    CHECK(check_global(arbitrary, A, A));

    // jet sections glue globally
    for (int t = 0; t < 20; ++t) {
        HomPoly f = random_poly(fr, rng);
        Section s = section_from_jet(f);
        CHECK(check_global(s, random_plane(fr, rng), random_plane(fr, rng)));
    }

    // the violating section fails on a generic pair differing in A_{1,2}
    Section bad;
    bad.frame = fr;
    bad.set_value(MultiIndex({2, 0}), 0, Poly::variable(1));
    bool caught = false;
    for (int t = 0; t < 10 && !caught; ++t) {
        PlaneCoords P = random_plane(fr, rng);
        PlaneCoords P2 = P;
        P2.at(0, 1) += rng.nonzero_rational();
        if (!check_global(bad, P, P2)) caught = true;
    }
    CHECK(caught);
}

TEST_CASE("global pasting on random pairs implies the infinitesimal conditions") {
    TestRng rng(311);
    for (auto [n, m, k, l] : {std::tuple<int, int, int, int>{3, 1, 1, 2}, {3, 2, 2, 2}}) {
        Frame fr(n, m, k, l);
        for (int t = 0; t < 5; ++t) {
            HomPoly f = random_poly(fr, rng);
            Section s = section_from_jet(f);
            bool global_ok = true;
            for (int p = 0; p < 50 && global_ok; ++p)
                global_ok = check_global(s, random_plane(fr, rng), random_plane(fr, rng));
            CHECK(global_ok);
            CHECK(check_infinitesimal(s).empty());
        }
        // non-holonomic sections reveal themselves on some sampled pair:
        // lambda = (k+1, 0, ...) with a value depending on A_{1,2}
        Section bad;
        bad.frame = fr;
        std::vector<uint32_t> top(fr.l, 0);
        top[0] = fr.degree();
        bad.set_value(MultiIndex(top), 0, Poly::variable(1));
        bool caught = false;
        for (int p = 0; p < 50 && !caught; ++p) {
            if (!check_global(bad, random_plane(fr, rng), random_plane(fr, rng))) caught = true;
        }
        CHECK(caught);
        CHECK(!check_infinitesimal(bad).empty());
    }
}

TEST_CASE("tangency along a plane is an equivalence relation") {
    TestRng rng(313);
    Frame fr(3, 2, 2, 2);
    for (int t = 0; t < 20; ++t) {
        PlaneCoords A = random_plane(fr, rng);
        HomPoly f = random_poly(fr, rng);
        // g, hpoly tangent to f along the plane: add adapted terms with |delta| >= 1
        auto tangent_perturbation = [&]() {
            CoeffMap v;
            for (const auto& [delta, lambda] : fr.all_pairs()) {
                if (delta.total() == 0) continue;
                for (uint32_t h = 0; h < fr.m; ++h) {
                    Rational c = rng.rational();
                    if (!c.is_zero()) v[HKey{delta, lambda, h}] = c;
                }
            }
            return from_adapted(fr, v, A);
        };
        HomPoly g = f + tangent_perturbation();
        HomPoly hp = g + tangent_perturbation();
        auto tangent = [&](const HomPoly& x, const HomPoly& y) {
            return restrict_to_plane(x - y, A).empty();
        };
        CHECK(tangent(f, f));
        CHECK(tangent(f, g));
        CHECK(tangent(g, f));
        CHECK(tangent(g, hp));
        CHECK(tangent(f, hp));  // transitivity
    }
}

TEST_CASE("glue: round trip, violations, zero section") {
    TestRng rng(317);
    for (auto [n, m, k, l] : {std::tuple<int, int, int, int>{2, 1, 1, 1}, {3, 1, 1, 2},
                              {3, 2, 2, 2}, {3, 1, 2, 1}}) {
        Frame fr(n, m, k, l);
        for (int t = 0; t < 10; ++t) {
            HomPoly f = random_poly(fr, rng);
            GlueResult r = glue(section_from_jet(f));
            REQUIRE(r.status == GlueResult::Status::Glued);
            CHECK(r.f == f);
        }
        Section zero;
        zero.frame = fr;
        GlueResult rz = glue(zero);
        REQUIRE(rz.status == GlueResult::Status::Glued);
        CHECK(rz.f.is_zero());
    }

    // the infinitesimal violation is caught by glue as well
    Frame fr(3, 1, 1, 2);
    Section bad;
    bad.frame = fr;
    bad.set_value(MultiIndex({2, 0}), 0, Poly::variable(1));
    CHECK(glue(bad).status == GlueResult::Status::NotHolonomic);
}

TEST_CASE("first_jet_in_equation agrees with the symbolic check") {
    TestRng rng(331);
    Frame fr(3, 2, 1, 2);
    for (int t = 0; t < 40; ++t) {
        HomPoly f = random_poly(fr, rng);
        Section s = section_from_jet(f);
        PlaneCoords A = random_plane(fr, rng);
        CHECK(first_jet_in_equation(s, A));
    }
    // a violating section fails at a generic point
    Section bad;
    bad.frame = fr;
    bad.set_value(MultiIndex({2, 0}), 0, Poly::variable(1));
    bool failed = false;
    for (int t = 0; t < 10 && !failed; ++t) {
        if (!first_jet_in_equation(bad, random_plane(fr, rng))) failed = true;
    }
    CHECK(failed);

    // l = 1: always in the equation
    Frame fl1(2, 1, 2, 1);
    TestRng rng2(337);
    Section odd;
    odd.frame = fl1;
    odd.set_value(MultiIndex({3}), 0, Poly::variable(0) * Poly::variable(0));
    for (int t = 0; t < 10; ++t) CHECK(first_jet_in_equation(odd, random_plane(fl1, rng2)));
}

TEST_CASE("holonomic iff gluable, exhaustively over a monomial basis of sections") {
    // sections with a single monomial value of degree <= k+1 in the plane
    // coordinates: the kernel of the infinitesimal conditions must coincide
    // with the sections glue accepts
    Frame fr(3, 1, 1, 2);
    std::vector<Poly> monomials{Poly(Rational(1))};
    for (uint32_t deg = 1; deg <= fr.degree(); ++deg) {
        for (const MultiIndex& e : enumerate_multiindices(fr.d() * fr.l, deg)) {
            Monomial m = Monomial::one();
            for (uint32_t v = 0; v < e.dim(); ++v)
                if (e[v] > 0) m = m.times(Monomial::var(v, e[v]));
            monomials.push_back(Poly(m, Rational(1)));
        }
    }
    int holonomic = 0, rejected = 0;
    for (const MultiIndex& lambda : enumerate_multiindices(fr.l, fr.degree())) {
        for (const Poly& mono : monomials) {
            Section s;
            s.frame = fr;
            s.set_value(lambda, 0, mono);
            bool inf_ok = check_infinitesimal(s).empty();
            GlueResult r = glue(s);
            bool glued = r.status == GlueResult::Status::Glued;
            CHECK(inf_ok == glued);
            if (glued) {
                CHECK(section_from_jet(r.f) == s);
                ++holonomic;
            } else {
                CHECK(r.status == GlueResult::Status::NotHolonomic);
                ++rejected;
            }
        }
    }
    CHECK(holonomic > 0);
    CHECK(rejected > 0);
}

TEST_CASE("graph of a jet section is an integral leaf") {
    TestRng rng(347);
    for (auto [n, m, k, l] : {std::tuple<int, int, int, int>{3, 1, 1, 2}, {3, 2, 2, 2}}) {
        Frame fr(n, m, k, l);
        for (int t = 0; t < 5; ++t) CHECK(graph_is_integral_leaf(random_poly(fr, rng)));
    }
}

TEST_CASE("infinitesimal constraint matrix matches the level-0 prolongation matrix") {
    for (auto [n, m, k, l] : {std::tuple<int, int, int, int>{3, 1, 1, 2}, {3, 2, 2, 2},
                              {3, 2, 3, 2}, {2, 2, 2, 1}}) {
        Frame fr(n, m, k, l);
        tower::ConstraintSystem a = infinitesimal_constraints(fr);
        tower::ConstraintSystem b = tower::prolongation_constraints(fr, 0);
        REQUIRE(a.columns.size() == b.columns.size());
        for (size_t c = 0; c < a.columns.size(); ++c) CHECK(a.columns[c] == b.columns[c]);
        // equal as row multisets
        auto rows_of = [](const RationalMatrix& M) {
            std::vector<std::string> rows;
            for (size_t r = 0; r < M.rows(); ++r) {
                std::string s;
                for (size_t c = 0; c < M.cols(); ++c) s += M.at(r, c).str() + ",";
                rows.push_back(std::move(s));
            }
            std::sort(rows.begin(), rows.end());
            return rows;
        };
        CHECK(rows_of(a.M) == rows_of(b.M));
    }
}
