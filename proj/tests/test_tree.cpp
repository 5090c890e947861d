#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wz/tree.hpp"

using namespace wz;
using namespace wz::sym;

TEST_CASE("unit absorption") {
    Tree psi = tree_psi();
    CHECK(tree_prod({psi, tree_one()}) == psi);
    CHECK(tree_prod({tree_one(), tree_one()}) == tree_one());
    CHECK(tree_prod({}) == tree_one());
}

TEST_CASE("flattening") {
    Tree psi = tree_psi();
    Tree nested = tree_prod({psi, tree_prod({psi, psi})});
    CHECK(nested == tree_psi_pow(3));
    CHECK(nested.factors().size() == 3);
}

TEST_CASE("unit absorption plus sort") {
    Tree t = tree_prod({tree_noise(), tree_one(), tree_x(1)});
    CHECK(t.kind() == Kind::Prod);
    CHECK(t.factors().size() == 2);
    // sorted by homogeneity: Xi (alpha < 0) before X1 (1)
    CHECK(t.factors()[0] == tree_noise());
    CHECK(t.factors()[1] == tree_x(1));
}

TEST_CASE("polynomial exponent merging") {
    CHECK(tree_prod({tree_x(1), tree_x(1)}) == tree_poly([] {
              MIdx k;
              k[1] = 2;
              return k;
          }()));
    CHECK(tree_poly(MIdx{}) == tree_one());
}

TEST_CASE("canonicalization is idempotent") {
    Tree t = tree_prod({tree_psi(), tree_x(2), tree_psi()});
    Tree again = tree_prod({t});
    CHECK(t == again);
}

TEST_CASE("integration of polynomials rejected") {
    CHECK_THROWS_AS(tree_int(MIdx{}, tree_one()), std::invalid_argument);
    CHECK_THROWS_AS(tree_int(MIdx{}, tree_x(1)), std::invalid_argument);
}

TEST_CASE("homogeneity bookkeeping") {
    CHECK(tree_noise().hom() == Hom{0, 1, 0});
    CHECK(tree_one().hom() == Hom{0, 0, 0});
    CHECK(tree_psi_pow(3).hom() == Hom{6, 3, 0});  // 3 alpha + 6
    CHECK(tree_csym(1).hom() == Hom{0, 0, 1});     // -delta0
    CHECK(tree_x(0).hom() == Hom{2, 0, 0});
    // evaluation at alpha = -2.55
    Rational v = tree_psi_pow(3).hom().value(Rational(-51, 20), Rational(1, 10));
    CHECK(v == Rational(-33, 20));
}

TEST_CASE("homogeneity additivity under products") {
    Tree a = tree_psi_pow(2);
    Tree b = tree_prod({tree_int(MIdx{}, tree_psi_pow(3)), tree_x(1)});
    Tree ab = tree_prod({a, b});
    Hom expect = a.hom() + b.hom();
    CHECK(ab.hom() == expect);
}

TEST_CASE("printing") {
    CHECK(tree_one().str() == "1");
    CHECK(tree_noise().str() == "Xi");
    CHECK(tree_psi().str() == "Psi");
    CHECK(tree_psi_pow(3).str() == "Psi^3");
    CHECK(tree_csym(1).str() == "C1");
    Tree t = tree_prod({tree_int(MIdx{}, tree_psi_pow(3)), tree_psi()});
    CHECK(t.str() == "Psi*I(Psi^3)");
    CHECK(tree_int(MIdx::unit(1), tree_csym(1)).str() == "I1(C1)");
}

TEST_CASE("parser round-trips the printer") {
    std::vector<Tree> corpus = {
        tree_one(),
        tree_noise(),
        tree_psi(),
        tree_psi_pow(2),
        tree_psi_pow(3),
        tree_prod({tree_psi_pow(2), tree_x(1)}),
        tree_prod({tree_int(MIdx{}, tree_psi_pow(3)), tree_psi_pow(2)}),
        tree_int(MIdx::unit(2), tree_psi()),
        tree_int(MIdx::unit(1), tree_prod({tree_csym(1), tree_psi()})),
        tree_prod({tree_csym(1), tree_csym(1), tree_psi()}),
        tree_prod({tree_poly([] { MIdx k; k[0] = 1; k[2] = 1; return k; }()), tree_psi()}),
    };
    for (const auto& t : corpus) {
        CAPTURE(t.str());
        CHECK(parse_tree(t.str()) == t);
    }
}

TEST_CASE("parser accepts spec syntax") {
    CHECK(parse_tree("I(Xi)") == tree_psi());
    CHECK(parse_tree("I(Psi^3)*Psi") ==
          tree_prod({tree_int(MIdx{}, tree_psi_pow(3)), tree_psi()}));
    CHECK(parse_tree("C1") == tree_csym(1));
    CHECK(parse_tree("X1^2*Xi") ==
          tree_prod({tree_noise(), tree_pow(tree_x(1), 2)}));
    CHECK_THROWS_AS(parse_tree("I(X1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree("Psi^"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tree("Q"), std::invalid_argument);
}

TEST_CASE("total order is strict and consistent") {
    std::vector<Tree> ts = {tree_one(),     tree_noise(),      tree_psi(),
                            tree_psi_pow(2), tree_psi_pow(3),  tree_x(1),
                            tree_csym(1),    tree_csym(2)};
    for (const auto& a : ts)
        for (const auto& b : ts) {
            int ab = Tree::compare(a, b), ba = Tree::compare(b, a);
            CHECK(ab == -ba);
            CHECK((ab == 0) == (a == b));
        }
}
