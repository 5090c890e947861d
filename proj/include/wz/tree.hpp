#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "wz/multiindex.hpp"
#include "wz/rational.hpp"

namespace wz::sym {

enum class Kind : uint8_t { One, Noise, Poly, CSym, Prod, Int };

/// Exact affine homogeneity c0 + c1*alpha + c2*(-delta0), integer coefficients.
struct Hom {
    int c0 = 0;  // polynomial/integration contribution
    int c1 = 0;  // number of noise leaves (coefficient of alpha)
    int c2 = 0;  // number of C-symbol leaves (coefficient of -delta0)

    Rational value(const Rational& alpha, const Rational& delta0) const {
        return Rational(c0) + Rational(c1) * alpha - Rational(c2) * delta0;
    }
    friend Hom operator+(const Hom& a, const Hom& b) {
        return Hom{a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2};
    }
    friend bool operator==(const Hom& a, const Hom& b) {
        return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2;
    }
};

class Tree;

struct TreeNode {
    Kind kind;
    MIdx k;                   // Poly exponent / Int derivative index
    int csym = 0;             // 1 or 2 for CSym
    std::vector<Tree> sub;    // Prod factors (canonical, sorted) or Int argument [0]
    Hom hom;
};

/// Immutable canonical formal expression: the basis of the symbol space.
/// Construct only through the factory functions below; they enforce the
/// canonical form (flattened sorted products, merged polynomials, no unit
/// factors, no integration of bare polynomials).
class Tree {
  public:
    Tree() = default;  // empty handle; factories always return non-empty

    Kind kind() const { return p_->kind; }
    const MIdx& midx() const { return p_->k; }
    int csym_index() const { return p_->csym; }
    const std::vector<Tree>& factors() const { return p_->sub; }
    const Tree& int_arg() const { return p_->sub[0]; }
    const Hom& hom() const { return p_->hom; }

    bool is_one() const { return p_->kind == Kind::One; }
    bool is_poly_or_one() const { return p_->kind == Kind::One || p_->kind == Kind::Poly; }

    /// total number of Noise leaves
    int noise_count() const { return p_->hom.c1; }

    bool operator==(const Tree& o) const { return equal(*this, o); }
    bool operator!=(const Tree& o) const { return !equal(*this, o); }
    bool operator<(const Tree& o) const { return compare(*this, o) < 0; }

    static int compare(const Tree& a, const Tree& b);
    static bool equal(const Tree& a, const Tree& b);

    std::string str() const;

  private:
    std::shared_ptr<const TreeNode> p_;
    explicit Tree(std::shared_ptr<const TreeNode> p) : p_(std::move(p)) {}

    friend Tree tree_one();
    friend Tree tree_noise();
    friend Tree tree_poly(const MIdx&);
    friend Tree tree_csym(int);
    friend Tree tree_prod(std::vector<Tree>);
    friend Tree tree_int(const MIdx&, const Tree&);
};

Tree tree_one();
Tree tree_noise();
Tree tree_poly(const MIdx& k);
Tree tree_csym(int j);
/// Canonical product of the given factors (flattens, absorbs units, merges
/// polynomial exponents, sorts). Empty input gives 1, single factor passes
/// through.
Tree tree_prod(std::vector<Tree> factors);
/// I_k(arg). Throws if arg is a bare polynomial (those symbols are
/// identified with zero and rejected as explicit input).
Tree tree_int(const MIdx& k, const Tree& arg);

inline Tree tree_xi() { return tree_noise(); }
inline Tree tree_x(int i) { return tree_poly(MIdx::unit(i)); }
/// Psi = I(Xi)
Tree tree_psi();
/// Psi^n
Tree tree_psi_pow(int n);
/// n-fold product of copies of t
Tree tree_pow(const Tree& t, int n);

/// Parse the printer's ASCII syntax, e.g. "I(Psi^3)*Psi", "C1", "X1^2*Xi".
Tree parse_tree(const std::string& text);

}  // namespace wz::sym
