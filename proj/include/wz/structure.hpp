#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "wz/lincomb.hpp"
#include "wz/tree.hpp"

namespace wz::sym {

/// Parameters of the structure: spatial dimension, noise regularity alpha,
/// C-symbol weight delta0, and generation caps. alpha must stay in
/// (-18/7, -5/2) and delta0 in (0, -(4 alpha + 10)).
struct AlgebraConfig {
    int d = 3;
    Rational alpha = Rational(-51, 20);
    Rational delta0 = Rational(1, 10);
    int poly_cap = 2;                 // max |k|_s of generated polynomial symbols
    Rational hom_cap = Rational(2);   // generation prune: drop trees above this

    void validate() const;

    Rational hom_value(const Tree& t) const { return t.hom().value(alpha, delta0); }
    bool hom_positive(const Tree& t) const { return hom_value(t).sign() > 0; }
};

/// tau in F_+ : tau = 1, or every prime factor has positive homogeneity.
bool is_positive_tree(const Tree& t, const AlgebraConfig& cfg);

/// Projection P_+ : keeps exactly the positive-subspace trees.
LinComb p_plus(const LinComb& v, const AlgebraConfig& cfg);

/// I_k applied to a linear combination, with I_k(polynomial) |-> 0
/// (the standard quotient).
LinComb lin_int(const MIdx& k, const LinComb& v);

/// Coproduct Delta : H -> H (x) H_+ of the structure group machinery.
TensorComb delta(const Tree& t, const AlgebraConfig& cfg);

/// Coproduct Delta^+ on the positive subalgebra.
TensorComb delta_plus(const Tree& t, const AlgebraConfig& cfg);

/// Character evaluation: g is given on the prime positive trees (integration
/// symbols); it is extended multiplicatively with g(1) = 1, g(X^k) from the
/// X_i values when present (default 0 exponent rule: X_i must be supplied if
/// it occurs). Throws std::out_of_range naming the missing tree.
Rational eval_character(const std::map<Tree, Rational>& g, const Tree& t);

/// Gamma_g tau = (I (x) g) Delta tau.
LinComb gamma_g(const std::map<Tree, Rational>& g, const Tree& t, const AlgebraConfig& cfg);

/// Model set F_F truncated at recursion depth n_max, pruned at cfg.hom_cap
/// and cfg.poly_cap (both keep everything of non-positive homogeneity).
std::vector<Tree> generate_model_set(int n_max, const AlgebraConfig& cfg);

/// All generated trees with homogeneity <= 0 (strict < 0 for the minus
/// variant), sorted by homogeneity. alpha_val must lie in (-18/7, -5/2).
std::vector<Tree> negative_sector(const Rational& alpha_val, const AlgebraConfig& cfg,
                                  bool strict);

/// The renormalisation domain F_0: the non-positive trees together with
/// 1, X_i, I(Psi^2), I(Psi)Psi and I(Psi)Psi^2.
std::vector<Tree> f0_sector(const AlgebraConfig& cfg);

/// Basis membership test for H_0^+ : products X^k prod_i I_{l_i}(tau_i)
/// with tau_i in {Psi, Psi^2, Psi^3} and each |I_{l_i}(tau_i)|_s > 0.
bool is_h0plus_basis(const Tree& t, const AlgebraConfig& cfg);

}  // namespace wz::sym
