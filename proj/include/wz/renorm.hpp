#pragma once

#include "wz/structure.hpp"

namespace wz::sym {

/// The renormalisation substitution M : H_0 -> H_F^1. Expands the defining
/// products into canonical linear combinations with C-symbol leaves.
/// Throws std::invalid_argument for trees outside F_0.
LinComb renorm_M(const Tree& t, const AlgebraConfig& cfg);

/// Companion map Delta^M : H_0 -> H_F^1 (x) H_F^{1,+}.
TensorComb delta_M(const Tree& t, const AlgebraConfig& cfg);

/// Companion map M^ : H_0^+ -> H_F^{1,+} (multiplicative, fixes X^k).
LinComb hat_M(const Tree& t, const AlgebraConfig& cfg);

/// Multiplicative morphism Delta^M^ : H_0^+ -> H_F^{1,+} (x) H_F^{1,+}.
TensorComb hat_delta_M(const Tree& t, const AlgebraConfig& cfg);

/// Antipode of the positive Hopf-like structure, defined recursively from
/// Delta^+ on the graded-positive subalgebra.
LinComb antipode(const Tree& t, const AlgebraConfig& cfg);
LinComb antipode(const LinComb& v, const AlgebraConfig& cfg);

/// M^ I_k = Mult (I_k (x) I) Delta^M, checked on tau for every derivative
/// index k that lands in the positive subspace (vacuously true when none do).
bool check_identity_32(const Tree& t, const AlgebraConfig& cfg);

/// (I (x) Mult)(Delta (x) I) Delta^M = (M (x) M^) Delta on tau.
bool check_identity_33(const Tree& t, const AlgebraConfig& cfg);

/// (A M^ A (x) M^) Delta^+ = (I (x) Mult)(Delta^+ (x) I) Delta^M^ on H_0^+.
bool check_identity_antipode(const Tree& t, const AlgebraConfig& cfg);

/// Counit-style helper: apply Mult to a triple-expanded object.
/// (exposed for tests)
TensorComb apply_left_delta_then_merge(const TensorComb& dm, const AlgebraConfig& cfg);

}  // namespace wz::sym
