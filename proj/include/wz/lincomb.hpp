#pragma once

#include <map>
#include <string>
#include <utility>

#include "wz/rational.hpp"
#include "wz/tree.hpp"

namespace wz::sym {

/// Finite linear combination of canonical trees with exact rational
/// coefficients. Zero coefficients are dropped eagerly.
class LinComb {
  public:
    LinComb() = default;
    LinComb(const Tree& t, Rational c = Rational(1)) { add(t, c); }

    void add(const Tree& t, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(t, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    void add(const LinComb& o, const Rational& c = Rational(1)) {
        for (const auto& [t, v] : o.terms_) add(t, v * c);
    }

    friend LinComb operator+(LinComb a, const LinComb& b) { a.add(b); return a; }
    friend LinComb operator-(LinComb a, const LinComb& b) { a.add(b, Rational(-1)); return a; }
    friend LinComb operator*(const LinComb& a, const Rational& c) {
        LinComb r;
        for (const auto& [t, v] : a.terms_) r.add(t, v * c);
        return r;
    }
    /// product in the algebra: multiplies all tree pairs
    friend LinComb operator*(const LinComb& a, const LinComb& b) {
        LinComb r;
        for (const auto& [ta, va] : a.terms_)
            for (const auto& [tb, vb] : b.terms_) r.add(tree_prod({ta, tb}), va * vb);
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<Tree, Rational>& terms() const { return terms_; }
    Rational coeff(const Tree& t) const {
        auto it = terms_.find(t);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool operator==(const LinComb& o) const { return terms_ == o.terms_; }
    bool operator!=(const LinComb& o) const { return !(terms_ == o.terms_); }

    std::string str() const;

  private:
    std::map<Tree, Rational> terms_;
};

/// Element of H (x) H_+ with exact coefficients.
class TensorComb {
  public:
    TensorComb() = default;
    TensorComb(const Tree& l, const Tree& r, Rational c = Rational(1)) { add(l, r, c); }

    void add(const Tree& l, const Tree& r, const Rational& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(l, r);
        auto [it, inserted] = terms_.try_emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    void add(const TensorComb& o, const Rational& c = Rational(1)) {
        for (const auto& [k, v] : o.terms_) add(k.first, k.second, v * c);
    }
    /// add c * (u (x) v) expanding two linear combinations
    void add_tensor(const LinComb& u, const LinComb& v, const Rational& c = Rational(1)) {
        for (const auto& [tu, cu] : u.terms())
            for (const auto& [tv, cv] : v.terms()) add(tu, tv, cu * cv * c);
    }

    friend TensorComb operator+(TensorComb a, const TensorComb& b) { a.add(b); return a; }
    friend TensorComb operator-(TensorComb a, const TensorComb& b) {
        a.add(b, Rational(-1));
        return a;
    }
    /// componentwise product (a1 b1) (x) (a2 b2), used for multiplicative coproducts
    friend TensorComb operator*(const TensorComb& a, const TensorComb& b) {
        TensorComb r;
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_)
                r.add(tree_prod({ka.first, kb.first}), tree_prod({ka.second, kb.second}),
                      va * vb);
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<std::pair<Tree, Tree>, Rational>& terms() const { return terms_; }

    bool operator==(const TensorComb& o) const { return terms_ == o.terms_; }
    bool operator!=(const TensorComb& o) const { return !(terms_ == o.terms_); }

    std::string str() const;

  private:
    std::map<std::pair<Tree, Tree>, Rational> terms_;
};

}  // namespace wz::sym
