#include "wz/structure.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>
#include <sstream>

namespace wz::sym {

std::string LinComb::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        if (!first) os << " + ";
        if (c != Rational(1)) os << c.str() << "*";
        os << t.str();
        first = false;
    }
    return os.str();
}

std::string TensorComb::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        if (c != Rational(1)) os << c.str() << "*";
        os << k.first.str() << " (x) " << k.second.str();
        first = false;
    }
    return os.str();
}

void AlgebraConfig::validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("AlgebraConfig: d must be 1, 2 or 3");
    if (!(Rational(-18, 7) < alpha && alpha < Rational(-5, 2)))
        throw std::invalid_argument("AlgebraConfig: alpha outside (-18/7, -5/2)");
    // 4 alpha + 10 < -delta0 < 0
    if (!(Rational(0) < delta0 && Rational(4) * alpha + Rational(10) < -delta0))
        throw std::invalid_argument("AlgebraConfig: delta0 outside (0, -(4 alpha + 10))");
}

bool is_positive_tree(const Tree& t, const AlgebraConfig& cfg) {
    if (t.is_one()) return true;
    if (t.kind() == Kind::Prod) {
        for (const auto& f : t.factors())
            if (!cfg.hom_positive(f)) return false;
        return true;
    }
    return cfg.hom_positive(t);
}

LinComb p_plus(const LinComb& v, const AlgebraConfig& cfg) {
    LinComb out;
    for (const auto& [t, c] : v.terms())
        if (is_positive_tree(t, cfg)) out.add(t, c);
    return out;
}

LinComb lin_int(const MIdx& k, const LinComb& v) {
    LinComb out;
    for (const auto& [t, c] : v.terms()) {
        if (t.is_poly_or_one()) continue;  // I_k(X^l) is identified with 0
        out.add(tree_int(k, t), c);
    }
    return out;
}

namespace {

// Delta X^k as the k-fold product of X_i (x) 1 + 1 (x) X_i: the binomial sum.
TensorComb delta_poly(const MIdx& k) {
    TensorComb acc(tree_one(), tree_one());
    for (int i = 0; i < 4; ++i)
        for (int rep = 0; rep < k[i]; ++rep) {
            TensorComb primitive;
            primitive.add(tree_x(i), tree_one(), Rational(1));
            primitive.add(tree_one(), tree_x(i), Rational(1));
            acc = acc * primitive;
        }
    return acc;
}

}  // namespace

TensorComb delta(const Tree& t, const AlgebraConfig& cfg) {
    switch (t.kind()) {
        case Kind::One: return {tree_one(), tree_one()};
        case Kind::Noise: return {tree_noise(), tree_one()};
        case Kind::CSym: return {t, tree_one()};
        case Kind::Poly: return delta_poly(t.midx());
        case Kind::Prod: {
            TensorComb acc(tree_one(), tree_one());
            for (const auto& f : t.factors()) acc = acc * delta(f, cfg);
            return acc;
        }
        case Kind::Int: {
            const MIdx& k = t.midx();
            const Tree& arg = t.int_arg();
            TensorComb out;
            TensorComb inner = delta(arg, cfg);
            for (const auto& [pair, c] : inner.terms()) {
                if (pair.first.is_poly_or_one()) continue;  // I_k of polynomial -> 0
                out.add(tree_int(k, pair.first), pair.second, c);
            }
            // recentering sum: X^l/l! (x) X^m/m! P_+ I_{k+l+m}(arg)
            Rational arg_hom = cfg.hom_value(arg);
            // need |arg| + 2 - |k+l+m|_s > 0
            int budget = 0;
            {
                Rational room = arg_hom + Rational(2 - k.sdeg());
                if (room.sign() <= 0) return out;
                // largest integer strictly below room
                budget = (int)(room.num() / room.den());
                if (Rational(budget) == room) budget -= 1;
            }
            for (const auto& l : enumerate_midx(budget, cfg.d)) {
                for (const auto& m : enumerate_midx(budget - l.sdeg(), cfg.d)) {
                    MIdx klm = k + l + m;
                    Rational h = arg_hom + Rational(2 - klm.sdeg());
                    if (h.sign() <= 0) continue;
                    Tree right = tree_prod({tree_poly(m), tree_int(klm, arg)});
                    Rational coef =
                        Rational(1, l.factorial()) * Rational(1, m.factorial());
                    out.add(tree_poly(l), right, coef);
                }
            }
            return out;
        }
    }
    throw std::logic_error("delta: unreachable");
}

TensorComb delta_plus(const Tree& t, const AlgebraConfig& cfg) {
    switch (t.kind()) {
        case Kind::One: return {tree_one(), tree_one()};
        case Kind::Poly: return delta_poly(t.midx());
        case Kind::Prod: {
            TensorComb acc(tree_one(), tree_one());
            for (const auto& f : t.factors()) acc = acc * delta_plus(f, cfg);
            return acc;
        }
        case Kind::Int: {
            if (!cfg.hom_positive(t))
                throw std::invalid_argument("delta_plus: tree not in positive subspace: " +
                                            t.str());
            const MIdx& k = t.midx();
            const Tree& arg = t.int_arg();
            TensorComb out(tree_one(), t);
            TensorComb inner = delta(arg, cfg);
            Rational arg_hom = cfg.hom_value(arg);
            int budget;
            {
                Rational room = arg_hom + Rational(2 - k.sdeg());
                budget = (int)(room.num() / room.den());
                if (Rational(budget) == room) budget -= 1;
                if (budget < 0) return out;
            }
            for (const auto& l : enumerate_midx(budget, cfg.d)) {
                MIdx kl = k + l;
                Rational sign((l.order() % 2 == 0) ? 1 : -1, l.factorial());
                for (const auto& [pair, c] : inner.terms()) {
                    if (pair.first.is_poly_or_one()) continue;
                    Rational h = cfg.hom_value(pair.first) + Rational(2 - kl.sdeg());
                    if (h.sign() <= 0) continue;
                    Tree left = tree_int(kl, pair.first);
                    Tree right = tree_prod({tree_poly(l), pair.second});
                    out.add(left, right, c * sign);
                }
            }
            return out;
        }
        default:
            throw std::invalid_argument("delta_plus: tree not in positive subalgebra: " +
                                        t.str());
    }
}

Rational eval_character(const std::map<Tree, Rational>& g, const Tree& t) {
    switch (t.kind()) {
        case Kind::One: return Rational(1);
        case Kind::Prod: {
            Rational r(1);
            for (const auto& f : t.factors()) r *= eval_character(g, f);
            return r;
        }
        case Kind::Poly: {
            Rational r(1);
            for (int i = 0; i < 4; ++i)
                for (int rep = 0; rep < t.midx()[i]; ++rep) {
                    auto it = g.find(tree_x(i));
                    if (it == g.end())
                        throw std::out_of_range("character undefined on " + tree_x(i).str());
                    r *= it->second;
                }
            return r;
        }
        default: {
            auto it = g.find(t);
            if (it == g.end())
                throw std::out_of_range("character undefined on " + t.str());
            return it->second;
        }
    }
}

LinComb gamma_g(const std::map<Tree, Rational>& g, const Tree& t, const AlgebraConfig& cfg) {
    LinComb out;
    const TensorComb dt = delta(t, cfg);
    for (const auto& [pair, c] : dt.terms())
        out.add(pair.first, c * eval_character(g, pair.second));
    return out;
}

namespace {

using TreeSet = std::set<Tree>;

std::vector<Tree> poly_symbols(const AlgebraConfig& cfg) {
    std::vector<Tree> out;
    for (const auto& k : enumerate_midx(cfg.poly_cap, cfg.d)) out.push_back(tree_poly(k));
    return out;
}

bool within_cap(const Tree& t, const AlgebraConfig& cfg) {
    return !(cfg.hom_cap < cfg.hom_value(t));
}

}  // namespace

std::vector<Tree> generate_model_set(int n_max, const AlgebraConfig& cfg) {
    cfg.validate();
    if (n_max < 1) throw std::invalid_argument("generate_model_set: n_max >= 1 required");
    TreeSet W, U;
    TreeSet all;
    for (int n = 1; n <= n_max; ++n) {
        TreeSet Wn = W;
        Wn.insert(tree_noise());
        // products of at most three elements of U
        std::vector<Tree> u(U.begin(), U.end());
        for (size_t a = 0; a < u.size(); ++a) {
            if (within_cap(u[a], cfg)) Wn.insert(u[a]);
            for (size_t b = a; b < u.size(); ++b) {
                Tree p2 = tree_prod({u[a], u[b]});
                if (!p2.is_one() && within_cap(p2, cfg)) Wn.insert(p2);
                for (size_t c = b; c < u.size(); ++c) {
                    Tree p3 = tree_prod({u[a], u[b], u[c]});
                    if (!p3.is_one() && within_cap(p3, cfg)) Wn.insert(p3);
                }
            }
        }
        // polynomial caps can re-create 1 via X^0; drop it from W (it lives in U)
        Wn.erase(tree_one());
        TreeSet Un;
        for (const auto& p : poly_symbols(cfg)) Un.insert(p);
        for (const auto& w : Wn) {
            if (w.is_poly_or_one()) continue;
            Tree iw = tree_int(MIdx{}, w);
            if (within_cap(iw, cfg)) Un.insert(iw);
        }
        W = std::move(Wn);
        U = std::move(Un);
    }
    all.insert(W.begin(), W.end());
    all.insert(U.begin(), U.end());
    return std::vector<Tree>(all.begin(), all.end());
}

std::vector<Tree> negative_sector(const Rational& alpha_val, const AlgebraConfig& cfg,
                                  bool strict) {
    AlgebraConfig c = cfg;
    c.alpha = alpha_val;
    // keep the C-symbol weight admissible for this alpha; the sector itself
    // carries no C symbols, delta0 only enters the ordering
    Rational lim = -(Rational(4) * alpha_val + Rational(10));
    if (!(c.delta0 < lim)) c.delta0 = lim / Rational(2);
    c.validate();
    std::vector<Tree> gen = generate_model_set(3, c);
    std::vector<Tree> out;
    for (const auto& t : gen) {
        Rational h = c.hom_value(t);
        if (strict ? h.sign() < 0 : h.sign() <= 0) out.push_back(t);
    }
    std::sort(out.begin(), out.end(), [&](const Tree& a, const Tree& b) {
        Rational ha = c.hom_value(a), hb = c.hom_value(b);
        if (ha != hb) return ha < hb;
        return Tree::compare(a, b) < 0;
    });
    return out;
}

std::vector<Tree> f0_sector(const AlgebraConfig& cfg) {
    static std::mutex mu;
    static std::map<std::tuple<int, Rational, Rational>, std::vector<Tree>> cache;
    const auto key = std::make_tuple(cfg.d, cfg.alpha, cfg.delta0);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<Tree> out = negative_sector(cfg.alpha, cfg, false);
    Tree psi = tree_psi();
    out.push_back(tree_int(MIdx{}, tree_psi_pow(2)));
    out.push_back(tree_prod({tree_int(MIdx{}, psi), psi}));
    out.push_back(tree_prod({tree_int(MIdx{}, psi), tree_psi_pow(2)}));
    for (int i = 1; i <= cfg.d; ++i) out.push_back(tree_x(i));
    std::sort(out.begin(), out.end());
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, out);
    return out;
}

bool is_h0plus_basis(const Tree& t, const AlgebraConfig& cfg) {
    auto factor_ok = [&](const Tree& f) {
        if (f.kind() == Kind::Poly) return true;
        if (f.kind() != Kind::Int) return false;
        if (!cfg.hom_positive(f)) return false;
        const Tree& a = f.int_arg();
        for (int n = 1; n <= 3; ++n)
            if (a == tree_psi_pow(n)) return true;
        return false;
    };
    if (t.is_one()) return true;
    if (t.kind() == Kind::Prod) {
        for (const auto& f : t.factors())
            if (!factor_ok(f)) return false;
        return true;
    }
    return factor_ok(t);
}

}  // namespace wz::sym
