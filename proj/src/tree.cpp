#include "wz/tree.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace wz::sym {

namespace {

// Order pin for canonical sorting: homogeneity evaluated at the default
// parameters, then structural tie-breaks. Any fixed order works; this one
// keeps golden files stable and lists sectors by increasing singularity.
const Rational kOrderAlpha(-51, 20);
const Rational kOrderDelta0(1, 10);

std::shared_ptr<const TreeNode> make_node(TreeNode&& n) {
    return std::make_shared<const TreeNode>(std::move(n));
}

int kind_rank(Kind k) {
    switch (k) {
        case Kind::One: return 0;
        case Kind::Noise: return 1;
        case Kind::CSym: return 2;
        case Kind::Poly: return 3;
        case Kind::Int: return 4;
        case Kind::Prod: return 5;
    }
    return 6;
}

}  // namespace

Tree tree_one() {
    static const Tree t{make_node({Kind::One, MIdx{}, 0, {}, Hom{0, 0, 0}})};
    return t;
}

Tree tree_noise() {
    static const Tree t{make_node({Kind::Noise, MIdx{}, 0, {}, Hom{0, 1, 0}})};
    return t;
}

Tree tree_poly(const MIdx& k) {
    if (k.is_zero()) return tree_one();
    return Tree{make_node({Kind::Poly, k, 0, {}, Hom{k.sdeg(), 0, 0}})};
}

Tree tree_csym(int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("tree_csym: index must be 1 or 2");
    return Tree{make_node({Kind::CSym, MIdx{}, j, {}, Hom{0, 0, 1}})};
}

Tree tree_int(const MIdx& k, const Tree& arg) {
    if (arg.is_poly_or_one())
        throw std::invalid_argument("tree_int: I_k of a bare polynomial is excluded");
    Hom h = arg.hom();
    h.c0 += 2 - k.sdeg();
    return Tree{make_node({Kind::Int, k, 0, {arg}, h})};
}

Tree tree_prod(std::vector<Tree> factors) {
    std::vector<Tree> flat;
    MIdx poly_acc;
    bool have_poly = false;
    // flatten nested products, absorb units, accumulate polynomial exponents
    std::vector<Tree> stack(factors.rbegin(), factors.rend());
    while (!stack.empty()) {
        Tree f = stack.back();
        stack.pop_back();
        switch (f.kind()) {
            case Kind::One: break;
            case Kind::Prod:
                for (auto it = f.factors().rbegin(); it != f.factors().rend(); ++it)
                    stack.push_back(*it);
                break;
            case Kind::Poly:
                poly_acc = poly_acc + f.midx();
                have_poly = true;
                break;
            default: flat.push_back(f);
        }
    }
    if (have_poly && !poly_acc.is_zero()) flat.push_back(tree_poly(poly_acc));
    if (flat.empty()) return tree_one();
    if (flat.size() == 1) return flat[0];
    std::sort(flat.begin(), flat.end());
    Hom h{0, 0, 0};
    for (const auto& f : flat) h = h + f.hom();
    return Tree{make_node({Kind::Prod, MIdx{}, 0, std::move(flat), h})};
}

Tree tree_psi() { return tree_int(MIdx{}, tree_noise()); }

Tree tree_pow(const Tree& t, int n) {
    if (n < 0) throw std::invalid_argument("tree_pow: negative power");
    std::vector<Tree> f(n, t);
    return tree_prod(std::move(f));
}

Tree tree_psi_pow(int n) { return tree_pow(tree_psi(), n); }

bool Tree::equal(const Tree& a, const Tree& b) {
    if (a.p_ == b.p_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Kind::One:
        case Kind::Noise: return true;
        case Kind::Poly: return a.midx() == b.midx();
        case Kind::CSym: return a.csym_index() == b.csym_index();
        case Kind::Int: return a.midx() == b.midx() && equal(a.int_arg(), b.int_arg());
        case Kind::Prod: {
            if (a.factors().size() != b.factors().size()) return false;
            for (size_t i = 0; i < a.factors().size(); ++i)
                if (!equal(a.factors()[i], b.factors()[i])) return false;
            return true;
        }
    }
    return false;
}

int Tree::compare(const Tree& a, const Tree& b) {
    if (a.p_ == b.p_) return 0;
    Rational ha = a.hom().value(kOrderAlpha, kOrderDelta0);
    Rational hb = b.hom().value(kOrderAlpha, kOrderDelta0);
    if (ha < hb) return -1;
    if (hb < ha) return 1;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Kind::One:
        case Kind::Noise: return 0;
        case Kind::Poly: return a.midx() < b.midx() ? -1 : (b.midx() < a.midx() ? 1 : 0);
        case Kind::CSym: {
            int d = a.csym_index() - b.csym_index();
            return d < 0 ? -1 : (d > 0 ? 1 : 0);
        }
        case Kind::Int: {
            if (a.midx() != b.midx()) return a.midx() < b.midx() ? -1 : 1;
            return compare(a.int_arg(), b.int_arg());
        }
        case Kind::Prod: {
            size_t n = std::min(a.factors().size(), b.factors().size());
            for (size_t i = 0; i < n; ++i) {
                int c = compare(a.factors()[i], b.factors()[i]);
                if (c != 0) return c;
            }
            if (a.factors().size() != b.factors().size())
                return a.factors().size() < b.factors().size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

namespace {

void print_factor(std::ostream& os, const Tree& t);

void print_poly(std::ostream& os, const MIdx& k) {
    bool first = true;
    for (int i = 0; i < 4; ++i) {
        if (k[i] == 0) continue;
        if (!first) os << "*";
        os << "X" << i;
        if (k[i] > 1) os << "^" << k[i];
        first = false;
    }
    if (first) os << "1";
}

void print_tree(std::ostream& os, const Tree& t) {
    switch (t.kind()) {
        case Kind::One: os << "1"; break;
        case Kind::Noise: os << "Xi"; break;
        case Kind::Poly: print_poly(os, t.midx()); break;
        case Kind::CSym: os << "C" << t.csym_index(); break;
        case Kind::Int: {
            if (t.midx() == MIdx{} && t.int_arg().kind() == Kind::Noise) {
                os << "Psi";
                break;
            }
            os << "I";
            if (!t.midx().is_zero()) {
                if (t.midx().order() == 1) {
                    for (int i = 0; i < 4; ++i)
                        if (t.midx()[i] == 1) os << i;
                } else {
                    os << "{" << t.midx()[0] << "," << t.midx()[1] << "," << t.midx()[2]
                       << "," << t.midx()[3] << "}";
                }
            }
            os << "(";
            print_tree(os, t.int_arg());
            os << ")";
            break;
        }
        case Kind::Prod: {
            const auto& fs = t.factors();
            size_t i = 0;
            bool first = true;
            while (i < fs.size()) {
                size_t j = i;
                while (j < fs.size() && fs[j] == fs[i]) ++j;
                if (!first) os << "*";
                print_factor(os, fs[i]);
                if (j - i > 1) os << "^" << (j - i);
                first = false;
                i = j;
            }
            break;
        }
    }
}

void print_factor(std::ostream& os, const Tree& t) {
    // products never nest, polynomials self-delimit with '*', so no parens needed
    print_tree(os, t);
}

// ---- parser ------------------------------------------------------------

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("parse_tree: " + what + " at position " +
                                    std::to_string(pos) + " in '" + s + "'");
    }
    int parse_int() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        if (pos == start) fail("expected integer");
        return std::stoi(s.substr(start, pos - start));
    }

    Tree parse_product() {
        Tree t = parse_power();
        std::vector<Tree> fs{t};
        while (eat('*')) fs.push_back(parse_power());
        return fs.size() == 1 ? fs[0] : tree_prod(std::move(fs));
    }

    Tree parse_power() {
        Tree base = parse_atom();
        if (eat('^')) {
            int n = parse_int();
            if (n < 1) fail("power must be >= 1");
            return tree_pow(base, n);
        }
        return base;
    }

    Tree parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '1') { ++pos; return tree_one(); }
        if (c == 'X') {
            ++pos;
            if (pos < s.size() && s[pos] == 'i') { ++pos; return tree_noise(); }
            int i = parse_int();
            if (i < 0 || i > 3) fail("coordinate index out of range");
            return tree_x(i);
        }
        if (c == 'P') {
            if (s.compare(pos, 3, "Psi") == 0) { pos += 3; return tree_psi(); }
            fail("unknown symbol");
        }
        if (c == 'C') {
            ++pos;
            int j = parse_int();
            return tree_csym(j);
        }
        if (c == 'I') {
            ++pos;
            MIdx k;
            skip_ws();
            if (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                int i = s[pos] - '0';
                if (i > 3) fail("derivative index out of range");
                ++pos;
                k = MIdx::unit(i);
            } else if (pos < s.size() && s[pos] == '{') {
                ++pos;
                for (int i = 0; i < 4; ++i) {
                    k[i] = parse_int();
                    if (i < 3 && !eat(',')) fail("expected ','");
                }
                if (!eat('}')) fail("expected '}'");
            }
            if (!eat('(')) fail("expected '(' after I");
            Tree arg = parse_product();
            if (!eat(')')) fail("expected ')'");
            return tree_int(k, arg);
        }
        fail("unknown symbol");
    }
};

}  // namespace

std::string Tree::str() const {
    std::ostringstream os;
    print_tree(os, *this);
    return os.str();
}

Tree parse_tree(const std::string& text) {
    Parser p(text);
    Tree t = p.parse_product();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return t;
}

}  // namespace wz::sym
