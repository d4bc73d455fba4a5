#include "folicurve/exprlang.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace folicurve::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 8> kFunctions = {{
    {"exp", Func::Exp},
    {"ln", Func::Ln},
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"tanh", Func::Tanh},
    {"sqrt", Func::Sqrt},
}};

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

Expr make(Node node) { return std::make_shared<const Node>(std::move(node)); }

Expr make_binary(Node::Kind kind, Expr a, Expr b) {
    Node n{kind, {}, Constant::Pi, Func::Exp, std::move(a), std::move(b)};
    return make(std::move(n));
}

bool is_number(const Expr& e) { return e->kind == Node::Kind::Number; }
bool is_number(const Expr& e, long v) { return is_number(e) && e->value == v; }

}  // namespace

std::string_view func_name(Func f) noexcept {
    for (const auto& [name, func] : kFunctions) {
        if (func == f) return name;
    }
    return "?";
}

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorKind::ParseError, "at offset " + std::to_string(offset) + ": expected " +
                                       join(expected) + ", found " + found),
      offset_(offset),
      expected_(std::move(expected)) {}

// Raw constructors: parse() uses these so the tree mirrors the text.
namespace raw {

Expr number(const mpq_class& v) {
    Node n{Node::Kind::Number, v, Constant::Pi, Func::Exp, nullptr, nullptr};
    n.value.canonicalize();
    return make(std::move(n));
}

Expr unary(Node::Kind kind, Expr operand) {
    Node n{kind, {}, Constant::Pi, Func::Exp, std::move(operand), nullptr};
    return make(std::move(n));
}

Expr pow(Expr base, const mpq_class& exponent) {
    Node n{Node::Kind::Pow, exponent, Constant::Pi, Func::Exp, std::move(base), nullptr};
    n.value.canonicalize();
    return make(std::move(n));
}

Expr call(Func f, Expr arg) {
    Node n{Node::Kind::Call, {}, Constant::Pi, f, std::move(arg), nullptr};
    return make(std::move(n));
}

}  // namespace raw

Expr number(const mpq_class& v) { return raw::number(v); }

Expr constant(Constant c) {
    Node n{Node::Kind::Const, {}, c, Func::Exp, nullptr, nullptr};
    return make(std::move(n));
}

Expr variable() {
    static const Expr t = make(Node{Node::Kind::Var, {}, Constant::Pi, Func::Exp, nullptr, nullptr});
    return t;
}

Expr negate(Expr e) {
    if (is_number(e)) return raw::number(-e->value);
    if (e->kind == Node::Kind::Neg) return e->lhs;
    return raw::unary(Node::Kind::Neg, std::move(e));
}

Expr add(Expr a, Expr b) {
    if (is_number(a) && is_number(b)) return raw::number(a->value + b->value);
    if (is_number(a, 0)) return b;
    if (is_number(b, 0)) return a;
    return make_binary(Node::Kind::Add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
    if (is_number(a) && is_number(b)) return raw::number(a->value - b->value);
    if (is_number(b, 0)) return a;
    if (is_number(a, 0)) return negate(std::move(b));
    return make_binary(Node::Kind::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_number(a) && is_number(b)) return raw::number(a->value * b->value);
    if (is_number(b)) std::swap(a, b);
    if (is_number(a)) {
        if (a->value == 0) return a;
        if (a->value == 1) return b;
        if (a->value == -1) return negate(std::move(b));
        if (b->kind == Node::Kind::Mul && is_number(b->lhs)) {
            return mul(raw::number(a->value * b->lhs->value), b->rhs);
        }
    }
    return make_binary(Node::Kind::Mul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
    if (is_number(b) && b->value != 0) {
        if (is_number(a)) return raw::number(a->value / b->value);
        return mul(raw::number(1 / b->value), std::move(a));
    }
    if (is_number(a, 0)) return a;
    return make_binary(Node::Kind::Div, std::move(a), std::move(b));
}

Expr pow(Expr base, const mpq_class& exponent) {
    if (exponent == 0) return raw::number(1);
    if (exponent == 1) return base;
    if (is_number(base) && exponent.get_den() == 1 && base->value != 0) {
        mpq_class acc = 1;
        const long e = exponent.get_num().get_si();
        for (long i = 0; i < std::labs(e); ++i) acc *= base->value;
        return raw::number(e < 0 ? mpq_class(1 / acc) : acc);
    }
    return raw::pow(std::move(base), exponent);
}

Expr call(Func f, Expr arg) { return raw::call(f, std::move(arg)); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        Expr e = parse_expr();
        skip_space();
        if (pos_ < text_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        return e;
    }

private:
    static inline const std::vector<std::string> kOperand = {"number", "'t'", "constant",
                                                             "function", "'('", "'-'"};

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::string found = "end of input";
        if (pos_ < text_.size()) found = "'" + std::string(1, text_[pos_]) + "'";
        throw ParseError(pos_, std::move(expected), found);
    }

    void expect(char c) {
        if (!accept(c)) fail({std::string("'") + c + "'"});
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Node::Kind::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = make_binary(Node::Kind::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Node::Kind::Mul, lhs, parse_factor());
            } else if (accept('/')) {
                lhs = make_binary(Node::Kind::Div, lhs, parse_factor());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_factor() {
        if (accept('-')) return raw::unary(Node::Kind::Neg, parse_factor());
        Expr base = parse_base();
        if (accept('^')) return raw::pow(std::move(base), parse_exponent());
        return base;
    }

    mpq_class parse_exponent() {
        const bool grouped = accept('(');
        const bool negative = accept('-');
        if (!std::isdigit(static_cast<unsigned char>(peek())) && peek() != '.') {
            if (grouped || negative) fail({"number"});
            fail({"number", "'-'", "'('"});
        }
        mpq_class q = parse_number_literal();
        if (grouped) {
            if (accept('/')) {
                if (!std::isdigit(static_cast<unsigned char>(peek()))) fail({"number"});
                const std::size_t at = pos_;
                const mpq_class den = parse_number_literal();
                if (den == 0) {
                    pos_ = at;
                    fail({"nonzero number"});
                }
                q /= den;
            }
            expect(')');
        }
        return negative ? mpq_class(-q) : q;
    }

    // digits ['.' digits] | '.' digits, read exactly.
    mpq_class parse_number_literal() {
        skip_space();
        const std::size_t start = pos_;
        std::string digits;
        std::size_t frac = 0;
        bool point = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits += c;
                if (point) ++frac;
            } else if (c == '.' && !point) {
                point = true;
            } else {
                break;
            }
            ++pos_;
        }
        if (digits.empty() || (point && frac == 0)) {
            pos_ = start;
            fail({"number"});
        }
        mpz_class num(digits, 10);
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac; ++i) den *= 10;
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }

    Expr parse_base() {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return raw::number(parse_number_literal());
        }
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "t") return variable();
            if (name == "pi") return constant(Constant::Pi);
            if (name == "e") return constant(Constant::E);
            for (const auto& [fname, func] : kFunctions) {
                if (name == fname) {
                    expect('(');
                    Expr arg = parse_expr();
                    expect(')');
                    return raw::call(func, std::move(arg));
                }
            }
            pos_ = start;
            std::vector<std::string> expected = {"'t'", "'pi'", "'e'"};
            for (const auto& entry : kFunctions) expected.push_back(std::string(entry.first));
            throw ParseError(start, std::move(expected), "'" + std::string(name) + "'");
        }
        fail(kOperand);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (static_cast<unsigned char>(text[i]) > 127) {
            throw ParseError(i, {"ASCII character"}, "non-ASCII byte");
        }
    }
    return Parser(text).parse_all();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

// Exact decimal text for rationals whose denominator is 2^a 5^b.
bool decimal_text(const mpq_class& q, std::string& out) {
    mpz_class den = q.get_den();
    int twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1) return false;
    const int places = std::max(twos, fives);
    mpz_class scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const mpz_class scaled = abs(q.get_num()) * (scale / q.get_den());
    std::string digits = scaled.get_str();
    if (places > 0) {
        if (static_cast<int>(digits.size()) <= places) {
            digits.insert(0, places - digits.size() + 1, '0');
        }
        digits.insert(digits.size() - places, ".");
    }
    out = (q < 0 ? "-" : "") + digits;
    return true;
}

int precedence(const Expr& e) {
    switch (e->kind) {
        case Node::Kind::Add:
        case Node::Kind::Sub: return kSum;
        case Node::Kind::Mul:
        case Node::Kind::Div: return kProduct;
        case Node::Kind::Neg: return kUnary;
        case Node::Kind::Pow: return kPower;
        case Node::Kind::Number: {
            std::string text;
            if (!decimal_text(e->value, text)) return kProduct;
            return e->value < 0 ? kUnary : kAtom;
        }
        default: return kAtom;
    }
}

void print(const Expr& e, std::ostream& os);

void print_at(const Expr& e, int min_prec, std::ostream& os) {
    if (precedence(e) < min_prec) {
        os << '(';
        print(e, os);
        os << ')';
    } else {
        print(e, os);
    }
}

void print_exponent(const mpq_class& q, std::ostream& os) {
    std::string text;
    if (decimal_text(q, text)) {
        os << text;
    } else {
        os << '(' << q.get_num().get_str() << '/' << q.get_den().get_str() << ')';
    }
}

void print(const Expr& e, std::ostream& os) {
    switch (e->kind) {
        case Node::Kind::Number: {
            std::string text;
            if (decimal_text(e->value, text)) {
                os << text;
            } else {
                os << e->value.get_num().get_str() << '/' << e->value.get_den().get_str();
            }
            return;
        }
        case Node::Kind::Const: os << (e->constant == Constant::Pi ? "pi" : "e"); return;
        case Node::Kind::Var: os << 't'; return;
        case Node::Kind::Neg:
            os << '-';
            print_at(e->lhs, kUnary, os);
            return;
        case Node::Kind::Add:
        case Node::Kind::Sub:
            print_at(e->lhs, kSum, os);
            os << (e->kind == Node::Kind::Add ? " + " : " - ");
            print_at(e->rhs, kProduct, os);
            return;
        case Node::Kind::Mul:
        case Node::Kind::Div:
            print_at(e->lhs, kProduct, os);
            os << (e->kind == Node::Kind::Mul ? '*' : '/');
            print_at(e->rhs, kUnary, os);
            return;
        case Node::Kind::Pow:
            print_at(e->lhs, kAtom, os);
            os << '^';
            print_exponent(e->value, os);
            return;
        case Node::Kind::Call:
            os << func_name(e->func) << '(';
            print(e->lhs, os);
            os << ')';
            return;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(e, os);
    return os.str();
}

bool equal(const Expr& a, const Expr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Node::Kind::Number: return a->value == b->value;
        case Node::Kind::Const: return a->constant == b->constant;
        case Node::Kind::Var: return true;
        case Node::Kind::Neg: return equal(a->lhs, b->lhs);
        case Node::Kind::Pow: return a->value == b->value && equal(a->lhs, b->lhs);
        case Node::Kind::Call: return a->func == b->func && equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
    using K = Node::Kind;
    switch (e->kind) {
        case K::Number:
        case K::Const: return number(0);
        case K::Var: return number(1);
        case K::Neg: return negate(differentiate(e->lhs));
        case K::Add: return add(differentiate(e->lhs), differentiate(e->rhs));
        case K::Sub: return sub(differentiate(e->lhs), differentiate(e->rhs));
        case K::Mul:
            return add(mul(differentiate(e->lhs), e->rhs), mul(e->lhs, differentiate(e->rhs)));
        case K::Div: {
            const Expr& u = e->lhs;
            const Expr& v = e->rhs;
            Expr du = differentiate(u);
            Expr dv = differentiate(v);
            if (is_number(dv, 0)) return div(du, v);
            return div(sub(mul(du, v), mul(u, dv)), pow(v, 2));
        }
        case K::Pow: {
            const mpq_class q = e->value;
            return mul(number(q), mul(pow(e->lhs, q - 1), differentiate(e->lhs)));
        }
        case K::Call: {
            const Expr& u = e->lhs;
            Expr du = differentiate(u);
            if (is_number(du, 0)) return du;
            switch (e->func) {
                case Func::Exp: return mul(e, du);
                case Func::Ln: return div(du, u);
                case Func::Sin: return mul(call(Func::Cos, u), du);
                case Func::Cos: return negate(mul(call(Func::Sin, u), du));
                case Func::Sinh: return mul(call(Func::Cosh, u), du);
                case Func::Cosh: return mul(call(Func::Sinh, u), du);
                case Func::Tanh: return mul(sub(number(1), pow(e, 2)), du);
                case Func::Sqrt: return div(mul(number(mpq_class(1, 2)), du), e);
            }
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown expression node");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain(const std::string& what, double t) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at t = " << t;
    throw Error(ErrorKind::DomainError, os.str());
}

}  // namespace

double eval(const Expr& e, double t) {
    using K = Node::Kind;
    switch (e->kind) {
        case K::Number: return e->value.get_d();
        case K::Const: return e->constant == Constant::Pi ? std::numbers::pi : std::numbers::e;
        case K::Var: return t;
        case K::Neg: return -eval(e->lhs, t);
        case K::Add: return eval(e->lhs, t) + eval(e->rhs, t);
        case K::Sub: return eval(e->lhs, t) - eval(e->rhs, t);
        case K::Mul: return eval(e->lhs, t) * eval(e->rhs, t);
        case K::Div: {
            const double d = eval(e->rhs, t);
            if (d == 0.0) domain("division by zero", t);
            return eval(e->lhs, t) / d;
        }
        case K::Pow: {
            const double b = eval(e->lhs, t);
            const mpq_class& q = e->value;
            if (b == 0.0 && q < 0) domain("zero raised to a negative power", t);
            if (q.get_den() == 1) return std::pow(b, static_cast<double>(q.get_num().get_si()));
            if (b < 0.0) domain("fractional power of a negative value", t);
            return std::pow(b, q.get_d());
        }
        case K::Call: {
            const double u = eval(e->lhs, t);
            switch (e->func) {
                case Func::Exp: return std::exp(u);
                case Func::Ln:
                    if (!(u > 0.0)) domain("ln of a nonpositive value", t);
                    return std::log(u);
                case Func::Sin: return std::sin(u);
                case Func::Cos: return std::cos(u);
                case Func::Sinh: return std::sinh(u);
                case Func::Cosh: return std::cosh(u);
                case Func::Tanh: return std::tanh(u);
                case Func::Sqrt:
                    if (u < 0.0) domain("sqrt of a negative value", t);
                    return std::sqrt(u);
            }
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown expression node");
}

ProfileFunctions ProfileFunctions::from_text(std::string_view k_text, std::string_view r_text) {
    ProfileFunctions p;
    p.k = parse(k_text);
    p.r = parse(r_text);
    p.k1 = differentiate(p.k);
    p.k2 = differentiate(p.k1);
    p.r1 = differentiate(p.r);
    p.r2 = differentiate(p.r1);
    return p;
}

FoliationJet ProfileFunctions::jet(double t) const {
    return {t, eval(k, t), eval(k1, t), eval(k2, t), eval(r, t), eval(r1, t), eval(r2, t)};
}

geometry::ProfileCurves ProfileFunctions::curves() const {
    auto fn = [](Expr e) { return [e = std::move(e)](double t) { return eval(e, t); }; };
    return {fn(k), fn(k1), fn(k2), fn(r), fn(r1), fn(r2)};
}

}  // namespace folicurve::expr
