#pragma once

// Closed-form expressions in one variable t, used for user-supplied k(t) and
// r(t). Trees are immutable and shared; differentiate() builds new trees with
// light constant folding and nothing else.

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "folicurve/error.hpp"
#include "folicurve/geometry.hpp"

namespace folicurve::expr {

enum class Func { Exp, Ln, Sin, Cos, Sinh, Cosh, Tanh, Sqrt };
enum class Constant { Pi, E };

std::string_view func_name(Func f) noexcept;

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { Number, Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind;
    mpq_class value;  // Number literal, or the exponent of Pow
    Constant constant = Constant::Pi;
    Func func = Func::Exp;
    Expr lhs;  // operand of Neg, Pow and Call; left side of binary nodes
    Expr rhs;
};

/// Parse failure with the byte offset of the offending token and the tokens
/// that would have been accepted there.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

Expr number(const mpq_class& v);
Expr constant(Constant c);
Expr variable();
Expr negate(Expr e);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr pow(Expr base, const mpq_class& exponent);
Expr call(Func f, Expr arg);

/// Grammar, loosest first:
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := '-' factor | base ('^' exponent)?
///   base   := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
///   exponent := ['-'] number | '(' ['-'] number ['/' number] ')'
/// so "-t^2" is -(t^2). Decimal literals are read exactly.
Expr parse(std::string_view text);

/// Text that parses back to the same tree.
std::string to_string(const Expr& e);

bool equal(const Expr& a, const Expr& b);

/// Exact d/dt, with folding of numeric subtrees and 0/1 identities.
Expr differentiate(const Expr& e);

/// Throws Error(DomainError) for ln of a nonpositive value, sqrt of a
/// negative value, division by zero and fractional powers of negative values.
double eval(const Expr& e, double t);

/// k, r and their derivatives through second order.
struct ProfileFunctions {
    Expr k, k1, k2, r, r1, r2;

    static ProfileFunctions from_text(std::string_view k_text, std::string_view r_text);

    FoliationJet jet(double t) const;
    geometry::ProfileCurves curves() const;
};

}  // namespace folicurve::expr
