#pragma once

// Exact Laurent polynomials over Q in the vertical coordinate X = x_n and the
// 2-jet symbols of a sphere foliation. Coefficients are arbitrary precision.

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace folicurve::sym {

using BigRational = mpq_class;

/// Indeterminates in canonical order. SIG stands for the tangential radius
/// sum x_1^2 + ... + x_{n-1}^2 and NU for the dimension n.
enum class Var : std::uint8_t { X, KAP, KAP1, KAP2, RHO, RHO1, RHO2, SIG, NU };

inline constexpr std::size_t kVarCount = 9;
inline constexpr std::array<Var, kVarCount> kAllVars = {
    Var::X, Var::KAP, Var::KAP1, Var::KAP2, Var::RHO, Var::RHO1, Var::RHO2, Var::SIG, Var::NU};

std::string_view var_name(Var v) noexcept;
std::optional<Var> var_from_name(std::string_view name) noexcept;

using Exponents = std::array<int, kVarCount>;

/// Graded lexicographic order: total degree first, then exponents compared in
/// variable order X, KAP, ..., NU.
struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const noexcept;
};

class SymExpr {
public:
    using TermMap = std::map<Exponents, BigRational, GradedLex>;

    SymExpr() = default;
    SymExpr(long value);  // NOLINT(google-explicit-constructor)
    explicit SymExpr(BigRational value);

    static SymExpr var(Var v, int power = 1);
    /// Throws Error(InvalidArgument) if any variable other than X carries a
    /// negative exponent.
    static SymExpr monomial(const Exponents& exps, const BigRational& coeff);
    static SymExpr rational(long num, long den);

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    bool contains(Var v) const noexcept;
    /// Lowest / highest exponent of `v` across terms; 0 for the zero polynomial.
    int min_degree(Var v) const noexcept;
    int max_degree(Var v) const noexcept;

    SymExpr pow(unsigned exponent) const;

    SymExpr& operator+=(const SymExpr& rhs);
    SymExpr& operator-=(const SymExpr& rhs);
    SymExpr& operator*=(const SymExpr& rhs);

    friend SymExpr operator+(SymExpr a, const SymExpr& b) { return a += b; }
    friend SymExpr operator-(SymExpr a, const SymExpr& b) { return a -= b; }
    friend SymExpr operator*(const SymExpr& a, const SymExpr& b);
    friend SymExpr operator-(SymExpr a);
    friend bool operator==(const SymExpr& a, const SymExpr& b) { return a.terms_ == b.terms_; }

    /// Deterministic plain-text form, terms in descending graded-lex order,
    /// e.g. "2*X^2*KAP - 3/2*RHO + 1". The zero polynomial prints as "0".
    std::string to_string() const;

private:
    void add_term(const Exponents& exps, const BigRational& coeff);

    TermMap terms_;
};

SymExpr add(const SymExpr& a, const SymExpr& b);
SymExpr mul(const SymExpr& a, const SymExpr& b);

/// Formal partial derivative in one indeterminate, all others held fixed.
SymExpr partial(const SymExpr& p, Var v);
SymExpr d_dX(const SymExpr& p);

/// Formal d/dt with KAP -> KAP1 -> KAP2 and RHO -> RHO1 -> RHO2; X, SIG and NU
/// do not depend on t. Throws Error(JetOrderExceeded) when a term contains
/// KAP2 or RHO2.
SymExpr d_dt(const SymExpr& p);

/// Replace every occurrence of `v` by `value`. Substituting for X requires
/// nonnegative X exponents.
SymExpr substitute(const SymExpr& p, Var v, const SymExpr& value);

/// Rewrite `pattern` -> `replacement` in every term divisible by the monomial
/// `pattern`, repeating until no term is divisible. The pattern must have
/// nonnegative exponents and `replacement` must be free of the pattern's
/// leading factors, otherwise the rewrite need not terminate; a hard
/// iteration cap guards against that.
SymExpr rewrite_monomial(const SymExpr& p, const Exponents& pattern, const SymExpr& replacement);

/// Reduction modulo the leaf equation SIG + (X - KAP)^2 - RHO^2 = 0.
SymExpr reduce_level_set(const SymExpr& p);

/// Coefficient of v^d, free of v.
SymExpr coeff_of(const SymExpr& p, Var v, int d);
SymExpr coeff_of_X(const SymExpr& p, int d);

class Bindings {
public:
    Bindings() = default;
    Bindings(std::initializer_list<std::pair<Var, double>> init);

    Bindings& set(Var v, double value);
    std::optional<double> get(Var v) const noexcept;

private:
    std::array<std::optional<double>, kVarCount> values_{};
};

/// Floating-point evaluation; coefficients are converted to double at the
/// last step. Throws Error(MissingBinding) if a present variable is unbound,
/// Error(DomainError) for a nonpositive X when X has negative exponents.
double eval_numeric(const SymExpr& p, const Bindings& bindings);

// Shorthand constructors used throughout the identity code.
namespace vars {
inline SymExpr X() { return SymExpr::var(Var::X); }
inline SymExpr KAP() { return SymExpr::var(Var::KAP); }
inline SymExpr KAP1() { return SymExpr::var(Var::KAP1); }
inline SymExpr KAP2() { return SymExpr::var(Var::KAP2); }
inline SymExpr RHO() { return SymExpr::var(Var::RHO); }
inline SymExpr RHO1() { return SymExpr::var(Var::RHO1); }
inline SymExpr RHO2() { return SymExpr::var(Var::RHO2); }
inline SymExpr SIG() { return SymExpr::var(Var::SIG); }
inline SymExpr NU() { return SymExpr::var(Var::NU); }
}  // namespace vars

}  // namespace folicurve::sym
