#include "folicurve/symcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "folicurve/error.hpp"

namespace folicurve::sym {

namespace {

constexpr std::size_t idx(Var v) { return static_cast<std::size_t>(v); }

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

void check_exponents(const Exponents& e) {
    for (std::size_t i = 1; i < kVarCount; ++i) {
        if (e[i] < 0) {
            throw Error(ErrorKind::InvalidArgument,
                        "negative exponent on " + std::string(var_name(kAllVars[i])));
        }
    }
}

Exponents add_exps(const Exponents& a, const Exponents& b) {
    Exponents out{};
    for (std::size_t i = 0; i < kVarCount; ++i) out[i] = a[i] + b[i];
    return out;
}

}  // namespace

std::string_view var_name(Var v) noexcept {
    switch (v) {
        case Var::X: return "X";
        case Var::KAP: return "KAP";
        case Var::KAP1: return "KAP1";
        case Var::KAP2: return "KAP2";
        case Var::RHO: return "RHO";
        case Var::RHO1: return "RHO1";
        case Var::RHO2: return "RHO2";
        case Var::SIG: return "SIG";
        case Var::NU: return "NU";
    }
    return "?";
}

std::optional<Var> var_from_name(std::string_view name) noexcept {
    for (Var v : kAllVars) {
        if (var_name(v) == name) return v;
    }
    return std::nullopt;
}

bool GradedLex::operator()(const Exponents& a, const Exponents& b) const noexcept {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

SymExpr::SymExpr(long value) {
    if (value != 0) terms_.emplace(Exponents{}, BigRational(value));
}

SymExpr::SymExpr(BigRational value) {
    value.canonicalize();
    if (value != 0) terms_.emplace(Exponents{}, std::move(value));
}

SymExpr SymExpr::var(Var v, int power) {
    Exponents e{};
    e[idx(v)] = power;
    return monomial(e, BigRational(1));
}

SymExpr SymExpr::monomial(const Exponents& exps, const BigRational& coeff) {
    check_exponents(exps);
    SymExpr out;
    out.add_term(exps, coeff);
    return out;
}

SymExpr SymExpr::rational(long num, long den) {
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return SymExpr(q);
}

void SymExpr::add_term(const Exponents& exps, const BigRational& coeff) {
    BigRational c = coeff;
    c.canonicalize();
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exps, std::move(c));
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool SymExpr::contains(Var v) const noexcept {
    for (const auto& [e, c] : terms_) {
        if (e[idx(v)] != 0) return true;
    }
    return false;
}

int SymExpr::min_degree(Var v) const noexcept {
    if (terms_.empty()) return 0;
    int m = terms_.begin()->first[idx(v)];
    for (const auto& [e, c] : terms_) m = std::min(m, e[idx(v)]);
    return m;
}

int SymExpr::max_degree(Var v) const noexcept {
    if (terms_.empty()) return 0;
    int m = terms_.begin()->first[idx(v)];
    for (const auto& [e, c] : terms_) m = std::max(m, e[idx(v)]);
    return m;
}

SymExpr& SymExpr::operator+=(const SymExpr& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

SymExpr& SymExpr::operator-=(const SymExpr& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

SymExpr& SymExpr::operator*=(const SymExpr& rhs) {
    *this = *this * rhs;
    return *this;
}

SymExpr operator*(const SymExpr& a, const SymExpr& b) {
    SymExpr out;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            out.add_term(add_exps(ea, eb), ca * cb);
        }
    }
    return out;
}

SymExpr operator-(SymExpr a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
}

SymExpr SymExpr::pow(unsigned exponent) const {
    SymExpr result(1L);
    SymExpr base = *this;
    while (exponent > 0) {
        if (exponent & 1U) result = result * base;
        exponent >>= 1U;
        if (exponent > 0) base = base * base;
    }
    return result;
}

std::string SymExpr::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        const bool negative = c < 0;
        const BigRational mag = abs(c);
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;

        bool wrote = false;
        const bool is_constant = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
        if (mag != 1 || is_constant) {
            os << mag.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < kVarCount; ++i) {
            if (e[i] == 0) continue;
            if (wrote) os << '*';
            os << var_name(kAllVars[i]);
            if (e[i] != 1) os << '^' << e[i];
            wrote = true;
        }
    }
    return os.str();
}

SymExpr add(const SymExpr& a, const SymExpr& b) { return a + b; }
SymExpr mul(const SymExpr& a, const SymExpr& b) { return a * b; }

SymExpr partial(const SymExpr& p, Var v) {
    SymExpr out;
    const std::size_t i = idx(v);
    for (const auto& [e, c] : p.terms()) {
        if (e[i] == 0) continue;
        Exponents de = e;
        de[i] -= 1;
        // X may go negative here; every other variable stays >= 0.
        out += SymExpr::monomial(de, c * e[i]);
    }
    return out;
}

SymExpr d_dX(const SymExpr& p) { return partial(p, Var::X); }

SymExpr d_dt(const SymExpr& p) {
    if (p.contains(Var::KAP2) || p.contains(Var::RHO2)) {
        throw Error(ErrorKind::JetOrderExceeded,
                    "d/dt of a second-order jet symbol needs a third derivative");
    }
    using namespace vars;
    return partial(p, Var::KAP) * KAP1() + partial(p, Var::KAP1) * KAP2() +
           partial(p, Var::RHO) * RHO1() + partial(p, Var::RHO1) * RHO2();
}

SymExpr substitute(const SymExpr& p, Var v, const SymExpr& value) {
    const std::size_t i = idx(v);
    if (p.min_degree(v) < 0) {
        throw Error(ErrorKind::InvalidArgument, "cannot substitute for a Laurent variable");
    }
    std::map<int, SymExpr> powers;
    SymExpr out;
    for (const auto& [e, c] : p.terms()) {
        if (e[i] == 0) {
            out += SymExpr::monomial(e, c);
            continue;
        }
        auto it = powers.find(e[i]);
        if (it == powers.end()) {
            it = powers.emplace(e[i], value.pow(static_cast<unsigned>(e[i]))).first;
        }
        Exponents rest = e;
        rest[i] = 0;
        out += SymExpr::monomial(rest, c) * it->second;
    }
    return out;
}

SymExpr rewrite_monomial(const SymExpr& p, const Exponents& pattern, const SymExpr& replacement) {
    check_exponents(pattern);
    if (std::all_of(pattern.begin(), pattern.end(), [](int x) { return x == 0; })) {
        throw Error(ErrorKind::InvalidArgument, "rewrite pattern must be non-constant");
    }
    auto divisible = [&](const Exponents& e) {
        for (std::size_t i = 0; i < kVarCount; ++i) {
            if (pattern[i] > 0 && e[i] < pattern[i]) return false;
        }
        return true;
    };

    SymExpr current = p;
    constexpr int kMaxPasses = 1000;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        SymExpr next;
        bool changed = false;
        for (const auto& [e, c] : current.terms()) {
            if (!divisible(e)) {
                next += SymExpr::monomial(e, c);
                continue;
            }
            Exponents rest = e;
            for (std::size_t i = 0; i < kVarCount; ++i) rest[i] -= pattern[i];
            next += SymExpr::monomial(rest, c) * replacement;
            changed = true;
        }
        if (!changed) return next;
        current = std::move(next);
    }
    throw Error(ErrorKind::InvalidArgument, "monomial rewrite did not terminate");
}

SymExpr reduce_level_set(const SymExpr& p) {
    using namespace vars;
    const SymExpr shifted = X() - KAP();
    return substitute(p, Var::SIG, RHO() * RHO() - shifted * shifted);
}

SymExpr coeff_of(const SymExpr& p, Var v, int d) {
    const std::size_t i = idx(v);
    SymExpr out;
    for (const auto& [e, c] : p.terms()) {
        if (e[i] != d) continue;
        Exponents rest = e;
        rest[i] = 0;
        out += SymExpr::monomial(rest, c);
    }
    return out;
}

SymExpr coeff_of_X(const SymExpr& p, int d) { return coeff_of(p, Var::X, d); }

Bindings::Bindings(std::initializer_list<std::pair<Var, double>> init) {
    for (const auto& [v, x] : init) set(v, x);
}

Bindings& Bindings::set(Var v, double value) {
    values_[idx(v)] = value;
    return *this;
}

std::optional<double> Bindings::get(Var v) const noexcept { return values_[idx(v)]; }

double eval_numeric(const SymExpr& p, const Bindings& bindings) {
    std::array<double, kVarCount> value{};
    for (Var v : kAllVars) {
        if (!p.contains(v)) continue;
        const auto b = bindings.get(v);
        if (!b) {
            throw Error(ErrorKind::MissingBinding, "no value bound for " + std::string(var_name(v)));
        }
        value[idx(v)] = *b;
    }
    if (p.min_degree(Var::X) < 0 && value[idx(Var::X)] <= 0.0) {
        throw Error(ErrorKind::DomainError, "X must be positive for Laurent terms");
    }

    double sum = 0.0;
    for (const auto& [e, c] : p.terms()) {
        double term = c.get_d();
        for (std::size_t i = 0; i < kVarCount; ++i) {
            if (e[i] != 0) term *= std::pow(value[i], e[i]);
        }
        sum += term;
    }
    return sum;
}

}  // namespace folicurve::sym
