#pragma once

#include <cavopt/error.hpp>
#include <cavopt/rational.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace cavopt {

namespace detail {

/// Incrementally grown prime cache for squarefree tests. Thread-local so the
/// radicals API stays coordination-free.
inline std::vector<std::uint64_t>& prime_cache() {
    thread_local std::vector<std::uint64_t> primes{2, 3};
    return primes;
}

inline void extend_primes(std::uint64_t limit) {
    auto& primes = prime_cache();
    std::uint64_t candidate = primes.back() + 2;
    while (primes.back() < limit) {
        bool prime = true;
        for (std::uint64_t p : primes) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(candidate);
        candidate += 2;
    }
}

inline double ulp_of(double x) {
    double a = std::fabs(x);
    return std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
}

}  // namespace detail

/// True iff n has no squared prime factor. n = 0 is not squarefree by
/// convention (it never appears as a radicand).
inline bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    detail::extend_primes(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))) + 2);
    for (std::uint64_t p : detail::prime_cache()) {
        if (p * p > n) break;
        if (n % (p * p) == 0) return false;
    }
    return true;
}

/// The p-th squarefree integer, ascending, with nth_squarefree(1) = 1.
inline std::uint64_t nth_squarefree(std::uint64_t p) {
    if (p < 1) throw Error(ErrorKind::OutOfRange, "nth_squarefree requires p >= 1");
    std::uint64_t count = 0;
    std::uint64_t n = 0;
    while (count < p) {
        ++n;
        if (is_squarefree(n)) ++count;
    }
    return n;
}

/// Double value of an exact quantity together with a rigorous absolute error
/// bound on the evaluation.
struct EvalResult {
    double value = 0.0;
    double bound = 0.0;
};

/// Exact number of the form sum_alpha q_alpha * sqrt(alpha) over squarefree
/// positive integers alpha with rational coefficients. Canonical form: every
/// key squarefree, no zero coefficients. Equality of term maps is equality of
/// the denoted reals (linear independence of square roots of distinct
/// squarefree integers over Q).
class RadicalSum {
public:
    using TermMap = std::map<std::uint64_t, Rational>;

    RadicalSum() = default;

    /// q * sqrt(radicand); the radicand need not be squarefree (sqrt(8) is
    /// canonicalized to 2*sqrt(2)). radicand = 0 yields the zero sum.
    static RadicalSum term(Rational q, std::uint64_t radicand) {
        RadicalSum r;
        r.add_term(std::move(q), radicand);
        return r;
    }

    static RadicalSum integer(Rational q) { return term(std::move(q), 1); }

    static RadicalSum sqrt_of(std::uint64_t radicand) { return term(Rational(1), radicand); }

    /// Adds q * sqrt(radicand) in place, canonicalizing the radicand and
    /// dropping the entry if the coefficient cancels to zero.
    void add_term(Rational q, std::uint64_t radicand) {
        if (q == 0 || radicand == 0) return;
        auto [square_root, squarefree] = split_square(radicand);
        Rational coeff = std::move(q) * Rational(square_root);
        auto it = terms_.find(squarefree);
        if (it == terms_.end()) {
            terms_.emplace(squarefree, std::move(coeff));
        } else {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    void add_scaled(const RadicalSum& other, const Rational& s) {
        if (s == 0) return;
        for (const auto& [alpha, q] : other.terms_) {
            auto it = terms_.find(alpha);
            if (it == terms_.end()) {
                terms_.emplace(alpha, s * q);
            } else {
                it->second += s * q;
                if (it->second == 0) terms_.erase(it);
            }
        }
    }

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    bool operator==(const RadicalSum& other) const { return terms_ == other.terms_; }
    bool operator!=(const RadicalSum& other) const { return !(*this == other); }

    RadicalSum& operator+=(const RadicalSum& other) {
        add_scaled(other, Rational(1));
        return *this;
    }
    RadicalSum& operator-=(const RadicalSum& other) {
        add_scaled(other, Rational(-1));
        return *this;
    }
    friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) { return a += b; }
    friend RadicalSum operator-(RadicalSum a, const RadicalSum& b) { return a -= b; }

    friend RadicalSum operator*(const Rational& s, const RadicalSum& a) {
        RadicalSum r;
        r.add_scaled(a, s);
        return r;
    }

    /// Double value with rigorous absolute error bound. Terms are accumulated
    /// in ascending-alpha order so reports are bit-reproducible; the bound
    /// grows by 4 ulp of the running magnitude per term.
    EvalResult eval() const {
        EvalResult r;
        for (const auto& [alpha, q] : terms_) {
            double t = to_double(q) * std::sqrt(static_cast<double>(alpha));
            r.value += t;
            r.bound += 4.0 * detail::ulp_of(std::max(std::fabs(r.value), std::fabs(t)));
        }
        return r;
    }

    /// Textual form "q*sqrt(a) + ..." with ascending alpha; "0" when empty.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [alpha, q] : terms_) {
            Rational coeff = q;
            if (first) {
                if (coeff < 0) {
                    os << "-";
                    coeff = -coeff;
                }
            } else {
                os << (coeff < 0 ? " - " : " + ");
                if (coeff < 0) coeff = -coeff;
            }
            os << to_string(coeff) << "*sqrt(" << alpha << ")";
            first = false;
        }
        return os.str();
    }

private:
    /// radicand = s^2 * f with f squarefree; returns (s, f).
    static std::pair<std::uint64_t, std::uint64_t> split_square(std::uint64_t radicand) {
        std::uint64_t s = 1;
        std::uint64_t f = 1;
        std::uint64_t rest = radicand;
        detail::extend_primes(
            static_cast<std::uint64_t>(std::sqrt(static_cast<double>(radicand))) + 2);
        for (std::uint64_t p : detail::prime_cache()) {
            if (p * p > rest) break;
            unsigned exp = 0;
            while (rest % p == 0) {
                rest /= p;
                ++exp;
            }
            for (unsigned i = 0; i + 1 < exp; i += 2) s *= p;
            if (exp % 2 == 1) f *= p;
        }
        f *= rest;  // leftover prime > sqrt(original rest)
        return {s, f};
    }

    TermMap terms_;
};

/// s*a + t*b in canonical form.
inline RadicalSum radsum_combine(const RadicalSum& a, const RadicalSum& b, const Rational& s,
                                 const Rational& t) {
    RadicalSum r;
    r.add_scaled(a, s);
    r.add_scaled(b, t);
    return r;
}

/// Exact equality of the denoted reals.
inline bool radsum_equals(const RadicalSum& a, const RadicalSum& b) { return a == b; }

inline EvalResult radsum_eval(const RadicalSum& a) { return a.eval(); }

}  // namespace cavopt
