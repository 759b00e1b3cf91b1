#pragma once

#include <cavopt/error.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cavopt {

/// Number partition problem: positive integers p_1..p_n.
struct NppInstance {
    std::vector<std::int64_t> integers;

    std::size_t size() const noexcept { return integers.size(); }
};

/// Strict 3-SAT: m clauses over n variables, clause j is
/// (x[I[j][0]] ^ B[j][0]) v (x[I[j][1]] ^ B[j][1]) v (x[I[j][2]] ^ B[j][2])
/// with B bit 1 meaning a negated literal. Indices are 1-based and pairwise
/// distinct within a clause.
struct Sat3Instance {
    int n = 0;
    int m = 0;
    std::vector<std::array<int, 3>> I;
    std::vector<std::array<int, 3>> B;

    bool clause_satisfied(int j, const std::vector<int>& x) const {
        for (int t = 0; t < 3; ++t) {
            int v = x[static_cast<std::size_t>(I[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]) - 1];
            if ((v ^ B[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]) == 1) return true;
        }
        return false;
    }

    bool satisfied(const std::vector<int>& x) const {
        for (int j = 0; j < m; ++j)
            if (!clause_satisfied(j, x)) return false;
        return true;
    }
};

/// Vertex cover decision instance: graph + target cover size kappa.
struct VertexCoverInstance {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, stored (min,max)
    int kappa = 0;
};

/// QUBO / Ising couplings J_{ii'} on ordered pairs i < i', 1-based.
struct QuboInstance {
    int n = 0;
    std::map<std::pair<int, int>, double> couplings;

    /// E({s}) = sum_{i<i'} J_{ii'} s_i s_{i'} for s in {-1,+1}^n.
    double energy(const std::vector<int>& s) const {
        double e = 0.0;
        for (const auto& [pair, j] : couplings)
            e += j * s[static_cast<std::size_t>(pair.first) - 1] *
                 s[static_cast<std::size_t>(pair.second) - 1];
        return e;
    }
};

using ProblemInstance = std::variant<NppInstance, Sat3Instance, VertexCoverInstance, QuboInstance>;

enum class ProblemFormat { npp, dimacs_cnf, vertex_cover, qubo };

inline const char* format_name(ProblemFormat f) {
    switch (f) {
    case ProblemFormat::npp: return "npp";
    case ProblemFormat::dimacs_cnf: return "dimacs_cnf";
    case ProblemFormat::vertex_cover: return "vertex_cover";
    case ProblemFormat::qubo: return "qubo";
    }
    return "?";
}

inline ProblemFormat format_from_name(std::string_view s) {
    if (s == "npp") return ProblemFormat::npp;
    if (s == "dimacs_cnf" || s == "dimacs") return ProblemFormat::dimacs_cnf;
    if (s == "vertex_cover") return ProblemFormat::vertex_cover;
    if (s == "qubo") return ProblemFormat::qubo;
    throw Error(ErrorKind::Validation, "unknown format '" + std::string(s) + "'");
}

namespace detail {

/// Line-oriented tokenizer tracking line numbers for syntax errors.
class TokenStream {
public:
    explicit TokenStream(std::string_view text) : text_(text) {}

    /// Next whitespace-delimited token, or empty at end of input.
    std::string next() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Peek at the next token without consuming it.
    std::string peek() {
        std::size_t save_pos = pos_;
        int save_line = line_;
        std::string t = next();
        pos_ = save_pos;
        line_ = save_line;
        return t;
    }

    /// Skip the remainder of the current line (for comments).
    void skip_line() {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }

    int line() const noexcept { return line_; }
    bool at_end() { return peek().empty(); }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::Syntax, what + " (line " + std::to_string(line_) + ")");
    }

    long long next_int(const std::string& what) {
        std::string t = next();
        if (t.empty()) fail("unexpected end of input, expected " + what);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(t, &used);
        } catch (const std::exception&) {
            fail("expected integer " + what + ", got '" + t + "'");
        }
        if (used != t.size()) fail("expected integer " + what + ", got '" + t + "'");
        return v;
    }

    double next_double(const std::string& what) {
        std::string t = next();
        if (t.empty()) fail("unexpected end of input, expected " + what);
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            fail("expected number " + what + ", got '" + t + "'");
        }
        if (used != t.size()) fail("expected number " + what + ", got '" + t + "'");
        return v;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

[[noreturn]] inline void invalid(const std::string& what) {
    throw Error(ErrorKind::Validation, what);
}

inline NppInstance parse_npp(TokenStream& ts) {
    NppInstance inst;
    while (!ts.at_end()) {
        long long v = ts.next_int("set element");
        if (v < 1) invalid("NPP integers must be >= 1, got " + std::to_string(v));
        inst.integers.push_back(v);
    }
    if (inst.integers.empty()) invalid("NPP instance must contain at least one integer");
    return inst;
}

inline Sat3Instance parse_dimacs(TokenStream& ts) {
    Sat3Instance inst;
    bool header_seen = false;
    for (;;) {
        std::string t = ts.peek();
        if (t.empty()) ts.fail("missing 'p cnf' header");
        if (t == "c") {
            ts.skip_line();
            continue;
        }
        if (t == "p") {
            ts.next();
            std::string kind = ts.next();
            if (kind != "cnf") ts.fail("expected 'p cnf' header, got 'p " + kind + "'");
            long long n = ts.next_int("variable count");
            long long m = ts.next_int("clause count");
            if (n < 1) invalid("variable count must be >= 1");
            if (m < 0) invalid("clause count must be >= 0");
            inst.n = static_cast<int>(n);
            inst.m = static_cast<int>(m);
            header_seen = true;
            break;
        }
        ts.fail("unexpected token '" + t + "' before header");
    }
    (void)header_seen;

    std::vector<int> lits;
    int clauses_read = 0;
    while (!ts.at_end()) {
        std::string t = ts.peek();
        if (t == "c") {
            ts.next();
            ts.skip_line();
            continue;
        }
        long long lit = ts.next_int("literal");
        if (lit == 0) {
            if (lits.size() != 3)
                invalid("clause " + std::to_string(clauses_read + 1) + " has arity " +
                        std::to_string(lits.size()) + ", strict 3-SAT requires 3");
            std::array<int, 3> iv{}, bv{};
            for (int k = 0; k < 3; ++k) {
                iv[static_cast<std::size_t>(k)] = std::abs(lits[static_cast<std::size_t>(k)]);
                bv[static_cast<std::size_t>(k)] = lits[static_cast<std::size_t>(k)] < 0 ? 1 : 0;
            }
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b)
                    if (iv[static_cast<std::size_t>(a)] == iv[static_cast<std::size_t>(b)]) {
                        if (bv[static_cast<std::size_t>(a)] != bv[static_cast<std::size_t>(b)])
                            invalid("clause " + std::to_string(clauses_read + 1) +
                                    " is tautological (x and not-x)");
                        invalid("clause " + std::to_string(clauses_read + 1) +
                                " repeats variable " + std::to_string(iv[static_cast<std::size_t>(a)]));
                    }
            inst.I.push_back(iv);
            inst.B.push_back(bv);
            lits.clear();
            ++clauses_read;
            continue;
        }
        long long var = std::llabs(lit);
        if (var < 1 || var > inst.n)
            invalid("literal " + std::to_string(lit) + " out of range [1," +
                    std::to_string(inst.n) + "]");
        if (lits.size() >= 3)
            invalid("clause " + std::to_string(clauses_read + 1) +
                    " has arity > 3, strict 3-SAT requires 3");
        lits.push_back(static_cast<int>(lit));
    }
    if (!lits.empty()) ts.fail("last clause is not terminated by 0");
    if (clauses_read != inst.m)
        invalid("header declares " + std::to_string(inst.m) + " clauses but " +
                std::to_string(clauses_read) + " were given");
    return inst;
}

inline VertexCoverInstance parse_vertex_cover(TokenStream& ts) {
    VertexCoverInstance inst;
    long long n = ts.next_int("vertex count");
    long long m = ts.next_int("edge count");
    long long kappa = ts.next_int("kappa");
    if (n < 1) invalid("vertex count must be >= 1");
    if (m < 0) invalid("edge count must be >= 0");
    if (kappa < 0 || kappa > n) invalid("kappa must lie in [0,n]");
    inst.n = static_cast<int>(n);
    inst.kappa = static_cast<int>(kappa);
    std::set<std::pair<int, int>> seen;
    for (long long j = 0; j < m; ++j) {
        long long u = ts.next_int("edge endpoint");
        long long v = ts.next_int("edge endpoint");
        if (u < 1 || u > n || v < 1 || v > n)
            invalid("edge endpoint out of range [1," + std::to_string(n) + "]");
        if (u == v) invalid("self-loop at vertex " + std::to_string(u));
        auto e = std::minmax(static_cast<int>(u), static_cast<int>(v));
        if (!seen.insert({e.first, e.second}).second)
            invalid("duplicate edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ")");
        inst.edges.emplace_back(e.first, e.second);
    }
    if (!ts.at_end()) ts.fail("trailing input after declared edges");
    return inst;
}

inline QuboInstance parse_qubo(TokenStream& ts) {
    QuboInstance inst;
    long long n = ts.next_int("spin count");
    long long nnz = ts.next_int("coupling count");
    if (n < 1) invalid("spin count must be >= 1");
    if (nnz < 0) invalid("coupling count must be >= 0");
    inst.n = static_cast<int>(n);
    for (long long t = 0; t < nnz; ++t) {
        long long i = ts.next_int("coupling row");
        long long j = ts.next_int("coupling column");
        double val = ts.next_double("coupling value");
        if (i < 1 || i > n || j < 1 || j > n)
            invalid("coupling index out of range [1," + std::to_string(n) + "]");
        if (i >= j) invalid("couplings require i < i' (got " + std::to_string(i) + " >= " +
                            std::to_string(j) + ")");
        auto key = std::make_pair(static_cast<int>(i), static_cast<int>(j));
        if (!inst.couplings.emplace(key, val).second)
            invalid("duplicate coupling (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    if (!ts.at_end()) ts.fail("trailing input after declared couplings");
    return inst;
}

}  // namespace detail

/// Parse and validate one of the four input formats. Throws Error with kind
/// Syntax (malformed text, with line number) or Validation (range violation,
/// duplicate edge, repeated variable, tautological clause, arity != 3).
inline ProblemInstance parse_instance(ProblemFormat format, std::string_view text) {
    detail::TokenStream ts(text);
    switch (format) {
    case ProblemFormat::npp: return detail::parse_npp(ts);
    case ProblemFormat::dimacs_cnf: return detail::parse_dimacs(ts);
    case ProblemFormat::vertex_cover: return detail::parse_vertex_cover(ts);
    case ProblemFormat::qubo: return detail::parse_qubo(ts);
    }
    throw Error(ErrorKind::Validation, "unknown format");
}

inline std::string serialize_instance(const NppInstance& inst) {
    std::ostringstream os;
    for (std::size_t i = 0; i < inst.integers.size(); ++i)
        os << (i ? " " : "") << inst.integers[i];
    os << "\n";
    return os.str();
}

inline std::string serialize_instance(const Sat3Instance& inst) {
    std::ostringstream os;
    os << "p cnf " << inst.n << " " << inst.m << "\n";
    for (int j = 0; j < inst.m; ++j) {
        for (int t = 0; t < 3; ++t) {
            int v = inst.I[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
            os << (inst.B[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] ? -v : v) << " ";
        }
        os << "0\n";
    }
    return os.str();
}

inline std::string serialize_instance(const VertexCoverInstance& inst) {
    std::ostringstream os;
    os << inst.n << " " << inst.edges.size() << " " << inst.kappa << "\n";
    for (const auto& [u, v] : inst.edges) os << u << " " << v << "\n";
    return os.str();
}

inline std::string serialize_instance(const QuboInstance& inst) {
    std::ostringstream os;
    os << inst.n << " " << inst.couplings.size() << "\n";
    os.precision(17);
    for (const auto& [pair, j] : inst.couplings)
        os << pair.first << " " << pair.second << " " << j << "\n";
    return os.str();
}

inline std::string serialize_instance(const ProblemInstance& inst) {
    return std::visit([](const auto& i) { return serialize_instance(i); }, inst);
}

}  // namespace cavopt
