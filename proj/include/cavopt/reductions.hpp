#pragma once

#include <cavopt/error.hpp>
#include <cavopt/problems.hpp>
#include <cavopt/radicals.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cavopt {

/// Provenance and layout record attached to every compiled program. The index
/// maps make the y-vector layout explicit: 3-SAT programs order r as
/// (a_1..a_n, b_1..b_n, c_1..c_m, d_1..d_m); vertex-cover as (a_1..a_n,
/// b_1..b_m); QUBO embeds its constraint CNF through the 3-SAT layout with
/// pair variables first (row-major upper triangle), auxiliary variables after.
struct ProgramMeta {
    std::string source;  // "npp" | "sat3" | "vertex_cover" | "qubo"
    int source_n = 0;    // integers / variables / vertices / spins
    int source_m = 0;    // clauses / edges / couplings
    int kappa = 0;       // vertex cover target size
    int sat_n = 0;       // qubo: embedded CNF variable count (n-1)^2
    int sat_m = 0;       // qubo: embedded CNF clause count 4(n-1)(n-2)
    std::size_t atom_count = 0;
    long long overhead = 0;
    std::size_t cost_positions = 0;  // prefix of y carrying linear costs
    bool dummy_padding = false;      // single forced-zero slot (QUBO n=1)
    std::vector<std::pair<int, int>> pair_order;  // qubo: position k -> (i,i')
    // qubo plaquette documentation: {i, i', kind} with kind 0 = boundary
    // triangle (diagonal site fixed at b=+1), 1 = interior 4-site block.
    std::vector<std::array<int, 3>> plaquettes;
};

/// Intermediate representation of the subset-target optimization
/// min_y  sum_k linear_cost_k y_k + penalty * (sum_k y_k r_k - target)^2.
struct SubsetTargetProgram {
    std::vector<RadicalSum> r;
    RadicalSum target;
    std::vector<double> linear_cost;
    double penalty = 1.0;
    ProgramMeta meta;

    std::size_t size() const noexcept { return r.size(); }

    /// sum_k y_k r_k - target, exactly.
    RadicalSum residual(const std::vector<int>& y) const {
        RadicalSum acc;
        for (std::size_t k = 0; k < r.size(); ++k)
            if (y[k]) acc += r[k];
        acc -= target;
        return acc;
    }
};

namespace detail {

inline std::vector<std::uint64_t> squarefree_list(std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    std::uint64_t n = 0;
    while (out.size() < count) {
        ++n;
        if (is_squarefree(n)) out.push_back(n);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// NPP
// ---------------------------------------------------------------------------

/// Lift an NPP set to the IR. r_k = p_k, target = (sum p)/2, so the squared
/// residual over y is (imbalance/2)^2 and the lowered Hamiltonian reduces to
/// the pure quadratic form with zero fields.
inline SubsetTargetProgram encode_npp(const NppInstance& inst) {
    SubsetTargetProgram prog;
    RadicalSum total;
    for (std::int64_t p : inst.integers) {
        prog.r.push_back(RadicalSum::integer(Rational(p)));
        total.add_term(Rational(p), 1);
    }
    prog.target = radsum_combine(total, RadicalSum(), Rational(1, 2), Rational(0));
    prog.linear_cost.assign(prog.r.size(), 0.0);
    prog.penalty = 1.0;
    prog.meta.source = "npp";
    prog.meta.source_n = static_cast<int>(inst.integers.size());
    prog.meta.atom_count = inst.integers.size();
    prog.meta.overhead = 0;
    return prog;
}

// ---------------------------------------------------------------------------
// 3-SAT
// ---------------------------------------------------------------------------

inline SubsetTargetProgram encode_sat3(const Sat3Instance& inst) {
    const int n = inst.n;
    const int m = inst.m;
    const auto alphas = detail::squarefree_list(static_cast<std::size_t>(n + m));
    auto clause_alpha = [&](int j) { return alphas[static_cast<std::size_t>(j)]; };       // j in [0,m)
    auto var_alpha = [&](int i) { return alphas[static_cast<std::size_t>(m + i)]; };      // i in [0,n)

    SubsetTargetProgram prog;
    prog.r.resize(static_cast<std::size_t>(2 * n + 2 * m));

    // a_i / b_i: variable radical plus one clause radical per positive /
    // negative occurrence.
    for (int i = 0; i < n; ++i) {
        RadicalSum a = RadicalSum::sqrt_of(var_alpha(i));
        RadicalSum b = RadicalSum::sqrt_of(var_alpha(i));
        for (int j = 0; j < m; ++j) {
            for (int t = 0; t < 3; ++t) {
                if (inst.I[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] != i + 1) continue;
                if (inst.B[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] == 0)
                    a.add_term(Rational(1), clause_alpha(j));
                else
                    b.add_term(Rational(1), clause_alpha(j));
            }
        }
        prog.r[static_cast<std::size_t>(i)] = std::move(a);
        prog.r[static_cast<std::size_t>(n + i)] = std::move(b);
    }
    // c_j = d_j = sqrt(alpha_j)
    for (int j = 0; j < m; ++j) {
        prog.r[static_cast<std::size_t>(2 * n + j)] = RadicalSum::sqrt_of(clause_alpha(j));
        prog.r[static_cast<std::size_t>(2 * n + m + j)] = RadicalSum::sqrt_of(clause_alpha(j));
    }
    // T = sum_i sqrt(alpha_{m+i}) + 3 sum_j sqrt(alpha_j)
    for (int i = 0; i < n; ++i) prog.target.add_term(Rational(1), var_alpha(i));
    for (int j = 0; j < m; ++j) prog.target.add_term(Rational(3), clause_alpha(j));

    prog.linear_cost.assign(prog.r.size(), 0.0);
    prog.penalty = 1.0;
    prog.meta.source = "sat3";
    prog.meta.source_n = n;
    prog.meta.source_m = m;
    prog.meta.atom_count = static_cast<std::size_t>(2 * n + 2 * m);
    prog.meta.overhead = n + 2 * m;
    return prog;
}

/// x_i = y_i after verifying the exact subset-target equality.
inline std::vector<int> decode_sat3(const SubsetTargetProgram& prog, const std::vector<int>& y) {
    if (y.size() != prog.size())
        throw Error(ErrorKind::Validation, "y length does not match program");
    if (!prog.residual(y).is_zero())
        throw Error(ErrorKind::NotASolution, "sum_k y_k r_k != T (exact radical equality fails)");
    const int n = prog.meta.source_n;
    return std::vector<int>(y.begin(), y.begin() + n);
}

/// Constructive witness: a satisfying assignment x yields a y with
/// sum y_k r_k = T. Per clause, the slack pair (c_j, d_j) is set to (1,1),
/// (1,0), (0,0) for 1, 2, 3 true literals.
inline std::vector<int> witness_sat3(const Sat3Instance& inst, const std::vector<int>& x) {
    const int n = inst.n;
    const int m = inst.m;
    std::vector<int> y(static_cast<std::size_t>(2 * n + 2 * m), 0);
    for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(n + i)] = 1 - x[static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < m; ++j) {
        int true_literals = 0;
        for (int t = 0; t < 3; ++t) {
            int v = x[static_cast<std::size_t>(inst.I[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]) - 1];
            if ((v ^ inst.B[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]) == 1) ++true_literals;
        }
        if (true_literals == 0)
            throw Error(ErrorKind::NotSatisfying,
                        "clause " + std::to_string(j + 1) + " is false under x");
        y[static_cast<std::size_t>(2 * n + j)] = true_literals <= 2 ? 1 : 0;
        y[static_cast<std::size_t>(2 * n + m + j)] = true_literals <= 1 ? 1 : 0;
    }
    return y;
}

// ---------------------------------------------------------------------------
// Vertex cover
// ---------------------------------------------------------------------------

inline SubsetTargetProgram encode_vertex_cover(const VertexCoverInstance& inst) {
    const int n = inst.n;
    const int m = static_cast<int>(inst.edges.size());
    const auto alphas = detail::squarefree_list(static_cast<std::size_t>(m + 1));

    SubsetTargetProgram prog;
    prog.r.resize(static_cast<std::size_t>(n + m));
    for (int i = 0; i < n; ++i) {
        RadicalSum a = RadicalSum::sqrt_of(alphas[static_cast<std::size_t>(m)]);
        for (int j = 0; j < m; ++j) {
            const auto& e = inst.edges[static_cast<std::size_t>(j)];
            if (e.first == i + 1 || e.second == i + 1)
                a.add_term(Rational(1), alphas[static_cast<std::size_t>(j)]);
        }
        prog.r[static_cast<std::size_t>(i)] = std::move(a);
    }
    for (int j = 0; j < m; ++j)
        prog.r[static_cast<std::size_t>(n + j)] = RadicalSum::sqrt_of(alphas[static_cast<std::size_t>(j)]);

    prog.target.add_term(Rational(inst.kappa), alphas[static_cast<std::size_t>(m)]);
    for (int j = 0; j < m; ++j) prog.target.add_term(Rational(2), alphas[static_cast<std::size_t>(j)]);

    prog.linear_cost.assign(prog.r.size(), 0.0);
    prog.penalty = 1.0;
    prog.meta.source = "vertex_cover";
    prog.meta.source_n = n;
    prog.meta.source_m = m;
    prog.meta.kappa = inst.kappa;
    prog.meta.atom_count = static_cast<std::size_t>(n + m);
    prog.meta.overhead = m;
    return prog;
}

inline std::vector<int> decode_vertex_cover(const SubsetTargetProgram& prog,
                                            const std::vector<int>& y) {
    if (y.size() != prog.size())
        throw Error(ErrorKind::Validation, "y length does not match program");
    if (!prog.residual(y).is_zero())
        throw Error(ErrorKind::NotASolution, "sum_k y_k r_k != T (exact radical equality fails)");
    std::vector<int> cover;
    for (int i = 0; i < prog.meta.source_n; ++i)
        if (y[static_cast<std::size_t>(i)]) cover.push_back(i + 1);
    return cover;
}

// ---------------------------------------------------------------------------
// QUBO via parity encoding
// ---------------------------------------------------------------------------

/// One CNF clause as (variable indices, negation bits).
struct CnfClause {
    std::array<int, 3> vars;
    std::array<int, 3> negs;
};

/// Interior plaquette block: 8 clauses over {x1,x2,x3,x4,beta}, satisfiable
/// over beta exactly when x1^x2^x3^x4 = 0 (spin product +1).
inline std::vector<CnfClause> plaquette_clauses(int x1, int x2, int x3, int x4, int beta) {
    return {
        {{beta, x1, x2}, {0, 0, 0}}, {{beta, x1, x2}, {0, 1, 1}},
        {{beta, x3, x4}, {0, 0, 0}}, {{beta, x3, x4}, {0, 1, 1}},
        {{beta, x1, x2}, {1, 1, 0}}, {{beta, x1, x2}, {1, 0, 1}},
        {{beta, x3, x4}, {1, 1, 0}}, {{beta, x3, x4}, {1, 0, 1}},
    };
}

/// Boundary (diagonal-touching) plaquette block: the fourth site is the fixed
/// diagonal b=+1, leaving the triangle parity xa^xb^xc = 1. Emitted as the
/// 4-clause odd-XOR CNF plus 4 clauses defining beta = xa^xb, so every
/// constraint costs exactly one auxiliary variable and 8 clauses.
inline std::vector<CnfClause> triangle_parity_clauses(int xa, int xb, int xc, int beta) {
    return {
        {{xa, xb, xc}, {0, 0, 0}}, {{xa, xb, xc}, {0, 1, 1}},
        {{xa, xb, xc}, {1, 0, 1}}, {{xa, xb, xc}, {1, 1, 0}},
        {{beta, xa, xb}, {1, 0, 0}}, {{beta, xa, xb}, {1, 1, 1}},
        {{beta, xa, xb}, {0, 1, 0}}, {{beta, xa, xb}, {0, 0, 1}},
    };
}

/// 1-based y/SAT position of pair variable (i,i'), i < i', in row-major
/// upper-triangle order.
inline int pair_position(int n, int i, int ip) {
    return (i - 1) * (2 * n - i) / 2 + (ip - i);
}

/// The plaquette-constraint CNF for an n-spin QUBO: variables are the
/// n(n-1)/2 pair variables followed by one auxiliary per plaquette. Solutions
/// restricted to the pair variables are exactly the product-form
/// configurations b_{ii'} = s_i s_{i'}.
inline Sat3Instance qubo_constraint_cnf(int n, ProgramMeta* meta = nullptr) {
    const int npairs = n * (n - 1) / 2;
    const int nconstraints = (n - 1) * (n - 2) / 2;
    Sat3Instance cnf;
    cnf.n = npairs + nconstraints;  // = (n-1)^2
    cnf.m = 8 * nconstraints;       // = 4(n-1)(n-2)
    int beta = npairs;
    for (int i = 1; i <= n - 2; ++i) {
        for (int ip = i + 1; ip <= n - 1; ++ip) {
            ++beta;
            std::vector<CnfClause> block;
            if (ip == i + 1) {
                block = triangle_parity_clauses(pair_position(n, i, i + 1),
                                                pair_position(n, i, i + 2),
                                                pair_position(n, i + 1, i + 2), beta);
                if (meta) meta->plaquettes.push_back({i, ip, 0});
            } else {
                block = plaquette_clauses(pair_position(n, i, ip), pair_position(n, i, ip + 1),
                                          pair_position(n, i + 1, ip + 1),
                                          pair_position(n, i + 1, ip), beta);
                if (meta) meta->plaquettes.push_back({i, ip, 1});
            }
            for (const auto& c : block) {
                cnf.I.push_back(c.vars);
                cnf.B.push_back(c.negs);
            }
        }
    }
    return cnf;
}

inline double auto_penalty(const SubsetTargetProgram& prog, int cap = 24);

/// Encode an n-spin QUBO. M <= 0 requests auto_penalty (exact enumeration,
/// subject to its cap); an explicit M must be positive.
inline SubsetTargetProgram encode_qubo(const QuboInstance& inst,
                                       std::optional<double> M = std::nullopt) {
    const int n = inst.n;
    SubsetTargetProgram prog;
    prog.meta.source = "qubo";
    prog.meta.source_n = n;
    prog.meta.source_m = static_cast<int>(inst.couplings.size());

    if (n == 1) {
        // No pair variables at all; r may not be empty, so a single dummy
        // slot with target 0 forces y = 0.
        prog.r.push_back(RadicalSum::sqrt_of(1));
        prog.linear_cost.assign(1, 0.0);
        prog.penalty = 1.0;
        prog.meta.dummy_padding = true;
        prog.meta.atom_count = 0;
        prog.meta.overhead = -1;  // 2(n-1)(5n-9) - n at n = 1
        return prog;
    }

    Sat3Instance cnf = qubo_constraint_cnf(n, &prog.meta);
    SubsetTargetProgram sat = encode_sat3(cnf);
    prog.r = std::move(sat.r);
    prog.target = std::move(sat.target);
    prog.meta.sat_n = cnf.n;
    prog.meta.sat_m = cnf.m;
    prog.meta.atom_count = sat.meta.atom_count;  // 2(n' + m') = 2(n-1)(5n-9)
    prog.meta.overhead = static_cast<long long>(prog.meta.atom_count) - n;

    const int npairs = n * (n - 1) / 2;
    prog.meta.cost_positions = static_cast<std::size_t>(npairs);
    prog.linear_cost.assign(prog.r.size(), 0.0);
    for (int i = 1; i <= n; ++i) {
        for (int ip = i + 1; ip <= n; ++ip) {
            prog.meta.pair_order.emplace_back(i, ip);
            auto it = inst.couplings.find({i, ip});
            if (it != inst.couplings.end())
                prog.linear_cost[static_cast<std::size_t>(pair_position(n, i, ip)) - 1] = it->second;
        }
    }

    if (M.has_value()) {
        if (*M <= 0) throw Error(ErrorKind::InvalidPenalty, "penalty M must be positive");
        prog.penalty = *M;
    } else {
        prog.penalty = auto_penalty(prog);
    }
    return prog;
}

/// Parity decode: b_{ii'} = 2 y_{k(ii')} - 1, s_1 = +1, s_{i'} = b_{1,i'},
/// then every pair is checked for b_{ii'} = s_i s_{i'}.
inline std::vector<int> decode_qubo(const SubsetTargetProgram& prog, const std::vector<int>& y) {
    if (y.size() != prog.size())
        throw Error(ErrorKind::Validation, "y length does not match program");
    const int n = prog.meta.source_n;
    std::vector<int> s(static_cast<std::size_t>(n), 1);
    if (n == 1) return s;
    auto b = [&](int i, int ip) { return 2 * y[static_cast<std::size_t>(pair_position(n, i, ip)) - 1] - 1; };
    for (int ip = 2; ip <= n; ++ip) s[static_cast<std::size_t>(ip - 1)] = b(1, ip);
    std::string bad;
    for (int i = 1; i <= n; ++i)
        for (int ip = i + 1; ip <= n; ++ip)
            if (b(i, ip) != s[static_cast<std::size_t>(i - 1)] * s[static_cast<std::size_t>(ip - 1)]) {
                if (!bad.empty()) bad += ", ";
                bad += "(" + std::to_string(i) + "," + std::to_string(ip) + ")";
            }
    if (!bad.empty())
        throw Error(ErrorKind::ConstraintViolation,
                    "pair variables inconsistent with any spin assignment at " + bad +
                        " (penalty M too small or y not a ground state)");
    return s;
}

// ---------------------------------------------------------------------------
// Exact enumeration and the penalty weight
// ---------------------------------------------------------------------------

namespace detail {

/// Dense integer view of a program's radical system: coefficients of every
/// r_k and of the target over the union of radicals, scaled to integers by
/// the common denominator. Enables O(1)-per-flip Gray-code scans.
struct DenseRadicalSystem {
    std::vector<std::uint64_t> alphas;               // sorted radical basis
    std::vector<std::vector<std::pair<int, std::int64_t>>> rows;  // per k: (slot, coeff)
    std::vector<std::int64_t> target;                // dense target coefficients
    std::vector<double> sqrt_alpha;
    std::vector<double> row_value;                   // float value of each scaled r_k
    BigInt denominator = 1;

    static std::optional<DenseRadicalSystem> build(const SubsetTargetProgram& prog) {
        DenseRadicalSystem sys;
        std::set<std::uint64_t> alpha_set;
        for (const auto& rk : prog.r)
            for (const auto& [alpha, q] : rk.terms()) alpha_set.insert(alpha);
        for (const auto& [alpha, q] : prog.target.terms()) alpha_set.insert(alpha);
        sys.alphas.assign(alpha_set.begin(), alpha_set.end());

        BigInt den = 1;
        auto fold_denominator = [&](const RadicalSum& x) {
            for (const auto& [alpha, q] : x.terms())
                den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(q));
        };
        for (const auto& rk : prog.r) fold_denominator(rk);
        fold_denominator(prog.target);
        sys.denominator = den;

        auto slot_of = [&](std::uint64_t alpha) {
            return static_cast<int>(std::lower_bound(sys.alphas.begin(), sys.alphas.end(), alpha) -
                                    sys.alphas.begin());
        };
        const BigInt limit = BigInt(1) << 56;
        auto scaled = [&](const Rational& q) -> std::optional<std::int64_t> {
            BigInt v = boost::multiprecision::numerator(q) * (den / boost::multiprecision::denominator(q));
            if (v > limit || v < -limit) return std::nullopt;
            return v.convert_to<std::int64_t>();
        };
        for (const auto& rk : prog.r) {
            std::vector<std::pair<int, std::int64_t>> row;
            for (const auto& [alpha, q] : rk.terms()) {
                auto c = scaled(q);
                if (!c) return std::nullopt;
                row.emplace_back(slot_of(alpha), *c);
            }
            sys.rows.push_back(std::move(row));
        }
        sys.target.assign(sys.alphas.size(), 0);
        for (const auto& [alpha, q] : prog.target.terms()) {
            auto c = scaled(q);
            if (!c) return std::nullopt;
            sys.target[static_cast<std::size_t>(slot_of(alpha))] = *c;
        }
        sys.sqrt_alpha.resize(sys.alphas.size());
        for (std::size_t i = 0; i < sys.alphas.size(); ++i)
            sys.sqrt_alpha[i] = std::sqrt(static_cast<double>(sys.alphas[i]));
        sys.row_value.resize(sys.rows.size(), 0.0);
        for (std::size_t k = 0; k < sys.rows.size(); ++k)
            for (const auto& [slot, c] : sys.rows[k])
                sys.row_value[k] += static_cast<double>(c) * sys.sqrt_alpha[static_cast<std::size_t>(slot)];
        return sys;
    }
};

}  // namespace detail

/// All y (as bitmasks, bit k = y_k) with sum_k y_k r_k = T, by exhaustive
/// Gray-code enumeration with exact arithmetic. Throws TooLarge beyond cap.
inline std::vector<std::uint64_t> enumerate_exact_solutions(const SubsetTargetProgram& prog,
                                                            int cap = 24) {
    const std::size_t K = prog.size();
    if (K > static_cast<std::size_t>(cap))
        throw Error(ErrorKind::TooLarge,
                    "K = " + std::to_string(K) + " exceeds enumeration cap " + std::to_string(cap));
    std::vector<std::uint64_t> hits;

    auto dense = detail::DenseRadicalSystem::build(prog);
    if (dense) {
        std::vector<std::int64_t> vec(dense->alphas.size());
        int nonzero = 0;
        for (std::size_t i = 0; i < vec.size(); ++i) {
            vec[i] = -dense->target[i];
            if (vec[i] != 0) ++nonzero;
        }
        if (nonzero == 0) hits.push_back(0);
        const std::uint64_t total = 1ull << K;
        std::uint64_t gray = 0;
        for (std::uint64_t t = 1; t < total; ++t) {
            const int k = std::countr_zero(t);
            const std::uint64_t bit = 1ull << k;
            gray ^= bit;
            const std::int64_t sign = (gray & bit) ? 1 : -1;
            for (const auto& [slot, c] : dense->rows[static_cast<std::size_t>(k)]) {
                std::int64_t& cell = vec[static_cast<std::size_t>(slot)];
                const bool was = cell != 0;
                cell += sign * c;
                nonzero += static_cast<int>(cell != 0) - static_cast<int>(was);
            }
            if (nonzero == 0) hits.push_back(gray);
        }
    } else {
        RadicalSum acc = radsum_combine(prog.target, RadicalSum(), Rational(-1), Rational(0));
        if (acc.is_zero()) hits.push_back(0);
        const std::uint64_t total = 1ull << K;
        std::uint64_t gray = 0;
        for (std::uint64_t t = 1; t < total; ++t) {
            const int k = std::countr_zero(t);
            const std::uint64_t bit = 1ull << k;
            gray ^= bit;
            acc.add_scaled(prog.r[static_cast<std::size_t>(k)], Rational((gray & bit) ? 1 : -1));
            if (acc.is_zero()) hits.push_back(gray);
        }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

/// Smallest positive (sum y r - T)^2 over all y, then
/// M = (sum |linear_cost| + 1) / Delta. Exact zero detection; the squared
/// magnitude itself is evaluated in floating point.
inline double auto_penalty(const SubsetTargetProgram& prog, int cap) {
    const std::size_t K = prog.size();
    if (K > static_cast<std::size_t>(cap))
        throw Error(ErrorKind::TooLarge, "K = " + std::to_string(K) +
                                             " exceeds auto_penalty enumeration cap " +
                                             std::to_string(cap) + "; supply M explicitly");

    auto dense = detail::DenseRadicalSystem::build(prog);
    double best_abs = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    bool found = false;

    if (dense) {
        const double inv_den = 1.0 / dense->denominator.convert_to<double>();
        std::vector<std::int64_t> vec(dense->alphas.size());
        int nonzero = 0;
        double value = 0.0;
        for (std::size_t i = 0; i < vec.size(); ++i) {
            vec[i] = -dense->target[i];
            if (vec[i] != 0) ++nonzero;
            value -= static_cast<double>(dense->target[i]) * dense->sqrt_alpha[i];
        }
        auto consider = [&](std::uint64_t mask) {
            const double a = std::fabs(value);
            if (nonzero != 0 && a < best_abs) {
                best_abs = a;
                best_mask = mask;
                found = true;
            }
        };
        consider(0);
        const std::uint64_t total = 1ull << K;
        std::uint64_t gray = 0;
        for (std::uint64_t t = 1; t < total; ++t) {
            const int k = std::countr_zero(t);
            const std::uint64_t bit = 1ull << k;
            gray ^= bit;
            const std::int64_t sign = (gray & bit) ? 1 : -1;
            for (const auto& [slot, c] : dense->rows[static_cast<std::size_t>(k)]) {
                std::int64_t& cell = vec[static_cast<std::size_t>(slot)];
                const bool was = cell != 0;
                cell += sign * c;
                nonzero += static_cast<int>(cell != 0) - static_cast<int>(was);
            }
            value += static_cast<double>(sign) * dense->row_value[static_cast<std::size_t>(k)];
            consider(gray);
        }
        (void)inv_den;
    } else {
        RadicalSum acc = radsum_combine(prog.target, RadicalSum(), Rational(-1), Rational(0));
        const std::uint64_t total = 1ull << K;
        std::uint64_t gray = 0;
        auto consider = [&](std::uint64_t mask) {
            if (acc.is_zero()) return;
            const double a = std::fabs(acc.eval().value);
            if (a < best_abs) {
                best_abs = a;
                best_mask = mask;
                found = true;
            }
        };
        consider(0);
        for (std::uint64_t t = 1; t < total; ++t) {
            const int k = std::countr_zero(t);
            const std::uint64_t bit = 1ull << k;
            gray ^= bit;
            acc.add_scaled(prog.r[static_cast<std::size_t>(k)], Rational((gray & bit) ? 1 : -1));
            consider(gray);
        }
    }

    if (!found)
        throw Error(ErrorKind::Validation,
                    "every subset hits the target exactly; penalty weight is undefined");

    // Re-derive the winning residual exactly and take its certified value.
    std::vector<int> y(K, 0);
    for (std::size_t k = 0; k < K; ++k) y[k] = (best_mask >> k) & 1ull ? 1 : 0;
    const EvalResult res = prog.residual(y).eval();
    if (std::fabs(res.value) <= res.bound)
        throw Error(ErrorKind::Validation,
                    "minimum positive residual is indistinguishable from zero in floating point");
    const double delta = res.value * res.value;
    double cost_sum = 0.0;
    for (double c : prog.linear_cost) cost_sum += std::fabs(c);
    return (cost_sum + 1.0) / delta;
}

}  // namespace cavopt
