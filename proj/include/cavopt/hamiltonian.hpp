#pragma once

#include <cavopt/error.hpp>
#include <cavopt/radicals.hpp>
#include <cavopt/reductions.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cavopt {

/// Executable form of a compiled program:
///   E(m) = g4 * [ (sum_k lambda_k m_k + c_shift)^2
///                 + sum_k w_k m_k + sum_w ],   m_k = +-1,
/// equivalently g4 (sum lambda m)^2 + sum h m + offset with
/// h_k = g4 (2 c_shift lambda_k + w_k) and offset = g4 (c_shift^2 + sum_w).
/// The first form keeps the penalty square separable so exact residuals can
/// replace it; the second is the field/offset view used by the simulator.
struct CavityProgram {
    std::size_t N = 0;
    std::vector<double> lambda;  // per-atom weights, max = 1
    std::vector<double> h;       // per-atom sigma-x field
    std::vector<double> w;       // cost weights J_k / (2 M u^2), u = scale/2
    double g4 = 1.0;
    double delta_m = 0.0;        // sigma-z detuning at the start of the ramp
    double offset = 0.0;
    double scale = 1.0;          // r_max, for reconstructing physical energies
    double c_shift = 0.0;        // (sum r - 2T) / r_max
    double sum_w = 0.0;
    double penalty = 1.0;
    std::vector<RadicalSum> exact_r;
    RadicalSum exact_target;
    ProgramMeta meta;

    bool has_exact() const noexcept { return !exact_r.empty(); }
};

struct EnergyResult {
    double energy = 0.0;
    RadicalSum exact_residual;
};

struct GroundResult {
    double min_energy = 0.0;
    std::vector<std::uint64_t> optima;  // bit k set <=> m_k = +1
};

struct Placement {
    std::vector<double> positions;  // X_i in units of 1/Q, branch [0, pi/2]
};

/// Lower a program to the cavity Hamiltonian form. Weights are normalized by
/// r_max; NPP programs lower to the pure quadratic (c_shift, h, offset all
/// zero) since the imbalance objective carries no target of its own.
inline CavityProgram lower(const SubsetTargetProgram& prog, double g4) {
    if (g4 <= 0) throw Error(ErrorKind::Validation, "g4 must be positive");
    CavityProgram cp;
    cp.N = prog.size();
    cp.g4 = g4;
    cp.penalty = prog.penalty;
    cp.exact_r = prog.r;
    cp.exact_target = prog.target;
    cp.meta = prog.meta;

    std::vector<double> evals(cp.N);
    double r_max = 0.0;
    double sum_e = 0.0;
    for (std::size_t k = 0; k < cp.N; ++k) {
        const EvalResult e = prog.r[k].eval();
        if (e.value <= e.bound)
            throw Error(ErrorKind::NonPositiveWeight,
                        "r_" + std::to_string(k + 1) + " = " + prog.r[k].str() +
                            " is not strictly positive");
        evals[k] = e.value;
        sum_e += e.value;
        r_max = std::max(r_max, e.value);
    }
    cp.scale = r_max;
    const double u = r_max / 2.0;

    cp.lambda.resize(cp.N);
    for (std::size_t k = 0; k < cp.N; ++k) cp.lambda[k] = evals[k] / r_max;

    cp.w.assign(cp.N, 0.0);
    if (prog.meta.source == "npp") {
        cp.c_shift = 0.0;  // T = sum(r)/2 by construction
    } else {
        cp.c_shift = (sum_e - 2.0 * prog.target.eval().value) / r_max;
        for (std::size_t k = 0; k < cp.N; ++k)
            cp.w[k] = prog.linear_cost[k] / (2.0 * prog.penalty * u * u);
    }
    cp.sum_w = 0.0;
    for (double wk : cp.w) cp.sum_w += wk;

    cp.h.resize(cp.N);
    for (std::size_t k = 0; k < cp.N; ++k)
        cp.h[k] = g4 * (2.0 * cp.c_shift * cp.lambda[k] + cp.w[k]);
    cp.offset = g4 * (cp.c_shift * cp.c_shift + cp.sum_w);

    double sum_lambda = 0.0;
    double max_h = 0.0;
    for (std::size_t k = 0; k < cp.N; ++k) {
        sum_lambda += cp.lambda[k];
        max_h = std::max(max_h, std::fabs(cp.h[k]));
    }
    cp.delta_m = std::max(g4 * sum_lambda * sum_lambda, max_h);
    return cp;
}

namespace detail {

inline double energy_of_mask(const CavityProgram& cp, std::uint64_t plus_mask) {
    double x = 0.0;
    double wsum = 0.0;
    for (std::size_t k = 0; k < cp.N; ++k) {
        const double m = (plus_mask >> k) & 1ull ? 1.0 : -1.0;
        x += cp.lambda[k] * m;
        wsum += cp.w[k] * m;
    }
    const double d = x + cp.c_shift;
    return cp.g4 * (d * d + wsum + cp.sum_w);
}

inline RadicalSum exact_residual_of_mask(const CavityProgram& cp, std::uint64_t plus_mask) {
    RadicalSum res;
    for (std::size_t k = 0; k < cp.N; ++k)
        if ((plus_mask >> k) & 1ull) res += cp.exact_r[k];
    res -= cp.exact_target;
    return res;
}

}  // namespace detail

/// Float energy of a +-1 configuration plus, when exact radicals are
/// retained, the exact residual sum_{m_k = +1} r_k - T (zero iff m encodes an
/// exact solution).
inline EnergyResult classical_energy(const CavityProgram& cp, const std::vector<int>& m) {
    if (m.size() != cp.N) throw Error(ErrorKind::Validation, "m length does not match program");
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < cp.N; ++k)
        if (m[k] > 0) mask |= 1ull << k;
    EnergyResult out;
    out.energy = detail::energy_of_mask(cp, mask);
    if (cp.has_exact()) out.exact_residual = detail::exact_residual_of_mask(cp, mask);
    return out;
}

/// Exhaustive scan of all 2^N configurations. Gray-code incremental pass
/// finds the minimum; candidates within a small window are then re-evaluated
/// with fresh fixed-order sums and exact residuals, so penalty-free states
/// are never lost to float rounding and all ties are returned.
inline GroundResult brute_force_ground(const CavityProgram& cp, int cap = 24, int threads = 0) {
    if (cp.N > static_cast<std::size_t>(cap))
        throw Error(ErrorKind::TooLarge, "N = " + std::to_string(cp.N) +
                                             " exceeds brute-force cap " + std::to_string(cap));
    const std::uint64_t total = 1ull << cp.N;

    if (threads <= 0) {
        if (const char* env = std::getenv("CAVOPT_THREADS")) threads = std::atoi(env);
        if (threads <= 0) threads = 1;
    }
    threads = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), total));

    // Pass 1: minimum of the incremental energy, partitioned over disjoint
    // Gray-counter ranges.
    std::vector<double> local_min(static_cast<std::size_t>(threads),
                                  std::numeric_limits<double>::infinity());
    auto scan_min = [&](int worker) {
        const std::uint64_t begin = total * static_cast<std::uint64_t>(worker) /
                                    static_cast<std::uint64_t>(threads);
        const std::uint64_t end = total * (static_cast<std::uint64_t>(worker) + 1) /
                                  static_cast<std::uint64_t>(threads);
        if (begin >= end) return;
        std::uint64_t gray = begin ^ (begin >> 1);
        double x = cp.c_shift;
        double wsum = cp.sum_w;
        for (std::size_t k = 0; k < cp.N; ++k) {
            const double m = (gray >> k) & 1ull ? 1.0 : -1.0;
            x += cp.lambda[k] * m;
            wsum += cp.w[k] * m;
        }
        double best = cp.g4 * (x * x + wsum);
        for (std::uint64_t t = begin + 1; t < end; ++t) {
            const int k = std::countr_zero(t);
            const std::uint64_t bit = 1ull << k;
            gray ^= bit;
            const double sign = (gray & bit) ? 2.0 : -2.0;
            x += sign * cp.lambda[static_cast<std::size_t>(k)];
            wsum += sign * cp.w[static_cast<std::size_t>(k)];
            best = std::min(best, cp.g4 * (x * x + wsum));
        }
        local_min[static_cast<std::size_t>(worker)] = best;
    };
    if (threads == 1) {
        scan_min(0);
    } else {
        std::vector<std::thread> pool;
        for (int wkr = 0; wkr < threads; ++wkr) pool.emplace_back(scan_min, wkr);
        for (auto& th : pool) th.join();
    }
    double scan_best = std::numeric_limits<double>::infinity();
    for (double v : local_min) scan_best = std::min(scan_best, v);

    // Window for tie candidates: must dominate the incremental-sum drift a
    // 2^N-step Gray walk can accumulate, while staying far below the level
    // spacing of the lowered form. Candidates are re-evaluated exactly.
    double scale_e = cp.g4 * (1.0 + cp.c_shift * cp.c_shift);
    for (std::size_t k = 0; k < cp.N; ++k)
        scale_e += cp.g4 * (cp.lambda[k] + std::fabs(cp.w[k]));
    const double window = scale_e * std::max(1e-9, static_cast<double>(total) * 4e-15);

    // Pass 2: re-evaluate candidates deterministically.
    std::vector<std::uint64_t> candidates;
    {
        std::uint64_t gray = 0;
        double x = cp.c_shift - 0.0;
        double wsum = cp.sum_w;
        for (std::size_t k = 0; k < cp.N; ++k) {
            x -= cp.lambda[k];
            wsum -= cp.w[k];
        }
        if (cp.g4 * (x * x + wsum) <= scan_best + window) candidates.push_back(0);
        for (std::uint64_t t = 1; t < total; ++t) {
            const int k = std::countr_zero(t);
            const std::uint64_t bit = 1ull << k;
            gray ^= bit;
            const double sign = (gray & bit) ? 2.0 : -2.0;
            x += sign * cp.lambda[static_cast<std::size_t>(k)];
            wsum += sign * cp.w[static_cast<std::size_t>(k)];
            if (cp.g4 * (x * x + wsum) <= scan_best + window) candidates.push_back(gray);
        }
    }

    GroundResult out;
    out.min_energy = std::numeric_limits<double>::infinity();
    std::vector<double> refined(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const std::uint64_t mask = candidates[i];
        double e;
        if (cp.has_exact() && detail::exact_residual_of_mask(cp, mask).is_zero()) {
            double wsum = cp.sum_w;
            for (std::size_t k = 0; k < cp.N; ++k)
                wsum += cp.w[k] * ((mask >> k) & 1ull ? 1.0 : -1.0);
            e = cp.g4 * wsum;  // penalty part exactly zero
        } else {
            e = detail::energy_of_mask(cp, mask);
        }
        refined[i] = e;
        out.min_energy = std::min(out.min_energy, e);
    }
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (refined[i] == out.min_energy) out.optima.push_back(candidates[i]);
    std::sort(out.optima.begin(), out.optima.end());
    return out;
}

/// Tweezer placements X_i = arcsin(lambda_i)/Q realizing g_i = lambda_i g_0,
/// reported in units of 1/Q on the branch [0, pi/2].
inline Placement atom_positions(const CavityProgram& cp) {
    Placement p;
    p.positions.resize(cp.N);
    for (std::size_t k = 0; k < cp.N; ++k) {
        const double l = cp.lambda[k];
        if (!(l > 0.0) || l > 1.0)
            throw Error(ErrorKind::OutOfRange,
                        "lambda_" + std::to_string(k + 1) + " = " + std::to_string(l) +
                            " outside (0,1]");
        p.positions[k] = std::asin(l);
    }
    return p;
}

}  // namespace cavopt
