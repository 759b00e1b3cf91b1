#pragma once

#include <cavopt/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cavopt {

/// Physical drive/cavity parameters. All frequencies are angular and share
/// one unit; no unit inference is performed.
struct PhysicalParams {
    double g0 = 0.0;       // single-photon coupling (anti-node Rabi = 2 g0)
    double Omega1 = 0.0;   // side beam coupling |down> -> |e>
    double Omega2 = 0.0;   // side beam coupling |up>   -> |e>
    double Delta = 0.0;    // single-photon detuning of |down>
    double Delta_F = 0.0;  // hyperfine splitting
    double delta = 0.0;    // two-photon (cavity) detuning
    double delta_m = 0.0;  // bare qubit detuning knob
    double kappa = 0.0;    // cavity linewidth
    double Gamma = 0.0;    // excited-state linewidth
    std::optional<double> eta_side;
    int N_atoms = 1;

    double eta() const { return 4.0 * g0 * g0 / (Gamma * kappa); }
};

/// Regime diagnostics: the balanced-Raman condition and the perturbative
/// hierarchies the effective model relies on.
struct ParamFlags {
    double raman_ratio_error = 0.0;  // |Omega1/Omega2 - (Delta+Delta_F)/Delta|, relative
    double omega_over_delta = 0.0;   // max|Omega|/|Delta|
    double g0_over_delta = 0.0;      // |g0|/|Delta|
    double gr_over_delta2 = 0.0;     // |g_R|/|delta|
    bool balanced = false;
    bool hierarchy_ok = false;
};

struct EffectiveParams {
    double g_R1 = 0.0;
    double g_R2 = 0.0;
    double delta_m_tilde = 0.0;
    bool balanced = false;
    std::optional<double> g4;  // set only when balanced
};

/// Two-photon couplings, the AC-Stark shifted qubit splitting, and (when the
/// Raman ratio is balanced) the four-photon strength g4 = -g_R^2/delta.
inline EffectiveParams effective_params(const PhysicalParams& p, double balance_tol = 1e-6) {
    if (p.Delta == 0 || p.Delta + p.Delta_F == 0 || p.delta == 0)
        throw Error(ErrorKind::Validation, "Delta, Delta+Delta_F and delta must be nonzero");
    EffectiveParams out;
    out.g_R1 = p.Omega1 * p.g0 / (2.0 * (p.Delta + p.Delta_F));
    out.g_R2 = p.Omega2 * p.g0 / (2.0 * p.Delta);
    // 2 delta_m_tilde = delta_m/2 + Omega2^2/(4 Delta) - Omega1^2/(4 (Delta+Delta_F))
    out.delta_m_tilde = p.delta_m / 4.0 + p.Omega2 * p.Omega2 / (8.0 * p.Delta) -
                        p.Omega1 * p.Omega1 / (8.0 * (p.Delta + p.Delta_F));
    const double want = p.Omega2 * (p.Delta + p.Delta_F);
    const double have = p.Omega1 * p.Delta;
    out.balanced = std::fabs(have - want) <= balance_tol * std::max(std::fabs(want), 1e-300);
    if (out.balanced) {
        const double g_r = out.g_R1;
        out.g4 = -g_r * g_r / p.delta;
    }
    return out;
}

/// g4 for a balanced drive; throws Unbalanced (reporting both couplings)
/// otherwise.
inline double required_g4(const PhysicalParams& p, double balance_tol = 1e-6) {
    const EffectiveParams e = effective_params(p, balance_tol);
    if (!e.g4)
        throw Error(ErrorKind::Unbalanced,
                    "Raman ratio condition fails: g_R1 = " + std::to_string(e.g_R1) +
                        ", g_R2 = " + std::to_string(e.g_R2) + "; g4 undefined");
    return *e.g4;
}

inline ParamFlags param_flags(const PhysicalParams& p, double balance_tol = 1e-6,
                              double hierarchy_tol = 0.1) {
    ParamFlags f;
    const double want = (p.Delta + p.Delta_F) / p.Delta;
    f.raman_ratio_error = p.Omega2 != 0
                              ? std::fabs(p.Omega1 / p.Omega2 - want) / std::max(std::fabs(want), 1e-300)
                              : 0.0;
    f.balanced = f.raman_ratio_error <= balance_tol;
    f.omega_over_delta = std::max(std::fabs(p.Omega1), std::fabs(p.Omega2)) / std::fabs(p.Delta);
    f.g0_over_delta = std::fabs(p.g0) / std::fabs(p.Delta);
    const EffectiveParams e = effective_params(p);
    f.gr_over_delta2 = std::max(std::fabs(e.g_R1), std::fabs(e.g_R2)) / std::fabs(p.delta);
    f.hierarchy_ok = f.omega_over_delta < hierarchy_tol && f.g0_over_delta < hierarchy_tol &&
                     f.gr_over_delta2 < hierarchy_tol;
    return f;
}

/// Truncated-Fock model of the detuned Raman Hamiltonian:
///   H = delta a^dag a + delta_m_tilde sum sigma_z
///     + sum_i lambda_i [ (g_R1 a + g_R2 a^dag) |down>_i<up| + h.c. ].
/// Basis index = ph * 2^N + spin, spin bit set = |up>. delta_m_tilde is an
/// explicit knob so spectral comparisons can isolate the four-photon term.
inline Eigen::MatrixXd build_full_model(const PhysicalParams& p,
                                        const std::vector<double>& lambda, int n_ph,
                                        double delta_m_tilde = 0.0, int n_cap = 4,
                                        int ph_cap = 8) {
    const int n = static_cast<int>(lambda.size());
    if (n > n_cap || n_ph > ph_cap)
        throw Error(ErrorKind::CapExceeded,
                    "full model capped at N <= " + std::to_string(n_cap) +
                        ", n_ph <= " + std::to_string(ph_cap));
    const EffectiveParams eff = effective_params(p);
    const std::size_t spin_dim = 1ull << n;
    const std::size_t dim = spin_dim * static_cast<std::size_t>(n_ph + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    auto idx = [&](int ph, std::size_t spin) {
        return static_cast<Eigen::Index>(static_cast<std::size_t>(ph) * spin_dim + spin);
    };
    for (int ph = 0; ph <= n_ph; ++ph) {
        for (std::size_t spin = 0; spin < spin_dim; ++spin) {
            H(idx(ph, spin), idx(ph, spin)) +=
                p.delta * ph + delta_m_tilde * static_cast<double>(2 * std::popcount(spin) - n);
            for (int i = 0; i < n; ++i) {
                if (!((spin >> i) & 1ull)) continue;  // |down><up| needs |up>_i
                const std::size_t lowered = spin & ~(1ull << i);
                if (ph >= 1) {
                    const double c = lambda[static_cast<std::size_t>(i)] * eff.g_R1 *
                                     std::sqrt(static_cast<double>(ph));
                    H(idx(ph - 1, lowered), idx(ph, spin)) += c;
                    H(idx(ph, spin), idx(ph - 1, lowered)) += c;
                }
                if (ph + 1 <= n_ph) {
                    const double c = lambda[static_cast<std::size_t>(i)] * eff.g_R2 *
                                     std::sqrt(static_cast<double>(ph + 1));
                    H(idx(ph + 1, lowered), idx(ph, spin)) += c;
                    H(idx(ph, spin), idx(ph + 1, lowered)) += c;
                }
            }
        }
    }
    return H;
}

struct SpectralComparison {
    double g4_theory = 0.0;
    double g4_fit = 0.0;
    double max_abs_dev = 0.0;
    double max_rel_dev = 0.0;
    double max_branch_photon = 0.0;  // largest <a^dag a> over the matched branch
    std::vector<double> branch_energies;
    std::vector<double> effective_energies;
};

namespace detail {

struct VacuumBranch {
    std::vector<double> energies;
    Eigen::MatrixXd vacuum_components;  // 2^N x 2^N, column j = P_vac E_j
    std::vector<double> photon_numbers;
};

/// Diagonalize the full model and keep the 2^N eigenvectors with the largest
/// photon-vacuum weight, matched later to effective states by overlap.
inline VacuumBranch vacuum_branch(const Eigen::MatrixXd& H, int n) {
    const std::size_t spin_dim = 1ull << n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    const std::size_t dim = static_cast<std::size_t>(vals.size());
    const int n_ph = static_cast<int>(dim / spin_dim) - 1;

    std::vector<std::pair<double, std::size_t>> weight_index;
    for (std::size_t j = 0; j < dim; ++j) {
        double w = 0.0;
        for (std::size_t spin = 0; spin < spin_dim; ++spin)
            w += vecs(static_cast<Eigen::Index>(spin), static_cast<Eigen::Index>(j)) *
                 vecs(static_cast<Eigen::Index>(spin), static_cast<Eigen::Index>(j));
        weight_index.emplace_back(w, j);
    }
    std::sort(weight_index.begin(), weight_index.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    VacuumBranch out;
    out.vacuum_components =
        Eigen::MatrixXd(static_cast<Eigen::Index>(spin_dim), static_cast<Eigen::Index>(spin_dim));
    for (std::size_t col = 0; col < spin_dim; ++col) {
        const std::size_t j = weight_index[col].second;
        out.energies.push_back(vals(static_cast<Eigen::Index>(j)));
        double nbar = 0.0;
        for (int ph = 0; ph <= n_ph; ++ph)
            for (std::size_t spin = 0; spin < spin_dim; ++spin) {
                const double a = vecs(
                    static_cast<Eigen::Index>(static_cast<std::size_t>(ph) * spin_dim + spin),
                    static_cast<Eigen::Index>(j));
                nbar += ph * a * a;
            }
        out.photon_numbers.push_back(nbar);
        for (std::size_t spin = 0; spin < spin_dim; ++spin)
            out.vacuum_components(static_cast<Eigen::Index>(spin), static_cast<Eigen::Index>(col)) =
                vecs(static_cast<Eigen::Index>(spin), static_cast<Eigen::Index>(j));
    }
    return out;
}

/// Greedy maximum-overlap assignment of effective eigenvectors to branch
/// columns; returns branch column index per effective state.
inline std::vector<std::size_t> match_by_overlap(const Eigen::MatrixXd& effective_vectors,
                                                 const Eigen::MatrixXd& vacuum_components) {
    const std::size_t dim = static_cast<std::size_t>(effective_vectors.cols());
    std::vector<std::size_t> assignment(dim, dim);
    std::vector<bool> used(dim, false);
    Eigen::MatrixXd overlap = (effective_vectors.transpose() * vacuum_components).cwiseAbs();
    std::vector<std::tuple<double, std::size_t, std::size_t>> entries;
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t c = 0; c < dim; ++c)
            entries.emplace_back(overlap(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)),
                                 j, c);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
    std::size_t placed = 0;
    for (const auto& [w, j, c] : entries) {
        if (assignment[j] != dim || used[c]) continue;
        assignment[j] = c;
        used[c] = true;
        if (++placed == dim) break;
    }
    return assignment;
}

}  // namespace detail

/// Compare the photon-vacuum branch of the full model against
/// H_eff = g4 (sum lambda sigma_x)^2 with g4 = -g_R^2/delta, with the qubit
/// detuning knob at zero. g4_fit is the least-squares slope of the matched
/// branch energies against the classical (sum lambda m)^2 values.
inline SpectralComparison spectral_compare(const PhysicalParams& p,
                                           const std::vector<double>& lambda, int n_ph) {
    const double g4_theory = required_g4(p);
    const EffectiveParams eff = effective_params(p);
    if (std::fabs(eff.g_R1 / p.delta) > 0.1)
        throw Error(ErrorKind::Validation,
                    "spectral_compare requires the perturbative regime |g_R/delta| <= 0.1");
    const int n = static_cast<int>(lambda.size());
    const std::size_t spin_dim = 1ull << n;

    // Effective model at delta_m_tilde = 0.
    Eigen::MatrixXd Heff = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spin_dim),
                                                 static_cast<Eigen::Index>(spin_dim));
    for (std::size_t i = 0; i < spin_dim; ++i)
        for (int a = 0; a < n; ++a) {
            const std::size_t ia = i ^ (1ull << a);
            for (int b = 0; b < n; ++b)
                Heff(static_cast<Eigen::Index>(ia ^ (1ull << b)), static_cast<Eigen::Index>(i)) +=
                    g4_theory * lambda[static_cast<std::size_t>(a)] * lambda[static_cast<std::size_t>(b)];
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eff_solver(Heff);

    auto run = [&](int cutoff) {
        Eigen::MatrixXd H = build_full_model(p, lambda, cutoff, 0.0, 4, 10);
        return detail::vacuum_branch(H, n);
    };
    const detail::VacuumBranch branch = run(n_ph);
    const auto assignment = detail::match_by_overlap(eff_solver.eigenvectors(),
                                                     branch.vacuum_components);

    SpectralComparison out;
    out.g4_theory = g4_theory;
    out.effective_energies.assign(eff_solver.eigenvalues().data(),
                                  eff_solver.eigenvalues().data() + spin_dim);
    out.branch_energies.resize(spin_dim);
    double span = eff_solver.eigenvalues().maxCoeff() - eff_solver.eigenvalues().minCoeff();
    if (span == 0.0) span = std::max(std::fabs(g4_theory), 1e-300);
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < spin_dim; ++j) {
        const double e_full = branch.energies[assignment[j]];
        const double e_eff = out.effective_energies[j];
        out.branch_energies[j] = e_full;
        out.max_abs_dev = std::max(out.max_abs_dev, std::fabs(e_full - e_eff));
        // classical (sum lambda m)^2 value; 0 when the coupling vanishes
        const double x = g4_theory != 0.0 ? e_eff / g4_theory : 0.0;
        sx += x;
        sy += e_full;
        sxx += x * x;
        sxy += x * e_full;
    }
    out.max_rel_dev = out.max_abs_dev / span;
    const double denom = spin_dim * sxx - sx * sx;
    out.g4_fit = denom != 0.0 ? (spin_dim * sxy - sx * sy) / denom : 0.0;
    out.max_branch_photon =
        *std::max_element(branch.photon_numbers.begin(), branch.photon_numbers.end());

    // Truncation self-check: growing the cutoff must not move the branch by
    // more than the deviation just reported.
    const detail::VacuumBranch wider = run(n_ph + 2);
    std::vector<double> a = branch.energies;
    std::vector<double> b = wider.energies;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double shift = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) shift = std::max(shift, std::fabs(a[j] - b[j]));
    if (shift > out.max_abs_dev + 1e-12 * span)
        throw Error(ErrorKind::ConvergenceError,
                    "photon cutoff not converged: branch shift " + std::to_string(shift) +
                        " exceeds reported deviation " + std::to_string(out.max_abs_dev));
    return out;
}

/// Side-cavity quantities of the coherence budget.
struct SideCavityBudget {
    double suppression_factor = 0.0;
    double boost_factor = 0.0;  // large-N limit [N eta_side Gamma / (2 Delta)]^2
    double g4T_side = 0.0;      // (sqrt(eta)/4) * eta_side Gamma / (2 Delta)
    double large_n_parameter = 0.0;  // N eta_side Gamma / Delta, validity diagnostic
};

/// Coherence budget from the decoherence channels. All relations carry
/// coefficient 1 on the paper-level "~" scalings; outputs are
/// order-of-magnitude semantics, not calibrated rates.
struct CoherenceBudget {
    double eta = 0.0;
    double gamma1_over_g4 = 0.0;       // (8/eta) (delta/kappa)
    double gamma2_over_g4 = 0.0;       // Gamma/Delta
    double gamma3_over_g4 = 0.0;       // kappa/(2 delta)
    double delta_opt_over_kappa = 0.0; // sqrt(eta)/4
    double Ng4T_single = 0.0;          // sqrt(eta)/4
    std::optional<SideCavityBudget> side_opt;

    const SideCavityBudget& side() const {
        if (!side_opt)
            throw Error(ErrorKind::MissingSideCavity,
                        "side-cavity quantities requested but eta_side was not provided");
        return *side_opt;
    }
};

inline double lorentzian_absorptive(double x) { return 1.0 / (1.0 + 4.0 * x * x); }
inline double lorentzian_dispersive(double x) { return -2.0 * x / (1.0 + 4.0 * x * x); }

inline CoherenceBudget coherence_budget(const PhysicalParams& p) {
    if (!(p.kappa > 0) || !(p.Gamma > 0) || !(p.delta > 0) || !(p.Delta > 0) || !(p.g0 > 0))
        throw Error(ErrorKind::Validation, "coherence budget requires positive g0, Gamma, kappa, delta, Delta");
    CoherenceBudget b;
    b.eta = p.eta();
    b.gamma1_over_g4 = (8.0 / b.eta) * (p.delta / p.kappa);
    b.gamma2_over_g4 = p.Gamma / p.Delta;
    b.gamma3_over_g4 = p.kappa / (2.0 * p.delta);
    b.delta_opt_over_kappa = std::sqrt(b.eta) / 4.0;
    b.Ng4T_single = std::sqrt(b.eta) / 4.0;
    if (p.eta_side) {
        SideCavityBudget s;
        const double x = p.Delta / p.Gamma;
        const double ns = static_cast<double>(p.N_atoms) * (*p.eta_side);
        const double absorptive = 1.0 + ns * lorentzian_absorptive(x);
        const double dispersive = ns * lorentzian_dispersive(x);
        s.suppression_factor = 1.0 / (absorptive * absorptive + dispersive * dispersive);
        s.boost_factor = (ns * p.Gamma / (2.0 * p.Delta)) * (ns * p.Gamma / (2.0 * p.Delta));
        s.g4T_side = (std::sqrt(b.eta) / 4.0) * ((*p.eta_side) * p.Gamma / (2.0 * p.Delta));
        s.large_n_parameter = ns * p.Gamma / p.Delta;
        b.side_opt = s;
    }
    return b;
}

}  // namespace cavopt
