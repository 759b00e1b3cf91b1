#pragma once

#include <cavopt/error.hpp>
#include <cavopt/hamiltonian.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cavopt {

using Amplitude = std::complex<double>;
using StateVector = std::vector<Amplitude>;

/// Monotone ramp path s(t): s(0) = 0, s(total_time) = 1.
class Schedule {
public:
    enum class Kind { linear, polynomial, table };

    static Schedule linear(double total_time) {
        Schedule s;
        s.total_time_ = check_time(total_time);
        s.kind_ = Kind::linear;
        return s;
    }

    static Schedule polynomial(double total_time, double power) {
        if (power <= 0) throw Error(ErrorKind::Validation, "polynomial power must be positive");
        Schedule s;
        s.total_time_ = check_time(total_time);
        s.kind_ = Kind::polynomial;
        s.power_ = power;
        return s;
    }

    /// Piecewise-linear path through (t, s) knots; endpoints are pinned to
    /// (0,0) and (total_time, 1) and both coordinates must be non-decreasing.
    static Schedule table(double total_time, std::vector<std::pair<double, double>> knots) {
        Schedule s;
        s.total_time_ = check_time(total_time);
        s.kind_ = Kind::table;
        if (knots.empty() || knots.front() != std::make_pair(0.0, 0.0) ||
            knots.back() != std::make_pair(total_time, 1.0))
            throw Error(ErrorKind::Validation, "table must start at (0,0) and end at (T,1)");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (knots[i].first < knots[i - 1].first || knots[i].second < knots[i - 1].second)
                throw Error(ErrorKind::Validation, "table knots must be non-decreasing");
        s.knots_ = std::move(knots);
        return s;
    }

    double total_time() const noexcept { return total_time_; }
    Kind kind() const noexcept { return kind_; }
    double power() const noexcept { return power_; }

    double operator()(double t) const {
        if (total_time_ == 0.0) return 1.0;
        const double u = std::clamp(t / total_time_, 0.0, 1.0);
        switch (kind_) {
        case Kind::linear: return u;
        case Kind::polynomial: return std::pow(u, power_);
        case Kind::table: {
            const double tt = std::clamp(t, 0.0, total_time_);
            auto it = std::upper_bound(knots_.begin(), knots_.end(), tt,
                                       [](double v, const auto& k) { return v < k.first; });
            if (it == knots_.begin()) return knots_.front().second;
            if (it == knots_.end()) return knots_.back().second;
            const auto& [t1, s1] = *std::prev(it);
            const auto& [t2, s2] = *it;
            if (t2 == t1) return s2;
            return s1 + (s2 - s1) * (tt - t1) / (t2 - t1);
        }
        }
        return u;
    }

private:
    static double check_time(double t) {
        if (t < 0 || !std::isfinite(t))
            throw Error(ErrorKind::Validation, "total_time must be finite and >= 0");
        return t;
    }

    double total_time_ = 0.0;
    Kind kind_ = Kind::linear;
    double power_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
};

/// Integrator controls. dt <= eta_dt / ||H||_bound with
/// ||H||_bound = N |delta_m(0)| + g4 (sum |lambda|)^2 + sum |h|.
struct DtControl {
    double eta_dt = 0.05;
    double drift_tolerance = 1e-6;
    bool renormalize_each_step = false;
};

struct SimResult {
    StateVector final_state;
    double success_probability = 0.0;
    std::vector<std::uint64_t> samples;  // filled by sample_measurements
    double norm_drift = 0.0;
    std::optional<double> min_gap;
    double final_energy = 0.0;  // <H(1)> including the constant offset
    double dt = 0.0;
    std::uint64_t steps = 0;
    std::vector<std::uint64_t> optima;  // oracle optimum set (m_k=+1 bitmasks)
};

namespace detail {

/// out = H_evolve(s) * in, where H_evolve omits the constant s*offset term
/// (a global phase during evolution, reported separately in energies).
inline void apply_hamiltonian(const CavityProgram& cp, double s, double delta0,
                              const StateVector& in, StateVector& tmp, StateVector& out) {
    const std::size_t dim = in.size();
    const double zc = (1.0 - s) * delta0;
    const int n = static_cast<int>(cp.N);
    for (std::size_t i = 0; i < dim; ++i) {
        const int up = std::popcount(i);
        out[i] = zc * static_cast<double>(2 * up - n) * in[i];
    }
    if (s == 0.0) return;
    // tmp = (sum_k lambda_k sigma_x^k) in; applied twice for the square.
    for (std::size_t i = 0; i < dim; ++i) {
        Amplitude acc = 0.0;
        for (int k = 0; k < n; ++k)
            acc += cp.lambda[static_cast<std::size_t>(k)] * in[i ^ (1ull << k)];
        tmp[i] = acc;
    }
    const double cg = s * cp.g4;
    for (std::size_t i = 0; i < dim; ++i) {
        Amplitude acc = 0.0;
        Amplitude hacc = 0.0;
        for (int k = 0; k < n; ++k) {
            const std::size_t flip = i ^ (1ull << k);
            acc += cp.lambda[static_cast<std::size_t>(k)] * tmp[flip];
            hacc += cp.h[static_cast<std::size_t>(k)] * in[flip];
        }
        out[i] += cg * acc + s * hacc;
    }
}

inline double norm_of(const StateVector& v) {
    double n2 = 0.0;
    for (const auto& a : v) n2 += std::norm(a);
    return std::sqrt(n2);
}

}  // namespace detail

/// Orthonormal fast Walsh-Hadamard transform, in place. Involutive.
inline void fwht(StateVector& v) {
    const std::size_t dim = v.size();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t len = 1; len < dim; len <<= 1) {
        for (std::size_t i = 0; i < dim; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const Amplitude a = v[j];
                const Amplitude b = v[j + len];
                v[j] = (a + b) * inv_sqrt2;
                v[j + len] = (a - b) * inv_sqrt2;
            }
        }
    }
}

/// Born weight of the optimum set in the sigma-x basis. Optima are given as
/// bitmasks with bit k set for m_k = +1; the x-basis index convention is
/// bit k set for m_k = -1 (Hadamard image of the z-basis).
inline double success_probability(const StateVector& state,
                                  const std::vector<std::uint64_t>& optima) {
    StateVector x = state;
    fwht(x);
    const std::uint64_t mask_all = x.size() - 1;
    double p = 0.0;
    for (std::uint64_t plus_mask : optima) p += std::norm(x[(~plus_mask) & mask_all]);
    return p;
}

/// i.i.d. draws from the sigma-x Born distribution. Counter-based generator:
/// shot i uses splitmix64(seed + (i+1) * golden) so runs are reproducible
/// across platforms; outcomes are m_k=+1 bitmasks.
inline std::vector<std::uint64_t> sample_measurements(const StateVector& state,
                                                      std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw Error(ErrorKind::Validation, "shots must be >= 1");
    StateVector x = state;
    fwht(x);
    std::vector<double> cdf(x.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        acc += std::norm(x[j]);
        cdf[j] = acc;
    }
    const double total = cdf.back();
    const std::uint64_t mask_all = x.size() - 1;
    std::vector<std::uint64_t> out;
    out.reserve(shots);
    for (std::uint64_t i = 0; i < shots; ++i) {
        std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53 * total;
        const std::size_t j = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        out.push_back((~static_cast<std::uint64_t>(std::min(j, cdf.size() - 1))) & mask_all);
    }
    return out;
}

/// <psi| H(s) |psi> including the s-scaled constant offset.
inline double expectation_energy(const CavityProgram& cp, const StateVector& state, double s,
                                 double delta0) {
    const std::size_t dim = state.size();
    StateVector tmp(dim), hpsi(dim);
    detail::apply_hamiltonian(cp, s, delta0, state, tmp, hpsi);
    double e = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        e += std::real(std::conj(state[i]) * hpsi[i]);
    return e + s * cp.offset;
}

/// Integrate i dpsi/dt = H(t) psi from |down...down> with classical
/// fixed-step 4th-order Runge-Kutta; H(t) = [1-s(t)] delta_m(0) sum sigma_z
/// + s(t) [g4 (sum lambda sigma_x)^2 + sum h sigma_x].
inline SimResult evolve(const CavityProgram& cp, const Schedule& schedule,
                        const DtControl& ctrl = {}, int cap = 16) {
    if (cp.N > static_cast<std::size_t>(cap))
        throw Error(ErrorKind::CapExceeded,
                    "N = " + std::to_string(cp.N) + " exceeds simulator cap " + std::to_string(cap));
    const double delta0 = cp.delta_m;
    if (!(delta0 > 0))
        throw Error(ErrorKind::Validation,
                    "delta_m(0) must be positive so |down>^N is the initial ground state");

    const std::size_t dim = 1ull << cp.N;
    StateVector psi(dim, Amplitude(0.0));
    psi[0] = 1.0;  // |down>^N: all sigma_z = -1

    double sum_abs_lambda = 0.0;
    double sum_abs_h = 0.0;
    for (std::size_t k = 0; k < cp.N; ++k) {
        sum_abs_lambda += std::fabs(cp.lambda[k]);
        sum_abs_h += std::fabs(cp.h[k]);
    }
    const double h_bound = static_cast<double>(cp.N) * std::fabs(delta0) +
                           cp.g4 * sum_abs_lambda * sum_abs_lambda + sum_abs_h;

    SimResult result;
    const double T = schedule.total_time();
    if (T > 0) {
        const double dt_max = ctrl.eta_dt / h_bound;
        result.steps = static_cast<std::uint64_t>(std::ceil(T / dt_max));
        result.dt = T / static_cast<double>(result.steps);

        StateVector k1(dim), k2(dim), k3(dim), k4(dim), stage(dim), tmp(dim);
        auto deriv = [&](double t, const StateVector& in, StateVector& out) {
            detail::apply_hamiltonian(cp, schedule(t), delta0, in, tmp, out);
            for (std::size_t i = 0; i < dim; ++i) out[i] *= Amplitude(0.0, -1.0);
        };
        const double dt = result.dt;
        for (std::uint64_t step = 0; step < result.steps; ++step) {
            const double t = static_cast<double>(step) * dt;
            deriv(t, psi, k1);
            for (std::size_t i = 0; i < dim; ++i) stage[i] = psi[i] + 0.5 * dt * k1[i];
            deriv(t + 0.5 * dt, stage, k2);
            for (std::size_t i = 0; i < dim; ++i) stage[i] = psi[i] + 0.5 * dt * k2[i];
            deriv(t + 0.5 * dt, stage, k3);
            for (std::size_t i = 0; i < dim; ++i) stage[i] = psi[i] + dt * k3[i];
            deriv(t + dt, stage, k4);
            for (std::size_t i = 0; i < dim; ++i)
                psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (ctrl.renormalize_each_step) {
                const double n = detail::norm_of(psi);
                for (auto& a : psi) a /= n;
            }
        }
    }

    result.norm_drift = std::fabs(detail::norm_of(psi) - 1.0);
    if (result.norm_drift > ctrl.drift_tolerance)
        throw Error(ErrorKind::NormDrift,
                    "norm drift " + std::to_string(result.norm_drift) + " exceeds tolerance");

    result.final_state = psi;
    result.final_energy = expectation_energy(cp, psi, 1.0, delta0);
    const GroundResult ground = brute_force_ground(cp, std::max(cap, static_cast<int>(cp.N)));
    result.optima = ground.optima;
    result.success_probability = success_probability(psi, ground.optima);
    return result;
}

/// Dense spectrum of H(s) (including the s-scaled offset): lowest k
/// eigenvalues and the matching eigenvectors.
struct SpectrumResult {
    std::vector<double> values;
    Eigen::MatrixXd vectors;  // column j pairs with values[j]
};

inline SpectrumResult exact_spectrum(const CavityProgram& cp, double s, int k, double delta0 = 0.0,
                                     int cap = 12) {
    if (cp.N > static_cast<std::size_t>(cap))
        throw Error(ErrorKind::CapExceeded, "N = " + std::to_string(cp.N) +
                                                " exceeds dense diagonalization cap " +
                                                std::to_string(cap));
    if (delta0 == 0.0) delta0 = cp.delta_m;
    const std::size_t dim = 1ull << cp.N;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    const int n = static_cast<int>(cp.N);
    for (std::size_t i = 0; i < dim; ++i) {
        H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
            (1.0 - s) * delta0 * static_cast<double>(2 * std::popcount(i) - n) + s * cp.offset;
        for (int a = 0; a < n; ++a) {
            const std::size_t ia = i ^ (1ull << a);
            H(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(i)) +=
                s * cp.h[static_cast<std::size_t>(a)];
            for (int b = 0; b < n; ++b) {
                const std::size_t iab = ia ^ (1ull << b);
                H(static_cast<Eigen::Index>(iab), static_cast<Eigen::Index>(i)) +=
                    s * cp.g4 * cp.lambda[static_cast<std::size_t>(a)] *
                    cp.lambda[static_cast<std::size_t>(b)];
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    SpectrumResult out;
    const int keep = std::min<int>(k, static_cast<int>(dim));
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + keep);
    out.vectors = solver.eigenvectors().leftCols(keep);
    return out;
}

}  // namespace cavopt
