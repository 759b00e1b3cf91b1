// cavopt command-line driver: compile / solve / simulate / verify problem
// instances and emit physics reports. JSON goes to stdout, logs to stderr.
// Exit codes: 0 success, 2 validation/verification errors, 3 resource caps.

#include <cavopt/aqc.hpp>
#include <cavopt/cavity_physics.hpp>
#include <cavopt/hamiltonian.hpp>
#include <cavopt/json_io.hpp>
#include <cavopt/problems.hpp>
#include <cavopt/radicals.hpp>
#include <cavopt/reductions.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace cavopt;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSchema = "cavopt-report-v1";

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Validation, "cannot open input file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string mask_to_string(std::uint64_t mask, std::size_t n) {
    std::string s(n, '-');
    for (std::size_t k = 0; k < n; ++k)
        if ((mask >> k) & 1ull) s[k] = '+';
    return s;
}

Json report_header(const std::string& subcommand, std::uint64_t seed) {
    Json j;
    j["schema"] = kSchema;
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    return j;
}

struct CompileOptions {
    std::string format = "npp";
    std::string input = "-";
    double g4 = 1.0;
    double penalty = 0.0;  // <= 0 means auto (QUBO only)
    int penalty_cap = 24;
};

struct Compiled {
    ProblemInstance instance;
    SubsetTargetProgram program;
    CavityProgram cavity;
    std::string digest;
};

Compiled run_compile(const CompileOptions& opt) {
    Compiled out;
    const std::string text = read_input(opt.input);
    out.digest = fnv1a64_hex(text);
    const ProblemFormat fmt = format_from_name(opt.format);
    out.instance = parse_instance(fmt, text);
    switch (fmt) {
    case ProblemFormat::npp:
        out.program = encode_npp(std::get<NppInstance>(out.instance));
        break;
    case ProblemFormat::dimacs_cnf:
        out.program = encode_sat3(std::get<Sat3Instance>(out.instance));
        break;
    case ProblemFormat::vertex_cover:
        out.program = encode_vertex_cover(std::get<VertexCoverInstance>(out.instance));
        break;
    case ProblemFormat::qubo: {
        std::optional<double> m;
        if (opt.penalty > 0) m = opt.penalty;
        const auto& q = std::get<QuboInstance>(out.instance);
        if (m.has_value()) {
            out.program = encode_qubo(q, m);
        } else {
            // auto_penalty with the configured cap
            out.program = encode_qubo(q, 1.0);
            out.program.penalty = auto_penalty(out.program, opt.penalty_cap);
        }
        break;
    }
    }
    out.cavity = lower(out.program, opt.g4);
    return out;
}

Json compile_report(const Compiled& c) {
    Json j;
    j["input_digest"] = {{"algorithm", "fnv1a-64"}, {"value", c.digest}};
    j["program"] = program_to_json(c.program);
    j["cavity"] = cavity_program_to_json(c.cavity);
    const Placement placement = atom_positions(c.cavity);
    j["positions_in_inverse_Q"] = placement.positions;
    return j;
}

Json decode_optimum(const Compiled& c, std::uint64_t plus_mask) {
    Json out;
    const std::size_t K = c.cavity.N;
    std::vector<int> y(K);
    for (std::size_t k = 0; k < K; ++k) y[k] = (plus_mask >> k) & 1ull ? 1 : 0;
    const std::string& source = c.program.meta.source;
    try {
        if (source == "npp") {
            const auto& inst = std::get<NppInstance>(c.instance);
            std::int64_t left = 0, right = 0;
            Json set_a = Json::array();
            for (std::size_t k = 0; k < inst.integers.size(); ++k) {
                if (y[k]) {
                    left += inst.integers[k];
                    set_a.push_back(k + 1);
                } else {
                    right += inst.integers[k];
                }
            }
            out["subset_a"] = set_a;
            out["imbalance"] = std::llabs(left - right);
        } else if (source == "sat3") {
            out["assignment"] = decode_sat3(c.program, y);
        } else if (source == "vertex_cover") {
            out["cover"] = decode_vertex_cover(c.program, y);
        } else if (source == "qubo") {
            const std::vector<int> s = decode_qubo(c.program, y);
            out["spins"] = s;
            out["ising_energy"] = std::get<QuboInstance>(c.instance).energy(s);
        }
    } catch (const Error& e) {
        out["decode_error"] = {{"kind", e.kind_name()}, {"message", e.what()}};
    }
    return out;
}

int cmd_compile(const CompileOptions& opt, std::uint64_t seed) {
    const Compiled c = run_compile(opt);
    Json j = report_header("compile", seed);
    j.update(compile_report(c));
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_solve(const CompileOptions& opt, int cap, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const Compiled c = run_compile(opt);
    const GroundResult ground = brute_force_ground(c.cavity, cap);
    Json j = report_header("solve", seed);
    j.update(compile_report(c));
    Json res;
    res["min_energy"] = ground.min_energy;
    res["optima_count"] = ground.optima.size();
    Json optima = Json::array();
    Json residuals = Json::array();
    const std::size_t keep = std::min<std::size_t>(ground.optima.size(), 64);
    for (std::size_t i = 0; i < keep; ++i) {
        optima.push_back(mask_to_string(ground.optima[i], c.cavity.N));
        residuals.push_back(
            cavopt::detail::exact_residual_of_mask(c.cavity, ground.optima[i]).str());
    }
    res["optima"] = optima;
    res["exact_residuals"] = residuals;
    if (!ground.optima.empty()) res["decoded"] = decode_optimum(c, ground.optima.front());
    j["results"] = res;
    j["timing_ms"] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct SimulateOptions {
    double ramp_time = 200.0;
    std::string path = "linear";
    double dt_eta = 0.05;
    double drift_tol = 1e-6;
    bool renormalize = false;
    std::uint64_t shots = 0;
    int gap_trace = 0;
};

Schedule make_schedule(const SimulateOptions& s) {
    if (s.path == "linear") return Schedule::linear(s.ramp_time);
    if (s.path.rfind("poly:", 0) == 0)
        return Schedule::polynomial(s.ramp_time, std::stod(s.path.substr(5)));
    if (s.path.rfind("table:", 0) == 0) {
        const std::string file = s.path.substr(6);
        std::ifstream in(file);
        if (!in) throw Error(ErrorKind::Validation, "cannot open schedule table '" + file + "'");
        std::vector<std::pair<double, double>> knots;
        double t, v;
        while (in >> t >> v) knots.emplace_back(t, v);
        return Schedule::table(s.ramp_time, std::move(knots));
    }
    throw Error(ErrorKind::Validation, "unknown path '" + s.path + "' (linear|poly:P|table:FILE)");
}

int cmd_simulate(const CompileOptions& opt, const SimulateOptions& sim, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const Compiled c = run_compile(opt);
    const Schedule schedule = make_schedule(sim);
    DtControl ctrl;
    ctrl.eta_dt = sim.dt_eta;
    ctrl.drift_tolerance = sim.drift_tol;
    ctrl.renormalize_each_step = sim.renormalize;
    SimResult r = evolve(c.cavity, schedule, ctrl);
    if (sim.shots > 0) r.samples = sample_measurements(r.final_state, sim.shots, seed);

    Json j = report_header("simulate", seed);
    j.update(compile_report(c));
    Json res;
    res["schedule"] = {{"total_time", schedule.total_time()}, {"path", sim.path}};
    res["dt"] = r.dt;
    res["steps"] = r.steps;
    res["norm_drift"] = r.norm_drift;
    res["renormalize_each_step"] = sim.renormalize;
    res["success_probability"] = r.success_probability;
    res["final_energy"] = r.final_energy;
    Json optima = Json::array();
    for (std::uint64_t mask : r.optima) optima.push_back(mask_to_string(mask, c.cavity.N));
    res["optima"] = optima;
    Json samples = Json::array();
    for (std::uint64_t mask : r.samples) samples.push_back(mask_to_string(mask, c.cavity.N));
    res["samples"] = samples;
    if (sim.gap_trace > 1) {
        Json trace = Json::array();
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < sim.gap_trace; ++i) {
            const double s = static_cast<double>(i) / (sim.gap_trace - 1);
            const SpectrumResult sp = exact_spectrum(c.cavity, s, 2, c.cavity.delta_m);
            const double gap = sp.values.size() > 1 ? sp.values[1] - sp.values[0] : 0.0;
            min_gap = std::min(min_gap, gap);
            trace.push_back(Json::array({s, gap}));
        }
        res["gap_trace"] = trace;
        res["min_gap"] = min_gap;
    }
    j["results"] = res;
    j["timing_ms"] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    std::cout << j.dump(2) << "\n";
    return 0;
}

// Exhaustive equivalence checks for small instances; exit 2 when a check
// fails (that would indicate a broken reduction, not a bad instance).
int cmd_verify(const CompileOptions& opt, int cap, std::uint64_t seed) {
    const Compiled c = run_compile(opt);
    Json j = report_header("verify", seed);
    j["input_digest"] = {{"algorithm", "fnv1a-64"}, {"value", c.digest}};
    Json checks = Json::array();
    bool all_ok = true;
    auto add = [&](const std::string& name, bool ok, const Json& detail) {
        checks.push_back(Json{{"check", name}, {"passed", ok}, {"detail", detail}});
        all_ok = all_ok && ok;
    };
    const std::string& source = c.program.meta.source;

    if (source == "sat3") {
        const auto& inst = std::get<Sat3Instance>(c.instance);
        const auto ys = enumerate_exact_solutions(c.program, cap);
        bool sat = false;
        std::vector<int> first_x;
        for (std::uint64_t m = 0; m < (1ull << inst.n) && !sat; ++m) {
            std::vector<int> x(static_cast<std::size_t>(inst.n));
            for (int k = 0; k < inst.n; ++k) x[static_cast<std::size_t>(k)] = (m >> k) & 1ull ? 1 : 0;
            if (inst.satisfied(x)) {
                sat = true;
                first_x = x;
            }
        }
        add("subset_solvable_iff_satisfiable", ys.empty() == !sat,
            Json{{"subset_solutions", ys.size()}, {"satisfiable", sat}});
        bool decode_ok = true;
        for (std::uint64_t mask : ys) {
            std::vector<int> y(c.program.size());
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = (mask >> k) & 1ull ? 1 : 0;
            if (!inst.satisfied(decode_sat3(c.program, y))) decode_ok = false;
        }
        add("decoded_assignments_satisfy", decode_ok, Json{});
        if (sat) {
            const auto y = witness_sat3(inst, first_x);
            add("witness_hits_target", c.program.residual(y).is_zero(), Json{});
        }
    } else if (source == "vertex_cover") {
        const auto& inst = std::get<VertexCoverInstance>(c.instance);
        const auto ys = enumerate_exact_solutions(c.program, cap);
        bool cover_exists = false;
        for (std::uint64_t m = 0; m < (1ull << inst.n) && !cover_exists; ++m) {
            if (std::popcount(m) != inst.kappa) continue;
            bool covers = true;
            for (const auto& [u, v] : inst.edges)
                if (!((m >> (u - 1)) & 1ull) && !((m >> (v - 1)) & 1ull)) covers = false;
            cover_exists = covers;
        }
        add("subset_solvable_iff_cover_exists", ys.empty() == !cover_exists,
            Json{{"subset_solutions", ys.size()}, {"cover_exists", cover_exists}});
        bool decode_ok = true;
        for (std::uint64_t mask : ys) {
            std::vector<int> y(c.program.size());
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = (mask >> k) & 1ull ? 1 : 0;
            const auto cover = decode_vertex_cover(c.program, y);
            if (static_cast<int>(cover.size()) != inst.kappa) decode_ok = false;
            for (const auto& [u, v] : inst.edges) {
                const bool hit = std::find(cover.begin(), cover.end(), u) != cover.end() ||
                                 std::find(cover.begin(), cover.end(), v) != cover.end();
                if (!hit) decode_ok = false;
            }
        }
        add("decoded_covers_valid", decode_ok, Json{});
    } else if (source == "qubo") {
        const auto& inst = std::get<QuboInstance>(c.instance);
        const GroundResult ground = brute_force_ground(c.cavity, cap);
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t m = 0; m < (1ull << inst.n); ++m) {
            std::vector<int> s(static_cast<std::size_t>(inst.n));
            for (int k = 0; k < inst.n; ++k) s[static_cast<std::size_t>(k)] = (m >> k) & 1ull ? 1 : -1;
            best = std::min(best, inst.energy(s));
        }
        bool decode_ok = !ground.optima.empty();
        double decoded_energy = std::numeric_limits<double>::quiet_NaN();
        if (decode_ok) {
            std::vector<int> y(c.program.size());
            for (std::size_t k = 0; k < y.size(); ++k)
                y[k] = (ground.optima.front() >> k) & 1ull ? 1 : 0;
            try {
                decoded_energy = inst.energy(decode_qubo(c.program, y));
            } catch (const Error&) {
                decode_ok = false;
            }
        }
        add("pipeline_minimizer_reaches_ising_minimum", decode_ok && decoded_energy == best,
            Json{{"decoded_energy", decoded_energy}, {"brute_force_minimum", best}});
    } else if (source == "npp") {
        const auto& inst = std::get<NppInstance>(c.instance);
        const GroundResult ground = brute_force_ground(c.cavity, cap);
        std::int64_t total = 0;
        for (auto p : inst.integers) total += p;
        std::int64_t best = total;
        for (std::uint64_t m = 0; m < (1ull << inst.integers.size()); ++m) {
            std::int64_t left = 0;
            for (std::size_t k = 0; k < inst.integers.size(); ++k)
                if ((m >> k) & 1ull) left += inst.integers[k];
            best = std::min<std::int64_t>(best, std::llabs(2 * left - total));
        }
        const double expected =
            c.cavity.g4 * (static_cast<double>(best) / c.cavity.scale) *
            (static_cast<double>(best) / c.cavity.scale);
        const bool ok = std::fabs(ground.min_energy - expected) <=
                        1e-12 * std::max(1.0, std::fabs(expected));
        add("ground_energy_matches_min_imbalance", ok,
            Json{{"min_energy", ground.min_energy}, {"g4_imbalance_over_pmax_sq", expected}});
    }

    j["checks"] = checks;
    j["all_passed"] = all_ok;
    std::cout << j.dump(2) << "\n";
    if (!all_ok) {
        std::cerr << "verification failed\n";
        return 2;
    }
    return 0;
}

struct CoherenceOptions {
    double eta = 0.0;  // if > 0, synthesizes g0 from Gamma and kappa
    double g0 = 0.0;
    double gamma = 1.0;
    double kappa = 1.0;
    double delta = 0.0;  // 0 -> use delta_opt
    double delta_big = 400.0;
    int n_atoms = 1;
    double eta_side = 0.0;  // 0 -> absent
};

int cmd_coherence(const CoherenceOptions& opt, std::uint64_t seed) {
    PhysicalParams p;
    p.Gamma = opt.gamma;
    p.kappa = opt.kappa;
    p.Delta = opt.delta_big;
    p.N_atoms = opt.n_atoms;
    if (opt.eta > 0)
        p.g0 = std::sqrt(opt.eta * p.Gamma * p.kappa) / 2.0;
    else
        p.g0 = opt.g0;
    p.delta = opt.delta > 0 ? opt.delta : std::sqrt(p.eta()) / 4.0 * p.kappa;
    if (opt.eta_side > 0) p.eta_side = opt.eta_side;

    const CoherenceBudget b = coherence_budget(p);
    Json j = report_header("coherence", seed);
    j["units"] = "angular frequency, coefficient-1 order-of-magnitude scalings";
    j["params"] = {{"eta", b.eta},     {"g0", p.g0},           {"Gamma", p.Gamma},
                   {"kappa", p.kappa}, {"delta", p.delta},     {"Delta", p.Delta},
                   {"N", p.N_atoms},   {"eta_side", opt.eta_side > 0 ? Json(opt.eta_side) : Json()}};
    j["gamma1_over_g4"] = b.gamma1_over_g4;
    j["gamma2_over_g4"] = b.gamma2_over_g4;
    j["gamma3_over_g4"] = b.gamma3_over_g4;
    j["delta_opt_over_kappa"] = b.delta_opt_over_kappa;
    j["N_g4T_single"] = b.Ng4T_single;
    if (b.side_opt) {
        const auto& s = *b.side_opt;
        j["side"] = {{"suppression_factor", s.suppression_factor},
                     {"boost_factor", s.boost_factor},
                     {"g4T_side", s.g4T_side},
                     {"large_n_parameter", s.large_n_parameter}};
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct ValidateEffectiveOptions {
    double g_r = 1.0;
    double delta = 50.0;
    std::string lambdas = "1,0.6";
    int n_ph = 6;
    std::string delta_sweep;  // comma-separated list for the slope fit
};

int cmd_validate_effective(const ValidateEffectiveOptions& opt, std::uint64_t seed) {
    std::vector<double> lambda;
    {
        std::stringstream ss(opt.lambdas);
        std::string tok;
        while (std::getline(ss, tok, ',')) lambda.push_back(std::stod(tok));
    }
    // Synthesize a balanced drive realizing the requested g_R: the full model
    // only sees g_R1, g_R2, delta and the detuning knob.
    auto params_for = [&](double delta) {
        PhysicalParams p;
        p.Delta = 1e4;
        p.Delta_F = 0.0;
        p.g0 = 1.0;
        p.Omega1 = p.Omega2 = opt.g_r * 2.0 * p.Delta / p.g0;
        p.delta = delta;
        p.kappa = 1.0;
        p.Gamma = 1.0;
        return p;
    };

    const SpectralComparison cmp = spectral_compare(params_for(opt.delta), lambda, opt.n_ph);
    Json j = report_header("validate-effective", seed);
    j["g_r"] = opt.g_r;
    j["delta"] = opt.delta;
    j["lambda"] = lambda;
    j["n_ph"] = opt.n_ph;
    j["g4_theory"] = cmp.g4_theory;
    j["g4_fit"] = cmp.g4_fit;
    j["max_rel_dev"] = cmp.max_rel_dev;
    j["max_abs_dev"] = cmp.max_abs_dev;
    j["max_branch_photon"] = cmp.max_branch_photon;
    j["branch_energies"] = cmp.branch_energies;
    j["effective_energies"] = cmp.effective_energies;

    if (!opt.delta_sweep.empty()) {
        Json sweep = Json::array();
        std::vector<double> xs, ys;
        std::stringstream ss(opt.delta_sweep);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const double d = std::stod(tok);
            const SpectralComparison c2 = spectral_compare(params_for(d), lambda, opt.n_ph);
            sweep.push_back(Json{{"delta", d}, {"g4_fit", c2.g4_fit}});
            xs.push_back(std::log(d));
            ys.push_back(std::log(std::fabs(c2.g4_fit)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double npts = static_cast<double>(xs.size());
        const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
        j["delta_sweep"] = sweep;
        j["loglog_slope"] = slope;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"atom-cavity quantum optimization compiler and verifier"};
    app.require_subcommand(1);

    CompileOptions copt;
    SimulateOptions sopt;
    CoherenceOptions coh;
    ValidateEffectiveOptions veff;
    std::uint64_t seed = 0;
    int cap = 24;

    auto add_compile_flags = [&](CLI::App* cmd) {
        cmd->add_option("--format", copt.format, "npp | dimacs_cnf | vertex_cover | qubo")
            ->required();
        cmd->add_option("--input", copt.input, "input file path, '-' for stdin");
        cmd->add_option("--g4", copt.g4, "quadratic strength (default 1.0)");
        cmd->add_option("--penalty", copt.penalty,
                        "QUBO penalty M; omit or <= 0 for auto_penalty");
        cmd->add_option("--penalty-cap", copt.penalty_cap, "auto_penalty enumeration cap");
    };

    CLI::App* compile = app.add_subcommand("compile", "parse, encode and lower an instance");
    add_compile_flags(compile);
    compile->add_option("--seed", seed, "echoed in the report");

    CLI::App* solve = app.add_subcommand("solve", "compile + brute-force ground state + decode");
    add_compile_flags(solve);
    solve->add_option("--cap", cap, "brute-force enumeration cap (default 24)");
    solve->add_option("--seed", seed, "echoed in the report");

    CLI::App* simulate = app.add_subcommand("simulate", "compile + adiabatic state-vector run");
    add_compile_flags(simulate);
    simulate->add_option("--ramp-time", sopt.ramp_time, "total ramp time in 1/g4 units");
    simulate->add_option("--path", sopt.path, "linear | poly:P | table:FILE");
    simulate->add_option("--dt-eta", sopt.dt_eta, "step control: dt <= eta/||H||");
    simulate->add_option("--drift-tol", sopt.drift_tol, "norm drift tolerance");
    simulate->add_flag("--renormalize", sopt.renormalize, "renormalize after each step");
    simulate->add_option("--shots", sopt.shots, "sigma-x basis samples to draw");
    simulate->add_option("--seed", seed, "sampling seed (counter-based splitmix64)");
    simulate->add_option("--gap-trace", sopt.gap_trace, "trace the gap at this many s points");

    CLI::App* verify = app.add_subcommand("verify", "exhaustive equivalence checks (small instances)");
    add_compile_flags(verify);
    verify->add_option("--cap", cap, "enumeration cap (default 24)");
    verify->add_option("--seed", seed, "echoed in the report");

    CLI::App* coherence = app.add_subcommand("coherence", "coherence budget report");
    coherence->add_option("--eta", coh.eta, "cavity cooperativity (synthesizes g0)");
    coherence->add_option("--g0", coh.g0, "single-photon coupling (alternative to --eta)");
    coherence->add_option("--gamma", coh.gamma, "excited-state linewidth Gamma");
    coherence->add_option("--kappa", coh.kappa, "cavity linewidth kappa");
    coherence->add_option("--delta", coh.delta, "two-photon detuning; omit for delta_opt");
    coherence->add_option("--delta-big", coh.delta_big, "single-photon detuning Delta");
    coherence->add_option("--n-atoms", coh.n_atoms, "atom count N");
    coherence->add_option("--eta-side", coh.eta_side, "side-cavity cooperativity");
    coherence->add_option("--seed", seed, "echoed in the report");

    CLI::App* veffc = app.add_subcommand("validate-effective",
                                         "full-model vs effective-model spectral comparison");
    veffc->add_option("--g-r", veff.g_r, "two-photon coupling g_R");
    veffc->add_option("--delta", veff.delta, "cavity detuning delta");
    veffc->add_option("--lambdas", veff.lambdas, "comma-separated per-atom weights");
    veffc->add_option("--n-ph", veff.n_ph, "photon cutoff");
    veffc->add_option("--delta-sweep", veff.delta_sweep,
                      "comma-separated deltas for the log-log slope fit");
    veffc->add_option("--seed", seed, "echoed in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(compile)) return cmd_compile(copt, seed);
        if (app.got_subcommand(solve)) return cmd_solve(copt, cap, seed);
        if (app.got_subcommand(simulate)) return cmd_simulate(copt, sopt, seed);
        if (app.got_subcommand(verify)) return cmd_verify(copt, cap, seed);
        if (app.got_subcommand(coherence)) return cmd_coherence(coh, seed);
        if (app.got_subcommand(veffc)) return cmd_validate_effective(veff, seed);
    } catch (const Error& e) {
        Json err;
        err["error"] = {{"kind", e.kind_name()}, {"message", e.what()}};
        std::cout << err.dump(2) << "\n";
        std::cerr << e.what() << "\n";
        return e.is_cap() ? 3 : 2;
    } catch (const std::exception& e) {
        Json err;
        err["error"] = {{"kind", "InternalError"}, {"message", e.what()}};
        std::cout << err.dump(2) << "\n";
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
