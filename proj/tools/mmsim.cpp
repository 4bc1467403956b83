// mmsim: build matrix-model operators, map them to Pauli sums and run the
// VQE / EOH / BRST pipelines.
//
// Exit codes: 0 success, 2 usage or validation error, 3 numerical-contract violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmsim/mmsim.hpp"

using namespace mmsim;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct ModelOpts {
    std::string id;
    double g = 0.1;
    std::size_t levels = 0; // 0 = model default
    std::string fermions = "literal";
    std::string ghosts = "jw";
    double t = 2.0;
    double ksq = 0.25;
    double rho = 0.0;
    double lambda = 10.0;
    std::size_t component = 0;
    std::string brst_operator = "laplacian";
};

struct OutputOpts {
    std::string out = "-";
    std::string format = "json";
};

/// Writes to a file, or to stdout for "-". Summary lines go wherever the payload does not.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (path.empty() || path == "-")
            return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_)
            throw UsageError("cannot open output file '" + path + "'");
    }

    std::ostream& payload() { return file_ ? *file_ : std::cout; }
    std::ostream& info() { return file_ ? std::cout : std::cerr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::size_t default_levels(const std::string& id)
{
    return id == "brst-unitary" ? 3 : 4;
}

FermionConvention parse_convention(const std::string& s)
{
    if (s == "literal")
        return FermionConvention::Literal;
    if (s == "jw" || s == "jordan-wigner")
        return FermionConvention::JordanWigner;
    throw UsageError("unknown fermion convention '" + s + "' (use literal or jw)");
}

void validate_model(const ModelOpts& m)
{
    if (!is_known_model(m.id))
        throw UsageError("unknown model id '" + m.id + "' (osc, fd, cosmo, brst-unitary, gauss, penalty)");
    if (m.levels == 1)
        throw UsageError("--n must be at least 2");
    if (m.levels > 8 && m.id != "cosmo")
        throw UsageError("--n above 8 exceeds the dense-operator budget for three-direction models");
    if (m.component > 2)
        throw UsageError("--component must be 0, 1 or 2");
}

Operator build_model(const ModelOpts& m)
{
    validate_model(m);
    const std::size_t n = m.levels ? m.levels : default_levels(m.id);
    if (m.id == "osc") {
        ModelParams p;
        p.g = m.g;
        p.levels = n;
        p.fermions = parse_convention(m.fermions);
        return build_h_osc(p);
    }
    if (m.id == "fd")
        return build_h_fd(m.g, n, parse_convention(m.fermions));
    if (m.id == "cosmo")
        return build_h_cosmo(m.t, m.ksq, n, m.rho);
    if (m.id == "brst-unitary") {
        BrstConfig c;
        c.boson_levels = n;
        c.g = m.g;
        c.ghosts = parse_convention(m.ghosts);
        const BrstOperators ops = build_brst(c);
        if (m.brst_operator == "laplacian")
            return ops.laplacian;
        if (m.brst_operator == "omega")
            return ops.omega;
        if (m.brst_operator == "h-eff")
            return ops.h_eff;
        throw UsageError("--operator must be laplacian, omega or h-eff");
    }
    if (m.id == "gauss")
        return gauss_operators(n)[m.component];
    // penalty: bosonic oscillator Hamiltonian plus lambda sum_a G_a^2
    ModelParams p;
    p.levels = n;
    p.include_fermions = false;
    return penalty_hamiltonian(build_h_osc(p), m.lambda, gauss_operators(n));
}

void add_model_options(CLI::App* cmd, ModelOpts& m, bool positional_required)
{
    auto* id = cmd->add_option("model", m.id, "osc | fd | cosmo | brst-unitary | gauss | penalty");
    if (positional_required)
        id->required();
    cmd->add_option("--g", m.g, "coupling constant");
    cmd->add_option("--n", m.levels, "levels per bosonic direction");
    cmd->add_option("--fermions", m.fermions, "fermion convention: literal | jw");
    cmd->add_option("--ghosts", m.ghosts, "ghost convention for brst-unitary: jw | literal");
    cmd->add_option("--t", m.t, "time for the cosmological Hamiltonian");
    cmd->add_option("--ksq", m.ksq, "deformation strength k^2");
    cmd->add_option("--rho", m.rho, "linear driving coefficient rho(t)");
    cmd->add_option("--lambda", m.lambda, "penalty weight");
    cmd->add_option("--component", m.component, "Gauss generator index for the gauss model");
    cmd->add_option("--operator", m.brst_operator, "brst-unitary output: laplacian | omega | h-eff");
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open input file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("invalid JSON in '" + path + "': " + e.what());
    }
}

/// Pads non-power-of-two operators to the smallest register that holds them.
Operator as_register_operator(const Operator& h)
{
    if (qubits_for_dim(h.dim()) > 0)
        return h;
    return pad_to_qubits(h, qubits_to_hold(h.dim()));
}

struct Target {
    std::optional<Operator> dense;
    PauliSum pauli;
};

Target resolve_target(const ModelOpts& m, const std::string& input, double threshold)
{
    Target t;
    if (!input.empty()) {
        const json j = read_json_file(input);
        if (j.contains("terms")) {
            t.pauli = pauli_sum_from_json(j);
            return t;
        }
        t.dense = as_register_operator(operator_from_json(j));
    } else if (!m.id.empty()) {
        t.dense = as_register_operator(build_model(m));
    } else {
        throw UsageError("give a model id or --in FILE");
    }
    if (!t.dense->is_hermitian()) {
        std::ostringstream os;
        os << "operator is not Hermitian (max asymmetry " << t.dense->max_asymmetry() << ")";
        throw UsageError(os.str());
    }
    t.pauli = decompose(*t.dense, threshold);
    return t;
}

int cmd_build(const ModelOpts& m, const OutputOpts& o, bool min_eig)
{
    const Operator h = build_model(m);
    Sink sink(o.out);
    sink.payload() << dump(to_json(h), -1) << '\n';
    full_precision(sink.info()) << "dim " << h.dim() << " hermitian " << (h.is_hermitian() ? "yes" : "no")
                                << " max_asymmetry " << h.max_asymmetry() << '\n';
    if (min_eig)
        sink.info() << "min_eigenvalue " << min_eigenvalue(h) << '\n';
    return 0;
}

int cmd_decompose(const ModelOpts& m, const std::string& input, double threshold, int pad, const OutputOpts& o)
{
    Operator h = input.empty() ? build_model(m) : operator_from_json(read_json_file(input));
    if (pad > 0)
        h = pad_to_qubits(h, pad);
    else
        h = as_register_operator(h);
    const PauliSum p = decompose(h, threshold);
    Sink sink(o.out);
    if (o.format == "csv")
        write_pauli_csv(sink.payload(), p);
    else
        sink.payload() << dump(to_json(p)) << '\n';
    sink.info() << "n_qubits " << p.n_qubits() << " terms " << p.size() << '\n';
    return 0;
}

int cmd_vqe(const ModelOpts& m, const std::string& input, std::size_t depth, const VqeOptions& opt,
            const std::string& trace_path, const OutputOpts& o)
{
    const Target t = resolve_target(m, input, kDefaultPauliThreshold);
    const Operator dense = t.dense ? *t.dense : reconstruct(t.pauli);
    const double exact = min_eigenvalue(dense);
    const VqeResult r = minimize(t.pauli, {t.pauli.n_qubits(), depth}, opt);
    json j = to_json(r);
    j["exact_discrete"] = exact;
    j["n_qubits"] = t.pauli.n_qubits();
    j["pauli_terms"] = t.pauli.size();
    j["depth"] = depth;
    j["seed"] = opt.seed;
    Sink sink(o.out);
    sink.payload() << dump(j) << '\n';
    if (!trace_path.empty()) {
        std::ofstream tr(trace_path);
        if (!tr)
            throw UsageError("cannot open trace file '" + trace_path + "'");
        write_trace_csv(tr, r.trace);
    }
    full_precision(sink.info()) << "best_energy " << r.best_energy << " exact " << exact << " evaluations "
                                << r.evaluations << (r.converged ? " converged" : " not-converged") << '\n';
    return 0;
}

struct EohOpts {
    std::string model = "cosmo";
    double t_initial = 0.1;
    double t_final = 4.0;
    std::size_t slices = 100;
    std::size_t steps = 1;
    std::string order = "first";
    double ksq = 0.25;
    double omega = 1.0;
    std::size_t levels = 4;
    std::string initial = "0";
    std::string snapshots;
};

Statevector initial_state(const std::string& spec, std::size_t n_qubits)
{
    if (spec == "uniform") {
        const std::size_t dim = std::size_t{1} << n_qubits;
        return Statevector(Vector(Vector::Constant(static_cast<Eigen::Index>(dim), 1.0 / std::sqrt(double(dim)))));
    }
    std::size_t idx = 0;
    try {
        std::size_t used = 0;
        idx = std::stoul(spec, &used);
        if (used != spec.size())
            throw std::invalid_argument(spec);
    } catch (const std::logic_error&) {
        throw UsageError("--initial must be a basis index or 'uniform'");
    }
    return Statevector::basis(n_qubits, idx);
}

int cmd_eoh(const EohOpts& e, const OutputOpts& o)
{
    const TimeGrid grid{e.t_initial, e.t_final, e.slices};
    grid.validate(e.model == "cosmo");
    if (e.levels < 2 || qubits_for_dim(e.levels) <= 0)
        throw UsageError("--n must be a power of two >= 2 for register evolution");
    std::function<Operator(double)> hd;
    if (e.model == "cosmo") {
        hd = [&](double t) { return build_h_cosmo(t, e.ksq, e.levels); };
    } else if (e.model == "sho") {
        hd = [&](double) {
            const Operator x = q_fd(e.levels);
            return 0.5 * p2_fd(e.levels) + (0.5 * e.omega * e.omega) * (x * x);
        };
    } else if (e.model == "zero") {
        hd = [&](double) { return Operator::zero(e.levels); };
    } else {
        throw UsageError("eoh model must be cosmo, sho or zero");
    }
    TrotterOptions topt;
    topt.steps_per_slice = e.steps;
    if (e.order == "second")
        topt.order = TrotterOrder::Second;
    else if (e.order != "first")
        throw UsageError("--order must be first or second");

    const std::size_t nq = static_cast<std::size_t>(qubits_for_dim(e.levels));
    const Statevector psi0 = initial_state(e.initial, nq);
    const auto hp = [&](double t) {
        const Operator h = hd(t);
        return h.max_abs() == 0.0 ? PauliSum(nq, {}) : decompose(h);
    };

    std::unique_ptr<std::ofstream> snap;
    if (!e.snapshots.empty()) {
        snap = std::make_unique<std::ofstream>(e.snapshots);
        if (!*snap)
            throw UsageError("cannot open snapshot file '" + e.snapshots + "'");
        write_snapshot_header(*snap);
        write_snapshot_rows(*snap, e.t_initial, psi0);
    }
    const SliceObserver obs = snap ? SliceObserver([&](std::size_t, double t, const Statevector& psi) {
        write_snapshot_rows(*snap, t, psi);
    })
                                   : SliceObserver{};
    const Statevector trot = trotter_evolve(hp, grid, psi0, topt, obs);
    const Statevector exact = exact_evolve(hd, grid, psi0);

    json dev = json::array();
    for (std::size_t k = 0; k < trot.dim(); ++k)
        dev.push_back(std::abs(trot[k] - exact[k]));
    const double worst = max_abs_diff(trot, exact);
    const json j = {{"schema", kSchemaVersion},
                    {"model", e.model},
                    {"t_initial", e.t_initial},
                    {"t_final", e.t_final},
                    {"n_slices", e.slices},
                    {"steps_per_slice", e.steps},
                    {"trotter", to_json(trot)},
                    {"exact", to_json(exact)},
                    {"deviation", dev},
                    {"max_deviation", worst}};
    Sink sink(o.out);
    sink.payload() << dump(j) << '\n';
    full_precision(sink.info()) << "max |trotter - exact| " << worst << '\n';
    return 0;
}

int cmd_brst(std::size_t levels, double g, const std::string& ghosts, const std::string& modes_path,
             const OutputOpts& o)
{
    BrstConfig c;
    c.boson_levels = levels;
    c.g = g;
    c.ghosts = parse_convention(ghosts);
    const BrstOperators ops = build_brst(c);
    const NilpotencyReport nil = nilpotency_residual(ops.omega, levels);
    const double lmin = min_eigenvalue(ops.laplacian);
    const auto modes = physical_zero_modes(ops);
    double worst = 0.0;
    for (const auto& v : modes)
        worst = std::max(worst, ops.omega.apply(v).norm());
    const std::size_t terms = decompose(pad_to_qubits(ops.laplacian, c.padded_qubits())).size();
    const json j = {{"schema", kSchemaVersion},
                    {"boson_levels", levels},
                    {"g", g},
                    {"dim", c.total_dim()},
                    {"padded_qubits", c.padded_qubits()},
                    {"nilpotency_full", nil.full},
                    {"nilpotency_safe", nil.safe},
                    {"laplacian_min_eigenvalue", lmin},
                    {"zero_modes", modes.size()},
                    {"max_omega_on_zero_modes", worst},
                    {"padded_pauli_terms", terms}};
    Sink sink(o.out);
    sink.payload() << dump(j) << '\n';
    if (!modes_path.empty()) {
        std::ofstream f(modes_path);
        if (!f)
            throw UsageError("cannot open zero-mode file '" + modes_path + "'");
        json arr = json::array();
        const std::size_t dim = std::size_t{1} << c.padded_qubits();
        for (const auto& v : modes) {
            Vector padded = Vector::Zero(static_cast<Eigen::Index>(dim));
            padded.head(v.size()) = v;
            arr.push_back(to_json(Statevector(padded)));
        }
        f << dump(arr) << '\n';
    }
    full_precision(sink.info()) << "lambda_min " << lmin << " zero_modes " << modes.size() << " nilpotency_safe "
                                << nil.safe << '\n';
    return 0;
}

int cmd_physical_states(std::size_t levels, std::size_t count, const OutputOpts& o)
{
    if (levels < 2)
        throw UsageError("--n must be at least 2");
    if (qubits_for_dim(levels * levels * levels) < 0)
        throw UsageError("--n must give a power-of-two bosonic dimension (e.g. 2 or 4)");
    const auto states = physical_states(levels, count);
    const Triple g = gauss_operators(levels);
    json arr = json::array();
    for (const auto& s : states) {
        double res = 0.0;
        for (const auto& ga : g)
            res = std::max(res, ga.apply(s.amplitudes()).norm());
        json e = to_json(s);
        e["gauss_residual"] = res;
        arr.push_back(e);
    }
    Sink sink(o.out);
    sink.payload() << dump(json{{"schema", kSchemaVersion}, {"states", arr}}) << '\n';
    sink.info() << "states " << states.size() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Matrix-model quantum simulation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mmsim 1.0");

    ModelOpts model;
    OutputOpts out;
    auto add_output = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("-o,--out", out.out, "output path ('-' for stdout)");
        if (with_format)
            cmd->add_option("--format", out.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* build = app.add_subcommand("build", "build a model operator and write it as JSON");
    add_model_options(build, model, true);
    bool min_eig = false;
    build->add_flag("--min-eig", min_eig, "also report the lowest eigenvalue");
    add_output(build, false);

    auto* dec = app.add_subcommand("decompose", "map an operator to a Pauli sum");
    add_model_options(dec, model, false);
    std::string input;
    double threshold = kDefaultPauliThreshold;
    int pad = 0;
    dec->add_option("--in", input, "operator JSON file instead of a model id");
    dec->add_option("--threshold", threshold, "drop coefficients with |c| <= threshold")->check(CLI::NonNegativeNumber);
    dec->add_option("--pad", pad, "zero-pad to this many qubits first");
    add_output(dec, true);

    auto* vqe = app.add_subcommand("vqe", "variational ground-state search");
    add_model_options(vqe, model, false);
    vqe->add_option("--in", input, "operator or Pauli-sum JSON file instead of a model id");
    std::size_t depth = 3;
    VqeOptions vopt;
    std::string optimizer = "bfgs", trace;
    vqe->add_option("--depth", depth, "entangling blocks in the ansatz");
    vqe->add_option("--seed", vopt.seed, "RNG seed for restarts");
    vqe->add_option("--restarts", vopt.restarts, "restarts including the all-zeros start")->check(CLI::PositiveNumber);
    vqe->add_option("--max-evals", vopt.max_evals, "energy evaluations per restart")->check(CLI::PositiveNumber);
    vqe->add_option("--optimizer", optimizer, "bfgs | nelder-mead")->check(CLI::IsMember({"bfgs", "nelder-mead"}));
    vqe->add_option("--trace", trace, "write the evaluation trace as CSV");
    add_output(vqe, false);

    auto* eoh = app.add_subcommand("eoh", "Trotter evolution against the exact per-slice oracle");
    EohOpts eopt;
    eoh->add_option("model", eopt.model, "cosmo | sho | zero");
    eoh->add_option("--t-initial", eopt.t_initial);
    eoh->add_option("--t-final", eopt.t_final);
    eoh->add_option("--slices", eopt.slices);
    eoh->add_option("--steps", eopt.steps, "first-order steps per slice");
    eoh->add_option("--order", eopt.order, "first | second");
    eoh->add_option("--ksq", eopt.ksq, "deformation strength k^2");
    eoh->add_option("--omega", eopt.omega, "oscillator frequency for sho");
    eoh->add_option("--n", eopt.levels, "grid points (power of two)");
    eoh->add_option("--initial", eopt.initial, "basis index or 'uniform'");
    eoh->add_option("--snapshots", eopt.snapshots, "write per-slice amplitudes as CSV");
    add_output(eoh, false);

    auto* brst = app.add_subcommand("brst", "unitary-gauge BRST charge and Laplacian report");
    std::size_t brst_levels = 3;
    double brst_g = 0.1;
    std::string ghosts = "jw", modes_path;
    brst->add_option("--n", brst_levels, "levels per bosonic direction");
    brst->add_option("--g", brst_g, "coupling constant");
    brst->add_option("--ghosts", ghosts, "jw | literal");
    brst->add_option("--zero-modes", modes_path, "write zero modes as a JSON array of statevectors");
    add_output(brst, false);

    auto* phys = app.add_subcommand("physical-states", "gauge-invariant oscillator states");
    std::size_t phys_levels = 4, phys_count = 4;
    phys->add_option("--n", phys_levels, "levels per bosonic direction");
    phys->add_option("--count", phys_count, "number of states");
    add_output(phys, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*build)
            return cmd_build(model, out, min_eig);
        if (*dec)
            return cmd_decompose(model, input, threshold, pad, out);
        if (*vqe) {
            vopt.optimizer = optimizer == "bfgs" ? OptimizerKind::BFGS : OptimizerKind::NelderMead;
            return cmd_vqe(model, input, depth, vopt, trace, out);
        }
        if (*eoh)
            return cmd_eoh(eopt, out);
        if (*brst)
            return cmd_brst(brst_levels, brst_g, ghosts, modes_path, out);
        if (*phys)
            return cmd_physical_states(phys_levels, phys_count, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
