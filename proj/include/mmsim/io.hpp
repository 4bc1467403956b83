#pragma once

// JSON and CSV exchange formats. CSV floats carry 17 significant digits; JSON
// uses the shortest form that parses back to the same double.

#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmsim/circuit.hpp"
#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"
#include "mmsim/statevector.hpp"
#include "mmsim/vqe.hpp"

namespace mmsim {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::size_t require_size(const json& j, const char* key, std::size_t expected)
{
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != expected) {
        std::ostringstream os;
        os << "json: field '" << key << "' must be an array of " << expected << " numbers";
        throw UsageError(os.str());
    }
    return expected;
}

} // namespace detail

// -- Operator: {"dim", "re", "im"}, row-major ---------------------------------

inline json to_json(const Operator& op)
{
    const std::size_t n = op.dim();
    std::vector<double> re, im;
    re.reserve(n * n);
    im.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            re.push_back(op(r, c).real());
            im.push_back(op(r, c).imag());
        }
    return {{"schema", kSchemaVersion}, {"dim", n}, {"re", re}, {"im", im}};
}

inline Operator operator_from_json(const json& j)
{
    if (!j.contains("dim"))
        throw UsageError("json: operator needs 'dim'");
    const auto n = j.at("dim").get<std::size_t>();
    if (n == 0)
        throw UsageError("json: operator dimension must be positive");
    detail::require_size(j, "re", n * n);
    detail::require_size(j, "im", n * n);
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n * n; ++k)
        m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) =
            cplx(re[k].get<double>(), im[k].get<double>());
    return Operator(std::move(m));
}

// -- PauliSum: {"n_qubits", "terms": [{"coeff", "string"}]} -------------------

inline json to_json(const PauliSum& p)
{
    json terms = json::array();
    for (const auto& t : p)
        terms.push_back({{"coeff", t.coeff}, {"string", t.string.str()}});
    return {{"schema", kSchemaVersion}, {"n_qubits", p.n_qubits()}, {"terms", terms}};
}

inline PauliSum pauli_sum_from_json(const json& j)
{
    if (!j.contains("n_qubits") || !j.contains("terms"))
        throw UsageError("json: Pauli sum needs 'n_qubits' and 'terms'");
    std::vector<PauliTerm> terms;
    for (const auto& t : j.at("terms"))
        terms.push_back({t.at("coeff").get<double>(), PauliString(t.at("string").get<std::string>())});
    return PauliSum(j.at("n_qubits").get<std::size_t>(), std::move(terms));
}

// -- Statevector: {"n_qubits", "re", "im"} -------------------------------------

inline json to_json(const Statevector& psi)
{
    std::vector<double> re, im;
    for (std::size_t k = 0; k < psi.dim(); ++k) {
        re.push_back(psi[k].real());
        im.push_back(psi[k].imag());
    }
    return {{"schema", kSchemaVersion}, {"n_qubits", psi.n_qubits()}, {"re", re}, {"im", im}};
}

inline Statevector statevector_from_json(const json& j)
{
    if (!j.contains("n_qubits"))
        throw UsageError("json: statevector needs 'n_qubits'");
    const auto n = j.at("n_qubits").get<std::size_t>();
    const std::size_t dim = std::size_t{1} << n;
    detail::require_size(j, "re", dim);
    detail::require_size(j, "im", dim);
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k)
        v(static_cast<Eigen::Index>(k)) = cplx(j.at("re")[k].get<double>(), j.at("im")[k].get<double>());
    return Statevector(v);
}

// -- Circuit: ordered gate list ------------------------------------------------

inline json to_json(const Circuit& c)
{
    json gates = json::array();
    for (const auto& g : c.gates()) {
        json e = {{"gate", gate_name(g.kind)}};
        if (g.kind == GateKind::PauliRotation) {
            e["pauli"] = g.pauli.str();
        } else if (is_two_qubit(g.kind)) {
            e["qubits"] = {g.q0, g.q1};
        } else {
            e["qubits"] = {g.q0};
        }
        if (g.param)
            e["param"] = *g.param;
        else if (is_rotation(g.kind))
            e["angle"] = g.angle;
        gates.push_back(e);
    }
    return {{"schema", kSchemaVersion},
            {"n_qubits", c.n_qubits()},
            {"num_parameters", c.num_parameters()},
            {"gates", gates}};
}

// -- VQE -----------------------------------------------------------------------

inline json to_json(const VqeResult& r)
{
    return {{"schema", kSchemaVersion},
            {"best_energy", r.best_energy},
            {"best_params", r.best_params},
            {"evaluations", r.evaluations},
            {"converged", r.converged},
            {"best_restart", r.best_restart}};
}

// -- Text output ---------------------------------------------------------------

/// Stream manipulator state for round-trip-safe doubles.
inline std::ostream& full_precision(std::ostream& os)
{
    return os << std::setprecision(std::numeric_limits<double>::max_digits10);
}

/// JSON text. nlohmann writes the shortest round-trip-safe form of each double.
inline std::string dump(const json& j, int indent = 2) { return j.dump(indent); }

inline void write_pauli_csv(std::ostream& os, const PauliSum& p)
{
    full_precision(os) << "string,coeff\n";
    for (const auto& t : p)
        os << t.string.str() << ',' << t.coeff << '\n';
}

inline void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace)
{
    full_precision(os) << "eval_index,energy\n";
    for (const auto& t : trace)
        os << t.eval_index << ',' << t.energy << '\n';
}

inline void write_snapshot_header(std::ostream& os) { os << "t,index,re,im,prob\n"; }

/// One row per amplitude of psi at time t.
inline void write_snapshot_rows(std::ostream& os, double t, const Statevector& psi)
{
    full_precision(os);
    for (std::size_t k = 0; k < psi.dim(); ++k)
        os << t << ',' << k << ',' << psi[k].real() << ',' << psi[k].imag() << ',' << std::norm(psi[k]) << '\n';
}

} // namespace mmsim
