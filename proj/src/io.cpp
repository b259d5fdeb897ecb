#include "pstomo/io.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "pstomo/error.hpp"

namespace pstomo::io {

namespace {

json complex_array(std::span<const Complex> v) {
    json a = json::array();
    for (const Complex& z : v) a.push_back(json::array({z.real(), z.imag()}));
    return a;
}

CVector parse_complex_array(const json& j, const char* what) {
    if (!j.is_array()) throw ValueError(std::string(what) + " must be an array of [re, im] pairs");
    CVector v;
    v.reserve(j.size());
    for (const json& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw ValueError(std::string(what) + " entries must be [re, im] pairs");
        }
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return v;
}

template <class T>
T require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ValueError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValueError(std::string("field '") + key + "': " + e.what());
    }
}

json node_json(const NodeReport& n) {
    json cands = json::array();
    for (const Complex& z : n.candidates) cands.push_back(json::array({z.real(), z.imag()}));
    return json{{"m", n.m},
                {"status", std::string(to_string(n.status))},
                {"residual", n.residual},
                {"degeneracy_metric", n.degeneracy_metric},
                {"rows", n.rows},
                {"clamped", n.clamped},
                {"candidates", cands}};
}

} // namespace

json to_json(const PureState& s) { return json{{"dim", s.dim()}, {"amplitudes", complex_array(s.amplitudes())}}; }

PureState state_from_json(const json& j, bool renormalize) {
    const auto dim = require<std::size_t>(j, "dim");
    CVector amps = parse_complex_array(require<json>(j, "amplitudes"), "amplitudes");
    if (dim == 0 || amps.size() != dim) throw DimensionError("state file: 'dim' does not match the amplitude count");
    const double n = norm(amps);
    if (!renormalize && std::abs(n - 1.0) > kFileNormTolerance) {
        throw ValueError("state file: amplitudes are not normalized (norm " + std::to_string(n) +
                         "); pass --renormalize to accept");
    }
    return PureState::normalized(std::move(amps));
}

json to_json(const OrthonormalBasis& b) {
    json j;
    j["dim"] = b.dim();
    j["kind"] = std::string(to_string(b.kind()));
    if (b.params()) {
        j["params"] = json{{"a", b.params()->a}, {"b", b.params()->b}, {"phi", b.params()->phi}};
    } else {
        j["params"] = nullptr;
    }
    json vs = json::array();
    for (const CVector& v : b.vectors()) vs.push_back(complex_array(v));
    j["vectors"] = std::move(vs);
    json nm = json::object();
    if (b.has_node_map()) {
        for (std::size_t m = 1; m < b.dim(); ++m) nm[std::to_string(m)] = b.node_index(m);
    }
    j["node_map"] = std::move(nm);
    return j;
}

OrthonormalBasis basis_from_json(const json& j) {
    const auto dim = require<std::size_t>(j, "dim");
    const BasisKind kind = basis_kind_from_string(require<std::string>(j, "kind"));
    const json& vs = require<json>(j, "vectors");
    if (!vs.is_array() || vs.size() != dim) throw DimensionError("basis file: expected 'dim' vectors");
    std::vector<CVector> vectors;
    vectors.reserve(dim);
    for (const json& v : vs) vectors.push_back(parse_complex_array(v, "vectors"));

    std::optional<TreeBasisParams> params;
    if (j.contains("params") && j["params"].is_object()) {
        params = TreeBasisParams{require<double>(j["params"], "a"), require<double>(j["params"], "b"),
                                 require<double>(j["params"], "phi")};
        params->validate();
    }

    std::vector<std::size_t> node_map;
    if (kind != BasisKind::canonical) {
        const json& nm = require<json>(j, "node_map");
        if (!nm.is_object()) throw ValueError("basis file: 'node_map' must be an object");
        node_map.assign(dim, 0);
        std::vector<bool> seen(dim, false);
        for (auto it = nm.begin(); it != nm.end(); ++it) {
            std::size_t m = 0;
            try {
                m = std::stoul(it.key());
            } catch (const std::exception&) {
                throw ValueError("basis file: node_map keys must be node indices");
            }
            if (m < 1 || m >= dim) throw DimensionError("basis file: node_map key out of range");
            node_map[m] = it.value().get<std::size_t>();
            seen[m] = true;
        }
        for (std::size_t m = 1; m < dim; ++m) {
            if (!seen[m]) throw ValueError("basis file: node_map is missing node " + std::to_string(m));
        }
    }
    OrthonormalBasis basis(kind, std::move(vectors), std::move(node_map), params);
    if (gram_deviation(basis) > kFileNormTolerance) throw ValueError("basis file: vectors are not orthonormal");
    return basis;
}

json to_json(const OutcomeCounts& c) {
    json j;
    j["basis"] = c.basis_id;
    if (c.shots.is_exact()) {
        j["shots"] = "exact";
        j["counts"] = c.exact_probs;
    } else {
        j["shots"] = c.shots.count();
        j["counts"] = c.counts;
    }
    return j;
}

OutcomeCounts counts_from_json(const json& j) {
    OutcomeCounts c;
    c.basis_id = require<int>(j, "basis");
    const json& shots = require<json>(j, "shots");
    const json& counts = require<json>(j, "counts");
    if (!counts.is_array() || counts.empty()) throw ValueError("counts file: 'counts' must be a non-empty array");
    if (shots.is_string()) {
        c.shots = Shots::parse(shots.get<std::string>());
        if (!c.shots.is_exact()) throw ValueError("counts file: string shots must be \"exact\"");
        c.exact_probs = counts.get<std::vector<double>>();
    } else {
        c.shots = Shots::finite(shots.get<std::uint64_t>());
        c.counts = counts.get<std::vector<std::uint64_t>>();
        std::uint64_t sum = 0;
        for (auto k : c.counts) sum += k;
        if (sum != c.shots.count()) throw ValueError("counts file: counts do not sum to shots");
    }
    return c;
}

json to_json(const ReconstructionReport& r) {
    json j = to_json(r.state);
    json nodes = json::array();
    for (const NodeReport& n : r.nodes) nodes.push_back(node_json(n));
    j["nodes"] = std::move(nodes);
    return j;
}

json to_json(const NoiseCorrectedReport& r) {
    json j = to_json(r.reconstruction);
    j["lambda_hat"] = r.lambda.lambda_hat;
    j["lambda_spread"] = r.lambda.spread;
    json per = json::array();
    for (const auto& e : r.lambda.per_node) {
        per.push_back(json{{"m", e.m}, {"lambda_abs", e.lambda_abs}, {"lambda_hat", e.lambda_hat}, {"clamped", e.clamped}});
    }
    j["lambda_per_node"] = std::move(per);
    j["clamped_amplitudes"] = r.clamped_amplitudes;
    return j;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("cannot parse '" + path.string() + "': " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::out | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace pstomo::io
