#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphpack/lp.hpp"
#include "sphpack/packing.hpp"
#include "sphpack/stargraph.hpp"

namespace sphpack::io {

inline constexpr const char* kToolVersion = "0.1.0";

// All emitted reals use 17 significant digits: round-trips IEEE doubles
// exactly, which makes rerun outputs byte-identical.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string quoted(const std::string& s) { return "\"" + json_escape(s) + "\""; }

inline std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

inline std::vector<std::uint8_t> hex_decode(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string with odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("invalid hex digit");
    };
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Packing files: {label, window:{center:[x,y,z], radius}, centers:[[x,y,z],..]}

inline std::string packing_to_json(const packing::Packing& p) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"label\": " << quoted(p.label) << ",\n";
    out << "  \"window\": {\"center\": [" << fmt(p.window.center.x) << ", "
        << fmt(p.window.center.y) << ", " << fmt(p.window.center.z)
        << "], \"radius\": " << fmt(p.window.radius) << "},\n";
    out << "  \"centers\": [";
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
        if (i) out << ",";
        out << "\n    [" << fmt(p.centers[i].x) << ", " << fmt(p.centers[i].y) << ", "
            << fmt(p.centers[i].z) << "]";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

inline packing::Packing packing_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    packing::Packing p;
    p.label = j.at("label").get<std::string>();
    const auto& w = j.at("window");
    const auto& c = w.at("center");
    p.window.center = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
    p.window.radius = w.at("radius").get<double>();
    for (const auto& v : j.at("centers"))
        p.centers.push_back({v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()});
    packing::validate(p);
    return p;
}

inline void save_packing(const packing::Packing& p, const std::string& path) {
    write_file(path, packing_to_json(p));
}

inline packing::Packing load_packing(const std::string& path) {
    return packing_from_json(read_file(path));
}

// ---------------------------------------------------------------------------
// Graph files: {n, edges, faces, class, canonical_code_hex}

inline std::string graph_to_json(const stargraph::PlaneGraph& g, const std::string& cls,
                                 const std::optional<std::string>& code_hex) {
    std::ostringstream out;
    out << "{\n  \"n\": " << g.n << ",\n  \"edges\": [";
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (e) out << ", ";
        out << "[" << g.edges[e].first << ", " << g.edges[e].second << "]";
    }
    out << "],\n  \"faces\": [";
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
        if (f) out << ", ";
        out << "[";
        for (std::size_t i = 0; i < g.faces[f].size(); ++i) {
            if (i) out << ", ";
            out << g.faces[f][i];
        }
        out << "]";
    }
    out << "],\n  \"class\": " << quoted(cls) << ",\n  \"canonical_code_hex\": "
        << (code_hex ? quoted(*code_hex) : "null") << "\n}\n";
    return out.str();
}

// Rebuilds a PlaneGraph (including its rotation system) from serialized
// edges and faces. The rotation at each vertex is recovered from the face
// cycles; graphs produced by star_graph round-trip exactly up to rotation
// starting points.
inline stargraph::PlaneGraph graph_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    stargraph::PlaneGraph g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges"))
        g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    for (const auto& f : j.at("faces")) {
        std::vector<int> cyc;
        for (const auto& v : f) cyc.push_back(v.get<int>());
        g.faces.push_back(std::move(cyc));
    }
    g.embedding_source = "file";

    // Rotation from oriented faces: at vertex v, the successor of the
    // incoming neighbor around v follows the face to the next edge.
    std::map<std::pair<int, int>, int> next_at;  // directed edge (u -> v) -> w after v on that face
    for (const auto& f : g.faces) {
        const std::size_t k = f.size();
        for (std::size_t i = 0; i < k; ++i) {
            const int u = f[i], v = f[(i + 1) % k], w = f[(i + 2) % k];
            next_at[{u, v}] = w;
        }
    }
    g.rotation.assign(static_cast<std::size_t>(g.n), {});
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
    for (const auto& [a, b] : g.edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (int v = 0; v < g.n; ++v) {
        const auto& nb = adj[static_cast<std::size_t>(v)];
        if (nb.empty()) continue;
        std::vector<int> order;
        int cur = nb.front();
        for (std::size_t t = 0; t < nb.size(); ++t) {
            order.push_back(cur);
            auto it = next_at.find({cur, v});
            if (it == next_at.end()) throw std::invalid_argument("graph file: faces do not close around a vertex");
            cur = it->second;
        }
        if (order.size() != nb.size() || cur != nb.front())
            throw std::invalid_argument("graph file: inconsistent rotation at a vertex");
        g.rotation[static_cast<std::size_t>(v)] = std::move(order);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Reference-code data file.

struct ReferenceCodes {
    std::string fcc_hex, hcp_hex, pent_hex;
};

inline std::string reference_codes_to_json(const ReferenceCodes& rc) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"fcc\": " << quoted(rc.fcc_hex) << ",\n";
    out << "  \"hcp\": " << quoted(rc.hcp_hex) << ",\n";
    out << "  \"pent\": " << quoted(rc.pent_hex) << "\n";
    out << "}\n";
    return out.str();
}

inline ReferenceCodes reference_codes_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    return {j.at("fcc").get<std::string>(), j.at("hcp").get<std::string>(),
            j.at("pent").get<std::string>()};
}

inline ReferenceCodes current_reference_codes() {
    const auto& refs = stargraph::reference_graphs();
    return {hex_encode(refs.fcc_code), hex_encode(refs.hcp_code), hex_encode(refs.pent_code)};
}

// ---------------------------------------------------------------------------
// Certificates.

inline std::string bnb_result_to_json(const lp::BnbResult& res) {
    std::ostringstream out;
    out << "{\n  \"outcome\": " << quoted(lp::to_string(res.outcome)) << ",\n";
    out << "  \"node_count\": " << res.node_count;
    if (res.certificate) {
        const auto& c = *res.certificate;
        out << ",\n  \"target\": " << fmt(c.target);
        out << ",\n  \"global_bound\": " << fmt(c.global_bound);
        out << ",\n  \"verified\": " << (c.verified ? "true" : "false");
        out << ",\n  \"max_depth\": " << c.max_depth;
        out << ",\n  \"leaves\": [";
        for (std::size_t i = 0; i < c.leaves.size(); ++i) {
            if (i) out << ",";
            out << "\n    {\"box\": {\"lo\": [";
            for (std::size_t d = 0; d < c.leaves[i].box.lo.size(); ++d) {
                if (d) out << ", ";
                out << fmt(c.leaves[i].box.lo[d]);
            }
            out << "], \"hi\": [";
            for (std::size_t d = 0; d < c.leaves[i].box.hi.size(); ++d) {
                if (d) out << ", ";
                out << fmt(c.leaves[i].box.hi[d]);
            }
            out << "]}, \"bound\": " << fmt(c.leaves[i].lp_bound) << "}";
        }
        out << "\n  ]";
    }
    if (res.witness) {
        out << ",\n  \"witness\": {\"point\": [";
        for (std::size_t d = 0; d < res.witness->point.size(); ++d) {
            if (d) out << ", ";
            out << fmt(res.witness->point[d]);
        }
        out << "], \"value\": " << fmt(res.witness->value) << "}";
    }
    out << "\n}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Run manifests: written next to every command output; reruns with the same
// manifest reproduce outputs byte for byte.

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;  // ordered for stable output
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
};

inline std::string manifest_to_json(const RunManifest& m) {
    std::ostringstream out;
    out << "{\n  \"command\": " << quoted(m.command) << ",\n  \"parameters\": {";
    bool first = true;
    for (const auto& [k, v] : m.parameters) {
        if (!first) out << ", ";
        first = false;
        out << quoted(k) << ": " << quoted(v);
    }
    out << "},\n  \"tool_version\": " << quoted(kToolVersion);
    if (m.seed) out << ",\n  \"seed\": " << *m.seed;
    out << ",\n  \"outputs\": [";
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        if (i) out << ", ";
        out << quoted(m.outputs[i]);
    }
    out << "]\n}\n";
    return out.str();
}

inline void write_manifest(const RunManifest& m, const std::string& primary_output) {
    write_file(primary_output + ".manifest.json", manifest_to_json(m));
}

}  // namespace sphpack::io
