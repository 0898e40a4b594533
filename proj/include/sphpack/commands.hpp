#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sphpack/acceptance.hpp"
#include "sphpack/constants.hpp"
#include "sphpack/density.hpp"
#include "sphpack/io.hpp"
#include "sphpack/lp.hpp"
#include "sphpack/packing.hpp"
#include "sphpack/stargraph.hpp"
#include "sphpack/voronoi.hpp"

namespace sphpack::cli {

inline int thread_count() {
    if (const char* env = std::getenv("SPHPACK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// constants: every named constant with formula, value, oracle and pass flag.
inline std::string constants_json() {
    std::ostringstream out;
    out << "{\n";
    const auto consts = constants::all_constants();
    for (std::size_t i = 0; i < consts.size(); ++i) {
        const auto& c = consts[i];
        out << "  " << io::quoted(c.name) << ": {\"formula\": " << io::quoted(c.formula)
            << ", \"value\": " << io::fmt(c.value);
        if (c.has_oracle)
            out << ", \"oracle\": " << io::fmt(c.oracle) << ", \"tolerance\": " << io::fmt(c.tolerance);
        out << ", \"pass\": " << (c.pass() ? "true" : "false") << "}";
        if (i + 1 < consts.size()) out << ",";
        out << "\n";
    }
    out << "}\n";
    return out.str();
}

inline int cmd_constants(const std::optional<std::string>& out_file, std::ostream& console) {
    const std::string text = constants_json();
    if (out_file) {
        io::write_file(*out_file, text);
        io::RunManifest m;
        m.command = "constants";
        m.outputs = {*out_file};
        io::write_manifest(m, *out_file);
    } else {
        console << text;
    }
    for (const auto& c : constants::all_constants())
        if (!c.pass()) return 1;
    return 0;
}

inline int cmd_generate(const std::string& kind, double radius, std::uint64_t seed,
                        double spacing, const std::string& out_file) {
    packing::Packing p;
    if (kind == "fcc") {
        p = packing::fcc_packing(radius);
    } else if (kind == "hcp") {
        p = packing::hcp_packing(radius);
    } else if (kind == "random") {
        p = packing::saturate(packing::empty_packing(radius), seed, spacing);
    } else if (kind == "cubic") {
        p = packing::cubic_packing(radius);
    } else {
        throw std::invalid_argument("generate: unknown kind '" + kind + "'");
    }
    packing::validate(p);
    io::save_packing(p, out_file);

    io::RunManifest m;
    m.command = "generate";
    m.parameters = {{"kind", kind}, {"radius", io::fmt(radius)}, {"spacing", io::fmt(spacing)}};
    if (kind == "random") m.seed = seed;
    m.outputs = {out_file};
    io::write_manifest(m, out_file);
    return 0;
}

inline std::string voronoi_json(const packing::Packing& p, int threads) {
    const std::vector<int> interior = p.interior_indices();
    std::vector<voronoi::VoronoiCellRecord> records(interior.size());
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(interior.size())));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= interior.size()) break;
                records[i] = voronoi::voronoi_cell(p, interior[i]);
            }
        });
    }
    for (auto& th : pool) th.join();

    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i) out << ",";
        out << "\n  {\"index\": " << r.index << ", \"vertex\": [" << io::fmt(r.vertex.x) << ", "
            << io::fmt(r.vertex.y) << ", " << io::fmt(r.vertex.z)
            << "], \"volume\": " << io::fmt(r.volume)
            << ", \"circumradius\": " << io::fmt(r.circumradius)
            << ", \"face_count\": " << r.cell.face_count() << "}";
    }
    out << "\n]\n";
    return out.str();
}

inline int cmd_voronoi(const std::string& packing_file, const std::string& out_file) {
    const auto p = io::load_packing(packing_file);
    io::write_file(out_file, voronoi_json(p, thread_count()));
    io::RunManifest m;
    m.command = "voronoi";
    m.parameters = {{"packing", packing_file}};
    m.outputs = {out_file};
    io::write_manifest(m, out_file);
    return 0;
}

inline std::string density_csv(const packing::Packing& p, const Vec3& x,
                               const std::vector<double>& radii, double C1) {
    const auto scan = density::density_bound_scan(p, x, radii, C1);
    std::ostringstream out;
    out << "r,A,delta,bound,satisfied,fitted_C\n";
    for (const auto& c : scan.checks) {
        const auto rep = density::finite_density(p, x, c.r);
        out << io::fmt(c.r) << "," << io::fmt(rep.A) << "," << io::fmt(c.delta) << ","
            << io::fmt(c.bound) << "," << (c.satisfied ? "true" : "false") << ","
            << io::fmt(c.fitted_C) << "\n";
    }
    return out.str();
}

inline int cmd_density(const std::string& packing_file, const Vec3& x,
                       const std::vector<double>& radii, double C1, const std::string& out_file) {
    const auto p = io::load_packing(packing_file);
    io::write_file(out_file, density_csv(p, x, radii, C1));
    io::RunManifest m;
    m.command = "density";
    std::ostringstream rs;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (i) rs << ",";
        rs << io::fmt(radii[i]);
    }
    m.parameters = {{"packing", packing_file},
                    {"x", io::fmt(x.x) + "," + io::fmt(x.y) + "," + io::fmt(x.z)},
                    {"radii", rs.str()},
                    {"C1", io::fmt(C1)}};
    m.outputs = {out_file};
    io::write_manifest(m, out_file);
    return 0;
}

// Emits the graph of one vertex's local star. Configurations that do not
// yield a valid plane graph are reported as class OTHER with empty faces.
inline std::string graph_json_for_vertex(const packing::Packing& p, int vertex) {
    const auto star = stargraph::local_star(p, vertex);
    try {
        const auto g = stargraph::star_graph(star);
        const auto cls = stargraph::classify(g);
        return io::graph_to_json(g, stargraph::to_string(cls.cls),
                                 io::hex_encode(stargraph::canonical_form(g)));
    } catch (const stargraph::NotPlaneGraph&) {
    } catch (const hull::DegenerateHull&) {
    }
    stargraph::PlaneGraph bare;
    bare.n = static_cast<int>(star.u_set.size());
    for (int i = 0; i < bare.n; ++i)
        for (int j = i + 1; j < bare.n; ++j)
            if (distance(star.u_set[static_cast<std::size_t>(i)],
                         star.u_set[static_cast<std::size_t>(j)]) <= constants::kTwoT0)
                bare.edges.emplace_back(i, j);
    return io::graph_to_json(bare, "OTHER", std::nullopt);
}

inline int cmd_graph(const std::string& packing_file, int vertex, const std::string& out_file) {
    const auto p = io::load_packing(packing_file);
    io::write_file(out_file, graph_json_for_vertex(p, vertex));
    io::RunManifest m;
    m.command = "graph";
    m.parameters = {{"packing", packing_file}, {"vertex", std::to_string(vertex)}};
    m.outputs = {out_file};
    io::write_manifest(m, out_file);
    return 0;
}

inline int cmd_graph_emit_references(const std::string& out_file) {
    io::write_file(out_file, io::reference_codes_to_json(io::current_reference_codes()));
    io::RunManifest m;
    m.command = "graph --emit-references";
    m.outputs = {out_file};
    io::write_manifest(m, out_file);
    return 0;
}

inline int cmd_bnb_demo(const std::string& graph_file, double target, long max_nodes,
                        const std::string& out_file) {
    const auto g = io::graph_from_json(io::read_file(graph_file));
    if (g.edge_count() == 0 || g.faces.empty())
        throw std::invalid_argument("bnb-demo: graph file has no usable plane graph");
    const auto res = lp::face_score_demo(g, target, max_nodes);
    io::write_file(out_file, io::bnb_result_to_json(res));
    io::RunManifest m;
    m.command = "bnb-demo";
    m.parameters = {{"graph", graph_file},
                    {"target", io::fmt(target)},
                    {"max_nodes", std::to_string(max_nodes)}};
    m.outputs = {out_file};
    io::write_manifest(m, out_file);
    return 0;
}

// ---------------------------------------------------------------------------
// verify-all: the library acceptance suite plus the CLI-level checks
// (reference data file integrity, byte-identical reruns).

inline std::vector<acceptance::CheckResult> run_cli_checks(const std::string& data_file) {
    namespace fs = std::filesystem;
    std::vector<acceptance::CheckResult> out;

    // Reference data file must match the regenerated codes.
    try {
        const auto stored = io::reference_codes_from_json(io::read_file(data_file));
        const auto fresh = io::current_reference_codes();
        const bool ok = stored.fcc_hex == fresh.fcc_hex && stored.hcp_hex == fresh.hcp_hex &&
                        stored.pent_hex == fresh.pent_hex;
        out.push_back({"graph.reference_data_file", ok,
                       ok ? data_file + " matches regenerated canonical codes"
                          : data_file + " DIFFERS from regenerated canonical codes"});
    } catch (const std::exception& e) {
        out.push_back({"graph.reference_data_file", false, std::string("unreadable: ") + e.what()});
    }

    // Reruns must reproduce outputs byte for byte.
    try {
        const fs::path dir = fs::temp_directory_path() / "sphpack-verify";
        fs::create_directories(dir);
        const std::string pack = (dir / "fcc12.json").string();
        cmd_generate("fcc", 12.0, 0, 0.25, pack);

        // Rerun each command with identical parameters and compare bytes.
        const std::string dcsv = (dir / "density.csv").string();
        cmd_density(pack, {0, 0, 0}, {5.0, 8.0}, 0.0, dcsv);
        const std::string csv_first = io::read_file(dcsv);
        const std::string manifest_first = io::read_file(dcsv + ".manifest.json");
        cmd_density(pack, {0, 0, 0}, {5.0, 8.0}, 0.0, dcsv);
        const bool csv_same = io::read_file(dcsv) == csv_first &&
                              io::read_file(dcsv + ".manifest.json") == manifest_first;

        const auto p = io::load_packing(pack);
        int origin = -1;
        for (int i = 0; i < static_cast<int>(p.centers.size()); ++i)
            if (norm(p.centers[static_cast<std::size_t>(i)]) < 1e-9) origin = i;
        const std::string gjson = (dir / "graph.json").string();
        cmd_graph(pack, origin, gjson);
        const std::string graph_first = io::read_file(gjson);
        cmd_graph(pack, origin, gjson);
        const bool graph_same = io::read_file(gjson) == graph_first;

        out.push_back({"cli.rerun_byte_identical", csv_same && graph_same,
                       "density CSV and graph JSON reruns are byte-identical"});
    } catch (const std::exception& e) {
        out.push_back({"cli.rerun_byte_identical", false, e.what()});
    }
    return out;
}

inline int cmd_verify_all(bool json, const std::string& data_file, std::ostream& console) {
    auto checks = acceptance::run_library_checks();
    for (auto& c : run_cli_checks(data_file)) checks.push_back(std::move(c));

    bool all = true;
    for (const auto& c : checks) all = all && c.pass;

    if (json) {
        std::ostringstream out;
        out << "{\n  \"pass\": " << (all ? "true" : "false") << ",\n  \"checks\": [";
        for (std::size_t i = 0; i < checks.size(); ++i) {
            if (i) out << ",";
            out << "\n    {\"name\": " << io::quoted(checks[i].name)
                << ", \"pass\": " << (checks[i].pass ? "true" : "false")
                << ", \"detail\": " << io::quoted(checks[i].detail) << "}";
        }
        out << "\n  ]\n}\n";
        console << out.str();
    } else {
        for (const auto& c : checks)
            console << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
        console << (all ? "all checks passed" : "SOME CHECKS FAILED") << " ("
                << checks.size() << " checks)\n";
    }
    return all ? 0 : 1;
}

}  // namespace sphpack::cli
