// Command-line front end: packing generation, cell and density analysis,
// contact-graph extraction and the verification suite.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphpack/commands.hpp"

namespace {

sphpack::Vec3 parse_point(const std::string& s) {
    std::istringstream ss(s);
    double v[3];
    char comma;
    for (int i = 0; i < 3; ++i) {
        if (i > 0 && !(ss >> comma && comma == ','))
            throw CLI::ValidationError("--x", "expected x,y,z");
        if (!(ss >> v[i])) throw CLI::ValidationError("--x", "expected x,y,z");
    }
    return {v[0], v[1], v[2]};
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sphere-packing analysis toolkit"};
    app.require_subcommand(1);

    // constants
    auto* c_const = app.add_subcommand("constants", "print the named constants with verification");
    std::string const_out;
    c_const->add_option("--out", const_out, "write JSON to a file instead of stdout");

    // generate
    auto* c_gen = app.add_subcommand("generate", "generate a packing file");
    std::string gen_kind = "fcc", gen_out;
    double gen_radius = 8.0, gen_spacing = 0.25;
    std::uint64_t gen_seed = 1;
    c_gen->add_option("--kind", gen_kind, "fcc | hcp | random | cubic")->required();
    c_gen->add_option("--radius", gen_radius, "window radius")->required();
    c_gen->add_option("--seed", gen_seed, "RNG seed (random kind)");
    c_gen->add_option("--spacing", gen_spacing, "candidate grid spacing (random kind)");
    c_gen->add_option("--out", gen_out, "output packing JSON")->required();

    // voronoi
    auto* c_vor = app.add_subcommand("voronoi", "cells of all interior vertices");
    std::string vor_pack, vor_out;
    c_vor->add_option("--packing", vor_pack)->required();
    c_vor->add_option("--out", vor_out)->required();

    // density
    auto* c_den = app.add_subcommand("density", "finite densities and the explicit bound");
    std::string den_pack, den_out, den_x = "0,0,0", den_radii = "5,10,20,40";
    double den_c1 = 0.0;
    c_den->add_option("--packing", den_pack)->required();
    c_den->add_option("--x", den_x, "scan center as x,y,z");
    c_den->add_option("--radii", den_radii, "comma-separated radii");
    c_den->add_option("--C1", den_c1, "negligibility constant");
    c_den->add_option("--out", den_out)->required();

    // graph
    auto* c_gr = app.add_subcommand("graph", "contact graph of a vertex's local star");
    std::string gr_pack, gr_out;
    int gr_vertex = -1;
    bool gr_refs = false;
    c_gr->add_option("--packing", gr_pack);
    c_gr->add_option("--vertex", gr_vertex);
    c_gr->add_flag("--emit-references", gr_refs, "write the reference canonical codes");
    c_gr->add_option("--out", gr_out)->required();

    // bnb-demo
    auto* c_bnb = app.add_subcommand("bnb-demo", "bound certification on the demo face score");
    std::string bnb_graph, bnb_out;
    double bnb_target = 0.0;
    long bnb_nodes = 1000000;
    c_bnb->add_option("--graph", bnb_graph)->required();
    c_bnb->add_option("--target", bnb_target)->required();
    c_bnb->add_option("--max-nodes", bnb_nodes);
    c_bnb->add_option("--out", bnb_out)->required();

    // verify-all
    auto* c_ver = app.add_subcommand("verify-all", "run the full verification suite");
    bool ver_json = false;
    std::string ver_data = "data/reference_graphs.json";
    c_ver->add_flag("--json", ver_json, "machine-readable results");
    c_ver->add_option("--data", ver_data, "reference graph data file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_const->parsed()) {
            return sphpack::cli::cmd_constants(
                const_out.empty() ? std::nullopt : std::optional<std::string>(const_out), std::cout);
        }
        if (c_gen->parsed())
            return sphpack::cli::cmd_generate(gen_kind, gen_radius, gen_seed, gen_spacing, gen_out);
        if (c_vor->parsed()) return sphpack::cli::cmd_voronoi(vor_pack, vor_out);
        if (c_den->parsed())
            return sphpack::cli::cmd_density(den_pack, parse_point(den_x), parse_list(den_radii),
                                             den_c1, den_out);
        if (c_gr->parsed()) {
            if (gr_refs) return sphpack::cli::cmd_graph_emit_references(gr_out);
            if (gr_pack.empty() || gr_vertex < 0)
                throw CLI::ValidationError("graph", "need --packing and --vertex (or --emit-references)");
            return sphpack::cli::cmd_graph(gr_pack, gr_vertex, gr_out);
        }
        if (c_bnb->parsed())
            return sphpack::cli::cmd_bnb_demo(bnb_graph, bnb_target, bnb_nodes, bnb_out);
        if (c_ver->parsed()) return sphpack::cli::cmd_verify_all(ver_json, ver_data, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
