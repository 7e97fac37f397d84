#include "wildsimp/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "json.hpp"
#include "wildsimp/metrics.hpp"
#include "wildsimp/pipeline.hpp"

namespace wildsimp {

namespace {

using json = nlohmann::ordered_json;

struct SimplifyFlags {
    std::string input;
    std::string output;
    std::string report;
    std::string config;
    std::string mesh_colors;
    double ratio = 0.1;
    std::size_t target_faces = 0;
    double epsilon_rel = 1e-3;
    double area_weight = 1.0;
    std::string edge_acc = "memory";
    std::string area_acc = "memoryless";
    bool no_virtual_edges = false;
    bool preserve_topology = false;
    std::uint32_t virtual_edge_cap = 32;
    std::string area_edges = "boundary";
    double regularizer = 0.0;
    double weld_eps = 0.0;
    bool texture = false;
    int samples_per_edge = 4;
    int gutter = 2;
    int atlas_max = 8192;
    bool metrics = false;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::string normalize = "unit-diagonal";
    bool debug_checks = false;
    bool verbose = false;
};

struct MetricsFlags {
    std::string a, b;
    std::string report;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::string normalize = "unit-diagonal";
};

bool normalize_from_string(const std::string& s) {
    if (s == "unit-diagonal") return true;
    if (s == "none") return false;
    throw std::invalid_argument("normalization must be 'unit-diagonal' or 'none', got '" + s + "'");
}

AreaEdgeSet area_edges_from_string(const std::string& s) {
    if (s == "boundary") return AreaEdgeSet::Boundary;
    if (s == "full-link") return AreaEdgeSet::FullLink;
    throw std::invalid_argument("area edge set must be 'boundary' or 'full-link', got '" + s + "'");
}

/// Applies values from a config object (or a report holding one) to every
/// flag that was not given explicitly on the command line.
void apply_config_file(SimplifyFlags& f, const std::map<std::string, CLI::Option*>& opts) {
    std::ifstream in(f.config);
    if (!in) throw std::runtime_error(f.config + ": cannot open config");
    json j = json::parse(in);
    if (j.contains("config")) j = j["config"];
    auto given = [&](const char* name) { return opts.at(name)->count() > 0; };
    auto take = [&](const char* key, const char* flag, auto& dst) {
        if (j.contains(key) && !j[key].is_null() && !given(flag)) j[key].get_to(dst);
    };
    if (j.contains("target_faces") && !j["target_faces"].is_null() && !given("--ratio") && !given("--target-faces")) {
        f.target_faces = j["target_faces"].get<std::size_t>();
        opts.at("--target-faces")->add_result(std::to_string(f.target_faces));
    }
    take("ratio", "--ratio", f.ratio);
    take("epsilon_rel", "--epsilon-rel", f.epsilon_rel);
    take("area_weight", "--area-weight", f.area_weight);
    take("edge_acc", "--edge-acc", f.edge_acc);
    take("area_acc", "--area-acc", f.area_acc);
    if (j.contains("virtual_edges") && !given("--no-virtual-edges")) f.no_virtual_edges = !j["virtual_edges"].get<bool>();
    take("preserve_topology", "--preserve-topology", f.preserve_topology);
    take("virtual_edge_cap", "--virtual-edge-cap", f.virtual_edge_cap);
    take("area_edges", "--area-edges", f.area_edges);
    take("regularizer", "--regularizer", f.regularizer);
    take("weld_eps", "--weld-eps", f.weld_eps);
    take("texture", "--texture", f.texture);
    take("samples_per_edge", "--samples-per-edge", f.samples_per_edge);
    take("gutter", "--gutter", f.gutter);
    take("atlas_max", "--atlas-max", f.atlas_max);
    take("metrics", "--metrics", f.metrics);
    take("samples", "--samples", f.samples);
    take("seed", "--seed", f.seed);
    take("normalize", "--normalize", f.normalize);
}

json config_json(const SimplifyFlags& f, bool has_target) {
    json c;
    c["ratio"] = f.ratio;
    c["target_faces"] = has_target ? json(f.target_faces) : json(nullptr);
    c["epsilon_rel"] = f.epsilon_rel;
    c["area_weight"] = f.area_weight;
    c["edge_acc"] = f.edge_acc;
    c["area_acc"] = f.area_acc;
    c["virtual_edges"] = !f.no_virtual_edges;
    c["preserve_topology"] = f.preserve_topology;
    c["virtual_edge_cap"] = f.virtual_edge_cap;
    c["area_edges"] = f.area_edges;
    c["regularizer"] = f.regularizer;
    c["weld_eps"] = f.weld_eps;
    c["texture"] = f.texture;
    c["samples_per_edge"] = f.samples_per_edge;
    c["gutter"] = f.gutter;
    c["atlas_max"] = f.atlas_max;
    c["metrics"] = f.metrics;
    c["samples"] = f.samples;
    c["seed"] = f.seed;
    c["normalize"] = f.normalize;
    return c;
}

json metrics_json(const MetricReport& m) { return json::parse(m.to_json()); }

void emit_report(const json& report, const std::string& path, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error(path + ": cannot open report for writing");
    file << text;
}

int run_simplify(SimplifyFlags& f, bool has_target, std::ostream& out, std::ostream& err) {
    SimplifyOptions opts;
    DecimationConfig& d = opts.decimation;
    if (has_target) d.target_faces = f.target_faces;
    d.target_ratio = f.ratio;
    d.eps_rel = f.epsilon_rel;
    d.area_weight = f.area_weight;
    d.edge_quadric_mode = accumulation_from_string(f.edge_acc);
    d.area_quadric_mode = accumulation_from_string(f.area_acc);
    d.enable_virtual_edges = !f.no_virtual_edges;
    d.preserve_topology = f.preserve_topology;
    d.virtual_edge_cap = f.virtual_edge_cap;
    d.area_edges = area_edges_from_string(f.area_edges);
    d.regularizer = f.regularizer;
    d.debug_checks = f.debug_checks;
    d.record_history = f.texture;
    opts.weld_eps = f.weld_eps;
    opts.texture = {f.texture, f.samples_per_edge, f.gutter, f.atlas_max};
    if (f.texture && f.samples_per_edge < 1) throw std::invalid_argument("--samples-per-edge must be at least 1");
    const bool normalize = normalize_from_string(f.normalize);

    const RawMesh raw = load_mesh(f.input);
    if (f.verbose)
        err << "loaded " << f.input << ": " << raw.positions.size() << " vertices, " << raw.faces.size() << " faces ("
            << raw.stats.degenerate_faces << " degenerate dropped)\n";
    const SimplifyResult result = simplify(raw, opts);
    if (f.verbose)
        err << "virtual edges " << result.virtual_edges << ", collapses " << result.collapses << ", faces "
            << result.input_faces << " -> " << result.mesh.live_face_count() << "\n";

    if (!f.output.empty())
        save_mesh(result.mesh, result.atlas ? &result.atlas->corner_uvs : nullptr,
                  result.atlas ? &result.atlas->image : nullptr, f.output);
    if (!f.mesh_colors.empty()) {
        if (!f.texture) throw std::invalid_argument("--mesh-colors requires --texture");
        write_mesh_colors(f.mesh_colors, result.mesh.live_face_count(), result.samples, result.chart_of_owner,
                          f.samples_per_edge);
    }

    json report;
    report["schema"] = 1;
    report["command"] = "simplify";
    report["input_path"] = f.input;
    report["output_path"] = f.output.empty() ? json(nullptr) : json(f.output);
    report["config"] = config_json(f, has_target);
    report["input"] = {{"vertices", result.input_vertices}, {"faces", result.input_faces}};
    report["output"] = {{"vertices", result.mesh.live_vertex_count()},
                        {"edges", result.mesh.live_edge_count()},
                        {"faces", result.mesh.live_face_count()}};
    report["target_faces"] = result.target_faces;
    report["target_reached"] = result.target_reached;
    report["collapses"] = result.collapses;
    report["virtual_edges"] = result.virtual_edges;
    json timings = {{"virtual_edges", result.timings.virtual_edges}, {"collapses", result.timings.collapses}};
    if (f.texture) timings["texture"] = result.timings.texture;
    timings["total"] = result.timings.total;
    report["timings"] = timings;
    if (f.texture) {
        report["texture"] = {{"samples", result.samples.size()},
                             {"atlas_size", result.atlas->layout.width},
                             {"global_fallbacks", result.projection.global_fallbacks},
                             {"missing_uv_faces", result.colors.missing_uv_faces}};
    }
    if (f.metrics) {
        const MetricReport m = compare_meshes(raw, to_raw_mesh(result), {f.samples, f.seed, normalize});
        report["metrics"] = metrics_json(m);
    }
    emit_report(report, f.report, out);
    if (!result.target_reached) {
        err << "target of " << result.target_faces << " faces not reached (" << result.mesh.live_face_count()
            << " remain)\n";
        return kExitTargetUnreached;
    }
    return kExitOk;
}

int run_metrics(const MetricsFlags& f, std::ostream& out) {
    const RawMesh a = load_mesh(f.a);
    const RawMesh b = load_mesh(f.b);
    const MetricReport m = compare_meshes(a, b, {f.samples, f.seed, normalize_from_string(f.normalize)});
    json report = metrics_json(m);
    emit_report(report, f.report, out);
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust simplification of triangle soups and non-manifold meshes", "wildsimp"};
    app.require_subcommand(1);

    SimplifyFlags sf;
    auto* simp = app.add_subcommand("simplify", "Simplify a mesh");
    std::map<std::string, CLI::Option*> so;
    simp->add_option("input", sf.input, "Input mesh (.obj or .ply)")->required();
    simp->add_option("-o,--output", sf.output, "Output mesh (.obj or .ply)");
    so["--ratio"] = simp->add_option("--ratio", sf.ratio, "Target face count as a fraction of the input")
                        ->capture_default_str();
    so["--target-faces"] = simp->add_option("--target-faces", sf.target_faces, "Absolute target face count");
    so["--ratio"]->excludes(so["--target-faces"]);
    so["--epsilon-rel"] = simp->add_option("--epsilon-rel", sf.epsilon_rel,
                                           "Virtual edge distance relative to the bounding box diagonal")
                              ->capture_default_str();
    so["--area-weight"] = simp->add_option("--area-weight", sf.area_weight, "Weight of the area quadric")
                              ->capture_default_str();
    so["--edge-acc"] = simp->add_option("--edge-acc", sf.edge_acc, "Edge quadric accumulation")
                           ->check(CLI::IsMember({"memory", "memoryless"}))
                           ->capture_default_str();
    so["--area-acc"] = simp->add_option("--area-acc", sf.area_acc, "Area quadric accumulation")
                           ->check(CLI::IsMember({"memory", "memoryless"}))
                           ->capture_default_str();
    so["--no-virtual-edges"] = simp->add_flag("--no-virtual-edges", sf.no_virtual_edges, "Disable virtual edges");
    so["--preserve-topology"] =
        simp->add_flag("--preserve-topology", sf.preserve_topology, "Reject collapses that change topology");
    so["--virtual-edge-cap"] = simp->add_option("--virtual-edge-cap", sf.virtual_edge_cap,
                                                "Maximum virtual edges per vertex")
                                   ->capture_default_str();
    so["--area-edges"] = simp->add_option("--area-edges", sf.area_edges, "Edges contributing to the area quadric")
                             ->check(CLI::IsMember({"boundary", "full-link"}))
                             ->capture_default_str();
    so["--regularizer"] = simp->add_option("--regularizer", sf.regularizer,
                                           "Pull of the optimal placement toward the edge midpoint")
                              ->capture_default_str();
    so["--weld-eps"] = simp->add_option("--weld-eps", sf.weld_eps, "Vertex welding distance (0 = exact duplicates)")
                           ->capture_default_str();
    so["--texture"] = simp->add_flag("--texture", sf.texture, "Transfer colors and bake a texture atlas");
    so["--samples-per-edge"] = simp->add_option("--samples-per-edge", sf.samples_per_edge,
                                                "Color samples per face edge")
                                   ->capture_default_str();
    so["--gutter"] = simp->add_option("--gutter", sf.gutter, "Atlas gutter in texels")->capture_default_str();
    so["--atlas-max"] = simp->add_option("--atlas-max", sf.atlas_max, "Largest atlas edge in texels")
                            ->capture_default_str();
    simp->add_option("--mesh-colors", sf.mesh_colors, "Also write raw per-face color samples");
    so["--metrics"] =
        simp->add_flag("--metrics", sf.metrics, "Compare the output with the input and add metrics to the report");
    so["--samples"] = simp->add_option("--samples", sf.samples, "Metric samples per mesh")->capture_default_str();
    so["--seed"] = simp->add_option("--seed", sf.seed, "Metric sampling seed")->capture_default_str();
    so["--normalize"] = simp->add_option("--normalize", sf.normalize, "Metric normalization")
                            ->check(CLI::IsMember({"unit-diagonal", "none"}))
                            ->capture_default_str();
    simp->add_option("--config", sf.config, "Config JSON (or a previous report) supplying unset flags");
    simp->add_option("--report", sf.report, "Write the JSON report here instead of stdout");
    simp->add_flag("--debug-checks", sf.debug_checks, "Validate all invariants after every collapse");
    simp->add_flag("-v,--verbose", sf.verbose, "Progress on stderr");

    MetricsFlags mf;
    auto* met = app.add_subcommand("metrics", "Compare two meshes");
    met->add_option("a", mf.a, "First mesh")->required();
    met->add_option("b", mf.b, "Second mesh")->required();
    met->add_option("--samples", mf.samples, "Samples per mesh")->capture_default_str();
    met->add_option("--seed", mf.seed, "Sampling seed")->capture_default_str();
    met->add_option("--normalize", mf.normalize, "Scale to unit bounding box diagonal or not")
        ->check(CLI::IsMember({"unit-diagonal", "none"}))
        ->capture_default_str();
    met->add_option("--report", mf.report, "Write the JSON report here instead of stdout");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("wildsimp");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (simp->parsed()) {
            if (!sf.config.empty()) apply_config_file(sf, so);
            return run_simplify(sf, so["--target-faces"]->count() > 0, out, err);
        }
        return run_metrics(mf, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace wildsimp
