#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "wildsimp/cli.hpp"
#include "wildsimp/mesh_io.hpp"

using namespace wildsimp;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

/// Runs the installed executable through the shell; returns its exit status.
int run_exe(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + WILDSIMP_EXE + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string write_fixture(const fs::path& dir, const std::string& name, const RawMesh& m) {
    const fs::path p = dir / name;
    save_raw_obj(m, p);
    return p.string();
}

}  // namespace

TEST_CASE("simplify cube at ratio 0.5 leaves at most 6 faces") {
    const fs::path dir = fixtures::scratch_dir("cli_cube");
    const std::string in = write_fixture(dir, "cube.obj", fixtures::cube());
    const std::string out = (dir / "out.obj").string();
    const Run r = run({"simplify", in, "-o", out, "--ratio", "0.5"});
    INFO(r.err);
    REQUIRE(r.code == kExitOk);
    CHECK(load_mesh(out).faces.size() <= 6);
    const json rep = json::parse(r.out);
    CHECK(rep["output"]["faces"].get<std::size_t>() <= 6);
    CHECK(rep["target_reached"].get<bool>());
    CHECK(rep["config"]["ratio"].get<double>() == 0.5);
    CHECK(rep["config"]["target_faces"].is_null());
}

TEST_CASE("the executable runs the same pipeline") {
    const fs::path dir = fixtures::scratch_dir("cli_exe");
    const std::string in = write_fixture(dir, "cube.obj", fixtures::cube());
    const fs::path out = dir / "out.obj", rep = dir / "report.json";
    const int code = run_exe("simplify \"" + in + "\" -o \"" + out.string() + "\" --ratio 0.5 --report \"" +
                                 rep.string() + "\"",
                             dir / "log.txt");
    INFO(slurp(dir / "log.txt"));
    REQUIRE(code == 0);
    CHECK(load_mesh(out).faces.size() <= 6);
    CHECK(read_json(rep)["output"]["faces"].get<std::size_t>() <= 6);
    CHECK(run_exe("--help", dir / "help.txt") == 0);
    CHECK(slurp(dir / "help.txt").find("simplify") != std::string::npos);
}

TEST_CASE("texture transfer writes obj, mtl and png and times the phase") {
    const fs::path dir = fixtures::scratch_dir("cli_texture");
    const std::string in = write_fixture(dir, "tex.obj", fixtures::textured_island_grid(16, 64));
    const fs::path out = dir / "out.obj", colors = dir / "colors.bin";
    const Run r = run({"simplify", in, "-o", out.string(), "--ratio", "0.1", "--texture", "--mesh-colors",
                       colors.string()});
    INFO(r.err);
    REQUIRE(r.code == kExitOk);
    CHECK(fs::exists(out));
    CHECK(fs::exists(dir / "out.mtl"));
    CHECK(fs::exists(dir / "out.png"));
    CHECK(fs::file_size(colors) > 0);
    const json rep = json::parse(r.out);
    CHECK(rep["timings"].contains("texture"));
    CHECK(rep["timings"]["texture"].get<double>() >= 0.0);
    CHECK(rep["texture"]["atlas_size"].get<int>() > 0);
    const RawMesh back = load_mesh(out);
    CHECK(back.texture.has_value());
    CHECK(back.corner_uvs.size() == back.faces.size());
}

TEST_CASE("virtual edges do not hurt chamfer on the multi-component cluster") {
    const fs::path dir = fixtures::scratch_dir("cli_cluster");
    const std::string in = write_fixture(dir, "cluster.obj", fixtures::cube_cluster(3));
    auto chamfer = [&](std::vector<std::string> extra) {
        std::vector<std::string> args = {"simplify", in, "--ratio", "0.01", "--metrics", "--samples", "20000",
                                         "--seed", "5"};
        args.insert(args.end(), extra.begin(), extra.end());
        const Run r = run(args);
        INFO(r.err);
        REQUIRE(r.code == kExitOk);
        return json::parse(r.out)["metrics"]["chamfer_ms"].get<double>();
    };
    const double with = chamfer({});
    const double without = chamfer({"--no-virtual-edges"});
    MESSAGE("chamfer_ms default " << with << ", no virtual edges " << without);
    CHECK(with <= without);
}

TEST_CASE("metrics of a mesh against itself are zero") {
    const fs::path dir = fixtures::scratch_dir("cli_metrics_self");
    // Axis-aligned faces keep every sampled point exactly on its plane.
    const std::string a = write_fixture(dir, "a.obj", fixtures::with_solid_color(fixtures::cube(), {0.2, 0.4, 0.6}));
    const Run r = run({"metrics", a, a, "--samples", "5000"});
    INFO(r.err);
    REQUIRE(r.code == kExitOk);
    const json rep = json::parse(r.out);
    CHECK(rep["hausdorff"].get<double>() == 0.0);
    CHECK(rep["chamfer_ms"].get<double>() == 0.0);
    CHECK(rep["texture_chamfer"].get<double>() == 0.0);
}

TEST_CASE("metrics with a fixed seed are byte-identical across runs") {
    const fs::path dir = fixtures::scratch_dir("cli_metrics_seed");
    const std::string a = write_fixture(dir, "a.obj", fixtures::icosphere(2));
    const std::string b = write_fixture(dir, "b.obj", fixtures::perturbed_sphere(12, 10, 0.1, 4));
    const fs::path r1 = dir / "r1.json", r2 = dir / "r2.json";
    REQUIRE(run_exe("metrics \"" + a + "\" \"" + b + "\" --seed 7 --report \"" + r1.string() + "\"", dir / "l1") == 0);
    REQUIRE(run_exe("metrics \"" + a + "\" \"" + b + "\" --seed 7 --report \"" + r2.string() + "\"", dir / "l2") == 0);
    CHECK(slurp(r1) == slurp(r2));
    CHECK(read_json(r1)["seed"].get<int>() == 7);
    const Run other = run({"metrics", a, b, "--seed", "8"});
    CHECK(other.out != slurp(r1));
}

TEST_CASE("lifted square without normalization gives hausdorff d") {
    const fs::path dir = fixtures::scratch_dir("cli_lifted");
    const double d = 0.125;
    const std::string a = write_fixture(dir, "a.obj", fixtures::square(0.0));
    const std::string b = write_fixture(dir, "b.obj", fixtures::square(d));
    const Run r = run({"metrics", a, b, "--normalize", "none", "--samples", "2000"});
    INFO(r.err);
    REQUIRE(r.code == kExitOk);
    const json rep = json::parse(r.out);
    CHECK(rep["hausdorff"].get<double>() == d);
    CHECK(rep["chamfer_ms"].get<double>() == d * d);
    CHECK(rep["normalization"] == "none");
}

TEST_CASE("rerunning with the echoed config reproduces the output") {
    const fs::path dir = fixtures::scratch_dir("cli_config");
    const std::string in = write_fixture(dir, "in.obj", fixtures::perturbed_sphere(20, 14, 0.1, 9));
    const fs::path o1 = dir / "o1.obj", o2 = dir / "o2.obj", r1 = dir / "r1.json", r2 = dir / "r2.json";
    const Run a = run({"simplify", in, "-o", o1.string(), "--report", r1.string(), "--target-faces", "60",
                       "--area-weight", "0.5", "--edge-acc", "memoryless", "--area-edges", "full-link",
                       "--regularizer", "1e-3", "--virtual-edge-cap", "8"});
    INFO(a.err);
    REQUIRE(a.code == kExitOk);
    const Run b = run({"simplify", in, "-o", o2.string(), "--report", r2.string(), "--config", r1.string()});
    INFO(b.err);
    REQUIRE(b.code == kExitOk);
    CHECK(slurp(o1) == slurp(o2));
    CHECK(read_json(r1)["config"] == read_json(r2)["config"]);
    CHECK(read_json(r2)["config"]["target_faces"] == 60);

    // A plain config object works too, and explicit flags win over it.
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << read_json(r1)["config"].dump();
    const fs::path o3 = dir / "o3.obj";
    const Run c = run({"simplify", in, "-o", o3.string(), "--config", cfg.string(), "--ratio", "0.5"});
    REQUIRE(c.code == kExitOk);
    const json rc = json::parse(c.out);
    CHECK(rc["config"]["ratio"].get<double>() == 0.5);
    CHECK(rc["config"]["target_faces"].is_null());
    CHECK(rc["config"]["edge_acc"] == "memoryless");
}

TEST_CASE("exit codes") {
    const fs::path dir = fixtures::scratch_dir("cli_exit");
    const std::string squares = write_fixture(dir, "squares.obj", fixtures::coplanar_squares());

    SUBCASE("missing input file") {
        const Run r = run({"simplify", (dir / "nope.obj").string(), "--ratio", "0.5"});
        CHECK(r.code == kExitError);
        CHECK(r.err.find("nope.obj") != std::string::npos);
    }
    SUBCASE("unknown flag") { CHECK(run({"simplify", squares, "--frobnicate"}).code == kExitError); }
    SUBCASE("no subcommand") { CHECK(run({}).code == kExitError); }
    SUBCASE("ratio and target faces are exclusive") {
        CHECK(run({"simplify", squares, "--ratio", "0.5", "--target-faces", "2"}).code == kExitError);
    }
    SUBCASE("bad enum value") { CHECK(run({"simplify", squares, "--edge-acc", "sometimes"}).code == kExitError); }
    SUBCASE("mesh colors need texture") {
        CHECK(run({"simplify", squares, "--mesh-colors", (dir / "c.bin").string()}).code == kExitError);
    }
    SUBCASE("unreadable config") {
        CHECK(run({"simplify", squares, "--config", (dir / "missing.json").string()}).code == kExitError);
    }
    SUBCASE("unreachable target under topology preservation") {
        const fs::path out = dir / "out.obj";
        const Run r = run({"simplify", squares, "-o", out.string(), "--preserve-topology", "--target-faces", "0"});
        CHECK(r.code == kExitTargetUnreached);
        CHECK(r.err.find("not reached") != std::string::npos);
        const json rep = json::parse(r.out);
        CHECK_FALSE(rep["target_reached"].get<bool>());
        CHECK(rep["output"]["faces"].get<std::size_t>() > 0);
        CHECK(fs::exists(out));
    }
    SUBCASE("help") { CHECK(run({"--help"}).code == kExitOk); }
}
