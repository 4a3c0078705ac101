#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rydsim/config.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/output.hpp"
#include "rydsim/sweep.hpp"
#include "scenarios.hpp"

using namespace rydsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("rydsim-unit-" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Pixel bytes of a binary PPM with comment lines.
std::vector<unsigned char> ppm_pixels(const std::string& bytes, std::size_t& w, std::size_t& h)
{
    std::istringstream in(bytes);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "P6");
    std::vector<std::string> fields;
    while (fields.size() < 3 && std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string f;
        while (ls >> f) {
            fields.push_back(f);
        }
    }
    REQUIRE(fields.size() == 3);
    w = std::stoul(fields[0]);
    h = std::stoul(fields[1]);
    CHECK(fields[2] == "255");
    const std::size_t off = static_cast<std::size_t>(in.tellg());
    return {bytes.begin() + static_cast<std::ptrdiff_t>(off), bytes.end()};
}

}  // namespace

TEST_CASE("field names")
{
    CHECK(parse_field("s2") == FieldSelector::s2);
    CHECK(field_name(FieldSelector::e1) == "e1");
    CHECK_THROWS_AS(parse_field("x1"), ConfigError);
}

TEST_CASE("heatmap of zeros is black, a spike is one white pixel")
{
    const fs::path dir = scratch("ppm");
    fs::create_directories(dir);
    Heatmap m;
    m.rows = 3;
    m.cols = 4;
    m.dz = 1.0;
    m.times = {0.0, 1.0, 2.0};
    m.data.assign(12, 0.0f);

    CHECK(write_heatmap(m, "00ff", "s1", dir / "zero.ppm") == 0.0);
    std::size_t w = 0;
    std::size_t h = 0;
    auto px = ppm_pixels(slurp(dir / "zero.ppm"), w, h);
    CHECK(w == 4);
    CHECK(h == 3);
    REQUIRE(px.size() == 36);
    CHECK(std::all_of(px.begin(), px.end(), [](unsigned char c) { return c == 0; }));
    CHECK(fs::exists(dir / "zero.ppm.txt"));

    m.data[6] = 0.25f;
    CHECK(write_heatmap(m, "00ff", "s1", dir / "spike.ppm") == doctest::Approx(0.25));
    const std::string bytes = slurp(dir / "spike.ppm");
    CHECK(bytes.find("# config_hash=00ff") != std::string::npos);
    px = ppm_pixels(bytes, w, h);
    for (std::size_t i = 0; i < 12; ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            CHECK(px[3 * i + ch] == (i == 6 ? 255 : 0));
        }
    }
    CHECK_THROWS_AS(write_heatmap(m, "00ff", "s1", dir / "missing" / "x.ppm"), IoError);
}

TEST_CASE("snapshot CSV layout")
{
    FieldState st(3);
    st.t = 2.5;
    st.ensemble[0].s = {0.0, cplx(0.0, 1.0), 0.0};
    std::ostringstream out;
    write_snapshot_csv(st, 0.5, "abcd", out);
    const std::string text = out.str();
    CHECK(text.find("# config_hash=abcd") != std::string::npos);
    CHECK(text.find("z,abs_e1,arg_e1,abs_s1,arg_s1,v1,abs_e2,arg_e2,abs_s2,arg_s2,v2") !=
          std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') >= 6);
}

TEST_CASE("sweep with no values writes the header only")
{
    const SweepResult r = run_sweep(testcase::short_storage(Propagation::co, 6.0, false),
                                    "geometry.separation", {}, 1);
    CHECK(r.rows.empty());
    const std::string csv = sweep_csv(r);
    std::istringstream lines(csv);
    std::string line;
    int data = 0;
    while (std::getline(lines, line)) {
        data += !line.empty() && line[0] != '#' && line.rfind("axis,", 0) != 0;
    }
    CHECK(data == 0);
    CHECK(csv.find("axis,value,status,error,") != std::string::npos);
}

TEST_CASE("a failing sweep row does not stop the others")
{
    ScenarioConfig base = testcase::short_storage(Propagation::co, 6.0, true);
    base.grid.t_end = 4.0;
    const SweepResult r = run_sweep(base, "geometry.separation", {"10", "1", "12"}, 2);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].ok);
    CHECK_FALSE(r.rows[1].ok);
    CHECK_FALSE(r.rows[1].error.empty());
    CHECK(r.rows[2].ok);
    CHECK(r.rows[1].value == "1");
}

TEST_CASE("runs are deterministic byte for byte")
{
    ScenarioConfig c = testcase::short_storage(Propagation::counter, 6.0, true);
    c.output.snapshot_times = {20.0, 30.0};
    const fs::path a = scratch("det-a");
    const fs::path b = scratch("det-b");
    const RunManifest ma = emit_run(run_scenario(c), a, "2020-01-01T00:00:00Z");
    const RunManifest mb = emit_run(run_scenario(c), b, "2021-06-01T12:00:00Z");
    CHECK(ma.config_hash == config_hash(c));
    REQUIRE(ma.files.size() == mb.files.size());
    int snapshots = 0;
    for (const auto& f : ma.files) {
        CAPTURE(f.path);
        snapshots += f.kind == "snapshot";
        CHECK(slurp(a / f.path) == slurp(b / f.path));
    }
    CHECK(snapshots == 2);
    auto ja = nlohmann::json::parse(slurp(a / "manifest.json"));
    auto jb = nlohmann::json::parse(slurp(b / "manifest.json"));
    CHECK(ja != jb);
    ja.erase("volatile");
    jb.erase("volatile");
    CHECK(ja == jb);

    const ScenarioConfig back = load_config_file(a / "config.json");
    CHECK(back == c);
    CHECK_THROWS_AS(load_config_file(a / "nope.json"), IoError);
}

TEST_CASE("inset curves are written with a manifest")
{
    const fs::path dir = scratch("insets");
    const RunManifest m = emit_inset_curves(dir, "2020-01-01T00:00:00Z", 101);
    int curves = 0;
    for (const auto& f : m.files) {
        curves += f.kind == "curve";
        CHECK(fs::exists(dir / f.path));
    }
    CHECK(curves == 4);
    CHECK(fs::exists(dir / "manifest.json"));
}
