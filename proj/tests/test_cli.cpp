#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "holo3d/io.hpp"
#include "holo3d/phantoms.hpp"

using namespace holo3d;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("holo3d_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(HOLO3D_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const char* kSmallConfig = R"({
  "optics": {"nx": 32, "ny": 32, "num_planes": 6},
  "phantom": {"kind": "amplitude", "planes": [1, 2, 4, 6]},
  "solver": {"alpha": 5e-4, "max_iterations": 30, "record_every": 5}
})";

std::string write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  io::write_file_atomic(p, text);
  return p.string();
}

}  // namespace

TEST_CASE("cli pipeline") {
  TempDir tmp;
  const std::string cfg = write_config(tmp.path, "small.json", kSmallConfig);
  const std::string d = tmp.path.string();

  REQUIRE(run("phantom --quiet --config " + cfg + " --out " + d + "/truth").code == 0);
  REQUIRE(run("forward --quiet --config " + cfg + " --in " + d + "/truth --out " + d + "/holo").code == 0);

  const io::RunConfig rc = io::load_run_config(cfg);
  const OpticalSetup s = rc.optics.setup();
  const PropagatorPlan plan(s);
  const Volume truth = io::read_volume(d + "/truth").volume;
  CHECK((truth.data() == amplitude_phantom(rc.phantom, s).data()).all());
  const ComplexField holo = io::read_field(d + "/holo").field;
  CHECK((holo.values() == forward(truth, plan).values()).all());

  SUBCASE("backproject matches the library and fills every plane") {
    REQUIRE(run("backproject --quiet --config " + cfg + " --in " + d + "/holo --out " + d + "/bp").code == 0);
    const Volume bp = io::read_volume(d + "/bp").volume;
    CHECK((bp.data() == adjoint(holo, plan).data()).all());
    for (Index c = 0; c < bp.num_planes(); ++c) CHECK((bp.plane(c).abs() > 0.0).any());
  }
  SUBCASE("reconstruct is reproducible") {
    const std::string args = "reconstruct --quiet --config " + cfg + " --in " + d + "/holo --truth " + d + "/truth";
    REQUIRE(run(args + " --out " + d + "/r1 --report " + d + "/r1_report.json").code == 0);
    REQUIRE(run(args + " --out " + d + "/r2 --report " + d + "/r2_report.json").code == 0);
    CHECK(io::read_file(d + "/r1.raw") == io::read_file(d + "/r2.raw"));
    CHECK(io::read_file(d + "/r1.json") == io::read_file(d + "/r2.json"));
    CHECK(io::read_file(d + "/r1_report.json") == io::read_file(d + "/r2_report.json"));

    const Result m = run("metrics --config " + cfg + " --in " + d + "/r1 --field " + d + "/holo --truth " + d + "/truth");
    CHECK(m.code == 0);
    CHECK(m.out.find("data_error") != std::string::npos);
    CHECK(m.out.find("object_error") != std::string::npos);
  }
  SUBCASE("wavelength mismatch is a consistency error") {
    const std::string other = write_config(tmp.path, "other.json",
                                           R"({"optics": {"nx": 32, "ny": 32, "num_planes": 6, "wavelength_um": 0.6}})");
    CHECK(run("forward --config " + other + " --in " + d + "/truth --out " + d + "/x").code == 3);
    CHECK_FALSE(fs::exists(d + "/x.json"));
  }
  SUBCASE("missing alpha is a usage error") {
    const std::string no_alpha =
        write_config(tmp.path, "noalpha.json", R"({"optics": {"nx": 32, "ny": 32, "num_planes": 6}})");
    CHECK(run("reconstruct --config " + no_alpha + " --in " + d + "/holo --out " + d + "/r").code == 2);
    CHECK_FALSE(fs::exists(d + "/r.json"));
  }
  SUBCASE("slice export validates plane numbers") {
    CHECK(run("export-slices --quiet --in " + d + "/truth --planes 1,6 --out " + d + "/s").code == 0);
    CHECK(fs::exists(d + "/s_plane006.pgm"));
    CHECK(run("export-slices --in " + d + "/truth --planes 0 --out " + d + "/t").code == 2);
    CHECK(run("export-slices --in " + d + "/truth --planes 7 --out " + d + "/t").code == 2);
  }
}

TEST_CASE("cli errors") {
  TempDir tmp;
  const std::string d = tmp.path.string();
  const std::string bad = write_config(tmp.path, "bad.json", "{\"optics\": {\"nx\": 32,}");
  CHECK(run("phantom --config " + bad + " --out " + d + "/p").code == 2);
  CHECK_FALSE(fs::exists(d + "/p.json"));
  CHECK_FALSE(fs::exists(d + "/p.raw"));
  const std::string unknown = write_config(tmp.path, "unknown.json", R"({"optics": {"pixels": 32}})");
  CHECK(run("phantom --config " + unknown + " --out " + d + "/p").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("forward --out " + d + "/p").code == 2);
}

TEST_CASE("cli adjoint test and spectral norm") {
  TempDir tmp;
  CHECK(run("adjoint-test --quiet").code == 0);
  const std::string padded =
      write_config(tmp.path, "padded.json", R"({"optics": {"nx": 64, "ny": 64, "num_planes": 8, "padding": 2}})");
  CHECK(run("adjoint-test --quiet --config " + padded).code == 0);
  // At dz = 25 µm every illumination phase is 1, so use a spacing where the conjugate matters.
  const std::string offset = write_config(tmp.path, "offset.json",
                                          R"({"optics": {"nx": 64, "ny": 64, "num_planes": 8, "dz_um": 25.1}})");
  CHECK(run("adjoint-test --quiet --config " + offset).code == 0);
  CHECK(run("adjoint-test --quiet --corrupt-adjoint --config " + offset).code == 3);

  const std::string four = write_config(tmp.path, "four.json", R"({"optics": {"nx": 16, "ny": 16, "num_planes": 4}})");
  const Result r = run("spectral-norm --config " + four);
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("cli zero inputs and text phantom") {
  TempDir tmp;
  const std::string d = tmp.path.string();
  const std::string cfg = write_config(tmp.path, "text.json",
                                       R"({"optics": {"nx": 64, "ny": 64, "num_planes": 30}, "phantom": {"kind": "text", "glyph_size": 14}})");
  const OpticalSetup s = io::load_run_config(cfg).optics.setup();

  io::write_volume(d + "/zero", Volume(s.grid, s.zplanes), s);
  REQUIRE(run("forward --quiet --config " + cfg + " --in " + d + "/zero --out " + d + "/zf").code == 0);
  CHECK((io::read_field(d + "/zf").field.values() == std::complex<double>(0.0, 0.0)).all());
  REQUIRE(run("backproject --quiet --config " + cfg + " --in " + d + "/zf --out " + d + "/zv").code == 0);
  CHECK((io::read_volume(d + "/zv").volume.data() == std::complex<double>(0.0, 0.0)).all());

  REQUIRE(run("phantom --quiet --config " + cfg + " --out " + d + "/text").code == 0);
  const Volume text = io::read_volume(d + "/text").volume;
  for (Index c = 0; c < text.num_planes(); ++c) {
    const bool occupied = c == 0 || c == 9 || c == 19 || c == 29;
    CHECK((text.plane(c) != std::complex<double>(0.0, 0.0)).any() == occupied);
  }
}
