#include "holo3d/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace holo3d::io {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kFieldFormat = "holo3d-field";
constexpr std::string_view kVolumeFormat = "holo3d-volume";

template <typename T>
T byteswap_value(T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  std::reverse(bytes, bytes + sizeof(T));
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

std::string encode_payload(const std::complex<double>* data, std::size_t count) {
  std::string out(count * 16, '\0');
  std::memcpy(out.data(), data, out.size());
  if constexpr (std::endian::native == std::endian::big) {
    auto* d = reinterpret_cast<double*>(out.data());
    for (std::size_t i = 0; i < 2 * count; ++i) d[i] = byteswap_value(d[i]);
  }
  return out;
}

void decode_payload(const std::string& bytes, std::complex<double>* data, std::size_t count) {
  std::memcpy(data, bytes.data(), count * 16);
  if constexpr (std::endian::native == std::endian::big) {
    auto* d = reinterpret_cast<double*>(data);
    for (std::size_t i = 0; i < 2 * count; ++i) d[i] = byteswap_value(d[i]);
  }
}

json header_to_json(const FileHeader& h) {
  json j;
  j["format"] = h.kind == PayloadKind::field ? kFieldFormat : kVolumeFormat;
  j["version"] = h.version;
  j["dims"] = {h.nx, h.ny, h.nz};
  j["pitch_um"] = h.pitch;
  j["wavelength_um"] = h.wavelength;
  j["zplanes_um"] = h.zplanes;
  j["z_detector_um"] = h.z_detector;
  j["dtype"] = h.dtype;
  return j;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

FileHeader header_from_json(const json& j) {
  reject_unknown(j, {"format", "version", "dims", "pitch_um", "wavelength_um", "zplanes_um", "z_detector_um", "dtype"},
                 "header");
  FileHeader h;
  try {
    const auto format = j.at("format").get<std::string>();
    if (format == kFieldFormat)
      h.kind = PayloadKind::field;
    else if (format == kVolumeFormat)
      h.kind = PayloadKind::volume;
    else
      throw ConfigError("header: unknown format '" + format + "'");
    h.version = j.at("version").get<int>();
    const auto dims = j.at("dims").get<std::vector<Index>>();
    if (dims.size() != 3) throw ConfigError("header: dims must have three entries");
    h.nx = dims[0];
    h.ny = dims[1];
    h.nz = dims[2];
    h.pitch = j.at("pitch_um").get<double>();
    h.wavelength = j.at("wavelength_um").get<double>();
    h.zplanes = j.at("zplanes_um").get<std::vector<double>>();
    h.z_detector = j.at("z_detector_um").get<double>();
    h.dtype = j.at("dtype").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("header: ") + e.what());
  }
  if (h.version != kFormatVersion) throw ConfigError("header: unsupported version " + std::to_string(h.version));
  if (h.dtype != kDtype) throw ConfigError("header: unsupported dtype '" + h.dtype + "'");
  if (h.nx < 1 || h.ny < 1 || h.nz < 1) throw ConfigError("header: dims must be positive");
  if (h.kind == PayloadKind::field && h.nz != 1) throw ConfigError("header: a field has exactly one plane");
  if (h.kind == PayloadKind::volume && static_cast<Index>(h.zplanes.size()) != h.nz)
    throw ConfigError("header: zplanes count does not match dims");
  return h;
}

FileHeader make_header(PayloadKind kind, Index nz, const OpticalSetup& setup) {
  FileHeader h;
  h.kind = kind;
  h.nx = setup.grid.nx;
  h.ny = setup.grid.ny;
  h.nz = nz;
  h.pitch = setup.grid.pitch;
  h.wavelength = setup.wavelength;
  h.zplanes = setup.zplanes;
  h.z_detector = setup.z_detector;
  return h;
}

void write_pair(const fs::path& base, const FileHeader& header, const std::complex<double>* data) {
  const FilePaths paths = paths_for(base);
  write_file_atomic(paths.payload, encode_payload(data, static_cast<std::size_t>(header.nx * header.ny * header.nz)));
  write_file_atomic(paths.header, header_to_json(header).dump(2) + "\n");
}

std::string read_payload(const FilePaths& paths, const FileHeader& header) {
  std::string bytes = read_file(paths.payload);
  if (bytes.size() != header.payload_bytes())
    throw ConfigError("payload " + paths.payload.string() + " has " + std::to_string(bytes.size()) +
                      " bytes, header implies " + std::to_string(header.payload_bytes()));
  return bytes;
}

const char* kernel_name(TransferKind k) { return k == TransferKind::fresnel ? "fresnel" : "angular_spectrum"; }

TransferKind kernel_from(const std::string& s) {
  if (s == "fresnel") return TransferKind::fresnel;
  if (s == "angular_spectrum") return TransferKind::angular_spectrum;
  throw ConfigError("optics.kernel: expected 'fresnel' or 'angular_spectrum', got '" + s + "'");
}

const char* phantom_name(PhantomKind k) { return k == PhantomKind::amplitude_reflectors ? "amplitude" : "text"; }

const char* regularizer_name(RegularizerKind k) { return k == RegularizerKind::l1_positive ? "l1_positive" : "tv"; }

const char* coupling_name(TvCoupling c) { return c == TvCoupling::joint ? "joint" : "channelwise"; }

template <typename T>
void read_opt(const json& obj, const char* key, T& dst, const std::string& section) {
  if (!obj.contains(key)) return;
  try {
    dst = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(section + "." + key + ": " + e.what());
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

OpticalSetup FileHeader::setup() const {
  OpticalSetup s;
  s.wavelength = wavelength;
  s.grid = Grid2D{nx, ny, pitch};
  s.zplanes = zplanes;
  s.z_detector = z_detector;
  return s;
}

FilePaths paths_for(const fs::path& base) {
  fs::path stem = base;
  if (stem.extension() == ".json" || stem.extension() == ".raw") stem.replace_extension();
  fs::path header = stem;
  header += ".json";
  fs::path payload = stem;
  payload += ".raw";
  return {header, payload};
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_volume(const fs::path& base, const Volume& volume, const OpticalSetup& setup) {
  if (!(volume.grid() == setup.grid) || volume.zplanes() != setup.zplanes)
    throw DimensionError("write_volume: volume does not match setup");
  write_pair(base, make_header(PayloadKind::volume, volume.num_planes(), setup), volume.data().data());
}

void write_field(const fs::path& base, const ComplexField& field, const OpticalSetup& setup) {
  if (!(field.grid() == setup.grid)) throw DimensionError("write_field: field does not match setup");
  write_pair(base, make_header(PayloadKind::field, 1, setup), field.values().data());
}

FileHeader read_header(const fs::path& base) {
  const FilePaths paths = paths_for(base);
  json j;
  try {
    j = json::parse(read_file(paths.header));
  } catch (const json::parse_error& e) {
    throw ConfigError("header " + paths.header.string() + ": " + e.what());
  }
  return header_from_json(j);
}

VolumeFile read_volume(const fs::path& base) {
  const FilePaths paths = paths_for(base);
  FileHeader header = read_header(base);
  if (header.kind != PayloadKind::volume) throw ConfigError(paths.header.string() + " is not a volume file");
  const std::string bytes = read_payload(paths, header);
  Volume volume(Grid2D{header.nx, header.ny, header.pitch}, header.zplanes);
  decode_payload(bytes, volume.data().data(), static_cast<std::size_t>(volume.data().size()));
  return {std::move(header), std::move(volume)};
}

FieldFile read_field(const fs::path& base) {
  const FilePaths paths = paths_for(base);
  FileHeader header = read_header(base);
  if (header.kind != PayloadKind::field) throw ConfigError(paths.header.string() + " is not a field file");
  const std::string bytes = read_payload(paths, header);
  ComplexField::Array values(header.nx, header.ny);
  decode_payload(bytes, values.data(), static_cast<std::size_t>(values.size()));
  ComplexField field(Grid2D{header.nx, header.ny, header.pitch}, std::move(values));
  return {std::move(header), std::move(field)};
}

void check_consistent(const FileHeader& header, const OpticalSetup& setup) {
  auto fail = [](const std::string& what) { throw ConsistencyError("file header disagrees with config: " + what); };
  if (header.wavelength != setup.wavelength) fail("wavelength");
  if (header.nx != setup.grid.nx || header.ny != setup.grid.ny) fail("grid dimensions");
  if (header.pitch != setup.grid.pitch) fail("pitch");
  if (header.z_detector != setup.z_detector) fail("detector position");
  if (header.kind == PayloadKind::volume && header.zplanes != setup.zplanes) fail("plane positions");
}

// ---------------------------------------------------------------------------

OpticalSetup OpticsConfig::setup() const {
  return make_setup(nx, ny, pitch_um, wavelength_um, num_planes, z_first_um, dz_um, detector_distance_um);
}

SolverConfig SolverSection::to_config() const {
  if (!alpha) throw ConfigError("solver.alpha is required (e.g. \"solver\": {\"alpha\": 5e-4})");
  SolverConfig cfg;
  cfg.alpha = *alpha;
  cfg.max_iterations = max_iterations;
  cfg.regularizer = regularizer;
  cfg.power_iterations = power_iterations;
  cfg.power_tolerance = power_tolerance;
  cfg.seed = seed;
  cfg.kappa_override = kappa;
  cfg.record_every = record_every;
  cfg.early_stop_tolerance = early_stop_tolerance;
  return cfg;
}

RunConfig parse_run_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  reject_unknown(root, {"optics", "phantom", "solver", "io"}, "config");
  RunConfig cfg;

  if (root.contains("optics")) {
    const json& o = root["optics"];
    reject_unknown(o,
                   {"wavelength_um", "nx", "ny", "pitch_um", "num_planes", "z_first_um", "dz_um",
                    "detector_distance_um", "padding", "kernel"},
                   "optics");
    OpticsConfig& oc = cfg.optics;
    read_opt(o, "wavelength_um", oc.wavelength_um, "optics");
    read_opt(o, "nx", oc.nx, "optics");
    read_opt(o, "ny", oc.ny, "optics");
    read_opt(o, "pitch_um", oc.pitch_um, "optics");
    read_opt(o, "num_planes", oc.num_planes, "optics");
    read_opt(o, "z_first_um", oc.z_first_um, "optics");
    read_opt(o, "dz_um", oc.dz_um, "optics");
    read_opt(o, "detector_distance_um", oc.detector_distance_um, "optics");
    read_opt(o, "padding", oc.padding, "optics");
    std::string kernel = kernel_name(oc.kernel);
    read_opt(o, "kernel", kernel, "optics");
    oc.kernel = kernel_from(kernel);
  }

  if (root.contains("phantom")) {
    const json& p = root["phantom"];
    reject_unknown(p, {"kind", "planes", "glyph_size"}, "phantom");
    std::string kind = phantom_name(cfg.phantom.kind);
    read_opt(p, "kind", kind, "phantom");
    if (kind == "amplitude")
      cfg.phantom = PhantomSpec::amplitude();
    else if (kind == "text")
      cfg.phantom = PhantomSpec::text();
    else
      throw ConfigError("phantom.kind: expected 'amplitude' or 'text', got '" + kind + "'");
    read_opt(p, "planes", cfg.phantom.planes, "phantom");
    read_opt(p, "glyph_size", cfg.phantom.glyph_size, "phantom");
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    reject_unknown(s,
                   {"alpha", "max_iterations", "regularizer", "tv_inner_iterations", "tv_coupling", "power_iterations",
                    "power_tolerance", "seed", "kappa", "record_every", "early_stop_tolerance"},
                   "solver");
    SolverSection& sc = cfg.solver;
    if (s.contains("alpha") && !s["alpha"].is_null()) {
      double alpha = 0.0;
      read_opt(s, "alpha", alpha, "solver");
      sc.alpha = alpha;
    }
    read_opt(s, "max_iterations", sc.max_iterations, "solver");
    std::string reg = regularizer_name(sc.regularizer.kind);
    read_opt(s, "regularizer", reg, "solver");
    if (reg == "l1_positive")
      sc.regularizer.kind = RegularizerKind::l1_positive;
    else if (reg == "tv")
      sc.regularizer.kind = RegularizerKind::tv_slicewise;
    else
      throw ConfigError("solver.regularizer: expected 'l1_positive' or 'tv', got '" + reg + "'");
    read_opt(s, "tv_inner_iterations", sc.regularizer.tv_inner_iterations, "solver");
    std::string coupling = coupling_name(sc.regularizer.tv_coupling);
    read_opt(s, "tv_coupling", coupling, "solver");
    if (coupling == "joint")
      sc.regularizer.tv_coupling = TvCoupling::joint;
    else if (coupling == "channelwise")
      sc.regularizer.tv_coupling = TvCoupling::channelwise;
    else
      throw ConfigError("solver.tv_coupling: expected 'joint' or 'channelwise', got '" + coupling + "'");
    read_opt(s, "power_iterations", sc.power_iterations, "solver");
    read_opt(s, "power_tolerance", sc.power_tolerance, "solver");
    read_opt(s, "seed", sc.seed, "solver");
    if (s.contains("kappa") && !s["kappa"].is_null()) {
      double kappa = 0.0;
      read_opt(s, "kappa", kappa, "solver");
      sc.kappa = kappa;
    }
    read_opt(s, "record_every", sc.record_every, "solver");
    read_opt(s, "early_stop_tolerance", sc.early_stop_tolerance, "solver");
  }

  if (root.contains("io")) {
    const json& i = root["io"];
    reject_unknown(i, {"truth", "report"}, "io");
    read_opt(i, "truth", cfg.io.truth, "io");
    read_opt(i, "report", cfg.io.report, "io");
  }
  return cfg;
}

std::string serialize_run_config(const RunConfig& cfg) {
  json root;
  const OpticsConfig& o = cfg.optics;
  root["optics"] = {{"wavelength_um", o.wavelength_um},
                    {"nx", o.nx},
                    {"ny", o.ny},
                    {"pitch_um", o.pitch_um},
                    {"num_planes", o.num_planes},
                    {"z_first_um", o.z_first_um},
                    {"dz_um", o.dz_um},
                    {"detector_distance_um", o.detector_distance_um},
                    {"padding", o.padding},
                    {"kernel", kernel_name(o.kernel)}};
  root["phantom"] = {{"kind", phantom_name(cfg.phantom.kind)},
                     {"planes", cfg.phantom.planes},
                     {"glyph_size", cfg.phantom.glyph_size}};
  const SolverSection& s = cfg.solver;
  root["solver"] = {{"alpha", optional_number(s.alpha)},
                    {"max_iterations", s.max_iterations},
                    {"regularizer", regularizer_name(s.regularizer.kind)},
                    {"tv_inner_iterations", s.regularizer.tv_inner_iterations},
                    {"tv_coupling", coupling_name(s.regularizer.tv_coupling)},
                    {"power_iterations", s.power_iterations},
                    {"power_tolerance", s.power_tolerance},
                    {"seed", s.seed},
                    {"kappa", optional_number(s.kappa)},
                    {"record_every", s.record_every},
                    {"early_stop_tolerance", s.early_stop_tolerance}};
  root["io"] = {{"truth", cfg.io.truth}, {"report", cfg.io.report}};
  return root.dump(2) + "\n";
}

RunConfig load_run_config(const fs::path& path) { return parse_run_config(read_file(path)); }

// ---------------------------------------------------------------------------

std::string serialize_report(const RunReport& report, const std::optional<double>& final_data_error,
                             const std::optional<double>& final_object_error) {
  json j;
  j["format"] = "holo3d-report";
  j["version"] = kFormatVersion;
  j["kappa"] = report.kappa;
  j["tau"] = report.tau;
  j["mu"] = report.mu;
  j["iterations_run"] = report.iterations_run;
  j["early_stopped"] = report.early_stopped;
  json history = json::array();
  for (std::size_t i = 0; i < report.cost_history.size(); ++i) {
    const CostRecord& c = report.cost_history[i];
    json row = {{"iteration", c.iteration}, {"c1", c.cost.data}, {"c2", c.cost.penalty}, {"total", c.cost.total}};
    if (i < report.data_error_history.size()) row["data_error"] = report.data_error_history[i].value;
    if (i < report.object_error_history.size()) row["object_error"] = report.object_error_history[i].value;
    history.push_back(std::move(row));
  }
  j["history"] = std::move(history);
  json fin = json::object();
  if (final_data_error) fin["data_error"] = *final_data_error;
  if (final_object_error) fin["object_error"] = *final_object_error;
  j["final"] = std::move(fin);
  return j.dump(2) + "\n";
}

SliceChannel parse_channel(std::string_view name) {
  if (name == "magnitude") return SliceChannel::magnitude;
  if (name == "real") return SliceChannel::real;
  if (name == "imag") return SliceChannel::imag;
  if (name == "phase") return SliceChannel::phase;
  throw ConfigError("channel must be one of magnitude, real, imag, phase");
}

std::vector<SliceScaling> export_slices(const Volume& volume, const std::vector<int>& planes, SliceChannel channel,
                                        const fs::path& prefix) {
  for (int p : planes) {
    if (p < 1 || p > volume.num_planes())
      throw ConfigError("plane " + std::to_string(p) + " outside 1.." + std::to_string(volume.num_planes()));
  }
  const Index nx = volume.grid().nx;
  const Index ny = volume.grid().ny;
  std::vector<SliceScaling> scalings;
  json sidecar = json::array();
  for (int p : planes) {
    const auto plane = volume.plane(p - 1);
    Eigen::ArrayXXd values(nx, ny);
    switch (channel) {
      case SliceChannel::magnitude:
        values = plane.abs();
        break;
      case SliceChannel::real:
        values = plane.real();
        break;
      case SliceChannel::imag:
        values = plane.imag();
        break;
      case SliceChannel::phase:
        values = plane.arg();
        break;
    }
    SliceScaling s;
    s.plane = p;
    s.min = values.minCoeff();
    s.max = values.maxCoeff();
    char name[32];
    std::snprintf(name, sizeof(name), "_plane%03d.pgm", p);
    fs::path file = prefix;
    file += name;
    s.file = file.filename().string();

    const double range = s.max - s.min;
    std::string image = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n65535\n";
    image.reserve(image.size() + static_cast<std::size_t>(2 * nx * ny));
    // Rows are y, columns x; samples are big-endian per the PGM format.
    for (Index y = 0; y < ny; ++y) {
      for (Index x = 0; x < nx; ++x) {
        const double scaled = range > 0.0 ? (values(x, y) - s.min) / range * 65535.0 : 0.0;
        const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(scaled, 0.0, 65535.0)));
        image.push_back(static_cast<char>(q >> 8));
        image.push_back(static_cast<char>(q & 0xff));
      }
    }
    write_file_atomic(file, image);
    sidecar.push_back({{"plane", p}, {"file", s.file}, {"min", s.min}, {"max", s.max}});
    scalings.push_back(std::move(s));
  }
  const char* channel_names[] = {"magnitude", "real", "imag", "phase"};
  json meta = {{"channel", channel_names[static_cast<int>(channel)]}, {"levels", 65535}, {"planes", sidecar}};
  fs::path sidecar_path = prefix;
  sidecar_path += "_scaling.json";
  write_file_atomic(sidecar_path, meta.dump(2) + "\n");
  return scalings;
}

}  // namespace holo3d::io
