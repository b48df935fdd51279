// File formats and run configuration.
//
// A field or volume is stored as two files sharing a base path:
//   <base>.json  human-readable header (format version, dims, optics, dtype)
//   <base>.raw   little-endian float64 (re, im) pairs, x fastest, then y, then plane
// Both are written to a temporary name and renamed into place.

#ifndef HOLO3D_IO_HPP
#define HOLO3D_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holo3d/core.hpp"
#include "holo3d/phantoms.hpp"
#include "holo3d/propagation.hpp"
#include "holo3d/solver.hpp"

namespace holo3d::io {

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kDtype = "complex128le";

enum class PayloadKind { field, volume };

struct FileHeader {
  int version = kFormatVersion;
  PayloadKind kind = PayloadKind::volume;
  Index nx = 0;
  Index ny = 0;
  Index nz = 1;
  double pitch = 0.0;
  double wavelength = 0.0;
  std::vector<double> zplanes;
  double z_detector = 0.0;
  std::string dtype{kDtype};

  OpticalSetup setup() const;
  std::uintmax_t payload_bytes() const { return 16u * static_cast<std::uintmax_t>(nx * ny * nz); }

  friend bool operator==(const FileHeader&, const FileHeader&) = default;
};

struct FilePaths {
  std::filesystem::path header;
  std::filesystem::path payload;
};

/// Accepts the bare base path or either of the two file names.
FilePaths paths_for(const std::filesystem::path& base);

void write_volume(const std::filesystem::path& base, const Volume& volume, const OpticalSetup& setup);
void write_field(const std::filesystem::path& base, const ComplexField& field, const OpticalSetup& setup);

struct VolumeFile {
  FileHeader header;
  Volume volume;
};

struct FieldFile {
  FileHeader header;
  ComplexField field;
};

VolumeFile read_volume(const std::filesystem::path& base);
FieldFile read_field(const std::filesystem::path& base);
FileHeader read_header(const std::filesystem::path& base);

/// Throws ConsistencyError naming the first header entry that disagrees with `setup`.
void check_consistent(const FileHeader& header, const OpticalSetup& setup);

/// Writes `contents` to `path` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run configuration: JSON with sections optics, phantom, solver, io.
// Unknown keys are rejected; missing keys take the defaults below.

struct OpticsConfig {
  double wavelength_um = 0.5;
  Index nx = 128;
  Index ny = 128;
  double pitch_um = 5.0;
  Index num_planes = 30;
  double z_first_um = 0.0;
  double dz_um = 25.0;
  double detector_distance_um = 1060.0;  ///< from the last plane to the detector
  int padding = 1;
  TransferKind kernel = TransferKind::fresnel;

  OpticalSetup setup() const;
  PropagatorOptions propagator() const { return {padding, kernel}; }

  friend bool operator==(const OpticsConfig&, const OpticsConfig&) = default;
};

struct SolverSection {
  std::optional<double> alpha;  ///< required by reconstruct; no default
  int max_iterations = 100;
  Regularizer regularizer;
  int power_iterations = 100;
  double power_tolerance = 1e-8;
  std::uint64_t seed = 0;
  std::optional<double> kappa;
  int record_every = 10;
  double early_stop_tolerance = 0.0;

  /// Throws ConfigError when alpha is missing.
  SolverConfig to_config() const;

  friend bool operator==(const SolverSection&, const SolverSection&) = default;
};

struct IoConfig {
  std::string truth;   ///< optional ground-truth volume for reconstruct
  std::string report;  ///< optional report path for reconstruct

  friend bool operator==(const IoConfig&, const IoConfig&) = default;
};

struct RunConfig {
  OpticsConfig optics;
  PhantomSpec phantom;
  SolverSection solver;
  IoConfig io;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_run_config(std::string_view text);
std::string serialize_run_config(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

/// JSON report of a reconstruction. Absent final errors are omitted. Wall time is left out so
/// that repeated runs give identical files.
std::string serialize_report(const RunReport& report, const std::optional<double>& final_data_error,
                             const std::optional<double>& final_object_error);

enum class SliceChannel { magnitude, real, imag, phase };

SliceChannel parse_channel(std::string_view name);

struct SliceScaling {
  int plane = 0;  ///< 1-based
  double min = 0.0;
  double max = 0.0;
  std::string file;
};

/// One 16-bit binary PGM per requested plane (1-based), linear min-max scaling to 0..65535,
/// plus `<prefix>_scaling.json` recording each plane's min and max.
std::vector<SliceScaling> export_slices(const Volume& volume, const std::vector<int>& planes, SliceChannel channel,
                                        const std::filesystem::path& prefix);

}  // namespace holo3d::io

#endif  // HOLO3D_IO_HPP
