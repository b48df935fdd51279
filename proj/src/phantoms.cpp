#include "holo3d/phantoms.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace holo3d {
namespace {

constexpr int kGlyphCols = 5;
constexpr int kGlyphRows = 7;

using Glyph = std::array<const char*, kGlyphRows>;

// Block capitals, top row first.
constexpr std::array<Glyph, 4> kLetters = {{
    {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"},
    {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."},
    {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."},
    {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."},
}};

void check_planes(const PhantomSpec& spec, const OpticalSetup& setup) {
  if (spec.planes.size() != 4) throw ParameterError("phantom needs exactly four occupied planes");
  for (std::size_t i = 0; i < spec.planes.size(); ++i) {
    const int p = spec.planes[i];
    if (p < 1 || p > setup.num_planes())
      throw ParameterError("phantom plane " + std::to_string(p) + " outside 1.." + std::to_string(setup.num_planes()));
    for (std::size_t j = 0; j < i; ++j)
      if (spec.planes[j] == p) throw ParameterError("phantom planes must be distinct");
  }
}

}  // namespace

OpticalSetup make_setup(Index nx, Index ny, double pitch, double wavelength, Index num_planes, double z_first,
                        double dz, double detector_distance) {
  if (num_planes < 1) throw ParameterError("need at least one plane");
  OpticalSetup setup;
  setup.wavelength = wavelength;
  setup.grid = Grid2D{nx, ny, pitch};
  setup.zplanes.resize(static_cast<std::size_t>(num_planes));
  for (Index c = 0; c < num_planes; ++c) setup.zplanes[static_cast<std::size_t>(c)] = z_first + static_cast<double>(c) * dz;
  setup.z_detector = setup.zplanes.back() + detector_distance;
  setup.validate();
  return setup;
}

OpticalSetup make_setup_paper(AxialSpacing spacing) {
  constexpr Index n = 128;
  constexpr Index planes = 30;
  constexpr double extent = 640.0;
  constexpr double depth = 750.0;
  const double dz = spacing == AxialSpacing::voxel_depth ? depth / planes : depth / (planes - 1);
  return make_setup(n, n, extent / n, 0.5, planes, 0.0, dz, 1060.0);
}

double letter_phase(int letter) {
  constexpr double pi = std::numbers::pi;
  constexpr std::array<double, 4> phases = {2.0 * pi / 3.0, pi / 4.0, pi / 3.0, pi / 2.0};
  if (letter < 0 || letter >= 4) throw ParameterError("letter index out of range");
  return phases[static_cast<std::size_t>(letter)];
}

Volume amplitude_phantom(const PhantomSpec& spec, const OpticalSetup& setup) {
  if (spec.kind != PhantomKind::amplitude_reflectors) throw ParameterError("not an amplitude phantom spec");
  check_planes(spec, setup);
  const Grid2D& g = setup.grid;
  if (g.nx < 4 || g.ny < 4) throw ParameterError("grid too small to place reflectors in quadrants");

  Volume out(g, setup.zplanes);
  for (std::size_t i = 0; i < 4; ++i) {
    const Index cx = static_cast<Index>(i % 2) * (g.nx / 2) + g.nx / 4;
    const Index cy = static_cast<Index>(i / 2) * (g.ny / 2) + g.ny / 4;
    auto plane = out.plane(spec.planes[i] - 1);
    plane.block(cx - 1, cy - 1, 2, 2).setConstant(std::complex<double>(1.0, 0.0));
  }
  return out;
}

Volume text_phase_phantom(const PhantomSpec& spec, const OpticalSetup& setup) {
  if (spec.kind != PhantomKind::text_phase) throw ParameterError("not a text phantom spec");
  check_planes(spec, setup);
  if (spec.glyph_size < kGlyphRows) throw ParameterError("glyph_size must be at least 7 pixels");
  const Grid2D& g = setup.grid;
  const Index height = spec.glyph_size;
  const Index width = static_cast<Index>(std::lround(static_cast<double>(spec.glyph_size) * kGlyphCols / kGlyphRows));
  if (2 * height > g.ny || 2 * width > g.nx) throw ParameterError("glyph larger than a grid quadrant");

  Volume out(g, setup.zplanes);
  for (int letter = 0; letter < 4; ++letter) {
    const Index x0 = (letter % 2) * (g.nx / 2) + (g.nx / 2 - width) / 2;
    const Index y0 = (letter / 2) * (g.ny / 2) + (g.ny / 2 - height) / 2;
    const Glyph& glyph = kLetters[static_cast<std::size_t>(letter)];
    const std::complex<double> value = std::polar(1.0, letter_phase(letter));
    auto plane = out.plane(spec.planes[static_cast<std::size_t>(letter)] - 1);
    for (Index j = 0; j < height; ++j) {
      const char* row = glyph[static_cast<std::size_t>(j * kGlyphRows / height)];
      for (Index i = 0; i < width; ++i) {
        if (row[i * kGlyphCols / width] == '#') plane(x0 + i, y0 + j) = value;
      }
    }
  }
  return out;
}

Volume make_phantom(const PhantomSpec& spec, const OpticalSetup& setup) {
  switch (spec.kind) {
    case PhantomKind::amplitude_reflectors:
      return amplitude_phantom(spec, setup);
    case PhantomKind::text_phase:
      return text_phase_phantom(spec, setup);
  }
  throw ParameterError("unknown phantom kind");
}

}  // namespace holo3d
