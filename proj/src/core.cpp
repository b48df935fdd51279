#include "holo3d/core.hpp"

namespace holo3d {

Volume zero_volume(const OpticalSetup& setup) { return Volume(setup.grid, setup.zplanes); }

ComplexField zero_field(const OpticalSetup& setup) { return ComplexField(setup.grid); }

}  // namespace holo3d
