#include "plg/bellow.hpp"

#include "plg/error.hpp"

#include <string>

namespace plg {

void BellowSpec::check() const {
    const double fields[] = {wall_thickness, pitch, external_angle, internal_angle, outer_diameter, length};
    for (double f : fields) {
        if (!(f > 0.0)) throw InvalidArgument("bellow dimensions must be positive");
    }
    if (wall_thickness < 1.0 || wall_thickness > 3.0) {
        throw InvalidArgument("bellow wall thickness " + std::to_string(wall_thickness) +
                              " mm outside [1.0, 3.0]");
    }
}

BellowSpec BellowSpec::with_thickness(double wall_thickness_mm) {
    BellowSpec spec;
    spec.wall_thickness = wall_thickness_mm;
    spec.check();
    return spec;
}

}  // namespace plg
