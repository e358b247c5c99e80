#include "qfilter/device.hpp"

#include <cmath>
#include <stdexcept>

namespace qfilter {

namespace {
void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw std::invalid_argument("DeviceParams: " + field + " " + what);
}
}  // namespace

void DeviceParams::validate() const {
    require(g >= 0.0, "g", "must be >= 0");
    require(kappa > 0.0, "kappa", "must be > 0");
    require(gamma_sp >= 0.0, "gamma_sp", "must be >= 0");
    require(gamma_star >= 0.0, "gamma_star", "must be >= 0");
    require(eta_top >= 0.0 && eta_top <= 1.0, "eta_top", "must be in [0, 1]");
    require(eta_in >= 0.0 && eta_in <= 1.0, "eta_in", "must be in [0, 1]");
    require(omega_laser > 0.0, "omega_laser", "must be > 0");
    require(rep_rate > 0.0, "rep_rate", "must be > 0");
}

DeviceParams DeviceParams::second_device() {
    DeviceParams p;
    p.g = 19.0;
    p.kappa = 100.0;
    p.gamma_sp = 1.0;
    p.gamma_star = 0.0;
    p.delta_fss = 10.0;
    p.theta = 20.0 * M_PI / 180.0;
    p.eta_top = 0.635;
    return p;
}

LaserDetunings resonant_detunings(const DeviceParams& p, double laser_offset_uev) {
    const double c2 = std::cos(p.theta) * std::cos(p.theta);
    const double s2 = std::sin(p.theta) * std::sin(p.theta);
    LaserDetunings d;
    d.x = p.delta_fss * c2 - laser_offset_uev;
    d.y = -p.delta_fss * s2 - laser_offset_uev;
    d.cav_h = -laser_offset_uev;
    d.cav_v = p.cavity_mode_splitting - laser_offset_uev;
    return d;
}

}  // namespace qfilter
