#include "qfilter/drive.hpp"

#include "qfilter/units.hpp"

#include <cmath>
#include <stdexcept>

namespace qfilter {

DriveSpec DriveSpec::cw(double flux_per_s) {
    DriveSpec d;
    d.kind = Kind::cw;
    d.photon_flux = flux_per_s;
    d.validate();
    return d;
}

DriveSpec DriveSpec::cw_power(double power_w, const DeviceParams& p) {
    return cw(photon_flux_per_s(power_w, p.omega_laser));
}

DriveSpec DriveSpec::pulse(double n_in, double tau_ps, double t0_ps) {
    DriveSpec d;
    d.kind = Kind::gaussian_pulse;
    d.n_in = n_in;
    d.tau = tau_ps;
    d.t0 = t0_ps;
    d.validate();
    return d;
}

void DriveSpec::validate() const {
    if (kind == Kind::cw) {
        if (photon_flux < 0.0) throw std::invalid_argument("DriveSpec: photon_flux must be >= 0");
    } else {
        if (n_in < 0.0) throw std::invalid_argument("DriveSpec: n_in must be >= 0");
        if (tau <= 0.0) throw std::invalid_argument("DriveSpec: tau must be > 0");
    }
}

std::complex<double> input_amplitude(const DriveSpec& d, const DeviceParams& p, double t) {
    if (d.kind == DriveSpec::Kind::cw) {
        const double flux_ps = d.photon_flux * 1e-12;  // photons/s -> photons/ps
        return std::sqrt(p.eta_in * flux_ps);
    }
    if (d.n_in == 0.0) return 0.0;
    constexpr double ln2 = 0.6931471805599453;
    const double dt = t - d.t0;
    const double envelope = std::pow(4.0 * ln2 / (M_PI * d.tau * d.tau), 0.25) *
                            std::exp(-2.0 * ln2 * dt * dt / (d.tau * d.tau));
    return std::sqrt(p.eta_in * d.n_in) * envelope;
}

std::complex<double> rabi_amplitude(const DriveSpec& d, const DeviceParams& p, double t) {
    return output_coupling(p) * input_amplitude(d, p, t);
}

double output_coupling(const DeviceParams& p) {
    return std::sqrt(p.eta_top * rate_of(p.kappa));
}

}  // namespace qfilter
