#pragma once

#include "qfilter/device.hpp"

#include <complex>

namespace qfilter {

// Coherent drive: CW tone or Gaussian wavepacket.
//
// The Gaussian envelope is normalized so that the bare input carries
// n_in photons per pulse:
//   <b_in>(t) = sqrt(n_in) (4 ln2 / (pi tau^2))^(1/4) exp(-2 ln2 (t-t0)^2/tau^2)
// with tau the intensity FWHM in ps. The mode-matched amplitude that both
// drives the cavity and reaches the detector carries an extra sqrt(eta_in).
struct DriveSpec {
    enum class Kind { cw, gaussian_pulse };

    Kind kind = Kind::gaussian_pulse;
    double photon_flux = 0.0;  // CW: photons/s (= P / (hbar w_laser))
    double n_in = 0.0;         // pulse: mean photons per pulse
    double tau = 125.0;        // pulse: intensity FWHM (ps)
    double t0 = 0.0;           // pulse: center (ps)

    static DriveSpec cw(double flux_per_s);
    static DriveSpec cw_power(double power_w, const DeviceParams& p);
    static DriveSpec pulse(double n_in, double tau_ps, double t0_ps = 0.0);

    void validate() const;
};

// Mode-matched input amplitude beta(t) = sqrt(eta_in) <b_in>(t), in ps^(-1/2).
// Integral of |beta|^2 over a pulse is eta_in * n_in.
std::complex<double> input_amplitude(const DriveSpec& d, const DeviceParams& p, double t);

// Classical Rabi frequency Omega(t) = sqrt(eta_top kappa/hbar) beta(t), in 1/ps.
std::complex<double> rabi_amplitude(const DriveSpec& d, const DeviceParams& p, double t);

// sqrt(eta_top * kappa/hbar): output-coupling constant of the input-output
// relation b_out = b_in + sqrt(eta_top kappa) a_H, in ps^(-1/2).
double output_coupling(const DeviceParams& p);

}  // namespace qfilter
