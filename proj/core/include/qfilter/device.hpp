#pragma once

#include <string>

namespace qfilter {

// Physical constants of one QD-micropillar device.
//
// The cavity escape-channel breakdown measured for the main device
// (64% top mirror, 10% bottom mirror, 26% lateral ridges) is recorded
// here for reference; only the top fraction eta_top enters the
// input-output relation, the rest of kappa is loss.
struct DeviceParams {
    double g = 19.0;           // exciton-cavity coupling (ueV), same for both modes
    double kappa = 90.0;       // total cavity damping (ueV), same for both modes
    double gamma_sp = 0.6;     // exciton spontaneous emission (ueV)
    double gamma_star = 0.03;  // pure dephasing (ueV)
    double delta_fss = 3.0;    // fine-structure splitting w_X - w_Y (ueV)
    double theta = 15.0 * 3.14159265358979323846 / 180.0;  // QD-to-cavity axis angle (rad)
    double eta_top = 0.64;     // top-mirror escape fraction
    double eta_in = 0.95;      // input spatial overlap
    double cavity_mode_splitting = 70.0;  // w_cV - w_cH (ueV); V mode above H
    double omega_laser = 1.34; // photon energy (eV), used for power conversion
    double rep_rate = 82.0e6;  // pulsed-laser repetition rate (Hz)

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    // Main device of the reflectivity/correlation measurements.
    static DeviceParams main_device() { return DeviceParams{}; }

    // Second device used for the pulse-length study (total gamma = 0.5 ueV,
    // split as a radiatively limited exciton: gamma_sp = 1.0, gamma* = 0).
    static DeviceParams second_device();
};

// Detunings of all four transitions from the (rotating-frame) laser
// frequency, in ueV.
struct LaserDetunings {
    double x = 0.0;      // w_X - w_laser
    double y = 0.0;      // w_Y - w_laser
    double cav_h = 0.0;  // w_cH - w_laser
    double cav_v = 0.0;  // w_cV - w_laser
};

// Detunings for a laser offset Delta = w_laser - w_cH with the QD
// Stark-tuned so the H-exciton line sits exactly on the H cavity mode
// (delta_H^QD = -Delta for every Delta).
LaserDetunings resonant_detunings(const DeviceParams& p, double laser_offset_uev = 0.0);

}  // namespace qfilter
