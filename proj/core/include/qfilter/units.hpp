#pragma once

// Unit system used throughout: energies in ueV, times in ps.
// A rate quoted as an energy (kappa, gamma_sp, ...) becomes an inverse
// time by dividing by hbar.

namespace qfilter {

inline constexpr double hbar_uev_ps = 658.2119569;   // hbar in ueV*ps
inline constexpr double joule_per_ev = 1.602176634e-19;

// energy (ueV) -> rate (1/ps)
inline constexpr double rate_of(double energy_uev) { return energy_uev / hbar_uev_ps; }

// optical power (W) at photon energy (eV) -> photon flux (photons/s)
inline constexpr double photon_flux_per_s(double power_w, double omega_ev) {
    return power_w / (omega_ev * joule_per_ev);
}

}  // namespace qfilter
