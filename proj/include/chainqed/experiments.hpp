// experiments.hpp — calibration, free decay, readout sweep and rate oracles

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainqed/bath_observables.hpp"
#include "chainqed/circuit.hpp"
#include "chainqed/lindblad.hpp"
#include "chainqed/mpo.hpp"
#include "chainqed/spectral_density.hpp"
#include "chainqed/tdvp.hpp"

namespace chainqed {

enum class ScalePreset { desk, paper };

std::string to_string(ScalePreset p);
ScalePreset preset_from_string(const std::string& name);

// One fully resolved experiment: bath, circuit and numerical knobs.  Fields
// left at 0 are filled by resolve() from the preset rules.
struct ExperimentConfig {
    BathKind bath = BathKind::ohmic;
    ScalePreset preset = ScalePreset::desk;
    CircuitParams circuit;         // lambda filled from the bath on resolve
    bool swap_frequencies = false; // Delta < 0 variant (omega_q <-> omega_a)

    // bath shape parameters (Table-1 defaults)
    double flat_omega_min = 3.0, flat_omega_max = 12.0;
    double ohmic_cutoff = 15.0;
    double notch_depth = 0.7, notch_sigma = 0.1;

    // numerical knobs; 0 = derive from preset
    int chain_length = 0;     // N
    int quadrature_modes = 0; // M (default 10 N)
    int padded_modes = 0;     // spectra padding (default 10 N)
    int chi = 0;
    double dt = 0.0;          // ns
    int d_a = 0;
    int d_chain = 0;
    int record_stride = 0;
    int jobs = 1;
    std::string out_dir = "out";

    double drive_nbar = 0.0;  // used by per-point sizing rules
};

// Resolved machinery shared by the protocols.
struct ExperimentSetup {
    ExperimentConfig cfg;         // with all knobs filled in
    SpectralDensity J;            // calibrated: 2 pi J(omega_a) = kappa
    ChainCoefficients chain;      // length N
    ChainCoefficients padded;     // length M_pad, extends `chain`
    SiteLayout layout;
    DressedBasis basis;
    MatrixXc sigma_z, n_a;        // dressed two-site observables
    EvolutionConfig evolution;

    MPO make_mpo(double t_ns = 0.0) const;
    MPS make_initial(int j, int n) const;
};

// t_final in units of kappa t / (2 pi); resolves all auto knobs (chain length
// from the light cone, cutoffs from the truncation rules, Table-2 chi/dt).
ExperimentSetup resolve(ExperimentConfig cfg, double t_final_kt);

// asymptotic hopping of the bath support, sets the chain group velocity
double asymptotic_hopping(const ExperimentConfig& cfg);

// -------- calibration (undriven spectroscopy) -------------------------------

struct CalibrationResult {
    BathKind bath;
    double omega_a0 = 0.0;   // resonator peak, qubit in |0> (GHz)
    double omega_a1 = 0.0;   // resonator peak, qubit in |1> (GHz)
    double omega_bar = 0.0;  // (omega_a0 + omega_a1)/2
    double qubit_peak = 0.0; // emission peak near omega_q from the |1-bar n> run
    StarSpectrum spectrum0, spectrum1;
};

// free decay from |0-bar n> and |1-bar n> to kappa t/(2 pi) = 1; peak
// positions by parabolic interpolation.  n = 2 accounts for the typical ac
// Stark shift.  Throws NumericalError if N_a has not relaxed below 5% of its
// initial value (calibration incomplete), or if the dispersive shift vanishes.
CalibrationResult calibrate(const ExperimentConfig& cfg, int n_photons = 2);

// -------- free decay ---------------------------------------------------------

struct FreeDecayResult {
    ObservableSeries series;
    StarSpectrum spectrum; // at final time, padded
};

FreeDecayResult free_decay(const ExperimentConfig& cfg, int j, int n, double t_final_kt,
                           const std::string& checkpoint_path = "");

// -------- drive targets ------------------------------------------------------

// Steady-state photon-number label of the paper's Eq.-(5) convention.
double target_nbar(double eps_d, double omega_res, double omega_d, double kappa);
double eps_for_nbar(double nbar, double omega_res, double omega_d, double kappa);

// -------- rate extraction ----------------------------------------------------

struct GammaFit {
    double gamma_ghz = 0.0; // table units: physical rate / 2 pi
    double gamma_mhz = 0.0;
    double plateau = 0.0;
    double residual = 0.0;
};

// exponential fit of Sigma_z over the window [lo, hi] in kappa t/(2 pi)
GammaFit fit_gamma(const ObservableSeries& series, double window_lo = 0.2,
                   double window_hi = 0.5);

struct SweepPoint {
    double eps_d = 0.0;
    double nbar = 0.0;
    GammaFit fit;
    bool delta_sat_flag = false;
    double qubit_peak = 0.0; // ac-Stark-shifted qubit emission peak (GHz); 0 if absent
    std::string error;       // nonempty if this point failed

    bool ok() const { return error.empty(); }
};

struct RateSweepResult {
    CalibrationResult calibration;
    std::vector<SweepPoint> points; // first point is the eps_d = 0 reference
    double gamma0_mhz = 0.0;

    std::vector<double> ratios() const; // Gamma(nbar)/Gamma(0) per driven point
};

// full Fig.-3-style protocol: reference plus one run per nbar target, fitted
// over [0.2, 0.5]; point failures are recorded, not thrown.  jobs > 1 runs
// points in parallel.
RateSweepResult readout_sweep(const ExperimentConfig& cfg,
                              const std::vector<double>& nbar_targets,
                              const CalibrationResult& calibration);

// Lindblad twin of a sweep point; same observables and fit window
GammaFit lindblad_gamma(const ExperimentConfig& cfg, double nbar,
                        const CalibrationResult& calibration);

// -------- spurious excitation ------------------------------------------------

struct ExcitationCheck {
    double mps_slope = 0.0;      // d<Sigma_z>/dt in 1/ns, fitted past the quench
    double lindblad_slope = 0.0;
    double predicted_slope = 0.0; // 2 kappa g^2 / Sigma^2, converted to 1/ns
};

ExcitationCheck excitation_check(const ExperimentConfig& cfg, double eps_d = 0.0,
                                 double t_final_kt = 0.35, double fit_from_kt = 0.1);

// -------- analytic spectra ---------------------------------------------------

// parameter-free Wigner-Weisskopf line shape on the padded star grid
std::vector<double> ww_prediction(const SpectralDensity& J, double omega_a0, double kappa,
                                  const std::vector<double>& star_omega);

// J-tilde(omega_q(nbar)) / J-tilde(omega_q(0)) for the recorded qubit peaks
std::vector<double> effective_rate_estimate(const ExperimentSetup& setup,
                                            const std::vector<double>& qubit_peaks);

} // namespace chainqed
