#ifndef PDMLAB_H
#define PDMLAB_H

/* C interface to the pdmlab core: pulse-density modulation for resonant
 * wireless power links. Handles are opaque; every call returns a status and
 * writes results through out-pointers. On failure pdmlab_last_error() holds
 * a human-readable message for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdmlab_status {
    PDMLAB_OK = 0,
    PDMLAB_ERR_INVALID_ARGUMENT = 1, /* bad input, unknown key/name, null pointer */
    PDMLAB_ERR_RUNTIME = 2,          /* run failed: divergence, I/O, flagged violation */
    PDMLAB_ERR_NO_MEMORY = 3
} pdmlab_status;

const char* pdmlab_version(void);

/* Message from the last failing call on this thread; empty string if none. */
const char* pdmlab_last_error(void);

typedef struct pdmlab_ntf pdmlab_ntf;
typedef struct pdmlab_config pdmlab_config;
typedef struct pdmlab_trace pdmlab_trace;

/* --- noise transfer functions ------------------------------------------- */

pdmlab_status pdmlab_ntf_first_order(pdmlab_ntf** out);
pdmlab_status pdmlab_ntf_notch(double omega_ratio, double pole_radius, pdmlab_ntf** out);
pdmlab_status pdmlab_ntf_order(const pdmlab_ntf* ntf, int* out);

/* Response at omega = omega_over_ws * (switching frequency as an angular
 * unit); omega_over_ws in [0, 1] spans DC to the modulator Nyquist angle. */
pdmlab_status pdmlab_ntf_eval(const pdmlab_ntf* ntf, double omega_over_ws, double* magnitude,
                              double* phase_rad);
void pdmlab_ntf_free(pdmlab_ntf* ntf);

/* --- modulator ----------------------------------------------------------- */

/* Runs the 1-bit modulator over n density samples (one per half switching
 * cycle, values in [0, 1]). bits gets n bytes of 0/1; errors, when non-NULL,
 * gets the n quantization errors. */
pdmlab_status pdmlab_modulate(const pdmlab_ntf* ntf, const double* density, size_t n,
                              uint8_t* bits, double* errors);

/* Runs `horizon` steps at each constant density and counts quantization
 * errors outside [-1, 0] (small numeric epsilon allowed). min/max error may
 * be NULL. */
pdmlab_status pdmlab_stability_scan(const pdmlab_ntf* ntf, const double* d_grid, size_t n_d,
                                    uint64_t horizon, uint64_t* violations, double* min_error,
                                    double* max_error);

/* --- configuration ------------------------------------------------------- */

pdmlab_status pdmlab_config_default(pdmlab_config** out);

/* Flat `key = value` file; see the README for keys and SI suffixes. */
pdmlab_status pdmlab_config_load(const char* path, pdmlab_config** out);

/* Assigns one key as if it appeared in the file (no validation). */
pdmlab_status pdmlab_config_set(pdmlab_config* cfg, const char* key, const char* value);

pdmlab_status pdmlab_config_validate(const pdmlab_config* cfg);
void pdmlab_config_free(pdmlab_config* cfg);

/* --- experiments ---------------------------------------------------------- */

pdmlab_status pdmlab_experiment_count(size_t* out);
pdmlab_status pdmlab_experiment_name(size_t index, const char** out);

/* Runs a named experiment and writes its CSVs plus manifest.csv under
 * out_dir. Identical configs give byte-identical files. */
pdmlab_status pdmlab_run_experiment(const char* name, const pdmlab_config* cfg,
                                    const char* out_dir);

/* --- direct simulation probe ---------------------------------------------- */

/* Steady-state run at constant density d on the configured side (the other
 * bridge runs at full density). Duration comes from duration_periods, or
 * 1600 switching periods when that is 0. */
pdmlab_status pdmlab_simulate_density(const pdmlab_config* cfg, double d, pdmlab_trace** out);

pdmlab_status pdmlab_trace_length(const pdmlab_trace* trace, size_t* out);
pdmlab_status pdmlab_trace_sample_rate(const pdmlab_trace* trace, double* out);

/* Copies one channel into buffer (length n from pdmlab_trace_length).
 * Channels: time, i1, i2, vc1, vc2, u1, u2. */
pdmlab_status pdmlab_trace_channel(const pdmlab_trace* trace, const char* channel,
                                   double* buffer, size_t buffer_len);

/* Per-switching-cycle envelope ripple of i1 or i2 after discarding
 * discard_cycles cycles: 100 * (max - min) / (max + min). */
pdmlab_status pdmlab_trace_ripple(const pdmlab_trace* trace, const char* channel,
                                  size_t discard_cycles, double* ripple_percent);
void pdmlab_trace_free(pdmlab_trace* trace);

/* --- envelope-domain small-signal model ----------------------------------- */

/* Resonant peak of the envelope transfer function at the full-power
 * operating point. output_i2 = 0 probes |I1|, nonzero |I2|. has_peak is 0
 * when the magnitude is monotone over the probed grid. */
pdmlab_status pdmlab_gssa_peak(const pdmlab_config* cfg, int output_i2, int* has_peak,
                               double* omega0_rad_s, double* gain_db);

#ifdef __cplusplus
}
#endif

#endif /* PDMLAB_H */
