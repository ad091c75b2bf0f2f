/*
 * gridsec — smart-grid scheduling security toolkit.
 *
 * C interface to the simulation and game-solving core. All functions return
 * GRIDSEC_OK (0) on success or a negative error code; the message for the
 * most recent failure on the calling thread is available through
 * gridsec_last_error(). Objects are opaque handles released with their
 * matching *_free function. Strings returned through `char**` out-parameters
 * are owned by the caller and released with gridsec_string_free().
 */

#ifndef GRIDSEC_H
#define GRIDSEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GRIDSEC_API __declspec(dllexport)
#else
#define GRIDSEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum gridsec_status {
  GRIDSEC_OK = 0,
  GRIDSEC_ERR_INVALID_ARGUMENT = -1, /* null handle, bad enum value, ...    */
  GRIDSEC_ERR_PARSE = -2,            /* malformed config, CSV or record     */
  GRIDSEC_ERR_IO = -3,               /* file not found / unreadable         */
  GRIDSEC_ERR_DOMAIN = -4,           /* domain rule violated (negative load,
                                        zero totals, infeasible battery...) */
  GRIDSEC_ERR_ASSUMPTION = -5,       /* security-game assumptions violated;
                                        the message names the inequalities  */
  GRIDSEC_ERR_INTERNAL = -6,
};

typedef struct gridsec_scenario gridsec_scenario; /* parsed scenario config */
typedef struct gridsec_result gridsec_result;     /* named text artifacts   */

GRIDSEC_API const char* gridsec_version(void);

/* Message for the most recent failed call on this thread; never NULL. */
GRIDSEC_API const char* gridsec_last_error(void);

GRIDSEC_API void gridsec_string_free(char* s);

/* ---- scenario configuration -------------------------------------------- */

GRIDSEC_API int gridsec_scenario_load(const char* path, gridsec_scenario** out);
GRIDSEC_API int gridsec_scenario_parse(const char* text, gridsec_scenario** out);

/* Override one `section.key` with a textual value, e.g. ("attack.rho", "0.5"). */
GRIDSEC_API int gridsec_scenario_set(gridsec_scenario* scenario, const char* dotted_key,
                                     const char* value);

/* Canonical config document for the current state of the handle. */
GRIDSEC_API int gridsec_scenario_text(const gridsec_scenario* scenario, char** out_text);

GRIDSEC_API void gridsec_scenario_free(gridsec_scenario* scenario);

/* ---- simulation ---------------------------------------------------------
 * Results are bundles of named text artifacts:
 *   simulate: "days_csv" (one row per day) and "summary_json"
 *   sweep:    "sweep_<metric>_csv" for attacker_bill_change_pct,
 *             others_bill_change_pct, revenue_change_pct and par
 */

GRIDSEC_API int gridsec_run_scenario(const gridsec_scenario* scenario,
                                     gridsec_result** out);

/* Runs a grid of scenarios. `kinds_csv` is a comma list drawn from
 * shift, flat, mirror, scale. */
GRIDSEC_API int gridsec_run_sweep(const gridsec_scenario* scenario,
                                  const double* participation, size_t n_participation,
                                  const double* rho, size_t n_rho,
                                  const char* kinds_csv, gridsec_result** out);

GRIDSEC_API int gridsec_result_count(const gridsec_result* result, size_t* out_count);
GRIDSEC_API int gridsec_result_name(const gridsec_result* result, size_t index,
                                    const char** out_name);
/* Borrowed pointer, valid until the result handle is freed. */
GRIDSEC_API int gridsec_result_get(const gridsec_result* result, const char* name,
                                   const char** out_text);
GRIDSEC_API void gridsec_result_free(gridsec_result* result);

/* ---- security game ------------------------------------------------------ */

/* Solves the 2x3 security game for explicit payoff scalars. Emits a JSON
 * report: assumptions, delta, case, advice, pure and mixed equilibria with
 * best-response certificates. Fails with GRIDSEC_ERR_ASSUMPTION when the
 * game assumptions do not hold. */
GRIDSEC_API int gridsec_solve_game(double c_mon, double c_def, double l_att_weak,
                                   double l_att_strong, double c_att_weak,
                                   double c_att_strong, char** out_json);

/* Same, but derives attack losses and costs from simulation statistics:
 * losses gamma*lambda, costs rho*kappa; adds the case-2 inequality report. */
GRIDSEC_API int gridsec_solve_game_from_stats(double gamma_strong, double rho_strong,
                                              double gamma_weak, double rho_weak,
                                              double lambda, double kappa, double c_mon,
                                              double c_def, char** out_json);

/* Reads a flat-text game record (six payoff scalars plus labels). */
GRIDSEC_API int gridsec_solve_game_record(const char* record_text, char** out_json);

/* Fraction of sampled assumption-satisfying case-2 instances whose mixed
 * equilibrium monitors with probability >= threshold. */
GRIDSEC_API int gridsec_monitoring_probability_report(int samples, double threshold,
                                                      uint64_t seed, double* out_fraction);

/* ---- detection ----------------------------------------------------------
 * Both CSVs use the long profile format `household,day,interval,kwh`.
 * strategy: "average", "deep_aggregated" or "deep_individual".
 * threshold <= 0 selects the strategy default (0.10 / 0.10 / 0.20). */
GRIDSEC_API int gridsec_detect(const char* received_csv_path,
                               const char* estimates_csv_path, const char* strategy,
                               double threshold, int per_interval_max, char** out_json);

/* ---- synthetic demand data ---------------------------------------------- */

GRIDSEC_API int gridsec_gen_demand(int households, int days, int intervals,
                                   uint64_t seed, char** out_csv);

/* Variant honouring the [demand] section of a scenario config. */
GRIDSEC_API int gridsec_gen_demand_for_scenario(const gridsec_scenario* scenario,
                                                char** out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRIDSEC_H */
