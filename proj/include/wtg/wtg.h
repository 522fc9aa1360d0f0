/* C interface of the weighted timed game solver.
 *
 * Every function returns a wtg_status. On failure, wtg_last_error() returns
 * {"error": {"stage": ..., "kind": ..., "detail": ...}} for the calling
 * thread. Strings handed out through char** parameters belong to the caller
 * and are released with wtg_string_free. Rationals travel as "p/q" strings.
 */
#ifndef WTG_H
#define WTG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define WTG_API __declspec(dllexport)
#else
#define WTG_API __attribute__((visibility("default")))
#endif

typedef enum {
    WTG_OK = 0,
    WTG_ERROR_DOMAIN = 1,   /* the input is well formed but the computation refuses it */
    WTG_ERROR_USAGE = 2,    /* null or malformed arguments */
    WTG_ERROR_INTERNAL = 3
} wtg_status;

typedef struct wtg_game wtg_game;
typedef struct wtg_solution wtg_solution;

WTG_API const char* wtg_version(void);
WTG_API const char* wtg_last_error(void);
WTG_API void wtg_string_free(char* s);

/* ── Games ──────────────────────────────────────────────────────────── */

WTG_API wtg_status wtg_game_from_json(const char* text, wtg_game** out);
WTG_API wtg_status wtg_game_from_file(const char* path, wtg_game** out);
WTG_API wtg_status wtg_game_to_json(const wtg_game* game, char** out);
WTG_API void wtg_game_free(wtg_game* game);

/* Divergence report and value classes; *divergent is set to 0 or 1. */
WTG_API wtg_status wtg_check(const wtg_game* game, char** out_json, int* divergent);
WTG_API wtg_status wtg_regions(const wtg_game* game, char** out_json);

/* ── Values ─────────────────────────────────────────────────────────── */

typedef struct {
    long max_iters; /* <= 0 keeps the default bound */
    int prune;      /* without it, games with +inf or -inf states are refused */
} wtg_solve_options;

WTG_API wtg_status wtg_solve(const wtg_game* game, const wtg_solve_options* opt, wtg_solution** out);
WTG_API wtg_status wtg_solution_values(const wtg_solution* sol, char** out_json);
WTG_API void wtg_solution_free(wtg_solution* sol);

/* ── Strategies ─────────────────────────────────────────────────────── */

typedef struct {
    const char* epsilon;         /* default "1/10" */
    const char* N;               /* default "100" */
    const char* const* p_values; /* superpositions to emit, may be empty */
    size_t p_count;
} wtg_synth_options;

/* {"K": ..., "strategies": {"sigma1": ..., "sigma2": ..., "switching": ...,
 *  "max": ..., "eta_<p>_<q>": ...}} */
WTG_API wtg_status wtg_synth(const wtg_solution* sol, const wtg_synth_options* opt, char** out_json);

/* ── Expectations ───────────────────────────────────────────────────── */

typedef struct {
    const char* location;
    const char* clock; /* "p/q" */
} wtg_start;

typedef struct {
    const char* epsilon;             /* precision of Max's best response moves, default "1/10" */
    const char* tol;                 /* certification tolerance, default "1/100" */
    unsigned long long max_horizon;  /* 0 keeps the default */
} wtg_expect_options;

/* max_strategy_json == NULL plays Max's computed best response. */
WTG_API wtg_status wtg_expect(const wtg_solution* sol, const char* min_strategy_json, const char* max_strategy_json,
                              const wtg_start* start, const wtg_expect_options* opt, char** out_json);

typedef struct {
    unsigned long long runs;
    unsigned long long seed;
    unsigned long long max_steps; /* 0 keeps the default */
    unsigned long long zone_K;
    const char* epsilon;          /* for the best response, default "1/10" */
} wtg_simulate_options;

/* out_csv lists one row per run. */
WTG_API wtg_status wtg_simulate(const wtg_solution* sol, const char* min_strategy_json, const char* max_strategy_json,
                                const wtg_start* start, const wtg_simulate_options* opt, char** out_json,
                                char** out_csv);

typedef struct {
    const char* game_id;
    wtg_start start;
    const char* epsilon;
    const char* N;
    const char* const* p_values; /* empty keeps 1/2, 3/4, 9/10, 99/100 */
    size_t p_count;
    unsigned long long seed;
    unsigned long long mc_runs;  /* 0 keeps the default */
} wtg_emulate_options;

WTG_API wtg_status wtg_emulate(const wtg_game* game, const wtg_emulate_options* opt, char** out_json, char** out_csv,
                               char** out_svg);

/* ── Plots ──────────────────────────────────────────────────────────── */

/* SVG of one location's value from a values file; the CSV samples 512
 * points plus every breakpoint. Either output may be NULL. */
WTG_API wtg_status wtg_plot(const char* values_json, const char* location, char** out_svg, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif
