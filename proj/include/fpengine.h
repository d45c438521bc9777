/* Copyright 2026 the fpengine authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the out-of-order floating-point execution-engine model.
 *
 * The library exposes two layers:
 *   - stateless IEEE-754 double-precision operations (bit patterns in,
 *     bit pattern + exception flags out), and
 *   - a cycle-accurate simulation handle driven by trace programs.
 *
 * All functions are thread-compatible; a simulation handle must be used
 * from one thread at a time.
 */

#ifndef FPENGINE_H_
#define FPENGINE_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpe_status {
  FPE_OK = 0,
  FPE_ERR_ARGUMENT = 1,   /* bad parameter / unknown key */
  FPE_ERR_IO = 2,         /* file could not be read */
  FPE_ERR_PARSE = 3,      /* trace syntax error */
  FPE_ERR_TRAP = 4,       /* engine raised an enabled exception */
  FPE_ERR_DEADLOCK = 5,   /* no progress for 200 cycles */
  FPE_ERR_BUDGET = 6,     /* cycle budget exceeded */
  FPE_ERR_RECOVERY = 7,   /* checkpoint evicted during rollback */
  FPE_ERR_GOLDEN = 8,     /* captured stores differ from EXPECT footer */
  FPE_ERR_SELFTEST = 9,   /* arithmetic self-check failed */
  FPE_ERR_STATE = 10      /* call out of sequence (e.g. run before load) */
} fpe_status;

const char* fpe_status_name(fpe_status s);
const char* fpe_version(void);

/* ---- exception flags (MIPS FCSR order) -------------------------------- */

#define FPE_FLAG_V 0x10u /* invalid operation */
#define FPE_FLAG_Z 0x08u /* divide by zero */
#define FPE_FLAG_O 0x04u /* overflow */
#define FPE_FLAG_U 0x02u /* underflow */
#define FPE_FLAG_I 0x01u /* inexact */

/* ---- rounding modes (FCSR RM encodings) ------------------------------- */

#define FPE_RM_RN 0 /* round to nearest, ties to even */
#define FPE_RM_RZ 1 /* toward zero */
#define FPE_RM_RP 2 /* toward plus infinity */
#define FPE_RM_RM 3 /* toward minus infinity */

/* ---- stateless double-precision operations ----------------------------
 * Operands and results are raw IEEE-754 binary64 bit patterns. `flags`
 * may be NULL; otherwise it receives an FPE_FLAG_* mask. */

uint64_t fpe_fp_add(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags);
uint64_t fpe_fp_sub(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags);
uint64_t fpe_fp_mul(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags);
uint64_t fpe_fp_div(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags);
uint64_t fpe_fp_recip(uint64_t a, int rm, uint32_t* flags);
uint64_t fpe_fp_madd(uint64_t a, uint64_t b, uint64_t c, int rm, int flush,
                     uint32_t* flags);
uint64_t fpe_fp_msub(uint64_t a, uint64_t b, uint64_t c, int rm, int flush,
                     uint32_t* flags);
/* cond: 0..15 = AF UN EQ UEQ LT ULT LE ULE SAF SUN SEQ SUEQ SLT SULT SLE SULE */
uint64_t fpe_fp_compare(int cond, uint64_t a, uint64_t b, uint32_t* flags);
/* 10-bit class mask, LSB first: SNaN, QNaN, -inf, -normal, -subnormal, -0,
 * +inf, +normal, +subnormal, +0 */
uint32_t fpe_fp_class(uint64_t a);
/* kind: 0=min 1=max 2=mina 3=maxa */
uint64_t fpe_fp_minmax(int kind, uint64_t a, uint64_t b, uint32_t* flags);
/* kind: 0=abs 1=neg 2=mov */
uint64_t fpe_fp_move(int kind, uint64_t a);

/* Reciprocal seed table: 128 x 16-bit entries. */
void fpe_recip_rom(uint16_t out[128]);

/* Arithmetic self-check against the host FPU; fills `summary` (truncated
 * to `cap` bytes, always NUL-terminated) with ulp statistics. */
fpe_status fpe_selftest(uint64_t seed, uint64_t count, char* summary,
                        size_t cap);

/* ---- simulation -------------------------------------------------------- */

typedef struct fpe_sim fpe_sim;

typedef struct fpe_sim_config {
  int variant;            /* 1 = dedicated units, 2 = dual unified FMACs */
  int bmt_enabled;        /* Block-Mapping-Table wakeup gating */
  int regfile_model;      /* 0 = reference, 1 = xor, 2 = lvt */
  int rounding_mode;      /* FPE_RM_* */
  int flush_to_zero;      /* FCSR FS */
  int broadcast_lead;     /* tag broadcast this many cycles before data */
  int load_broadcast_lead;
  int lat_add, lat_mul, lat_fmac, lat_div, lat_compare, lat_branch;
  uint64_t cycle_budget;
  uint64_t seed;
  int collect_events;     /* per-cycle log records in the report */
} fpe_sim_config;

fpe_sim_config fpe_sim_config_default(void);

fpe_status fpe_sim_create(const fpe_sim_config* config, fpe_sim** out);
void fpe_sim_destroy(fpe_sim* sim);

/* Parse failures leave details in fpe_sim_error(). */
fpe_status fpe_sim_load_trace_text(fpe_sim* sim, const char* text);
fpe_status fpe_sim_load_trace_file(fpe_sim* sim, const char* path);

fpe_status fpe_sim_run(fpe_sim* sim);

/* Last error / status detail (empty string when none). */
const char* fpe_sim_error(const fpe_sim* sim);

/* Report accessors; valid after fpe_sim_run. */
uint64_t fpe_sim_cycles(const fpe_sim* sim);
uint64_t fpe_sim_dispatched(const fpe_sim* sim);
uint64_t fpe_sim_issued(const fpe_sim* sim);
uint64_t fpe_sim_committed(const fpe_sim* sim);
uint64_t fpe_sim_comparisons(const fpe_sim* sim);
uint64_t fpe_sim_bmt_reads(const fpe_sim* sim);
uint32_t fpe_sim_fcsr_flags(const fpe_sim* sim); /* FPE_FLAG_* mask */

size_t fpe_sim_store_count(const fpe_sim* sim);
fpe_status fpe_sim_store(const fpe_sim* sim, size_t index, int* reg,
                         uint64_t* bits);

/* Compares captured stores against the trace's EXPECT footer.
 * FPE_OK on match, FPE_ERR_GOLDEN on mismatch (details in fpe_sim_error),
 * FPE_ERR_STATE when the trace has no EXPECT lines. */
fpe_status fpe_sim_golden_check(fpe_sim* sim);

/* Whole report as text (key: value lines plus timeline), or as one CSV row.
 * Returns the number of bytes that were needed (excluding the NUL); the
 * buffer is always NUL-terminated when cap > 0. */
size_t fpe_sim_report_text(const fpe_sim* sim, char* buf, size_t cap);
size_t fpe_sim_report_csv(const fpe_sim* sim, const char* name, char* buf,
                          size_t cap);
size_t fpe_sim_csv_header(char* buf, size_t cap);

/* Per-cycle event log (present when collect_events was set). */
size_t fpe_sim_event_count(const fpe_sim* sim);
const char* fpe_sim_event(const fpe_sim* sim, size_t index);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FPENGINE_H_ */
