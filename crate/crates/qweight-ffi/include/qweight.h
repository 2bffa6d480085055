#ifndef QWEIGHT_H
#define QWEIGHT_H

/* Generated by cbindgen from qweight-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Distribution engine selector.
typedef enum {
  QW_ENGINE_ANALYTIC = 0,
  QW_ENGINE_CIRCUIT = 1,
} QwEngine;

// Enumerator family selector.
typedef enum {
  QW_FAMILY_A = 0,
  QW_FAMILY_B = 1,
  QW_FAMILY_A_PRIME = 2,
  QW_FAMILY_B_PRIME = 3,
  QW_FAMILY_SHADOW = 4,
} QwFamily;

// Status code of every fallible call.
typedef enum {
  QW_STATUS_OK = 0,
  QW_STATUS_NULL_POINTER = 1,
  QW_STATUS_INVALID_INPUT = 2,
  QW_STATUS_SIZE_CAP_EXCEEDED = 3,
  QW_STATUS_NUMERIC_ERROR = 4,
  QW_STATUS_BUFFER_TOO_SMALL = 5,
} QwStatus;

// A validated stabilizer code and its normalized projector.
typedef struct QwCode QwCode;

// A SWAP-test outcome distribution.
typedef struct QwDistribution QwDistribution;

// The five enumerator families of one state.
typedef struct QwEnumerators QwEnumerators;

// A density matrix together with its subsystem shape.
typedef struct QwState QwState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the message of the most recent error on this thread into `buffer`
// (NUL-terminated, truncated to `capacity`). Returns the full message
// length including the terminator.
uintptr_t qw_last_error(char *buffer, uintptr_t capacity);

// Library version string (static storage, do not free).
const char *qw_version(void);

// Create a state from a named spec: `ghz:n[:d]`, `w:n`, `basis:<bits>`.
QwStatus qw_state_named(const char *spec, QwState **out);

// Load a density matrix from a JSON file
// (`{"dims": [...], "re": [[...]], "im": [[...]]}`).
QwStatus qw_state_from_density_file(const char *path, QwState **out);

void qw_state_free(QwState *state);

// Number of sites, or 0 for a null handle.
uint32_t qw_state_sites(const QwState *state);

// Purity `Tr(rho^2)`, or -1 for a null handle.
double qw_state_purity(const QwState *state);

// Create one of the built-in codes: `five-qubit`, `steane`, `shor`.
QwStatus qw_code_named(const char *name, QwCode **out);

// Parse a stabilizer file (one generator per line, `#` comments).
QwStatus qw_code_from_file(const char *path, QwCode **out);

void qw_code_free(QwCode *code);

// Number of physical qubits, or 0 for a null handle.
uint32_t qw_code_sites(const QwCode *code);

// Code space dimension `K`, or 0 for a null handle.
uint64_t qw_code_dimension(const QwCode *code);

// New state handle holding the normalized projector `rho_Q = Pi/K`.
QwStatus qw_code_state(const QwCode *code, QwState **out);

// Outcome distribution of the parallelized SWAP test of two states.
QwStatus qw_swap_test(const QwState *a, const QwState *b, QwEngine engine, QwDistribution **out);

void qw_distribution_free(QwDistribution *dist);

// Number of ancilla bits, or 0 for a null handle.
uint32_t qw_distribution_sites(const QwDistribution *dist);

// Copy all `2^n` probabilities into `buffer`, indexed by the ancilla
// bitstring read as a binary number (first ancilla = most significant bit).
// `capacity` must be at least `2^n`.
QwStatus qw_distribution_probabilities(const QwDistribution *dist,
                                       double *buffer,
                                       uintptr_t capacity);

// Multinomial sample of the distribution; returns a new distribution of
// empirical frequencies. Deterministic for a fixed seed.
QwStatus qw_distribution_sample(const QwDistribution *dist,
                                uint64_t shots,
                                uint64_t seed,
                                QwDistribution **out);

// Serialize the distribution to JSON. Free the result with
// [`qw_string_free`].
QwStatus qw_distribution_json(const QwDistribution *dist, char **out);

void qw_string_free(char *text);

// All five enumerator families of a state's self SWAP test, with declared
// code dimension `code_dim` (use 1 for pure states).
QwStatus qw_enumerators_compute(const QwState *state, double code_dim, QwEnumerators **out);

void qw_enumerators_free(QwEnumerators *e);

// Number of sites, or 0 for a null handle. Each family has `n + 1` entries.
uint32_t qw_enumerators_sites(const QwEnumerators *e);

// Copy one family (indexed by weight `0..=n`) into `buffer`; `capacity`
// must be at least `n + 1`.
QwStatus qw_enumerators_family(const QwEnumerators *e,
                               QwFamily family,
                               double *buffer,
                               uintptr_t capacity);

// Code distance via the residual scan; writes the distance and a purity
// flag (1 = pure).
QwStatus qw_code_distance(const QwCode *code,
                          double tolerance,
                          uint32_t *out_delta,
                          uint8_t *out_pure);

// k-uniformity of a pure state.
QwStatus qw_state_k_uniformity(const QwState *state, double tolerance, uint32_t *out_k);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWEIGHT_H */
