/* Minimal C consumer: code distances and a GHZ SWAP test.
 *
 * Build (from the workspace root):
 *   cargo build --release -p qweight-ffi
 *   cc crates/qweight-ffi/examples/distance.c \
 *      -Icrates/qweight-ffi/include \
 *      -Ltarget/release -lqweight_ffi -lm -o distance
 *   LD_LIBRARY_PATH=target/release ./distance
 */
#include <stdio.h>
#include <stdlib.h>

#include "qweight.h"

static void fail(const char *what) {
    char message[256];
    qw_last_error(message, sizeof message);
    fprintf(stderr, "%s: %s\n", what, message);
    exit(1);
}

int main(void) {
    const char *codes[] = {"five-qubit", "steane", "shor"};
    for (int i = 0; i < 3; i++) {
        QwCode *code = NULL;
        if (qw_code_named(codes[i], &code) != QW_STATUS_OK) fail("qw_code_named");
        uint32_t delta = 0;
        uint8_t pure = 0;
        if (qw_code_distance(code, 1e-9, &delta, &pure) != QW_STATUS_OK)
            fail("qw_code_distance");
        printf("%s: ((%u, %llu, %u))_2, pure = %s\n", codes[i], qw_code_sites(code),
               (unsigned long long)qw_code_dimension(code), delta, pure ? "yes" : "no");
        qw_code_free(code);
    }

    QwState *ghz = NULL;
    if (qw_state_named("ghz:4", &ghz) != QW_STATUS_OK) fail("qw_state_named");
    QwDistribution *dist = NULL;
    if (qw_swap_test(ghz, ghz, QW_ENGINE_ANALYTIC, &dist) != QW_STATUS_OK)
        fail("qw_swap_test");
    double p[16];
    if (qw_distribution_probabilities(dist, p, 16) != QW_STATUS_OK)
        fail("qw_distribution_probabilities");
    printf("GHZ_4 self test: p(0000) = %.6f, p(1111) = %.6f\n", p[0], p[15]);

    uint32_t k = 0;
    if (qw_state_k_uniformity(ghz, 1e-9, &k) != QW_STATUS_OK)
        fail("qw_state_k_uniformity");
    printf("GHZ_4 is %u-uniform\n", k);

    qw_distribution_free(dist);
    qw_state_free(ghz);
    return 0;
}
