#include <stdio.h>
#include <string.h>

#include "awarekit.h"

static int fail(const char *what) {
    const char *e = awk_last_error();
    fprintf(stderr, "%s: %s\n", what, e ? e : "(no message)");
    return 1;
}

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: smoke <fig1L.model>\n");
        return 2;
    }
    AwkModel *m = NULL;
    if (awk_model_load(argv[1], &m) != AWK_STATUS_OK) return fail("load");
    AwkTruth t;
    if (awk_model_check(m, "a_1 q", "pq:pq", &t) != AWK_STATUS_OK) return fail("check");
    if (t != AWK_TRUTH_FALSE) return fail("a_1 q should be false");
    size_t n = 0;
    awk_model_state_count(m, &n);
    AwkModel *k = NULL;
    if (awk_model_transform(m, "fh", false, &k) != AWK_STATUS_OK) return fail("transform");
    size_t bad = 1;
    if (awk_equivalence_check(m, k, "fh", 2, &bad) != AWK_STATUS_OK || bad != 0) return fail("equiv");
    if (awk_model_check(m, "a_1 (", "pq:pq", &t) != AWK_STATUS_INVALID_INPUT) return fail("syntax error expected");
    printf("%s %zu states ok\n", awk_model_family(m), n);
    awk_model_free(k);
    awk_model_free(m);
    return 0;
}
