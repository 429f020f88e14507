/* Build: cc trefoil.c -I../include -L../../../target/release -lkhlab_ffi -o trefoil */
#include <stdio.h>
#include "khlab.h"

int main(void) {
    KhDiagram *d = NULL;
    if (khlab_diagram_parse("braid:2:1,1,1", &d) != KH_STATUS_OK) {
        fprintf(stderr, "%s\n", khlab_last_error());
        return 1;
    }
    int64_t s = 0;
    KhStatus st = khlab_s_invariant(d, "fp:2/1/0", &s);
    if (st != KH_STATUS_OK) {
        fprintf(stderr, "%s\n", khlab_last_error());
        khlab_diagram_free(d);
        return 1;
    }
    printf("s = %lld\n", (long long)s);

    KhHomology *h = NULL;
    if (khlab_homology(d, "z/0/0", true, &h) == KH_STATUS_OK) {
        for (size_t i = 0; i < khlab_homology_degree_count(h); i++) {
            int64_t deg;
            size_t rank, torsion;
            khlab_homology_degree(h, i, &deg, &rank, &torsion);
            printf("degree %lld: rank %zu, %zu torsion summands\n", (long long)deg, rank, torsion);
        }
        khlab_homology_free(h);
    }
    if (khlab_s_invariant(d, "q/0", &s) != KH_STATUS_OK) {
        printf("error: %s\n", khlab_last_error());
    }
    khlab_diagram_free(d);
    return 0;
}
