#include <stdio.h>
#include "secant.h"

int main(void) {
    SecantConfig *cfg = secant_config_new(SECANT_BACKEND_EXACT, 7);
    SecantRecord rec;
    if (secant_classify_cell(cfg, 2, 6, 3, &rec) != SECANT_STATUS_OK) {
        fprintf(stderr, "%s\n", secant_last_error());
        return 1;
    }
    printf("dim=%zu defect=%zu status=%d\n", rec.computed_dim, rec.defect, (int)rec.status);
    if (secant_config_set_prime(cfg, 101) != SECANT_STATUS_INVALID_CONFIG) {
        return 2;
    }
    secant_config_free(cfg);
    return 0;
}
