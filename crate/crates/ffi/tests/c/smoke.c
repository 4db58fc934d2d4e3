#include <math.h>
#include <stdio.h>
#include "pseudometric.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    const double tri[9] = {0, 1, 3, 1, 0, 1, 3, 1, 0};
    PmMatrix *bad = NULL;
    CHECK(pm_matrix_new(3, tri, &bad) == PM_STATUS_OK);
    bool pseudo = true, metric = true;
    size_t count = 0;
    CHECK(pm_validate(bad, pm_default_tolerance(), &pseudo, &metric, &count) == PM_STATUS_OK);
    CHECK(!pseudo && !metric && count == 1);
    CHECK(pm_perturb(bad, 0, 1, 1.0, 1e-12, NULL) == PM_STATUS_DOMAIN);
    CHECK(pm_last_error_message() != NULL);
    pm_matrix_free(bad);

    PmMatrix *d = NULL;
    CHECK(pm_sample(5, 7, false, &d) == PM_STATUS_OK);
    size_t n = pm_matrix_size(d);
    CHECK(n == 5);
    double closed[9];
    double half_open = -1.0;
    CHECK(pm_chart_encode(d, 1e-9, closed, 9, &half_open) == PM_STATUS_OK);
    CHECK(half_open >= 0.0 && half_open < 1.0);
    PmMatrix *back = NULL;
    CHECK(pm_chart_decode(5, closed, 9, half_open, &back) == PM_STATUS_OK);
    double dist = 1.0;
    CHECK(pm_sup_distance(d, back, &dist) == PM_STATUS_OK);
    CHECK(dist <= 1e-9);

    PmMatrix *rho = NULL;
    CHECK(pm_densify(d, 0.5, NULL, 1e-9, &rho) == PM_STATUS_OK);
    CHECK(pm_validate(rho, 1e-9, &pseudo, &metric, NULL) == PM_STATUS_OK);
    CHECK(metric);

    double c = 0, h = 0;
    CHECK(pm_square_pack(0.0, 0.0, &c, &h) == PM_STATUS_OK);
    CHECK(fabs(c - 0.5) < 1e-12 && fabs(h) < 1e-12);
    CHECK(pm_square_pack(1.0, 0.0, &c, &h) == PM_STATUS_DOMAIN);

    pm_matrix_free(rho);
    pm_matrix_free(back);
    pm_matrix_free(d);
    printf("ok\n");
    return 0;
}
