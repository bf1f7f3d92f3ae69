/* Compiles as C99 against the public header and exercises a minimal flow. */
#include <stdio.h>
#include <string.h>

#include "airq/airq.h"

static int failures = 0;

static void check(int cond, const char* what) {
    if (!cond) {
        fprintf(stderr, "FAIL: %s\n", what);
        ++failures;
    }
}

int main(void) {
    check(strcmp(airq_status_name(AIRQ_OK), "ok") == 0, "status name");

    airq_synth_spec spec;
    airq_synth_spec_init(&spec);
    spec.hours = 300;
    spec.seed = 5;

    airq_series* series = NULL;
    check(airq_series_generate(&spec, &series) == AIRQ_OK, "generate");
    check(airq_series_length(series) == 300, "length");

    airq_method* es = NULL;
    check(airq_method_es(NULL, &es) == AIRQ_OK, "method");

    airq_rolling_spec rolling;
    airq_rolling_spec_init(&rolling);
    rolling.train_len = 96;
    rolling.window_count = 2;
    rolling.horizon = 4;

    airq_report* report = NULL;
    check(airq_rolling_evaluate(series, es, &rolling, &report) == AIRQ_OK, "rolling");
    check(airq_report_horizon(report) == 4, "horizon");
    check(airq_report_rmse(report, 1) >= 0.0, "rmse");

    airq_report_free(report);
    airq_method_free(es);
    airq_series_free(series);

    check(airq_series_generate(NULL, NULL) == AIRQ_ERR_INVALID_ARGUMENT, "null check");
    check(strlen(airq_last_error()) > 0, "last error set");

    if (failures == 0) printf("c smoke test ok\n");
    return failures == 0 ? 0 : 1;
}
