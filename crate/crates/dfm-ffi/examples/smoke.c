/* Minimal consumer of the C ABI: build the staticlib, then
 *   cc smoke.c -I../include -L../../../target/release -ldfm_ffi -lpthread -lm -ldl
 */
#include <stdio.h>
#include <string.h>
#include "dfm.h"

int main(void) {
    DfmEngine *engine = dfm_engine_new();
    char *value = NULL;

    if (dfm_moment_value(engine, 2, 4, 0, &value) != DFM_STATUS_OK) {
        fprintf(stderr, "moment failed: %s\n", dfm_last_error(engine));
        return 1;
    }
    printf("variance of the squared-autocorrelation sum at length 4: %s\n", value);
    int ok = strcmp(value, "96/1") == 0;
    dfm_string_free(value);

    char *skew = NULL;
    if (dfm_standardized_moment(engine, 3, 5, 10, &skew) != DFM_STATUS_OK) {
        fprintf(stderr, "standardized failed: %s\n", dfm_last_error(engine));
        return 1;
    }
    printf("skewness at length 5: %s\n", skew);
    ok = ok && strcmp(skew, "1.7812500000") == 0;
    dfm_string_free(skew);

    dfm_engine_free(engine);
    if (!ok) {
        fprintf(stderr, "unexpected values\n");
        return 1;
    }
    printf("ok\n");
    return 0;
}
