#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "partition_lab/partition_lab.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static const char* kSquare = "{\"shape\":\"rectangle\",\"params\":{\"width\":1,\"height\":1}}";

int main(void) {
  plab_domain* d = NULL;
  EXPECT(plab_domain_create(kSquare, 32, &d) == PLAB_OK);
  if (!d) return 1;

  size_t inside = 0;
  EXPECT(plab_domain_cell_count(d, &inside) == PLAB_OK);
  EXPECT(inside == 31 * 31);

  double area = 0, len = 0, r = 0;
  int chi = -1;
  EXPECT(plab_domain_measure(d, &area, &len, &r, &chi) == PLAB_OK);
  EXPECT(fabs(area - 1.0) < 0.1);
  EXPECT(chi == 1);

  double ev[3];
  EXPECT(plab_eigenvalues(d, 3, 1e-9, ev) == PLAB_OK);
  const double pi = 3.14159265358979323846;
  EXPECT(fabs(ev[0] - 2 * pi * pi) / (2 * pi * pi) < 0.01);
  EXPECT(fabs(ev[1] - ev[2]) < 1e-6);

  plab_partition* p = NULL;
  EXPECT(plab_partition_nodal_product(d, 2, 1, &p) == PLAB_OK);
  EXPECT(p && plab_partition_k(p) == 2);
  char* json = NULL;
  EXPECT(plab_partition_audit_json(p, 0.05, &json) == PLAB_OK);
  EXPECT(json && strstr(json, "bruning_gromes") != NULL);
  plab_string_free(json);
  char* svg = NULL;
  EXPECT(plab_partition_svg(p, &svg) == PLAB_OK);
  EXPECT(svg && strncmp(svg, "<svg", 4) == 0);
  plab_string_free(svg);
  plab_partition_destroy(p);

  EXPECT(plab_bound_count() == 22);
  EXPECT(strcmp(plab_bound_name(0), "faber_krahn") == 0);
  EXPECT(plab_bound_name(99) == NULL);

  plab_domain* bad = NULL;
  EXPECT(plab_domain_create("{not json", 32, &bad) == PLAB_INVALID_CONFIG);
  EXPECT(bad == NULL);
  EXPECT(strlen(plab_last_error()) > 0);
  EXPECT(plab_domain_create(kSquare, 32, NULL) == PLAB_INVALID_ARGUMENT);

  int code = -1;
  char* msg = NULL;
  EXPECT(plab_run("no_such_config.json", NULL, -1, 1, &code, &msg) == PLAB_OK);
  EXPECT(code == 2);
  plab_string_free(msg);

  plab_domain_destroy(d);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
