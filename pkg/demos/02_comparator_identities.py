"""Run the comparator verification suites at desk scale and print verdicts.

Each suite samples distributions under the factorization the comparison
requires, evaluates both sides of the claimed identities, and projects the
regions to check containment.  Everything is reproducible from the seeds
shown in the reports.
"""

from cifc.verify import (
    check_cc_reduction,
    check_devroye_identities,
    check_jiang_containment,
    check_maric_wlog,
    sampled_region_containment,
)
from cifc.channel import random_channel


def show(report):
    flag = "ok " if report.ok else "FAIL"
    print(f"[{flag}] suite {report.suite}")
    for c in report.checks:
        print(f"    {c.check_id}: seeds={c.seeds_run} max|v|={c.max_abs_violation:.2e}"
              + (f" details={c.details}" if c.details else ""))


print("equation-by-equation comparison of the enlarged regions")
show(check_devroye_identities(samples=60, seed=0))

print("\nmerged-satellite reduction and pinned-region equality")
show(check_cc_reduction(samples=60, seed=0, proj_instances=30))

print("\nindependent-common-messages comparator")
show(check_jiang_containment(samples=60, seed=0, containment_instances=30))

print("\nsplit-primary-input merge")
show(check_maric_wlog(samples=60, seed=0))

print("\nsampled containment: enlarged comparator inside restricted unified region")
show(sampled_region_containment("RTD_IN", "DMT_OUT", channel=random_channel(7),
                                samples=40, seed=0))
