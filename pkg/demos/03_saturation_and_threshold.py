# Where smoothness stops paying off
#
# Two plateaus show up with the min kernel (beta = 2):
#   * targets smoother than s = 2 do not learn faster than n^-4
#   * errors measured in H^p stop converging once p >= 2 - 1/beta = 1.5

from krrlab import ExperimentPlan, brownian_kernel, p_threshold_scan, saturation_scan

kernel = brownian_kernel(10_000)
plan = ExperimentPlan(kernel=kernel, reps=10, experiment_id="demo")

table = saturation_scan(plan, [1.0, 2.0, 3.0])
for e in table.entries:
    print(f"{e['label']:10s} slope {e['slope']:+.2f}  theory {e['theory']:+.2f}")

# Below the threshold there is a rate.  Above it the truncated error keeps
# growing when the truncation m doubles.

table = p_threshold_scan(plan, [1.0, 1.6])
for e in table.entries:
    if e["regime"] == "convergent":
        print(f"p={e['p']:g}: slope {e['slope']:+.2f}  theory {e['theory']:+.2f}")
    else:
        print(f"p={e['p']:g}: m={e['m']} -> {2 * e['m']}: error grows by {e['growth_ratio']:.3f}")
