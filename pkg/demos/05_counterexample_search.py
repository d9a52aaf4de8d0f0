"""Hill-descent search for violations of the printed main chain away
from t = 1/2, with the violating instance serialized and re-checked."""

from matsharp import CampaignConfig, search_counterexample
from matsharp.campaign import instance_from_obj, reevaluate_search_instance

cfg = CampaignConfig.from_obj({
    "inequality-id": "main_theorem",
    "dims": [3],
    "m-values": [2],
    "t-grid": [0.1],
    "r-grid": [1.0],
    "norm-specs": ["schatten:2"],
    "printed-form": True,
    "root-seed": 7,
})

report = search_counterexample(cfg, 2000)
print(f"steps: {report.steps}, evaluations: {report.evaluations}, "
      f"restarts: {report.restarts}")
print(f"best margin: {report.best_margin:.6e}")
print(f"violation found: {report.violation_found}")

margin, check = reevaluate_search_instance(cfg, report)
print(f"\nre-evaluating the serialized instance reproduces the margin: "
      f"{margin:.6e} (difference {abs(margin - report.best_margin):.2e})")

a_list, b_list = instance_from_obj(report.best_instance)
print(f"instance: {len(a_list)} pairs of {a_list[0].shape[0]}x{a_list[0].shape[0]} matrices")
print("terms at the violating instance:")
for label, value in check.terms:
    print(f"  {value:14.6f}  {label}")
