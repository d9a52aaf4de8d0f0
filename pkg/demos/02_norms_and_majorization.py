"""The unitarily invariant norm family and the majorization predicates
that certify "for all unitarily invariant norms" at once."""

import numpy as np

from matsharp import (
    EnsembleSpec,
    NormSpec,
    default_norm_specs,
    fan_dominance,
    geometric_mean,
    log_majorization,
    matrix_power_psd,
    random_pd,
    singular_values,
    ui_norm,
    weak_majorization,
)

m = np.array([[3.0, 1.0, 0.0], [0.0, 2.0, 1.0], [1.0, 0.0, 1.0]])
print("singular values:", np.array2string(singular_values(m), precision=4))
for text in ("schatten:1", "schatten:2", "schatten:inf", "kyfan:2", "operator", "trace"):
    print(f"  {text:13s} = {ui_norm(m, NormSpec.parse(text)):.6f}")

print("\nweak majorization compares prefix sums:")
print("  (2,2) vs (3,1):", weak_majorization([2, 2], [3, 1]))
print("  (3,1) vs (2,2):", weak_majorization([3, 1], [2, 2]))

a = random_pd(EnsembleSpec(dim=4, seed=7))
b = random_pd(EnsembleSpec(dim=4, seed=8))
mean = geometric_mean(a, b, 0.5)
product = matrix_power_psd(a, 0.5) @ matrix_power_psd(b, 0.5)

print("\nthe mean is log-majorized by the half-power product:")
print("  log_majorization:", log_majorization(mean, product))
print("  fan_dominance   :", fan_dominance(mean, product))

print("\nfan dominance certifies every norm in the family:")
for spec in default_norm_specs(4):
    print(f"  {str(spec):13s} {ui_norm(mean, spec):10.6f} <= {ui_norm(product, spec):10.6f}")
