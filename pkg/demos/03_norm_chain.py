"""The four-term norm chain for one PD pair, scanned over (t, r, s).

The first step compares powering the mean against the mean of the
powers.  It holds for r <= 1 and reverses for r > 1 (powering the
arguments log-majorizes powering the mean), which the scan makes
visible; the remaining steps hold for every r > 0.
"""

from matsharp import EnsembleSpec, NormSpec, check_lemma_chain, random_pd

a = random_pd(EnsembleSpec(dim=4, seed=21, condition_target=100.0))
b = random_pd(EnsembleSpec(dim=4, seed=22, condition_target=100.0))

report = check_lemma_chain(a, b, 0.5, 1.0, 1.0, NormSpec.trace())
print("terms at t=0.5, r=1, s=1 (trace norm):")
for label, value in report.terms:
    print(f"  {value:12.6f}  {label}")
print("margins:", ["%.3e" % m for m in report.margins], "holds:", report.holds)

print("\nminimum margin of each step over the (t, s) grid, by r:")
print(f"{'r':>5s} {'step1':>11s} {'step2':>11s} {'step3':>11s}")
for r in (0.5, 1.0, 1.5, 2.0, 3.0):
    worst = [float("inf")] * 3
    for t in (0.1, 0.25, 0.5, 0.75, 0.9):
        for s in (0.5, 1.0, 2.0):
            rep = check_lemma_chain(a, b, t, r, s, NormSpec.trace())
            worst = [min(w, m) for w, m in zip(worst, rep.margins)]
    flag = "  <- first step reversed" if worst[0] < -1e-9 else ""
    print(f"{r:5.1f} {worst[0]:11.3e} {worst[1]:11.3e} {worst[2]:11.3e}{flag}")
