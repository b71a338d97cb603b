"""Relative error against n and against epsilon, desk-sized.

Projection dimensions follow the log / linear / full schedules with base
200 and k = n / 1000. Trial i of every sweep uses seed base_seed + i.
"""

from privreg import ScheduleKind, sweep_epsilon, sweep_n

scheds = [ScheduleKind(s, 200) for s in ("log", "linear", "full")]

print("relative error vs n (d=100, eps=0.5)")
for r in sweep_n(100, 0.5, range(1, 4), scheds, trials=3, base_seed=0):
    print(f"  n={r.n:5d} {r.schedule:7s} n'={r.n_prime or '-':>5} eta={r.eta_mean:7.3f} +- {r.eta_std:.3f}")

print("relative error vs eps (n=2000, d=100)")
for r in sweep_epsilon(2000, 100, [0.1, 0.5, 2.0, 4.0], scheds, trials=3, base_seed=0, k=2):
    print(f"  eps={r.epsilon:<4} {r.schedule:7s} eta={r.eta_mean:7.3f}")
# Small budgets favour short projections; large budgets favour the full one.
