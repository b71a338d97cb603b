"""Evaluate the utility bounds for one synthetic dataset.

The additive-noise bound only exists when kappa * Delta < 1, which for
uniform data needs a generous budget. The projection bound always exists
but carries unknown sketching constants, reported as unresolved.
"""

from privreg import ConditionViolated, additive_noise_bound, generate_random_dataset, projection_bound
from privreg import ridge_relative_bound, spectral_summary

ds = generate_random_dataset(1000, 20, seed=1)
ss = spectral_summary(ds)
print(f"kappa={ss.kappa:.3f}  r={ss.r:.3f}  sigma_min={ss.sigma_min:.2f}")

for eps in (0.1, 0.5, 1.0, 2.0, 4.0, 8.0):
    try:
        rep = additive_noise_bound(ss, eps, ds.n, ds.d)
        an = f"eta <= {rep.eta_bound:8.3f} w.p. >= {rep.probability_lower_bound:.3f}"
    except ConditionViolated as exc:
        an = f"undefined ({exc})"
    rp = projection_bound(ss, eps, 200, delta_free=0.3, d=ds.d)
    print(f"eps={eps:<4} additive: {an}")
    print(f"         projection: eta <= {rp.eta_bound:8.3f} (lambda = {rp.intermediates['sigma_sq']:.3g}, "
          f"unresolved {','.join(rp.unresolved)})")

# The projection release is a sketched ridge problem with lambda = sigma_RP^2.
print("ridge residual ratio bound at lambda=50:", ridge_relative_bound(ss.sigma_min, 50.0, ss.r))
