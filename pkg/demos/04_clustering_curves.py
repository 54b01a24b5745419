"""Cluster curves by the shape of their fitted splines.

Run:  python3 demos/04_clustering_curves.py
"""

import numpy as np

from fkspline import (
    KnotSearchConfig,
    TailRegions,
    adjusted_rand_index,
    benchmark_config,
    elbow_curve,
    fit_free_knot,
    functional_kmeans,
    generate_scenario,
    hierarchical_cluster,
    model_isse,
    rand_index,
    variant_config,
)

# Four groups of noisy curves from known mean functions on [0, 5].
scenario = generate_scenario(benchmark_config(seed=3))
dataset = scenario.dataset
print(f"scenario: {dataset.n_curves} curves, {dataset.n_points} points, "
      f"4 groups of {dataset.n_curves // 4}")

# Fit the whole family once per penalty variant; all curves share the
# searched knots, so each curve is summarized by its coefficient vector.
search = KnotSearchConfig(order=4, max_knots=8, fixed_p=True)
tails = TailRegions.fraction(*dataset.domain, 0.1)
models = {}
for variant in ("fs0", "fs2"):
    model = fit_free_knot(dataset, variant_config(variant), search)
    err = model_isse(model, scenario.truth, tails)
    models[variant] = model
    print(f"\n{variant}: knots {np.round(model.spec.interior_knots, 3)}")
    print(f"  integrated error {err['isse']:8.2f} "
          f"(tails {err['isse_inf']:.3f} / {err['isse_sup']:.3f})")

# Distances between curves are measured on the fitted functions (via the
# basis Gram matrix), not on raw coefficients.  Compare the partition
# against the simulation's true labels.
print("\nagreement with the true grouping (1.0 = perfect):")
for variant, model in models.items():
    km = functional_kmeans(model, 4, seed=3, restarts=20)
    ward = hierarchical_cluster(model, 4, linkage="ward")
    print(f"  {variant}: k-means RI {rand_index(km.partition.labels, scenario.labels):.3f} "
          f"ARI {adjusted_rand_index(km.partition.labels, scenario.labels):.3f} | "
          f"ward ARI {adjusted_rand_index(ward.partition.labels, scenario.labels):.3f}")

# The elbow trace: within-cluster dispersion W(k) for k = 1..8 and the
# curvature-based suggestion.  With these four mean curves two of the
# groups sit close together, so the strongest elbow is at k = 2.
elbow = elbow_curve(models["fs2"], 8, seed=3, restarts=20)
print("\nelbow trace:")
for k, w in enumerate(elbow.w, start=1):
    print(f"  k = {k}: W {w:10.2f}")
print(f"suggested k = {elbow.suggested_k} (low confidence: {elbow.low_confidence})")
